"""Symbolic calculus on the theta-deformed three-sphere: algebra, Dirac
operators, residue traces, Chern-Simons actions and partition products."""

from .algebra import (
    AlgElement,
    ContextMismatch,
    DeformationContext,
    TrigCoeff,
    coefficients,
    delta1,
    delta2,
    dpsi,
    from_coefficients,
    generators,
    haar_state,
    mul,
    star,
    zero_mode,
)
from .chern_simons import (
    Connection,
    cs_action_closed,
    cs_action_cocycle,
    cs_action_engine,
    gauge_transform,
    make_connection,
)
from .partition import (
    classical_partition,
    identity_chain,
    partition_closed_truncated,
    partition_modewise,
)
from .spectral import (
    dimension_spectrum_probe,
    eigenspinor,
    hurwitz_zeta,
    nc_integral,
    peter_weyl,
    phi1,
    phi3,
    spectrum,
    tau_k,
)
from .spin import SpinMatrix, SpinorPair, apply_dirac, commutator, get_dirac

__all__ = [name for name in dir() if not name.startswith("_")]
