"""Connections, closed-form Chern-Simons actions and the residue-trace engine.

Two independent routes compute the action of ``A = sum a_i [D, b_i]``:

* ``cs_action_closed`` evaluates the quartic coefficient sums in
  ``x_pq = abar_pq b_pq`` for a single pair, with ``abar_pq`` read as the
  "ba" coefficient ``a_{-p,-q}``.
* ``cs_action_engine`` builds the components ``A_k``, contracts with the
  Levi-Civita symbol and integrates the zero mode with the residue weight.

``cs_action_cocycle`` is a third, matrix-valued route through the cubic
cochain normalization; it lands on exactly half the engine value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgElement,
    ContextMismatch,
    DeformationContext,
    TrigCoeff,
    coefficient_functions,
    coefficients,
    generators,
    is_coefficient_selfadjoint,
    mul,
    star,
)
from .spectral import nc_integral
from .spin import (
    SpinMatrix,
    component_symbols,
    derivative_table,
    epsilon_contract,
    epsilon_cubic,
    get_dirac,
)


class SelfAdjointnessError(ValueError):
    pass


@dataclass
class Connection:
    pairs: list[tuple[AlgElement, AlgElement]]
    ctx: DeformationContext
    self_adjoint: bool = False
    _components: dict = field(default_factory=dict, repr=False)

    def components(self, D):
        D = get_dirac(D)
        if D.name not in self._components:
            comps = [AlgElement.zero(self.ctx)] * 3
            for a, b in self.pairs:
                part = component_symbols(D, a, b)
                comps = [c + p for c, p in zip(comps, part)]
            self._components[D.name] = tuple(comps)
        return self._components[D.name]

    def matrix(self, D) -> SpinMatrix:
        return SpinMatrix.from_components(self.components(D))

    def to_json(self) -> dict:
        return {
            "theta": self.ctx.theta,
            "pairs": [{"a": a.to_json(), "b": b.to_json()} for a, b in self.pairs],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data, ctx: DeformationContext | None = None) -> "Connection":
        if not isinstance(data, dict) or "pairs" not in data or "theta" not in data:
            raise ValueError("connection JSON needs 'theta' and 'pairs'")
        if ctx is None:
            ctx = DeformationContext(float(data["theta"]))
        elif not np.isclose(float(data["theta"]), ctx.theta, rtol=0, atol=1e-15):
            raise ContextMismatch(
                f"connection theta {data['theta']} differs from context theta {ctx.theta}"
            )
        pairs = []
        for item in data["pairs"]:
            a = AlgElement.from_json({"theta": data["theta"], **item["a"]}, ctx)
            b = AlgElement.from_json({"theta": data["theta"], **item["b"]}, ctx)
            pairs.append((a, b))
        return make_connection(pairs, ctx=ctx)


def make_connection(pairs, D=None, ctx: DeformationContext | None = None) -> Connection:
    """Bundle ``(a, b)`` pairs; ``D`` (optional) precomputes its components."""
    pairs = list(pairs)
    if ctx is None:
        if not pairs:
            raise ValueError("an empty connection needs an explicit context")
        ctx = pairs[0][0].ctx
    for a, b in pairs:
        for x in (a, b):
            if not x.ctx.same(ctx):
                raise ContextMismatch("all connection entries must share one context")
    flag = all(is_coefficient_selfadjoint(a, "ba") for a, _ in pairs)
    conn = Connection(pairs, ctx, flag)
    if D is not None:
        conn.components(D)
    return conn


# ---------------------------------------------------------------------------
# closed forms


def _kernel(name: str, ctx, left, right) -> TrigCoeff:
    (p1, q1), (p, q) = left, right
    if name == "d1":
        return TrigCoeff.const(-2 * ctx.phase(-q) * (p1 + q1) * (p + q))
    if name == "d2":
        return TrigCoeff.monomial(0, -2, -2.0 * p1 * q) + TrigCoeff.monomial(-2, 0, -2.0 * p * q1)
    return TrigCoeff.monomial(-2, 0, -2.0 * (p1 + q1) * p) + TrigCoeff.monomial(
        0, -2, -2.0 * (p1 + q1) * q
    )


def composite_modes(a: AlgElement, b: AlgElement) -> dict[tuple[int, int], complex]:
    """``x_pq = a_{-p,-q} b_pq`` with ``a`` in "ba" and ``b`` in "ab" coefficients."""
    ac = coefficients(a, "ba")
    bc = coefficients(b, "ab")
    out = {}
    for key, bv in bc.items():
        av = ac.get((-key[0], -key[1]), 0)
        if av != 0:
            out[key] = av * bv
    return out


def cs_action_closed(D, a: AlgElement, b: AlgElement) -> TrigCoeff:
    """Closed-form action of the single pair ``A = a [D, b]``.

    ``-2 sum K(p', p) x_{p'} x_p`` over ordered pairs of modes, with
    ``K = conj(lam)^q (p'+q')(p+q)`` for d1,
    ``K = p' q csc^2 + p q' sec^2`` for d2 and
    ``K = (p'+q')(p sec^2 + q csc^2)`` for d3.
    """
    D = get_dirac(D)
    if not is_coefficient_selfadjoint(a, "ba"):
        bad = {
            k: v
            for k, v in coefficient_functions(a, "ba").items()
            if not coefficient_functions(a, "ba")
            .get((-k[0], -k[1]), TrigCoeff())
            .function_equal(v.conj(), a.ctx)
        }
        raise SelfAdjointnessError(
            f"a violates a_(-m,-n) = conj(a_mn) on modes {sorted(bad)}"
        )
    x = composite_modes(a, b)
    total = TrigCoeff()
    for left, xl in x.items():
        for right, xr in x.items():
            # the -2 lives in _kernel
            total = total + _kernel(D.name, a.ctx, left, right) * (xl * xr)
    return total


def cs_action_pairing(D, a: AlgElement, b: AlgElement) -> TrigCoeff:
    """Engine-consistent quartic form for a single pair on separated supports.

    Off-diagonal pairs count twice because the zero mode also collects the
    words ``a_{-P2} b_{P1} a_{-P1} b_{P2}``; d2 and d3 carry an overall 1/2.
    Valid when no sum of two active ``b`` modes equals another such sum or a
    mode of ``a``; the engine is authoritative otherwise.
    """
    D = get_dirac(D)
    x = composite_modes(a, b)
    total = TrigCoeff()
    for left, xl in x.items():
        for right, xr in x.items():
            mult = 1.0 if left == right else 2.0
            total = total + _kernel(D.name, a.ctx, left, right) * (mult * xl * xr)
    return total * (1.0 if D.name == "d1" else 0.5)


# ---------------------------------------------------------------------------
# engine


@dataclass
class EngineParts:
    quadratic: AlgElement  # eps A dA
    cubic: AlgElement  # eps A A A
    value: TrigCoeff


def cs_engine_parts(D, conn: Connection) -> EngineParts:
    D = get_dirac(D)
    A = conn.components(D)
    dA = derivative_table(D, A)
    quad = epsilon_contract(A, dA)
    cubic = epsilon_cubic(A)
    integrand = quad.scale(3) + cubic.scale(2)
    value = nc_integral(D, integrand, 3) * (1j / 6)
    return EngineParts(quad, cubic, value)


def cs_action_engine(D, conn: Connection) -> TrigCoeff:
    """``(i/6) oint eps^{ijk} (3 A_i d_j A_k + 2 A_i A_j A_k) |D|^-3``."""
    return cs_engine_parts(D, conn).value


def _matrix_derivative(D, A) -> SpinMatrix:
    # dA = sum_{j,k} d_j(A_k) sigma_j sigma_k
    D = get_dirac(D)
    ctx = A[0].ctx
    out = SpinMatrix.zero(ctx)
    for j in range(3):
        sj = SpinMatrix.pauli(j, ctx)
        for k in range(3):
            out = out + (sj * SpinMatrix.pauli(k, ctx)) * D.d(j, A[k])
    return out


def cs_action_cocycle(D, conn: Connection) -> TrigCoeff:
    """``3 phi_3``-normalized route: ``(1/4) oint tr(A dA + (2/3) A^3) |D|^-3``
    with matrix products and the normalized spin trace."""
    D = get_dirac(D)
    A = conn.components(D)
    Am = SpinMatrix.from_components(A)
    word = Am * _matrix_derivative(D, A) + (Am * Am * Am).scale(2 / 3)
    return nc_integral(D, word, 3) * 0.25


# ---------------------------------------------------------------------------
# gauge


def is_unitary(u: AlgElement, tol: float | None = None) -> bool:
    one = AlgElement.scalar(1.0, u.ctx)
    return mul(star(u), u).function_equal(one, tol) and mul(u, star(u)).function_equal(one, tol)


def gauge_transform(conn: Connection, u: AlgElement, D=None) -> Connection:
    """Pairs realizing ``u* A u + u* [D, u]`` through bilinearity in the pairs."""
    if not u.ctx.same(conn.ctx):
        raise ContextMismatch("unitary and connection live in different contexts")
    if not is_unitary(u):
        raise ValueError("gauge element is not unitary")
    us = star(u)
    pairs = []
    for a, b in conn.pairs:
        pairs.append((mul(us, a), mul(b, u)))
        pairs.append((-mul(mul(us, a), b), u))
    pairs.append((us, u))
    return make_connection(pairs, D, conn.ctx)


# ---------------------------------------------------------------------------
# reports


def example_connection(ctx: DeformationContext, a10: complex = 1.0, b10: complex = 1.0):
    """``a = a10 alpha + conj(a10) alpha^-1``, ``b = b10 alpha``."""
    g = generators(ctx)
    a = g["alpha"].scale(a10) + AlgElement.ba_monomial(-1, 0, ctx, np.conj(a10))
    b = g["alpha"].scale(b10)
    return a, b


def readout(tc: TrigCoeff, ctx: DeformationContext, psi="average"):
    """A number from a TrigCoeff: the constant value, a point value, or the
    Haar average ``2 int f cos sin dpsi``."""
    from .algebra import haar_state

    if psi == "average":
        # 2 int c^(a+1) s^(b+1) dpsi diverges once an exponent reaches -1
        if any(a <= -2 or b <= -2 for a, b in tc.terms):
            return None
        return haar_state(AlgElement({(0, 0): tc}, ctx) if tc else AlgElement.zero(ctx))
    return complex(tc(float(psi)))


def action_report(D, conn: Connection, psi="average") -> dict:
    D = get_dirac(D)
    engine = cs_action_engine(D, conn)
    report = {"dirac": D.name, "engine_value": engine.to_json(), "psi": psi}
    if len(conn.pairs) == 1:
        a, b = conn.pairs[0]
        closed = cs_action_closed(D, a, b)
    else:
        # closed forms cover single pairs only
        closed = engine
    report["value"] = closed.to_json()
    val, eng = readout(closed, conn.ctx, psi), readout(engine, conn.ctx, psi)
    report["value_number"] = _pair(val)
    report["engine_number"] = _pair(eng)
    report["delta"] = None if val is None else abs(complex(val) - complex(eng))
    return report


def _pair(z):
    if z is None:
        return None
    z = complex(z)
    return [z.real, z.imag]
