"""Pauli algebra, the three Dirac operators as symbol maps, and their commutators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .algebra import (
    COT,
    CSC,
    SEC,
    TAN,
    AlgElement,
    TrigCoeff,
    delta1,
    delta2,
    dpsi,
    generators,
    mul,
)

EPS = {
    (0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
    (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1,
}

_PAULI = (
    ((0, 1), (1, 0)),
    ((0, -1j), (1j, 0)),
    ((1, 0), (0, -1)),
)


class SpinMatrix:
    """2x2 matrix of algebra elements."""

    __slots__ = ("entries", "ctx")

    def __init__(self, entries):
        self.entries = tuple(tuple(row) for row in entries)
        self.ctx = self.entries[0][0].ctx

    @classmethod
    def zero(cls, ctx):
        z = AlgElement.zero(ctx)
        return cls(((z, z), (z, z)))

    @classmethod
    def identity(cls, ctx, value=1.0):
        one = AlgElement.scalar(value, ctx)
        z = AlgElement.zero(ctx)
        return cls(((one, z), (z, one)))

    @classmethod
    def pauli(cls, k: int, ctx):
        """sigma_{k+1} for k in {0, 1, 2}."""
        return cls(
            [[AlgElement.scalar(_PAULI[k][r][c], ctx) for c in range(2)] for r in range(2)]
        )

    @classmethod
    def from_components(cls, comps):
        """``sum_k comps[k] sigma_{k+1}``."""
        x, y, z = comps
        return cls(((z, x - y * 1j), (x + y * 1j, -z)))

    def __getitem__(self, idx):
        r, c = idx
        return self.entries[r][c]

    def __add__(self, other):
        return SpinMatrix(
            [[self[r, c] + other[r, c] for c in range(2)] for r in range(2)]
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor):
        return SpinMatrix([[self[r, c].scale(factor) for c in range(2)] for r in range(2)])

    def __mul__(self, other):
        if isinstance(other, SpinMatrix):
            return SpinMatrix(
                [
                    [mul(self[r, 0], other[0, c]) + mul(self[r, 1], other[1, c]) for c in range(2)]
                    for r in range(2)
                ]
            )
        if isinstance(other, AlgElement):
            return SpinMatrix([[mul(self[r, c], other) for c in range(2)] for r in range(2)])
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, AlgElement):
            return SpinMatrix([[mul(other, self[r, c]) for c in range(2)] for r in range(2)])
        return self.scale(other)

    def trace(self) -> AlgElement:
        return self[0, 0] + self[1, 1]

    def components(self):
        """Inverse of :meth:`from_components` for traceless matrices."""
        x = (self[0, 1] + self[1, 0]).scale(0.5)
        y = (self[1, 0] - self[0, 1]).scale(-0.5j)
        z = (self[0, 0] - self[1, 1]).scale(0.5)
        return x, y, z

    def function_equal(self, other, tol=None) -> bool:
        return all(
            self[r, c].function_equal(other[r, c], tol) for r in range(2) for c in range(2)
        )

    def map(self, fn):
        return SpinMatrix([[fn(self[r, c]) for c in range(2)] for r in range(2)])

    def to_json(self):
        return {
            "entries": [
                {"row": r, "col": c, "element": self[r, c].to_json()}
                for r in range(2)
                for c in range(2)
            ]
        }

    @classmethod
    def from_json(cls, data, ctx=None):
        grid = [[None, None], [None, None]]
        for item in data["entries"]:
            grid[item["row"]][item["col"]] = AlgElement.from_json(item["element"], ctx)
            ctx = grid[item["row"]][item["col"]].ctx
        return cls(grid)

    def __repr__(self):
        return f"SpinMatrix({self.entries!r})"


@dataclass(frozen=True)
class SpinorPair:
    upper: AlgElement
    lower: AlgElement

    def scale(self, factor):
        return SpinorPair(self.upper.scale(factor), self.lower.scale(factor))

    def __add__(self, other):
        return SpinorPair(self.upper + other.upper, self.lower + other.lower)

    def __sub__(self, other):
        return self + other.scale(-1)

    def function_equal(self, other, tol=None):
        return self.upper.function_equal(other.upper, tol) and self.lower.function_equal(
            other.lower, tol
        )

    def is_zero(self):
        return self.upper.is_zero() and self.lower.is_zero()


# ---------------------------------------------------------------------------
# Dirac operators


@dataclass(frozen=True)
class DiracChoice:
    """Symbol data of one Dirac operator.

    ``derivations[k]`` maps ``a`` to the coefficient of ``sigma_{k+1}`` in
    ``[D, a]``.  ``potential`` holds zeroth-order multiplication terms of the
    operator itself (per Pauli index); they drop out of commutators.
    """

    name: str
    derivations: tuple[Callable[[AlgElement], AlgElement], ...]
    laplacian: Callable[[AlgElement], AlgElement]
    shift: float = 0.0
    potential: tuple[TrigCoeff | None, ...] = (None, None, None)

    def d(self, k: int, x: AlgElement) -> AlgElement:
        return self.derivations[k](x)


def _d1_inner_plus(x):
    return dpsi(x) + TAN * delta1(x) - COT * delta2(x)


def _d1_inner_minus(x):
    return dpsi(x) - TAN * delta1(x) + COT * delta2(x)


def d1_plus(x: AlgElement) -> AlgElement:
    """``L(u)R(v)[d_psi + tan delta1 - cot delta2]`` applied inside the algebra."""
    g = generators(x.ctx)
    return mul(mul(g["u"], _d1_inner_plus(x)), g["v"])


def d1_minus(x: AlgElement) -> AlgElement:
    g = generators(x.ctx)
    return -mul(mul(g["u*"], _d1_inner_minus(x)), g["v*"])


def _d1_three(x):
    return -(delta1(x) + delta2(x))


def _d1_one(x):
    return (d1_plus(x) + d1_minus(x)).scale(0.5)


def _d1_two(x):
    return (d1_plus(x) - d1_minus(x)).scale(0.5j)


def _round_laplacian(x):
    # sec^2 delta1^2 + csc^2 delta2^2 - d_psi^2
    return (SEC * SEC) * delta1(delta1(x)) + (CSC * CSC) * delta2(delta2(x)) - dpsi(dpsi(x))


COT2 = (COT - TAN) * 0.5  # cot(2 psi)


def _beltrami_laplacian(x):
    return _round_laplacian(x) - (COT2 * 2.0) * dpsi(x)


D1 = DiracChoice(
    name="d1",
    derivations=(_d1_one, _d1_two, _d1_three),
    laplacian=_round_laplacian,
    shift=1.5,
)

D2 = DiracChoice(
    name="d2",
    derivations=(
        lambda x: SEC * delta1(x),
        lambda x: CSC * delta2(x),
        lambda x: dpsi(x).scale(1j),
    ),
    laplacian=_beltrami_laplacian,
    potential=(None, None, COT2 * 1j),
)

D3 = DiracChoice(
    name="d3",
    derivations=(
        lambda x: dpsi(x).scale(1j),
        lambda x: -(TAN * delta1(x) - COT * delta2(x)),
        lambda x: -(delta1(x) + delta2(x)),
    ),
    laplacian=_round_laplacian,
)

DIRACS = {"d1": D1, "d2": D2, "d3": D3}


def get_dirac(name) -> DiracChoice:
    if isinstance(name, DiracChoice):
        return name
    try:
        return DIRACS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown Dirac operator {name!r}; expected d1, d2 or d3") from None


def commutator(D, a: AlgElement) -> SpinMatrix:
    """Symbol of ``[D, a]`` as a 2x2 matrix."""
    D = get_dirac(D)
    return SpinMatrix.from_components([D.d(k, a) for k in range(3)])


def component_symbols(D, a: AlgElement, b: AlgElement):
    """``(A1, A2, A3)`` with ``a [D, b] = sum_k A_k sigma_k``."""
    D = get_dirac(D)
    return tuple(mul(a, D.d(k, b)) for k in range(3))


def apply_dirac(D, spinor: SpinorPair, with_shift: bool = False) -> SpinorPair:
    """Action of the Dirac operator (without its constant shift by default)."""
    D = get_dirac(D)
    x, y = spinor.upper, spinor.lower
    if D.name == "d1":
        upper = _d1_three(x) + d1_plus(y)
        lower = d1_minus(x) - _d1_three(y)
    else:
        c = []
        for k in range(3):
            pot = D.potential[k]
            c.append((D.d(k, x) + (pot * x if pot else 0), D.d(k, y) + (pot * y if pot else 0)))
        # sigma1 (x,y)->(y,x); sigma2 -> (-i y, i x); sigma3 -> (x, -y)
        upper = c[0][1] + c[1][1].scale(-1j) + c[2][0]
        lower = c[0][0] + c[1][0].scale(1j) - c[2][1]
    out = SpinorPair(upper, lower)
    if with_shift and D.shift:
        out = out + spinor.scale(D.shift)
    return out


def nabla(D, m: SpinMatrix) -> SpinMatrix:
    """``[D'^2, .]`` in the symbol convention: the Laplacian acts entrywise."""
    D = get_dirac(D)
    return m.map(D.laplacian)


def epsilon_contract(A, dA) -> AlgElement:
    """``sum eps^{ijk} A_i dA[j][k]`` where ``dA[j][k]`` is ``d_j(A_k)``."""
    ctx = A[0].ctx
    out = AlgElement.zero(ctx)
    for (i, j, k), sign in EPS.items():
        out = out + mul(A[i], dA[j][k]).scale(sign)
    return out


def epsilon_cubic(A) -> AlgElement:
    ctx = A[0].ctx
    out = AlgElement.zero(ctx)
    for (i, j, k), sign in EPS.items():
        out = out + mul(mul(A[i], A[j]), A[k]).scale(sign)
    return out


def derivative_table(D, A):
    D = get_dirac(D)
    return [[D.d(j, A[k]) for k in range(3)] for j in range(3)]
