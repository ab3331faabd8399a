"""Coordinate algebra of the theta-deformed 3-sphere in Hopf form.

Elements are finite sums ``sum f_pq(psi) u^p v^q`` where ``u, v`` generate the
noncommutative torus (``uv = lam vu``) and ``f_pq`` is a Laurent polynomial in
``c = cos psi`` and ``s = sin psi``.  The generators are ``alpha = c u`` and
``beta = s v``.

Negative powers of ``alpha`` and ``beta`` are *localized inverses*:
``alpha^-1 = c^-1 u^-1``.  Adjoints stay expressible, ``alpha* = c^2 alpha^-1``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

PRUNE = 1e-15


class ContextMismatch(ValueError):
    """Raised when elements from two different deformation contexts meet."""


@dataclass(frozen=True)
class DeformationContext:
    theta: float
    tol: float = 1e-10
    sample_count: int = 11
    rng_seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.tol <= 1e-6):
            raise ValueError(f"tol must lie in (0, 1e-6], got {self.tol}")
        if self.sample_count < 9:
            raise ValueError("sample_count must be at least 9")

    @property
    def lam(self) -> complex:
        return cmath.exp(2j * math.pi * self.theta)

    def phase(self, k: int) -> complex:
        """lam**k, exponentiated from the exact integer exponent."""
        return _phase(self.theta, k)

    def sample_points(self) -> np.ndarray:
        return np.linspace(0.05, math.pi / 2 - 0.05, self.sample_count)

    def same(self, other: "DeformationContext") -> bool:
        return self.theta == other.theta


@lru_cache(maxsize=4096)
def _phase(theta: float, k: int) -> complex:
    if k == 0:
        return 1.0 + 0j
    return cmath.exp(2j * math.pi * theta * k)


def _close(x, y, tol) -> bool:
    x = np.asarray(x)
    y = np.asarray(y)
    scale = np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))
    return bool(np.all(np.abs(x - y) <= tol * scale))


# ---------------------------------------------------------------------------
# TrigCoeff


class TrigCoeff:
    """Laurent polynomial ``sum coeff * c^a s^b`` with complex coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], complex] | None = None):
        clean = {}
        if terms:
            for key, val in terms.items():
                val = complex(val)
                if abs(val) >= PRUNE:
                    clean[(int(key[0]), int(key[1]))] = val
        self.terms: dict[tuple[int, int], complex] = clean

    @classmethod
    def const(cls, value: complex) -> "TrigCoeff":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, a: int, b: int, value: complex = 1.0) -> "TrigCoeff":
        return cls({(a, b): value})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, TrigCoeff):
            other = TrigCoeff.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TrigCoeff(out)

    __radd__ = __add__

    def __neg__(self):
        return TrigCoeff({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TrigCoeff):
            other = TrigCoeff.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return TrigCoeff({k: v * other for k, v in self.terms.items()})
        if not isinstance(other, TrigCoeff):
            return NotImplemented
        out: dict[tuple[int, int], complex] = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + v1 * v2
        return TrigCoeff(out)

    __rmul__ = __mul__

    def conj(self) -> "TrigCoeff":
        return TrigCoeff({k: v.conjugate() for k, v in self.terms.items()})

    def derivative(self) -> "TrigCoeff":
        # d/dpsi c^a s^b = -a c^(a-1) s^(b+1) + b c^(a+1) s^(b-1)
        out: dict[tuple[int, int], complex] = {}
        for (a, b), v in self.terms.items():
            if a:
                out[(a - 1, b + 1)] = out.get((a - 1, b + 1), 0) - a * v
            if b:
                out[(a + 1, b - 1)] = out.get((a + 1, b - 1), 0) + b * v
        return TrigCoeff(out)

    def __call__(self, psi):
        psi = np.asarray(psi, dtype=float)
        c, s = np.cos(psi), np.sin(psi)
        total = np.zeros(psi.shape, dtype=complex)
        for (a, b), v in self.terms.items():
            total = total + v * c**a * s**b
        return total if total.shape else complex(total)

    def function_equal(self, other, ctx: DeformationContext) -> bool:
        if not isinstance(other, TrigCoeff):
            other = TrigCoeff.const(other)
        pts = ctx.sample_points()
        return _close(self(pts), other(pts), ctx.tol)

    def constant_value(self, ctx: DeformationContext) -> complex:
        """The value of a function-constant coefficient; raises otherwise."""
        vals = self(ctx.sample_points())
        if not _close(vals, np.full_like(vals, vals.mean()), ctx.tol):
            raise ValueError(f"coefficient depends on psi: {self}")
        return complex(vals.mean())

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), v in sorted(self.terms.items()):
            mono = "".join(
                f"{n}^{e}" if e != 1 else n for n, e in (("c", a), ("s", b)) if e
            )
            parts.append(f"({v:.6g}){('*' + mono) if mono else ''}")
        return " + ".join(parts)

    def to_json(self) -> list[dict]:
        return [
            {"a": a, "b": b, "re": v.real, "im": v.imag}
            for (a, b), v in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> "TrigCoeff":
        out: dict[tuple[int, int], complex] = {}
        for t in data:
            key = (int(t["a"]), int(t["b"]))
            out[key] = out.get(key, 0) + complex(float(t["re"]), float(t.get("im", 0.0)))
        return cls(out)


ONE = TrigCoeff.const(1.0)
COS = TrigCoeff.monomial(1, 0)
SIN = TrigCoeff.monomial(0, 1)
TAN = TrigCoeff.monomial(-1, 1)
COT = TrigCoeff.monomial(1, -1)
SEC = TrigCoeff.monomial(-1, 0)
CSC = TrigCoeff.monomial(0, -1)


# ---------------------------------------------------------------------------
# AlgElement


@dataclass(frozen=True, eq=False)
class AlgElement:
    modes: Mapping[tuple[int, int], TrigCoeff]
    ctx: DeformationContext = field(repr=False)

    def __post_init__(self):
        clean = {
            (int(p), int(q)): f for (p, q), f in self.modes.items() if not f.is_zero()
        }
        object.__setattr__(self, "modes", clean)

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, ctx):
        return cls({}, ctx)

    @classmethod
    def scalar(cls, value, ctx):
        if not isinstance(value, TrigCoeff):
            value = TrigCoeff.const(value)
        return cls({(0, 0): value}, ctx)

    @classmethod
    def torus(cls, p: int, q: int, ctx, coeff=1.0):
        """``coeff * u^p v^q``."""
        if not isinstance(coeff, TrigCoeff):
            coeff = TrigCoeff.const(coeff)
        return cls({(p, q): coeff}, ctx)

    @classmethod
    def ab_monomial(cls, p: int, q: int, ctx, coeff=1.0):
        """``coeff * alpha^p beta^q`` realized as ``c^p s^q u^p v^q``."""
        return cls.torus(p, q, ctx, TrigCoeff.monomial(p, q, coeff))

    @classmethod
    def ba_monomial(cls, m: int, n: int, ctx, coeff=1.0):
        """``coeff * beta^n alpha^m`` = ``lam^(-nm) alpha^m beta^n``."""
        return cls.ab_monomial(m, n, ctx, coeff * ctx.phase(-n * m))

    # arithmetic -------------------------------------------------------------
    def _check(self, other):
        if not self.ctx.same(other.ctx):
            raise ContextMismatch(
                f"theta {self.ctx.theta} vs {other.ctx.theta}"
            )

    def __add__(self, other):
        if not isinstance(other, AlgElement):
            other = AlgElement.scalar(other, self.ctx)
        self._check(other)
        out = dict(self.modes)
        for k, f in other.modes.items():
            out[k] = out[k] + f if k in out else f
        return AlgElement(out, self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return AlgElement({k: -f for k, f in self.modes.items()}, self.ctx)

    def __sub__(self, other):
        if not isinstance(other, AlgElement):
            other = AlgElement.scalar(other, self.ctx)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return mul(self, other)
        if isinstance(other, (int, float, complex, np.number, TrigCoeff)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        # scalars and TrigCoeffs are central
        return self.scale(other)

    def scale(self, factor) -> "AlgElement":
        return AlgElement({k: f * factor for k, f in self.modes.items()}, self.ctx)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use localized monomials for negative powers")
        out = AlgElement.scalar(1.0, self.ctx)
        for _ in range(n):
            out = mul(out, self)
        return out

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.modes

    @property
    def support(self) -> set[tuple[int, int]]:
        return set(self.modes)

    def coeff(self, p: int, q: int) -> TrigCoeff:
        return self.modes.get((p, q), TrigCoeff())

    def function_equal(self, other, tol: float | None = None) -> bool:
        if not isinstance(other, AlgElement):
            other = AlgElement.scalar(other, self.ctx)
        self._check(other)
        ctx = self.ctx if tol is None else _with_tol(self.ctx, tol)
        pts = ctx.sample_points()
        zero = np.zeros_like(pts, dtype=complex)
        for k in self.support | other.support:
            a = self.modes[k](pts) if k in self.modes else zero
            b = other.modes[k](pts) if k in other.modes else zero
            if not _close(a, b, ctx.tol):
                return False
        return True

    def __repr__(self):
        if not self.modes:
            return "AlgElement(0)"
        parts = [f"[{f}]u^{p}v^{q}" for (p, q), f in sorted(self.modes.items())]
        return "AlgElement(" + " + ".join(parts) + ")"

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "theta": self.ctx.theta,
            "modes": [
                {"p": p, "q": q, "terms": f.to_json()}
                for (p, q), f in sorted(self.modes.items())
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping, ctx: DeformationContext | None = None):
        theta = float(data["theta"])
        if ctx is None:
            ctx = DeformationContext(theta)
        elif ctx.theta != theta:
            raise ContextMismatch(f"element theta {theta} vs context {ctx.theta}")
        modes: dict[tuple[int, int], TrigCoeff] = {}
        for m in data["modes"]:
            key = (int(m["p"]), int(m["q"]))
            f = TrigCoeff.from_json(m["terms"])
            modes[key] = modes[key] + f if key in modes else f
        return cls(modes, ctx)


def _with_tol(ctx, tol):
    return DeformationContext(ctx.theta, tol, ctx.sample_count, ctx.rng_seed)


def generators(ctx: DeformationContext) -> dict[str, AlgElement]:
    """alpha, beta, their adjoints, and the torus unitaries with inverses."""
    return {
        "alpha": AlgElement.torus(1, 0, ctx, COS),
        "beta": AlgElement.torus(0, 1, ctx, SIN),
        "alpha*": AlgElement.torus(-1, 0, ctx, COS),
        "beta*": AlgElement.torus(0, -1, ctx, SIN),
        "u": AlgElement.torus(1, 0, ctx),
        "v": AlgElement.torus(0, 1, ctx),
        "u*": AlgElement.torus(-1, 0, ctx),
        "v*": AlgElement.torus(0, -1, ctx),
    }


# ---------------------------------------------------------------------------
# operations


def mul(x: AlgElement, y: AlgElement) -> AlgElement:
    """Product using ``u^p v^q u^p' v^q' = lam^(-q p') u^(p+p') v^(q+q')``."""
    x._check(y)
    ctx = x.ctx
    out: dict[tuple[int, int], TrigCoeff] = {}
    for (p, q), f in x.modes.items():
        for (p2, q2), g in y.modes.items():
            term = (f * g) * ctx.phase(-q * p2)
            key = (p + p2, q + q2)
            out[key] = out[key] + term if key in out else term
    return AlgElement(out, ctx)


def star(x: AlgElement) -> AlgElement:
    """Involution: ``(f u^p v^q)* = conj(f) lam^(-pq) u^-p v^-q``."""
    ctx = x.ctx
    return AlgElement(
        {(-p, -q): f.conj() * ctx.phase(-p * q) for (p, q), f in x.modes.items()},
        ctx,
    )


def delta1(x: AlgElement) -> AlgElement:
    return AlgElement({k: f * k[0] for k, f in x.modes.items()}, x.ctx)


def delta2(x: AlgElement) -> AlgElement:
    return AlgElement({k: f * k[1] for k, f in x.modes.items()}, x.ctx)


def dpsi(x: AlgElement) -> AlgElement:
    return AlgElement({k: f.derivative() for k, f in x.modes.items()}, x.ctx)


def zero_mode(x: AlgElement) -> TrigCoeff:
    return x.modes.get((0, 0), TrigCoeff())


def _gauss_legendre(n: int = 64):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    half = math.pi / 4
    return half * (nodes + 1.0), half * weights


_GL_NODES, _GL_WEIGHTS = _gauss_legendre()


def haar_state(x: AlgElement) -> complex:
    """Normalized Haar state ``2 int_0^{pi/2} f_00(psi) cos psi sin psi dpsi``."""
    f = zero_mode(x)
    if f.is_zero():
        return 0j
    vals = f(_GL_NODES) * np.cos(_GL_NODES) * np.sin(_GL_NODES)
    return complex(2.0 * np.dot(_GL_WEIGHTS, vals))


def evaluate_classical(x: AlgElement, psi: float, phi1: float, phi2: float) -> complex:
    """Pointwise value at theta = 0 with ``u -> e^{i phi1}``, ``v -> e^{i phi2}``."""
    if x.ctx.theta != 0:
        raise ValueError("classical evaluation needs theta = 0")
    total = 0j
    for (p, q), f in x.modes.items():
        total += f(psi) * cmath.exp(1j * (p * phi1 + q * phi2))
    return total


# ---------------------------------------------------------------------------
# coefficient views


def from_coefficients(coeffs: Mapping[tuple[int, int], complex], ctx, order: str = "ab"):
    """Build ``sum c_pq alpha^p beta^q`` (order "ab") or ``sum c_mn beta^n alpha^m`` ("ba")."""
    make = AlgElement.ab_monomial if order == "ab" else AlgElement.ba_monomial
    out = AlgElement.zero(ctx)
    for (p, q), val in coeffs.items():
        out = out + make(p, q, ctx, val)
    return out


def coefficients(x: AlgElement, order: str = "ab") -> dict[tuple[int, int], complex]:
    """Inverse of :func:`from_coefficients`; each mode must be a constant multiple
    of the corresponding localized monomial."""
    ctx = x.ctx
    out = {}
    for (p, q), f in x.modes.items():
        ratio = f * TrigCoeff.monomial(-p, -q)
        val = ratio.constant_value(ctx)
        if order == "ba":
            val *= ctx.phase(q * p)
        out[(p, q)] = val
    return out


def coefficient_functions(x: AlgElement, order: str = "ab") -> dict[tuple[int, int], TrigCoeff]:
    """Like :func:`coefficients` but keeps psi-dependent ratios as TrigCoeffs."""
    ctx = x.ctx
    out = {}
    for (p, q), f in x.modes.items():
        ratio = f * TrigCoeff.monomial(-p, -q)
        if order == "ba":
            ratio = ratio * ctx.phase(q * p)
        out[(p, q)] = ratio
    return out


def is_coefficient_selfadjoint(x: AlgElement, order: str = "ba") -> bool:
    """The coefficient condition ``a_{-m,-n} = conj(a_mn)`` on every mode."""
    ctx = x.ctx
    funcs = coefficient_functions(x, order)
    for (m, n), f in funcs.items():
        g = funcs.get((-m, -n), TrigCoeff())
        if not g.function_equal(f.conj(), ctx):
            return False
    return True


def random_element(ctx, rng, support: int = 3, box: int = 2, honest: bool = False):
    """Random element with at most ``support`` modes drawn from a box.

    ``honest`` restricts to nonnegative trig powers (built from alpha, beta and
    adjoints), otherwise localized monomials with signed powers are used.
    """
    modes = {}
    k = int(rng.integers(1, support + 1))
    while len(modes) < k:
        p, q = (int(t) for t in rng.integers(-box, box + 1, size=2))
        val = complex(rng.normal(), rng.normal())
        if honest:
            modes[(p, q)] = TrigCoeff.monomial(abs(p), abs(q), val)
        else:
            modes[(p, q)] = TrigCoeff.monomial(p, q, val)
    return AlgElement(modes, ctx)
