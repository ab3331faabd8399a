"""Peter-Weyl basis, Dirac spectra, zeta functions and residue traces."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

import mpmath
import numpy as np
from scipy.optimize import brentq

from .algebra import (
    COT,
    TAN,
    AlgElement,
    TrigCoeff,
    delta1,
    delta2,
    dpsi,
    generators,
    mul,
    zero_mode,
)
from .spin import SpinMatrix, SpinorPair, apply_dirac, commutator, get_dirac, nabla

_ZETA_DPS = 40


# ---------------------------------------------------------------------------
# Peter-Weyl basis


@dataclass(frozen=True)
class PWIndex:
    m: int
    l: int
    j: int

    def __post_init__(self):
        if self.m < 0 or not (0 <= self.l <= self.m) or not (0 <= self.j <= self.m):
            raise ValueError(f"invalid Peter-Weyl index {self}")


def peter_weyl(m: int, l: int, j: int, ctx, normalization: str = "standard") -> AlgElement:
    """Deformed matrix coefficient with honest (nonnegative) trig powers.

    ``normalization="standard"`` uses ``C(m,l)^-1/2 C(m,j)^-1/2``; its Haar
    norm is ``1/((m+1) C(m,j)^2)``.  ``"unitary"`` uses ``C(m,l)^-1/2 C(m,j)^1/2``
    and gives norm ``1/(m+1)`` for every index.
    """
    PWIndex(m, l, j)
    if normalization == "standard":
        norm = (math.comb(m, l) * math.comb(m, j)) ** -0.5
    elif normalization == "unitary":
        norm = (math.comb(m, j) / math.comb(m, l)) ** 0.5
    else:
        raise ValueError("normalization must be 'standard' or 'unitary'")
    coeff = TrigCoeff()
    for t in range(0, min(l, j) + 1):
        s = l - t
        if s > m - j:
            continue
        b = math.comb(m - j, s) * math.comb(j, t)
        sign = (-1) ** (j - t)
        coeff = coeff + TrigCoeff.monomial(m - j - s + t, j - t + s, norm * sign * b)
    return AlgElement.torus(l + j - m, l - j, ctx, coeff)


def pw_or_zero(m, l, j, ctx):
    if m < 0 or not (0 <= l <= m) or not (0 <= j <= m):
        return AlgElement.zero(ctx)
    return peter_weyl(m, l, j, ctx)


def peter_weyl_basis(m_max: int, ctx, normalization: str = "standard"):
    for m in range(m_max + 1):
        for l in range(m + 1):
            for j in range(m + 1):
                yield PWIndex(m, l, j), peter_weyl(m, l, j, ctx, normalization)


# scalar vector fields of the first Dirac operator


def op_z(x: AlgElement) -> AlgElement:
    return (delta1(x) + delta2(x)).scale(1j)


def op_lplus(x: AlgElement) -> AlgElement:
    g = generators(x.ctx)
    inner = dpsi(x) + TAN * delta1(x) - COT * delta2(x)
    return mul(mul(g["u"], inner), g["v"]).scale(-1j)


def op_lminus(x: AlgElement) -> AlgElement:
    g = generators(x.ctx)
    inner = dpsi(x) - TAN * delta1(x) + COT * delta2(x)
    return mul(mul(g["u*"], inner), g["v*"]).scale(1j)


def casimir_laplacian(x: AlgElement) -> AlgElement:
    """``-[Z^2 + (L+L- + L-L+)/2]``."""
    zz = op_z(op_z(x))
    mixed = op_lplus(op_lminus(x)) + op_lminus(op_lplus(x))
    return -(zz + mixed.scale(0.5))


def proportionality(x: AlgElement, y: AlgElement) -> tuple[complex, float]:
    """Least-squares ``k`` with ``x ~ k y`` and the relative residual."""
    pts = x.ctx.sample_points()
    keys = sorted(x.support | y.support)
    if not keys:
        return 0j, 0.0
    xs = np.concatenate([x.coeff(*k)(pts) for k in keys])
    ys = np.concatenate([y.coeff(*k)(pts) for k in keys])
    denom = np.vdot(ys, ys).real
    if denom == 0:
        return 0j, float(np.linalg.norm(xs))
    k = np.vdot(ys, xs) / denom
    resid = np.linalg.norm(xs - k * ys) / max(1.0, np.linalg.norm(xs))
    return complex(k), float(resid)


def ladder_check(m: int, l: int, j: int, ctx) -> dict:
    """Eigen and ladder coefficients of the vector fields on one basis element.

    Returns ``{name: (measured, expected, residual)}`` for Z, L+, L- and the
    Laplacian.
    """
    phi = peter_weyl(m, l, j, ctx)
    out = {}
    k, r = proportionality(op_z(phi), phi)
    out["Z"] = (k, 1j * (2 * l - m), r)
    up = pw_or_zero(m, l + 1, j, ctx)
    if up.is_zero():
        res = op_lplus(phi)
        out["L+"] = (0j, 0j, 0.0 if res.function_equal(0) else 1.0)
    else:
        k, r = proportionality(op_lplus(phi), up)
        out["L+"] = (k, 2j * math.sqrt(l + 1) * math.sqrt(m - l), r)
    down = pw_or_zero(m, l - 1, j, ctx)
    if down.is_zero():
        res = op_lminus(phi)
        out["L-"] = (0j, 0j, 0.0 if res.function_equal(0) else 1.0)
    else:
        k, r = proportionality(op_lminus(phi), down)
        out["L-"] = (k, 2j * math.sqrt(l) * math.sqrt(m - l + 1), r)
    k, r = proportionality(casimir_laplacian(phi), phi)
    out["laplacian"] = (k, complex(m * (m + 2)), r)
    return out


def eigenspinor(sign: str, m: int, k: int, l: int, ctx) -> SpinorPair:
    """Eigenspinors of the first Dirac operator (sign '+' or '-')."""
    if sign == "+":
        if not (0 <= k <= m + 1 and 0 <= l <= m):
            raise ValueError(f"invalid index for Phi^{m}_({k},{l})")
        upper = pw_or_zero(m, m - k + 1, l, ctx).scale(-math.sqrt(k))
        lower = pw_or_zero(m, m - k, l, ctx).scale(math.sqrt(m - k + 1))
    elif sign == "-":
        if not (0 <= k <= m and 0 <= l <= m + 1):
            raise ValueError(f"invalid index for Phi^-{m}_({k},{l})")
        upper = pw_or_zero(m + 1, m - k + 1, l, ctx).scale(math.sqrt(m - k + 1))
        lower = pw_or_zero(m + 1, m - k, l, ctx).scale(math.sqrt(k + 1))
    else:
        raise ValueError("sign must be '+' or '-'")
    return SpinorPair(upper, lower)


def spinor_eigenvalue(spinor: SpinorPair, D="d1") -> tuple[complex, float]:
    image = apply_dirac(D, spinor)
    keys_x = sorted(image.upper.support | spinor.upper.support)
    pts = spinor.upper.ctx.sample_points()
    xs, ys = [], []
    for img, src in ((image.upper, spinor.upper), (image.lower, spinor.lower)):
        for key in sorted(img.support | src.support):
            xs.append(img.coeff(*key)(pts))
            ys.append(src.coeff(*key)(pts))
    del keys_x
    xs = np.concatenate(xs)
    ys = np.concatenate(ys)
    k = np.vdot(ys, xs) / np.vdot(ys, ys).real
    return complex(k), float(np.linalg.norm(xs - k * ys) / max(1.0, np.linalg.norm(xs)))


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    multiplicity: int
    family: str


def spectrum(D, m_max: int) -> list[SpectrumEntry]:
    """D1: Dirac eigenvalues +-(m + 3/2); D2, D3: Laplacian eigenvalues m(m+2)."""
    D = get_dirac(D)
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    rows = []
    for m in range(m_max + 1):
        if D.name == "d1":
            mult = (m + 1) * (m + 2)
            rows.append(SpectrumEntry(m + 1.5, mult, "+"))
            rows.append(SpectrumEntry(-(m + 1.5), mult, "-"))
        else:
            rows.append(SpectrumEntry(float(m * (m + 2)), (m + 1) ** 2, "+"))
    return rows


def spectrum_csv(entries: Iterable[SpectrumEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eigenvalue", "multiplicity", "family"])
    for e in entries:
        w.writerow([repr(e.eigenvalue), e.multiplicity, e.family])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# zeta functions


def hurwitz_zeta(s: complex, a: float) -> complex:
    """Hurwitz zeta by Euler-Maclaurin summation, valid for all ``s != 1``.

    Arithmetic runs at 40 digits so that the cancellations for ``Re s < 0``
    still leave double precision.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if s == 1:
        raise ValueError("Hurwitz zeta has a pole at s = 1")
    with mpmath.workdps(_ZETA_DPS):
        s = mpmath.mpmathify(s)
        a = mpmath.mpf(a)
        n_direct = 30 + int(abs(s))
        x = n_direct + a
        total = mpmath.fsum((n + a) ** (-s) for n in range(n_direct))
        total += x ** (1 - s) / (s - 1) + x ** (-s) / 2
        rising = s  # s (s+1) ... (s+2k-2)
        xpow = x ** (-s - 1)
        for k in range(1, 40):
            term = mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k) * rising * xpow
            total += term
            if abs(term) < mpmath.mpf(10) ** (-30) * max(1, abs(total)):
                break
            rising *= (s + 2 * k - 1) * (s + 2 * k)
            xpow /= x * x
        return complex(total)


def riemann_zeta(s: complex) -> complex:
    return hurwitz_zeta(s, 1.0)


def contour_coefficient(f, center: complex, k: int = 0, radius: float = 0.25, n: int = 64) -> complex:
    """``(1/2 pi i) oint (z - center)^k f(z) dz`` by the trapezoid rule.

    With ``k = 0`` this is the residue; with ``k >= 1`` it is the Laurent
    coefficient of order ``-1-k``.
    """
    t = 2 * np.pi * (np.arange(n) + 0.5) / n
    w = radius * np.exp(1j * t)
    vals = np.array([f(center + wi) for wi in w])
    return complex(np.mean(vals * w ** (k + 1)))


def zeta_prime_zero() -> float:
    """Derivative of the Riemann zeta function at 0 (Cauchy integral)."""
    t = 2 * np.pi * (np.arange(48) + 0.5) / 48
    r = 0.5
    vals = np.array([riemann_zeta(r * np.exp(1j * ti)) for ti in t])
    return float(np.mean(vals * np.exp(-1j * t)).real / r)


def _d2_shift(psi: float) -> float:
    return 1.0 / math.sin(2 * psi) ** 2


def spectral_zeta(D, s: complex, psi: float | None = None) -> complex:
    """``Tr |D|^{-s}`` on the full (spinor or doubled) Hilbert space.

    D1: ``2 sum (m+1)(m+2)(m+3/2)^{-s}``.  D2, D3: ``2 sum n^2 (n^2 - w)^{-s/2}``
    with ``w = csc^2(2 psi)`` resp. ``w = 1``; terms with ``n^2 <= w`` are
    dropped (kernel and finitely many modified terms do not move poles).
    """
    D = get_dirac(D)
    if D.name == "d1":
        return 2 * (hurwitz_zeta(s - 2, 1.5) - 0.25 * hurwitz_zeta(s, 1.5))
    if D.name == "d2":
        if psi is None:
            raise ValueError("the second Dirac operator needs a psi value")
        w = _d2_shift(psi)
    else:
        w = 1.0
    return 2 * _shifted_square_zeta(s, w)


def _shifted_square_zeta(s, w):
    # sum_{n^2 > w} n^2 (n^2 - w)^{-s/2} via binomial series on the tail n >= n0
    n0 = int(math.ceil(math.sqrt(2 * w))) + 1
    head = 0j
    for n in range(1, n0):
        if n * n > w:
            head += n * n * complex(mpmath.power(n * n - w, -s / 2))
    tail = 0j
    coeff = 1.0 + 0j  # Gamma(k + s/2) / (Gamma(s/2) k!)
    for k in range(0, 400):
        term = coeff * w**k * hurwitz_zeta(s + 2 * k - 2, n0)
        tail += term
        if k > 2 and abs(term) < 1e-17 * max(1.0, abs(tail)):
            break
        coeff *= (s / 2 + k) / (k + 1)
    return head + tail


# residue constants Res_{z=0} Tr(|D|^{-n-z}); D2 entries depend on psi
RESIDUE_WEIGHTS: dict[str, dict[int, TrigCoeff]] = {
    "d1": {1: TrigCoeff.const(-0.5), 3: TrigCoeff.const(2.0), 5: TrigCoeff()},
    "d2": {1: TrigCoeff.monomial(-2, -2, 0.25), 3: TrigCoeff.const(2.0), 5: TrigCoeff()},
    "d3": {1: TrigCoeff.const(1.0), 3: TrigCoeff.const(2.0), 5: TrigCoeff()},
}


def residue_weight(D, n: int) -> TrigCoeff:
    D = get_dirac(D)
    try:
        return RESIDUE_WEIGHTS[D.name][n]
    except KeyError:
        raise ValueError(f"unsupported power |D|^-{n} for {D.name}") from None


def _integrand_zero_mode(x) -> TrigCoeff:
    if isinstance(x, SpinMatrix):
        # normalized spin trace: the identity matrix integrates like the scalar 1
        return zero_mode(x.trace()) * 0.5
    return zero_mode(x)


def nc_integral(D, x, n: int = 3) -> TrigCoeff:
    """Noncommutative integral of ``x |D|^{-n}``."""
    return _integrand_zero_mode(x) * residue_weight(D, n)


def tau_k(D, x, k: int, n: int = 3, psi: float | None = None) -> complex:
    """``Res_{z=0} z^k Tr(x |D|^{-n-z})`` from the zeta closed forms."""
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    D = get_dirac(D)
    x0 = _integrand_zero_mode(x)
    if psi is None:
        psi = math.pi / 5
    value = x0(psi)
    if value == 0:
        return 0j
    res = contour_coefficient(lambda z: spectral_zeta(D, n + z, psi), 0.0, k=k, radius=0.25, n=48)
    return complex(value * res)


def truncated_residue(D, n: int, cutoffs=tuple(range(40, 81, 4)), psi: float | None = None) -> float:
    """Residue of ``Tr |D|^{-n-z}`` at 0 from truncated spectral sums.

    Partial sums ``S(M)`` over ``m <= M`` are fitted to powers of ``M`` plus a
    ``log M`` term; the log coefficient is the residue.
    """
    D = get_dirac(D)
    if D.name == "d1":
        def terms(m):
            return 2 * (m + 1) * (m + 2) * (m + 1.5) ** (-n)
    else:
        w = _d2_shift(psi if psi is not None else math.pi / 5) if D.name == "d2" else 1.0

        def terms(m):
            lam = (m + 1) ** 2 - w
            return 2 * (m + 1) ** 2 * lam ** (-n / 2) if lam > 0 else 0.0
    top = max(cutoffs)
    partial = np.cumsum([terms(m) for m in range(top + 1)])
    grow = max(0, 3 - n)
    rows, rhs = [], []
    for M in cutoffs:
        Mf = float(M)
        row = [Mf**j for j in range(grow, 0, -1)] + [math.log(Mf), 1.0] + [Mf**-j for j in range(1, 4)]
        rows.append(row)
        rhs.append(partial[M])
    rows = np.array(rows)
    if rows.shape[0] < rows.shape[1]:
        raise ValueError("need more cutoffs than fit parameters")
    sol, *_ = np.linalg.lstsq(rows, np.array(rhs), rcond=None)
    return float(sol[grow])


# ---------------------------------------------------------------------------
# cochains


def _readout(tc: TrigCoeff, ctx, psi):
    if psi is None:
        return tc.constant_value(ctx)
    return complex(tc(psi))


def phi1(D, a0: AlgElement, a1: AlgElement, psi: float | None = None) -> complex:
    """Linear cochain in its simple-dimension-spectrum form, with the Dirac
    Laplacian inside ``nabla``."""
    da = commutator(D, a1)
    first = nc_integral(D, a0 * da, 1)
    nab = nabla(D, da)
    second = nc_integral(D, a0 * nab, 3)
    third = nc_integral(D, a0 * nabla(D, nab), 5)
    return _readout(first - second * 0.25 + third * 0.125, a0.ctx, psi)


def phi3(D, a0, a1, a2, a3) -> TrigCoeff:
    word = a0 * commutator(D, a1) * commutator(D, a2) * commutator(D, a3)
    return nc_integral(D, word, 3) * (1 / 12)


# ---------------------------------------------------------------------------
# dimension spectrum


def dimension_spectrum_probe(D, window=(0.5, 4.5), psi: float = 0.7, step: float = 0.01):
    """Real poles of ``Tr |D|^{-s}`` inside ``window``.

    Returns ``{position: (order, residue)}``; positions located by root
    finding on ``1/zeta`` and orders by contour Laurent coefficients.
    """
    lo, hi = window
    if not (0 < lo < hi < 5):
        raise ValueError("window must lie inside (0, 5)")
    D = get_dirac(D)

    def f(s):
        return spectral_zeta(D, s, psi)

    def g(s):
        try:
            return 1.0 / f(s).real
        except ValueError:
            return 0.0  # landed exactly on a pole

    grid = np.arange(lo + step * 0.5 * (math.sqrt(5) - 1), hi, step)
    vals = [g(s) for s in grid]
    poles = {}
    for s0, s1, g0, g1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if g0 == 0 or np.sign(g0) == np.sign(g1):
            continue
        root = brentq(g, s0, s1, xtol=1e-14, rtol=1e-15)
        if abs(g(root)) > 1e-6:
            continue  # zero of the zeta function, not a pole
        res = contour_coefficient(f, root, k=0, radius=0.05, n=48)
        c2 = contour_coefficient(f, root, k=1, radius=0.05, n=48)
        order = 1 if abs(c2) < 1e-7 * max(1.0, abs(res)) else 2
        poles[round(root, 9)] = (order, res)
    return poles
