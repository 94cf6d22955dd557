"""Chebyshev polynomials, Markov numbers and the psi-basis expansion.

Integer quantities (Chebyshev coefficients, Markov numbers, psi-coefficients
of T_d) are exact Python ints.  Degrees are capped at 40 so every such value
stays below 2^128.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import polynomial as nppoly

from boolcube.errors import CapacityError
from boolcube.report import InequalityReport

MAX_EXACT_DEGREE = 40
MAX_PSI_DEGREE = 25
SUP_GRID_POINTS = 4096
MARKOV_TOL = 1e-6


def _check_exact(d: int) -> None:
    if d < 0:
        raise ValueError(f"degree {d} must be non-negative")
    if d > MAX_EXACT_DEGREE:
        raise CapacityError(f"degree {d} exceeds the exact-arithmetic cap {MAX_EXACT_DEGREE}")


@dataclass(frozen=True)
class UnivariatePoly:
    """``sum_m coeffs[m] * t**m`` with trailing zeros trimmed."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float]):
        c = [float(x) for x in coeffs]
        if not all(math.isfinite(x) for x in c):
            raise ValueError("coefficients must be finite")
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (0.0,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        # extended-precision Horner: monomial coefficients of T_25 are ~1e9
        # while its values stay in [-1, 1]
        t = np.asarray(t, dtype=np.longdouble)
        acc = np.zeros_like(t)
        for c in reversed(self.coeffs):
            acc = acc * t + np.longdouble(c)
        return np.asarray(acc, dtype=np.float64)

    def __add__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        return UnivariatePoly(nppoly.polyadd(self.coeffs, other.coeffs))

    def __mul__(self, c: float) -> "UnivariatePoly":
        return UnivariatePoly([c * x for x in self.coeffs])

    __rmul__ = __mul__


@lru_cache(maxsize=None)
def chebyshev_int(d: int) -> tuple[int, ...]:
    """Exact monomial coefficients of T_d from T_{k+1} = 2t T_k - T_{k-1}."""
    _check_exact(d)
    prev, cur = (1,), (0, 1)
    if d == 0:
        return prev
    for _ in range(d - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, tuple(nxt)
    return cur


def chebyshev(d: int) -> UnivariatePoly:
    return UnivariatePoly(chebyshev_int(d))


def markov_number(m: int, d: int) -> int:
    """M_{m,d}: |a_m(T_d)| when m and d share parity, else |a_m(T_{d-1})|."""
    _check_exact(d)
    if not 0 <= m <= d:
        raise ValueError(f"need 0 <= m <= d, got m={m}, d={d}")
    dd = d if (d - m) % 2 == 0 else d - 1
    return abs(chebyshev_int(dd)[m])


def interval_sup(p: UnivariatePoly, points: int = SUP_GRID_POINTS) -> tuple[float, float]:
    """``sup_{[-1,1]} |p|`` and a maximiser.

    Candidates are ``points`` Chebyshev extrema nodes (both endpoints
    included) plus the real critical points of p, found from the Chebyshev
    form of p' so that interior extrema are hit exactly.
    """
    c = npcheb.poly2cheb(p.coeffs)
    grid = np.cos(np.arange(points) * np.pi / (points - 1))
    candidates = [grid]
    if len(c) > 2:
        crit = npcheb.chebroots(npcheb.chebder(c))
        crit = crit[np.abs(crit.imag) < 1e-7].real
        candidates.append(np.clip(crit[np.abs(crit) <= 1.0 + 1e-9], -1.0, 1.0))
    t = np.concatenate(candidates)
    vals = np.abs(npcheb.chebval(t, c))
    k = int(np.argmax(vals))
    return float(vals[k]), float(t[k])


def markov_ratios(p: UnivariatePoly, d: int) -> list[float]:
    """``|a_m| / (M_{m,d} sup|p|)`` for m = 0..d (0 for the zero polynomial)."""
    if p.degree > d:
        raise ValueError(f"polynomial degree {p.degree} exceeds d={d}")
    sup, _ = interval_sup(p)
    coeffs = list(p.coeffs) + [0.0] * (d + 1 - len(p.coeffs))
    if sup == 0.0:
        return [0.0] * (d + 1)
    return [abs(a) / (markov_number(m, d) * sup) for m, a in enumerate(coeffs)]


def markov_coefficient_check(p: UnivariatePoly, d: int, tol: float = MARKOV_TOL) -> InequalityReport:
    """Check ``|a_m| <= M_{m,d} sup|p|`` for every m; report the worst m."""
    ratios = markov_ratios(p, d)
    sup, t_star = interval_sup(p)
    m_star = int(np.argmax(ratios))
    coeffs = list(p.coeffs) + [0.0] * (d + 1 - len(p.coeffs))
    attaining = [m for m, r in enumerate(ratios) if r > 0 and r >= ratios[m_star] - tol]
    return InequalityReport.build(
        "markov_coefficient",
        abs(coeffs[m_star]),
        markov_number(m_star, d) * sup,
        tol=tol,
        witness=f"m={','.join(map(str, attaining))}; sup at t={t_star!r}",
        params={"d": d, "m": m_star, "sup": sup},
    )


def psi_basis(d: int, m: int, t):
    """``((1+t)/2)**m * ((1-t)/2)**(d-m)``."""
    if not 0 <= m <= d:
        raise ValueError(f"need 0 <= m <= d, got m={m}, d={d}")
    t = np.asarray(t, dtype=np.float64)
    return ((1.0 + t) / 2.0) ** m * ((1.0 - t) / 2.0) ** (d - m)


@dataclass(frozen=True, eq=False)
class PsiExpansion:
    """Coefficients ``a[n]`` of a polynomial in the basis psi_{d,0..d}."""

    d: int
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        if a.shape != (self.d + 1,):
            raise ValueError(f"expected {self.d + 1} coefficients, got shape {a.shape}")
        object.__setattr__(self, "a", a)

    def __call__(self, t):
        # the terms can exceed the result by ~1e8 at d = 25; sum in extended precision
        t = np.asarray(t, dtype=np.longdouble)
        u = (1 + t) / 2
        v = (1 - t) / 2
        a = self.a.astype(np.longdouble)
        total = sum(a[n] * u**n * v ** (self.d - n) for n in range(self.d + 1))
        return np.asarray(total, dtype=np.float64)


def psi_nodes(d: int) -> np.ndarray:
    return np.cos(np.arange(d + 1) * np.pi / d)


def _psi_node_weights(d: int) -> np.ndarray:
    """W[m, n] with ``a_n = sum_m p(t_m) W[m, n]`` at nodes t_m = cos(m pi / d).

    With u = (1+t)/2 and v = (1-t)/2 we have t - t_j = (1 - t_j) u - (1 + t_j) v,
    so the Lagrange numerator prod_{j != m} (t - t_j) has u^n v^(d-n)
    coefficient (-1)^(d-n) alpha[m, n], where alpha[m] are the coefficients of
    prod_{j != m} ((1 - t_j) u + (1 + t_j) v).  All factors of that product are
    non-negative, so the convolution below has no cancellation.
    """
    theta = np.arange(d + 1) * np.pi / d
    t = np.cos(theta)
    one_minus = 2.0 * np.sin(theta / 2) ** 2
    one_plus = 2.0 * np.cos(theta / 2) ** 2
    sign = (-1.0) ** (d - np.arange(d + 1))
    W = np.zeros((d + 1, d + 1))
    for m in range(d + 1):
        alpha = np.zeros(d + 1)
        alpha[0] = 1.0
        denom = 1.0
        for j in range(d + 1):
            if j == m:
                continue
            alpha[1:] = one_minus[j] * alpha[:-1] + one_plus[j] * alpha[1:]
            alpha[0] = one_plus[j] * alpha[0]
            denom *= t[m] - t[j]
        W[m] = sign * alpha / denom
    return W


@lru_cache(maxsize=None)
def _cached_weights(d: int) -> np.ndarray:
    W = _psi_node_weights(d)
    W.setflags(write=False)
    return W


def psi_expand(p: UnivariatePoly, d: int) -> PsiExpansion:
    """Coordinates of p in the psi_{d,.} basis by Lagrange interpolation."""
    if not 1 <= d <= MAX_PSI_DEGREE:
        raise CapacityError(f"psi expansion needs 1 <= d <= {MAX_PSI_DEGREE}, got {d}")
    if p.degree > d:
        raise ValueError(f"polynomial degree {p.degree} exceeds d={d}")
    values = p(psi_nodes(d))
    return PsiExpansion(d, values @ _cached_weights(d))


def cheb_psi_sum(n: int, d: int) -> int:
    """``sum_{k <= min(n, d-n)} 4^k C(d, 2k) C(d-2k, n-k)`` (= |a_n(T_d)|)."""
    _check_exact(d)
    if not 0 <= n <= d:
        raise ValueError(f"need 0 <= n <= d, got n={n}, d={d}")
    return sum(4**k * math.comb(d, 2 * k) * math.comb(d - 2 * k, n - k) for k in range(min(n, d - n) + 1))


def cheb_psi_coeff(n: int, d: int) -> int:
    """Exact coefficient of psi_{d,n} in T_d.

    The sign is (-1)^(d-n): T_d(1) = 1 forces the psi_{d,d} coefficient to be
    +1 and T_d(-1) = (-1)^d the psi_{d,0} one.
    """
    return (-1) ** (d - n) * cheb_psi_sum(n, d)


class TwoBlockConstant(NamedTuple):
    value: Fraction
    cap: int


def two_block_constant(m: int, d: int) -> TwoBlockConstant:
    """Exact ``|a_m(T_d)| / C(d, m)`` and its cap ``2 d^m``, for m <= d/2."""
    if not 0 <= 2 * m <= 2 * d or 2 * m > d:
        raise ValueError(f"need 0 <= m <= d/2, got m={m}, d={d}")
    return TwoBlockConstant(Fraction(cheb_psi_sum(m, d), math.comb(d, m)), 2 * d**m)


def markov_growth_trace(d_max: int) -> list[float]:
    """``max_m M_{m,d}^(1/d)`` for d = 1..d_max."""
    _check_exact(d_max)
    return [
        max(math.exp(math.log(markov_number(m, d)) / d) for m in range(d + 1))
        for d in range(1, d_max + 1)
    ]


def cheb_rows(d: int, d_max: int | None = None) -> list[tuple[str, int, int, float]]:
    """CSV rows ``(quantity, d, m, value)`` describing T_d and the Markov data."""
    rows: list[tuple[str, int, int, float]] = []
    for m, c in enumerate(chebyshev_int(d)):
        rows.append(("chebyshev", d, m, float(c)))
    if 1 <= d <= MAX_EXACT_DEGREE:
        for n in range(d + 1):
            rows.append(("psi", d, n, float(cheb_psi_coeff(n, d))))
    for m in range(d + 1):
        rows.append(("markov", d, m, float(markov_number(m, d))))
    for k, v in enumerate(markov_growth_trace(d_max if d_max is not None else max(d, 1)), start=1):
        rows.append(("growth", k, -1, v))
    return rows


def as_poly(coeffs: Sequence[float]) -> UnivariatePoly:
    return UnivariatePoly(coeffs)
