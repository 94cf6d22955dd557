"""Bohnenblust-Hille, Blei, hypercontractive, Lorentz and Aaronson-Ambainis checks.

Every check returns an :class:`~boolcube.report.InequalityReport`.  Checks of
proven inequalities assert ``lhs <= rhs * (1 + tol)``; quantities whose best
constant is unknown (BH quotients, Lorentz quotients) are reported with
``passed=None`` so they can be aggregated.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Mapping, NamedTuple

import numpy as np

from boolcube.cube import (
    BooleanFunction,
    FourierSpectrum,
    influences,
    inverse_transform,
    mask_to_subset,
    noise_operator,
    p_norm,
    sup_argmax,
    variance,
    walsh_transform,
)
from boolcube.errors import CapacityError
from boolcube.report import DEFAULT_TOL, InequalityReport

MAX_BLEI_ENTRIES = 10**7
_RHO_SLACK = 1e-12


def bh_exponent(d: int) -> float:
    return 2.0 * d / (d + 1)


def _lp(values: np.ndarray, p: float) -> float:
    a = np.abs(values)
    scale = a.max(initial=0.0)
    if scale == 0.0:
        return 0.0
    return float(scale * np.sum((a / scale) ** p) ** (1.0 / p))


def bh_lhs(s: FourierSpectrum) -> float:
    """``(sum_S |c_S|^(2d/(d+1)))^((d+1)/(2d))`` with d the spectrum's degree.

    A constant spectrum (d = 0) has a single coefficient and returns its size.
    """
    v = s.values
    if s.degree == 0:
        return float(np.abs(v).max(initial=0.0))
    return _lp(v, bh_exponent(s.degree))


def bh_ratio(s: FourierSpectrum) -> InequalityReport:
    """Empirical BH quotient ``bh_lhs / ||f||_inf``; no constant is asserted."""
    if not any(s.coeffs.values()):
        raise ValueError("BH ratio of the zero spectrum is undefined")
    sup, row = sup_argmax(inverse_transform(s))
    return InequalityReport.build(
        "bh_ratio",
        bh_lhs(s),
        sup,
        witness=f"row={row}",
        params={"n": s.n, "d": s.degree},
        asserted=False,
    )


def blei_check(a: np.ndarray, k: int, tol: float = DEFAULT_TOL) -> InequalityReport:
    """Blei's mixed-norm inequality for a d-index array with every axis of length n.

    The right side is the geometric mean, over the C(d, k) k-sets S of axes,
    of ``(sum_{i_S} (sum_{i_rest} |a|^2)^(k/(k+1)))^((k+1)/(2k))``.
    """
    a = np.abs(np.asarray(a, dtype=np.float64))
    d = a.ndim
    if d < 1 or len(set(a.shape)) != 1:
        raise ValueError("expected a d-index array with equal axis lengths")
    if a.size > MAX_BLEI_ENTRIES:
        raise CapacityError(f"{a.size} entries exceed the limit {MAX_BLEI_ENTRIES}")
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    lhs = _lp(a.ravel(), bh_exponent(d))
    sq = a * a
    logs = []
    for block in itertools.combinations(range(d), k):
        rest = tuple(ax for ax in range(d) if ax not in block)
        inner = np.sum(sq, axis=rest) if rest else sq
        mixed = _lp(np.sqrt(inner).ravel(), bh_exponent(k))
        logs.append(math.log(mixed) if mixed > 0.0 else -math.inf)
    rhs = math.exp(math.fsum(logs) / len(logs)) if all(math.isfinite(x) for x in logs) else 0.0
    return InequalityReport.build(
        "blei", lhs, rhs, tol=tol, params={"n": a.shape[0], "d": d, "k": k}
    )


def hypercontractivity_check(f: BooleanFunction, p: float, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``||f||_2 <= (p-1)^(-d/2) ||f||_p`` on (1, 2], and ``<= e^d ||f||_1`` at p = 1."""
    if not 1 <= p <= 2:
        raise ValueError(f"p={p} outside [1, 2]")
    d = walsh_transform(f).degree
    if p == 1:
        rhs = math.exp(d) * p_norm(f, 1)
    else:
        rhs = (p - 1) ** (-d / 2) * p_norm(f, p)
    return InequalityReport.build(
        "hypercontractivity", p_norm(f, 2), rhs, tol=tol, params={"n": f.n, "d": d, "p": p}
    )


def noise_contraction_check(
    f: BooleanFunction, p: float, q: float, rho: float, tol: float = DEFAULT_TOL
) -> InequalityReport:
    """``||T_rho f||_q <= ||f||_p`` for 1 < p <= q <= inf and |rho| <= sqrt((p-1)/(q-1))."""
    if not (1 < p <= q):
        raise ValueError(f"need 1 < p <= q, got p={p}, q={q}")
    bound = 0.0 if math.isinf(q) else math.sqrt((p - 1) / (q - 1)) if q > 1 else 1.0
    inside = abs(rho) <= bound * (1 + _RHO_SLACK) and abs(rho) < 1
    lhs = p_norm(inverse_transform(noise_operator(walsh_transform(f), rho)), q)
    return InequalityReport.build(
        "noise_contraction",
        lhs,
        p_norm(f, p),
        tol=tol,
        witness=None if inside else "outside-hypothesis",
        params={"n": f.n, "p": p, "q": q, "rho": rho, "outside_hypothesis": not inside},
        asserted=inside,
    )


def lorentz_weights(count: int, d: int) -> np.ndarray:
    expo = (d - 1) / (2 * d) if d >= 1 else 0.0
    return np.arange(1, count + 1, dtype=np.float64) ** -expo


def lorentz_norm(s: FourierSpectrum) -> float:
    """``sum_k f*(k) k^(-(d-1)/(2d))`` over the decreasing rearrangement f*.

    Ties are ordered by ascending mask so the rearrangement is deterministic.
    """
    items = sorted(s.coeffs.items(), key=lambda mv: (-abs(mv[1]), mv[0]))
    star = np.array([abs(v) for _, v in items])
    if star.size == 0:
        return 0.0
    return float(np.sum(star * lorentz_weights(star.size, s.degree)))


def lorentz_dominance_check(s: FourierSpectrum, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``bh_lhs <= lorentz_norm``; the Lorentz-to-sup quotient rides along in params."""
    lor = lorentz_norm(s)
    sup, _ = sup_argmax(inverse_transform(s))
    return InequalityReport.build(
        "lorentz_dominance",
        bh_lhs(s),
        lor,
        tol=tol,
        params={"n": s.n, "d": s.degree, "lorentz_bh_ratio": lor / sup if sup else 0.0},
    )


def aa_ratio(s: FourierSpectrum, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``Var(f)^2 / (max_j Inf_j(f) ||f||_inf^2) <= d^4 e^(4d)``.

    Dividing by ``||f||_inf^2`` puts f in the [-1, 1]-valued normalisation the
    bound is stated for; it is the identity for functions with sup norm 1.
    """
    d = s.degree
    var = variance(s)
    inf = influences(s)
    rhs = d**4 * math.exp(4 * d)
    sum_inf = float(np.sum(inf))
    sum_sqrt = float(np.sum(np.sqrt(inf)))
    max_inf = float(inf.max(initial=0.0))
    j_star = int(np.argmax(inf)) + 1 if inf.size else 0
    chain = math.sqrt(max_inf) * sum_sqrt
    chain_ok = var <= sum_inf * (1 + tol) and sum_inf <= chain * (1 + tol)
    params = {
        "n": s.n,
        "d": d,
        "var": var,
        "max_inf": max_inf,
        "sum_inf": sum_inf,
        "sum_sqrt_inf": sum_sqrt,
        "chain_value": chain,
        "chain_ok": chain_ok,
    }
    if var == 0.0:
        params["degenerate"] = True
        return InequalityReport.build("aa_ratio", 0.0, rhs, tol=tol, witness="Var=0", params=params)
    sup, _ = sup_argmax(inverse_transform(s))
    rep = InequalityReport.build(
        "aa_ratio", var**2 / (max_inf * sup**2), rhs, tol=tol, witness=f"j={j_star}", params=params
    )
    return rep if chain_ok else dataclasses.replace(rep, passed=False)


def flat_spectrum(n: int, d: int, alpha: float, signs: Mapping[int, int]) -> FourierSpectrum:
    """Coefficient ``signs[S] * alpha`` on every nonempty S with |S| <= d."""
    coeffs = {}
    for mask in range(1, 1 << n):
        if mask.bit_count() <= d:
            sign = signs[mask]
            if sign not in (1, -1):
                raise ValueError(f"sign for {mask_to_subset(mask)} must be +1 or -1")
            coeffs[mask] = sign * alpha
    return FourierSpectrum(n, coeffs)


def aa_flat_case(
    n: int, d: int, alpha: float, signs: Mapping[int, int], tol: float = DEFAULT_TOL
) -> InequalityReport:
    """Flat-magnitude functions: closed-form Var/Inf and the chain to d * bh_lhs^2.

    The chain is ``Var^2 / max Inf <= alpha^2 n sum_m C(n, m) <= d bh_lhs(f)^2``.
    """
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got n={n}, d={d}")
    s = flat_spectrum(n, d, alpha, signs)
    a2 = alpha * alpha
    var_cf = a2 * sum(math.comb(n, m) for m in range(1, d + 1))
    inf_cf = a2 * sum(math.comb(n - 1, m - 1) for m in range(1, d + 1))
    var = variance(s)
    inf = influences(s)
    closed_ok = abs(var - var_cf) <= 1e-12 * max(1.0, var_cf) and bool(
        np.all(np.abs(inf - inf_cf) <= 1e-12 * max(1.0, inf_cf))
    )
    lhs = var**2 / inf.max() if alpha else 0.0
    middle = a2 * n * sum(math.comb(n, m) for m in range(1, d + 1))
    b = bh_lhs(s)
    rhs = d * b * b
    sup, _ = sup_argmax(inverse_transform(s))
    rep = InequalityReport.build(
        "aa_flat_case",
        lhs,
        rhs,
        tol=tol,
        params={
            "n": n,
            "d": d,
            "alpha": alpha,
            "var": var,
            "var_closed_form": var_cf,
            "inf_closed_form": inf_cf,
            "middle": middle,
            "bh_ratio": b / sup if sup else 0.0,
            "closed_form_ok": closed_ok,
        },
    )
    ok = closed_ok and lhs <= middle * (1 + tol) and middle <= rhs * (1 + tol)
    return rep if ok else dataclasses.replace(rep, passed=False)


class RecursionBound(NamedTuple):
    log_value: float
    iterations: int
    steps: tuple[tuple[int, int, float], ...]

    @property
    def value(self) -> float:
        return math.exp(self.log_value) if self.log_value < 709 else math.inf


def recursion_step(d: int) -> tuple[int, float]:
    """The block size floor(sqrt(d / log d)) and the log of its factor."""
    m = math.floor(math.sqrt(d / math.log(d)))
    return m, 2.0 * (d / (m + 1) + m * math.log(d))


def recursion_upper_bound(d: int, base: float) -> RecursionBound:
    """Iterate ``BH(d) <= BH(m) exp(2(d/(m+1) + m log d))`` down to d <= 3.

    ``base`` stands in for the constant at the level where the iteration
    stops.  Works in log space; ``steps`` records (d, m, log factor).
    """
    if d < 3:
        raise ValueError(f"need d >= 3, got {d}")
    if base <= 0:
        raise ValueError("base must be positive")
    log_total = math.log(base)
    steps = []
    while d > 3:
        m, log_factor = recursion_step(d)
        steps.append((d, m, log_factor))
        log_total += log_factor
        d = m
    return RecursionBound(log_total, len(steps), tuple(steps))
