"""Structured test functions and a search for large Bohnenblust-Hille quotients.

Randomness comes from numpy's PCG64.  Restart ``i`` of a search seeded with
``seed`` draws from ``SeedSequence(seed, spawn_key=(i,))``, so each restart's
stream is fixed independently of how many restarts run.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from boolcube.chebyshev import markov_number
from boolcube.cube import (
    BooleanFunction,
    FourierSpectrum,
    character,
    check_dense,
    homogeneous_part,
    inverse_transform,
    sup_argmax,
    sup_norm,
    walsh_transform,
)
from boolcube.errors import CapacityError
from boolcube.formats import spectrum_to_dict
from boolcube.inequalities import bh_lhs, bh_ratio
from boolcube.report import DEFAULT_TOL, InequalityReport

STRATEGIES = ("random-restart", "sign-flip-local-search", "flat-sign-exhaustive")
MAX_EXHAUSTIVE_COEFFS = 20
GENERATOR_NAME = "numpy.random.PCG64"
_EXHAUSTIVE_BLOCK = 4096


def majority(d: int) -> BooleanFunction:
    """sign(x_1 + ... + x_d) on {-1, 1}^d, d odd."""
    if d < 1 or d % 2 == 0:
        raise ValueError(f"majority needs odd d >= 1, got {d}")
    return BooleanFunction.from_callable(d, lambda X: np.sign(X.sum(axis=1)))


def majority_part_norm(d: int, m: int) -> float:
    """Sup norm of the level-m part of Maj_d, in closed form (d, m odd)."""
    if d % 2 == 0 or m % 2 == 0 or not 1 <= m <= d:
        raise ValueError(f"need odd 1 <= m <= d, got m={m}, d={d}")
    value = (
        Fraction(math.comb((d - 1) // 2, (m - 1) // 2))
        * Fraction(d, m)
        * Fraction(math.comb(d - 1, (d - 1) // 2), 2 ** (d - 1))
    )
    return float(value)


def homogeneous_part_ratio(f: BooleanFunction, m: int, tol: float = DEFAULT_TOL) -> InequalityReport:
    """``||f_m||_inf <= M_{m,d} ||f||_inf``; the (1 + sqrt 2)^d bound is recorded too."""
    s = walsh_transform(f)
    d = s.degree
    if not 0 <= m <= d:
        raise ValueError(f"need 0 <= m <= degree {d}, got {m}")
    lhs, row = sup_argmax(inverse_transform(homogeneous_part(s, m)))
    sup = sup_norm(f)
    return InequalityReport.build(
        "homogeneous_part",
        lhs,
        markov_number(m, d) * sup,
        tol=tol,
        witness=f"row={row}",
        params={
            "n": f.n,
            "d": d,
            "m": m,
            "sup": sup,
            "part_ratio": lhs / sup if sup else 0.0,
            "exponential_bound": (1 + math.sqrt(2)) ** d * sup,
        },
    )


def substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def level_masks(n: int, levels: Iterable[int]) -> list[int]:
    levels = set(levels)
    return [mask for mask in range(1 << n) if mask.bit_count() in levels]


def random_spectrum(
    n: int,
    d: int,
    seed,
    level_profile: Optional[Sequence[int]] = None,
    flat: bool = False,
    normalize: bool = False,
) -> FourierSpectrum:
    """Independent coefficients on every mask whose level is in ``level_profile``.

    Standard normal by default, uniform random signs with ``flat``.  ``seed``
    may be an int or a ready ``numpy.random.Generator``.
    """
    check_dense(n)
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    levels = range(d + 1) if level_profile is None else level_profile
    masks = level_masks(n, [lv for lv in levels if lv <= d])
    if flat:
        vals = rng.choice(np.array([-1.0, 1.0]), size=len(masks))
    else:
        vals = rng.standard_normal(len(masks))
    s = FourierSpectrum(n, dict(zip(masks, vals.tolist())))
    if normalize:
        sup = sup_norm(inverse_transform(s))
        if sup > 0:
            s = s.scaled(1.0 / sup)
    return s


@dataclass(frozen=True)
class SearchConfig:
    n: int
    d: int
    strategy: str = "sign-flip-local-search"
    iterations: int = 1000
    seed: int = 0
    homogeneous_only: bool = False

    def __post_init__(self):
        check_dense(self.n)
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not 1 <= self.d <= self.n:
            raise ValueError(f"need 1 <= d <= n, got d={self.d}, n={self.n}")


@dataclass(eq=False)
class Witness:
    spectrum: FourierSpectrum
    ratio: float
    objective: str
    trace: list[float]
    meta: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        # the trace is stored as its change points to keep exhaustive runs small
        changes = []
        last = None
        for i, v in enumerate(self.trace):
            if v != last:
                changes.append([i, v])
                last = v
        return {
            "objective": self.objective,
            "ratio": self.ratio,
            "iterations": len(self.trace),
            "trace": changes,
            "meta": dict(self.meta),
            "spectrum": spectrum_to_dict(self.spectrum),
        }


def _search_masks(cfg: SearchConfig) -> list[int]:
    levels = [cfg.d] if cfg.homogeneous_only else range(cfg.d + 1)
    return level_masks(cfg.n, levels)


def _flat_witness(masks: list[int], signs: np.ndarray, n: int) -> FourierSpectrum:
    return FourierSpectrum(n, dict(zip(masks, signs.astype(float).tolist())))


def _random_restart(cfg: SearchConfig) -> tuple[FourierSpectrum, float, list[float]]:
    levels = [cfg.d] if cfg.homogeneous_only else None
    best, best_s, trace = -math.inf, None, []
    for i in range(cfg.iterations):
        s = random_spectrum(cfg.n, cfg.d, substream(cfg.seed, i), levels)
        r = bh_ratio(s).ratio
        if r > best:
            best, best_s = r, s
        trace.append(best)
    return best_s, best, trace


def _local_search(cfg: SearchConfig) -> tuple[FourierSpectrum, float, list[float], int]:
    """Best-improvement single sign flips from random flat starts.

    Every objective evaluation costs one iteration.  A sweep that finds no
    strictly better neighbour ends the restart.
    """
    masks = _search_masks(cfg)
    chars = np.array([character(m, cfg.n) for m in masks])
    # all coefficients have magnitude 1, so bh_lhs is the same for every pattern
    lhs = bh_lhs(_flat_witness(masks, np.ones(len(masks)), cfg.n))
    budget = cfg.iterations
    best, best_signs, trace = -math.inf, None, []
    restart = 0
    while budget > 0:
        signs = substream(cfg.seed, restart).choice(np.array([-1.0, 1.0]), size=len(masks))
        restart += 1
        values = signs @ chars
        current = lhs / np.abs(values).max()
        budget -= 1
        if current > best:
            best, best_signs = current, signs.copy()
        trace.append(best)
        while budget > 0:
            k = min(budget, len(masks))
            budget -= k
            # row i is the value table after flipping coefficient i
            cand = values[None, :] - 2.0 * signs[:k, None] * chars[:k]
            ratios = lhs / np.abs(cand).max(axis=1)
            for i, r in enumerate(ratios):
                if r > best:
                    best, best_signs = float(r), signs.copy()
                    best_signs[i] = -best_signs[i]
                trace.append(best)
            i = int(np.argmax(ratios))
            if ratios[i] <= current:
                break
            signs[i] = -signs[i]
            values = cand[i]
            current = float(ratios[i])
    best_s = _flat_witness(masks, best_signs, cfg.n)
    return best_s, bh_ratio(best_s).ratio, trace, restart


def _exhaustive(cfg: SearchConfig) -> tuple[FourierSpectrum, float, list[float]]:
    masks = _search_masks(cfg)
    count = len(masks)
    if count > MAX_EXHAUSTIVE_COEFFS:
        raise CapacityError(f"{count} coefficients exceed the exhaustive limit {MAX_EXHAUSTIVE_COEFFS}")
    chars = np.array([character(m, cfg.n) for m in masks])
    lhs = bh_lhs(_flat_witness(masks, np.ones(count), cfg.n))
    bit = np.arange(count, dtype=np.int64)
    total = 1 << count
    sups = np.empty(total)
    for start in range(0, total, _EXHAUSTIVE_BLOCK):
        g = np.arange(start, min(start + _EXHAUSTIVE_BLOCK, total), dtype=np.int64)
        # bit i of the pattern index set means coefficient i is -1
        signs = 1.0 - 2.0 * ((g[:, None] >> bit[None, :]) & 1)
        sups[start : start + g.size] = np.abs(signs @ chars).max(axis=1)
    ratios = lhs / sups
    g_star = int(np.argmax(ratios))
    signs = 1.0 - 2.0 * ((g_star >> bit) & 1)
    best_s = _flat_witness(masks, signs, cfg.n)
    return best_s, bh_ratio(best_s).ratio, np.maximum.accumulate(ratios).tolist()


def search_bh_witness(cfg: SearchConfig) -> Witness:
    """Search the strategy's space for a large ``bh_lhs / sup`` quotient."""
    meta: dict[str, Any] = {
        "generator": GENERATOR_NAME,
        "substreams": "SeedSequence(seed, spawn_key=(restart,))",
        "seed": cfg.seed,
        "strategy": cfg.strategy,
        "n": cfg.n,
        "d": cfg.d,
        "homogeneous_only": cfg.homogeneous_only,
    }
    if cfg.strategy == "random-restart":
        s, ratio, trace = _random_restart(cfg)
        meta["restarts"] = cfg.iterations
    elif cfg.strategy == "sign-flip-local-search":
        s, ratio, trace, restarts = _local_search(cfg)
        meta["restarts"] = restarts
    else:
        s, ratio, trace = _exhaustive(cfg)
        meta["restarts"] = 1
    return Witness(s, ratio, "bh_ratio", trace, meta)


def max_part_ratio(f: BooleanFunction) -> tuple[float, int]:
    """Largest ``||f_m|| / ||f||`` over levels m and the level attaining it."""
    s = walsh_transform(f)
    sup = sup_norm(f)
    best, best_m = 0.0, 0
    for m in range(s.degree + 1):
        r = sup_norm(inverse_transform(homogeneous_part(s, m))) / sup if sup else 0.0
        if r > best:
            best, best_m = r, m
    return best, best_m


TABLE_COLUMNS = ("d", "n", "source", "strategy", "bh_ratio", "part_ratio", "part_m")


def ratio_table(d_range: Iterable[int], n_range: Iterable[int], cfg: SearchConfig) -> list[dict[str, Any]]:
    """Best observed BH quotient and homogeneous-part quotient per (n, d).

    Majority rows (n = d, odd d) are added for every odd d in range.  The
    exhaustive strategy falls back to local search when an instance has more
    than 20 coefficients.
    """
    d_range = sorted(set(d_range))
    n_range = sorted(set(n_range))
    rows = []
    for d in d_range:
        for n in n_range:
            if d > n:
                continue
            strategy = cfg.strategy
            sub = dataclasses.replace(cfg, n=n, d=d)
            if strategy == "flat-sign-exhaustive" and len(_search_masks(sub)) > MAX_EXHAUSTIVE_COEFFS:
                strategy = "sign-flip-local-search"
                sub = dataclasses.replace(sub, strategy=strategy)
            w = search_bh_witness(sub)
            part, part_m = max_part_ratio(inverse_transform(w.spectrum))
            rows.append(
                {"d": d, "n": n, "source": "search", "strategy": strategy,
                 "bh_ratio": w.ratio, "part_ratio": part, "part_m": part_m}
            )
        if d % 2 == 1:
            maj = majority(d)
            part, part_m = max_part_ratio(maj)
            rows.append(
                {"d": d, "n": d, "source": "majority", "strategy": "",
                 "bh_ratio": bh_ratio(walsh_transform(maj)).ratio, "part_ratio": part, "part_m": part_m}
            )
    rows.sort(key=lambda r: (r["d"], r["n"], r["source"]))
    return rows
