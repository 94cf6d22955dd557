"""Seeded verification suites behind ``boolcube verify``.

Each suite draws from its own generator, seeded by ``(seed, suite index)``, so
suites give the same reports whether run alone, together, or concurrently.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from boolcube import chebyshev as cm
from boolcube import inequalities as ineq
from boolcube import polarization as pol
from boolcube.cube import BooleanFunction, inverse_transform, walsh_transform
from boolcube.report import DEFAULT_TOL, InequalityReport
from boolcube.search import random_spectrum


@dataclass(frozen=True)
class SuiteParams:
    n: int = 5
    d: int = 4
    seed: int = 0
    trials: int = 20
    tol: float = DEFAULT_TOL


@dataclass
class SuiteResult:
    suite: str
    reports: list[InequalityReport]
    params: SuiteParams
    wall_time: float = 0.0
    per_suite: dict[str, dict[str, int]] = field(default_factory=dict)

    @property
    def counts(self) -> dict[str, int]:
        return _counts(self.reports)

    @property
    def ok(self) -> bool:
        return self.counts["fail"] == 0

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "suite": self.suite,
            "config": vars(self.params).copy(),
            "counts": self.counts,
        }
        if self.per_suite:
            out["suites"] = self.per_suite
        if timing:
            out["wall_time"] = self.wall_time
        out["reports"] = [r.to_dict() for r in self.reports]
        return out


def _counts(reports: list[InequalityReport]) -> dict[str, int]:
    return {
        "pass": sum(r.passed is True for r in reports),
        "fail": sum(r.passed is False for r in reports),
        "unasserted": sum(r.passed is None for r in reports),
    }


def _bound(name: str, value: float, limit: float, **params) -> InequalityReport:
    return InequalityReport.build(name, value, limit, tol=0.0, params=params)


def _random_function(n: int, d: int, rng: np.random.Generator) -> BooleanFunction:
    return inverse_transform(random_spectrum(n, d, rng, normalize=True))


def suite_fourier(p: SuiteParams, rng: np.random.Generator) -> list[InequalityReport]:
    out = []
    for _ in range(p.trials):
        n = int(rng.integers(1, p.n + 1))
        f = BooleanFunction(n, rng.standard_normal(1 << n))
        s = walsh_transform(f)
        err = float(np.max(np.abs(inverse_transform(s).values - f.values)))
        energy = float(np.mean(f.values**2))
        parseval = abs(float(np.sum(s.values**2)) - energy) / energy
        out.append(_bound("roundtrip", err, 1e-12, n=n))
        out.append(_bound("parseval", parseval, 1e-9, n=n))
    return out


def suite_hyper(p: SuiteParams, rng: np.random.Generator) -> list[InequalityReport]:
    out = []
    for _ in range(p.trials):
        n = int(rng.integers(1, p.n + 1))
        d = int(rng.integers(1, min(p.d, n) + 1))
        f = _random_function(n, d, rng)
        for q in (1.0, 4 / 3, 1.5, 2.0):
            out.append(ineq.hypercontractivity_check(f, q, p.tol))
        out.append(ineq.noise_contraction_check(f, 2.0, 4.0, 1 / math.sqrt(3), p.tol))
    return out


def suite_blei(p: SuiteParams, rng: np.random.Generator) -> list[InequalityReport]:
    out = []
    for _ in range(p.trials):
        d = int(rng.integers(1, min(p.d, 4) + 1))
        n = int(rng.integers(1, min(p.n, 4) + 1))
        a = rng.standard_normal((n,) * d)
        out.extend(ineq.blei_check(a, k, p.tol) for k in range(1, d + 1))
    return out


def suite_polarization(p: SuiteParams, rng: np.random.Generator) -> list[InequalityReport]:
    out = []
    n_max = min(p.n, 5)
    for _ in range(p.trials):
        n = int(rng.integers(1, n_max + 1))
        d = int(rng.integers(1, min(p.d, n, 5) + 1))
        q = pol.TetrahedralPoly(random_spectrum(n, d, rng))
        m = int(rng.integers(0, d + 1))
        x = rng.uniform(-1, 1, n)
        y = rng.uniform(-1, 1, n)
        dev = abs(
            pol.two_block_eval(q, pol.two_block_weights(m, d), x, y) - pol.two_block_oracle(q, m, x, y)
        )
        out.append(_bound("oracle_equivalence", dev, 1e-9, n=n, d=d, m=m))
        n4 = min(n, 4)
        d4 = min(d, n4)
        q4 = pol.TetrahedralPoly(random_spectrum(n4, d4, rng))
        out.extend(pol.two_block_bound_check(q4, mm, p.tol) for mm in range(d4 // 2 + 1))
        h = pol.TetrahedralPoly(random_spectrum(n4, d4, rng, level_profile=[d4]))
        out.extend(pol.homogeneous_polarization_check(h, k, p.tol) for k in range(1, d4 + 1))
    for d in range(1, max(p.d, 2) + 1):
        for m in range(d + 1):
            out.append(pol.class_ratio_check(m, d, p.trials, rng))
    return out


def suite_markov(p: SuiteParams, rng: np.random.Generator) -> list[InequalityReport]:
    out = []
    d_top = min(max(p.d, 1), cm.MAX_EXACT_DEGREE)
    for d in range(1, d_top + 1):
        for _ in range(p.trials):
            out.append(cm.markov_coefficient_check(cm.UnivariatePoly(rng.standard_normal(d + 1)), d))
        ratios = cm.markov_ratios(cm.chebyshev(d), d)
        worst = max(abs(ratios[m] - 1.0) for m in range(d % 2, d + 1, 2))
        out.append(_bound("chebyshev_attains_markov", worst, 1e-6, d=d))
        out.append(_bound("leading_markov_number", abs(cm.markov_number(d, d) - 2 ** (d - 1)), 0.0, d=d))
    for d, v in enumerate(cm.markov_growth_trace(d_top), start=1):
        out.append(InequalityReport.build("markov_growth", v, 1 + math.sqrt(2), tol=1e-12, params={"d": d}))
    return out


def suite_psi(p: SuiteParams, rng: np.random.Generator) -> list[InequalityReport]:
    out = []
    d_top = min(max(p.d, 1), cm.MAX_PSI_DEGREE)
    for d in range(1, d_top + 1):
        exact = np.array([cm.cheb_psi_coeff(k, d) for k in range(d + 1)], dtype=float)
        got = cm.psi_expand(cm.chebyshev(d), d).a
        rel = float(np.max(np.abs(got - exact) / np.abs(exact)))
        sign_ok = bool(np.all(np.sign(got) == np.sign(exact)))
        out.append(_bound("psi_chebyshev", rel if sign_ok else math.inf, 1e-6, d=d))
        for _ in range(p.trials):
            poly = cm.UnivariatePoly(rng.standard_normal(d + 1))
            sup, _ = cm.interval_sup(poly)
            a = cm.psi_expand(poly, d).a / sup
            k = int(np.argmax(np.abs(a) / np.abs(exact)))
            out.append(
                InequalityReport.build(
                    "psi_extremality", abs(a[k]), abs(exact[k]), tol=1e-6, params={"d": d, "n": k}
                )
            )
        for m in range(d // 2 + 1):
            c = cm.two_block_constant(m, d)
            out.append(InequalityReport.build("two_block_constant", float(c.value), c.cap, tol=0.0, params={"d": d, "m": m}))
    return out


def suite_lorentz(p: SuiteParams, rng: np.random.Generator) -> list[InequalityReport]:
    out = []
    for _ in range(p.trials):
        n = int(rng.integers(1, p.n + 1))
        d = int(rng.integers(1, min(p.d, n) + 1))
        out.append(ineq.lorentz_dominance_check(random_spectrum(n, d, rng), p.tol))
    return out


def suite_aa(p: SuiteParams, rng: np.random.Generator) -> list[InequalityReport]:
    out = []
    for _ in range(p.trials):
        n = int(rng.integers(1, p.n + 1))
        d = int(rng.integers(1, min(p.d, n) + 1))
        out.append(ineq.aa_ratio(random_spectrum(n, d, rng), p.tol))
        nf = int(rng.integers(1, min(p.n, 5) + 1))
        df = int(rng.integers(1, min(2, nf) + 1))
        signs = {m: int(rng.choice([-1, 1])) for m in range(1, 1 << nf)}
        out.append(ineq.aa_flat_case(nf, df, 1.0, signs, p.tol))
    return out


SUITES: dict[str, Callable[[SuiteParams, np.random.Generator], list[InequalityReport]]] = {
    "fourier": suite_fourier,
    "hyper": suite_hyper,
    "blei": suite_blei,
    "polarization": suite_polarization,
    "markov": suite_markov,
    "psi": suite_psi,
    "lorentz": suite_lorentz,
    "aa": suite_aa,
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def _run_one(name: str, params: SuiteParams) -> list[InequalityReport]:
    index = list(SUITES).index(name)
    rng = np.random.default_rng([params.seed, index])
    return SUITES[name](params, rng)


def run_suite(name: str, params: SuiteParams, threads: int = 1) -> SuiteResult:
    if name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    names = list(SUITES) if name == "all" else [name]
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(lambda s: _run_one(s, params), names))
    reports = [r for batch in results for r in batch]
    per_suite = {s: _counts(batch) for s, batch in zip(names, results)} if name == "all" else {}
    return SuiteResult(name, reports, params, time.perf_counter() - start, per_suite)
