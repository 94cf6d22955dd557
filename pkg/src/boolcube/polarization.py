"""Tetrahedral polynomials and their symmetric d-affine forms, two blocks at a time.

For a tetrahedral Q of degree <= d, the unique symmetric form L_Q that is
affine in each of its d vector arguments and satisfies L_Q(x, ..., x) = Q(x)
is evaluated here only at m copies of x and d - m copies of y.  On a monomial
x^S with |S| = k this gives

    sum_{T subset S} w[k][|T|] x^T y^(S minus T),
    w[k][j] = C(m, j) C(d-m, k-j) / (C(d, k) C(k, j)),

which is the equivalence-class bookkeeping ``|[j1]| |[j2]| / |[j1 + j2]|``
specialised to injective index maps.  ``two_block_oracle`` evaluates the same
quantity from the expectation (polarization) formula over sign vectors and is
kept independent of the weight table.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from boolcube.chebyshev import markov_number
from boolcube.cube import (
    FourierSpectrum,
    fwht,
    inverse_transform,
    mask_to_subset,
    point,
    sup_norm,
)
from boolcube.errors import CapacityError
from boolcube.report import DEFAULT_TOL, InequalityReport

MAX_PAIR_SCAN_N = 10
MAX_ORACLE_DEGREE = 12
_RANGE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class TetrahedralPoly:
    """The multilinear polynomial sum_S c_S prod_{i in S} x_i of a spectrum."""

    spectrum: FourierSpectrum

    @property
    def n(self) -> int:
        return self.spectrum.n

    @property
    def degree(self) -> int:
        return self.spectrum.degree

    def terms(self) -> list[tuple[int, float]]:
        return [(m, v) for m, v in self.spectrum.coeffs.items() if v != 0.0]

    def __call__(self, x) -> float:
        return eval_real(self, x)


def _check_point(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (n,):
        raise ValueError(f"expected a point of length {n}, got shape {x.shape}")
    if np.any(np.abs(x) > 1.0 + _RANGE_SLACK):
        raise ValueError("coordinates must lie in [-1, 1]")
    return x


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if (mask >> i) & 1]


def eval_real(q: TetrahedralPoly, x) -> float:
    x = _check_point(x, q.n)
    terms = np.array([v * math.prod(x[i] for i in _bits(m)) for m, v in q.terms()])
    return float(np.sum(terms)) if terms.size else 0.0


def class_size(indices: Sequence[int]) -> int:
    """Size of the permutation class of an index map: |A|! / prod_v (count of v)!."""
    counts = Counter(int(i) for i in indices)
    if any(v < 0 for v in counts):
        raise ValueError("indices must be non-negative")
    size = math.factorial(len(indices))
    for c in counts.values():
        size //= math.factorial(c)
    return size


@dataclass(frozen=True)
class TwoBlockForm:
    """Exact weights w[k][j] for an x-block of size m inside d slots."""

    d: int
    m: int
    weights: tuple[tuple[Fraction, ...], ...]

    def weight(self, k: int, j: int) -> Fraction:
        return self.weights[k][j]

    def float_weights(self) -> np.ndarray:
        out = np.zeros((self.d + 1, self.d + 1))
        for k, row in enumerate(self.weights):
            for j, w in enumerate(row):
                out[k, j] = float(w)
        return out


def two_block_weights(m: int, d: int) -> TwoBlockForm:
    if not 0 <= m <= d:
        raise ValueError(f"need 0 <= m <= d, got m={m}, d={d}")
    table = []
    for k in range(d + 1):
        row = []
        for j in range(k + 1):
            if max(0, k - (d - m)) <= j <= min(k, m):
                row.append(
                    Fraction(
                        math.comb(m, j) * math.comb(d - m, k - j),
                        math.comb(d, k) * math.comb(k, j),
                    )
                )
            else:
                row.append(Fraction(0))
        table.append(tuple(row))
    return TwoBlockForm(d, m, tuple(table))


def _submasks(mask: int) -> Iterable[int]:
    """Sub-masks of ``mask`` in ascending order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def two_block_eval(q: TetrahedralPoly, w: TwoBlockForm, x, y) -> float:
    """L_Q(x, .., x, y, .., y) with w.m copies of x and w.d - w.m copies of y."""
    if w.d < q.degree:
        raise ValueError(f"form arity {w.d} is below the degree {q.degree}")
    x = _check_point(x, q.n)
    y = _check_point(y, q.n)
    fw = w.float_weights()
    terms = []
    for mask, value in q.terms():
        k = mask.bit_count()
        for sub in _submasks(mask):
            j = sub.bit_count()
            if fw[k, j] == 0.0:
                continue
            px = math.prod(x[i] for i in _bits(sub))
            py = math.prod(y[i] for i in _bits(mask ^ sub))
            terms.append(value * fw[k, j] * px * py)
    return float(np.sum(terms)) if terms else 0.0


def two_block_table(q: TetrahedralPoly, w: TwoBlockForm) -> np.ndarray:
    """``T[rx, ry] = L_Q(x(rx)^m, y(ry)^(d-m))`` over all vertex pairs.

    The two-block form is a tetrahedral polynomial in (x, y) jointly with
    coefficient ``c_S w[|S|][|V|]`` on ``x^V y^(S minus V)``; its table is a
    Walsh transform along each axis.
    """
    if q.n > MAX_PAIR_SCAN_N:
        raise CapacityError(f"vertex-pair scan needs n <= {MAX_PAIR_SCAN_N}, got {q.n}")
    if w.d < q.degree:
        raise ValueError(f"form arity {w.d} is below the degree {q.degree}")
    fw = w.float_weights()
    size = 1 << q.n
    coef = np.zeros((size, size))
    for mask, value in q.terms():
        k = mask.bit_count()
        for sub in _submasks(mask):
            coef[sub, mask ^ sub] += value * fw[k, sub.bit_count()]
    by_y = fwht(coef)  # [x-part mask, y row]
    return fwht(by_y.T).T  # [x row, y row]


def _level_value(terms: list[tuple[int, float]], r: int, z: np.ndarray) -> float:
    return math.fsum(v * math.prod(z[i - 1] for i in mask_to_subset(m)) for m, v in terms if m.bit_count() == r)


def two_block_oracle(q: TetrahedralPoly, m: int, x, y, d: Optional[int] = None) -> float:
    """L_Q(x^m, y^(d-m)) from the expectation formula over xi in {-1, 1}^d.

    E_xi[ sum_r (xi_1 ... xi_d / d!) (xi_1 + ... + xi_d)^(d-r) Q_r(sum_k xi_k z_k) ]
    with z_k = x for k <= m and y otherwise.  Test oracle only: 2^d terms.
    """
    d = q.degree if d is None else d
    if d < q.degree:
        raise ValueError(f"arity {d} is below the degree {q.degree}")
    if d > MAX_ORACLE_DEGREE:
        raise CapacityError(f"oracle needs d <= {MAX_ORACLE_DEGREE}, got {d}")
    if not 0 <= m <= d:
        raise ValueError(f"need 0 <= m <= d, got m={m}, d={d}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    terms = q.terms()
    if d == 0:
        return math.fsum(v for _, v in terms)
    total = []
    for xi in itertools.product((1, -1), repeat=d):
        z = sum(xi[:m]) * x + sum(xi[m:]) * y
        s = sum(xi)
        sign = math.prod(xi)
        total.append(sign * math.fsum(s ** (d - r) * _level_value(terms, r, z) for r in range(d + 1)))
    return math.fsum(total) / (2**d * math.factorial(d))


def _pair_witness(table: np.ndarray, n: int) -> tuple[float, str]:
    a = np.abs(table)
    rx, ry = np.unravel_index(int(np.argmax(a)), a.shape)
    x = point(int(rx), n).astype(int).tolist()
    y = point(int(ry), n).astype(int).tolist()
    return float(a[rx, ry]), f"x={x}, y={y}"


def two_block_bound_check(q: TetrahedralPoly, m: int, tol: float = DEFAULT_TOL) -> InequalityReport:
    """max over vertex pairs of |L_Q(x^m, y^(d-m))| against 2 d^m ||Q||."""
    d = q.degree
    if not 0 <= 2 * m <= d:
        raise ValueError(f"need 0 <= m <= d/2, got m={m}, d={d}")
    table = two_block_table(q, two_block_weights(m, d))
    lhs, witness = _pair_witness(table, q.n)
    sup = sup_norm(inverse_transform(q.spectrum))
    return InequalityReport.build(
        "two_block_bound",
        lhs,
        2 * d**m * sup,
        tol=tol,
        witness=witness,
        params={"n": q.n, "d": d, "m": m, "sup": sup},
    )


def homogeneous_polarization_constant(k: int, d: int) -> Fraction:
    """M_{k,d} d^d / (k^k (d-k)^(d-k)) * k! (d-k)! / d!."""
    return Fraction(
        markov_number(k, d) * d**d * math.factorial(k) * math.factorial(d - k),
        k**k * (d - k) ** (d - k) * math.factorial(d),
    )


def homogeneous_polarization_check(q: TetrahedralPoly, k: int, tol: float = DEFAULT_TOL) -> InequalityReport:
    d = q.degree
    if any(mask.bit_count() != d for mask, _ in q.terms()):
        raise ValueError("polynomial is not homogeneous")
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    table = two_block_table(q, two_block_weights(k, d))
    lhs, witness = _pair_witness(table, q.n)
    sup = sup_norm(inverse_transform(q.spectrum))
    const = homogeneous_polarization_constant(k, d)
    return InequalityReport.build(
        "homogeneous_polarization",
        lhs,
        float(const) * sup,
        tol=tol,
        witness=witness,
        params={"n": q.n, "d": d, "k": k, "sup": sup, "constant": float(const)},
    )


def class_ratio(j1: Sequence[int], j2: Sequence[int]) -> Fraction:
    """|[j1 + j2]| / (|[j1]| |[j2]|) for the direct sum of two index maps."""
    return Fraction(class_size(list(j1) + list(j2)), class_size(j1) * class_size(j2))


def random_affine_pair(m: int, d: int, n: int, rng: np.random.Generator) -> tuple[list[int], list[int]]:
    """Index maps on blocks of size m and d - m, injective off the zeros."""
    support = rng.random(d) < 0.5
    if support.sum() > n:
        keep = rng.choice(np.flatnonzero(support), size=n, replace=False)
        support[:] = False
        support[keep] = True
    labels = iter(rng.permutation(np.arange(1, n + 1)).tolist())
    idx = [next(labels) if s else 0 for s in support]
    return idx[:m], idx[m:]


def class_ratio_check(m: int, d: int, trials: int, seed, n: Optional[int] = None) -> InequalityReport:
    """Exact check of |[j1 + j2]| / (|[j1]| |[j2]|) <= C(d, m) on random affine pairs."""
    if not 0 <= m <= d or d > MAX_ORACLE_DEGREE:
        raise ValueError(f"need 0 <= m <= d <= {MAX_ORACLE_DEGREE}, got m={m}, d={d}")
    n = d if n is None else n
    rng = np.random.default_rng(seed)
    bound = math.comb(d, m)
    worst = Fraction(-1)
    worst_pair: tuple[list[int], list[int]] = ([], [])
    for _ in range(trials):
        j1, j2 = random_affine_pair(m, d, n, rng)
        r = class_ratio(j1, j2)
        if r > worst:
            worst, worst_pair = r, (j1, j2)
    return InequalityReport.build(
        "class_ratio",
        float(worst),
        float(bound),
        tol=0.0,
        witness=f"j1={worst_pair[0]}, j2={worst_pair[1]}",
        params={"d": d, "m": m, "n": n, "trials": trials},
    )
