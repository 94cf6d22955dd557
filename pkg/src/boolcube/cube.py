"""Functions on {-1, 1}^n, their Fourier-Walsh spectra, norms and noise.

Row ``r`` of a value table is the point ``x(r)`` with ``x_i = -1`` exactly when
bit ``i - 1`` of ``r`` is set, so row 0 is the all-ones point and
``chi_S(x(r)) = (-1) ** popcount(r & S)``.  Subsets are bit masks in the same
convention (bit ``i - 1`` set iff ``i`` is in ``S``).

All reductions go through numpy's pairwise ``sum`` over contiguous arrays in a
fixed order, so results do not depend on how the work is scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from boolcube.errors import CapacityError

MAX_DENSE_N = 24
DROP_TOL = 1e-14


def check_dense(n: int) -> None:
    if n > MAX_DENSE_N:
        raise CapacityError(f"n={n} exceeds the dense limit n <= {MAX_DENSE_N}")


def popcount(masks) -> np.ndarray:
    return np.bitwise_count(np.asarray(masks, dtype=np.uint64)).astype(np.int64)


def rows(n: int) -> np.ndarray:
    check_dense(n)
    return np.arange(1 << n, dtype=np.uint64)


def points(n: int) -> np.ndarray:
    """All 2^n cube points as a (2^n, n) float array in row order."""
    r = rows(n)
    bits = (r[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & np.uint64(1)
    return 1.0 - 2.0 * bits.astype(np.float64)


def point(row: int, n: int) -> np.ndarray:
    return np.array([-1.0 if (row >> i) & 1 else 1.0 for i in range(n)])


def row_of(x: Iterable[float]) -> int:
    return sum(1 << i for i, xi in enumerate(x) if xi < 0)


def character(mask: int, n: int) -> np.ndarray:
    """The Walsh character x -> x^S as a length-2^n table."""
    parity = popcount(rows(n) & np.uint64(mask)) & 1
    return 1.0 - 2.0 * parity


def subset_to_mask(subset: Iterable[int]) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << (int(i) - 1)
    return mask


def mask_to_subset(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1]


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly along the last axis."""
    a = np.array(values, dtype=np.float64)
    size = a.shape[-1]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    lead = a.shape[:-1]
    h = 1
    while h < size:
        a = a.reshape(*lead, -1, 2, h)
        lo = a[..., 0, :]
        hi = a[..., 1, :]
        a = np.stack((lo + hi, lo - hi), axis=-2)
        h *= 2
    return a.reshape(*lead, size)


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """Dense table of ``f(x(r))`` for every row ``r``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        check_dense(self.n)
        vals = np.array(self.values, dtype=np.float64).reshape(-1)
        if vals.shape[0] != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} values, got {vals.shape[0]}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[np.ndarray], np.ndarray]) -> "BooleanFunction":
        """Tabulate ``fn`` on the (2^n, n) array of points."""
        return cls(n, np.asarray(fn(points(n)), dtype=np.float64))

    @classmethod
    def constant(cls, n: int, c: float) -> "BooleanFunction":
        return cls(n, np.full(1 << n, float(c)))

    def __call__(self, x: Iterable[float]) -> float:
        return float(self.values[row_of(x)])

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    """Sparse map from subset mask to Fourier coefficient."""

    n: int
    coeffs: Mapping[int, float]
    degree: int = field(init=False)

    def __post_init__(self):
        limit = 1 << self.n
        clean = {}
        for mask, value in sorted(self.coeffs.items()):
            mask = int(mask)
            value = float(value)
            if mask < 0 or mask >= limit:
                raise ValueError(f"mask {mask:#b} does not fit in n={self.n} bits")
            if not math.isfinite(value):
                raise ValueError(f"coefficient for mask {mask:#b} is not finite")
            clean[mask] = value
        object.__setattr__(self, "coeffs", clean)
        deg = max((m.bit_count() for m, v in clean.items() if v != 0.0), default=0)
        object.__setattr__(self, "degree", deg)

    @classmethod
    def from_dense(cls, n: int, dense: np.ndarray, drop_tol: float = DROP_TOL) -> "FourierSpectrum":
        idx = np.flatnonzero(np.abs(dense) > drop_tol)
        return cls(n, {int(i): float(dense[i]) for i in idx})

    @classmethod
    def from_subsets(cls, n: int, items: Mapping[tuple, float]) -> "FourierSpectrum":
        return cls(n, {subset_to_mask(s): v for s, v in items.items()})

    def to_dense(self) -> np.ndarray:
        check_dense(self.n)
        out = np.zeros(1 << self.n)
        for mask, value in self.coeffs.items():
            out[mask] = value
        return out

    @property
    def masks(self) -> np.ndarray:
        return np.fromiter(self.coeffs.keys(), dtype=np.uint64, count=len(self.coeffs))

    @property
    def values(self) -> np.ndarray:
        return np.fromiter(self.coeffs.values(), dtype=np.float64, count=len(self.coeffs))

    def get(self, mask: int) -> float:
        return self.coeffs.get(mask, 0.0)

    def scaled(self, c: float) -> "FourierSpectrum":
        return FourierSpectrum(self.n, {m: c * v for m, v in self.coeffs.items()})

    def nonzero(self) -> "FourierSpectrum":
        return FourierSpectrum(self.n, {m: v for m, v in self.coeffs.items() if v != 0.0})

    def __len__(self) -> int:
        return len(self.coeffs)


def walsh_transform(f: BooleanFunction, drop_tol: float = DROP_TOL) -> FourierSpectrum:
    """All coefficients ``E[f chi_S]`` via the O(n 2^n) butterfly."""
    dense = fwht(f.values) / float(1 << f.n)
    return FourierSpectrum.from_dense(f.n, dense, drop_tol)


def inverse_transform(s: FourierSpectrum) -> BooleanFunction:
    return BooleanFunction(s.n, fwht(s.to_dense()))


def degree(s: FourierSpectrum) -> int:
    return s.degree


def homogeneous_part(s: FourierSpectrum, m: int) -> FourierSpectrum:
    if not 0 <= m <= s.n:
        raise ValueError(f"level m={m} outside 0..{s.n}")
    return FourierSpectrum(s.n, {k: v for k, v in s.coeffs.items() if k.bit_count() == m})


def sup_argmax(f: BooleanFunction) -> tuple[float, int]:
    """``max_x |f(x)|`` and the first row attaining it."""
    a = np.abs(f.values)
    r = int(np.argmax(a))
    return float(a[r]), r


def sup_norm(f: BooleanFunction) -> float:
    # the tetrahedral extension of f is affine in each coordinate, so its sup
    # over [-1, 1]^n is attained at a vertex
    return sup_argmax(f)[0]


def p_norm(f: BooleanFunction, p: float) -> float:
    if p < 1:
        raise ValueError(f"p={p} < 1 is not a norm")
    if math.isinf(p):
        return sup_norm(f)
    a = np.abs(f.values)
    if p == 1:
        return float(np.sum(a) / a.shape[0])
    if p == 2:
        return float(math.sqrt(np.sum(a * a) / a.shape[0]))
    scale = a.max()
    if scale == 0.0:
        return 0.0
    # scale first so |f|^p cannot overflow for large p
    return float(scale * (np.sum((a / scale) ** p) / a.shape[0]) ** (1.0 / p))


def noise_operator(s: FourierSpectrum, rho: float) -> FourierSpectrum:
    """Multiply the level-|S| coefficient by ``rho ** |S|``."""
    return FourierSpectrum(s.n, {m: v * rho ** m.bit_count() for m, v in s.coeffs.items()})


def _squares(s: FourierSpectrum) -> tuple[np.ndarray, np.ndarray]:
    v = s.values
    return s.masks, v * v


def variance(s: FourierSpectrum) -> float:
    masks, sq = _squares(s)
    return float(np.sum(sq[masks != 0]))


def influence(s: FourierSpectrum, j: int) -> float:
    if not 1 <= j <= s.n:
        raise ValueError(f"coordinate j={j} outside 1..{s.n}")
    masks, sq = _squares(s)
    return float(np.sum(sq[(masks >> np.uint64(j - 1)) & np.uint64(1) == 1]))


def influences(s: FourierSpectrum) -> np.ndarray:
    return np.array([influence(s, j) for j in range(1, s.n + 1)])


def max_influence(s: FourierSpectrum) -> tuple[float, int]:
    """Largest influence and its coordinate; ties go to the smallest j."""
    if s.n == 0:
        return 0.0, 0
    inf = influences(s)
    j = int(np.argmax(inf))
    return float(inf[j]), j + 1


def total_influence(s: FourierSpectrum) -> float:
    masks, sq = _squares(s)
    return float(np.sum(popcount(masks) * sq))
