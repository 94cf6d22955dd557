import itertools
import math

import numpy as np
import pytest

from boolcube import CapacityError, FourierSpectrum, inverse_transform, walsh_transform
from boolcube.cube import homogeneous_part, sup_norm
from boolcube.inequalities import bh_ratio
from boolcube.search import (
    SearchConfig,
    homogeneous_part_ratio,
    majority,
    majority_part_norm,
    random_spectrum,
    ratio_table,
    search_bh_witness,
)


def test_majority():
    np.testing.assert_array_equal(majority(1).values, [1, -1])
    assert walsh_transform(majority(3)).coeffs == {1: 0.5, 2: 0.5, 4: 0.5, 7: -0.5}
    for d in (3, 5, 7):
        v = majority(d).values
        # x -> -x flips every bit, i.e. reverses the row order
        np.testing.assert_array_equal(v[::-1], -v)
    with pytest.raises(ValueError):
        majority(4)


def test_majority_part_norm_examples():
    assert majority_part_norm(3, 1) == 1.5
    assert majority_part_norm(3, 3) == 0.5
    s = walsh_transform(majority(5))
    assert majority_part_norm(5, 3) == pytest.approx(sup_norm(inverse_transform(homogeneous_part(s, 3))), abs=1e-12)
    with pytest.raises(ValueError):
        majority_part_norm(5, 2)


def test_majority_part_norm_matches_enumeration():
    for d in range(1, 14, 2):
        s = walsh_transform(majority(d))
        for m in range(1, d + 1, 2):
            enum = sup_norm(inverse_transform(homogeneous_part(s, m)))
            assert majority_part_norm(d, m) == pytest.approx(enum, abs=1e-12)


def test_homogeneous_part_ratio():
    rep = homogeneous_part_ratio(majority(3), 1)
    assert rep.lhs == pytest.approx(1.5) and rep.rhs == 3.0 and rep.passed
    f = inverse_transform(FourierSpectrum(3, {7: 2.0}))
    assert homogeneous_part_ratio(f, 3).ratio == pytest.approx(1.0 / 4.0)  # M_{3,3} = 4
    d = 11
    m = (d - 1) // 2  # odd for d = 11, so the part is nonzero
    rep = homogeneous_part_ratio(majority(d), m)
    assert rep.passed
    assert rep.lhs >= 2 ** (d / 2) / (4 * math.sqrt(d))


def test_random_spectrum():
    a = random_spectrum(5, 3, 123)
    b = random_spectrum(5, 3, 123)
    assert a.coeffs == b.coeffs
    h = random_spectrum(5, 3, 1, level_profile=[3])
    assert {bin(m).count("1") for m in h.coeffs} == {3}
    s = random_spectrum(6, 4, 2, normalize=True)
    assert sup_norm(inverse_transform(s)) == pytest.approx(1.0, abs=1e-12)
    f = random_spectrum(4, 2, 3, flat=True)
    assert set(np.abs(f.values)) == {1.0}
    with pytest.raises(CapacityError):
        random_spectrum(25, 1, 0)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(n=3, d=2, iterations=0)
    with pytest.raises(ValueError):
        SearchConfig(n=3, d=2, strategy="annealing")
    with pytest.raises(ValueError):
        SearchConfig(n=2, d=3)


@pytest.mark.parametrize("strategy", ["random-restart", "sign-flip-local-search", "flat-sign-exhaustive"])
def test_single_coefficient_ratio_is_one(strategy):
    w = search_bh_witness(SearchConfig(n=2, d=2, strategy=strategy, iterations=20, homogeneous_only=True))
    assert w.ratio == 1.0


def test_exhaustive_is_its_own_oracle():
    w = search_bh_witness(SearchConfig(n=2, d=2, strategy="flat-sign-exhaustive"))
    masks = [0, 1, 2, 3]
    ratios = [
        bh_ratio(FourierSpectrum(2, dict(zip(masks, signs)))).ratio
        for signs in itertools.product([1.0, -1.0], repeat=4)
    ]
    assert w.ratio == pytest.approx(max(ratios), abs=1e-15)
    assert w.ratio == pytest.approx(math.sqrt(2))
    assert len(w.trace) == 16


@pytest.mark.parametrize("strategy", ["random-restart", "sign-flip-local-search", "flat-sign-exhaustive"])
def test_witness_reproducible_and_deterministic(strategy):
    cfg = SearchConfig(n=4, d=2, strategy=strategy, iterations=60, seed=5)
    w = search_bh_witness(cfg)
    assert abs(bh_ratio(w.spectrum).ratio - w.ratio) <= 1e-9
    again = search_bh_witness(cfg)
    assert again.to_dict() == w.to_dict()
    assert all(b >= a for a, b in zip(w.trace, w.trace[1:]))
    assert w.meta["generator"] == "numpy.random.PCG64"


def test_more_iterations_never_hurt():
    for strategy in ("random-restart", "sign-flip-local-search"):
        small = search_bh_witness(SearchConfig(n=4, d=3, strategy=strategy, iterations=30, seed=2))
        big = search_bh_witness(SearchConfig(n=4, d=3, strategy=strategy, iterations=300, seed=2))
        assert big.ratio >= small.ratio
        assert big.trace[:30] == small.trace


def test_local_search_beats_its_start():
    cfg = SearchConfig(n=4, d=3, iterations=200, seed=3)
    w = search_bh_witness(cfg)
    assert w.ratio >= w.trace[0]


def test_exhaustive_capacity():
    with pytest.raises(CapacityError):
        search_bh_witness(SearchConfig(n=6, d=3, strategy="flat-sign-exhaustive"))


def test_ratio_table():
    cfg = SearchConfig(n=1, d=1, strategy="flat-sign-exhaustive", iterations=50, seed=1)
    rows = ratio_table(range(1, 4), range(1, 4), cfg)
    keys = [(r["d"], r["n"]) for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        if r["d"] == 1:
            assert r["bh_ratio"] == pytest.approx(1.0, abs=1e-12)
    assert {r["d"] for r in rows if r["source"] == "majority"} == {1, 3}
    maj3 = next(r for r in rows if r["source"] == "majority" and r["d"] == 3)
    assert maj3["bh_ratio"] == pytest.approx(2 ** (1 / 3))
    assert ratio_table(range(1, 4), range(1, 4), cfg) == rows
