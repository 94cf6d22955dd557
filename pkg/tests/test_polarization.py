import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from boolcube import FourierSpectrum, inverse_transform
from boolcube.cube import points
from boolcube.polarization import (
    TetrahedralPoly,
    class_ratio,
    class_ratio_check,
    class_size,
    eval_real,
    homogeneous_polarization_check,
    homogeneous_polarization_constant,
    two_block_bound_check,
    two_block_eval,
    two_block_oracle,
    two_block_table,
    two_block_weights,
)
from boolcube.search import random_spectrum


def poly(n, coeffs):
    return TetrahedralPoly(FourierSpectrum(n, coeffs))


def random_poly(rng, n, d, levels=None):
    return TetrahedralPoly(random_spectrum(n, d, rng, level_profile=levels))


def test_eval_real_on_vertices_and_origin():
    q = random_poly(np.random.default_rng(0), 4, 3)
    table = inverse_transform(q.spectrum).values
    for row, x in enumerate(points(4)):
        assert eval_real(q, x) == pytest.approx(table[row], abs=1e-14)
    assert eval_real(q, np.zeros(4)) == q.spectrum.get(0)
    with pytest.raises(ValueError):
        eval_real(q, [1.5, 0, 0, 0])


def test_class_size():
    assert class_size([3, 1, 2, 4]) == 24
    assert class_size([2, 2, 2]) == 1
    assert class_size([0, 0, 1, 2]) == 12


def test_weight_examples():
    w0 = two_block_weights(0, 3)
    assert all(w0.weight(k, 0) == 1 for k in range(4))
    wd = two_block_weights(3, 3)
    assert all(wd.weight(k, k) == 1 for k in range(4))
    assert two_block_weights(1, 3).weight(2, 1) == Fraction(1, 3)


@pytest.mark.parametrize("d", range(0, 8))
def test_weights_diagonal_consistency(d):
    for m in range(d + 1):
        w = two_block_weights(m, d)
        for k in range(d + 1):
            assert sum(w.weight(k, j) * math.comb(k, j) for j in range(k + 1)) == 1


def test_weight_table_swap_symmetry():
    for d in range(1, 7):
        for m in range(d + 1):
            a, b = two_block_weights(m, d), two_block_weights(d - m, d)
            for k in range(d + 1):
                for j in range(k + 1):
                    assert a.weight(k, j) == b.weight(k, k - j)


def test_single_monomial_full_block():
    q = poly(3, {0b111: 2.0})
    x = np.array([0.5, -0.25, 0.8])
    y = np.array([0.1, 0.2, 0.3])
    assert two_block_eval(q, two_block_weights(3, 3), x, y) == pytest.approx(2.0 * np.prod(x))


def test_oracle_equivalence_random():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 6))
        d = int(rng.integers(1, n + 1))
        q = random_poly(rng, n, d)
        m = int(rng.integers(0, d + 1))
        x, y = rng.uniform(-1, 1, (2, n))
        worst = max(worst, abs(two_block_eval(q, two_block_weights(m, d), x, y) - two_block_oracle(q, m, x, y)))
    assert worst <= 1e-9


def test_oracle_trivial_cases():
    q = random_poly(np.random.default_rng(1), 3, 3)
    x = np.array([0.2, -0.7, 0.4])
    assert two_block_oracle(q, 3, x, x) == pytest.approx(eval_real(q, x), abs=1e-12)
    assert two_block_oracle(poly(3, {0: 1.75}), 0, x, x) == 1.75


def test_diagonal_and_swap_on_points():
    rng = np.random.default_rng(7)
    for _ in range(20):
        q = random_poly(rng, 4, 4)
        d = q.degree
        x, y = rng.uniform(-1, 1, (2, 4))
        for m in range(d + 1):
            assert two_block_eval(q, two_block_weights(m, d), x, x) == pytest.approx(eval_real(q, x), abs=1e-12)
            a = two_block_eval(q, two_block_weights(m, d), x, y)
            b = two_block_eval(q, two_block_weights(d - m, d), y, x)
            assert a == pytest.approx(b, abs=1e-12)


def test_multiaffine_in_each_coordinate():
    rng = np.random.default_rng(8)
    q = random_poly(rng, 4, 4)
    w = two_block_weights(2, q.degree)
    x, y = rng.uniform(-1, 1, (2, 4))
    for i in range(4):
        vals = []
        for t in (-1.0, 0.0, 1.0):
            xt = x.copy()
            xt[i] = t
            vals.append(two_block_eval(q, w, xt, y))
        assert vals[1] == pytest.approx((vals[0] + vals[2]) / 2, abs=1e-12)


def test_product_distribution_expectation():
    rng = np.random.default_rng(9)
    q = random_poly(rng, 4, 4)
    prob = rng.uniform(0, 1, 4)  # P(x_i = +1)
    expect = 0.0
    for x in itertools.product([1.0, -1.0], repeat=4):
        weight = np.prod([p if xi > 0 else 1 - p for p, xi in zip(prob, x)])
        expect += weight * eval_real(q, np.array(x))
    assert eval_real(q, 2 * prob - 1) == pytest.approx(expect, abs=1e-12)


def test_table_matches_pointwise_eval():
    rng = np.random.default_rng(10)
    q = random_poly(rng, 3, 3)
    w = two_block_weights(1, 3)
    T = two_block_table(q, w)
    pts = points(3)
    for rx, ry in itertools.product(range(8), repeat=2):
        assert T[rx, ry] == pytest.approx(two_block_eval(q, w, pts[rx], pts[ry]), abs=1e-12)


def test_two_block_bound_examples():
    rep = two_block_bound_check(poly(2, {0b11: 1.0}), 1)
    assert rep.lhs == pytest.approx(1.0) and rep.rhs == 4.0 and rep.passed
    q = random_poly(np.random.default_rng(11), 3, 2)
    rep0 = two_block_bound_check(q, 0)
    assert rep0.lhs == pytest.approx(rep0.params["sup"])
    for m in (1, 2):
        assert two_block_bound_check(random_poly(np.random.default_rng(m), 4, 4), m).passed
    with pytest.raises(ValueError):
        two_block_bound_check(q, 2)


def test_homogeneous_polarization_examples():
    assert homogeneous_polarization_constant(1, 2) == 2
    for d in range(1, 6):
        assert homogeneous_polarization_constant(d, d) == 2 ** (d - 1)
    rep = homogeneous_polarization_check(poly(2, {0b11: 1.0}), 1)
    assert rep.lhs == pytest.approx(1.0) and rep.rhs == pytest.approx(2.0)
    rng = np.random.default_rng(12)
    for k in (1, 2):
        assert homogeneous_polarization_check(random_poly(rng, 4, 3, levels=[3]), k).passed
    with pytest.raises(ValueError):
        homogeneous_polarization_check(poly(2, {1: 1.0, 3: 1.0}), 1)


def test_class_ratio_examples():
    # fully supported, injective maps: d! / (m! (d-m)!)
    assert class_ratio([1, 2], [3, 4, 5]) == math.comb(5, 2)
    assert class_ratio([0, 0], [1, 2, 3]) <= math.comb(5, 2)
    for d in range(1, 11):
        for m in range(d + 1):
            assert class_ratio_check(m, d, 100, seed=d * 31 + m).passed
