import math

import numpy as np
import pytest

from northshield.jsr import (
    BudgetExceeded,
    JsrBounds,
    MatrixSet,
    finiteness_check,
    float_word_product,
    jsr_bounds,
    jsr_lower_bound,
    jsr_upper_bound,
    northshield_set,
    spectral_radius,
    stern_set,
    word_product,
)
from northshield.linrep import QMatrix
from northshield.quadfield import QuadInt, QuadRat

PHI = (1 + math.sqrt(5)) / 2
SILVER = 1 + math.sqrt(2)
R2 = QuadRat(QuadInt(0, 1))


def test_word_product_examples():
    assert word_product(stern_set(), [0, 1]) == QMatrix.of([[2, 1], [1, 1]])
    assert word_product(stern_set(), []) == QMatrix.identity(2)
    assert word_product(northshield_set(), [1, 1]) == QMatrix.of([[3, 2 * R2], [2 * R2, 3]])
    with pytest.raises(ValueError):
        word_product(stern_set(), [2])


def test_spectral_radius_examples():
    b1 = northshield_set().matrices[1]
    assert spectral_radius(b1) == pytest.approx(SILVER, abs=1e-15)
    assert spectral_radius(QMatrix.of([[2, 1], [1, 1]])) == pytest.approx(PHI**2, abs=1e-15)
    assert spectral_radius(QMatrix.identity(2)) == 1.0
    # rotation-like: complex pair of modulus √det
    assert spectral_radius(QMatrix.of([[0, -2], [1, 0]])) == pytest.approx(math.sqrt(2))


def test_spectral_radius_agrees_with_numpy():
    rng = np.random.default_rng(0)
    for _ in range(200):
        ints = rng.integers(-9, 10, size=(2, 2))
        m = QMatrix.of(ints.tolist())
        assert spectral_radius(m) == pytest.approx(np.max(np.abs(np.linalg.eigvals(ints))), abs=1e-9)
    m3 = QMatrix.of([[2, 0, 0], [0, 1, 1], [0, 0, 3]])
    assert spectral_radius(m3) == pytest.approx(3.0)


def test_lower_bound_examples():
    val, word = jsr_lower_bound(stern_set(), 2)
    assert val == pytest.approx(PHI, abs=1e-9) and word == [0, 1]
    val, word = jsr_lower_bound(northshield_set(), 1)
    assert val == pytest.approx(SILVER, abs=1e-12) and word == [1]
    single = MatrixSet([QMatrix.of([[1, 2], [3, 4]])])
    assert jsr_lower_bound(single, 1)[0] == pytest.approx(spectral_radius(single.matrices[0]))


def test_lower_bound_prefers_shortest_lexicographic_witness():
    val, word = jsr_lower_bound(stern_set(), 6)
    assert word == [0, 1]
    assert val == pytest.approx(PHI, abs=1e-9)


def test_upper_bound_examples():
    assert jsr_upper_bound(northshield_set(), 1) == pytest.approx(SILVER, abs=1e-12)
    assert jsr_upper_bound(stern_set(), 1) == 2.0
    beta16 = jsr_upper_bound(stern_set(), 16)
    assert PHI <= beta16 <= 1.65
    # frozen from the unpruned exhaustive scan: (A0A1)^8 has row sum F(18) = 2584
    assert beta16 == pytest.approx(2584 ** (1 / 16), rel=1e-12)


def test_upper_bound_prune_and_workers_do_not_change_result():
    for mset, n in ((stern_set(), 12), (northshield_set(), 7)):
        plain = jsr_upper_bound(mset, n, prune=False)
        assert jsr_upper_bound(mset, n, prune=True) == plain
        assert jsr_upper_bound(mset, n, workers=2) == plain


def test_upper_bound_matches_brute_force_enumeration():
    import itertools

    mset = stern_set()
    n = 8
    best = max(
        np.max(np.sum(np.abs(float_word_product(mset, w)), axis=1))
        for w in itertools.product(range(2), repeat=n)
    )
    assert jsr_upper_bound(mset, n) == pytest.approx(best ** (1 / n), rel=1e-14)


def test_upper_bound_nonincreasing_under_doubling():
    for mset in (stern_set(), northshield_set()):
        for n in (1, 2, 4, 8):
            if mset.k ** (2 * n) > 2**20:
                continue
            assert jsr_upper_bound(mset, 2 * n) <= jsr_upper_bound(mset, n) + 1e-9


def test_lower_not_above_upper():
    for mset, lens in ((stern_set(), [(1, 1), (2, 4), (4, 16)]), (northshield_set(), [(1, 1), (2, 3), (3, 6)])):
        for lo_len, up_len in lens:
            b = jsr_bounds(mset, lo_len, up_len)
            assert b.lower <= b.upper + 1e-9


def test_singleton_b1():
    b1 = MatrixSet([northshield_set().matrices[1]])
    b = jsr_bounds(b1, 1, 1)
    r = spectral_radius(b1.matrices[0])
    assert abs(b.lower - r) < 1e-12 and abs(b.upper - r) < 1e-12


def test_exact_products_match_float_shadows():
    rng = np.random.default_rng(1)
    for mset in (stern_set(), northshield_set()):
        for length in range(0, 17):
            word = rng.integers(0, mset.k, size=length).tolist()
            exact = np.array(word_product(mset, word).to_float())
            approx = float_word_product(mset, word)
            assert np.allclose(approx, exact, rtol=1e-9, atol=0)


def test_budget():
    with pytest.raises(BudgetExceeded):
        jsr_upper_bound(stern_set(), 21)
    with pytest.raises(BudgetExceeded):
        jsr_lower_bound(northshield_set(), 13)
    assert jsr_upper_bound(stern_set(), 3, budget=8) == pytest.approx(jsr_upper_bound(stern_set(), 3))


def test_finiteness_checks():
    ns = northshield_set()
    b = jsr_bounds(ns, 1, 1)
    rep = finiteness_check(ns, [1], b)
    assert rep.certified and abs(b.lower - SILVER) < 1e-9 and abs(b.upper - SILVER) < 1e-9

    ss = stern_set()
    b = jsr_bounds(ss, 2, 16)
    rep = finiteness_check(ss, [0, 1], b)
    assert not rep.certified
    assert 0 < rep.gap <= 0.032

    rep = finiteness_check(ss, [0], JsrBounds(1.0, 2.0, [0], 1, 1))
    assert rep.product_radius == 1.0 and not rep.certified
    with pytest.raises(ValueError):
        finiteness_check(ss, [], b)


def test_bounds_json():
    b = jsr_bounds(northshield_set(), 1, 1)
    assert set(b.to_json()) == {"lower", "upper", "lower_witness", "lower_len", "upper_len"}
