import math
import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quartic28 import theta

gammas = st.integers(min_value=1, max_value=63)


def test_counts_of_characteristics():
    assert len(theta.ODD) == 28
    assert len(theta.EVEN) == 36
    assert len(theta.TWO_TORSION) == 63


def test_tuple_sizes_and_fibers():
    assert all(len(theta.tuple12(g).members) == 12 for g in theta.TWO_TORSION)
    # every unordered pair of odd thetas is a pair of exactly one tuple
    fiber = (28 * 27 // 2) // 63
    assert fiber == 6
    seen = {}
    for g in theta.TWO_TORSION:
        assert len(theta.tuple12(g).pairs) == fiber
        for p in theta.tuple12(g).pairs:
            seen[p] = seen.get(p, 0) + 1
    assert len(seen) == 378 and set(seen.values()) == {1}


def test_every_odd_theta_lies_in_27_tuples():
    for t in theta.ODD:
        assert sum(t in theta.tuple12(g).members for g in theta.TWO_TORSION) == 27


def test_intersection_profile():
    prof = theta.intersection_profile()
    assert prof[0] == 4
    assert prof[1] % 3 == 0
    assert prof[1] == 6


def test_syzygetic_intersection_is_translate_of_isotropic_group():
    for g1, g2 in [(1, 2), (9, 18), (7, 56)]:
        if theta.weil(g1, g2):
            continue
        common = sorted(set(theta.tuple12(g1).members) & set(theta.tuple12(g2).members))
        base = common[0]
        diffs = {x ^ base for x in common}
        assert diffs == {0, g1, g2, g1 ^ g2}


@pytest.mark.parametrize("alpha", [1, 8, 9, 63])
def test_orbit_sizes(alpha):
    assert theta.orbit_sizes(alpha) == (1, 15, 16)


def test_pairing_orientation_and_statistic():
    assert theta.pairing_overlap_law(9) == "overlap"
    assert theta.pair_statistic_values() == (10, 2)
    assert 2 < theta.pair_threshold() <= 10


def test_aronhold_and_group_order():
    order = theta.sp6_order_formula()
    assert order == 2 ** 9 * (2 ** 2 - 1) * (2 ** 4 - 1) * (2 ** 6 - 1) == 1451520
    assert theta.sp6_order_by_counting() == order
    assert order == 63 * 30 * 12 * 8 ** 2
    # an Aronhold set has stabilizer S_7 acting simply transitively
    assert len(theta.aronhold_sets()) == order // math.factorial(7) == 288


def test_model_constants():
    c = theta.model_constants()
    assert (c["odd"], c["even"], c["two_torsion"], c["tuple_size"]) == (28, 36, 63, 12)
    assert (c["aronhold"], c["sp6_order"]) == (288, 1451520)


@given(gammas, gammas, gammas)
def test_weil_is_alternating_bilinear(a, b, c):
    assert theta.weil(a, a) == 0
    assert theta.weil(a, b) == theta.weil(b, a)
    assert theta.weil(a ^ b, c) == theta.weil(a, c) ^ theta.weil(b, c)
    assert theta.parity(a ^ b) == theta.parity(a) ^ theta.parity(b) ^ theta.weil(a, b)


@given(st.integers(min_value=0, max_value=2 ** 32))
def test_random_symmetry_preserves_structure(seed):
    labels, classes = theta.random_symmetry(random.Random(seed))
    for g in (1, 17, 42):
        mapped = {labels[t] for t in theta.tuple12(g).members}
        assert mapped == set(theta.tuple12(classes[g]).members)


def test_aronhold_sets_are_azygetic():
    for s in theta.aronhold_sets()[:20]:
        assert all(theta.is_azygetic_triple(*t) for t in combinations(s, 3))


def test_selftest_reports_ok_quickly():
    res = theta.selftest()
    assert res["ok"] and res["seconds"] < 1.0
