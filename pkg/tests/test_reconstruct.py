import numpy as np
import pytest

from corpus import bitangent_set, lines, quartic, structure
from quartic28.errors import DegenerateConfiguration, GeneralPositionFailure, InconsistentPairing
from quartic28.numerics import HomPoly, proj_distance
from quartic28.reconstruct import (
    aronhold_quartic,
    compare_proportional,
    complete_from_nine,
    reconstruct,
    refine,
    select_aronhold,
)
from quartic28.solver import bitangent_residuals, bitangents


def test_compare_proportional_examples():
    a = HomPoly(4, np.arange(1, 16) + 0j)
    assert compare_proportional(a, a.scaled(-3j)) < 1e-15
    b = HomPoly(4, a.coeffs + np.eye(15)[0])
    assert compare_proportional(a, b) > 1e-3
    with pytest.raises(ValueError):
        compare_proportional(a, HomPoly(3, np.ones(10)))


def test_refine_fixed_point_and_basin():
    q = quartic("random2").normalized()
    L = lines("random2")
    same, hist = refine(q, L)
    assert compare_proportional(same, q) < 1e-12
    rng = np.random.default_rng(1)
    noisy = HomPoly(4, q.coeffs + 1e-4 * (rng.normal(size=15) + 1j * rng.normal(size=15)))
    fixed, hist = refine(noisy, L)
    assert compare_proportional(fixed, q) < 1e-10
    assert hist[-1] < hist[0]


def test_aronhold_seed_is_close_and_certified():
    s = structure("random0")
    seven = select_aronhold(s)
    L = lines("random0")
    seed = aronhold_quartic(L[list(seven)])
    assert np.max(bitangent_residuals(seed, L[list(seven)])) < 1e-8
    assert compare_proportional(seed, quartic("random0")) < 1e-6


def test_concurrent_lines_fail_general_position():
    rng = np.random.default_rng(0)
    L = rng.normal(size=(7, 3)) + 1j * rng.normal(size=(7, 3))
    L[2] = L[0] + 0.5 * L[1]  # lines 0, 1, 2 share a point
    with pytest.raises(GeneralPositionFailure):
        aronhold_quartic(L)




def test_complete_from_nine_recovers_points_and_pairs():
    t = structure("random0").tuples[0]
    drop = {t.pairs[0][0], t.pairs[1][0], t.pairs[2][1]}
    keep = [p for p in t.members if p not in drop]
    L = lines("random0")
    a, b = t.pairs[3]
    comp = complete_from_nine(L[keep], (keep.index(a), keep.index(b)))
    for p in drop:
        assert min(proj_distance(L[p], r) for r in comp.points) < 1e-6
    # map completion indices back to original line indices
    idx = list(keep) + [min(drop, key=lambda p: proj_distance(L[p], r)) for r in comp.points]
    got = {tuple(sorted((idx[i], idx[j]))) for i, j in comp.pairs}
    assert got == {tuple(sorted(p)) for p in t.pairs}


def test_false_marked_pair_is_rejected():
    t = structure("random0").tuples[4]
    keep = list(t.members[:9])
    partner = dict(t.pairs + tuple((b, a) for a, b in t.pairs))
    a = keep[0]
    b = next(x for x in keep[1:] if x != partner[a])
    with pytest.raises(InconsistentPairing):
        complete_from_nine(lines("random0")[keep], (0, keep.index(b)))


def test_reducible_tuple_cubic_is_degenerate():
    s = structure("fermat")
    k = next(k for k, t in enumerate(s.tuples) if not t.cubic.smooth)
    t = s.tuples[k]
    with pytest.raises(DegenerateConfiguration):
        complete_from_nine(lines("fermat")[list(t.members[:9])], (0, 1))


def test_reconstruction_is_permutation_invariant():
    L = lines("random4")
    perm = np.random.default_rng(7).permutation(28)
    r1 = reconstruct(L, reference=quartic("random4"))
    r2 = reconstruct(L[perm], reference=quartic("random4"))
    assert r1.comparison < 1e-6 and r2.comparison < 1e-6
    assert compare_proportional(r1.refined_quartic, r2.refined_quartic) < 1e-9


def test_reconstructed_quartic_has_the_input_bitangents():
    rep = reconstruct(lines("random6"))
    again = bitangents(rep.refined_quartic)
    A, B = again.array(), bitangent_set("random6").array()
    D = np.array([[proj_distance(x, y) for y in B] for x in A])
    assert max(D.min(axis=0).max(), D.min(axis=1).max()) < 1e-8
