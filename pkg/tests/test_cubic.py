import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic28.cubic import (
    NODAL,
    REDUCIBLE,
    SMOOTH,
    CubicCurve,
    beta_of_pairs,
    chord_map,
    classify,
    conic_of_images,
    conic_smoothness,
    image_cubic,
    pair_chords,
)
from quartic28.errors import InconsistentPairing
from quartic28.numerics import HomPoly, normalize_array, proj_distance

x3 = lambda terms: HomPoly.from_terms(3, terms)  # noqa: E731


def weierstrass() -> CubicCurve:
    """y^2 z = x^3 - x z^2 with the flex (0:1:0) as origin."""
    c = CubicCurve.from_poly(x3({(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): 1}))
    c.__dict__["flex_origin"] = np.array([0, 1, 0], dtype=complex)
    return c


def affine_add(P, Q):
    # textbook chord-tangent formulas for y^2 = x^3 - x
    (x1, y1), (x2, y2) = P, Q
    lam = (3 * x1 ** 2 - 1) / (2 * y1) if abs(x1 - x2) < 1e-12 else (y2 - y1) / (x2 - x1)
    x = lam ** 2 - x1 - x2
    return x, -(y1 + lam * (x - x1))


def on_curve(x):
    return np.array([x, np.sqrt(complex(x ** 3 - x)), 1])


def test_classify_examples():
    assert classify(x3({(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1})) == SMOOTH
    assert classify(x3({(1, 1, 1): 1})) == REDUCIBLE
    assert classify(x3({(3, 0, 0): 1, (0, 3, 0): 1})) == REDUCIBLE  # three concurrent lines
    assert classify(x3({(3, 0, 0): 1, (1, 2, 0): 1, (1, 0, 2): -1})) == REDUCIBLE  # line and conic
    assert classify(x3({(0, 2, 1): 1, (3, 0, 0): -1, (2, 0, 1): -1})) == NODAL
    assert classify(x3({(0, 2, 1): 1, (3, 0, 0): -1})) == NODAL  # cusp: singular, irreducible
    with pytest.raises(ValueError):
        classify(HomPoly.from_terms(2, {(2, 0, 0): 1}))


def test_fermat_cubic_flexes():
    c = CubicCurve.from_poly(x3({(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1}))
    w = np.exp(2j * np.pi * np.arange(3) / 3)
    expected = [v for r in w for v in ([0, 1, -r], [1, 0, -r], [1, -r, 0])]
    got = c.flexes
    assert len(got) == 9
    for e in expected:
        assert min(proj_distance(e, g) for g in got) < 1e-9


def test_group_law_matches_affine_formulas():
    c = weierstrass()
    P, Q = on_curve(2.0), on_curve(-0.5 + 0.3j)
    for A, B in ((P, Q), (P, P)):
        x, y = affine_add((A[0], A[1]), (B[0], B[1]))
        assert proj_distance(c.add(A, B), [x, y, 1]) < 1e-10
    assert proj_distance(c.neg(P), [P[0], -P[1], 1]) < 1e-12
    assert c.is_identity(c.sub(P, P))


def test_two_torsion_is_klein_four():
    c = weierstrass()
    T = c.two_torsion
    for e in ([0, 0, 1], [1, 0, 1], [-1, 0, 1]):
        assert min(proj_distance(e, t) for t in T) < 1e-10
    assert proj_distance(c.add(T[0], T[1]), T[2]) < 1e-9
    for t in T:
        assert c.is_identity(c.add(t, t))


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=15, deadline=None)
def test_associativity_on_random_cubic(seed):
    rng = np.random.default_rng(seed)
    c = CubicCurve.from_poly(HomPoly(3, rng.normal(size=10) + 1j * rng.normal(size=10)))
    P, Q, R = c.sample_points(3, seed)
    lhs = c.add(c.add(P, Q), R)
    rhs = c.add(P, c.add(Q, R))
    assert proj_distance(lhs, rhs) < 1e-6
    assert np.max(c.residual(np.array([lhs]))) < 1e-8


def random_smooth_cubic(seed=4):
    rng = np.random.default_rng(seed)
    return CubicCurve.from_poly(HomPoly(3, rng.normal(size=10) + 1j * rng.normal(size=10)))


def test_flex_origin_is_a_flex():
    c = random_smooth_cubic()
    O = c.flex_origin
    assert c.is_identity(c.third_point(O, O))


def test_chord_is_invariant_under_translation():
    c = random_smooth_cubic()
    beta = c.two_torsion[1]
    for P in c.sample_points(4, 1):
        a = chord_map(c, beta, P).coords
        b = chord_map(c, beta, c.add(P, beta)).coords
        assert proj_distance(a, b) < 1e-8
        assert proj_distance(a, pair_chords([(P, c.add(P, beta))])[0]) < 1e-8


def test_image_cubic_is_smooth_and_fits():
    c = random_smooth_cubic()
    img, resid = image_cubic(c, c.two_torsion[0])
    assert resid < 1e-8 and img.smooth


def test_beta_of_pairs_and_conic():
    c = random_smooth_cubic()
    beta = c.two_torsion[2]
    pts = c.sample_points(18, 2)[::3]  # one point per random line
    pairs = [(P, c.add(P, beta)) for P in pts]
    assert proj_distance(beta_of_pairs(c, pairs), beta) < 1e-9
    # chord images of six arbitrary pairs do not lie on one conic
    _, resid = conic_of_images(c, beta, pairs)
    assert resid > 1e-4
    bad = list(pairs)
    bad[0] = (pairs[0][0], c.sample_points(1, 9)[0])
    with pytest.raises(InconsistentPairing):
        beta_of_pairs(c, bad)
    with pytest.raises(ValueError):
        beta_of_pairs(c, [pairs[0], pairs[0]])


def test_conic_smoothness():
    circle = HomPoly.from_terms(2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -1})
    pair = HomPoly.from_terms(2, {(1, 1, 0): 1})
    assert conic_smoothness(circle) > 0.1
    assert conic_smoothness(pair) < 1e-12
    assert normalize_array([2, 0, 0])[0] == 1
