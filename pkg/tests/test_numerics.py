import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic28.errors import RankDeficient, ZeroVector
from quartic28.numerics import (
    DEFAULT,
    HomPoly,
    Precision,
    ProjVec,
    binary_restriction,
    binary_restriction_mp,
    from_roots,
    intersect_curves,
    line_basis,
    monomials,
    normalize,
    normalize_array,
    nullspace_fit,
    pairwise_proj_distance,
    proj_distance,
    random_unitary,
    resultant,
    roots,
    subresultants,
    sylvester,
)

seeds = st.integers(min_value=0, max_value=10_000)


def rand_poly(deg, seed):
    rng = np.random.default_rng(seed)
    n = (deg + 1) * (deg + 2) // 2
    return HomPoly(deg, rng.normal(size=n) + 1j * rng.normal(size=n))


def test_monomial_order_is_grlex_x_first():
    assert monomials(4)[:4] == ((4, 0, 0), (3, 1, 0), (3, 0, 1), (2, 2, 0))
    assert monomials(4)[-1] == (0, 0, 4)
    assert len(monomials(4)) == 15


def test_precision_validation():
    assert Precision().tol_geo == 1e-8
    assert Precision("extended").extended
    with pytest.raises(ValueError):
        Precision("quad")
    with pytest.raises(ValueError):
        Precision(tol_sq=0.0)


def test_normalize_examples():
    assert np.allclose(normalize_array([2, 4, 1]), [0.5, 1, 0.25])
    assert np.allclose(normalize_array([1, -1, 0]), [1, -1, 0])
    with pytest.raises(ZeroVector):
        normalize_array([0, 0, 0])
    with pytest.raises(ZeroVector):
        normalize_array([1e-20, 0, 0], context=1.0)


def test_projvec_roles():
    p = ProjVec([0, 0, 2])
    assert p.role == "point" and p.dual().role == "line"
    assert np.allclose(normalize(p).coords, [0, 0, 1])
    with pytest.raises(ZeroVector):
        ProjVec([0, 0, 0])


@given(seeds)
def test_projective_distance_is_scale_invariant(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    b = rng.normal(size=3) + 1j * rng.normal(size=3)
    lam = complex(rng.normal(), rng.normal())
    assert proj_distance(a, lam * a) < 1e-12
    assert abs(proj_distance(a, b) - proj_distance(lam * a, b)) < 1e-12
    assert abs(pairwise_proj_distance([a], [b])[0, 0] - proj_distance(a, b)) < 1e-12


def test_line_basis_spans_the_line():
    rng = np.random.default_rng(3)
    line = rng.normal(size=3) + 1j * rng.normal(size=3)
    p0, p1 = line_basis(line)
    assert abs(line @ p0) < 1e-14 and abs(line @ p1) < 1e-14
    assert proj_distance(p0, p1) > 0.5
    q0, q1 = line_basis([0, 0, 1])
    assert np.allclose(q0, [1, 0, 0]) and np.allclose(q1, [0, 1, 0])


def test_fermat_restriction_to_z_zero():
    q = HomPoly.from_terms(4, {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})
    b = binary_restriction(q, [1, 0, 0], [0, 1, 0])
    assert np.allclose(b, [1, 0, 0, 0, 1])


@given(seeds)
@settings(max_examples=25)
def test_restriction_matches_pointwise_evaluation(seed):
    q = rand_poly(4, seed)
    rng = np.random.default_rng(seed + 1)
    p0, p1 = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    b = binary_restriction(q, p0, p1)
    s, t = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
    val = sum(b[k] * s ** k * t ** (4 - k) for k in range(5))
    assert abs(val - q(s * p0 + t * p1)) < 1e-10 * (1 + abs(val))


def test_restriction_extended_agrees():
    q = rand_poly(4, 5)
    p0, p1 = np.array([1, 0.3j, 2]), np.array([0.5, 1, -1j])
    with mpmath.workdps(34):
        bm = np.array([complex(x) for x in binary_restriction_mp(q, p0, p1)])
    assert np.allclose(bm, binary_restriction(q, p0, p1), atol=1e-12)


def test_homogeneous_arithmetic_and_compose():
    x = HomPoly.from_terms(1, {(1, 0, 0): 1})
    y = HomPoly.from_terms(1, {(0, 1, 0): 1})
    f = (x + y) ** 2
    assert f.terms() == {(2, 0, 0): 1, (1, 1, 0): 2, (0, 2, 0): 1}
    assert f.derivative(0).terms() == {(1, 0, 0): 2, (0, 1, 0): 2}
    T = random_unitary(1)
    q = rand_poly(3, 2)
    p = np.array([0.3, -1j, 2.0])
    assert abs(q.compose(T)(p) - q(T @ p)) < 1e-12


def test_roots_examples():
    r = roots([-1, 0, 1]).values
    assert np.allclose(sorted(r.real), [-1, 1]) and np.allclose(r.imag, 0)
    rs = roots([4, -4, 1], Precision(tol_sq=1e-6))
    assert [m for _, m in rs.clusters] == [2]
    w = roots(from_roots(np.arange(1, 11)))
    assert np.allclose(np.sort(w.values.real), np.arange(1, 11), atol=1e-8)


def test_roots_extended_mode():
    rts = np.exp(2j * np.pi * np.arange(12) / 12) * np.linspace(0.5, 3, 12)
    got = roots(from_roots(rts), Precision("extended")).values
    d = np.abs(got[:, None] - rts[None, :]).min(axis=1)
    assert d.max() < 1e-10


@given(seeds)
@settings(max_examples=25)
def test_resultant_is_product_over_roots(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    p, q = from_roots(a), from_roots(b)
    expected = np.prod([np.polyval(q[::-1], r) for r in a])
    assert abs(resultant(p, q) - expected) < 1e-9 * max(1, abs(expected))
    assert abs(resultant(p, q) - np.linalg.det(sylvester(p, q))) < 1e-9 * max(1, abs(expected))


def test_first_subresultant_vanishes_on_common_quadratic_factor():
    g = from_roots([1.0, 2.0j])
    p = np.convolve(g, from_roots([3.0]))
    q = np.convolve(g, from_roots([-1.0]))
    s = subresultants(p, q)
    assert abs(s[0]) < 1e-10 and abs(s[1]) < 1e-10 and abs(s[2]) > 1e-3


def test_nullspace_fit_recovers_conic():
    t = np.linspace(0, 2 * np.pi, 7, endpoint=False)
    pts = np.stack([np.cos(t), np.sin(t), np.ones_like(t)], axis=1)
    conic, resid = nullspace_fit(pts, 2)
    expected = HomPoly.from_terms(2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -1})
    assert resid < 1e-12
    assert np.allclose(conic.coeffs, normalize_array(expected.coeffs))
    with pytest.raises(RankDeficient):
        nullspace_fit(pts[:3], 2)


def test_intersect_curves_bezout_count():
    f, g = rand_poly(4, 11), rand_poly(3, 12)
    pts = intersect_curves(f, g, DEFAULT)
    assert len(pts) == 12
    u = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    assert np.abs(f(u)).max() < 1e-9 * f.norm and np.abs(g(u)).max() < 1e-9 * g.norm
