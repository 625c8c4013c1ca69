import itertools
import time

import numpy as np
import pytest

from corpus import RANDOM_SEEDS, bitangent_set, quartic
from quartic28.errors import NotSmooth
from quartic28.numerics import HomPoly, Precision, normalize_array, pairwise_proj_distance
from quartic28.solver import (
    binary_roots,
    bitangents,
    certificate_residual,
    is_smooth,
    square_certificate,
    syzygetic_test,
)


def fermat_lines() -> np.ndarray:
    """The 28 bitangents of x^4 + y^4 + z^4, written down by hand."""
    out = []
    for zeta in np.exp(1j * np.pi * (2 * np.arange(4) + 1) / 4):  # zeta^4 = -1
        out += [[1, -zeta, 0], [1, 0, -zeta], [0, 1, -zeta]]
    units = [1, 1j, -1, -1j]
    for a, b in itertools.product(units, units):
        out.append([1, a, b])
    return np.array(out, dtype=complex)


def set_distance(A, B) -> float:
    D = pairwise_proj_distance(A, B)
    return max(D.min(axis=1).max(), D.min(axis=0).max())


def _restriction_by_sampling(q, line) -> np.ndarray:
    # coefficients of t -> q(p0 + t p1) from five samples, lowest degree first
    _, _, vh = np.linalg.svd(np.asarray(line, dtype=complex).reshape(1, 3))
    p0, p1 = vh[1].conj(), vh[2].conj()
    ts = np.exp(2j * np.pi * np.arange(5) / 5)
    vals = np.array([q(p0 + t * p1) for t in ts])
    return np.linalg.solve(np.vander(ts, 5, increasing=True), vals)


def _is_square_by_roots(b) -> bool:
    # the roots pair up; a quadruple root smears to about eps**0.25
    b = np.asarray(b)
    if abs(b[0]) > abs(b[-1]):
        b = b[::-1]  # swap s and t so the leading coefficient is not tiny
    r = list(np.roots(b[::-1]))
    if len(r) % 2:
        return False
    while r:
        z = r.pop(0)
        k = int(np.argmin([abs(z - w) for w in r]))
        if abs(z - r.pop(k)) > 1e-3 * max(1, abs(z)):
            return False
    return True


def test_handwritten_fermat_lines_are_bitangents():
    q = quartic("fermat")
    for l in fermat_lines():
        assert _is_square_by_roots(_restriction_by_sampling(q, l))


def test_fermat_matches_handwritten_set():
    bs = bitangent_set("fermat")
    assert len(bs) == 28
    assert set_distance(bs.array(), fermat_lines()) < 1e-8


def test_klein_set_is_invariant_under_order_seven_symmetry():
    bs = bitangent_set("klein")
    assert len(bs) == 28
    z = np.exp(2j * np.pi / 7)
    g = np.diag([z, z ** 4, z ** 2])
    q = quartic("klein")
    p = np.array([0.3, -1.1j, 0.7])
    assert abs(q(g @ p) - q(p)) < 1e-12  # the curve is preserved
    moved = bs.array() @ np.linalg.inv(g)  # covectors pull back by the inverse
    assert set_distance(bs.array(), moved) < 1e-8


@pytest.mark.parametrize("seed", RANDOM_SEEDS)
def test_random_quartic_has_28_certified_bitangents(seed):
    name = f"random{seed}"
    t0 = time.perf_counter()
    bs = bitangents(quartic(name))
    assert time.perf_counter() - t0 < 5.0
    assert len(bs) == 28
    assert max(b.certificate for b in bs) < 1e-8
    D = pairwise_proj_distance(bs.array(), bs.array())
    assert D[np.triu_indices(28, 1)].min() > 1e-6
    q = quartic(name)
    for b in bs:
        for c in b.contacts:
            u = normalize_array(c.coords)
            assert abs(q(u)) < 1e-9 * q.norm and abs(b.line.coords @ u) < 1e-9


def test_square_certificate_examples():
    assert square_certificate([1, 0, 2, 0, 1]) is not None  # (s^2 + t^2)^2
    cert = square_certificate([4, -4, 1, 0, 0])  # s^2 (2t - s)^2 in low-first order
    assert cert is not None and cert.residual < 1e-12
    assert square_certificate([1, 0, 0, 0, 1]) is None
    assert square_certificate([1, 0, 1, 0, 0]) is None
    assert certificate_residual([1, 0, 0, 0, 1]) > 1e-3
    with pytest.raises(ValueError):
        square_certificate([0, 0, 0, 0, 0])


def test_binary_roots_examples():
    r = binary_roots(np.array([-1, 0, 1]))
    vals = sorted(round(float((v[0] / v[1]).real), 9) for v in r)
    assert vals == [-1.0, 1.0]


def test_singular_quartic_is_rejected():
    # a node at [0:0:1]
    q = HomPoly.from_terms(4, {(2, 0, 2): 1, (0, 2, 2): -1, (4, 0, 0): 1, (0, 4, 0): 1, (1, 3, 0): 0.5})
    assert not is_smooth(q)
    with pytest.raises(NotSmooth):
        bitangents(q)


def test_extended_mode_agrees():
    q = quartic("random3")
    ext = bitangents(q, Precision("extended"))
    assert len(ext) == 28 and ext.provenance["mode"] == "extended"
    assert set_distance(ext.array(), bitangent_set("random3").array()) < 1e-9


def test_syzygetic_test_frequency():
    q, bs = quartic("random0"), bitangent_set("random0")
    rng = np.random.default_rng(0)
    hits = 0
    n = 600
    for _ in range(n):
        idx = rng.choice(28, 4, replace=False)
        hits += syzygetic_test(q, [bs[i] for i in idx])
    # 315 syzygetic tetrads among C(28, 4) = 20475
    assert 0 < hits < 40
    with pytest.raises(ValueError):
        syzygetic_test(q, [bs[0], bs[0], bs[1], bs[2]])
