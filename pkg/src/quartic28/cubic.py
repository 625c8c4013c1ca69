"""Plane cubics: classification, flexes and the chord-tangent group law.

Points are plain complex 3-vectors (normalized with ``normalize_array``);
the group law uses a flex as identity, so the inverse of P is the third
intersection of the line OP and P + Q is the inverse of the third point on
the chord PQ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateChord, InconsistentPairing, NoConvergence, TangentFailure
from .numerics import (
    DEFAULT,
    HomPoly,
    Precision,
    ProjVec,
    binary_restriction,
    incidence_residual,
    intersect_curves,
    line_basis,
    linear_form,
    normalize_array,
    nullspace_fit,
    proj_distance,
    relative_gradient,
)

SMOOTH = "smooth"
NODAL = "nodal"
REDUCIBLE = "reducible"


def _unit(p) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    return p / np.linalg.norm(p)


def _lex_key(p) -> tuple:
    p = normalize_array(p)
    return tuple(round(float(x), 8) for z in p for x in (z.real, z.imag))


def hessian(c: HomPoly) -> HomPoly:
    """Determinant of the matrix of second partials."""
    d = [[c.derivative(i).derivative(j) for j in range(3)] for i in range(3)]
    det = None
    terms = []
    for perm, sign in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                       ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
        t = d[0][perm[0]] * d[1][perm[1]] * d[2][perm[2]]
        terms.append(t.scaled(sign))
    for t in terms:
        det = t if det is None else det + t
    return det


def _polar_combo(c: HomPoly, w) -> HomPoly:
    out = None
    for i in range(3):
        d = c.derivative(i).scaled(w[i])
        out = d if out is None else out + d
    return out


def _polish_singular(c: HomPoly, s: np.ndarray, steps: int = 80) -> np.ndarray:
    """Gauss-Newton on grad c = 0 in the affine chart of the largest coordinate."""
    s = normalize_array(s)
    k = int(np.argmax(np.abs(s)))
    free = [i for i in range(3) if i != k]
    for _ in range(steps):
        g = c.gradient(s)
        J = c.hessian_matrix(s)[:, free]
        step = np.linalg.lstsq(J, -g, rcond=None)[0]
        s = s.copy()
        s[free] += step
        if np.linalg.norm(step) < 1e-15:
            break
    return s


def singular_points(c: HomPoly, prec: Precision = DEFAULT, tol: float = 1e-6) -> list:
    """Distinct singular points of a plane curve (clustered at tol_dup)."""
    rng = np.random.default_rng(23)
    g1 = _polar_combo(c, rng.normal(size=3) + 1j * rng.normal(size=3))
    g2 = _polar_combo(c, rng.normal(size=3) + 1j * rng.normal(size=3))
    pts = intersect_curves(g1, g2, prec)
    keep = [p for p, r in zip(pts, relative_gradient(c, pts)) if r < tol]
    out: list = []
    for p in keep:
        p = _polish_singular(c, p)
        if all(proj_distance(p, q) > 1e-4 for q in out):
            out.append(normalize_array(p))
    return out


def _binary(c: HomPoly, p0, p1) -> np.ndarray:
    return binary_restriction(c, p0, p1)


def _has_line_through(c: HomPoly, s: np.ndarray, tol: float) -> bool:
    """Whether a line through the singular point s is a component of c."""
    e1, e2 = line_basis(np.conj(_unit(s)))
    g = _binary(c, e1, e2)  # the t^3 term of c(s + t d), d = a e1 + b e2
    H = c.hessian_matrix(s)
    h = np.array([e2 @ H @ e2, 2 * (e1 @ H @ e2), e1 @ H @ e1])
    gn, hn = np.linalg.norm(g), np.linalg.norm(h)
    if hn <= 1e-7 * max(gn, 1.0):
        return True  # triple point: c is a cone over three points, i.e. three concurrent lines
    hh = h / hn
    if abs(hh[2]) > abs(hh[0]):
        rs = np.polynomial.polynomial.polyroots(hh)
        ds = [np.array([z, 1.0]) for z in rs]
    else:
        rs = np.polynomial.polynomial.polyroots(hh[::-1])
        ds = [np.array([1.0, z]) for z in rs]
    for ab in ds:
        ab = ab / np.linalg.norm(ab)
        val = sum(g[k] * ab[0] ** k * ab[1] ** (3 - k) for k in range(4))
        if abs(val) < tol * gn:
            return True
    return False


def classify(c: HomPoly, prec: Precision = DEFAULT) -> str:
    if c.degree != 3:
        raise ValueError("a cubic is required")
    c = c.normalized()
    sing = singular_points(c, prec)
    if not sing:
        return SMOOTH
    if len(sing) >= 2:
        return REDUCIBLE
    return REDUCIBLE if _has_line_through(c, sing[0], 1e-6) else NODAL


@dataclass(frozen=True, eq=False)
class CubicCurve:
    poly: HomPoly
    classification: str
    prec: Precision = field(default=DEFAULT, repr=False)

    @classmethod
    def from_poly(cls, poly: HomPoly, prec: Precision = DEFAULT) -> "CubicCurve":
        poly = poly.normalized()
        return cls(poly, classify(poly, prec), prec)

    @classmethod
    def through(cls, points, prec: Precision = DEFAULT) -> tuple["CubicCurve", float]:
        """The cubic fitted through >= 9 points, with its fit residual."""
        poly, resid = nullspace_fit(points, 3, prec)
        return cls.from_poly(poly, prec), resid

    @property
    def smooth(self) -> bool:
        return self.classification == SMOOTH

    def residual(self, points) -> np.ndarray:
        return incidence_residual(self.poly, points)

    @cached_property
    def flexes(self) -> np.ndarray:
        if not self.smooth:
            raise ValueError("flexes are computed for smooth cubics only")
        pts = intersect_curves(self.poly, hessian(self.poly).normalized(), self.prec)
        pts = sorted((normalize_array(p) for p in pts), key=_lex_key)
        return np.array(pts)

    @cached_property
    def flex_origin(self) -> np.ndarray:
        return self.flexes[-1]

    # -- group law --------------------------------------------------------

    def third_point(self, P, Q) -> np.ndarray:
        """Third intersection of the line PQ (tangent line when P = Q)."""
        P, Q = _unit(P), _unit(Q)
        if proj_distance(P, Q) < self.prec.tol_dup:
            grad = self.poly.gradient(P)
            if np.linalg.norm(grad) < 1e-12:
                raise TangentFailure("tangent requested at a singular point")
            D = [d - np.vdot(P, d) * P for d in line_basis(grad)]
            D = _unit(max(D, key=np.linalg.norm))
            a = _binary(self.poly, P, D)
            R = a[0] * P - a[1] * D
        else:
            a = _binary(self.poly, P, Q)
            R = a[1] * P - a[2] * Q
        if np.linalg.norm(R) < 1e-10 * max(np.abs(a).max(), 1e-300):
            raise TangentFailure("line is a component of the curve or the extraction is degenerate")
        return normalize_array(R)

    def neg(self, P) -> np.ndarray:
        return self.third_point(self.flex_origin, P)

    def add(self, P, Q) -> np.ndarray:
        return self.third_point(self.flex_origin, self.third_point(P, Q))

    def sub(self, P, Q) -> np.ndarray:
        return self.add(P, self.neg(Q))

    def is_identity(self, P, tol: float | None = None) -> bool:
        tol = 10 * self.prec.tol_geo if tol is None else tol
        return proj_distance(P, self.flex_origin) < tol

    @cached_property
    def two_torsion(self) -> np.ndarray:
        """The three points T != O with 2T = O: the harmonic polar of O meets the curve there."""
        O = self.flex_origin
        polar = _polar_combo(self.poly, O)
        tangent = linear_form(self.poly.gradient(O))
        # polar conic = tangent line * harmonic polar, solve for the second factor
        A = np.zeros((6, 3), dtype=complex)
        for k in range(3):
            e = np.zeros(3, dtype=complex)
            e[k] = 1
            A[:, k] = (tangent * linear_form(e)).coeffs
        h, *_ = np.linalg.lstsq(A, polar.coeffs, rcond=None)
        if np.linalg.norm(A @ h - polar.coeffs) > 1e-6 * np.linalg.norm(polar.coeffs):
            raise NoConvergence("polar conic of the origin does not split")
        p0, p1 = line_basis(h)
        b = _binary(self.poly, p0, p1)
        pts = []
        for r in np.polynomial.polynomial.polyroots(b) if abs(b[3]) >= abs(b[0]) else []:
            pts.append(normalize_array(r * p0 + p1))
        if not pts:
            for r in np.polynomial.polynomial.polyroots(b[::-1]):
                pts.append(normalize_array(p0 + r * p1))
        return np.array(sorted(pts, key=_lex_key))

    def nearest_torsion(self, P) -> tuple[np.ndarray, float]:
        T = self.two_torsion
        d = [proj_distance(P, t) for t in T]
        k = int(np.argmin(d))
        return T[k], d[k]

    def sample_points(self, n: int, seed: int = 0) -> np.ndarray:
        """n points on the curve cut out by random lines."""
        rng = np.random.default_rng(seed)
        out = []
        while len(out) < n:
            line = rng.normal(size=3) + 1j * rng.normal(size=3)
            p0, p1 = line_basis(line)
            b = _binary(self.poly, p0, p1)
            for r in np.polynomial.polynomial.polyroots(b):
                out.append(normalize_array(r * p0 + p1))
        return np.array(out[:n])


# ---------------------------------------------------------------------------
# chord construction
# ---------------------------------------------------------------------------

def chord_map(c: CubicCurve, beta, P) -> ProjVec:
    """The line through P and P + beta, as a point of the dual plane."""
    Q = c.add(P, beta)
    if proj_distance(P, Q) < c.prec.tol_dup:
        raise DegenerateChord("P and P + beta coincide")
    return ProjVec(normalize_array(np.cross(_unit(P), _unit(Q))), "line")


def beta_of_pairs(c: CubicCurve, pairs, prec: Precision | None = None) -> np.ndarray:
    """Common order-2 difference class of six pairs of points on c."""
    prec = prec or c.prec
    pts = [np.asarray(p, dtype=complex) for pr in pairs for p in pr]
    for i in range(len(pts)):
        for j in range(i):
            if proj_distance(pts[i], pts[j]) < prec.tol_dup:
                raise ValueError("points must be distinct")
    if np.max(c.residual(np.array(pts))) > 1e3 * prec.tol_geo:
        raise ValueError("points must lie on the cubic")
    diffs = [c.sub(a, b) for a, b in pairs]
    beta, dist = c.nearest_torsion(diffs[0])
    spread = max(proj_distance(d, beta) for d in diffs)
    if spread > prec.tol_dup:
        raise InconsistentPairing(f"difference classes disagree (spread {spread:.3g})")
    return beta


def chord_images(c: CubicCurve, beta, pairs) -> np.ndarray:
    return np.array([chord_map(c, beta, a).coords for a, _ in pairs])


def pair_chords(pairs) -> np.ndarray:
    """Joining line of each pair; equals chord_map of either member when the pair differs by beta."""
    out = []
    for a, b in pairs:
        if proj_distance(a, b) < 1e-12:
            raise DegenerateChord("pair members coincide")
        out.append(normalize_array(np.cross(_unit(a), _unit(b))))
    return np.array(out)


def conic_of_images(c: CubicCurve, beta, pairs, prec: Precision | None = None) -> tuple:
    """Conic through the six chord images and its fit residual.

    The images are taken as the joining lines of the given pairs, which avoids
    the conditioning loss of evaluating P + beta on nearly degenerate cubics.
    """
    prec = prec or c.prec
    imgs = pair_chords(pairs)
    conic, resid = nullspace_fit(imgs, 2, prec)
    return conic, resid


def conic_matrix(conic: HomPoly) -> np.ndarray:
    """Symmetric matrix M with conic(p) = p^T M p."""
    M = np.zeros((3, 3), dtype=complex)
    for e, v in conic.terms().items():
        idx = [i for i in range(3) for _ in range(e[i])]
        i, j = idx
        if i == j:
            M[i, i] += v
        else:
            M[i, j] += v / 2
            M[j, i] += v / 2
    return M


def conic_smoothness(conic: HomPoly) -> float:
    """Smallest singular value of the normalized conic matrix (0 for a line pair)."""
    M = conic_matrix(conic)
    s = np.linalg.svd(M / np.linalg.norm(M), compute_uv=False)
    return float(s[-1])


def image_cubic(c: CubicCurve, beta, n: int = 20, seed: int = 0) -> tuple:
    """Cubic fitted through the chord images of n sampled points of c."""
    pts = c.sample_points(n, seed)
    imgs = np.array([chord_map(c, beta, p).coords for p in pts])
    poly, resid = nullspace_fit(imgs, 3, c.prec)
    return CubicCurve.from_poly(poly, c.prec), resid
