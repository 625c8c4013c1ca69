"""Projective numerics: homogeneous polynomials in (x, y, z), projective vectors,
univariate root finding, subresultants and small nullspace solvers.

Univariate polynomials are coefficient arrays ordered lowest degree first
(the ``numpy.polynomial`` convention).  Binary forms of degree ``d`` use the
same convention in ``s``: ``b[k]`` is the coefficient of ``s**k * t**(d-k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from .errors import NoConvergence, RankDeficient, ZeroVector

EXTENDED_DPS = 34


@dataclass(frozen=True)
class Precision:
    mode: str = "standard"
    tol_geo: float = 1e-8
    tol_dup: float = 1e-6
    tol_sq: float = 1e-8

    def __post_init__(self):
        if self.mode not in ("standard", "extended"):
            raise ValueError(f"unknown precision mode {self.mode!r}")
        if min(self.tol_geo, self.tol_dup, self.tol_sq) <= 0:
            raise ValueError("tolerances must be strictly positive")

    @property
    def extended(self) -> bool:
        return self.mode == "extended"

    def with_mode(self, mode: str) -> "Precision":
        return Precision(mode, self.tol_geo, self.tol_dup, self.tol_sq)


DEFAULT = Precision()


# ---------------------------------------------------------------------------
# monomials and homogeneous polynomials
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def monomials(degree: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples in graded-lex order with x first: x^d, x^(d-1)y, x^(d-1)z, ..."""
    out = []
    for i in range(degree, -1, -1):
        for j in range(degree - i, -1, -1):
            out.append((i, j, degree - i - j))
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(degree: int) -> dict:
    return {e: k for k, e in enumerate(monomials(degree))}


def n_monomials(degree: int) -> int:
    return (degree + 1) * (degree + 2) // 2


def monomial_vector(points, degree: int) -> np.ndarray:
    """Veronese map: rows of monomial values, shape (..., n_monomials)."""
    pts = np.asarray(points, dtype=complex)
    exps = np.array(monomials(degree))
    return np.prod(pts[..., None, :] ** exps, axis=-1)


@dataclass(frozen=True, eq=False)
class HomPoly:
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size != n_monomials(self.degree):
            raise ValueError(
                f"degree {self.degree} needs {n_monomials(self.degree)} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_terms(cls, degree: int, terms: dict) -> "HomPoly":
        idx = _monomial_index(degree)
        c = np.zeros(n_monomials(degree), dtype=complex)
        for e, v in terms.items():
            c[idx[tuple(e)]] += v
        return cls(degree, c)

    def terms(self) -> dict:
        return {e: c for e, c in zip(monomials(self.degree), self.coeffs) if c != 0}

    def __call__(self, points):
        return monomial_vector(points, self.degree) @ self.coeffs

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def normalized(self) -> "HomPoly":
        return HomPoly(self.degree, normalize_array(self.coeffs))

    def scaled(self, factor) -> "HomPoly":
        return HomPoly(self.degree, self.coeffs * factor)

    def __add__(self, other: "HomPoly") -> "HomPoly":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return HomPoly(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + other.scaled(-1)

    def __mul__(self, other):
        if not isinstance(other, HomPoly):
            return self.scaled(other)
        d = self.degree + other.degree
        idx = _monomial_index(d)
        out = np.zeros(n_monomials(d), dtype=complex)
        for ea, ca in zip(monomials(self.degree), self.coeffs):
            if ca == 0:
                continue
            for eb, cb in zip(monomials(other.degree), other.coeffs):
                if cb != 0:
                    out[idx[(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])]] += ca * cb
        return HomPoly(d, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomPoly":
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def derivative(self, var: int) -> "HomPoly":
        if self.degree == 0:
            raise ValueError("cannot differentiate a constant")
        idx = _monomial_index(self.degree - 1)
        out = np.zeros(n_monomials(self.degree - 1), dtype=complex)
        for e, c in zip(monomials(self.degree), self.coeffs):
            if e[var]:
                f = list(e)
                f[var] -= 1
                out[idx[tuple(f)]] += c * e[var]
        return HomPoly(self.degree - 1, out)

    def gradient(self, points) -> np.ndarray:
        """Gradient at points, shape (..., 3)."""
        pts = np.asarray(points, dtype=complex)
        out = np.zeros(pts.shape, dtype=complex)
        for v in range(3):
            d = _derivative_coeffs(self, v)
            if d is not None:
                out[..., v] = monomial_vector(pts, self.degree - 1) @ d
        return out

    def hessian_matrix(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=complex)
        H = np.zeros((3, 3), dtype=complex)
        for i in range(3):
            di = _derivative_coeffs(self, i)
            if di is None:
                continue
            for j in range(3):
                dij = _derivative_coeffs_raw(di, self.degree - 1, j)
                if dij is not None:
                    H[i, j] = monomial_vector(p, self.degree - 2) @ dij
        return H

    def compose(self, T) -> "HomPoly":
        """The polynomial p -> self(T @ p)."""
        T = np.asarray(T, dtype=complex)
        forms = [HomPoly(1, T[i]) if np.any(T[i]) else None for i in range(3)]
        powers = [[None] * (self.degree + 1) for _ in range(3)]
        total = np.zeros(n_monomials(self.degree), dtype=complex)
        for e, c in zip(monomials(self.degree), self.coeffs):
            if c == 0:
                continue
            term = None
            zero = False
            for v in range(3):
                if e[v] == 0:
                    continue
                if forms[v] is None:
                    zero = True
                    break
                if powers[v][e[v]] is None:
                    powers[v][e[v]] = forms[v] ** e[v]
                term = powers[v][e[v]] if term is None else term * powers[v][e[v]]
            if not zero:
                total += c * term.coeffs
        return HomPoly(self.degree, total)

    def eval_mp(self, point) -> "mpmath.mpc":
        """Evaluate at a point with mpmath at the current working precision."""
        p = [mpmath.mpc(x) for x in point]
        acc = mpmath.mpc(0)
        for e, c in zip(monomials(self.degree), self.coeffs):
            if c != 0:
                acc += mpmath.mpc(c) * p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2]
        return acc


def _derivative_coeffs_raw(coeffs, degree, var):
    if degree == 0:
        return None
    idx = _monomial_index(degree - 1)
    out = np.zeros(n_monomials(degree - 1), dtype=complex)
    for e, c in zip(monomials(degree), coeffs):
        if e[var] and c != 0:
            f = list(e)
            f[var] -= 1
            out[idx[tuple(f)]] += c * e[var]
    return out


def _derivative_coeffs(poly: HomPoly, var: int):
    return _derivative_coeffs_raw(poly.coeffs, poly.degree, var)


def linear_form(coords) -> HomPoly:
    return HomPoly(1, np.asarray(coords, dtype=complex))


def incidence_residual(poly: HomPoly, points) -> np.ndarray:
    """|f(p)| / (||f|| ||p||^d): scale-free distance-like residual of points on a curve."""
    pts = np.asarray(points, dtype=complex)
    val = np.abs(poly(pts))
    nrm = np.linalg.norm(pts, axis=-1) ** poly.degree
    return val / (poly.norm * nrm)


def relative_gradient(poly: HomPoly, points) -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    g = np.linalg.norm(poly.gradient(pts), axis=-1)
    return g / (poly.norm * np.linalg.norm(pts, axis=-1) ** (poly.degree - 1))


# ---------------------------------------------------------------------------
# projective vectors
# ---------------------------------------------------------------------------

_TIE = 1e-12


def normalize_array(v, context: float | None = None, tol: float = DEFAULT.tol_geo) -> np.ndarray:
    """Scale so the largest-magnitude entry is exactly 1 (first index wins ties)."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    top = mags.max() if mags.size else 0.0
    ref = top if context is None else max(context, top)
    if top == 0 or top < tol * ref:
        raise ZeroVector(f"vector {v} is zero relative to scale {ref}")
    k = int(np.flatnonzero(mags >= top * (1 - _TIE))[0])
    out = v / v[k]
    out[k] = 1.0
    return out


@dataclass(frozen=True, eq=False)
class ProjVec:
    coords: np.ndarray
    role: str = "point"

    def __post_init__(self):
        c = np.array(self.coords, dtype=complex).ravel()
        if c.size != 3:
            raise ValueError("projective vectors have three coordinates")
        if not np.any(c):
            raise ZeroVector("all coordinates are zero")
        if self.role not in ("point", "line"):
            raise ValueError(f"bad role {self.role!r}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def dual(self) -> "ProjVec":
        return ProjVec(self.coords, "line" if self.role == "point" else "point")

    def normalized(self) -> "ProjVec":
        return normalize(self)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __repr__(self):
        c = ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in self.coords)
        return f"ProjVec({self.role}: {c})"


def normalize(v: ProjVec, context: float | None = None, prec: Precision = DEFAULT) -> ProjVec:
    return ProjVec(normalize_array(v.coords, context, prec.tol_geo), v.role)


def proj_distance(a, b) -> float:
    """Sine of the Hermitian angle between two projective vectors."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.linalg.norm(np.cross(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b)))


def pairwise_proj_distance(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    B = B / np.linalg.norm(B, axis=1, keepdims=True)
    # cross products avoid the cancellation in sqrt(1 - |<a, b>|^2)
    C = np.cross(A[:, None, :], B[None, :, :])
    return np.linalg.norm(C, axis=2)


def line_basis(line) -> tuple[np.ndarray, np.ndarray]:
    """Two orthonormal points spanning the line {p : line . p = 0}.

    Gram-Schmidt of the standard basis vectors (skipping the index of the
    largest line coordinate) against conj(line); deterministic.
    """
    l = np.asarray(line, dtype=complex)
    n = l.conj() / np.linalg.norm(l)
    k = int(np.argmax(np.abs(l)))
    basis = []
    for i in range(3):
        if i == k:
            continue
        e = np.zeros(3, dtype=complex)
        e[i] = 1.0
        e = e - n * (n.conj() @ e)
        for b in basis:
            e = e - b * (b.conj() @ e)
        basis.append(e / np.linalg.norm(e))
    return basis[0], basis[1]


def random_unitary(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# ---------------------------------------------------------------------------
# binary restriction
# ---------------------------------------------------------------------------

def binary_restriction(poly: HomPoly, p0, p1) -> np.ndarray:
    """Coefficients of b(s, t) = poly(s*p0 + t*p1); b[k] multiplies s^k t^(d-k).

    Exact interpolation at the (d+1)-th roots of unity (t = w^j, s = 1).
    """
    d = poly.degree
    p0 = np.asarray(p0, dtype=complex)
    p1 = np.asarray(p1, dtype=complex)
    w = np.exp(2j * np.pi * np.arange(d + 1) / (d + 1))
    vals = poly(p0[None, :] + w[:, None] * p1[None, :])
    # vals_j = sum_m c_m w^(jm), c_m = coefficient of t^m = b[d-m]
    c = np.fft.fft(vals) / (d + 1)
    return c[::-1].copy()


def binary_restriction_mp(poly: HomPoly, p0, p1) -> list:
    d = poly.degree
    n = d + 1
    vals = []
    ws = [mpmath.expjpi(mpmath.mpf(2 * j) / n) for j in range(n)]
    for w in ws:
        pt = [mpmath.mpc(p0[i]) + w * mpmath.mpc(p1[i]) for i in range(3)]
        vals.append(poly.eval_mp(pt))
    coeffs_t = []
    for m in range(n):
        coeffs_t.append(sum(vals[j] * mpmath.conj(ws[j]) ** m for j in range(n)) / n)
    return coeffs_t[::-1]


def polyval(coeffs, z):
    """Horner evaluation, coefficients lowest first."""
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def derivative(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    return c[1:] * np.arange(1, c.size)


# ---------------------------------------------------------------------------
# root finding (Aberth-Ehrlich)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSet:
    values: np.ndarray
    clusters: list = field(default_factory=list)

    def __len__(self):
        return len(self.values)


def _trim(coeffs, rel=0.0):
    c = list(coeffs)
    scale = max(abs(x) for x in c) if c else 0
    while c and abs(c[-1]) <= rel * scale:
        c.pop()
    return c


def _initial_radii(absc: Sequence[float]) -> list[tuple[float, int]]:
    """Upper convex hull of (k, log|a_k|) -> (radius, count) per hull edge."""
    pts = [(k, math.log(a)) for k, a in enumerate(absc) if a > 0]
    hull: list = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    out = []
    for (k1, l1), (k2, l2) in zip(hull, hull[1:]):
        out.append((math.exp((l1 - l2) / (k2 - k1)), k2 - k1))
    return out


def _initial_guesses(absc) -> np.ndarray:
    n = len(absc) - 1
    z = []
    sigma = 0.7
    for i, (r, cnt) in enumerate(_initial_radii(absc)):
        for j in range(cnt):
            z.append(r * np.exp(1j * (2 * np.pi * j / cnt + 2 * np.pi * i / n + sigma)))
    return np.array(z, dtype=complex)


def _aberth_np(c: np.ndarray, maxit: int) -> tuple[np.ndarray, bool]:
    n = c.size - 1
    z = _initial_guesses(np.abs(c))
    dc = derivative(c)
    absc = np.abs(c)
    eps = np.finfo(float).eps
    active = np.ones(n, dtype=bool)
    for _ in range(maxit):
        if not active.any():
            return z, True
        za = z[active]
        p = polyval(c, za)
        dp = polyval(dc, za)
        bound = polyval(absc, np.abs(za)).real * eps * 4 * n
        small = np.abs(p) <= bound
        diff = za[:, None] - z[None, :]
        idx = np.flatnonzero(active)
        diff[np.arange(idx.size), idx] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sum(1.0 / diff, axis=1)
            ratio = p / dp
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        w[bad] = 0.0
        za = za - w
        z[active] = za
        done = small | (np.abs(w) <= 2 * eps * np.abs(za))
        active[idx[done]] = False
    return z, not active.any()


def _newton_polish_np(c, z, steps=3):
    dc = derivative(c)
    for _ in range(steps):
        p = polyval(c, z)
        dp = polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - p / dp
        ok = np.isfinite(cand)
        pc = np.where(ok, polyval(c, np.where(ok, cand, 0)), np.inf)
        better = ok & (np.abs(pc) < np.abs(p))
        z = np.where(better, cand, z)
    return z


def _aberth_mp(c: list, maxit: int) -> tuple[list, bool]:
    n = len(c) - 1
    z = [mpmath.mpc(v) for v in _initial_guesses([float(abs(x)) for x in c])]
    dc = [c[k] * k for k in range(1, n + 1)]
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec)
    absc = [abs(x) for x in c]
    active = [True] * n
    for _ in range(maxit):
        if not any(active):
            return z, True
        for i in range(n):
            if not active[i]:
                continue
            p = mpmath.polyval(c[::-1], z[i])
            if abs(p) <= 4 * n * eps * mpmath.polyval(absc[::-1], abs(z[i])):
                active[i] = False
                continue
            dp = mpmath.polyval(dc[::-1], z[i])
            s = sum(1 / (z[i] - z[j]) for j in range(n) if j != i and z[i] != z[j])
            if dp == 0:
                continue
            ratio = p / dp
            w = ratio / (1 - ratio * s)
            z[i] -= w
            if abs(w) <= 2 * eps * abs(z[i]):
                active[i] = False
    return z, not any(active)


def root_clusters(values, radius: float) -> list[tuple[complex, int]]:
    """Single-linkage clusters at the given (relative) radius."""
    vals = np.asarray(values, dtype=complex)
    n = vals.size
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= radius * max(1.0, abs(vals[i]), abs(vals[j])):
                label[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(vals[i])
    return [(complex(np.mean(g)), len(g)) for g in groups.values()]


def roots(coeffs, prec: Precision = DEFAULT, maxit: int = 200) -> RootSet:
    """All complex roots of a univariate polynomial (coefficients lowest first)."""
    c = _trim(coeffs)
    if len(c) < 2:
        raise ValueError("polynomial of degree >= 1 required")
    nzero = 0
    while c[nzero] == 0:
        nzero += 1
    c = c[nzero:]
    found: list = []
    if len(c) > 1:
        if prec.extended:
            with mpmath.workdps(EXTENDED_DPS):
                cm = [mpmath.mpc(x) for x in c]
                zm, ok = _aberth_mp(cm, maxit)
                found = [complex(v) for v in zm]
        else:
            ca = np.array(c, dtype=complex)
            z, ok = _aberth_np(ca, maxit)
            found = list(_newton_polish_np(ca, z))
    values = np.array([0j] * nzero + found, dtype=complex)
    full = np.array(_trim(coeffs), dtype=complex)
    deg = full.size - 1
    nrm = np.linalg.norm(full)
    res = np.abs(polyval(full, values))
    allowed = prec.tol_sq * nrm * np.maximum(1.0, np.abs(values)) ** deg
    if np.any(~np.isfinite(values)) or np.any(res > allowed):
        raise NoConvergence(f"root finder failed: worst residual {np.max(res / allowed):.3g}x tolerance")
    return RootSet(values, root_clusters(values, prec.tol_dup))


def from_roots(rts) -> np.ndarray:
    """Monic polynomial (lowest first) with the given roots."""
    return np.polynomial.polynomial.polyfromroots(rts).astype(complex)


# ---------------------------------------------------------------------------
# subresultants
# ---------------------------------------------------------------------------

def _is_mp(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def subresultants(p, q) -> list:
    """Principal subresultant coefficients sres_0 (the resultant) .. sres_{deg q}.

    ``p`` and ``q`` list coefficients lowest first; each coefficient may be a
    number, an ndarray (values of a coefficient polynomial at sample points,
    evaluated pointwise) or an mpmath number.
    """
    m = len(p) - 1
    n = len(q) - 1
    if m < n:
        raise ValueError("deg p must be >= deg q")
    P = list(p)[::-1]
    Q = list(q)[::-1]
    use_mp = any(_is_mp(x) for x in P + Q)
    batch = np.broadcast(*[np.asarray(x) for x in P + Q]).shape if not use_mp else ()
    out = []
    for k in range(n + 1):
        size = m + n - 2 * k
        if size == 0:
            out.append(1)
            continue
        rows = []
        for i in range(n - k):
            rows.append([(i, j, P[j - i]) for j in range(i, i + m + 1) if j < size])
        for i in range(m - k):
            rows.append([(i, j, Q[j - i]) for j in range(i, i + n + 1) if j < size])
        if use_mp:
            M = mpmath.matrix(size, size)
            for r, row in enumerate(rows):
                for _, j, v in row:
                    M[r, j] = v
            out.append(mpmath.det(M))
        else:
            M = np.zeros(batch + (size, size), dtype=complex)
            for r, row in enumerate(rows):
                for _, j, v in row:
                    M[..., r, j] = v
            out.append(np.linalg.det(M))
    return out


def resultant(p, q):
    if len(p) < len(q):
        p, q = q, p
    return subresultants(p, q)[0]


def sylvester(p, q) -> np.ndarray:
    m = len(p) - 1
    n = len(q) - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    P = np.asarray(p, dtype=complex)[::-1]
    Q = np.asarray(q, dtype=complex)[::-1]
    for i in range(n):
        S[i, i:i + m + 1] = P
    for i in range(m):
        S[n + i, i:i + n + 1] = Q
    return S


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def nullspace_fit(points, degree: int, prec: Precision = DEFAULT) -> tuple[HomPoly, float]:
    """Curve of the given degree through the points (least squares beyond exact)."""
    pts = np.array([np.asarray(p, dtype=complex) for p in points])
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    A = monomial_vector(pts, degree)
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    ncols = A.shape[1]
    if A.shape[0] < ncols - 1:
        raise RankDeficient(f"{A.shape[0]} points cannot determine a degree-{degree} curve")
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    sv = np.zeros(ncols)
    sv[: s.size] = s
    if sv[-2] < prec.tol_geo:
        raise RankDeficient(
            f"fit not unique: second smallest singular value {sv[-2]:.3g}")
    c = vh[-1].conj()
    return HomPoly(degree, normalize_array(c)), float(sv[-1])


def fit_quality(points, degree: int) -> np.ndarray:
    """Singular values (ascending, padded) of the normalized incidence matrix."""
    pts = np.array([np.asarray(p, dtype=complex) for p in points])
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    A = monomial_vector(pts, degree)
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    s = np.linalg.svd(A, compute_uv=False)
    sv = np.zeros(A.shape[1])
    sv[: s.size] = s
    return np.sort(sv)


# ---------------------------------------------------------------------------
# intersecting two plane curves
# ---------------------------------------------------------------------------

def _newton2(f: HomPoly, g: HomPoly, pt: np.ndarray, steps: int = 8) -> np.ndarray:
    """Newton on (f, g) = 0 in the affine chart z = 1 of pt's coordinates."""
    x = np.array(pt, dtype=complex)
    x = x / x[2]

    def resid(y):
        return abs(f(y)) / f.norm + abs(g(y)) / g.norm

    r = resid(x)
    for _ in range(steps):
        gf = f.gradient(x)
        gg = g.gradient(x)
        J = np.array([[gf[0], gf[1]], [gg[0], gg[1]]])
        try:
            d = np.linalg.solve(J, -np.array([f(x), g(x)]))
        except np.linalg.LinAlgError:
            break
        y = x.copy()
        y[:2] += d
        ry = resid(y)
        if not np.isfinite(ry) or ry >= r:
            break
        x, r = y, ry
    return x


def intersect_curves(f: HomPoly, g: HomPoly, prec: Precision = DEFAULT, seed: int = 7) -> np.ndarray:
    """All deg f * deg g intersection points (with multiplicity), shape (n, 3).

    Works in a random unitary frame so that no intersection point lies at
    infinity and no two share a first coordinate; eliminates y by the
    Sylvester resultant sampled on the unit circle, solves the univariate in x,
    back-substitutes and polishes by Newton on (f, g).
    """
    T = random_unitary(seed)
    F = f.compose(T)
    G = g.compose(T)
    d1, d2 = F.degree, G.degree
    D = d1 * d2
    N = 1 << max(4, int(math.ceil(math.log2(D + 1))) + 1)
    xs = np.exp(2j * np.pi * np.arange(N) / N)
    e_y = np.array([0, 1, 0], dtype=complex)
    vals = np.empty(N, dtype=complex)
    for k, x0 in enumerate(xs):
        base = np.array([x0, 0, 1], dtype=complex)
        bf = binary_restriction(F, base, e_y)[::-1]  # coefficients in t (= y), lowest first
        bg = binary_restriction(G, base, e_y)[::-1]
        if d1 >= d2:
            vals[k] = np.linalg.det(sylvester(bf, bg))
        else:
            vals[k] = np.linalg.det(sylvester(bg, bf))
    coef = np.fft.fft(vals) / N
    R = coef[: D + 1]
    rs = roots(R, Precision(prec.mode, prec.tol_geo, prec.tol_dup, max(prec.tol_sq, 1e-6)))
    pts = []
    for x0 in rs.values:
        base = np.array([x0, 0, 1], dtype=complex)
        bf = binary_restriction(F, base, e_y)[::-1]
        ys = roots(bf, Precision(tol_sq=1e-4)).values
        cand = np.array([[x0, y, 1] for y in ys])
        best = cand[np.argmin(np.abs(G(cand)))]
        best = _newton2(F, G, best)
        p = T @ best
        pts.append(normalize_array(p))
    return np.array(pts)
