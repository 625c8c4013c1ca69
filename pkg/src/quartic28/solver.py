"""The 28 bitangents of a smooth plane quartic.

In a chart of the dual plane the line y = u x + v z is parameterized by
(s, t) -> s (1, u, 0) + t (0, v, 1), so the quartic restricts to a binary
quartic b(s, t) whose coefficients are polynomials in (u, v).  With
b4 != 0, b is a perfect square exactly when

    E1 = 8 b1 b4^2 - 4 b2 b3 b4 + b3^3 = 0
    E2 = 64 b0 b4^3 - (4 b2 b4 - b3^2)^2 = 0.

E1 and E2 have degree 3 and 4 in v, and Res_v(E1, E2) = b4(u)^8 * P(u)
with deg P = 28; the roots of P are the chart slopes of the bitangents.
Charts are random unitary frames, each root is polished by Newton on
(E1, E2) and certified on the original quartic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import CountMismatch, NotSmooth
from .numerics import (
    DEFAULT,
    EXTENDED_DPS,
    HomPoly,
    Precision,
    ProjVec,
    binary_restriction,
    derivative,
    intersect_curves,
    line_basis,
    monomial_vector,
    normalize_array,
    pairwise_proj_distance,
    proj_distance,
    random_unitary,
    relative_gradient,
    roots,
    subresultants,
)

log = logging.getLogger(__name__)

N_CHARTS = 3
CHART_SEED = 1000
SMOOTH_TOL = 1e-6


@dataclass(frozen=True)
class Restriction:
    coeffs: np.ndarray
    p0: np.ndarray
    p1: np.ndarray

    @property
    def is_zero(self) -> bool:
        scale = np.linalg.norm(self.p0) * np.linalg.norm(self.p1)
        return bool(np.all(np.abs(self.coeffs) <= 1e-14 * max(scale, 1.0)))

    def point(self, s, t) -> np.ndarray:
        return s * self.p0 + t * self.p1


@dataclass(frozen=True)
class SquareCertificate:
    scale: complex
    root: np.ndarray
    residual: float
    sres: tuple


@dataclass(frozen=True, eq=False)
class Bitangent:
    line: ProjVec
    contacts: tuple
    certificate: float
    square_root: np.ndarray
    scale: complex

    @property
    def coords(self) -> np.ndarray:
        return self.line.coords


@dataclass(frozen=True, eq=False)
class BitangentSet:
    quartic: HomPoly
    lines: tuple
    provenance: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __getitem__(self, i):
        return self.lines[i]

    def array(self) -> np.ndarray:
        return np.array([b.line.coords for b in self.lines])


# ---------------------------------------------------------------------------
# restriction and square certificate
# ---------------------------------------------------------------------------

def restrict(q: HomPoly, line) -> Restriction:
    p0, p1 = line_basis(np.asarray(line, dtype=complex))
    return Restriction(binary_restriction(q, p0, p1), p0, p1)


def _rotate_binary(b: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Coefficients of b(U @ (s, t)) for a 2x2 matrix U."""
    d = b.size - 1
    w = np.exp(2j * np.pi * np.arange(d + 1) / (d + 1))
    s = U[0, 0] + w * U[0, 1]
    t = U[1, 0] + w * U[1, 1]
    vals = sum(b[k] * s ** k * t ** (d - k) for k in range(d + 1))
    return (np.fft.fft(vals) / (d + 1))[::-1]


def _best_frame(b: np.ndarray) -> np.ndarray:
    """A unitary substitution making the s^d coefficient large."""
    best, bestU = -1.0, None
    for k in range(12):
        th = np.pi * k / 12
        for ph in (0.0, 0.9):
            U = np.array([[np.cos(th), -np.exp(-1j * ph) * np.sin(th)],
                          [np.exp(1j * ph) * np.sin(th), np.cos(th)]])
            lead = abs(sum(b[j] * U[0, 0] ** j * U[1, 0] ** (b.size - 1 - j) for j in range(b.size)))
            if lead > best:
                best, bestU = lead, U
    return bestU


def _square(r: np.ndarray) -> np.ndarray:
    return np.convolve(r, r)


def binary_sqrt(b: np.ndarray) -> np.ndarray:
    """Least-squares r with r^2 ~ b for a binary quartic b (coefficients s^k t^(4-k))."""
    U = _best_frame(b)
    bb = _rotate_binary(b, U)
    r2 = np.sqrt(bb[4])
    r1 = bb[3] / (2 * r2)
    r0 = (bb[2] - r1 * r1) / (2 * r2)
    rr = np.array([r0, r1, r2])
    for _ in range(4):
        res = _square(rr) - bb
        J = np.zeros((5, 3), dtype=complex)
        for k in range(3):
            e = np.zeros(3, dtype=complex)
            e[k] = 1
            J[:, k] = 2 * np.convolve(rr, e)
        step = np.linalg.lstsq(J, -res, rcond=None)[0]
        rr = rr + step
    return _rotate_binary(rr, np.linalg.inv(U))


def relative_sres(b: np.ndarray) -> tuple:
    """|sres_0|, |sres_1| of (b, b') scaled by the coefficient norms, in a frame with a large leading coefficient."""
    bb = _rotate_binary(np.asarray(b, dtype=complex), _best_frame(b))
    db = derivative(bb)
    s = subresultants(bb, db)
    nb, nd = np.linalg.norm(bb), np.linalg.norm(db)
    m, n = 4, 3
    return tuple(abs(s[k]) / (nb ** (n - k) * nd ** (m - k)) for k in (0, 1))


def square_certificate(b, prec: Precision = DEFAULT) -> SquareCertificate | None:
    """b = c * r^2 with r a binary quadratic, or None when b is not a square."""
    b = np.asarray(b, dtype=complex)
    nb = np.linalg.norm(b)
    if nb == 0:
        raise ValueError("binary quartic is identically zero")
    sres = relative_sres(b)
    r = binary_sqrt(b)
    r = normalize_array(r)
    r2 = _square(r)
    c = np.vdot(r2, b) / np.vdot(r2, r2)
    resid = float(np.linalg.norm(b - c * r2) / nb)
    if max(sres) > prec.tol_sq or resid > prec.tol_sq:
        return None
    return SquareCertificate(complex(c), r, resid, sres)


def certificate_residual(b) -> float:
    """Relative distance of b from the square cone (reported even when large)."""
    b = np.asarray(b, dtype=complex)
    r = binary_sqrt(b)
    r2 = _square(r)
    c = np.vdot(r2, b) / np.vdot(r2, r2)
    return float(max(np.linalg.norm(b - c * r2) / np.linalg.norm(b), *relative_sres(b)))


def binary_roots(r: np.ndarray) -> list:
    """Roots (s, t) of a binary form, as unit vectors."""
    r = np.asarray(r, dtype=complex)
    d = r.size - 1
    if abs(r[-1]) >= abs(r[0]):
        zs = np.polynomial.polynomial.polyroots(r) if d > 1 else [-r[0] / r[1]]
        out = [np.array([z, 1.0]) for z in zs]
    else:
        ws = np.polynomial.polynomial.polyroots(r[::-1]) if d > 1 else [-r[1] / r[0]]
        out = [np.array([1.0, w]) for w in ws]
    return [o / np.linalg.norm(o) for o in out]


# ---------------------------------------------------------------------------
# smoothness
# ---------------------------------------------------------------------------

def _combo(parts, weights) -> HomPoly:
    total = parts[0].scaled(weights[0])
    for p, w in zip(parts[1:], weights[1:]):
        total = total + p.scaled(w)
    return total


def singular_points(q: HomPoly, prec: Precision = DEFAULT, tol: float = SMOOTH_TOL) -> list:
    """Points of q where the gradient vanishes (relative to the coefficient norm)."""
    parts = [q.derivative(i) for i in range(3)]
    rng = np.random.default_rng(11)
    w1 = rng.normal(size=3) + 1j * rng.normal(size=3)
    w2 = rng.normal(size=3) + 1j * rng.normal(size=3)
    g1, g2 = _combo(parts, w1), _combo(parts, w2)
    pts = intersect_curves(g1, g2, prec)
    rel = relative_gradient(q, pts)
    return [normalize_array(p) for p, r in zip(pts, rel) if r < tol]


def is_smooth(q: HomPoly, prec: Precision = DEFAULT) -> bool:
    return not singular_points(q, prec)


# ---------------------------------------------------------------------------
# chart solve
# ---------------------------------------------------------------------------

_W5 = np.exp(2j * np.pi * np.arange(5) / 5)


def _b_grid(Q: HomPoly, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """b coefficients for every (u_i, v_j): shape (len(u), len(v), 5)."""
    U, V, W = np.meshgrid(u, v, _W5, indexing="ij")
    pts = np.stack([np.ones_like(U), U + W * V, W], axis=-1)
    vals = Q(pts)
    c = np.fft.fft(vals, axis=-1) / 5  # coefficient of t^m
    return c[..., ::-1]


def _E(b: np.ndarray) -> tuple:
    b0, b1, b2, b3, b4 = (b[..., k] for k in range(5))
    e1 = 8 * b1 * b4 ** 2 - 4 * b2 * b3 * b4 + b3 ** 3
    e2 = 64 * b0 * b4 ** 3 - (4 * b2 * b4 - b3 ** 2) ** 2
    return e1, e2


def _dE(b: np.ndarray) -> tuple:
    b0, b1, b2, b3, b4 = b
    k = 4 * b2 * b4 - b3 ** 2
    d1 = np.array([0, 8 * b4 ** 2, -4 * b3 * b4, -4 * b2 * b4 + 3 * b3 ** 2, 16 * b1 * b4 - 4 * b2 * b3])
    d2 = np.array([64 * b4 ** 3, 0, -8 * k * b4, 4 * b3 * k, 192 * b0 * b4 ** 2 - 8 * k * b2])
    return d1, d2


def _v_coeffs(Q: HomPoly, u: np.ndarray) -> tuple:
    """Coefficients in v (lowest first) of E1 (cubic) and E2 (quartic) for each u."""
    vs = _W5
    b = _b_grid(Q, u, vs)
    e1, e2 = _E(b)
    c1 = np.fft.fft(e1, axis=-1) / 5
    c2 = np.fft.fft(e2, axis=-1) / 5
    return c1[:, :4], c2


def chart_polynomial(Q: HomPoly, n_samples: int = 64) -> tuple:
    """Degree-28 bitangent polynomial in u for the chart y = u x + v z of Q."""
    us = np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
    c1, c2 = _v_coeffs(Q, us)
    res = subresultants([c2[:, k] for k in range(5)], [c1[:, k] for k in range(4)])[0]
    b4 = Q(np.stack([np.ones_like(us), us, np.zeros_like(us)], axis=-1))
    vals = res / b4 ** 8
    coef = np.fft.fft(vals) / n_samples
    tail = float(np.max(np.abs(coef[29:])) / np.max(np.abs(coef[:29])))
    return coef[:29], tail


def chart_polynomial_mp(Q: HomPoly, n_samples: int = 64) -> list:
    """Same as chart_polynomial at extended precision (mpmath)."""
    with mpmath.workdps(EXTENDED_DPS):
        us = [mpmath.expjpi(mpmath.mpf(2 * k) / n_samples) for k in range(n_samples)]
        w5 = [mpmath.expjpi(mpmath.mpf(2 * k) / 5) for k in range(5)]
        vals = []
        for u in us:
            e1s, e2s = [], []
            for v in w5:
                bt = [Q.eval_mp([1, u + w * v, w]) for w in w5]
                cm = [sum(bt[j] * mpmath.conj(w5[j]) ** m for j in range(5)) / 5 for m in range(5)]
                b = cm[::-1]
                e1s.append(8 * b[1] * b[4] ** 2 - 4 * b[2] * b[3] * b[4] + b[3] ** 3)
                e2s.append(64 * b[0] * b[4] ** 3 - (4 * b[2] * b[4] - b[3] ** 2) ** 2)
            c1 = [sum(e1s[j] * mpmath.conj(w5[j]) ** m for j in range(5)) / 5 for m in range(4)]
            c2 = [sum(e2s[j] * mpmath.conj(w5[j]) ** m for j in range(5)) / 5 for m in range(5)]
            r = subresultants(c2, c1)[0]
            vals.append(r / Q.eval_mp([1, u, 0]) ** 8)
        coef = [sum(vals[j] * mpmath.conj(us[j]) ** m for j in range(n_samples)) / n_samples
                for m in range(29)]
        return coef


def _newton_uv(Q: HomPoly, Qy: HomPoly, u: complex, v: complex, steps: int = 12):
    def evalb(u, v):
        p0 = np.array([1, u, 0], dtype=complex)
        p1 = np.array([0, v, 1], dtype=complex)
        return binary_restriction(Q, p0, p1), p0, p1

    b, p0, p1 = evalb(u, v)
    e = np.array(_E(b))
    scale = (np.linalg.norm(b) ** 3, np.linalg.norm(b) ** 4)
    err = abs(e[0]) / scale[0] + abs(e[1]) / scale[1]
    for _ in range(steps):
        c = binary_restriction(Qy, p0, p1)
        db_du = np.concatenate([[0], c])
        db_dv = np.concatenate([c, [0]])
        d1, d2 = _dE(b)
        J = np.array([[d1 @ db_du, d1 @ db_dv], [d2 @ db_du, d2 @ db_dv]])
        try:
            du, dv = np.linalg.solve(J, -e)
        except np.linalg.LinAlgError:
            break
        b2, q0, q1 = evalb(u + du, v + dv)
        e2 = np.array(_E(b2))
        err2 = abs(e2[0]) / scale[0] + abs(e2[1]) / scale[1]
        if not np.isfinite(err2) or err2 >= err:
            break
        u, v, b, p0, p1, e, err = u + du, v + dv, b2, q0, q1, e2, err2
        if abs(du) + abs(dv) <= 1e-15 * (1 + abs(u) + abs(v)):
            break
    return u, v


def solve_chart(q: HomPoly, T: np.ndarray, prec: Precision = DEFAULT) -> tuple:
    """Candidate bitangent covectors (original coordinates) from one chart."""
    Q = q.compose(T)
    Qy = Q.derivative(1)
    if prec.extended:
        coef = chart_polynomial_mp(Q)
        tail = 0.0
        us = roots(coef, prec).values
    else:
        coef, tail = chart_polynomial(Q)
        us = roots(coef, Precision(tol_sq=1e-6)).values
    lines = []
    for u in us:
        c1, c2 = _v_coeffs(Q, np.array([u]))
        vs = np.polynomial.polynomial.polyroots(c1[0]) if abs(c1[0, 3]) > 0 else []
        if len(vs) == 0:
            continue
        scores = [abs(np.polynomial.polynomial.polyval(v, c2[0])) for v in vs]
        v = vs[int(np.argmin(scores))]
        u2, v2 = _newton_uv(Q, Qy, u, v)
        lp = np.array([u2, -1.0, v2])
        lines.append(normalize_array(T.conj() @ lp))
    return lines, {"tail": tail}


def _make_bitangent(q: HomPoly, line: np.ndarray, prec: Precision) -> Bitangent | None:
    rs = restrict(q, line)
    cert = square_certificate(rs.coeffs, prec)
    if cert is None:
        return None
    contacts = tuple(
        ProjVec(normalize_array(rs.point(st[0], st[1]))) for st in binary_roots(cert.root))
    return Bitangent(ProjVec(normalize_array(line), "line"), contacts, cert.residual, cert.root, cert.scale)


def bitangents(q: HomPoly, prec: Precision = DEFAULT, check_smooth: bool = True) -> BitangentSet:
    """All 28 bitangents of a smooth quartic, certified and deduplicated."""
    if q.degree != 4:
        raise ValueError("a quartic is required")
    if check_smooth:
        sing = singular_points(q, prec)
        if sing:
            raise NotSmooth(f"quartic is singular at {sing[0]}")
    found: list = []
    tails = []
    for chart in range(N_CHARTS):
        T = random_unitary(CHART_SEED + chart)
        cands, info = solve_chart(q, T, prec)
        tails.append(info["tail"])
        for line in cands:
            bt = _make_bitangent(q, line, prec)
            if bt is None:
                continue
            for k, other in enumerate(found):
                if proj_distance(other.line.coords, bt.line.coords) < prec.tol_dup:
                    if bt.certificate < other.certificate:
                        found[k] = bt
                    break
            else:
                found.append(bt)
    if len(found) != 28:
        if not prec.extended:
            log.info("found %d bitangents; retrying in extended precision", len(found))
            return bitangents(q, prec.with_mode("extended"), check_smooth=False)
        raise CountMismatch(len(found))
    found.sort(key=lambda b: _sort_key(b.line.coords))
    return BitangentSet(q, tuple(found), {"charts": N_CHARTS, "mode": prec.mode, "tails": tails})


def _sort_key(c) -> tuple:
    c = normalize_array(c)
    return tuple(round(float(x), 9) for z in c for x in (z.real, z.imag))


def contact_points(bs) -> np.ndarray:
    return np.array([[c.coords for c in b.contacts] for b in bs])


def syzygetic_test(q: HomPoly, four, prec: Precision = DEFAULT) -> int:
    """1 iff the eight contact points of four bitangents lie on a conic."""
    four = list(four)
    if len(four) != 4:
        raise ValueError("need four bitangents")
    arr = np.array([b.line.coords for b in four])
    D = pairwise_proj_distance(arr, arr)
    if np.any(D[np.triu_indices(4, 1)] < prec.tol_dup):
        raise ValueError("bitangents must be distinct")
    pts = [c.coords for b in four for c in b.contacts]
    A = monomial_vector(np.array(pts) / np.linalg.norm(pts, axis=1, keepdims=True), 2)
    A = A / np.linalg.norm(A, axis=1, keepdims=True)
    s = np.linalg.svd(A, compute_uv=False)
    return int(s[-1] < prec.tol_geo)


def max_certificate(bs: BitangentSet) -> float:
    return max(b.certificate for b in bs)


def bitangent_residuals(q: HomPoly, lines) -> np.ndarray:
    """Certificate residual of each line against q."""
    return np.array([certificate_residual(restrict(q, l).coeffs) for l in lines])
