"""Quartic reconstruction from 28 unlabeled bitangents and nine-point completion."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from . import theta
from .cubic import (
    CubicCurve,
    beta_of_pairs,
    chord_map,
    conic_of_images,
    conic_smoothness,
    image_cubic,
)
from .errors import (
    DegenerateConfiguration,
    GeneralPositionFailure,
    InconsistentPairing,
    NoConvergence,
    NotAronhold,
    PullbackAmbiguity,
)
from .numerics import (
    DEFAULT,
    HomPoly,
    Precision,
    binary_restriction,
    intersect_curves,
    line_basis,
    n_monomials,
    normalize_array,
    nullspace_fit,
    proj_distance,
)
from .solver import (
    _best_frame,
    _dE,
    _E,
    _rotate_binary,
    certificate_residual,
    is_smooth,
    restrict,
)
from .structure import (
    LevelStructure,
    build_structure,
    designated_tuple,
    detect_tuples,
    with_pairs,
)

log = logging.getLogger(__name__)


def _unit_rows(P) -> np.ndarray:
    P = np.asarray(P, dtype=complex)
    return P / np.linalg.norm(P, axis=-1, keepdims=True)


# ---------------------------------------------------------------------------
# nine-point completion
# ---------------------------------------------------------------------------

def _line_points(c: CubicCurve, line) -> list:
    p0, p1 = line_basis(line)
    b = binary_restriction(c.poly, p0, p1)
    if abs(b[3]) >= abs(b[0]):
        return [normalize_array(r * p0 + p1) for r in np.polynomial.polynomial.polyroots(b)]
    return [normalize_array(p0 + r * p1) for r in np.polynomial.polynomial.polyroots(b[::-1])]


def _pullback(c: CubicCurve, beta, line, tol: float) -> tuple:
    """The two points of c on a chord line that differ by beta."""
    pts = _line_points(c, line)
    good = []
    for x, y in itertools.combinations(pts, 2):
        if proj_distance(x, y) < tol:
            continue
        if proj_distance(c.add(x, beta), y) < tol:
            good.append((x, y))
    if len(good) != 1:
        raise PullbackAmbiguity(f"{len(good)} candidate pairs on a chord")
    return good[0]


@dataclass(frozen=True, eq=False)
class Completion:
    points: np.ndarray      # the 3 recovered points
    pairs: tuple            # 6 index pairs into the 12 points (0..8 given, 9..11 recovered)
    cubic: CubicCurve
    beta: np.ndarray
    conic: HomPoly
    image: CubicCurve


def complete_from_nine(nine, marked_pair, prec: Precision = DEFAULT) -> Completion:
    """Recover the other 3 members and the pairing of a twelve-tuple from 9 of its points."""
    P = _unit_rows(nine)
    if P.shape != (9, 3):
        raise ValueError("need exactly nine points")
    a, b = marked_pair
    poly, _ = nullspace_fit(P, 3, prec)
    c = CubicCurve.from_poly(poly, prec)
    if not c.smooth:
        raise DegenerateConfiguration(f"the cubic through the nine points is {c.classification}")
    beta, dist = c.nearest_torsion(c.sub(P[a], P[b]))
    if dist > prec.tol_dup:
        raise InconsistentPairing(f"marked pair difference is not of order 2 (distance {dist:.3g})")
    imgs = []
    for p in P:
        img = chord_map(c, beta, p).coords
        if all(proj_distance(img, q) > prec.tol_dup for q in imgs):
            imgs.append(img)
    if len(imgs) < 5:
        raise DegenerateConfiguration("fewer than five distinct chord images")
    conic, _ = nullspace_fit(np.array(imgs), 2, prec)
    E, _ = image_cubic(c, beta)
    meets = intersect_curves(conic, E.poly, prec)
    chords = []
    for m in meets:
        if all(proj_distance(m, q) > prec.tol_dup for q in chords):
            chords.append(m)
    if len(chords) != 6:
        raise PullbackAmbiguity(f"conic meets the image cubic in {len(chords)} distinct points")
    allpts = list(P)
    pairs = []
    for ch in chords:
        x, y = _pullback(c, beta, ch, prec.tol_dup)
        ids = []
        for z in (x, y):
            d = [proj_distance(z, w) for w in allpts]
            k = int(np.argmin(d))
            if d[k] < prec.tol_dup:
                ids.append(k)
            else:
                allpts.append(normalize_array(z))
                ids.append(len(allpts) - 1)
        pairs.append(tuple(sorted(ids)))
    if len(allpts) != 12:
        raise PullbackAmbiguity(f"completion produced {len(allpts) - 9} new points")
    if tuple(sorted((a, b))) not in pairs:
        raise InconsistentPairing("the marked pair is not a pair of the completion")
    return Completion(np.array(allpts[9:]), tuple(sorted(pairs)), c, beta, conic, E)


# ---------------------------------------------------------------------------
# Aronhold construction
# ---------------------------------------------------------------------------

def aronhold_index_sets(s: LevelStructure) -> list:
    idx = {lab: i for i, lab in enumerate(s.labels)}
    return sorted(tuple(sorted(idx[l] for l in labs)) for labs in theta.aronhold_sets())


def select_aronhold(s: LevelStructure) -> tuple:
    """Lexicographically first 7 indices whose labels form an Aronhold set."""
    for seven in itertools.combinations(range(28), 7):
        if theta.is_aronhold([s.labels[i] for i in seven]):
            return seven
    raise NotAronhold("no Aronhold set in the labeling")


def _check_general_position(L: np.ndarray, tol: float) -> None:
    for i, j, k in itertools.combinations(range(len(L)), 3):
        if abs(np.linalg.det(L[[i, j, k]])) < tol:
            raise GeneralPositionFailure(f"lines {i}, {j}, {k} are concurrent")


def _variables():
    return [HomPoly.from_terms(1, {e: 1}) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]


def aronhold_quartic(seven, prec: Precision = DEFAULT, certify: bool = True) -> HomPoly:
    """The quartic having the seven lines as an Aronhold set of bitangents.

    In coordinates X = M p (rows of M the first three lines) the quartic is
    (X1 u1 + X2 u2 - X3 u3)^2 - 4 X1 X2 u1 u2 with linear forms u_j; each further
    line a . X = 0 is bitangent when sum_j u_j / a_j is proportional to a, which
    is linear in the u_j and the proportionality constants.
    """
    L = _unit_rows(seven)
    if L.shape != (7, 3):
        raise ValueError("need exactly seven lines")
    _check_general_position(L, 1e-6)
    M = L[:3]
    alphas = np.linalg.solve(M.T, L[3:].T).T  # alpha . (M p) = line . p
    A = np.zeros((12, 13), dtype=complex)
    for i, al in enumerate(alphas):
        for j in range(3):
            for r in range(3):
                A[3 * i + r, 3 * j + r] = 1 / al[j]
            A[3 * i:3 * i + 3, 9 + i] = al
    _, sv, vh = np.linalg.svd(A)
    if sv[-1] < 1e-8 * sv[0]:
        raise NotAronhold("the linear system has no unique solution")
    sol = vh[-1].conj()
    X = _variables()
    u = [X[0].scaled(sol[3 * j]) + X[1].scaled(sol[3 * j + 1]) + X[2].scaled(sol[3 * j + 2])
         for j in range(3)]
    S = X[0] * u[0] + X[1] * u[1] - X[2] * u[2]
    G = S * S - (X[0] * X[1] * u[0] * u[1]).scaled(4)
    q = G.compose(M).normalized()
    if certify:
        res = [certificate_residual(restrict(q, l).coeffs) for l in L]
        if max(res) > 1e-6:
            raise NotAronhold(f"input lines are not bitangent to the constructed quartic ({max(res):.3g})")
        if not is_smooth(q, prec):
            raise NotAronhold("constructed quartic is singular")
    return q


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------

@dataclass
class _LineFrame:
    R: np.ndarray       # 5 x 15: coefficients -> rotated binary quartic
    scale: float


def _restriction_matrix(line) -> np.ndarray:
    p0, p1 = line_basis(line)
    R = np.zeros((5, n_monomials(4)), dtype=complex)
    for k in range(n_monomials(4)):
        e = np.zeros(n_monomials(4), dtype=complex)
        e[k] = 1
        R[:, k] = binary_restriction(HomPoly(4, e), p0, p1)
    return R


def _frames(seed: HomPoly, lines) -> list:
    out = []
    for l in lines:
        R = _restriction_matrix(l)
        b = R @ seed.coeffs
        U = _best_frame(b)
        Rr = np.column_stack([_rotate_binary(R[:, k], U) for k in range(R.shape[1])])
        out.append(_LineFrame(Rr, float(np.linalg.norm(b))))
    return out


def _residuals(c: np.ndarray, frames: list, jac: bool = False):
    res = []
    rows = []
    for f in frames:
        b = f.R @ c
        e1, e2 = _E(b)
        res += [e1 / f.scale ** 3, e2 / f.scale ** 4]
        if jac:
            d1, d2 = _dE(b)
            rows += [(d1 @ f.R) / f.scale ** 3, (d2 @ f.R) / f.scale ** 4]
    res = np.array(res)
    return (res, np.array(rows)) if jac else res


def refine(seed: HomPoly, lines, prec: Precision = DEFAULT, maxit: int = 100) -> tuple:
    """Gauss-Newton on the bitangency conditions of all lines; returns (quartic, history)."""
    seed = seed.normalized()
    lines = _unit_rows(lines)
    frames = _frames(seed, lines)
    c = seed.coeffs.copy()
    gauge = int(np.argmax(np.abs(c)))
    free = [k for k in range(c.size) if k != gauge]
    r = _residuals(c, frames)
    history = [float(np.linalg.norm(r))]
    for _ in range(maxit):
        if history[-1] < 1e-3 * prec.tol_sq:
            break
        r, J = _residuals(c, frames, jac=True)
        step = np.linalg.lstsq(J[:, free], -r, rcond=None)[0]
        trial = c.copy()
        trial[free] += step
        rt = _residuals(trial, frames)
        if np.linalg.norm(rt) >= history[-1]:
            break
        c = trial
        history.append(float(np.linalg.norm(rt)))
        if np.linalg.norm(step) < 1e-15 * np.linalg.norm(c):
            break
    else:
        raise NoConvergence(f"refinement did not converge (residual {history[-1]:.3g})")
    q = HomPoly(4, c).normalized()
    return q, history


def compare_proportional(a: HomPoly, b: HomPoly) -> float:
    """Max coefficient difference after scaling both to unit norm with matched phase."""
    if a.degree != b.degree:
        raise ValueError("degrees differ")
    x = a.coeffs / np.linalg.norm(a.coeffs)
    y = b.coeffs / np.linalg.norm(b.coeffs)
    k = int(np.argmax(np.abs(x)))
    x = x * (abs(x[k]) / x[k])
    y = y * (abs(y[k]) / y[k]) if y[k] != 0 else y
    return float(np.max(np.abs(x - y)))


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Configuration:
    tuple_index: int
    cubic: CubicCurve
    beta: np.ndarray
    image: CubicCurve
    image_residual: float
    conic: HomPoly
    conic_residual: float
    conic_smoothness: float


@dataclass(frozen=True, eq=False)
class ReconstructionReport:
    input_lines: np.ndarray
    structure: LevelStructure
    configuration: Configuration
    aronhold: tuple
    seed_quartic: HomPoly
    refined_quartic: HomPoly
    residuals: np.ndarray
    history: list = field(default_factory=list)
    comparison: float | None = None


def assemble_configuration(s: LevelStructure, lines, prec: Precision = DEFAULT) -> Configuration:
    k = designated_tuple(s)
    t = s.tuples[k]
    P = _unit_rows(lines)
    pairs = [(P[a], P[b]) for a, b in t.pairs]
    beta = beta_of_pairs(t.cubic, pairs, prec)
    E, eres = image_cubic(t.cubic, beta)
    conic, cres = conic_of_images(t.cubic, beta, pairs, prec)
    return Configuration(k, t.cubic, beta, E, eres, conic, cres, conic_smoothness(conic))


def reconstruct(lines, prec: Precision = DEFAULT, reference: HomPoly | None = None,
                threads: int = 1) -> ReconstructionReport:
    """From 28 unlabeled lines to the quartic they are the bitangents of."""
    L = np.array([normalize_array(l) for l in np.asarray(lines, dtype=complex)])
    tuples = detect_tuples(L, prec, threads=threads)
    s = with_pairs(build_structure(tuples), L)
    config = assemble_configuration(s, L, prec)
    seven = select_aronhold(s)
    seed = aronhold_quartic(L[list(seven)], prec)
    refined, history = refine(seed, L, prec)
    residuals = np.array([certificate_residual(restrict(refined, l).coeffs) for l in L])
    comp = compare_proportional(refined, reference) if reference is not None else None
    return ReconstructionReport(L, s, config, seven, seed, refined, residuals, history, comp)
