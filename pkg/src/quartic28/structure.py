"""Twelve-tuples of the 28 dual points and the level-2 structure they carry.

Detection: cubics through 8 points form a pencil, and every further point
selects one member of it; an 8-subset of a tuple therefore sees the other 4
members on a common pencil member.  Candidates found this way are only
hypotheses (symmetric quartics carry extra 12-point cubics), so the tuple
family is grown as a set closed under the tuple-sum rules

    |A & B| = 4:  A + B = (A & B) | ~(A | B)
    |A & B| = 6:  A + B = A ^ B

with every generated tuple checked geometrically.  The family of 63 is then
coordinatized as F_2^6 and matched with the theta model.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import theta
from .cubic import CubicCurve, beta_of_pairs
from .errors import (
    DegenerateConfiguration,
    ExcessIncidence,
    InconsistentStructure,
    PairingAmbiguous,
    TupleCountMismatch,
)
from .numerics import DEFAULT, HomPoly, Precision, monomial_vector, pairwise_proj_distance

log = logging.getLogger(__name__)

FULL = (1 << 28) - 1
BATCH = 1500
MAX_BATCHES = 40
MARGIN = 10.0


def members_of(mask: int) -> tuple:
    return tuple(i for i in range(28) if mask >> i & 1)


def mask_of(members) -> int:
    m = 0
    for i in members:
        m |= 1 << int(i)
    return m


def popcount(x: int) -> int:
    return bin(x).count("1")


def tuple_sum(a: int, b: int) -> int:
    """Sum of two tuple classes as index sets (0 for a == b)."""
    if a == b:
        return 0
    k = popcount(a & b)
    if k == 4:
        return (a & b) | (FULL & ~(a | b))
    if k == 6:
        return a ^ b
    raise InconsistentStructure(f"tuples meet in {k} points")


@dataclass(frozen=True, eq=False)
class DetectedTuple:
    members: tuple
    cubic: CubicCurve
    residual: float
    margin: float
    pairs: tuple | None = None

    @property
    def mask(self) -> int:
        return mask_of(self.members)


@dataclass(frozen=True, eq=False)
class LevelStructure:
    tuples: tuple
    pairing_matrix: np.ndarray
    labels: tuple          # point index -> odd theta label
    classes: tuple         # tuple index -> two-torsion label
    info: dict = field(default_factory=dict)

    def tuple_index(self, gamma: int) -> int:
        return self.classes.index(gamma)

    def point_of(self, label: int) -> int:
        return self.labels.index(label)


# ---------------------------------------------------------------------------
# detection
# ---------------------------------------------------------------------------

def _veronese(points) -> np.ndarray:
    P = np.asarray(points, dtype=complex)
    P = P / np.linalg.norm(P, axis=1, keepdims=True)
    V = monomial_vector(P, 3)
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def _pencil_candidates(V: np.ndarray, seed: int, batch: int, tol: float) -> set:
    rng = np.random.default_rng(seed)
    S = np.argsort(rng.random((batch, 28)), axis=1)[:, :8]
    _, s, vh = np.linalg.svd(V[S])
    N = np.swapaxes(vh[:, -2:, :].conj(), 1, 2)
    vals = V[None, :, :] @ N  # (batch, 28, 2)
    nrm = np.linalg.norm(vals, axis=2)
    out = set()
    for r in range(batch):
        if s[r, 7] < 1e-6:
            continue
        inS = np.zeros(28, bool)
        inS[S[r]] = True
        base = (nrm[r] < tol) & ~inS
        rest = np.flatnonzero(~inS & ~base)
        ab = vals[r, rest] / nrm[r, rest, None]
        cross = np.abs(ab[:, None, 0] * ab[None, :, 1] - ab[:, None, 1] * ab[None, :, 0])
        close = cross < 1e-7
        seen = np.zeros(len(rest), bool)
        for i in range(len(rest)):
            if seen[i]:
                continue
            grp = np.flatnonzero(close[i])
            seen[grp] = True
            total = 8 + int(base.sum()) + len(grp)
            if total == 12:
                out.add(mask_of(list(S[r]) + list(np.flatnonzero(base)) + list(rest[grp])))
    return out


class _Verifier:
    """Geometric check that an index set is exactly the incidence set of one cubic."""

    def __init__(self, V: np.ndarray, prec: Precision):
        self.V = V
        self.prec = prec
        self.cache: dict = {}

    def fit(self, mask: int):
        if mask not in self.cache:
            idx = list(members_of(mask))
            _, s, vh = np.linalg.svd(self.V[idx])
            c = vh[-1].conj()
            res = np.abs(self.V @ c)
            inside = res[idx].max()
            outside = np.delete(res, idx).min()
            self.cache[mask] = (s[-1], s[-2], inside, outside, c)
        return self.cache[mask]

    def ok(self, mask: int) -> bool:
        if popcount(mask) != 12:
            return False
        sv, sv2, inside, outside, _ = self.fit(mask)
        return sv < self.prec.tol_geo and inside < self.prec.tol_geo and sv2 > self.prec.tol_geo


def _close(family: set, verifier: _Verifier) -> set | None:
    family = set(family)
    frontier = list(family)
    while frontier:
        new = []
        for a in frontier:
            for b in list(family):
                if a == b:
                    continue
                try:
                    c = tuple_sum(a, b)
                except InconsistentStructure:
                    return None
                if c not in family:
                    if not verifier.ok(c):
                        return None
                    family.add(c)
                    new.append(c)
                    if len(family) > 63:
                        return None
        frontier = new
    return family


def _grow(candidates: list, verifier: _Verifier) -> set:
    best: set = set()
    for start in candidates:
        family = {start}
        for c in candidates:
            if c in family:
                continue
            grown = _close(family | {c}, verifier)
            if grown is not None:
                family = grown
                if len(family) == 63:
                    return family
        if len(family) > len(best):
            best = family
    return best


def detect_tuples(points, prec: Precision = DEFAULT, seed: int = 0, threads: int = 1,
                  classify_cubics: bool = True) -> list:
    """The 63 twelve-tuples of 28 dual points, sorted by member indices."""
    P = np.asarray(points, dtype=complex)
    if P.shape != (28, 3):
        raise TupleCountMismatch(0, f"need 28 points, got {P.shape[0]}")
    D = pairwise_proj_distance(P, P)
    if np.any(D[np.triu_indices(28, 1)] < prec.tol_dup):
        raise ValueError("points must be pairwise distinct")
    V = _veronese(P)
    verifier = _Verifier(V, prec)
    candidates: set = set()
    family: set = set()
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        step = max(threads, 1)
        for start in range(0, MAX_BATCHES, step):
            seeds = [(seed, k) for k in range(start, min(start + step, MAX_BATCHES))]
            seeds = [np.random.SeedSequence(list(s)) for s in seeds]
            args = [(V, ss, BATCH, prec.tol_geo) for ss in seeds]
            if pool is None:
                results = [_pencil_candidates(*a) for a in args]
            else:
                results = list(pool.map(lambda a: _pencil_candidates(*a), args))
            fresh = {m for r in results for m in r if verifier.ok(m)} - candidates
            if not fresh:
                continue
            candidates |= fresh
            family = _grow(sorted(candidates), verifier)
            if len(family) == 63:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    if len(family) != 63:
        raise TupleCountMismatch(len(family))
    out = []
    for mask in sorted(family, key=members_of):
        sv, _, inside, outside, c = verifier.fit(mask)
        if outside < prec.tol_geo or outside < MARGIN * inside:
            raise ExcessIncidence(f"cubic through {members_of(mask)} meets a 13th point")
        poly = HomPoly(3, c)
        cubic = CubicCurve.from_poly(poly, prec) if classify_cubics else CubicCurve(poly.normalized(), "unknown", prec)
        out.append(DetectedTuple(members_of(mask), cubic, float(inside), float(outside)))
    return out


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def _span_coordinates(masks: list) -> dict:
    """F_2^6 coordinates of the tuple classes (0 for the empty sum)."""
    vec = {0: 0}
    nbits = 0
    for m in masks:
        if m in vec:
            continue
        if nbits == 6:
            raise InconsistentStructure("tuple classes do not form F_2^6")
        bit = 1 << nbits
        nbits += 1
        for x, v in list(vec.items()):
            y = tuple_sum(x, m) if x else m
            if y in vec and vec[y] != v ^ bit:
                raise InconsistentStructure("tuple sums are not consistent")
            vec[y] = v ^ bit
    if nbits != 6 or set(vec) != set(masks) | {0}:
        raise InconsistentStructure("tuple classes do not span F_2^6")
    return vec


def build_structure(tuples: list) -> LevelStructure:
    """Pairing matrix and an explicit isomorphism with the theta model."""
    if len(tuples) != 63:
        raise TupleCountMismatch(len(tuples))
    masks = [t.mask for t in tuples]
    if len(set(masks)) != 63 or any(popcount(m) != 12 for m in masks):
        raise InconsistentStructure("tuples must be 63 distinct 12-sets")
    inter = np.array([[popcount(a & b) for b in masks] for a in masks])
    off = inter[~np.eye(63, dtype=bool)]
    if not set(np.unique(off)) <= {theta.syzygetic_size(), theta.azygetic_size()}:
        raise InconsistentStructure(f"intersection sizes {sorted(set(np.unique(off)))}")
    pm = (inter == theta.azygetic_size()).astype(np.uint8)
    np.fill_diagonal(pm, 0)
    vec = _span_coordinates(masks)
    for i in range(63):
        for j in range(i + 1, 63):
            if vec[tuple_sum(masks[i], masks[j])] != vec[masks[i]] ^ vec[masks[j]]:
                raise InconsistentStructure("tuple sums are not consistent")
    by_vec = {vec[m]: k for k, m in enumerate(masks)}

    def W(x, y):
        if x == 0 or y == 0 or x == y:
            return 0
        return int(pm[by_vec[x], by_vec[y]])

    for x in range(1, 64):
        for y in range(1, 64):
            for z in (1, 2, 4, 8, 16, 32):
                if W(x ^ y, z) != W(x, z) ^ W(y, z):
                    raise InconsistentStructure("pairing is not bilinear")
    member = [[(masks[by_vec[g]] >> p) & 1 if g else 0 for g in range(64)] for p in range(28)]

    Q = None
    for t0 in range(1, 64):
        cand = [0] + [W(t0, g) ^ 1 ^ member[0][g] for g in range(1, 64)]
        if cand[t0] != 1 or cand.count(0) != 36:
            continue
        if all(cand[x ^ y] == cand[x] ^ cand[y] ^ W(x, y) for x in range(64) for y in range(64)):
            Q = cand
            break
    if Q is None:
        raise InconsistentStructure("no quadratic form matches the tuple incidences")
    thetas = []
    for p in range(28):
        sol = [x for x in range(64)
               if all(W(x, g) == Q[g] ^ 1 ^ member[p][g] for g in range(1, 64))]
        if len(sol) != 1 or Q[sol[0]] != 1:
            raise InconsistentStructure(f"point {p} has no consistent label")
        thetas.append(sol[0])
    if len(set(thetas)) != 28:
        raise InconsistentStructure("labels are not distinct")

    remaining = list(range(64))
    basis = []
    for _ in range(3):
        a = next(v for v in remaining if v and Q[v] == 0)
        b = next(v for v in remaining if W(a, v) == 1)
        if Q[b]:
            b ^= a
        basis.append((a, b))
        remaining = [v for v in remaining if W(v, a) == 0 and W(v, b) == 0]

    def to_model(x):
        e = d = 0
        for i, (a, b) in enumerate(basis):
            e |= W(x, b) << i
            d |= W(a, x) << i
        return theta.make(e, d)

    labels = tuple(to_model(t) for t in thetas)
    classes = tuple(to_model(vec[m]) for m in masks)
    for k, m in enumerate(masks):
        if {labels[p] for p in members_of(m)} != set(theta.tuple12(classes[k]).members):
            raise InconsistentStructure("labeling does not map tuples onto the model")
    if any(theta.parity(l) != 1 for l in labels):
        raise InconsistentStructure("labels must be odd")
    for i in range(63):
        for j in range(63):
            if i != j and pm[i, j] != theta.weil(classes[i], classes[j]):
                raise InconsistentStructure("pairing matrix disagrees with the model")
    return LevelStructure(tuple(tuples), pm, labels, classes)


# ---------------------------------------------------------------------------
# pairing
# ---------------------------------------------------------------------------

def pair_statistic(s: LevelStructure, k: int, a: int, b: int) -> int:
    """Syzygetic partners of tuple k whose tuples contain both a and b."""
    bits = (1 << a) | (1 << b)
    return sum(1 for j, t in enumerate(s.tuples)
               if j != k and s.pairing_matrix[k, j] == 0 and t.mask & bits == bits)


def combinatorial_pairs(s: LevelStructure, k: int) -> tuple:
    t = s.tuples[k]
    thr = theta.pair_threshold()
    pairs = []
    for i, a in enumerate(t.members):
        for b in t.members[i + 1:]:
            if pair_statistic(s, k, a, b) >= thr:
                pairs.append((a, b))
    used = [p for pr in pairs for p in pr]
    if len(pairs) != 6 or len(set(used)) != 12:
        raise PairingAmbiguous(f"tuple {t.members}: statistic gives {len(pairs)} pairs")
    return tuple(pairs)


def extract_pairing(t: DetectedTuple | int, s: LevelStructure, points=None,
                    geometric: bool = True) -> tuple:
    """The six pairs of a tuple, cross-checked against the labels and the cubic."""
    k = t if isinstance(t, int) else next(i for i, u in enumerate(s.tuples) if u.mask == t.mask)
    pairs = combinatorial_pairs(s, k)
    gamma = s.classes[k]
    for a, b in pairs:
        if s.labels[a] ^ s.labels[b] != gamma:
            raise InconsistentStructure("statistic pairing disagrees with the labeling")
    if geometric and points is not None and s.tuples[k].cubic.smooth:
        P = np.asarray(points, dtype=complex)
        beta_of_pairs(s.tuples[k].cubic, [(P[a], P[b]) for a, b in pairs])
    return pairs


def with_pairs(s: LevelStructure, points=None, geometric: bool = True) -> LevelStructure:
    """Copy of the structure with the pairing attached to every tuple."""
    tuples = []
    for k, t in enumerate(s.tuples):
        pairs = extract_pairing(k, s, points, geometric)
        tuples.append(DetectedTuple(t.members, t.cubic, t.residual, t.margin, pairs))
    return LevelStructure(tuple(tuples), s.pairing_matrix, s.labels, s.classes, s.info)


def designated_tuple(s: LevelStructure) -> int:
    """Index of the first tuple (by member indices) whose cubic is smooth."""
    for k, t in enumerate(s.tuples):
        if t.cubic.smooth:
            return k
    raise DegenerateConfiguration("no tuple has a smooth cubic")
