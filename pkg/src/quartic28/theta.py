"""Level-2 combinatorics over F_2^6 by exhaustive enumeration.

A theta characteristic / 2-torsion class is packed in a 6-bit integer
``(eps << 3) | del``.  Parity is ``eps . del mod 2`` and the Weil pairing is
``u.eps . v.del + u.del . v.eps mod 2``.  Everything here is exact and is the
oracle every numerical module checks itself against.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations


def eps(x: int) -> int:
    return x >> 3


def dlt(x: int) -> int:
    return x & 7


def make(e: int, d: int) -> int:
    return ((e & 7) << 3) | (d & 7)


def _popparity(x: int) -> int:
    return bin(x).count("1") & 1


def parity(x: int) -> int:
    return _popparity(eps(x) & dlt(x))


def weil(u: int, v: int) -> int:
    return _popparity((eps(u) & dlt(v)) ^ (dlt(u) & eps(v)))


def label_str(x: int) -> str:
    return f"{eps(x):03b}|{dlt(x):03b}"


ODD = tuple(x for x in range(64) if parity(x) == 1)
EVEN = tuple(x for x in range(64) if parity(x) == 0)
TWO_TORSION = tuple(range(1, 64))


@dataclass(frozen=True)
class Tuple12:
    gamma: int
    members: tuple
    pairs: tuple


@lru_cache(maxsize=None)
def tuple12(gamma: int) -> Tuple12:
    if not 0 < gamma < 64:
        raise ValueError("gamma must be a nonzero 6-bit vector")
    by_sum = tuple(t for t in ODD if parity(t ^ gamma) == 1)
    by_pairing = tuple(t for t in ODD if weil(t, gamma) == parity(gamma))
    if by_sum != by_pairing:
        raise AssertionError(f"characterizations of theta({gamma}) disagree")
    pairs = tuple(sorted((t, t ^ gamma) for t in by_sum if t < t ^ gamma))
    return Tuple12(gamma, by_sum, pairs)


def intersection_size(g1: int, g2: int) -> int:
    if g1 == g2 or not g1 or not g2:
        raise ValueError("need two distinct nonzero classes")
    return len(set(tuple12(g1).members) & set(tuple12(g2).members))


@lru_cache(maxsize=None)
def intersection_profile() -> dict:
    """Intersection size as a function of the Weil pairing (checked exhaustively)."""
    seen: dict = {}
    for g1, g2 in combinations(TWO_TORSION, 2):
        seen.setdefault(weil(g1, g2), set()).add(intersection_size(g1, g2))
    if any(len(v) != 1 for v in seen.values()):
        raise AssertionError(f"intersection size not a function of the pairing: {seen}")
    return {k: next(iter(v)) for k, v in seen.items()}


def syzygetic_size() -> int:
    return intersection_profile()[0]


def azygetic_size() -> int:
    return intersection_profile()[1]


def orthogonal(gamma: int) -> tuple:
    return tuple(g for g in TWO_TORSION if weil(g, gamma) == 0)


def orbit_sizes(alpha: int) -> tuple:
    """Sizes of {0}, (alpha^perp/alpha) - 0 and the rest inside Jac[2]/alpha.

    Also checks that {q_i, q_j} -> q_i - q_j (q_i the six pairs of theta(alpha))
    is a bijection onto the middle orbit.
    """
    cls = {min(x, x ^ alpha) for x in range(64)}
    zero = {0}
    middle = {c for c in cls if c != 0 and weil(c, alpha) == 0}
    rest = cls - zero - middle
    qs = tuple12(alpha).pairs
    images = {min(a ^ b, a ^ b ^ alpha) for (a, _), (b, _) in combinations(qs, 2)}
    if images != middle or len(images) != len(list(combinations(qs, 2))):
        raise AssertionError(f"pair-difference map is not a bijection for alpha={alpha}")
    return (len(zero), len(middle), len(rest))


def pairing_overlap_law(alpha: int) -> str:
    """Which index-pair relation the pulled-back Weil pairing detects.

    For pairs {i,j} != {k,l} of the six classes q_1..q_6 of theta(alpha),
    compares <q_i - q_j, q_k - q_l> with whether {i,j} and {k,l} meet.
    Returns "overlap" if the pairing is 1 exactly on meeting index pairs,
    "disjoint" if exactly on disjoint ones.
    """
    qs = [a for a, _ in tuple12(alpha).pairs]
    overlap_ok = disjoint_ok = True
    idx_pairs = list(combinations(range(6), 2))
    for (i, j), (k, l) in combinations(idx_pairs, 2):
        w = weil(qs[i] ^ qs[j], qs[k] ^ qs[l])
        meet = len({i, j} & {k, l}) > 0
        overlap_ok &= w == int(meet)
        disjoint_ok &= w == int(not meet)
    if overlap_ok:
        return "overlap"
    if disjoint_ok:
        return "disjoint"
    raise AssertionError("pairing matches neither orientation")


def pair_statistic(t: Tuple12, a: int, b: int) -> int:
    """Number of gamma' in gamma^perp - {0, gamma} whose tuple contains a and b."""
    if a == b or a not in t.members or b not in t.members:
        raise ValueError("a, b must be distinct members of the tuple")
    g = t.gamma
    return sum(
        1 for g2 in orthogonal(g) if g2 != g
        and a in tuple12(g2).members and b in tuple12(g2).members)


@lru_cache(maxsize=None)
def pair_statistic_values() -> tuple:
    """(v_pair, v_nonpair), each constant over all tuples."""
    vp, vn = set(), set()
    for g in TWO_TORSION:
        t = tuple12(g)
        for a, b in combinations(t.members, 2):
            (vp if a ^ b == g else vn).add(pair_statistic(t, a, b))
    if len(vp) != 1 or len(vn) != 1:
        raise AssertionError(f"pair statistic not constant: {vp} {vn}")
    return next(iter(vp)), next(iter(vn))


def pair_threshold() -> float:
    """Midpoint separating paired from unpaired members."""
    vp, vn = pair_statistic_values()
    return (vp + vn) / 2


def is_azygetic_triple(a: int, b: int, c: int) -> bool:
    return parity(a ^ b ^ c) == 0


def is_aronhold(labels) -> bool:
    labels = list(labels)
    return len(labels) == 7 and all(is_azygetic_triple(*tr) for tr in combinations(labels, 3))


@lru_cache(maxsize=None)
def aronhold_sets() -> tuple:
    """All 7-sets of odd labels whose every triple is azygetic (backtracking on bitmasks)."""
    n = len(ODD)
    azy = [[0] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        m = 0
        for k in range(n):
            if k != i and k != j and is_azygetic_triple(ODD[i], ODD[j], ODD[k]):
                m |= 1 << k
        azy[i][j] = azy[j][i] = m
    found = []

    def extend(chosen, cand):
        if len(chosen) == 7:
            found.append(frozenset(ODD[i] for i in chosen))
            return
        while cand:
            k = cand.bit_length() - 1
            cand &= ~(1 << k)
            nxt = cand
            for i in chosen:
                nxt &= azy[i][k]
            if bin(nxt).count("1") >= 6 - len(chosen):
                extend(chosen + [k], nxt)

    full = (1 << n) - 1
    for i in range(n):
        lower = full & ((1 << i) - 1)
        extend([i], lower)
    return tuple(sorted(found, key=lambda s: sorted(s)))


def sp6_order_by_counting() -> int:
    """Count symplectic bases (e1, f1, e2, f2, e3, f3) of F_2^6 stage by stage."""
    total = 1
    fixed: list = []
    for _ in range(3):
        perp = [v for v in TWO_TORSION if all(weil(v, w) == 0 for w in fixed)]
        e = perp[0]
        total *= len(perp)
        f_choices = [v for v in perp if weil(v, e) == 1]
        total *= len(f_choices)
        fixed += [e, f_choices[0]]
    return total


def sp6_order_formula() -> int:
    return 2 ** 9 * (2 ** 2 - 1) * (2 ** 4 - 1) * (2 ** 6 - 1)


def model_constants() -> dict:
    order = sp6_order_by_counting()
    if order != sp6_order_formula() or order != 63 * 30 * 12 * 8 ** 2:
        raise AssertionError("Sp6(2) order cross-check failed")
    return {
        "odd": len(ODD),
        "even": len(EVEN),
        "two_torsion": len(TWO_TORSION),
        "tuple_size": len(tuple12(1).members),
        "sp6_order": order,
        "aronhold": len(aronhold_sets()),
        "syz_intersection": syzygetic_size(),
        "azy_intersection": azygetic_size(),
    }


# ---------------------------------------------------------------------------
# symmetries of the model
# ---------------------------------------------------------------------------

def transvection(v: int):
    return lambda x: x ^ v if weil(x, v) else x


def random_symmetry(rng: random.Random, steps: int = 12):
    """A random affine map x -> A x + c with A symplectic and c chosen so that
    parity is preserved; returns (label map, class map) as dicts."""
    table = list(range(64))
    for _ in range(steps):
        t = transvection(rng.randrange(1, 64))
        table = [t(x) for x in table]
    for c in range(64):
        if all(parity(table[x] ^ c) == parity(x) for x in range(64)):
            labels = {x: table[x] ^ c for x in range(64)}
            classes = {x: table[x] for x in range(64)}
            return labels, classes
    raise AssertionError("no parity-preserving translate")


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------

def selftest() -> dict:
    start = time.perf_counter()
    checks = []

    def check(name, ok, detail=""):
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    check("odd/even labels", (len(ODD), len(EVEN)) == (28, 36), f"{len(ODD)} odd, {len(EVEN)} even")
    tuples = [tuple12(g) for g in TWO_TORSION]
    check("63 twelve-tuples", len(tuples) == 63 and all(len(t.members) == 12 for t in tuples),
          f"{len(tuples)} tuples")
    all_pairs = [p for t in tuples for p in t.pairs]
    check("fiber size 6", (28 * 27 // 2) // 63 == 6 and all(len(t.pairs) == 6 for t in tuples)
          and len(set(all_pairs)) == len(all_pairs) == 378,
          "each odd pair is a pair of exactly one tuple")
    sizes = {orbit_sizes(a) for a in TWO_TORSION}
    check("orbit sizes", sizes == {(1, 15, 16)}, str(sorted(sizes)))
    laws = {pairing_overlap_law(a) for a in TWO_TORSION}
    check("pairing orientation", len(laws) == 1, f"Weil pairing is 1 on {laws.pop()} index pairs")
    prof = intersection_profile()
    check("syzygetic intersection", prof[0] == 4, f"{prof[0]}")
    translate_ok = True
    for g1, g2 in combinations(TWO_TORSION, 2):
        if weil(g1, g2) == 0:
            inter = set(tuple12(g1).members) & set(tuple12(g2).members)
            a = min(inter)
            translate_ok &= inter == {a, a ^ g1, a ^ g2, a ^ g1 ^ g2}
    check("syzygetic intersection is a translate of the isotropic group", translate_ok)
    check("azygetic intersection divisible by 3", prof[1] % 3 == 0, f"{prof[1]}")
    g = 1
    total = sum(intersection_size(g, h) for h in TWO_TORSION if h != g)
    nsyz = sum(1 for h in TWO_TORSION if h != g and weil(g, h) == 0)
    check("double count", total == nsyz * prof[0] + (62 - nsyz) * prof[1] and nsyz == 30,
          f"{total} = {nsyz}*{prof[0]} + {62 - nsyz}*{prof[1]}")
    vp, vn = pair_statistic_values()
    check("pair statistic separates", vp != vn, f"v_pair={vp}, v_nonpair={vn}")
    ar = aronhold_sets()
    check("aronhold sets", len(ar) == 288 and all(is_aronhold(s) for s in ar), f"{len(ar)}")
    consts = model_constants()
    check("sp6 order", consts["sp6_order"] == 1451520, f"{consts['sp6_order']}")
    rows_ok = all(
        sum(1 for h in TWO_TORSION if h != g and weil(g, h) == 0) == 30 for g in TWO_TORSION)
    check("pairing row weights 30/32", rows_ok)
    elapsed = time.perf_counter() - start
    return {
        "constants": consts,
        "pair_statistic": {"v_pair": vp, "v_nonpair": vn},
        "pairing_orientation": next(iter({pairing_overlap_law(a) for a in TWO_TORSION})),
        "checks": checks,
        "ok": all(c["ok"] for c in checks),
        "seconds": elapsed,
    }
