"""Shared test corpus with cached pipeline stages."""

from functools import lru_cache

import numpy as np

from quartic28.cli import fermat, generate, klein
from quartic28.solver import bitangents, syzygetic_test
from quartic28.structure import build_structure, detect_tuples, with_pairs

RANDOM_SEEDS = tuple(range(20))
NAMES = ("fermat", "klein") + tuple(f"random{s}" for s in RANDOM_SEEDS)


@lru_cache(maxsize=None)
def quartic(name: str):
    if name == "fermat":
        return fermat()
    if name == "klein":
        return klein()
    return generate("random", int(name.removeprefix("random")))


@lru_cache(maxsize=None)
def bitangent_set(name: str):
    return bitangents(quartic(name))


def lines(name: str) -> np.ndarray:
    return bitangent_set(name).array()


@lru_cache(maxsize=None)
def tuples(name: str):
    return detect_tuples(lines(name))


@lru_cache(maxsize=None)
def structure(name: str):
    return with_pairs(build_structure(tuples(name)), lines(name))


def forward_partners(name: str, a: int, b: int) -> set:
    """Members of the tuple of the pair {a, b}, from contact points alone.

    Four bitangents whose eight contact points lie on a conic have labels
    summing to zero, so {c, d} shares the class of {a, b} exactly then.
    """
    q, bs = quartic(name), bitangent_set(name)
    out = {a, b}
    rest = [i for i in range(28) if i not in (a, b)]
    for i, c in enumerate(rest):
        for d in rest[i + 1:]:
            if syzygetic_test(q, [bs[a], bs[b], bs[c], bs[d]]):
                out |= {c, d}
    return out
