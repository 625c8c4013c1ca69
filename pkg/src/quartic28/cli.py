"""Command-line front end.

Exit codes: 0 ok, 1 malformed input, 2 singular quartic, 3 wrong bitangent or
tuple count, 4 degenerate or unrecoverable configuration, 5 selftest failure,
6 false marked pair in complete9.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

import numpy as np

from . import theta
from .errors import (
    CountMismatch,
    DegenerateConfiguration,
    InconsistentPairing,
    NotSmooth,
    Quartic28Error,
    TupleCountMismatch,
)
from .formats import (
    SchemaError,
    encode_vector,
    lines_from_json,
    lines_to_json,
    quartic_from_json,
    quartic_to_json,
    read_json,
    write_json,
)
from .numerics import DEFAULT, HomPoly, Precision
from .reconstruct import complete_from_nine, reconstruct
from .solver import bitangents, is_smooth

log = logging.getLogger("quartic28")

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_NOT_SMOOTH = 2
EXIT_COUNT = 3
EXIT_DEGENERATE = 4
EXIT_SELFTEST = 5
EXIT_FALSE_PAIR = 6

RECON_TOL = 1e-6


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

def fermat() -> HomPoly:
    return HomPoly.from_terms(4, {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})


def klein() -> HomPoly:
    return HomPoly.from_terms(4, {(3, 1, 0): 1, (0, 3, 1): 1, (1, 0, 3): 1})


def random_quartic(seed: int, prec: Precision = DEFAULT) -> HomPoly:
    """Seeded complex Gaussian quartic, resampled until smooth."""
    rng = np.random.default_rng(seed)
    while True:
        q = HomPoly(4, rng.normal(size=15) + 1j * rng.normal(size=15))
        if is_smooth(q, prec):
            return q


def generate(family: str, seed: int = 0, perturb: float = 0.0, prec: Precision = DEFAULT) -> HomPoly:
    if family == "fermat":
        q = fermat()
    elif family == "klein":
        q = klein()
    elif family == "random":
        q = random_quartic(seed, prec)
    else:
        raise SchemaError(f"unknown family {family!r}")
    if perturb:
        rng = np.random.default_rng([seed, 1])
        while True:
            noise = rng.normal(size=15) + 1j * rng.normal(size=15)
            cand = HomPoly(4, q.coeffs + perturb * noise)
            if is_smooth(cand, prec):
                q = cand
                break
    return q


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _precision(args) -> Precision:
    mode = getattr(args, "precision", "standard") or "standard"
    return Precision(mode, args.tol_geo, args.tol_dup, args.tol_sq)


def bitangent_report(bs) -> dict:
    return lines_to_json(
        [b.line.coords for b in bs],
        {
            "certificates": [b.certificate for b in bs],
            "contacts": [[encode_vector(c.coords) for c in b.contacts] for b in bs],
            "mode": bs.provenance.get("mode"),
        },
    )


def cmd_bitangents(args) -> int:
    prec = _precision(args)
    q = quartic_from_json(read_json(args.input))
    bs = bitangents(q, prec)
    write_json(bitangent_report(bs), args.output)
    return EXIT_OK


def reconstruction_report(rep) -> dict:
    s = rep.structure
    cfg = rep.configuration
    out = {
        "refined_quartic": quartic_to_json(rep.refined_quartic),
        "seed_quartic": quartic_to_json(rep.seed_quartic),
        "aronhold": list(rep.aronhold),
        "residuals": [float(r) for r in rep.residuals],
        "refinement_history": rep.history,
        "structure": {
            "labels": [theta.label_str(l) for l in s.labels],
            "tuples": [
                {
                    "members": list(t.members),
                    "class": theta.label_str(s.classes[k]),
                    "pairs": [list(p) for p in t.pairs],
                    "cubic": t.cubic.classification,
                    "residual": t.residual,
                }
                for k, t in enumerate(s.tuples)
            ],
        },
        "configuration": {
            "tuple": cfg.tuple_index,
            "cubic": encode_vector(cfg.cubic.poly.coeffs),
            "beta": encode_vector(cfg.beta),
            "image_cubic": encode_vector(cfg.image.poly.coeffs),
            "image_residual": cfg.image_residual,
            "conic": encode_vector(cfg.conic.coeffs),
            "conic_residual": cfg.conic_residual,
            "conic_smoothness": cfg.conic_smoothness,
        },
    }
    if rep.comparison is not None:
        out["comparison"] = rep.comparison
    return out


def _reconstruction_ok(rep, prec: Precision) -> bool:
    ok = bool(np.all(rep.residuals < prec.tol_sq))
    if rep.comparison is not None:
        ok = ok and rep.comparison < RECON_TOL
    return ok


def cmd_reconstruct(args) -> int:
    prec = _precision(args)
    lines = lines_from_json(read_json(args.input), 28, prec.tol_dup)
    ref = quartic_from_json(read_json(args.reference)) if args.reference else None
    rep = reconstruct(lines, prec, reference=ref, threads=args.threads)
    write_json(reconstruction_report(rep), args.output)
    return EXIT_OK if _reconstruction_ok(rep, prec) else EXIT_DEGENERATE


def cmd_selftest(args) -> int:
    res = theta.selftest()
    for chk in res["checks"]:
        print(f"{'ok  ' if chk['ok'] else 'FAIL'} {chk['name']}: {chk['detail']}")
    for k, v in res["constants"].items():
        print(f"{k} = {v}")
    print(f"selftest {'passed' if res['ok'] else 'FAILED'} in {res['seconds']:.3f} s")
    return EXIT_OK if res["ok"] else EXIT_SELFTEST


def cmd_complete9(args) -> int:
    prec = _precision(args)
    obj = read_json(args.input)
    nine = lines_from_json(obj, 9, prec.tol_dup)
    pair = obj.get("marked_pair") if isinstance(obj, dict) else None
    if (not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(i, int) for i in pair)
            or not all(0 <= i < 9 for i in pair) or pair[0] == pair[1]):
        raise SchemaError("marked_pair must be two distinct indices in 0..8")
    comp = complete_from_nine(nine, tuple(pair), prec)
    allpts = list(nine) + list(comp.points)
    write_json(lines_to_json(allpts, {
        "recovered": [encode_vector(p) for p in comp.points],
        "pairs": [list(p) for p in comp.pairs],
        "beta": encode_vector(comp.beta),
    }), args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    q = generate(args.family, args.seed, args.perturb, _precision(args))
    write_json(quartic_to_json(q), args.output)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    prec = _precision(args)
    t0 = time.perf_counter()
    q = generate(args.family, args.seed, args.perturb, prec)
    bs = bitangents(q, prec)
    t1 = time.perf_counter()
    rep = reconstruct(bs.array(), prec, reference=q, threads=args.threads)
    t2 = time.perf_counter()
    write_json({
        "family": args.family,
        "seed": args.seed,
        "perturb": args.perturb,
        "quartic": quartic_to_json(q),
        "max_certificate": max(b.certificate for b in bs),
        "comparison": rep.comparison,
        "max_residual": float(np.max(rep.residuals)),
        "degenerate_tuples": sum(1 for t in rep.structure.tuples if not t.cubic.smooth),
        "seconds": {"bitangents": t1 - t0, "reconstruct": t2 - t1},
    }, args.output)
    return EXIT_OK if _reconstruction_ok(rep, prec) else EXIT_DEGENERATE


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quartic28", description="Bitangents of plane quartics and reconstruction from them.")
    p.add_argument("--tol-geo", type=float, default=DEFAULT.tol_geo, help="incidence and fit tolerance")
    p.add_argument("--tol-sq", type=float, default=DEFAULT.tol_sq, help="square-certificate tolerance")
    p.add_argument("--tol-dup", type=float, default=DEFAULT.tol_dup, help="distinctness tolerance")
    p.add_argument("--threads", type=int, default=1, help="worker threads for tuple detection")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bitangents", help="compute the 28 bitangents of a quartic file")
    b.add_argument("input")
    b.add_argument("-o", "--output")
    b.add_argument("--precision", choices=("standard", "extended"), default="standard")
    b.set_defaults(func=cmd_bitangents)

    r = sub.add_parser("reconstruct", help="reconstruct a quartic from a 28-line file")
    r.add_argument("input")
    r.add_argument("-o", "--output")
    r.add_argument("--reference", help="quartic file to compare against")
    r.add_argument("--precision", choices=("standard", "extended"), default="standard")
    r.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("selftest", help="run the theta-characteristic oracle suite")
    s.set_defaults(func=cmd_selftest)

    c = sub.add_parser("complete9", help="complete nine tuple members and a marked pair to twelve")
    c.add_argument("input")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_complete9)

    for name, func, helptext in (("gen", cmd_gen, "emit a corpus quartic"),
                                 ("roundtrip", cmd_roundtrip, "gen, bitangents, reconstruct and compare")):
        g = sub.add_parser(name, help=helptext)
        g.add_argument("--family", choices=("fermat", "klein", "random"), default="random")
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("--perturb", type=float, default=0.0)
        g.add_argument("-o", "--output")
        g.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except NotSmooth as exc:
        print(f"error: quartic is not smooth: {exc}", file=sys.stderr)
        return EXIT_NOT_SMOOTH
    except (CountMismatch, TupleCountMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COUNT
    except InconsistentPairing as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FALSE_PAIR if args.command == "complete9" else EXIT_DEGENERATE
    except (DegenerateConfiguration, Quartic28Error) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
