"""Command line interface.

Every subcommand prints one JSON document on stdout and a short summary on
stderr.  Exit codes: 0 for any verdict, 2 for usage or input errors, 3 when
a bounded search runs out of room.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import pool as pool_mod
from .discform import HeegnerLabel, discriminant_form, milgram_signature, pi_L, splits_2U_by_length
from .errors import CapExceeded, ConfigError, ConventionError, FormError, LatticeError
from .lattice import definiteness, load_lattice, root_sublattice, roots
from .pipeline import Config, bound_from_config, classify, iter_candidates
from .weilrep import borcherds_obstruction
from .pipeline import reduce_for_obstruction

EXIT_OK, EXIT_USAGE, EXIT_CAP = 0, 2, 3      # 1: internal inconsistency


def _emit(obj, summary: str) -> None:
    json.dump(obj, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _config(path: str | None) -> Config:
    return Config.from_json(path) if path else Config()


def cmd_discform(args) -> int:
    L = load_lattice(args.lattice)
    A = discriminant_form(L)
    out = A.to_json()
    out.update(order=A.order, invariant_factors=list(A.invariant_factors),
               signature=list(L.signature), milgram_signature=milgram_signature(A))
    _emit(out, f"|A| = {A.order}, invariant factors {list(A.invariant_factors)}")
    return EXIT_OK


def cmd_roots(args) -> int:
    L = load_lattice(args.lattice)
    if definiteness(L) != -1:
        raise LatticeError("definite lattice required (negative definite)")
    rts = roots(L)
    rd = root_sublattice(L)
    _emit({"count": 2 * len(rts), "roots": [list(r) for r in rts], "components": rd.labels},
          f"{2 * len(rts)} roots, type {'+'.join(rd.labels) or 'none'}")
    return EXIT_OK


def cmd_heegner(args) -> int:
    L = load_lattice(args.lattice)
    A = discriminant_form(L)
    mus = pi_L(A)
    n = L.signature[1]
    comps = [{"label": "H0", "index": None}]
    comps += [{"label": str(HeegnerLabel("Hmu", mu)), "index": i, "mu": list(mu)} for i, mu in enumerate(mus)]
    _emit({"pi_L": [list(m) for m in mus], "components": comps,
           "length_condition": splits_2U_by_length(A, n)},
          f"{len(mus)} components H_mu besides H0")
    return EXIT_OK


def cmd_an(args) -> int:
    _emit({"n": args.n, "a_n": pool_mod.compute_a_n(args.n)}, f"a_{args.n} computed")
    return EXIT_OK


def cmd_bn(args) -> int:
    _emit({"n": args.n, "b_n": pool_mod.compute_b_n(args.n)}, f"b_{args.n} computed")
    return EXIT_OK


def cmd_pool(args) -> int:
    a, b = pool_mod.compute_a_n(args.n), pool_mod.compute_b_n(args.n)
    members = pool_mod.build_pool(args.n, a, b)
    _emit({"n": args.n, "a_n": a, "b_n": b, "members": [m.to_json() for m in members]},
          f"pool of {len(members)} lattices")
    return EXIT_OK


def _parse_target(text: str, L) -> HeegnerLabel:
    if text == "H0":
        return HeegnerLabel("H0")
    if text.startswith("mu:"):
        mus = pi_L(discriminant_form(L))
        idx = int(text[3:])
        if not 0 <= idx < len(mus):
            raise LatticeError(f"mu index {idx} out of range ({len(mus)} components)")
        return HeegnerLabel("Hmu", mus[idx])
    raise LatticeError(f"target must be H0 or mu:<index>, got {text!r}")


def cmd_curve(args) -> int:
    L = load_lattice(args.lattice)
    target = _parse_target(args.target, L)
    cert = pool_mod.construct_generic_K(L, target)
    checks = pool_mod.verify_certificate(cert, L)
    _emit({"certificate": cert.to_json(), "checks": checks},
          f"case {cert.case_tag}, K = {cert.pool_member.key}, checks {'pass' if all(checks.values()) else 'FAIL'}")
    return EXIT_OK


def cmd_obstruct(args) -> int:
    L = load_lattice(args.lattice)
    reduced, chain = reduce_for_obstruction(L)
    verdict = borcherds_obstruction(reduced, True)
    out = verdict.to_json()
    out["reduction_chain"] = [s.to_json() for s in chain]
    _emit(out, verdict.verdict)
    return EXIT_OK


def cmd_classify(args) -> int:
    L = load_lattice(args.lattice)
    verdict = classify(L, _config(args.config))
    _emit(verdict.to_json(), f"{verdict.status}: {verdict.summary}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    cfg = _config(args.config)
    if args.bound is not None:
        B = Fraction(args.bound)
    elif args.config:
        B = bound_from_config(args.n, cfg)
    else:
        raise ConfigError("give --bound or a --config with slope constants and f values")
    items = []
    for i, cand in enumerate(iter_candidates(args.n, B, cfg, realize=not args.no_realize)):
        if i < args.offset:
            continue
        if len(items) >= args.limit:
            break
        items.append(cand.to_json())
    _emit({"n": args.n, "B": str(B), "offset": args.offset, "candidates": items},
          f"{len(items)} candidate forms")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all()
    _emit({"results": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]},
          "\n".join(f"{'PASS' if ok else 'FAIL'} {n}: {d}" for n, ok, d in results))
    return EXIT_OK if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tworefl", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name, fn, helptext in [("discform", cmd_discform, "discriminant form of a lattice"),
                               ("roots", cmd_roots, "roots of a negative definite lattice"),
                               ("heegner", cmd_heegner, "pi_L and Heegner components"),
                               ("obstruct", cmd_obstruct, "weight/invariance obstruction for n >= 26")]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("lattice", help="expression like 2U+E8+A1, inline JSON, or a .json file")
        p.set_defaults(func=fn)
    for name, fn in [("an", cmd_an), ("bn", cmd_bn), ("pool", cmd_pool)]:
        p = sub.add_parser(name, help=f"{name} for a given n")
        p.add_argument("n", type=int)
        p.set_defaults(func=fn)

    p = sub.add_parser("curve", help="generic sublattice K from the pool")
    p.add_argument("lattice")
    p.add_argument("--target", default="H0", help="H0 or mu:<index into pi_L>")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("classify", help="classification verdict")
    p.add_argument("lattice")
    p.add_argument("--config")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", help="candidate discriminant forms below a bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", help="B; forms with |A| <= B^2 are listed (default: from --config)")
    p.add_argument("--config")
    p.add_argument("--limit", type=int, default=100)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--no-realize", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("selftest", help="run the built-in oracle checks")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (LatticeError, FormError, ConfigError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConventionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
