"""Command-line interface: ``nashkit {matrix,verify,nash,milnor,contact,lemmas}``.

Exit codes: 0 ok, 1 refuted, 2 bad input, 3 resource cap, 4 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from .errors import HypothesisViolation, LabelError, ParseError, PreconditionError, ResourceCapExceeded
from .gbasis import DEFAULT_DEGREE_CAP, DEFAULT_SPAIR_CAP, Ideal, order_from_name, subset
from .jac2 import build_jac2, symbolic_jac2
from .lemmas import run_suite
from .nash import ContactDatum, contact_invariance_report, milnor_number, nash_algebra2
from .polyring import Partials, PolyMap, format_poly, parse, parse_map, random_poly
from .qforms import verify_decomposition

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_RESOURCES, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4

DEFAULT_MAX_DEGREE = 4
DEFAULT_MAX_TERMS = 4


class UsageError(Exception):
    pass


def corpus(n: int, size: int, seed: int, max_degree: int, max_terms: int = DEFAULT_MAX_TERMS) -> list:
    """Seeded random germs; item ``t`` uses seed ``seed + t``."""
    return [random_poly(n, max_degree, max_terms, seed + t, germ=True) for t in range(size)]


def _poly(args):
    if args.poly is None:
        raise UsageError("a polynomial argument is required")
    return parse(args.poly, args.n)


def _caps(args) -> dict:
    return {"spair_cap": args.spair_cap, "degree_cap": args.degree_cap}


def cmd_matrix(args) -> tuple[int, object, str]:
    if args.poly in (None, "generic"):
        if args.n is None:
            raise UsageError("the generic matrix needs -n")
        sym = symbolic_jac2(args.n)
        text = sym.pop("text")
        return EXIT_OK, sym, text
    M = build_jac2(_poly(args))
    return EXIT_OK, M.to_json(), M.render()


def cmd_verify(args) -> tuple[int, object, str]:
    order = order_from_name(args.order)
    if args.corpus:
        if args.n is None or args.n < 2:
            raise UsageError("verify needs -n >= 2")
        items = corpus(args.n, args.corpus, args.seed, args.max_degree)
    else:
        F = _poly(args)
        if F.n < 2:
            raise UsageError("verify needs n >= 2")
        items = [F]
    results = []
    for F in items:
        rep = verify_decomposition(F, order, workers=args.workers, **_caps(args))
        j1n = Ideal(F.n, Partials(F).gradient()) ** F.n
        contained = subset(Ideal(F.n, [m.det for m in rep.minors]), j1n, order, **_caps(args))
        results.append((F, rep, contained))
    if not args.corpus:
        F, rep, contained = results[0]
        out = rep.to_json()
        out["j2_in_j1_power_n"] = contained
        text = "\n".join(
            [f"F = {format_poly(F)}", f"verdict: {str(rep.verdict).lower()}"]
            + [f"  {format_poly(g)}" for g in rep.j2_gb]
        )
        ok = rep.verdict and contained
    else:
        rows = [
            {"F": format_poly(F), "verdict": rep.verdict, "j2_in_j1_power_n": c} for F, rep, c in results
        ]
        passed = sum(r["verdict"] and r["j2_in_j1_power_n"] for r in rows)
        out = {"n": args.n, "seed": args.seed, "corpus": args.corpus, "passed": passed, "results": rows}
        text = "\n".join(
            [f"{'true ' if r['verdict'] else 'false'}  {r['F']}" for r in rows]
            + [f"{passed}/{len(rows)} true"]
        )
        ok = passed == len(rows)
    return (EXIT_OK if ok else EXIT_REFUTED), out, text


def cmd_nash(args) -> tuple[int, object, str]:
    rep = nash_algebra2(_poly(args), order_from_name(args.order), workers=args.workers, **_caps(args))
    out = rep.to_json()
    text = (
        f"dim: {out['dim']}  N: {rep.N}  certified: {str(rep.certified).lower()}\n"
        f"hilbert: {rep.hilbert}\nstaircase: {' '.join(out['staircase'])}\nmilnor: {out['milnor']}"
    )
    return (EXIT_OK if rep.certified else EXIT_INCONCLUSIVE), out, text


def cmd_milnor(args) -> tuple[int, object, str]:
    mu = milnor_number(_poly(args), order_from_name(args.order), **_caps(args))
    value = "infinite" if mu == math.inf else mu
    return EXIT_OK, {"milnor": value}, f"milnor: {value}"


def cmd_contact(args) -> tuple[int, object, str]:
    F = _poly(args)
    u = parse(args.u, F.n) if args.u else parse("1", F.n)
    phi = parse_map(args.phi, F.n) if args.phi else PolyMap.identity(F.n)
    datum = ContactDatum(u, phi)
    rep = contact_invariance_report(F, datum, order_from_name(args.order), **_caps(args))
    out = rep.to_json()
    text = "\n".join(
        [
            f"F: {out['f']['F']}  dim {out['f']['dim']}  hilbert {out['f']['hilbert']}",
            f"G: {out['g']['F']}  dim {out['g']['dim']}  hilbert {out['g']['hilbert']}",
            f"verdict: {rep.verdict}",
        ]
    )
    code = {"true": EXIT_OK, "false": EXIT_REFUTED}.get(rep.verdict, EXIT_INCONCLUSIVE)
    return code, out, text


def cmd_lemmas(args) -> tuple[int, object, str]:
    res = run_suite(seed=args.seed, n_min=args.n_min, n_max=args.n_max, per_n=args.per_n, max_degree=args.max_degree)
    out = res.to_json()
    lines = [f"{lid:16s} checked {c['checked']:4d}  nontrivial {c['nontrivial']:4d}  failed {c['failed']}" for lid, c in out["counts"].items()]
    adj = out["ijkl_ii"]
    lines.append(
        f"ijkl_ii factor: Q_ij;kl held {adj['stated_factor_Q_ij_kl_holds']}/{adj['instances']}, "
        f"Q_ij;ik held {adj['alternate_factor_Q_ij_ik_holds']}/{adj['instances']}"
    )
    return (EXIT_OK if res.failures == [] else EXIT_REFUTED), out, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", "--n", type=int, default=None, help="number of variables")
    common.add_argument("--order", choices=("grevlex", "grlex", "lex"), default="grevlex")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--corpus", type=int, default=0, help="size of a seeded random corpus")
    common.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    common.add_argument("--spair-cap", type=int, default=DEFAULT_SPAIR_CAP)
    common.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    common.add_argument("--workers", type=int, default=None, help="minor workers (default: NASHKIT_THREADS or 1)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--out", metavar="PATH", help="write output to PATH")

    parser = argparse.ArgumentParser(prog="nashkit", description="Second Jacobian ideals and Nash local algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("matrix", "print the second Jacobian matrix (or 'generic' for symbols)"),
        ("verify", "check the decomposition of the second Jacobian ideal"),
        ("nash", "second Nash local algebra of a germ"),
        ("milnor", "Milnor number of a germ"),
        ("contact", "compare the algebras of F and u*(F o phi)"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("poly", nargs="?", default=None)
        if name == "contact":
            p.add_argument("--u", default=None, help="unit, default 1")
            p.add_argument("--phi", default=None, help="semicolon-separated components, default identity")
    p = sub.add_parser("lemmas", parents=[common], help="run the minor identity suite")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--per-n", type=int, default=50)
    return parser


COMMANDS = {
    "matrix": cmd_matrix,
    "verify": cmd_verify,
    "nash": cmd_nash,
    "milnor": cmd_milnor,
    "contact": cmd_contact,
    "lemmas": cmd_lemmas,
}


def _emit(payload: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, out, text = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ParseError, LabelError, HypothesisViolation, PreconditionError, ValueError) as exc:
        print(f"nashkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceCapExceeded as exc:
        print(f"nashkit: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCES
    payload = json.dumps(out, indent=2) + "\n" if args.json else text + "\n"
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
