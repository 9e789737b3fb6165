"""Command line entry point: ``factorium <subcommand> ...``.

Exit status: 0 when every check passed, 1 when a semantic check failed,
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import ast
import json
import os
import sys

import numpy as np

from .algebra import AlgebraError, algebra_to_json, dumps_algebra, load_algebra
from .congruence import DEFAULT_MAX_SIZE, CongruenceError, all_congruences
from .factorization import (ZeroOneSpec, central_report, check_bfc, check_determining_property,
                            complementary_pairs, decompose)
from .fol.evaluate import DEFAULT_BUDGET, EvaluationError, compile_formula
from .fol.formula import FormulaError, free_vars, parse_formula, to_text
from .fol.games import DEFAULT_GAME_BUDGET, ef_game
from .fol.builders import sigma_suite
from .gallery import build_D, gallery, parse_gallery_name, product_L
from .malcev import (MalcevError, MalcevFamily, UChain, check_malcev_identities, find_u_chain,
                     validate_u_chain)
from .pipelines import counterexample_pipeline, figure_checks, semilattice_phi
from .terms import TermError


class UsageError(Exception):
    pass


def load_algebra_arg(spec: str):
    """A JSON file path, or a gallery name such as L5, L2vxL5v, D5 (optionally gallery:NAME)."""
    if spec.startswith("gallery:"):
        return parse_gallery_name(spec[len("gallery:"):])
    if os.path.exists(spec):
        return load_algebra(spec)
    try:
        return parse_gallery_name(spec)
    except ValueError:
        raise UsageError(f"no such file or gallery algebra: {spec!r}") from None


def read_text_arg(spec: str) -> str:
    if os.path.exists(spec):
        with open(spec) as fh:
            return fh.read()
    return spec


def parse_element(A, text: str) -> int:
    """An element index, or a label such as (0,1)."""
    text = text.strip()
    if text.lstrip("-").isdigit():
        i = int(text)
        if not 0 <= i < A.size:
            raise UsageError(f"element {i} out of range for size {A.size}")
        return i
    try:
        return A.index(ast.literal_eval(text))
    except (ValueError, SyntaxError, KeyError):
        raise UsageError(f"unknown element {text!r}") from None


def zero_one(args, A) -> ZeroOneSpec:
    zeros = args.zeros.split(",") if args.zeros else ["0"]
    ones = args.ones.split(",") if args.ones else ["1"]
    z = ZeroOneSpec.parse(zeros, ones, A.signature)
    z.check(A)
    return z


def _label(A, i):
    return A.labels[i] if A.labels is not None else i


def emit(report: dict, args):
    if args.json:
        print(json.dumps(report, indent=2, default=_json_default))
        return
    for k, v in report.items():
        if isinstance(v, (list, dict)) and len(json.dumps(v, default=_json_default)) > 100:
            print(f"{k}:")
            items = v.items() if isinstance(v, dict) else enumerate(v)
            for kk, vv in items:
                print(f"  {kk}: {json.dumps(vv, default=_json_default)}")
        else:
            print(f"{k}: {json.dumps(v, default=_json_default) if not isinstance(v, str) else v}")


def _json_default(o):
    if hasattr(o, "to_json"):
        return o.to_json()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    if isinstance(o, np.integer):
        return int(o)
    return str(o)


# ---------------------------------------------------------------------------
# subcommands; each returns (report, ok)

def cmd_gallery(args):
    if args.action != "build":
        raise UsageError("only 'gallery build' is supported")
    algs = [parse_gallery_name(args.name)] if args.name else gallery(args.max_size, args.variety)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for A in algs:
            with open(os.path.join(args.out, f"{A.name}.json"), "w") as fh:
                fh.write(dumps_algebra(A, indent=1) + "\n")
        return {"written": [A.name for A in algs], "directory": args.out}, True
    if len(algs) == 1:
        return algebra_to_json(algs[0]), True
    return {"algebras": [{"name": A.name, "size": A.size} for A in algs]}, True


def cmd_congruences(args):
    A = load_algebra_arg(args.algebra)
    cons = all_congruences(A, args.max_size)
    return {"algebra": A.name, "size": A.size, "count": len(cons),
            "congruences": [c.to_json() for c in cons]}, True


def cmd_decompose(args):
    A = load_algebra_arg(args.algebra)
    reps = decompose(A, args.max_size)
    ok = all(r.verify() for r in reps)
    return {"algebra": A.name, "size": A.size, "indecomposable": not reps and A.size >= 2,
            "decompositions": [{**r.to_json(), "verified": r.verify()} for r in reps]}, ok


def cmd_central(args):
    A = load_algebra_arg(args.algebra)
    z = zero_one(args, A)
    rep = central_report(A, z, args.max_size)
    return {"algebra": A.name,
            "central": [{"value": [_label(A, x) for x in c.value], "witness": c.witness.to_json()}
                        for c in rep.elements],
            "distinct": [[_label(A, x) for x in v] for v in rep.values()],
            "unsolved": [p.to_json() for p in rep.unsolved],
            "complementary_pairs": [[[_label(A, x) for x in e], [_label(A, x) for x in f]]
                                    for e, f in complementary_pairs(A, z, args.max_size)]}, True


def cmd_bfc(args):
    A = load_algebra_arg(args.algebra)
    rep = check_bfc(A, args.max_size)
    return {"algebra": A.name, **rep.to_json()}, rep.holds


def cmd_dfc(args):
    A = load_algebra_arg(args.algebra)
    rep = check_determining_property(A, zero_one(args, A), args.max_size)
    return {"algebra": A.name, **rep.to_json()}, rep.holds and rep.weak_holds


def _kernel_formula(args, A):
    if args.formula:
        return parse_formula(read_text_arg(args.formula), A.signature)
    return semilattice_phi()


def cmd_sigma(args):
    A = load_algebra_arg(args.algebra)
    z = zero_one(args, A)
    phi = _kernel_formula(args, A)
    suite = sigma_suite(A.signature, phi, z)
    order = ["e", "f"] if z.l == 1 else [f"e{i}" for i in range(1, z.l + 1)] + \
        [f"f{i}" for i in range(1, z.l + 1)]
    compiled = [(name, compile_formula(A, f, order, args.budget)) for name, f in suite]
    if args.e is None or args.f is None:
        if z.l != 1:
            raise UsageError("--e and --f are required when l > 1")
        expected = {(e[0], f[0]) for e, f in complementary_pairs(A, z, args.max_size)}
        mismatches = []
        satisfied = []
        for e in range(A.size):
            for f in range(A.size):
                ok = all(c(e, f) for _, c in compiled)
                if ok:
                    satisfied.append([_label(A, e), _label(A, f)])
                if ok != ((e, f) in expected):
                    mismatches.append([_label(A, e), _label(A, f)])
        return {"algebra": A.name, "axioms": [n for n, _ in suite], "satisfying_pairs": satisfied,
                "mismatches_with_complementary_pairs": mismatches}, not mismatches
    es = [parse_element(A, x) for x in args.e.split(";")]
    fs = [parse_element(A, x) for x in args.f.split(";")]
    if len(es) != z.l or len(fs) != z.l:
        raise UsageError(f"--e and --f need {z.l} elements separated by ';'")
    results = {name: c(*es, *fs) for name, c in compiled}
    return {"algebra": A.name, "e": args.e, "f": args.f, "results": results,
            "failed": [n for n, v in results.items() if not v]}, all(results.values())


def cmd_ef(args):
    if args.n is not None and not args.other:
        A, B = build_D(args.n), product_L(2, args.n)
        rounds = args.rounds if args.rounds is not None else args.n - 3
    else:
        if not args.algebra or not args.other:
            raise UsageError("ef-game needs --algebra and --other, or --n")
        A, B = load_algebra_arg(args.algebra), load_algebra_arg(args.other)
        rounds = args.rounds if args.rounds is not None else 1
    res = ef_game(A, B, rounds, args.budget or DEFAULT_GAME_BUDGET)
    rep = {"A": A.name, "B": B.name, **res.to_json()}
    if args.expect:
        return rep, res.winner == args.expect
    return rep, True


def cmd_eval(args):
    A = load_algebra_arg(args.algebra)
    if not args.formula:
        raise UsageError("eval needs --formula")
    phi = parse_formula(read_text_arg(args.formula), A.signature)
    env = {}
    for item in filter(None, (args.env or "").split(";")):
        if "=" not in item:
            raise UsageError(f"bad binding {item!r}; use name=element")
        k, v = item.split("=", 1)
        env[k.strip()] = parse_element(A, v)
    missing = free_vars(phi) - set(env)
    if missing:
        raise UsageError(f"unbound free variables {sorted(missing)}")
    f = compile_formula(A, phi, sorted(env), args.budget)
    value = f(*[env[k] for k in sorted(env)])
    rep = {"algebra": A.name, "formula": to_text(phi), "env": {k: _label(A, v) for k, v in env.items()},
           "value": value}
    return rep, value if args.expect_true else True


def cmd_malcev(args):
    if not args.family:
        raise UsageError("malcev-check needs --family FILE")
    algs = [load_algebra_arg(a) for a in args.algebra]
    with open(args.family) as fh:
        fam = MalcevFamily.from_json(json.load(fh), algs[0].signature if algs else None)
    rep = check_malcev_identities(algs, fam, args.budget or 10**7)
    return rep.to_json(), rep.holds


def cmd_u_chain(args):
    algs = [load_algebra_arg(a) for a in args.algebra] if args.algebra else \
        [A for A in gallery(6, args.variety)]
    by_sig: dict = {}
    for A in algs:
        by_sig.setdefault(A.signature, []).append(A)
    if args.chain:
        with open(args.chain) as fh:
            data = json.load(fh)
        reports = []
        ok = True
        for sig, group in by_sig.items():
            u = UChain.from_json(data, sig)
            rep = validate_u_chain(group, u)
            ok &= rep.ok
            reports.append(rep.to_json())
        return {"chain": data["terms"], "reports": reports}, ok
    out = []
    for sig, group in by_sig.items():
        u = find_u_chain(group, args.depth)
        out.append({"signature": sig.to_json(), "algebras": [A.name for A in group],
                    "chain": None if u is None else [str(t) for t in u.terms],
                    "k": None if u is None else u.k})
    return {"searches": out}, all(o["chain"] is not None for o in out)


def cmd_counterexample(args):
    ns = [args.n] if args.n is not None else [4, 5, 6]
    reps = [counterexample_pipeline(n, args.budget or DEFAULT_GAME_BUDGET) for n in ns]
    return {"runs": reps}, all(r["ok"] for r in reps)


def cmd_figures(args):
    rep = figure_checks()
    return rep, rep["ok"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="factorium", description="Finite universal-algebra workbench.")
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output")
    g.add_argument("--text", action="store_true", help="plain text output (default)")
    fmt.add_argument("--budget", type=int, default=None, help="work budget")
    fmt.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE,
                     help="size guard for congruence enumeration")
    one = argparse.ArgumentParser(add_help=False)
    one.add_argument("--algebra", required=True, help="JSON file or gallery name (L5, D5, L2vxL5v, ...)")
    zo = argparse.ArgumentParser(add_help=False)
    zo.add_argument("--zeros", help="comma-separated closed terms 0_1..0_l (default 0)")
    zo.add_argument("--ones", help="comma-separated closed terms 1_1..1_l (default 1)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gallery", parents=[fmt], help="build gallery algebras")
    s.add_argument("action", choices=["build"])
    s.add_argument("--name")
    s.add_argument("--out")
    s.add_argument("--variety", default="all", choices=["all", "VL", "Vvee"])
    s.set_defaults(func=cmd_gallery, max_size=12)

    for name, func, extra, help_ in (("congruences", cmd_congruences, [], "list Con(A)"),
                                     ("decompose", cmd_decompose, [], "direct decompositions"),
                                     ("central", cmd_central, [zo], "central elements"),
                                     ("bfc", cmd_bfc, [], "Boolean factor congruences"),
                                     ("dfc-check", cmd_dfc, [zo], "determining property")):
        s = sub.add_parser(name, parents=[fmt, one, *extra], help=help_)
        s.set_defaults(func=func)

    s = sub.add_parser("sigma-check", parents=[fmt, one, zo], help="evaluate the Sigma axioms")
    s.add_argument("--formula", help="kernel formula (file or text); default: the semilattice formula")
    s.add_argument("--e", help="element index or label; ';' separates tuple entries")
    s.add_argument("--f")
    s.set_defaults(func=cmd_sigma)

    s = sub.add_parser("ef-game", parents=[fmt], help="solve a back-and-forth game")
    s.add_argument("--algebra")
    s.add_argument("--other")
    s.add_argument("--n", type=int, help="play D_n against L_2 x L_n")
    s.add_argument("--rounds", type=int)
    s.add_argument("--expect", choices=["exists", "forall"])
    s.set_defaults(func=cmd_ef)

    s = sub.add_parser("eval", parents=[fmt, one], help="evaluate a formula")
    s.add_argument("--formula")
    s.add_argument("--env", help="bindings name=element separated by ';'")
    s.add_argument("--expect-true", action="store_true", help="exit 1 when the value is false")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("malcev-check", parents=[fmt], help="check a Mal'cev family")
    s.add_argument("--algebra", action="append", required=True)
    s.add_argument("--family")
    s.set_defaults(func=cmd_malcev)

    s = sub.add_parser("u-chain", parents=[fmt], help="find or validate a u-chain")
    s.add_argument("--algebra", action="append")
    s.add_argument("--chain", help="chain JSON file to validate")
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--variety", default="all", choices=["all", "VL", "Vvee"])
    s.set_defaults(func=cmd_u_chain)

    s = sub.add_parser("counterexample", parents=[fmt], help="D_n versus L_2 x L_n pipeline")
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("figures", parents=[fmt], help="the L_5 x L_2 checks")
    s.set_defaults(func=cmd_figures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", None) is None and args.command in ("eval", "sigma-check"):
        args.budget = DEFAULT_BUDGET
    try:
        report, ok = args.func(args)
    except (UsageError, AlgebraError, TermError, FormulaError, MalcevError, json.JSONDecodeError,
            OSError) as e:
        print(f"factorium: error: {e}", file=sys.stderr)
        return 2
    except (CongruenceError, EvaluationError) as e:
        print(f"factorium: error: {e}", file=sys.stderr)
        return 2
    emit(report, args)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
