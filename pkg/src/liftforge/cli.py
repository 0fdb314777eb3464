"""Command-line interface.

Exit status: 0 on success / verified, 1 on a mathematical mismatch, 2 on
usage errors.  Long-running work sits behind --long; progress goes to
stderr so stdout stays machine-readable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import catalog as catalog_mod
from . import corefn, diffunif, exprlang, families, landscape, lifting, search6

MISMATCH = 1


def _jobs_default() -> int:
    env = os.environ.get("LIFTFORGE_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _emit(args, doc, text_lines) -> None:
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    elif args.format == "csv":
        for line in text_lines:
            print(",".join(str(c) for c in line.split("\t")))
    else:
        for line in text_lines:
            print(line)


def _expr_rule(text: str, arity_cap: int) -> corefn.Rule:
    return exprlang.eval_expr(exprlang.parse_expr(text), arity_cap)


def _maybe_ascii(s: str, args) -> str:
    return s.replace("★", "*").replace("∘", "o") if args.ascii else s


def cmd_parse(args) -> int:
    e = exprlang.parse_expr(args.expr)
    r = exprlang.eval_expr(e, args.arity_cap)
    doc = {
        "expr": exprlang.print_expr(e, ascii=args.ascii),
        "rule": r.text(),
        "k": r.k,
        "degree": corefn.degree(r),
        "balanced": corefn.is_balanced(r),
        "anf": corefn.render_anf(corefn.to_anf(r)),
        "class": corefn.canonicalize(r).text(),
    }
    _emit(args, doc, [f"{k}\t{v}" for k, v in doc.items()])
    return 0


def cmd_verify(args) -> int:
    r = _expr_rule(args.expr, args.arity_cap)
    method = "pair-graph" if args.exact else "finite-scan"
    verdict = lifting.decide_proper(r, method=method, scan_limit=min(args.n_cap, 16))
    if args.format == "json":
        print(verdict.to_json())
    else:
        print(verdict.decision)
        if verdict.witness is not None:
            w = verdict.witness
            print(f"collision at n={w.n}: {w.bits(w.x)} and {w.bits(w.y)}")
    return 0 if verdict.proper else MISMATCH


def cmd_compose(args) -> int:
    r = _expr_rule("∘".join(f"({e})" for e in args.exprs), args.arity_cap)
    doc = {"rule": r.text(), "k": r.k, "shift": r.shift, "anf": corefn.render_anf(corefn.to_anf(r))}
    _emit(args, doc, [f"{k}\t{v}" for k, v in doc.items()])
    return 0


def cmd_expand(args) -> int:
    r = _expr_rule(args.expr, args.arity_cap)
    out = lifting.expand(r, args.stride, args.arity_cap)
    doc = {"rule": out.text(), "k": out.k}
    _emit(args, doc, [f"{k}\t{v}" for k, v in doc.items()])
    return 0


def cmd_landscapes(args) -> int:
    if args.k >= 13 and not args.long:
        print("k >= 13 requires --long", file=sys.stderr)
        return 2
    res = landscape.enumerate_conserved(args.k, include_list=args.list, jobs=args.jobs)
    if args.list:
        for l in res.landscapes:
            print(_maybe_ascii(l.symbols, args))
    _emit(
        args,
        res.to_json(),
        [f"count={res.count} classes={res.class_count}"],
    )
    return 0


def cmd_search6(args) -> int:
    if not args.long:
        print("the exhaustive diameter-6 search requires --long", file=sys.stderr)
        return 2
    pooled = search6.search_all(include_complemented=args.complemented, jobs=args.jobs)
    rows = []
    for s in (2, 3, 4, 5):
        res = pooled.by_offset[s]
        invs = res.involutions if hasattr(res, "involutions") else res
        for inv in invs:
            rows.append(
                {
                    "s": inv.s,
                    "rule": inv.rule.text(),
                    "class": inv.class_id.text(),
                    "anf": corefn.render_anf(corefn.to_anf(inv.rule)),
                }
            )
    if args.format == "json":
        for row in rows:
            print(json.dumps(row, sort_keys=True))
    else:
        for row in rows:
            print(f"s={row['s']}\t{row['rule']}\t{row['class']}\t{row['anf']}")
        print(f"functions={pooled.function_count} classes={pooled.class_count}", file=sys.stderr)
    return 0


def cmd_families(args) -> int:
    if args.r is not None:
        params = families.ChainFamilyParams(args.r)
        r = families.build_chain(params)
        claim = ("chain", args.r, args.r)
        ok = families.verify_order_claim(r, args.r, args.r)
    else:
        if args.k is None or args.j is None or args.set is None:
            print("need either --r or all of --k --j --set", file=sys.stderr)
            return 2
        members = frozenset(int(v) for v in args.set.split(","))
        params = families.symmetric_params(args.k, args.j, members)
        r = families.build_symmetric(params)
        claim = ("symmetric", 1 << params.r_exp, params.j)
        ok = families.verify_order_claim(r, 1 << params.r_exp, params.j)
    verdict = lifting.decide_proper(r)
    doc = {
        "family": claim[0],
        "rule": r.text(),
        "k": r.k,
        "anf": corefn.render_anf(corefn.to_anf(r)),
        "proper": verdict.proper,
        "order_power": claim[1],
        "order_verified": ok,
    }
    _emit(args, doc, [f"{k}\t{v}" for k, v in doc.items()])
    return 0 if ok and verdict.proper else MISMATCH


def _parse_range(spec: str) -> tuple[int, int]:
    if ".." in spec:
        a, b = spec.split("..", 1)
        return int(a), int(b)
    v = int(spec)
    return v, v


def cmd_du(args) -> int:
    r = _expr_rule(args.expr, args.arity_cap)
    lo, hi = _parse_range(args.n)
    rep = diffunif.du_profile(r, lo, hi, n_cap=min(args.n_cap, 14))
    if args.format == "json":
        print(json.dumps(rep.to_json(), sort_keys=True))
    else:
        vals = [e.scaled_str() for e in rep.entries] if args.scaled else [str(e.raw) for e in rep.entries]
        print(" ".join(vals))
    return 0


def cmd_catalog(args) -> int:
    entries = catalog_mod.load_catalog()
    if args.list:
        for e in entries:
            du = ",".join(str(v) for v in e.stated_du) if e.stated_du else "-"
            print(_maybe_ascii(e.text, args) + f"\t{e.stated_degree}\t{du}")
        return 0
    rep = catalog_mod.verify_catalog(entries, check_du=args.du, du_to=12 if args.long else 10)
    if args.format == "json":
        print(json.dumps({"ok": rep.ok, "problems": [str(p) for p in rep.problems]}, sort_keys=True))
    else:
        print(rep.summary())
    return 0 if rep.ok else MISMATCH


def cmd_closure(args) -> int:
    res = catalog_mod.closure_search(args.diameter, budget=args.budget)
    doc = {
        "max_diameter": res.max_diameter,
        "found_classes": res.found_count,
        "functions": res.discovered_functions,
        "compositions": res.compositions,
        "exhausted": res.exhausted,
    }
    _emit(args, doc, [f"{k}\t{v}" for k, v in doc.items()])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="liftforge",
        description="local rules of reversible cellular automata: construct, decide, classify, evaluate",
    )
    p.add_argument("--jobs", type=int, default=_jobs_default(), help="worker processes (env LIFTFORGE_JOBS)")
    p.add_argument("--n-cap", type=int, default=24, dest="n_cap", help="circular-length cap for bijectivity scans")
    p.add_argument("--arity-cap", type=int, default=26, dest="arity_cap", help="table-width cap for compositions")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--long", action="store_true", help="enable long-running work")
    p.add_argument("--ascii", action="store_true", help="ASCII output (star as *, compose as o)")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("parse", help="parse an expression and show the compiled rule")
    q.add_argument("expr")
    q.set_defaults(fn=cmd_parse)

    q = sub.add_parser("verify", help="decide whether an expression is a proper lifting")
    q.add_argument("expr")
    q.add_argument("--exact", action="store_true", default=True, help="pair-graph decision (default)")
    q.add_argument("--scan", dest="exact", action="store_false", help="finite-scan heuristic instead")
    q.set_defaults(fn=cmd_verify)

    q = sub.add_parser("compose", help="compose expressions left to right")
    q.add_argument("exprs", nargs="+")
    q.set_defaults(fn=cmd_compose)

    q = sub.add_parser("expand", help="stride-expand a rule's window")
    q.add_argument("expr")
    q.add_argument("--stride", type=int, required=True)
    q.set_defaults(fn=cmd_expand)

    q = sub.add_parser("landscapes", help="enumerate conserved landscapes of a diameter")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--classes", action="store_true", help="(kept for symmetry; classes always shown)")
    q.add_argument("--list", action="store_true", help="print one landscape per line")
    q.set_defaults(fn=cmd_landscapes)

    q = sub.add_parser("search6", help="exhaustive diameter-6 involution search")
    q.add_argument("--complemented", action="store_true", help="also scan the all-zero/all-one swap branch")
    q.set_defaults(fn=cmd_search6)

    q = sub.add_parser("families", help="build a parametric proper lifting and verify its order")
    q.add_argument("--k", type=int)
    q.add_argument("--j", type=int)
    q.add_argument("--set", type=str, help="comma-separated members of S")
    q.add_argument("--r", type=int, help="chain-family parameter (diameter 2r)")
    q.set_defaults(fn=cmd_families)

    q = sub.add_parser("du", help="differential uniformity over a range of lengths")
    q.add_argument("expr")
    q.add_argument("--n", required=True, help="length or range, e.g. 6..12")
    q.add_argument("--scaled", action="store_true", help="report 2^(9-n)-scaled values")
    q.set_defaults(fn=cmd_du)

    q = sub.add_parser("catalog", help="verify the bundled 120-entry table")
    q.add_argument("--du", action="store_true", help="also check stated differential uniformities")
    q.add_argument("--list", action="store_true", help="print the raw entries")
    q.set_defaults(fn=cmd_catalog)

    q = sub.add_parser("closure", help="compositional closure search")
    q.add_argument("--diameter", type=int, default=8, help="intermediate diameter cap")
    q.add_argument("--budget", type=int, default=400_000, help="composition budget")
    q.set_defaults(fn=cmd_closure)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except corefn.LiftforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
