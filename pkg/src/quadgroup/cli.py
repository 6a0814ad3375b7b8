"""Command-line driver.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error,
3 algebraically invalid input, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from . import __version__
from .checks import DEFAULT_BUDGET, Report, jsonable
from .errors import CapExceeded, ParseError, QuadGroupError
from .groups import (ORDER_CAP, abelianization, center, derived_subgroup, lower_central_series,
                     nilpotency_class)
from .io import (is_fgab_spec, parse_fgab, parse_genpair, parse_group, parse_map, parse_poly_values,
                 parse_presentation, parse_subgroup)
from .passi import MAX_DEGREE, lower_central_check, factor_poly, is_polynomial, is_polynomial_rec, passi_group
from .quadmaps import bilinear_part, quadratic_verdict, radical
from .universal_q import build_q, presented_build, presented_check
from .verify import DEFAULT_ZOO, ZOO, battery_json, run_battery

SCHEMA = "quadgroup-report/1"


class UsageError(ParseError):
    pass


def _envelope(command: str, reports: list[tuple[str | None, Report]], result: dict | None = None,
              instances: int = 1) -> dict:
    p = f = s = 0
    for _, r in reports:
        a, b, c = r.counts()
        p, f, s = p + a, f + b, s + c
    out = {
        "schema": SCHEMA,
        "command": command,
        "summary": {"claims": p + f + s, "instances": instances, "pass": p, "fail": f, "skipped": s},
        "reports": [({"instance": tag} if tag else {}) | r.to_json() for tag, r in reports],
    }
    if result is not None:
        out["result"] = jsonable(result)
    return out


def _summary_line(doc: dict) -> str:
    s = doc["summary"]
    return (f"checked {s['claims']} claims over {s['instances']} instances: "
            f"{s['pass']} pass / {s['fail']} fail / {s['skipped']} skipped")


def _emit(args, doc: dict, text_lines: list[str]) -> int:
    if args.json != "-":
        for line in text_lines:
            print(line)
        print(_summary_line(doc))
    if args.json:
        payload = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        if args.json == "-":
            sys.stdout.write(payload)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(payload)
    return 1 if doc["summary"]["fail"] else 0


def _result_lines(result: dict) -> list[str]:
    w = max((len(k) for k in result), default=0)
    return [f"{k.ljust(w)} : {json.dumps(jsonable(v))}" for k, v in result.items()]


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    G = parse_group(args.group)
    lcs = lower_central_series(G)
    cls = nilpotency_class(G)
    res = {
        "group": G.name,
        "order": len(G),
        "abelian": G.is_abelian,
        "center": list(center(G).elements),
        "derived_subgroup": list(derived_subgroup(G).elements),
        "lower_central_series_orders": [S.order for S in lcs],
        "nilpotency_class": cls if cls is not None else "not nilpotent",
        "abelianization": list(abelianization(G).group.factors),
    }
    doc = _envelope("analyze", [], res)
    return _emit(args, doc, _result_lines(res))


def cmd_qgroup(args) -> int:
    G = parse_group(args.group)
    B = parse_subgroup(G, args.subgroup)
    Q = build_q(G, B, max_order=args.max_order, verify=False, budget=args.budget)
    rep = Q.verify(args.budget)
    cls = nilpotency_class(Q.group)
    res = {
        "group": G.name,
        "subgroup": list(B.elements),
        "order": Q.order,
        "tensor_square": list(Q.TT.factors),
        "nilpotency_class": cls if cls is not None else "not nilpotent",
        "abelianization": list(abelianization(Q.group).group.factors),
        "extension_verified": rep.ok,
    }
    doc = _envelope("qgroup", [(None, rep)], res)
    return _emit(args, doc, _result_lines(res) + rep.lines())


def cmd_passi(args) -> int:
    G = parse_group(args.group)
    B = parse_subgroup(G, args.subgroup)
    P = passi_group(G, B, args.degree, check27=False, budget=args.budget, max_degree=args.max_degree)
    rep = P.verify_maps()
    rep.extend(lower_central_check(P, args.budget))
    res = {
        "group": G.name,
        "subgroup": list(B.elements),
        "degree": args.degree,
        "invariant_factors": list(P.group.factors),
        "order": P.group.order,
    }
    if args.degree == 2 and P.is_central:
        res["tensor_square"] = list(P.tensor.group.factors)
        res["mu2_matrix"] = [list(c) for c in P.mu2.images]
    doc = _envelope("passi", [(None, rep)], res)
    return _emit(args, doc, _result_lines(res) + rep.lines())


def cmd_checkmap(args) -> int:
    G = parse_group(args.domain)
    H = parse_group(args.codomain)
    f = parse_map(args.map, G, H)
    B = parse_subgroup(G, args.subgroup)
    v = quadratic_verdict(f, B, args.budget)
    rep = Report(f"quadratic verdict for {f.name}: {G.name} -> {H.name}")
    for law in ("bilinear-left", "bilinear-right", "central"):
        rep.add(law, v.laws[law] is None, v.laws[law])
    rep.add("vanishes on B", v.laws["relative"] is None, v.laws["relative"])
    res = v.to_json()
    if v.is_quadratic:
        res["radical"] = list(radical(f, args.budget).elements)
    if v.ok:
        bp = bilinear_part(f, B, args.budget)
        TT = bp.tensor
        res["T"] = list(bp.quotient.group.factors)
        res["w_f"] = [[bp.value(TT.symbol(i, j)) for j in range(TT.n)] for i in range(TT.n)]
    doc = _envelope("checkmap", [(None, rep)], res)
    return _emit(args, doc, _result_lines(res) + rep.lines())


def cmd_checkpoly(args) -> int:
    G = parse_group(args.domain)
    if not is_fgab_spec(args.codomain):
        raise ParseError('checkpoly needs an abelian codomain {"factors": [...]}')
    A = parse_fgab(args.codomain)
    vals = parse_poly_values(args.map, G, A)
    B = parse_subgroup(G, args.subgroup)
    if args.degree > args.max_degree:
        raise CapExceeded(f"degree {args.degree} exceeds cap {args.max_degree}")
    v1 = is_polynomial(G, A, vals, args.degree, B, args.budget)
    v2 = is_polynomial_rec(G, A, vals, args.degree, B)
    rep = Report(f"polynomial of degree <= {args.degree} relative B")
    rep.add("ideal test", v1.ok, v1.witness)
    rep.add("recursive test", v2.ok, v2.witness)
    rep.add("tests agree", v1.ok == v2.ok)
    res = {"degree": args.degree, "polynomial": v1.ok, "codomain": list(A.factors)}
    if v1.ok and args.degree >= 1:
        P = passi_group(G, B, args.degree, check27=False, budget=args.budget, max_degree=args.max_degree)
        fb, w = factor_poly(G, A, vals, P, args.budget)
        res["P_n"] = list(P.group.factors)
        res["fbar"] = [list(c) for c in fb.images]
        if w is not None:
            res["w_f"] = [list(c) for c in w.images]
    doc = _envelope("checkpoly", [(None, rep)], res)
    return _emit(args, doc, _result_lines(res) + rep.lines())


def cmd_presented(args) -> int:
    P = parse_presentation(args.presentation)
    H = parse_group(args.target)
    gp = parse_genpair(args.genpair)
    rep = presented_check(P, H, gp)
    res = {"verdict": rep.info["verdict"]}
    if rep.ok and P.pi_group is not None:
        f, rep = presented_build(P, H, gp, args.budget)
        res["verdict"] = rep.info["verdict"]
        res["map"] = [int(x) for x in f.table]
    doc = _envelope("presented", [(None, rep)], res)
    return _emit(args, doc, _result_lines(res) + rep.lines())


def cmd_verify(args) -> int:
    names = DEFAULT_ZOO if args.zoo == "default" else tuple(n for n in args.zoo.split(",") if n)
    unknown = [n for n in names if n not in ZOO]
    if unknown:
        raise UsageError(f"unknown zoo member(s): {', '.join(unknown)}; choose from {', '.join(ZOO)}")
    t0 = time.perf_counter()
    res = run_battery(names, args.budget, progress=None if args.quiet else lambda m: print(m, file=sys.stderr))
    doc = battery_json(res, names)
    lines = []
    for tag, r in res.reports:
        lines.append(f"[{tag}] " + r.title)
        lines.extend(r.lines()[1:])
    if not args.quiet:
        print(f"elapsed {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return _emit(args, doc, lines)


# ---------------------------------------------------------------------------
# argument parsing


def _positive(kind):
    def conv(s):
        try:
            v = kind(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {s!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return conv


def _non_negative(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _budget(s: str) -> int:
    try:
        v = int(float(s)) if any(c in s for c in "eE.") else int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-order", type=_positive(int), default=ORDER_CAP,
                        help=f"largest group that may be materialized (default {ORDER_CAP})")
    common.add_argument("--max-degree", type=_positive(int), default=MAX_DEGREE,
                        help=f"largest polynomial degree (default {MAX_DEGREE})")
    common.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET,
                        help=f"work budget in elementary steps (default {DEFAULT_BUDGET:.0e})")
    common.add_argument("--json", "--report", dest="json", metavar="PATH",
                        help="write the JSON report to PATH ('-' for stdout)")

    p = argparse.ArgumentParser(prog="quadgroup", description="Quadratic maps, universal quadratic groups "
                                "and Passi groups of finite groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="basic structure of a group")
    a.add_argument("group")
    a.set_defaults(func=cmd_analyze)

    a = sub.add_parser("qgroup", parents=[common], help="build and verify Q(G,B)")
    a.add_argument("group")
    a.add_argument("--subgroup", default="trivial", help="trivial | all | center | subgroup JSON")
    a.set_defaults(func=cmd_qgroup)

    a = sub.add_parser("passi", parents=[common], help="the Passi group P_n(G,B)")
    a.add_argument("group")
    a.add_argument("--subgroup", default="trivial", help="trivial | all | center | subgroup JSON")
    a.add_argument("--degree", type=_positive(int), default=2, help="n in P_n (default 2)")
    a.set_defaults(func=cmd_passi)

    a = sub.add_parser("checkmap", parents=[common], help="quadratic verdict for a map of groups")
    a.add_argument("domain")
    a.add_argument("codomain")
    a.add_argument("map")
    a.add_argument("--subgroup", default="trivial", help="trivial | all | center | subgroup JSON")
    a.set_defaults(func=cmd_checkmap)

    a = sub.add_parser("checkpoly", parents=[common], help="polynomial verdict for a map into an abelian group")
    a.add_argument("domain")
    a.add_argument("codomain")
    a.add_argument("map")
    a.add_argument("--subgroup", default="trivial", help="trivial | all | center | subgroup JSON")
    a.add_argument("--degree", type=_non_negative, default=2, help="polynomial degree n (default 2)")
    a.set_defaults(func=cmd_checkpoly)

    a = sub.add_parser("presented", parents=[common], help="quadratic maps out of a presented group")
    a.add_argument("presentation")
    a.add_argument("target")
    a.add_argument("genpair")
    a.set_defaults(func=cmd_presented)

    a = sub.add_parser("verify", parents=[common], help="run the verification battery over the group zoo")
    a.add_argument("--zoo", default="default", help="'default' or a comma list of: " + ", ".join(ZOO))
    a.add_argument("--quiet", action="store_true", help="no progress output on stderr")
    a.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except QuadGroupError as e:
        print(f"error: {e}", file=sys.stderr)
        w = getattr(e, "witness", None)
        if w is not None:
            print(f"witness: {json.dumps(jsonable(w))}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
