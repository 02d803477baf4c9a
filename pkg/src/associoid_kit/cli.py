"""Command-line front end.

Every command prints one report (JSON or aligned text). Exit status is 0
when all checked laws hold, 1 when one fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional, Sequence

from .algebra import find_isomorphism, symmetric
from .bisections import bisection_torsor, canonical_kernel, group_at, pregroupoid_of
from .demos import DEMOS, demo
from .equivalence import (
    commutes,
    enumerate_bisections,
    enumerate_local_bisections,
    enumerate_sections,
    transversal_pair,
)
from .errors import AssocKitError
from .powerset_products import (
    DEFAULT_BUDGET,
    bookkeeping_product,
    bookkeeping_witnesses,
    gamma_product,
    gamma_witnesses,
    prev_product,
    prev_witnesses,
)
from .relations import Subset
from .serialization import canonical_dumps, digest, parse_json_text, structure_from_json, subset_to_json
from .structures import Flavor, TernaryStructure, connected_components, failures, validate

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--demo", choices=sorted(DEMOS), help="built-in structure")
    src.add_argument("--file", help="structure JSON file ('-' for stdin)")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled law checks")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="exhaust when the instance count fits, else sample this many")
    p.add_argument("--exhaustive", action="store_true", help="never sample")
    p.add_argument("--timing", action="store_true", help="add wall-clock duration (breaks byte-identity)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="associoid-kit",
                                     description="Finite ternary associative structures")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check-laws", parents=[common], help="validate a structure")
    p = sub.add_parser("product", parents=[common], help="power-set product of three subsets")
    p.add_argument("--law", choices=("bookkeeping", "gamma", "prev"), default="gamma")
    for name in ("x", "y", "z"):
        p.add_argument(f"--{name}", required=True, help="comma-separated element ids")
    p.add_argument("--witnesses", action="store_true", help="list (xi, eta, zeta) per output element")
    p = sub.add_parser("bisections", parents=[common], help="count and list U_a, U_b, U_ab, U_ab^loc")
    p.add_argument("--list", action="store_true", help="print the members, not just counts")
    p = sub.add_parser("kernel", parents=[common], help="canonical kernel on a bisection y")
    p.add_argument("--y", help="base bisection (default: the first one)")
    p.add_argument("--x", help="bisection to evaluate (default: all)")
    p = sub.add_parser("group-table", parents=[common], help="Cayley table of (U_ab, y)")
    p.add_argument("--y", help="neutral bisection (default: the first one)")
    sub.add_parser("components", parents=[common], help="connected components (classes of ab)")
    sub.add_parser("export", parents=[common], help="print the structure as JSON")
    return parser


def _load(args) -> TernaryStructure:
    if args.demo:
        return demo(args.demo)
    if not args.file:
        raise InputError("give --demo NAME or --file PATH")
    if args.file == "-":
        text, source = sys.stdin.read(), "<stdin>"
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from exc
        source = args.file
    return structure_from_json(parse_json_text(text, source))


def _subset(T: TernaryStructure, text: str, what: str) -> Subset:
    text = text.strip().strip("[]{}")
    try:
        ids = [int(t) for t in text.split(",") if t.strip()]
        return T.ground.subset(ids)
    except ValueError as exc:
        raise InputError(f"--{what}: {exc}") from exc


# --------------------------------------------------------------------------
# commands; each returns (results dict, list of law reports as dicts, passed)


def cmd_check_laws(T: TernaryStructure, args):
    budget = 10 ** 12 if args.exhaustive else args.budget
    reports = validate(T, budget=budget, seed=args.seed)
    bad = failures(T, reports)
    comps = connected_components(T)
    results = {
        "flavor": T.flavor.value,
        "ground_size": T.ground.size,
        "domain_size": len(T.table),
        "components": [subset_to_json(b) for b in comps.blocks],
    }
    return results, [r.to_json() for r in reports], not bad


def cmd_product(T: TernaryStructure, args):
    x, y, z = (_subset(T, getattr(args, n), n) for n in ("x", "y", "z"))
    if args.law == "bookkeeping":
        if not commutes(T.a, T.b):
            raise InputError("bookkeeping product needs ab = ba")
        out = bookkeeping_product(T.a, T.b, x, y, z)
        wit = bookkeeping_witnesses(T.a, T.b, x, y, z) if args.witnesses else None
    elif args.law == "gamma":
        P = pregroupoid_of(T)
        out = gamma_product(P, x, y, z)
        wit = gamma_witnesses(P, x, y, z) if args.witnesses else None
    else:
        L = T.left_part() if T.flavor is Flavor.COMMUTING_PREV_PAIR else T
        if L.flavor not in (Flavor.LEFT_PREV, Flavor.TORSOR):
            raise InputError("prev product needs a left prev or a commuting pair")
        out = prev_product(L, x, y, z)
        wit = prev_witnesses(L, x, y, z) if args.witnesses else None
    results = {"law": args.law, "x": subset_to_json(x), "y": subset_to_json(y),
               "z": subset_to_json(z), "result": subset_to_json(out)}
    if wit is not None:
        results["witnesses"] = {str(k): [list(t) for t in v] for k, v in wit.items()}
    return results, [], True


def cmd_bisections(T: TernaryStructure, args):
    P = pregroupoid_of(T)
    fams = {"U_a": list(enumerate_sections(P.a)), "U_b": list(enumerate_sections(P.b)),
            "U_ab": list(enumerate_bisections(P.a, P.b)),
            "U_ab_loc": list(enumerate_local_bisections(P.a, P.b))}
    results = {"counts": {k: len(v) for k, v in fams.items()}}
    if args.list:
        results["members"] = {k: [subset_to_json(s) for s in v] for k, v in fams.items()}
    return results, [], True


def _pick_bisection(T, text: Optional[str], BT) -> Subset:
    if text:
        return _subset(T, text, "y")
    if not BT.carrier:
        raise InputError("structure has no bisections")
    return BT.carrier[0]


def cmd_kernel(T: TernaryStructure, args):
    BT = bisection_torsor(T)
    y = _pick_bisection(T, args.y, BT)
    BT.index(y)
    xs = [_subset(T, args.x, "x")] if args.x else BT.carrier
    maps = []
    for x in xs:
        k = canonical_kernel(T, y, x)
        maps.append({"x": subset_to_json(x), "map": [[e, v] for e, v in k.as_dict().items()],
                     "bijective": k.is_bijective})
    return {"y": subset_to_json(y), "kernels": maps}, [], True


def cmd_group_table(T: TernaryStructure, args):
    BT = bisection_torsor(T)
    y = _pick_bisection(T, args.y, BT)
    G = group_at(BT, y)
    results = {"y": subset_to_json(y), "order": G.order,
               "elements": [subset_to_json(s) for s in BT.carrier],
               "cayley": [list(r) for r in G.cayley], "identity": G.identity,
               "abelian": G.is_abelian()}
    P = BT.base
    if P.a.is_total and P.b.is_total and transversal_pair(P.a, P.b):
        n = len(P.a.masks)
        iso = find_isomorphism(G, symmetric(n))
        results["symmetric_isomorphism"] = {"n": n, "found": iso is not None,
                                            "map": list(iso) if iso else None}
    return results, [r.to_json() for r in BT.reports], all(r.holds for r in BT.reports)


def cmd_components(T: TernaryStructure, args):
    comps = connected_components(T)
    return {"components": [subset_to_json(b) for b in comps.blocks],
            "transitive": len(comps.masks) <= 1}, [], True


def cmd_export(T: TernaryStructure, args):
    return {"structure": T.to_json()}, [], True


COMMANDS = {
    "check-laws": cmd_check_laws,
    "product": cmd_product,
    "bisections": cmd_bisections,
    "kernel": cmd_kernel,
    "group-table": cmd_group_table,
    "components": cmd_components,
    "export": cmd_export,
}


# --------------------------------------------------------------------------
# rendering


def _render_text(report: dict) -> str:
    lines = [f"command: {' '.join(report['command'])}",
             f"structure: sha256 {report['structure_digest']}"]
    if report.get("seed") is not None:
        lines.append(f"seed: {report['seed']}")
    res = report["results"]
    if "structure" in res:
        return canonical_dumps(res["structure"], indent=2)
    for key in sorted(res):
        val = res[key]
        if key == "counts":
            for k, v in val.items():
                lines.append(f"{k}: {v} elements")
        elif key == "cayley":
            lines.append("cayley:")
            w = len(str(len(val)))
            lines.extend("  " + " ".join(str(c).rjust(w) for c in row) for row in val)
        elif key == "kernels":
            for k in val:
                body = " ".join(f"{e}->{v}" for e, v in k["map"])
                lines.append(f"B[x={canonical_dumps(k['x'])}]: {body}")
        else:
            lines.append(f"{key}: {canonical_dumps(val)}")
    for law in report["laws"]:
        status = "pass" if law["holds"] else "FAIL"
        note = f"  ({law['note']})" if law["note"] else ""
        mode = "exhaustive" if law["exhaustive"] else f"sampled, seed {law['seed']}"
        lines.append(f"{law['law']:<14} {status}  {law['instances']} instances, {mode}{note}")
    lines.append(f"status: {'pass' if report['passed'] else 'FAIL'}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        T = _load(args)
        results, laws, passed = COMMANDS[args.command](T, args)
    except (InputError, AssocKitError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    report = {
        "command": ["associoid-kit", *argv],
        "structure_digest": digest(T.to_json()),
        "seed": args.seed if any(not law["exhaustive"] for law in laws) else None,
        "results": results,
        "laws": laws,
        "passed": passed,
    }
    if args.timing:
        report["duration_s"] = round(time.perf_counter() - start, 6)
    if args.format == "json":
        print(canonical_dumps(report, indent=2))
    else:
        print(_render_text(report))
        first = next((law for law in laws if not law["holds"]), None)
        if first is not None:
            print(f"witness for {first['law']}: {canonical_dumps(first['witness'])}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
