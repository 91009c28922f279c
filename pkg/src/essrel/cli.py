"""Command line front end.

Exit codes: 0 success (or essential, for ``classify``), 1 failed check (or
inessential), 2 usage or parse error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import List, Optional

from .algebra import Ring
from .errors import DomainError, RelationParseError, ResourceGuardError
from .essentiality import essential_masks, is_essential
from .lattice import idempotent_support_sizes
from .orders import build_order_lattice
from .permuted import structure_factors
from .relations import format_relation, parse_relation
from .representations import simples_json
from .branching import branch_report
from .verify import SUITES

SCHEMA_VERSION = 1
CONVENTION = "(x,y)∈R stored row-major, 1-based"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ring", default="int", help="int, rat or modp:P (default int)")
    p.add_argument("--cache-dir", default=None, help="directory for cached enumerations")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--allow-n5", action="store_true", help="permit the n = 5 essential scan")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="essrel", description="Essential relations and the algebra of permuted orders.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="decide whether a relation is essential")
    p.add_argument("file", help="relation file (0/1 grid or hex); '-' reads stdin")
    p.add_argument("--n", type=int, default=None)

    for name, helptext in (("enumerate", "count essential relations, orders and orbits"),
                           ("lattice", "dump the order lattice"),
                           ("idempotents", "support sizes of the idempotents f_R"),
                           ("structure", "matrix factors of the permuted-order algebra"),
                           ("simples", "simple module table")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--n", type=int, required=True)
        if name == "simples":
            p.add_argument("--char", type=int, default=0, choices=(0,),
                           help="characteristic (only 0 is supported)")

    p = sub.add_parser("branch", parents=[common], help="restriction from n-1 to n points")
    p.add_argument("--from", dest="n_from", type=int, required=True)
    p.add_argument("--to", dest="n_to", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="run a named invariant suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--n", type=int, required=True)
    return parser


def _envelope(command: str, args, result) -> dict:
    config = {"ring": args.ring, "allow_n5": args.allow_n5}
    for key in ("n", "n_from", "n_to", "suite", "char"):
        if getattr(args, key, None) is not None:
            config[key] = getattr(args, key)
    return {"schema_version": SCHEMA_VERSION, "convention": CONVENTION,
            "command": command, "config": config, "result": result}


def _rows(result) -> List[dict]:
    if isinstance(result, list):
        return result
    if isinstance(result, dict):
        for value in result.values():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                return value
        return [result]
    return [{"value": result}]


def _cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return v


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    rows = _rows(doc["result"])
    keys: List[str] = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([_cell(r.get(k, "")) for k in keys])
        return buf.getvalue()
    lines = [f"# {doc['command']} {json.dumps(doc['config'], sort_keys=True)}"]
    for r in rows:
        lines.append("  ".join(f"{k}={_cell(r[k])}" for k in keys if k in r))
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> int:
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        print(f"essrel: cannot read {args.file}: {e.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        R = parse_relation(text, n=args.n)
    except (RelationParseError, DomainError) as e:
        print(f"essrel: {args.file}: {e}", file=sys.stderr)
        return EXIT_USAGE
    v = is_essential(R)
    result = {"n": R.n, "relation": R.hex(), "grid": format_relation(R).splitlines(),
              "essential": v.essential, "cover_number": v.cover_number, "reason": v.reason}
    if v.essential:
        result["witness"] = list(v.witness_permutation.one_line())
    if v.cover is not None:
        result["cover"] = [dict(zip("UV", b.sides())) for b in v.cover.blocks]
    args.n = R.n
    if args.format == "text":
        words = "essential" if v.essential else "inessential"
        out = [f"{words}, cover_number {v.cover_number}"]
        if v.essential:
            out[0] += f", witness {'Id' if v.witness_permutation.is_identity() else v.witness_permutation}"
        for b in result.get("cover", []):
            out.append(f"  {{{','.join(map(str, b['U']))}}} x {{{','.join(map(str, b['V']))}}}")
        sys.stdout.write("\n".join(out) + "\n")
    else:
        sys.stdout.write(render(_envelope("classify", args, result), args.format))
    return EXIT_OK if v.essential else EXIT_FAIL


def _run(args) -> tuple:
    c = args.command
    if c == "enumerate":
        masks = essential_masks(args.n, cache_dir=args.cache_dir, allow_n5=args.allow_n5)
        L = build_order_lattice(args.n)
        return {"n": args.n, "essential_count": len(masks), "orders": len(L),
                "orbits": len(L.orbit_reps)}, True
    if c == "lattice":
        return build_order_lattice(args.n).to_json(), True
    if c == "idempotents":
        return {"n": args.n, "idempotents": idempotent_support_sizes(build_order_lattice(args.n))}, True
    if c == "structure":
        rows = structure_factors(build_order_lattice(args.n))
        total = sum(r["matrix_size"] ** 2 * r["stabilizer_order"] for r in rows)
        return {"n": args.n, "factors": rows, "rank": total}, True
    if c == "simples":
        rows = simples_json(args.n)
        return {"n": args.n, "splitting_field_assumed": True, "simples": rows}, True
    if c == "branch":
        rows = branch_report(args.n_from, args.n_to)
        return {"n_from": args.n_from, "n_to": args.n_to, "reports": rows}, \
            all(r["ok"] and r["lemma_9_1"] for r in rows)
    if c == "verify":
        fn = SUITES[args.suite]
        if args.suite == "hall":
            r = fn(args.n, cache_dir=args.cache_dir, allow_n5=args.allow_n5)
        elif args.suite == "idempotents":
            r = fn(args.n, Ring.parse(args.ring))
        else:
            r = fn(args.n)
        return r, bool(r.get("ok"))
    raise DomainError(f"unknown command {c}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        Ring.parse(args.ring)
    except DomainError as e:
        print(f"essrel: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "classify":
            return cmd_classify(args)
        result, ok = _run(args)
    except ResourceGuardError as e:
        print(f"essrel: {e} (limit {e.limit})", file=sys.stderr)
        return EXIT_GUARD
    except DomainError as e:
        print(f"essrel: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(_envelope(args.command, args, result), args.format))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
