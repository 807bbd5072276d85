"""Command-line front end.

Exit codes: 0 success, 2 invalid input or resource cap (diagnostic on stderr),
64 usage error (unknown subcommand or flag).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import SCHEMA_VERSION, __version__
from .errors import MallestatError

EXIT_INVALID = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def int_arg(text: str) -> int:
    """Integers, also written like 1e8 or 10**8."""
    s = text.strip().replace("_", "")
    try:
        if "**" in s:
            b, e = s.split("**")
            return int(b) ** int(e)
        d = Decimal(s)
    except (InvalidOperation, ValueError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def int_list(text: str) -> list[int]:
    return [int_arg(t) for t in text.split(",") if t.strip()]


# --- output ---------------------------------------------------------------------

def _echo(args) -> dict:
    """Config echo: every flag that affects the result (worker count excluded)."""
    skip = {"func", "threads", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _emit_json(args, payload: dict):
    doc = {"schema_version": SCHEMA_VERSION, "config": _echo(args), **payload}
    text = json.dumps(doc, indent=2, sort_keys=False, default=str) + "\n"
    _write(args, text)


def _emit_csv(args, header, rows, kind: str = ""):
    buf = io.StringIO()
    cfg = json.dumps(_echo(args), sort_keys=True, separators=(",", ":"), default=str)
    extra = f" kind={kind}" if kind else ""
    buf.write(f"# mallestat schema-version={SCHEMA_VERSION}{extra} config={cfg}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _write(args, buf.getvalue())


def _write(args, text: str):
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands -------------------------------------------------------------------

def cmd_invariants(args):
    from .malle import invariants_of, product_generators, product_invariants
    from .nilpotent import parse_group_spec, regular_rep
    from .permgroup import symmetric_generators
    from .errors import InvalidInput

    if args.group is None and args.n is None:
        raise InvalidInput("give --group, --n, or both")
    if args.group is None:
        inv = invariants_of(symmetric_generators(args.n))
    else:
        G = parse_group_spec(args.group)
        if args.n is None:
            reg = regular_rep(G)
            inv = invariants_of([reg[g] for g in G.generators()])
        elif args.n * G.order <= 60:
            inv = invariants_of(product_generators(args.n, G))
        else:
            inv = product_invariants(args.n, G)
    _emit_json(args, inv.as_dict())


def cmd_verify_index(args):
    from .malle import verify_ind_inequalities

    rep = verify_ind_inequalities(args.n, args.max_order)
    _emit_json(args, rep.as_dict())


def cmd_delta(args):
    from .malle import delta_constant
    from .nilpotent import parse_group_spec

    res = delta_constant(args.n, parse_group_spec(args.group))
    _emit_json(args, res.as_dict())


def cmd_enum_cubic(args):
    from .fields_q.cubic import enumerate_cubic

    fields = enumerate_cubic(args.max_disc, threads=args.threads)
    rows = [[k.degree, k.disc, k.ram.serialize(), int(k.is_cyclic)] for k in fields]
    _emit_csv(args, ["degree", "disc", "ram", "cyclic"], rows, f"cubic bound={args.max_disc}")


def cmd_enum_cyclic(args):
    from .fields_q.cyclic import enumerate_cyclic

    fields = enumerate_cyclic(args.ell, args.max_disc)
    rows = [[k.degree, k.disc, k.ram.serialize(), k.conductor, k.character_index] for k in fields]
    _emit_csv(args, ["degree", "disc", "ram", "conductor", "character_index"], rows, f"cyclic{args.ell}")


def _cubics(args, bound: int):
    from .errors import InvalidInput
    from .fields_q.corpus import cubic_corpus, ingest_field_table

    if args.cubics:
        corp = ingest_field_table(args.cubics)
        if corp.kind != "cubic":
            raise InvalidInput(f"{args.cubics} holds a {corp.kind} table, not cubic fields")
        return corp
    return cubic_corpus(bound, threads=args.threads)


def cmd_count_pairs(args):
    from .arith import iroot
    from .disc_model import LocalTable
    from .errors import InvalidInput
    from .fields_q.pairs import count_pairs, sample_points

    lo = args.min_X if args.min_X is not None else max(1, args.max_X // 1000)
    if not 1 <= lo <= args.max_X:
        raise InvalidInput("need 1 <= --min-X <= --max-X")
    if args.samples < 1:
        raise InvalidInput("--samples must be positive")
    table = None
    if args.mode == "table":
        if not args.table:
            raise InvalidInput("--mode table needs --table <csv>")
        table = LocalTable.from_csv(args.table)
    cubics = _cubics(args, iroot(args.max_X, 3))
    xs = sample_points(lo, args.max_X, args.samples)
    rows = count_pairs(args.ell, xs, cubics, mode=args.mode, table=table, threads=args.threads)
    _emit_csv(args, ["X", "lower_count", "upper_count", "gap"],
              [[r.X, r.lower_count, r.upper_count, f"{r.gap:.6f}"] for r in rows])


def cmd_m3q(args):
    from .fields_q.pairs import M3q

    cubics = _cubics(args, args.max_X)
    _emit_json(args, {"q": args.q, "X": args.max_X, "count": M3q(args.q, args.max_X, cubics)})


def cmd_kp_count(args):
    from .errors import InvalidInput
    from .kp_shell import ShellConfig, uniformity_ratio
    from .nilpotent import parse_group_spec
    from .fields_q.pairs import sample_points

    G = parse_group_spec(args.group)
    cfg = ShellConfig(G, args.max_X, args.t, frozenset(args.exclude or ()))
    if args.samples < 1:
        raise InvalidInput("--samples must be positive")
    lo = args.min_X if args.min_X is not None else min(args.max_X, 100)
    xs = sample_points(lo, args.max_X, args.samples) if args.samples > 1 else [args.max_X]
    rows = uniformity_ratio(cfg, args.q, xs, args.epsilon)
    _emit_csv(args, ["X", "q", "count", "ratio"],
              [[r.X, r.q, r.count, f"{r.ratio:.10g}"] for r in rows])


def cmd_az(args):
    import math
    from .counting import A_z_many
    from .errors import InvalidInput
    from .fields_q.pairs import sample_points

    if args.z < 1:
        raise InvalidInput("--z must be a positive integer")
    lo = args.min_x if args.min_x is not None else min(args.max_x, 10 ** 4)
    if lo < 2:
        raise InvalidInput("--min-x must be at least 2")
    xs = sample_points(lo, args.max_x, args.samples)
    vals = A_z_many(xs, args.ell, args.z, args.exclude or ())
    rows = []
    for x, a in zip(xs, vals):
        norm = a / (x * math.log(x) ** (args.z / (args.ell - 1) - 1))
        rows.append([x, a, f"{norm:.10g}"])
    _emit_csv(args, ["x", "A_z", "normalized"], rows)


def cmd_fit(args):
    from .counting import loglog_fit
    from .errors import InvalidInput

    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {args.input}: {exc.strerror}") from None
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    samples = []
    if lines:
        rd = csv.DictReader(lines)
        cols = rd.fieldnames or []
        xcol = next((c for c in cols if c.strip() in ("X", "x")), None)
        ncol = args.column or next((c for c in cols if c.strip() in ("count", "lower_count", "A_z")), None)
        if xcol is None or ncol is None or ncol not in cols:
            raise InvalidInput("CSV must have an X column and a count column")
        for row in rd:
            try:
                x, n = float(row[xcol]), float(row[ncol])
            except (TypeError, ValueError):
                raise InvalidInput(f"non-numeric row {row}") from None
            if (args.min_X is None or x >= args.min_X) and (args.max_X is None or x <= args.max_X):
                samples.append((x, n))
    res = loglog_fit(samples)
    _emit_json(args, {"samples": len(samples), **res.as_dict()})


def cmd_ingest(args):
    from .fields_q.corpus import ingest_field_table

    corp = ingest_field_table(args.input, args.format)
    noncyc = sum(1 for r in corp.records if not r.is_cyclic)
    _emit_json(args, {"kind": corp.kind, "bound": corp.bound, "fields": len(corp),
                      "non_cyclic": noncyc})


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mallestat", description="Malle-type counting for S_n x G over Q.")
    p.add_argument("--version", action="version", version=f"mallestat {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, threads=False, out=True):
        if out:
            sp.add_argument("--out", help="write the artifact here instead of stdout")
        if threads:
            sp.add_argument("--threads", type=int, default=1, help="worker processes")

    s = sub.add_parser("invariants", help="a and b of a permutation group")
    s.add_argument("--group", help="C<k> | AxB | @cayley.json")
    s.add_argument("--n", type=int, help="use S_n (times G when --group is given)")
    common(s)
    s.set_defaults(func=cmd_invariants)

    v = sub.add_parser("verify", help="inequality sweeps").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    s = v.add_parser("index", help="index inequalities for S_n x G")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--max-order", type=int_arg, required=True)
    common(s)
    s.set_defaults(func=cmd_verify_index)

    s = sub.add_parser("delta", help="the exponent constant delta")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--group", required=True)
    common(s)
    s.set_defaults(func=cmd_delta)

    e = sub.add_parser("enum", help="field enumeration").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    s = e.add_parser("cubic")
    s.add_argument("--max-disc", type=int_arg, required=True)
    common(s, threads=True)
    s.set_defaults(func=cmd_enum_cubic)
    s = e.add_parser("cyclic")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--max-disc", type=int_arg, required=True)
    common(s)
    s.set_defaults(func=cmd_enum_cyclic)

    c = sub.add_parser("count", help="pair counts").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    s = c.add_parser("pairs")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--max-X", type=int_arg, required=True)
    s.add_argument("--min-X", type=int_arg)
    s.add_argument("--samples", type=int, default=13)
    s.add_argument("--mode", choices=("bracket", "table"), default="bracket")
    s.add_argument("--table", help="local exponent CSV p,codeK,codeL,exponent")
    s.add_argument("--cubics", help="cubic field CSV to use instead of enumerating")
    common(s, threads=True)
    s.set_defaults(func=cmd_count_pairs)

    s = sub.add_parser("m3q", help="cubics totally ramified at every p | q")
    s.add_argument("--q", type=int_arg, required=True)
    s.add_argument("--max-X", type=int_arg, required=True)
    s.add_argument("--cubics")
    common(s, threads=True)
    s.set_defaults(func=cmd_m3q)

    k = sub.add_parser("kp", help="combinatorial shell").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    s = k.add_parser("count")
    s.add_argument("--group", required=True)
    s.add_argument("--q", type=int_list, required=True, help="comma-separated squarefree moduli")
    s.add_argument("--max-X", type=int_arg, required=True)
    s.add_argument("--min-X", type=int_arg)
    s.add_argument("--samples", type=int, default=1)
    s.add_argument("--t", type=int, default=0)
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--exclude", type=int_list)
    common(s)
    s.set_defaults(func=cmd_kp_count)

    s = sub.add_parser("az", help="weighted squarefree sums")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--z", type=int, required=True)
    s.add_argument("--max-x", type=int_arg, required=True)
    s.add_argument("--min-x", type=int_arg)
    s.add_argument("--samples", type=int, default=5)
    s.add_argument("--exclude", type=int_list)
    common(s)
    s.set_defaults(func=cmd_az)

    s = sub.add_parser("fit", help="log-log slope of a count CSV")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--column")
    s.add_argument("--min-X", type=float)
    s.add_argument("--max-X", type=float)
    common(s)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("ingest", help="validate a field table")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--format", default="csv")
    common(s)
    s.set_defaults(func=cmd_ingest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    try:
        args.func(args)
    except MallestatError as exc:
        sys.stderr.write(f"mallestat: error: {exc}\n")
        return EXIT_INVALID
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
