"""Command line interface: ``sigmaheat <verb> --genus N [options]``.

Exit status is 0 when everything requested passed, 1 when a check failed
and 2 on bad usage (unknown verb, invalid genus or index, bad flags).
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from .construct import build_L, build_Q, context, h_from_generating
from .derivations import build_script_l, compute_w
from .errors import FixtureParseError, IndexRangeError, InvalidGenusError
from .verify import CHECKS, bracket_expansion, combine_q, run_checks
from .weyl import q_commutator


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _positive(text: str) -> int:
    try:
        g = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"genus must be an integer, got {text!r}") from exc
    if g < 1:
        raise argparse.ArgumentTypeError(f"genus must be positive, got {g}")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", type=_positive, required=True)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--only", type=_int_list, default=None, metavar="K1,K2,...",
                        help="restrict to these k (operators with subscript 2k)")
    common.add_argument("--out", default=None, metavar="PATH", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="sigmaheat", description="Heat-equation operators for hyperelliptic sigma functions.")
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("gen", parents=[common], help="print L_2k, H_2k and Q_2k")
    v = sub.add_parser("verify", parents=[common], help="run the verification suite (JSON lines)")
    v.add_argument("--checks", type=lambda s: s.split(","), default=None,
                   help="comma-separated subset of: " + ", ".join(CHECKS))
    b = sub.add_parser("bracket", parents=[common], help="[Q_2i, Q_2j] and its expansion over the basis")
    b.add_argument("i", type=int)
    b.add_argument("j", type=int)
    sub.add_parser("derive", parents=[common], help="derivation operators and the w_{2k,j}")
    f = sub.add_parser("fixtures", parents=[common], help="validate the bundled tables")
    f.add_argument("--root", default=None, help="fixture directory (default: the bundled one)")
    return parser


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _ks(ctx, only):
    return [ctx.check_k(k) for k in only] if only is not None else list(ctx.k_range)


def cmd_gen(args, out) -> int:
    ctx = context(args.genus)
    for k in _ks(ctx, args.only):
        L, H, Q = build_L(ctx, k), h_from_generating(ctx, k), build_Q(ctx, k)
        if args.format == "json":
            out.write(json.dumps({"k": k, "L": L.to_json(), "H": H.to_json(), "Q": Q.to_json()}) + "\n")
        else:
            out.write(f"L_{2 * k} = {L}\nH_{2 * k} = {H}\nQ_{2 * k} = {Q}\n\n")
    return 0


def cmd_verify(args, out) -> int:
    try:
        entries = run_checks(args.genus, checks=args.checks, only=args.only)
    except ValueError as exc:
        if isinstance(exc, (InvalidGenusError, IndexRangeError)):
            raise
        raise UsageError(str(exc)) from exc
    for e in entries:
        if args.format == "json":
            out.write(json.dumps(e) + "\n")
        else:
            detail = {k: v for k, v in e.items() if k not in ("check", "genus", "status")}
            out.write(f"{e['status']:8} {e['check']:18} {json.dumps(detail)}\n")
    return 0 if entries[-1]["status"] == "pass" else 1


def cmd_bracket(args, out) -> int:
    ctx = context(args.genus)
    i, j = ctx.check_k(args.i), ctx.check_k(args.j)
    qi, qj = build_Q(ctx, i), build_Q(ctx, j)
    br = q_commutator(qi, qj)
    coeffs = list(bracket_expansion(ctx, i, j))
    ok = (br - combine_q(ctx, coeffs)).is_zero()
    named = {f"Q{2 * n}": c for n, c in enumerate(coeffs) if c}
    if args.format == "json":
        out.write(json.dumps({
            "genus": ctx.g, "i": i, "j": j, "bracket": br.to_json(),
            "expansion": {k: str(v) for k, v in named.items()}, "status": "pass" if ok else "fail",
        }) + "\n")
    else:
        out.write(f"[Q_{2 * i}, Q_{2 * j}] = {br.render() or '0'}\n")
        rhs = " + ".join(f"({v}) {k}" for k, v in named.items()) or "0"
        out.write(f"  = {rhs}   [{'pass' if ok else 'fail'}]\n")
    return 0 if ok else 1


def cmd_derive(args, out) -> int:
    ctx = context(args.genus)
    for k in _ks(ctx, args.only):
        op = build_script_l(ctx, k)
        ws = {j: compute_w(ctx, k, j) for j in ctx.z_indices}
        if args.format == "json":
            out.write(json.dumps({
                "k": k, "scriptL": op.to_json(),
                "w": {str(j): w.to_json() for j, w in ws.items()},
            }) + "\n")
        else:
            out.write(f"scriptL_{2 * k} = {op}\n")
            for j, w in ws.items():
                out.write(f"w_{{{2 * k},{j}}} = {w.render() or '0'}\n")
            out.write("\n")
    return 0


def cmd_fixtures(args, out) -> int:
    from .fixtureset import available_genera, load_fixtures

    if args.genus not in available_genera(args.root):
        raise UsageError(f"no tables for genus {args.genus}")
    fs = load_fixtures(args.genus, args.root)
    checks = ["golden", "derivations"]
    entries = run_checks(args.genus, checks=checks, only=args.only, fixtures_root=args.root)
    head = {"check": "fixtures", "genus": args.genus, "status": "pass", "blocks": len(fs.blocks),
            "overlay_entries": len(fs.overlay), "kinds": sorted(fs.kinds())}
    for e in [head] + entries:
        if args.format == "json":
            out.write(json.dumps(e) + "\n")
        else:
            detail = {k: v for k, v in e.items() if k not in ("check", "genus", "status")}
            out.write(f"{e['status']:8} {e['check']:18} {json.dumps(detail)}\n")
    return 0 if entries[-1]["status"] == "pass" else 1


COMMANDS = {"gen": cmd_gen, "verify": cmd_verify, "bracket": cmd_bracket, "derive": cmd_derive, "fixtures": cmd_fixtures}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _output(args.out) as out:
            return COMMANDS[args.verb](args, out)
    except (InvalidGenusError, IndexRangeError, UsageError) as exc:
        print(f"sigmaheat: error: {exc}", file=sys.stderr)
        return 2
    except FixtureParseError as exc:
        print(f"sigmaheat: fixture error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"sigmaheat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
