"""Command-line front end.  Every command prints one JSON line on stdout.

Exit codes: 0 success, 2 input error, 3 verification mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cominuscule as cm
from . import detperm, fkt, holographic as hg, joins
from .exact import DimensionError, OpCounter, ResourceLimitError, det_exact, format_scalar, parse_matrix

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH = 0, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_matrix(path: str):
    try:
        return parse_matrix(_read(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _family_from(text: str, x) -> cm.PairingFamily:
    """'name' or 'name:size,size'; sizes are inferred from the x chart when omitted."""
    name, _, sizes = text.partition(":")
    name = name.lower()
    if name not in cm.FAMILY_NAMES:
        raise InputError(f"unknown family {name!r}; choose from {', '.join(cm.FAMILY_NAMES)}")
    if sizes:
        try:
            values = [int(s) for s in sizes.split(",")]
            if name == "veronese" and len(values) == 1:
                values.append(x.cols)
            return cm.make_family(name, *values)
        except ValueError as exc:
            raise InputError(f"family {text!r}: {exc}") from None
    rows, cols = x.shape
    if name == "grassmannian":
        return cm.Grassmannian(rows, rows + cols)
    if name in ("spinor", "lagrangian"):
        return cm.make_family(name, rows)
    if name == "segre":
        return cm.Segre(cols, rows)
    raise InputError("veronese needs its degree, e.g. 'veronese:3' (the chart only fixes p)")


def cmd_pair(args) -> tuple[dict, bool]:
    x = _load_matrix(args.xfile)
    y = _load_matrix(args.yfile)
    fam = _family_from(args.family, x)
    counter = OpCounter() if args.count_ops else None
    fast = cm.fast_pair(fam, x, y, counter)
    out = {"family": fam.name}
    ok = True
    if args.verify:
        naive = cm.naive_pair(cm.expand(fam, x), cm.expand_dual(fam, y))
        ok = fast == naive
        out.update(fast=format_scalar(fast), naive=format_scalar(naive), agree=ok)
    else:
        out["value"] = format_scalar(fast)
    if counter is not None:
        out.update(multiplications=counter.multiplications, additions=counter.additions)
    return out, ok


def cmd_nae(args) -> tuple[dict, bool]:
    try:
        f = hg.NAEFormula.from_json(_load_json(args.formula))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{args.formula}: {exc}") from None
    count = hg.pairing_count(f)
    out = {"count": count}
    ok = True
    if args.transformed:
        ok &= hg.pairing_count_transformed(f) == count
    if args.brute:
        ok &= hg.brute_force_count(f) == count
    if args.transformed or args.brute:
        out["agree"] = ok
    return out, ok


def cmd_fkt(args) -> tuple[dict, bool]:
    try:
        g = fkt.EmbeddedGraph.from_json(_load_json(args.graph))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{args.graph}: {exc}") from None
    count = fkt.fkt_count(g)
    out = {"count": format_scalar(count)}
    ok = True
    if args.brute:
        ok = fkt.brute_force_matchings(g) == count
        out["agree"] = ok
    return out, ok


def cmd_det(args) -> tuple[dict, bool]:
    m = _load_matrix(args.matrix)
    if not m.is_square():
        raise InputError(f"{args.matrix}: determinant needs a square matrix, got {m.rows}x{m.cols}")
    return {"value": format_scalar(det_exact(m))}, True


def cmd_perm(args) -> tuple[dict, bool]:
    m = _load_matrix(args.matrix)
    return {"value": format_scalar(detperm.permanent_ryser(m))}, True


def cmd_taylor(args) -> tuple[dict, bool]:
    try:
        t = detperm.TangentTriple.from_text(_read(args.triple))
    except (ValueError, DimensionError) as exc:
        raise InputError(f"{args.triple}: {exc}") from None
    try:
        res = detperm.det_local_taylor(t, args.kmax)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{args.triple}: {exc}") from None
    out = {"coefficients": [format_scalar(c) for c in res.implicit], "agree": res.agree}
    return out, res.agree


def cmd_joindim(args) -> tuple[dict, bool]:
    try:
        c = joins.TreeCircuit.from_json(_load_json(args.circuit))
    except ValueError as exc:
        raise InputError(f"{args.circuit}: {exc}") from None
    if args.trials < 1:
        raise InputError(f"--trials must be at least 1, got {args.trials}")
    rep = joins.analyze_circuit(c, args.trials, args.seed)
    return {"rank": rep.rank, "expected": rep.expected, "degenerate": rep.degenerate,
            "bound_ok": rep.bound_ok}, True


def cmd_selftest(args) -> tuple[dict, bool]:
    from .acceptance import run_all

    results = run_all(sys.stderr)
    passed = [r.number for r in results if r.ok]
    failed = [r.number for r in results if not r.ok]
    return {"passed": passed, "failed": failed}, not failed


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cominpair", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pair", help="pair a primal chart with a dual chart")
    s.add_argument("family", help="grassmannian|spinor|lagrangian|segre|veronese, optionally name:sizes")
    s.add_argument("xfile")
    s.add_argument("yfile")
    s.add_argument("--verify", action="store_true", help="also compute the naive pairing and compare")
    s.add_argument("--count-ops", action="store_true", help="report arithmetic operation counts")
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("nae", help="count NAE solutions of a formula by tensor contraction")
    s.add_argument("formula")
    s.add_argument("--brute", action="store_true", help="compare with brute-force enumeration")
    s.add_argument("--transformed", action="store_true", help="compare with the Hadamard-transformed contraction")
    s.set_defaults(func=cmd_nae)

    s = sub.add_parser("fkt", help="count perfect matchings of an embedded planar graph")
    s.add_argument("graph")
    s.add_argument("--brute", action="store_true", help="compare with brute-force enumeration")
    s.set_defaults(func=cmd_fkt)

    s = sub.add_parser("det", help="exact determinant of a matrix file")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("perm", help="exact permanent of a matrix file (n <= 20)")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_perm)

    s = sub.add_parser("taylor", help="Taylor coefficients of det at a tangent triple file")
    s.add_argument("triple")
    s.add_argument("--kmax", type=int, required=True)
    s.set_defaults(func=cmd_taylor)

    s = sub.add_parser("joindim", help="dimension of the join variety of a tree circuit")
    s.add_argument("circuit")
    s.add_argument("--trials", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_joindim)

    s = sub.add_parser("selftest", help="run acceptance suites 1-9")
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, ok = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionError, ResourceLimitError, fkt.NotPlanarError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(out))
    if not ok:
        print("verification mismatch", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def main() -> None:
    sys.exit(run())
