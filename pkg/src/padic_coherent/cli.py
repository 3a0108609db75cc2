"""Command line driver.

    padic-coherent pair --p 2 --I 0 --J 0,1
    padic-coherent pair --p 2 --delta "0(1)" --J 0,1
    padic-coherent pair --cascade tree.json --I 0,1
    padic-coherent verify theorem --p 2 --depth 5 --seed 7
    padic-coherent sweep --p 2 --I 0 --J 0,1 --kmax 20
    padic-coherent random-cascade --p 3 --depth 4 --seed 1 --out tree.json

Exit codes: 0 ok, 1 verification failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .coherent import degree_series, indicator_state
from .lc_space import CascadeTree, CascadeViolationError, random_cascade
from .limits import (
    disk_value,
    pairing_coherent,
    pairing_delta,
    pairing_indicators,
    sweep,
)
from .padic import PAdicPoint, PrimeError, Word, check_prime, words_up_to
from .scalars import format_rational, parse_rational, simplify, to_json_scalar
from .verify import SUITES, SuiteResult, run_suite

DEPTH_CAP = 64

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad input; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    p: int
    depth: int
    seed: int
    t: Fraction | None
    output: str

    def __post_init__(self) -> None:
        try:
            check_prime(self.p)
        except PrimeError as exc:
            raise UsageError(f"--p: {exc}") from None
        if not 0 <= self.depth <= DEPTH_CAP:
            raise UsageError(f"--depth: must be in [0, {DEPTH_CAP}], got {self.depth}")
        if self.t is not None and not 0 < self.t < 1:
            raise UsageError(f"--t: must lie in (0, 1), got {self.t}")
        if self.output not in ("json", "csv", "text"):
            raise UsageError(f"--format: unknown format {self.output!r}")
        if not 0 <= self.seed < 2**64:
            raise UsageError(f"--seed: must be a 64-bit unsigned integer, got {self.seed}")


def _config(args: argparse.Namespace, default_format: str) -> RunConfig:
    t = None
    if getattr(args, "t", None) is not None:
        try:
            t = parse_rational(args.t)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--t: expected num/den, got {args.t!r}") from None
    return RunConfig(args.p, args.depth, args.seed, t, args.format or default_format)


def _word(text: str | None, p: int, flag: str) -> Word:
    if text is None:
        raise UsageError(f"{flag}: required")
    try:
        return Word.parse(text, p)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _load_tree(path: str) -> CascadeTree:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"--cascade: cannot read {path}: {exc.strerror}") from None
    try:
        return CascadeTree.loads(text)
    except CascadeViolationError as exc:
        raise UsageError(f"--cascade: {exc}") from None
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"--cascade: invalid cascade file: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_pair(args: argparse.Namespace) -> int:
    cfg = _config(args, "json")
    extra = {}
    if args.cascade:
        tree = _load_tree(args.cascade)
        i = _word(args.I, tree.p, "--I")
        if len(i) > tree.depth:
            raise UsageError(f"--I: word has length {len(i)} but the cascade depth is {tree.depth}")
        value = pairing_coherent(tree, i)
        extra["disk_value"] = to_json_scalar(disk_value(tree, i))
    elif args.delta is not None:
        try:
            x = PAdicPoint.parse(args.delta, cfg.p)
        except ValueError as exc:
            raise UsageError(f"--delta: {exc}") from None
        value = pairing_delta(x, _word(args.J, cfg.p, "--J"))
    else:
        value = pairing_indicators(_word(args.I, cfg.p, "--I"), _word(args.J, cfg.p, "--J"))
    payload = value.to_json() | extra
    if cfg.t is not None:
        payload["t"] = format_rational(cfg.t)
        payload["value_at_t"] = to_json_scalar(value.evaluate(cfg.t))
    if cfg.output == "text":
        lines = [f"{k}: {v}" for k, v in payload.items()]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps(payload) + "\n", args.out)
    return EXIT_OK


def _cascade_file_check(tree: CascadeTree) -> SuiteResult:
    res = SuiteResult("cascade-file", "nodes")
    for w in words_up_to(tree.p, min(tree.depth, 8)):
        got = disk_value(tree, w)
        res.record(got == tree[w], I=w, expected=tree[w], got=got)
    return res


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args, "text")
    tree = _load_tree(args.cascade) if args.cascade else None
    if args.suite == "all":
        names = list(SUITES)
    elif args.suite in SUITES:
        names = [args.suite]
    else:
        raise UsageError(f"suite: unknown suite {args.suite!r}; choose from {', '.join(SUITES)}, all")
    results = [run_suite(name, cfg.p, cfg.depth, cfg.seed) for name in names]
    if tree is not None:
        results.append(_cascade_file_check(tree))
    if cfg.output == "json":
        _emit(json.dumps({"p": cfg.p, "depth": cfg.depth, "seed": cfg.seed,
                          "suites": [r.to_json() for r in results]}, indent=1) + "\n", args.out)
    else:
        lines = [r.summary() for r in results]
        for r in results:
            if r.failure:
                lines.append(f"first counterexample ({r.name}): {json.dumps(r.failure)}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


SWEEP_COLUMNS = (
    "k", "t", "truncated_value", "value", "scaled_value", "limit", "abs_error",
    "error_bound", "t_decimal", "truncated_value_decimal", "scaled_value_decimal",
    "abs_error_decimal",
)


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _config(args, "csv")
    i, j = _word(args.I, cfg.p, "--I"), _word(args.J, cfg.p, "--J")
    if cfg.depth < max(len(i), len(j)):
        raise UsageError(f"--depth: truncation {cfg.depth} shorter than the words")
    if args.kmax < args.kmin or args.kmin < 1:
        raise UsageError("--kmax: need 1 <= kmin <= kmax")
    value = pairing_indicators(i, j)
    # truncated Fock product, from explicit states rather than the closed form
    series = degree_series(indicator_state(i, None, cfg.depth), indicator_state(j, None, cfg.depth))
    truncated = []
    for k in range(args.kmin, args.kmax + 1):
        t = 1 - Fraction(1, 2**k)
        total = Fraction(0)
        for s in reversed(series):
            total = total * t + s
        truncated.append(simplify(total))
    rows = sweep(value, args.kmax, args.kmin, truncated)
    if cfg.output == "json":
        data = [
            {
                "k": r.k, "t": format_rational(r.t),
                "truncated_value": to_json_scalar(r.truncated_value),
                "value": to_json_scalar(r.value),
                "scaled_value": to_json_scalar(r.scaled_value),
                "limit": to_json_scalar(r.limit),
                "abs_error": format_rational(r.abs_error),
                "error_bound": format_rational(r.error_bound),
            }
            for r in rows
        ]
        _emit(json.dumps({"pairing": value.to_json(), "depth": cfg.depth, "rows": data}) + "\n", args.out)
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in rows:
        writer.writerow([
            r.k, format_rational(r.t), format_rational(r.truncated_value), format_rational(r.value),
            format_rational(r.scaled_value), format_rational(r.limit), format_rational(r.abs_error),
            format_rational(r.error_bound), f"{float(r.t):.17g}", f"{float(r.truncated_value):.17g}",
            f"{float(r.scaled_value):.17g}",
            f"{float(r.abs_error):.17g}",
        ])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_random_cascade(args: argparse.Namespace) -> int:
    cfg = _config(args, "json")
    if args.dense_depth is not None and args.dense_depth < 0:
        raise UsageError("--dense-depth: must be >= 0")
    if args.dense_depth is None and cfg.p ** cfg.depth > 10**6:
        raise UsageError(f"--depth: a dense tree of depth {cfg.depth} has too many nodes; pass --dense-depth")
    tree = random_cascade(cfg.p, cfg.depth, cfg.seed, complex_values=args.complex, dense_depth=args.dense_depth)
    _emit(json.dumps(tree.to_json()) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padic-coherent",
        description="Free coherent states and distributions on the p-adic integers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, depth: int) -> None:
        sp.add_argument("--p", type=int, default=2, help="prime (default 2)")
        sp.add_argument("--depth", type=int, default=depth, help=f"depth / truncation degree (default {depth})")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--t", default=None, help="lambda^2/p as num/den")
        sp.add_argument("--out", default=None, help="write output to this file")
        sp.add_argument("--format", choices=("json", "csv", "text"), default=None)

    sp = sub.add_parser("pair", help="pairing of two coherent states and its regularized limit")
    common(sp, 5)
    sp.add_argument("--I", default=None, help='word, e.g. "0,1" ("" is Z_p)')
    sp.add_argument("--J", default=None, help="second word")
    sp.add_argument("--delta", default=None, help='eventually periodic point, e.g. "1,0(0,1)"')
    sp.add_argument("--cascade", default=None, help="CascadeTree JSON file")
    sp.set_defaults(func=cmd_pair)

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp, 5)
    sp.add_argument("suite", help=f"one of {', '.join(SUITES)}, all")
    sp.add_argument("--cascade", default=None, help="also check this CascadeTree JSON file")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="(1-t)*value(t) at t = 1 - 2^-k as CSV")
    common(sp, DEPTH_CAP)
    sp.add_argument("--I", default=None)
    sp.add_argument("--J", default=None)
    sp.add_argument("--kmin", type=int, default=2)
    sp.add_argument("--kmax", type=int, default=20)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("random-cascade", help="write a seeded random CascadeTree as JSON")
    common(sp, 4)
    sp.add_argument("--complex", action="store_true", help="complex values")
    sp.add_argument("--dense-depth", type=int, default=None,
                    help="levels below this pass each value to a single child")
    sp.set_defaults(func=cmd_random_cascade)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
