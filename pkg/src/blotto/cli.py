"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 certification failure, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from .experiments import TABLE1, BenchRow, SweepRow, bench, sweep, sweep_game
from .formulation import SizeLimitError, build_maxmin_lp, constraint_census
from .game import GameError, GameSpec, load_game
from .lp import LPError, LPStallError
from .oracle import FAMILIES, oracle_sweep, write_sweep_csv
from .solver import SolverFailure, read_strategy, solve_game, strategy_document
from .best_response import certify

EXIT_OK, EXIT_INPUT, EXIT_CERT, EXIT_SOLVER = 0, 1, 2, 3
SOLVER_ERRORS = (SolverFailure, LPStallError, LPError, RuntimeError)

log = logging.getLogger("blotto")


class InputError(Exception):
    pass


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _a_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise InputError(f"--a-range must look like LO:HI, got {text!r}") from None
    if lo > hi or lo < 0:
        raise InputError(f"empty or negative A range {text!r}")
    return range(lo, hi + 1)


def _game_from_args(args) -> GameSpec:
    if args.game:
        return load_game(args.game)
    if None in (args.k, args.a, args.b):
        raise InputError("give either --game PATH or all of --k, --a, --b")
    return sweep_game(args.k, args.a, args.b, args.payoff, args.seed)


def cmd_solve(args) -> int:
    spec = _game_from_args(args)
    result = solve_game(spec, args.player, solver=args.solver)
    doc = strategy_document(result)
    out, close = _open_out(args.out)
    try:
        json.dump(doc, out, indent=2)
        out.write("\n")
    finally:
        if close:
            out.close()
    print(f"value {result.value:.9g} for player {args.player}, support {result.support_size}, "
          f"{result.certificate.describe()}", file=sys.stderr)
    return EXIT_OK if result.certificate.passed else EXIT_CERT


def cmd_verify(args) -> int:
    spec = _game_from_args(args)
    stored = read_strategy(args.strategy, spec)
    cert = certify(stored.value, stored.marginals, spec)
    print(cert.describe(), file=sys.stderr)
    if "pass" in stored.certificate and bool(stored.certificate["pass"]) != cert.passed:
        print("stored verdict differs from the recomputed one", file=sys.stderr)
    return EXIT_OK if cert.passed else EXIT_CERT


def _stream_rows(rows, header, args) -> int:
    """Write rows as they arrive so a failure keeps the finished prefix."""
    out, close = _open_out(args.out)
    status = EXIT_OK
    try:
        w = csv.writer(out)
        w.writerow(header)
        out.flush()
        try:
            for row in rows:
                w.writerow(row.csv_row())
                out.flush()
                if not row.certified:
                    status = EXIT_CERT
        except SOLVER_ERRORS as exc:
            print(f"solver failure: {exc}", file=sys.stderr)
            return EXIT_SOLVER
    finally:
        if close:
            out.close()
    return status


def cmd_sweep(args) -> int:
    if None in (args.k, args.b) or args.a_range is None:
        raise InputError("sweep needs --k, --b and --a-range")
    a_values = _a_range(args.a_range)
    rows = sweep(args.k, args.b, a_values, args.payoff, args.seed, args.solver, args.workers)
    return _stream_rows(rows, SweepRow.HEADER, args)


def _bench_triples(args) -> list:
    if args.config is None:
        return [t[:3] for t in TABLE1]
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read bench config: {exc}") from None
    if isinstance(data, dict):
        data = data.get("triples")
    if not isinstance(data, list) or not all(isinstance(t, list) and len(t) == 3 for t in data):
        raise InputError("bench config must be a list of [K, A, B] triples (or {\"triples\": [...]})")
    return [tuple(int(x) for x in t) for t in data]


def cmd_bench(args) -> int:
    rows = bench(_bench_triples(args), args.solver, args.workers)
    return _stream_rows(rows, BenchRow.HEADER, args)


def cmd_oracle_sweep(args) -> int:
    records = oracle_sweep(args.max_k, args.max_n, FAMILIES, args.seed, args.workers)
    out, close = _open_out(args.out)
    try:
        write_sweep_csv(records, out)
    finally:
        if close:
            out.close()
    worst = max((r.gap for r in records), default=0.0)
    print(f"{len(records)} instances, largest gap {worst:.3g}", file=sys.stderr)
    return EXIT_OK


def cmd_census(args) -> int:
    spec = _game_from_args(args)
    census = constraint_census(build_maxmin_lp(spec, args.player))
    out, close = _open_out(args.out)
    try:
        w = csv.writer(out)
        w.writerow(census.CSV_HEADER + tuple(census.families))
        w.writerow(census.csv_row() + tuple(census.families.values()))
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_mrcb_solve(args) -> int:
    from .mrcb import MrcbSolverFailure, load_mrcb, solve_mrcb

    if not args.game:
        raise InputError("mrcb-solve needs --game PATH")
    spec = load_mrcb(args.game)
    try:
        result = solve_mrcb(spec, args.player, solver=args.solver)
    except MrcbSolverFailure as exc:
        raise SolverFailure(str(exc)) from None
    out, close = _open_out(args.out)
    try:
        json.dump(result.document(), out, indent=2)
        out.write("\n")
    finally:
        if close:
            out.close()
    print(f"value {result.value:.9g} for player {args.player}, support {len(result.support)}, "
          f"gap {result.gap:.3g}", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_CERT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blotto", description="Exact maxmin strategies for Colonel Blotto games.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, game=True, player=True):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--solver", choices=("embedded", "external"), default="embedded")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0, help="seed for random tabular payoffs")
        if game:
            sp.add_argument("--game", help="game JSON file")
            sp.add_argument("--k", type=int, help="battlefields")
            sp.add_argument("--a", type=int, help="troops of player A")
            sp.add_argument("--b", type=int, help="troops of player B")
            sp.add_argument("--payoff", choices=("auctionary", "tabular"), default="auctionary")
        if player:
            sp.add_argument("--player", choices=("A", "B"), default="A")

    sp = sub.add_parser("solve", help="solve one game and write its strategy file")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="re-certify a stored strategy file")
    common(sp)
    sp.add_argument("strategy", help="strategy JSON written by solve")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="payoff of A over a range of budgets (CSV)")
    common(sp, player=False)
    sp.add_argument("--a-range", help="LO:HI, inclusive")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("bench", help="constraint counts and solve times (CSV)")
    common(sp, game=False, player=False)
    sp.add_argument("--config", help="JSON list of [K, A, B]; default: the reference benchmark triples")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("oracle-sweep", help="compare the LP with brute force on small games (CSV)")
    common(sp, game=False, player=False)
    sp.add_argument("--max-k", type=int, default=3)
    sp.add_argument("--max-n", type=int, default=6)
    sp.set_defaults(func=cmd_oracle_sweep)

    sp = sub.add_parser("census", help="LP row and column counts (CSV)")
    common(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("mrcb-solve", help="solve a multi-resource game")
    common(sp)
    sp.set_defaults(func=cmd_mrcb_solve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage; that is an input error here
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GameError, InputError, SizeLimitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SOLVER_ERRORS as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
