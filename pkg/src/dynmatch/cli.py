"""Command-line entry point: stream generation, replay, validation suites."""

from __future__ import annotations

import argparse
import json
import sys

from .core import InstanceConfig
from .replay import replay, write_summary
from .streams import GENERATORS, StreamSpec, generate_stream, read_stream, write_stream
from .suites import SUITES, run_validation


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynmatch",
        description="Fully dynamic better-than-2-approximate matching engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an oblivious update stream")
    gen.add_argument("--generator", required=True, choices=GENERATORS)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--delta", type=int, required=True)
    gen.add_argument("--len", dest="length", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0, help="adversary seed")
    gen.add_argument("--out", required=True)
    gen.add_argument("--target-edges", type=int, default=None)
    gen.add_argument("--window", type=int, default=None)

    run = sub.add_parser("run", help="replay a stream through the pipeline")
    run.add_argument("--stream", required=True)
    run.add_argument("--levels", type=int, required=True)
    run.add_argument("--delta", type=int, required=True)
    run.add_argument("--seed", type=int, default=0, help="algorithm seed")
    run.add_argument("--n", type=int, default=None,
                     help="vertex count (default: inferred from the stream)")
    run.add_argument("--sample-p", type=float, default=0.03)
    run.add_argument("--oracle-every", type=int, default=100)
    run.add_argument("--out", default=None, help="metrics JSONL path")
    run.add_argument("--summary", default=None, help="summary JSON path")

    val = sub.add_parser("validate", help="run a named validation suite")
    val.add_argument("--suite", required=True, choices=sorted(SUITES))
    val.add_argument("--seeds", type=int, default=None)
    val.add_argument("--n", type=int, default=None)
    val.add_argument("--delta", type=int, default=None)
    val.add_argument("--levels", type=int, default=None)
    val.add_argument("--updates", type=int, default=None)
    val.add_argument("--trials", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "gen":
        params = {}
        if args.target_edges is not None:
            params["target_edges"] = args.target_edges
        if args.window is not None:
            params["window"] = args.window
        spec = StreamSpec(args.generator, args.n, args.delta, args.length,
                          args.seed, params)
        events = generate_stream(spec)
        write_stream(events, args.out)
        print(f"wrote {len(events)} events to {args.out}")
        return 0

    if args.command == "run":
        events = read_stream(args.stream)
        n = args.n
        if n is None:
            n = 1 + max((max(ev.u, ev.v) for ev in events), default=0)
        config = InstanceConfig(
            n=n,
            delta_cap=args.delta,
            levels=args.levels,
            sample_p=args.sample_p,
            algo_seed=args.seed,
        )
        summary = replay(
            events,
            config,
            oracle_every=args.oracle_every,
            metrics_path=args.out,
        )
        if args.summary:
            write_summary(summary, args.summary)
        print(json.dumps(summary, indent=2, sort_keys=True))
        return 0

    if args.command == "validate":
        params = {
            key: getattr(args, key)
            for key in ("seeds", "n", "delta", "levels", "updates", "trials")
            if getattr(args, key) is not None
        }
        report = run_validation(args.suite, **params)
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
        return 0 if report.get("passed") else 1

    return 2


if __name__ == "__main__":
    sys.exit(main())
