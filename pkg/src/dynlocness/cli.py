"""Command-line entry point: ``dynlocness <subcommand> ...``.

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import formats
from .benchmark import SCALING_SIZES, BenchmarkConfig, Pattern, generate
from .colormap import write_colormap
from .detection import ReadMode, initialize
from .evaluation import community_count, evaluate_timeline
from .experiments import bench, reproduce, write_bench_csv
from .graph import DynamicGraph, GraphError
from .preference import PreferenceMeasure

log = logging.getLogger("dynlocness")

MEASURES = [m.value for m in PreferenceMeasure]


class UsageError(Exception):
    pass


def _input(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {path}")
    return p


def _output(path: str) -> Path:
    p = Path(path)
    if not p.parent.exists():
        raise UsageError(f"output directory does not exist: {p.parent}")
    return p


def cmd_generate(args) -> int:
    out_stream, out_truth = _output(args.out_stream), _output(args.out_truth)
    cfg = BenchmarkConfig(n=args.n, p_in=args.p_in, p_out=args.p_out, steps=args.steps,
                          pattern=Pattern(args.pattern), fraction=args.fraction, seed=args.seed)
    b = generate(cfg)
    if b.seed != cfg.seed:
        log.warning("seed %d produced an empty step; used seed %d", cfg.seed, b.seed)
    formats.write_stream(out_stream, b.n, b.initial_edges, b.batches)
    formats.write_timeline(out_truth, b.ground_truth)
    print(f"n={b.n} steps={cfg.steps} initial_edges={len(b.initial_edges)} "
          f"events={b.edge_event_count} seed={b.seed}")
    return 0


def cmd_detect(args) -> int:
    stream, out = _input(args.stream), _output(args.out)
    with formats.open_stream(stream) as reader, open(out, "w", encoding="ascii") as fh:
        det = initialize(DynamicGraph(reader.n, reader.initial_edges), args.measure, args.read_mode)
        snap = det.snapshot()
        formats.write_snapshot(fh, 0, snap)
        print("step,communities")
        print(f"0,{community_count(snap)}")
        for batch in reader:
            try:
                snap = det.process_step(batch)
            except GraphError as exc:
                raise formats.FormatError(str(exc), reader.block_line, str(stream)) from None
            formats.write_snapshot(fh, batch.step, snap)
            print(f"{batch.step},{community_count(snap)}")
    return 0


def cmd_evaluate(args) -> int:
    detected = formats.read_timeline(_input(args.detected))
    truth = formats.read_timeline(_input(args.truth))
    metrics = ["nmi", "nvi"] if args.metric == "both" else [args.metric]
    series = {m: evaluate_timeline(detected, truth, m) for m in metrics}
    out = open(_output(args.out), "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["step", *metrics])
        for t in range(len(truth)):
            w.writerow([t, *(f"{series[m].values[t]:.6f}" for m in metrics)])
        w.writerow(["mean", *(f"{series[m].mean:.6f}" for m in metrics)])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_colormap(args) -> int:
    timeline = formats.read_timeline(_input(args.timeline))
    write_colormap(_output(args.out), timeline)
    print(f"wrote {args.out}: {len(timeline)}x{len(timeline[0])}")
    return 0


def cmd_bench(args) -> int:
    out = _output(args.out) if args.out else None
    rows = bench(args.sizes, steps=args.steps, measure=args.measure,
                 repetitions=args.repetitions, seed=args.seed)
    if out:
        with open(out, "w", newline="") as fh:
            write_bench_csv(fh, rows)
    write_bench_csv(sys.stdout, rows)
    return 0


def cmd_reproduce(args) -> int:
    summary = reproduce(args.out_dir, seeds=args.seeds, n=args.n, steps=args.steps)
    w = csv.DictWriter(sys.stdout, fieldnames=list(summary[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(summary)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynlocness", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate an evolving benchmark with ground truth")
    p.add_argument("--pattern", choices=[x.value for x in Pattern], default="grow-shrink")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--p-in", type=float, default=0.5)
    p.add_argument("--p-out", type=float, default=0.05)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-stream", required=True)
    p.add_argument("--out-truth", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("detect", help="detect communities over an event stream")
    p.add_argument("--stream", required=True)
    p.add_argument("--measure", choices=MEASURES, default="cwcn")
    p.add_argument("--read-mode", choices=[x.value for x in ReadMode], default="sequential")
    p.add_argument("--out", required=True, help="timeline file to write")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("evaluate", help="NMI/NVI of a detected timeline against ground truth")
    p.add_argument("--detected", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--metric", choices=["nmi", "nvi", "both"], default="both")
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("colormap", help="render a timeline as a PPM image")
    p.add_argument("--timeline", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_colormap)

    p = sub.add_parser("bench", help="detection wall time across graph sizes")
    p.add_argument("--sizes", type=int, nargs="+", default=list(SCALING_SIZES))
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--measure", choices=MEASURES, default="cwcn")
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write the CSV here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("reproduce", help="full measure comparison on both patterns")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (formats.FormatError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
