"""Timing harness and the full measure-comparison experiment."""

from __future__ import annotations

import csv
import logging
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .benchmark import BenchmarkConfig, GeneratedBenchmark, Pattern, generate
from .colormap import write_colormap
from .detection import ReadMode, initialize, run
from .evaluation import count_series, evaluate_timeline
from .graph import DynamicGraph
from .preference import PreferenceMeasure

log = logging.getLogger(__name__)


@dataclass
class BenchRow:
    n: int
    events: int
    mean_seconds: float
    std_seconds: float
    runs: list[float]


def time_detection(bench: GeneratedBenchmark, measure, read_mode=ReadMode.SEQUENTIAL) -> float:
    """Wall time of initialisation plus every step; generation excluded."""
    start = time.perf_counter()
    det = initialize(DynamicGraph(bench.n, bench.initial_edges), measure, read_mode)
    for batch in bench.batches:
        det.process_step(batch)
    return time.perf_counter() - start


def bench(sizes: Sequence[int], steps: int = 10, measure="cwcn", repetitions: int = 5,
          seed: int = 0, p_in: float = 0.5, p_out: float = 0.05) -> list[BenchRow]:
    rows = []
    for n in sizes:
        b = generate(BenchmarkConfig(n=n, p_in=p_in, p_out=p_out, steps=steps, seed=seed))
        runs = [time_detection(b, measure) for _ in range(repetitions)]
        std = statistics.stdev(runs) if len(runs) > 1 else 0.0
        rows.append(BenchRow(n, b.total_edges_processed, statistics.fmean(runs), std, runs))
        log.info("n=%d events=%d mean=%.3fs", n, b.total_edges_processed, rows[-1].mean_seconds)
    return rows


def write_bench_csv(fh, rows: Iterable[BenchRow]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "events", "mean_seconds", "std_seconds"])
    for r in rows:
        w.writerow([r.n, r.events, f"{r.mean_seconds:.6f}", f"{r.std_seconds:.6f}"])


@dataclass
class RunResult:
    pattern: Pattern
    measure: PreferenceMeasure
    seed: int
    nmi: list[float]
    nvi: list[float]
    counts: list[int]


def compare_measures(pattern: Pattern | str, seeds: Iterable[int], n: int = 64,
                     steps: int = 100, p_in: float = 0.5, p_out: float = 0.05,
                     fraction: float = 0.5, measures=tuple(PreferenceMeasure),
                     read_mode=ReadMode.SEQUENTIAL):
    """Run every measure on the same seeded benchmarks.

    Returns ``(results, benchmarks, timelines)``; the last two are keyed by
    seed and ``(measure, seed)`` respectively.
    """
    pattern = Pattern(pattern)
    results: list[RunResult] = []
    benches: dict[int, GeneratedBenchmark] = {}
    timelines = {}
    for seed in seeds:
        cfg = BenchmarkConfig(n=n, p_in=p_in, p_out=p_out, steps=steps, pattern=pattern,
                              fraction=fraction, seed=seed)
        b = benches[seed] = generate(cfg)
        for m in measures:
            m = PreferenceMeasure.parse(m)
            tl = run(b.n, b.initial_edges, b.batches, m, read_mode)
            timelines[m, seed] = tl
            results.append(RunResult(
                pattern, m, seed,
                evaluate_timeline(tl, b.ground_truth, "nmi").values,
                evaluate_timeline(tl, b.ground_truth, "nvi").values,
                count_series(tl),
            ))
    return results, benches, timelines


def _mean_series(results: list[RunResult], attr: str) -> np.ndarray:
    return np.mean([getattr(r, attr) for r in results], axis=0)


def reproduce(out_dir, seeds: int = 10, n: int = 64, steps: int = 100) -> list[dict]:
    """Both patterns x four measures x ``seeds`` benchmarks.

    Writes per-step mean NMI/NVI series, a summary table and colormaps of
    the first seed (ground truth and every measure) into ``out_dir``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    for pattern in Pattern:
        log.info("pattern %s", pattern.value)
        results, benches, timelines = compare_measures(pattern, range(seeds), n=n, steps=steps)
        first = min(benches)
        write_colormap(out / f"{pattern.value}_truth.ppm", benches[first].ground_truth)
        with open(out / f"{pattern.value}_metrics.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["measure", "step", "nmi", "nvi", "communities"])
            for m in PreferenceMeasure:
                rs = [r for r in results if r.measure is m]
                nmi_s, nvi_s = _mean_series(rs, "nmi"), _mean_series(rs, "nvi")
                cnt_s = _mean_series(rs, "counts")
                for t in range(len(nmi_s)):
                    w.writerow([m.value, t, f"{nmi_s[t]:.6f}", f"{nvi_s[t]:.6f}", f"{cnt_s[t]:.2f}"])
                write_colormap(out / f"{pattern.value}_{m.value}.ppm", timelines[m, first])
                counts = np.concatenate([r.counts for r in rs])
                summary.append({
                    "pattern": pattern.value,
                    "measure": m.value,
                    "nmi": float(nmi_s.mean()),
                    "nvi": float(nvi_s.mean()),
                    "single_community_share": float(np.mean(counts == 1)),
                    "mean_communities": float(counts.mean()),
                })
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(summary[0]), lineterminator="\n")
        w.writeheader()
        for row in summary:
            w.writerow({k: f"{v:.6f}" if isinstance(v, float) else v for k, v in row.items()})
    return summary
