"""Evolving planted-bisection benchmarks with ground truth.

All randomness comes from a numpy ``Generator`` seeded with ``PCG64(seed)``.
Pairs are always drawn in canonical order (``u < v``, lexicographic), so a
stream depends only on the configuration and the seed.

Two evolution patterns are available:

* grow-shrink: community 1 gains vertices from community 0 along a
  triangle wave and gives them back. Migrating vertices re-draw all their
  incident pairs.
* merge-split: the inter-community density ramps from ``p_out`` up to
  ``p_in`` and back. Each inter pair keeps one uniform draw for the whole
  run and is present while that draw is below the current density, so each
  step flips only the pairs crossing the moving threshold.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .detection import CommunitySnapshot
from .graph import TimeStepBatch, diff_events


class ConfigInvalid(ValueError):
    pass


class Pattern(enum.Enum):
    GROW_SHRINK = "grow-shrink"
    MERGE_SPLIT = "merge-split"


#: ground truth merges once the inter density reaches this fraction of p_in
MERGE_THRESHOLD = 0.95

#: retries with seed+1, seed+2, ... before giving up on empty steps
MAX_RESEEDS = 100


@dataclass(frozen=True)
class BenchmarkConfig:
    n: int = 64
    p_in: float = 0.5
    p_out: float = 0.05
    steps: int = 100
    pattern: Pattern = Pattern.GROW_SHRINK
    fraction: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "pattern", Pattern(self.pattern))
        if self.n < 2 or self.n % 2:
            raise ConfigInvalid(f"n must be even and >= 2, got {self.n}")
        if not 0 <= self.p_out < self.p_in <= 1:
            raise ConfigInvalid(f"need 0 <= p_out < p_in <= 1, got {self.p_out}, {self.p_in}")
        if self.steps < 2:
            raise ConfigInvalid(f"steps must be >= 2, got {self.steps}")
        if self.pattern is Pattern.GROW_SHRINK:
            if not 0 < self.fraction <= 1:
                raise ConfigInvalid(f"fraction must lie in (0, 1], got {self.fraction}")
            if self.fraction * self.n / 2 < 1:
                raise ConfigInvalid("fraction * n / 2 < 1: no vertex would ever migrate")


@dataclass
class GeneratedBenchmark:
    config: BenchmarkConfig
    seed: int  # seed actually used (config.seed + reseeds)
    initial_edges: list[tuple[int, int]]
    batches: list[TimeStepBatch]
    ground_truth: list[CommunitySnapshot]
    edge_counts: list[int] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def edge_event_count(self) -> int:
        return sum(len(b.events) for b in self.batches)

    @property
    def total_edges_processed(self) -> int:
        return len(self.initial_edges) + self.edge_event_count


class _EmptyStep(Exception):
    pass


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _edges_of(adj: np.ndarray) -> list[tuple[int, int]]:
    us, vs = np.nonzero(np.triu(adj, 1))
    return list(zip(us.tolist(), vs.tolist()))


def _as_snapshot(labels: np.ndarray) -> CommunitySnapshot:
    return tuple((int(c),) for c in labels)


def bisection_labels(n: int) -> np.ndarray:
    labels = np.zeros(n, dtype=np.int64)
    labels[n // 2 :] = 1
    return labels


def _draw(adj: np.ndarray, labels: np.ndarray, mask: np.ndarray, p_in: float,
          p_out: float, rng: np.random.Generator) -> None:
    """Re-draw the upper-triangle pairs selected by ``mask`` in canonical order."""
    us, vs = np.nonzero(np.triu(mask, 1))
    probs = np.where(labels[us] == labels[vs], p_in, p_out)
    present = rng.random(us.size) < probs
    adj[us, vs] = present
    adj[vs, us] = present


def _planted_bisection(n, p_in, p_out, rng):
    labels = bisection_labels(n)
    adj = np.zeros((n, n), dtype=bool)
    _draw(adj, labels, np.ones((n, n), dtype=bool), p_in, p_out, rng)
    return adj, labels


def generate_planted_bisection(
    n: int, p_in: float, p_out: float, seed: int
) -> tuple[list[tuple[int, int]], CommunitySnapshot]:
    """Two communities ``0..n/2-1`` and ``n/2..n-1`` with independent pairs."""
    if n % 2:
        raise ConfigInvalid("planted bisection needs an even vertex count")
    adj, labels = _planted_bisection(n, p_in, p_out, _rng(seed))
    return _edges_of(adj), _as_snapshot(labels)


def grow_shrink_excess(t: int, steps: int, migrants: int) -> int:
    """Extra size of community 1 at step ``t``: a single triangle wave."""
    tri = 1.0 - abs(2.0 * t / steps - 1.0)
    return int(math.floor(migrants * tri + 0.5))


def grow_shrink_labels(t: int, cfg: BenchmarkConfig) -> np.ndarray:
    half = cfg.n // 2
    excess = grow_shrink_excess(t, cfg.steps, int(math.floor(cfg.fraction * half + 0.5)))
    labels = np.zeros(cfg.n, dtype=np.int64)
    labels[half - excess :] = 1
    return labels


def merge_split_density(t: int, cfg: BenchmarkConfig) -> float:
    tri = 1.0 - abs(2.0 * t / cfg.steps - 1.0)
    return cfg.p_out + (cfg.p_in - cfg.p_out) * tri


def merge_split_merged(t: int, cfg: BenchmarkConfig) -> bool:
    return merge_split_density(t, cfg) >= MERGE_THRESHOLD * cfg.p_in - 1e-12


def _grow_shrink(cfg: BenchmarkConfig, seed: int) -> GeneratedBenchmark:
    rng = _rng(seed)
    adj, labels = _planted_bisection(cfg.n, cfg.p_in, cfg.p_out, rng)
    initial = _edges_of(adj)
    truth = [_as_snapshot(labels)]
    counts = [len(initial)]
    batches = []
    for t in range(1, cfg.steps + 1):
        new_labels = grow_shrink_labels(t, cfg)
        movers = new_labels != labels
        if not movers.any():
            # keep the step alive: one vertex re-draws its pairs in place
            movers = np.zeros(cfg.n, dtype=bool)
            movers[int(rng.integers(cfg.n))] = True
        mask = movers[:, None] | movers[None, :]
        old = adj.copy()
        _draw(adj, new_labels, mask, cfg.p_in, cfg.p_out, rng)
        events = diff_events(old, adj)
        if not events:
            raise _EmptyStep(t)
        batches.append(TimeStepBatch(t, tuple(events)))
        labels = new_labels
        truth.append(_as_snapshot(labels))
        counts.append(int(adj.sum()) // 2)
    return GeneratedBenchmark(cfg, seed, initial, batches, truth, counts)


def _merge_split(cfg: BenchmarkConfig, seed: int) -> GeneratedBenchmark:
    rng = _rng(seed)
    n = cfg.n
    labels = bisection_labels(n)
    us, vs = np.triu_indices(n, 1)
    draws = rng.random(us.size)
    intra = labels[us] == labels[vs]
    adj = np.zeros((n, n), dtype=bool)

    def fill(p_inter: float) -> None:
        present = draws < np.where(intra, cfg.p_in, p_inter)
        adj[us, vs] = present
        adj[vs, us] = present

    fill(cfg.p_out)
    initial = _edges_of(adj)
    truth = [_as_snapshot(labels)]
    counts = [len(initial)]
    batches = []
    merged = np.zeros(n, dtype=np.int64)
    for t in range(1, cfg.steps + 1):
        old = adj.copy()
        fill(merge_split_density(t, cfg))
        events = diff_events(old, adj)
        if not events:
            raise _EmptyStep(t)
        batches.append(TimeStepBatch(t, tuple(events)))
        truth.append(_as_snapshot(merged if merge_split_merged(t, cfg) else labels))
        counts.append(int(adj.sum()) // 2)
    return GeneratedBenchmark(cfg, seed, initial, batches, truth, counts)


def generate(cfg: BenchmarkConfig) -> GeneratedBenchmark:
    """Generate the benchmark for ``cfg``.

    A step whose re-draw happens to change no edge would not be a time step
    at all; in that case the whole benchmark is regenerated with the next
    seed.
    """
    build = _grow_shrink if cfg.pattern is Pattern.GROW_SHRINK else _merge_split
    for seed in range(cfg.seed, cfg.seed + MAX_RESEEDS):
        try:
            return build(cfg, seed)
        except _EmptyStep:
            continue
    raise ConfigInvalid(f"no seed in [{cfg.seed}, {cfg.seed + MAX_RESEEDS}) avoids empty steps")


def generate_grow_shrink(cfg: BenchmarkConfig) -> GeneratedBenchmark:
    if cfg.pattern is not Pattern.GROW_SHRINK:
        raise ConfigInvalid("config pattern is not grow-shrink")
    return generate(cfg)


def generate_merge_split(cfg: BenchmarkConfig) -> GeneratedBenchmark:
    if cfg.pattern is not Pattern.MERGE_SPLIT:
        raise ConfigInvalid("config pattern is not merge-split")
    return generate(cfg)


SCALING_SIZES = (64, 128, 256, 512, 1024, 2048)


def generate_scaling_suite(sizes=SCALING_SIZES, steps: int = 10, seed: int = 0,
                           p_in: float = 0.5, p_out: float = 0.05) -> list[GeneratedBenchmark]:
    """One grow-shrink benchmark per size."""
    return [
        generate(BenchmarkConfig(n=n, p_in=p_in, p_out=p_out, steps=steps, seed=seed))
        for n in sizes
    ]
