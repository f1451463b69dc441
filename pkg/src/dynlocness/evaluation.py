"""Information-theoretic comparison of partitions and timelines.

Overlapping snapshots are projected to partitions by keeping each vertex's
lowest community id. Entropies use the natural logarithm; NVI is the
variation of information divided by ``log n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .detection import CommunitySnapshot


class SizeMismatch(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


def project_primary(snapshot: Sequence[Sequence[int]]) -> np.ndarray:
    """One label per vertex: its lowest community id."""
    if any(len(mem) == 0 for mem in snapshot):
        raise ValueError("every vertex needs at least one membership")
    return np.array([min(mem) for mem in snapshot], dtype=np.int64)


def _labels(p) -> np.ndarray:
    if isinstance(p, np.ndarray):
        return p
    p = list(p)
    if p and isinstance(p[0], (tuple, list, set, frozenset)):
        return project_primary(p)
    return np.asarray(p, dtype=np.int64)


def _contingency(x, y) -> np.ndarray:
    x, y = _labels(x), _labels(y)
    if x.shape != y.shape:
        raise SizeMismatch(f"partitions cover {x.size} and {y.size} vertices")
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    table = np.zeros((xi.max(initial=-1) + 1, yi.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(table, (xi, yi), 1)
    return table


def _entropy_of_counts(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def entropy(p) -> float:
    labels = _labels(p)
    _, counts = np.unique(labels, return_counts=True)
    return _entropy_of_counts(counts, labels.size)


def mutual_information(x, y) -> float:
    table = _contingency(x, y)
    n = int(table.sum())
    if n == 0:
        return 0.0
    rows = table.sum(axis=1)
    cols = table.sum(axis=0)
    k, l = np.nonzero(table)
    nkl = table[k, l]
    mi = (nkl / n * np.log(n * nkl / (rows[k] * cols[l]))).sum()
    return max(float(mi), 0.0)


def nmi(x, y) -> float:
    """Normalised mutual information; 1 when both partitions are trivial."""
    hx, hy = entropy(x), entropy(y)
    if hx + hy == 0:
        if _labels(x).size != _labels(y).size:
            raise SizeMismatch("partitions differ in size")
        return 1.0
    return min(max(2.0 * mutual_information(x, y) / (hx + hy), 0.0), 1.0)


def nvi(x, y) -> float:
    """Variation of information normalised by ``log n``."""
    table = _contingency(x, y)
    n = int(table.sum())
    if n < 2:
        raise SizeMismatch("nvi needs at least two vertices")
    vi = entropy(x) + entropy(y) - 2.0 * mutual_information(x, y)
    return min(max(vi / math.log(n), 0.0), 1.0)


@dataclass
class MetricSeries:
    metric: str
    values: list[float]

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))


METRICS = {"nmi": nmi, "nvi": nvi}


def evaluate_timeline(detected: Sequence[CommunitySnapshot],
                      truth: Sequence[CommunitySnapshot], metric: str) -> MetricSeries:
    if len(detected) != len(truth):
        raise ShapeMismatch(f"{len(detected)} detected steps vs {len(truth)} truth steps")
    fn = METRICS[metric]
    values = []
    for step, (d, t) in enumerate(zip(detected, truth)):
        if len(d) != len(t):
            raise ShapeMismatch(f"step {step}: {len(d)} vs {len(t)} vertices")
        values.append(fn(project_primary(d), project_primary(t)))
    return MetricSeries(metric, values)


def community_count(snapshot: Sequence[Sequence[int]]) -> int:
    """Distinct communities in a snapshot, overlaps included."""
    return len({c for mem in snapshot for c in mem})


def community_size_series(timeline: Sequence[CommunitySnapshot]) -> list[dict[int, int]]:
    """Community sizes per step, keyed by a track id stable across steps.

    Clusters of consecutive steps are matched greedily by largest overlap;
    a cluster left unmatched opens a new track.
    """
    series: list[dict[int, int]] = []
    prev: dict[int, set[int]] = {}
    next_track = 0
    for snap in timeline:
        labels = project_primary(snap)
        clusters: dict[int, set[int]] = {}
        for v, c in enumerate(labels.tolist()):
            clusters.setdefault(c, set()).add(v)
        overlaps = sorted(
            ((len(members & prev_members), track, c)
             for c, members in clusters.items()
             for track, prev_members in prev.items()
             if members & prev_members),
            key=lambda x: (-x[0], x[1], x[2]),
        )
        assigned: dict[int, int] = {}
        used: set[int] = set()
        for _, track, c in overlaps:
            if c in assigned or track in used:
                continue
            assigned[c] = track
            used.add(track)
        for c in sorted(clusters):
            if c not in assigned:
                assigned[c] = next_track
                next_track += 1
            next_track = max(next_track, assigned[c] + 1)
        prev = {assigned[c]: members for c, members in clusters.items()}
        series.append({track: len(prev[track]) for track in sorted(prev)})
    return series


def count_series(timeline: Sequence[CommunitySnapshot]) -> list[int]:
    return [community_count(s) for s in timeline]
