"""Evolving undirected simple graph over a fixed vertex set.

The vertex set ``0..n-1`` never changes; vertices appear and disappear only
through their edges. The graph advances one time step per
:class:`TimeStepBatch`.

Adjacency is held as a dense boolean matrix alongside a degree vector. Row
``v`` of the matrix is the indicator of the neighbourhood of ``v``, so
``np.flatnonzero`` yields neighbours already sorted and common-neighbour
counts reduce to vectorised row operations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class GraphError(Exception):
    """Base class for errors raised by the graph core."""


class InapplicableEvent(GraphError):
    """Add of an existing edge or removal of a missing one."""


class NonContiguousStep(GraphError):
    """Batch step does not directly follow the graph's current step."""


class InvalidBatch(GraphError):
    """Batch is empty, contains a self-loop, or touches a pair twice."""


class EventKind(enum.Enum):
    ADD = "+"
    REMOVE = "-"


@dataclass(frozen=True, order=True)
class EdgeEvent:
    """A single edge appearing or disappearing. Endpoints are stored with u < v."""

    u: int
    v: int
    kind: EventKind = field(compare=False)

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise InvalidBatch(f"self-loop on vertex {self.u}")
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    @classmethod
    def add(cls, u: int, v: int) -> "EdgeEvent":
        return cls(u, v, EventKind.ADD)

    @classmethod
    def remove(cls, u: int, v: int) -> "EdgeEvent":
        return cls(u, v, EventKind.REMOVE)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)

    def reversed(self) -> "EdgeEvent":
        kind = EventKind.REMOVE if self.kind is EventKind.ADD else EventKind.ADD
        return EdgeEvent(self.u, self.v, kind)


@dataclass(frozen=True)
class TimeStepBatch:
    step: int
    events: tuple[EdgeEvent, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))
        if self.step < 1:
            raise InvalidBatch(f"batch step must be >= 1, got {self.step}")
        if not self.events:
            raise InvalidBatch(f"batch for step {self.step} has no events")
        pairs = {e.pair for e in self.events}
        if len(pairs) != len(self.events):
            raise InvalidBatch(f"batch for step {self.step} touches an edge twice")

    def reversed(self, step: int) -> "TimeStepBatch":
        """Batch undoing this one, stamped with ``step``."""
        return TimeStepBatch(step, tuple(e.reversed() for e in reversed(self.events)))


class DynamicGraph:
    """Mutable undirected simple graph advanced by edge-event batches.

    Between batches the graph is read-only and safe to query from several
    threads; :meth:`apply_batch` must not run concurrently with anything.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.current_step = 0
        self._adj = np.zeros((n, n), dtype=bool)
        self._deg = np.zeros(n, dtype=np.int64)
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if pairs.size:
            us, vs = pairs[:, 0], pairs[:, 1]
            self._check_vertices(us, vs)
            lo, hi = np.minimum(us, vs), np.maximum(us, vs)
            if np.unique(lo * n + hi).size != lo.size:
                raise InapplicableEvent("duplicate initial edge")
            self._adj[us, vs] = True
            self._adj[vs, us] = True
            self._deg = self._adj.sum(axis=1, dtype=np.int64)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} outside [0, {self.n})")

    def _check_vertices(self, us: np.ndarray, vs: np.ndarray) -> None:
        ends = np.concatenate([us, vs])
        if ends.min() < 0 or ends.max() >= self.n:
            bad = ends[(ends < 0) | (ends >= self.n)][0]
            raise IndexError(f"vertex {bad} outside [0, {self.n})")
        if np.any(us == vs):
            raise InvalidBatch(f"self-loop on vertex {us[us == vs][0]}")

    @property
    def adjacency(self) -> np.ndarray:
        """Read-only view of the boolean adjacency matrix."""
        view = self._adj.view()
        view.flags.writeable = False
        return view

    @property
    def degrees(self) -> np.ndarray:
        view = self._deg.view()
        view.flags.writeable = False
        return view

    @property
    def edge_count(self) -> int:
        return int(self._deg.sum()) // 2

    def degree(self, v: int) -> int:
        return int(self._deg[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def neighbors(self, v: int) -> np.ndarray:
        """Current neighbourhood of ``v``, ascending."""
        self._check_vertex(v)
        return np.flatnonzero(self._adj[v])

    def common_neighbor_count(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("common_neighbor_count needs two distinct vertices")
        return int(np.count_nonzero(self._adj[u] & self._adj[v]))

    def edges(self) -> list[tuple[int, int]]:
        """All edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        us, vs = np.nonzero(np.triu(self._adj, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def apply_batch(self, batch: TimeStepBatch) -> set[int]:
        """Apply every event of ``batch`` and return the touched vertices.

        The batch is validated in full before anything is mutated, so a
        failing batch leaves the graph unchanged.
        """
        if batch.step != self.current_step + 1:
            raise NonContiguousStep(
                f"expected step {self.current_step + 1}, got {batch.step}"
            )
        events = batch.events
        us = np.fromiter((e.u for e in events), dtype=np.int64, count=len(events))
        vs = np.fromiter((e.v for e in events), dtype=np.int64, count=len(events))
        add = np.fromiter((e.kind is EventKind.ADD for e in events), dtype=bool, count=len(events))
        self._check_vertices(us, vs)
        bad = np.flatnonzero(self._adj[us, vs] == add)
        if bad.size:
            e = events[bad[0]]
            state = "already present" if e.kind is EventKind.ADD else "not present"
            raise InapplicableEvent(f"step {batch.step}: edge ({e.u}, {e.v}) {state}")
        self._adj[us, vs] = add
        self._adj[vs, us] = add
        delta = np.where(add, 1, -1)
        np.add.at(self._deg, us, delta)
        np.add.at(self._deg, vs, delta)
        self.current_step = batch.step
        return set(np.unique(np.concatenate([us, vs])).tolist())

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph(self.n)
        g._adj = self._adj.copy()
        g._deg = self._deg.copy()
        g.current_step = self.current_step
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DynamicGraph):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._adj, other._adj))

    def __repr__(self) -> str:
        return f"DynamicGraph(n={self.n}, edges={self.edge_count}, step={self.current_step})"


def diff_events(old: np.ndarray, new: np.ndarray) -> list[EdgeEvent]:
    """Events turning adjacency ``old`` into ``new``, in canonical pair order."""
    us, vs = np.nonzero(np.triu(old != new, 1))
    added = new[us, vs]
    return [
        EdgeEvent(u, v, EventKind.ADD if a else EventKind.REMOVE)
        for u, v, a in zip(us.tolist(), vs.tolist(), added.tolist())
    ]

