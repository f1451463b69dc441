"""Leader-based community detection on an evolving graph.

:func:`initialize` builds the t0 communities; :class:`Detector` then keeps
them up to date one time step at a time, re-evaluating only vertices whose
neighbourhood changed or whose leaders changed community on the previous
step.

Each vertex holds a set of preferred leaders and a non-empty set of
community memberships. A vertex adopts the most frequent community among
its leaders; all tied communities are kept, which is what lets communities
overlap. A vertex that changes community raises a mark that its followers
only see on the next step.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import DynamicGraph, TimeStepBatch
from .preference import PreferenceMeasure, preferred_leaders, preferred_leaders_many

#: One membership tuple (ascending community ids) per vertex.
CommunitySnapshot = tuple[tuple[int, ...], ...]


class Update(enum.Enum):
    UNCHANGED = "unchanged"
    LEADERS_CHANGED = "leaders_changed"
    COMMUNITY_CHANGED = "community_changed"


class ReadMode(enum.Enum):
    """Which memberships a vertex reads from its leaders within a step.

    ``SEQUENTIAL`` sees writes made earlier in the same step (ascending
    vertex order). ``SNAPSHOT`` reads the memberships as they stood at the
    end of the previous step, making candidate updates independent.
    """

    SEQUENTIAL = "sequential"
    SNAPSHOT = "snapshot"


@dataclass
class VertexState:
    leaders: frozenset[int] = frozenset()
    memberships: frozenset[int] = frozenset()
    marked_prev: bool = False
    marked_curr: bool = False


@dataclass
class StepReport:
    """Bookkeeping from the most recent :meth:`Detector.process_step`."""

    step: int
    touched: frozenset[int]
    candidates: tuple[int, ...]
    outcomes: dict[int, Update] = field(default_factory=dict)

    @property
    def leader_recomputations(self) -> int:
        return len(self.touched)


class Detector:
    def __init__(
        self,
        graph: DynamicGraph,
        measure: PreferenceMeasure,
        read_mode: ReadMode = ReadMode.SEQUENTIAL,
    ) -> None:
        self.graph = graph
        self.measure = PreferenceMeasure.parse(measure)
        self.read_mode = ReadMode(read_mode)
        self.states = [VertexState() for _ in range(graph.n)]
        self.sizes: Counter[int] = Counter()
        self._next_id = 0
        self._frozen: list[frozenset[int]] | None = None
        self.last_report: StepReport | None = None

    @property
    def step(self) -> int:
        return self.graph.current_step

    def new_community(self) -> int:
        cid = self._next_id
        self._next_id += 1
        return cid

    def set_memberships(self, v: int, memberships: frozenset[int]) -> None:
        st = self.states[v]
        self.sizes.subtract(st.memberships)
        self.sizes.update(memberships)
        st.memberships = memberships

    def _leader_memberships(self, u: int) -> frozenset[int]:
        if self._frozen is not None:
            return self._frozen[u]
        return self.states[u].memberships

    def most_frequent_community(self, v: int) -> frozenset[int]:
        """Most frequent community among the leaders of ``v``; ties all kept.

        A vertex without leaders is isolated: it keeps its community if it
        already is that community's only member, and founds a fresh one
        otherwise.
        """
        st = self.states[v]
        if not st.leaders:
            own = st.memberships
            if len(own) == 1 and self.sizes[next(iter(own))] == 1:
                return own
            return frozenset((self.new_community(),))
        counts: Counter[int] = Counter()
        for u in st.leaders:
            counts.update(self._leader_memberships(u))
        top = max(counts.values())
        return frozenset(c for c, k in counts.items() if k == top)

    def vertex_update(self, v: int, neighborhood_changed: bool,
                      leaders: frozenset[int] | None = None) -> Update:
        """One application of the update rule to ``v``.

        ``leaders`` may carry the already computed preferred leaders of
        ``v`` for the current graph state.
        """
        st = self.states[v]
        leaders_changed = False
        if neighborhood_changed:
            if leaders is None:
                leaders = preferred_leaders(self.measure, self.graph, v)
            leaders_changed = leaders != st.leaders
            st.leaders = leaders
        if not (leaders_changed or any(self.states[u].marked_prev for u in st.leaders)):
            return Update.UNCHANGED
        memberships = self.most_frequent_community(v)
        if memberships != st.memberships:
            self.set_memberships(v, memberships)
            st.marked_curr = True
            return Update.COMMUNITY_CHANGED
        return Update.LEADERS_CHANGED if leaders_changed else Update.UNCHANGED

    def candidates(self, touched: Iterable[int]) -> list[int]:
        """Touched vertices plus followers of vertices marked last step."""
        marked = {u for u, st in enumerate(self.states) if st.marked_prev}
        cand = set(touched)
        if marked:
            cand.update(
                v for v, st in enumerate(self.states) if not st.leaders.isdisjoint(marked)
            )
        return sorted(cand)

    def process_step(self, batch: TimeStepBatch) -> CommunitySnapshot:
        touched = self.graph.apply_batch(batch)
        cand = self.candidates(touched)
        if self.read_mode is ReadMode.SNAPSHOT:
            self._frozen = [st.memberships for st in self.states]
        # leader sets depend only on the new graph state, not on update order
        fresh = preferred_leaders_many(self.measure, self.graph, touched)
        report = StepReport(batch.step, frozenset(touched), tuple(cand))
        try:
            for v in cand:
                report.outcomes[v] = self.vertex_update(v, v in touched, fresh.get(v))
        finally:
            self._frozen = None
        for st in self.states:
            st.marked_prev = st.marked_curr
            st.marked_curr = False
        self._collect_garbage()
        self.last_report = report
        return self.snapshot()

    def _collect_garbage(self) -> None:
        for cid in [c for c, k in self.sizes.items() if k <= 0]:
            del self.sizes[cid]

    def full_pass(self) -> int:
        """Force the whole update (leaders included) on every vertex.

        Not part of the incremental algorithm; used to probe convergence.
        Returns the number of vertices whose memberships changed.
        """
        changed = 0
        fresh = preferred_leaders_many(self.measure, self.graph, range(self.graph.n))
        for v in range(self.graph.n):
            st = self.states[v]
            st.leaders = fresh[v]
            memberships = self.most_frequent_community(v)
            if memberships != st.memberships:
                self.set_memberships(v, memberships)
                changed += 1
        self._collect_garbage()
        return changed

    def raw_memberships(self) -> list[frozenset[int]]:
        return [st.memberships for st in self.states]

    def snapshot(self) -> CommunitySnapshot:
        return relabel(self.raw_memberships())

    def leader_set(self) -> set[int]:
        """Vertices that lead at least one other vertex."""
        out: set[int] = set()
        for st in self.states:
            out |= st.leaders
        return out

    def followers(self) -> dict[int, set[int]]:
        """Follower set of every leader."""
        out: dict[int, set[int]] = {}
        for v, st in enumerate(self.states):
            for u in st.leaders:
                out.setdefault(u, set()).add(v)
        return out

    def community_count(self) -> int:
        return sum(1 for k in self.sizes.values() if k > 0)


def relabel(memberships: Sequence[Iterable[int]]) -> CommunitySnapshot:
    """Renumber community ids by order of first appearance.

    Vertices are scanned in ascending order and each membership set in
    ascending id order.
    """
    mapping: dict[int, int] = {}
    out = []
    for mem in memberships:
        labels = []
        for c in sorted(mem):
            if c not in mapping:
                mapping[c] = len(mapping)
            labels.append(mapping[c])
        out.append(tuple(sorted(labels)))
    return tuple(out)


def _pointer_cycles(pointer: Sequence[int]) -> list[int]:
    """Map every vertex to the id of the cycle its pointer chain ends in."""
    n = len(pointer)
    root = [-1] * n
    state = [0] * n  # 0 unseen, 1 on current path, 2 resolved
    n_cycles = 0
    for start in range(n):
        if state[start]:
            continue
        path = []
        v = start
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = pointer[v]
        if state[v] == 1:
            # closed a new cycle starting at v
            cid = n_cycles
            n_cycles += 1
            i = path.index(v)
            for w in path[i:]:
                root[w] = cid
                state[w] = 2
            path = path[:i]
        cid = root[v]
        for w in path:
            root[w] = cid
            state[w] = 2
    return root


def initialize(
    graph: DynamicGraph,
    measure: PreferenceMeasure | str,
    read_mode: ReadMode | str = ReadMode.SEQUENTIAL,
) -> Detector:
    """Build the t0 leaders and communities.

    Every vertex points at its lowest-id preferred leader (isolated vertices
    at themselves). Each cycle of that functional graph founds a community
    and every vertex joins the community its pointer chain reaches. One
    ascending pass of the majority rule then installs overlaps.
    """
    det = Detector(graph, PreferenceMeasure.parse(measure), ReadMode(read_mode))
    pointer = []
    fresh = preferred_leaders_many(det.measure, graph, range(graph.n))
    for v in range(graph.n):
        leaders = fresh[v]
        det.states[v].leaders = leaders
        pointer.append(min(leaders) if leaders else v)
    root = _pointer_cycles(pointer)
    ids: dict[int, int] = {}
    for v in range(graph.n):
        if root[v] not in ids:
            ids[root[v]] = det.new_community()
        det.set_memberships(v, frozenset((ids[root[v]],)))
    for v in range(graph.n):
        det.set_memberships(v, det.most_frequent_community(v))
    det._collect_garbage()
    return det


def run(
    n: int,
    initial_edges: Iterable[tuple[int, int]],
    batches: Iterable[TimeStepBatch],
    measure: PreferenceMeasure | str,
    read_mode: ReadMode | str = ReadMode.SEQUENTIAL,
) -> list[CommunitySnapshot]:
    """Detect communities over a whole stream; one snapshot per step."""
    det = initialize(DynamicGraph(n, initial_edges), measure, read_mode)
    timeline = [det.snapshot()]
    for batch in batches:
        timeline.append(det.process_step(batch))
    return timeline
