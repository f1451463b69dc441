"""Text formats for event streams and community timelines.

Event stream::

    n 5
    t 0
    + 0 1
    t 1
    - 0 1
    + 1 2

Timeline (one block per step, one line per vertex, overlaps as extra ids)::

    t 0
    0 0
    1 0 1
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import IO, Iterable, Iterator, Sequence

from .detection import CommunitySnapshot
from .graph import EdgeEvent, EventKind, GraphError, TimeStepBatch


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "") -> None:
        self.line = line
        where = f"{source}:" if source else ""
        where += f"{line}: " if line is not None else (" " if source else "")
        super().__init__(f"{where}{message}")


@contextmanager
def _open(target, mode: str):
    if hasattr(target, "read") or hasattr(target, "write"):
        yield target
    else:
        with open(target, mode, encoding="ascii") as fh:
            yield fh


def write_stream(target, n: int, initial_edges: Iterable[tuple[int, int]],
                 batches: Iterable[TimeStepBatch]) -> None:
    with _open(target, "w") as fh:
        fh.write(f"n {n}\nt 0\n")
        for u, v in initial_edges:
            u, v = min(u, v), max(u, v)
            fh.write(f"+ {u} {v}\n")
        for batch in batches:
            fh.write(f"t {batch.step}\n")
            for e in batch.events:
                fh.write(f"{e.kind.value} {e.u} {e.v}\n")


class StreamReader:
    """Lazy reader over an event-stream file.

    ``n`` and ``initial_edges`` are parsed on construction; batches are
    produced one at a time by iteration, so memory does not grow with the
    number of steps. ``block_line`` is the line of the ``t`` header of the
    batch most recently yielded.
    """

    def __init__(self, fh: IO[str], source: str = "") -> None:
        self._fh = fh
        self.source = source
        self._lineno = 0
        self._pending: tuple[int, list[str]] | None = None
        self.block_line: int | None = None
        header = self._next_tokens()
        if header is None or len(header[1]) != 2 or header[1][0] != "n":
            self._fail("expected header 'n <vertex_count>'", header[0] if header else 1)
        self.n = self._int(header[1][1], header[0])
        if self.n < 0:
            self._fail("vertex count must be non-negative", header[0])
        first = self._next_tokens()
        if first is None or first[1] != ["t", "0"]:
            self._fail("expected 't 0' block", first[0] if first else self._lineno)
        self.block_line = first[0]
        events = self._read_events()
        for e in events:
            if e.kind is not EventKind.ADD:
                self._fail("step 0 may only list '+' lines", self.block_line)
        self.initial_edges = [e.pair for e in events]

    def _fail(self, message: str, line: int | None):
        raise FormatError(message, line, self.source)

    def _int(self, token: str, line: int) -> int:
        try:
            return int(token)
        except ValueError:
            self._fail(f"not an integer: {token!r}", line)

    def _next_tokens(self) -> tuple[int, list[str]] | None:
        if self._pending is not None:
            out, self._pending = self._pending, None
            return out
        for raw in self._fh:
            self._lineno += 1
            tokens = raw.split()
            if tokens:
                return self._lineno, tokens
        return None

    def _read_events(self) -> list[EdgeEvent]:
        events = []
        while True:
            item = self._next_tokens()
            if item is None:
                return events
            line, tokens = item
            if tokens[0] == "t":
                self._pending = item
                return events
            if tokens[0] not in ("+", "-") or len(tokens) != 3:
                self._fail(f"bad event line: {' '.join(tokens)!r}", line)
            u, v = self._int(tokens[1], line), self._int(tokens[2], line)
            if not (0 <= u < self.n and 0 <= v < self.n):
                self._fail(f"vertex out of range [0, {self.n})", line)
            try:
                events.append(EdgeEvent(u, v, EventKind(tokens[0])))
            except GraphError as exc:
                self._fail(str(exc), line)

    def __iter__(self) -> Iterator[TimeStepBatch]:
        while True:
            item = self._next_tokens()
            if item is None:
                return
            line, tokens = item
            if tokens[0] != "t" or len(tokens) != 2:
                self._fail(f"expected 't <step>', got {' '.join(tokens)!r}", line)
            step = self._int(tokens[1], line)
            self.block_line = line
            try:
                batch = TimeStepBatch(step, tuple(self._read_events()))
            except GraphError as exc:
                self._fail(str(exc), line)
            yield batch


@contextmanager
def open_stream(path):
    with open(path, encoding="ascii") as fh:
        yield StreamReader(fh, str(path))


def read_stream(path) -> tuple[int, list[tuple[int, int]], list[TimeStepBatch]]:
    with open_stream(path) as reader:
        return reader.n, reader.initial_edges, list(reader)


def write_snapshot(fh: IO[str], step: int, snapshot: Sequence[Sequence[int]]) -> None:
    fh.write(f"t {step}\n")
    for v, mem in enumerate(snapshot):
        fh.write(f"{v} {' '.join(str(c) for c in sorted(mem))}\n")


def write_timeline(target, timeline: Iterable[Sequence[Sequence[int]]]) -> None:
    with _open(target, "w") as fh:
        for step, snap in enumerate(timeline):
            write_snapshot(fh, step, snap)


def iter_timeline(fh: IO[str], source: str = "") -> Iterator[tuple[int, CommunitySnapshot]]:
    """Yield ``(step, snapshot)`` blocks from an open timeline file."""
    step: int | None = None
    rows: list[tuple[int, ...]] = []
    header_line = 0

    def fail(message, line):
        raise FormatError(message, line, source)

    for lineno, raw in enumerate(fh, start=1):
        tokens = raw.split()
        if not tokens:
            continue
        try:
            ints = [int(x) for x in tokens[1:]] if tokens[0] == "t" else [int(x) for x in tokens]
        except ValueError:
            fail(f"non-integer token in {raw.strip()!r}", lineno)
        if tokens[0] == "t":
            if len(ints) != 1:
                fail("expected 't <step>'", lineno)
            if step is not None:
                if not rows:
                    fail(f"step {step} has no vertex lines", header_line)
                yield step, tuple(rows)
            step, rows, header_line = ints[0], [], lineno
            continue
        if step is None:
            fail("vertex line before any 't' header", lineno)
        if len(ints) < 2:
            fail("vertex line needs at least one community id", lineno)
        if ints[0] != len(rows):
            fail(f"expected vertex {len(rows)}, got {ints[0]}", lineno)
        rows.append(tuple(sorted(set(ints[1:]))))
    if step is None:
        fail("empty timeline", None)
    if not rows:
        fail(f"step {step} has no vertex lines", header_line)
    yield step, tuple(rows)


def read_timeline(path) -> list[CommunitySnapshot]:
    """Read a whole timeline; blocks must be steps 0, 1, 2, ... with equal n."""
    out: list[CommunitySnapshot] = []
    with open(path, encoding="ascii") as fh:
        for step, snap in iter_timeline(fh, str(path)):
            if step != len(out):
                raise FormatError(f"expected step {len(out)}, got {step}", None, str(path))
            if out and len(snap) != len(out[0]):
                raise FormatError(
                    f"step {step} lists {len(snap)} vertices, step 0 lists {len(out[0])}",
                    None, str(path))
            out.append(snap)
    return out
