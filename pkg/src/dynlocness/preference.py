"""Vertex-neighbourhood preference measures.

A vertex ``v`` scores each neighbour ``u`` with ``sigma(v, u) >= 0``; its
preferred leaders are the neighbours reaching the maximum score.

CWCN weights the common-neighbour count by the degree of ``u``, the
candidate leader being evaluated, so vertices are pulled toward dense,
high-degree regions.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .graph import DynamicGraph

#: relative tolerance used when collecting the argmax set
TIE_TOLERANCE = 1e-12


class NotNeighbors(ValueError):
    pass


class PreferenceMeasure(enum.Enum):
    JACCARD = "jaccard"
    ADAMIC_ADAR = "adamic-adar"
    PREFERENTIAL_ATTACHMENT = "pref-attach"
    CWCN = "cwcn"

    @classmethod
    def parse(cls, name: "str | PreferenceMeasure") -> "PreferenceMeasure":
        if isinstance(name, cls):
            return name
        try:
            return cls(name)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown measure {name!r} (choose from {choices})") from None


def sigma(measure: PreferenceMeasure, g: DynamicGraph, v: int, u: int) -> float:
    """Preference of ``v`` for its neighbour ``u``."""
    if not g.has_edge(v, u):
        raise NotNeighbors(f"{u} is not a neighbour of {v}")
    adj = g.adjacency
    common = adj[u] & adj[v]
    du, dv = g.degree(u), g.degree(v)
    if measure is PreferenceMeasure.JACCARD:
        cn = int(np.count_nonzero(common))
        return cn / (du + dv - cn)
    if measure is PreferenceMeasure.ADAMIC_ADAR:
        return float(sum(1.0 / math.log(g.degree(w)) for w in np.flatnonzero(common)))
    if measure is PreferenceMeasure.PREFERENTIAL_ATTACHMENT:
        return float(du * dv)
    if measure is PreferenceMeasure.CWCN:
        return float(int(np.count_nonzero(common)) * du)
    raise ValueError(measure)


def neighbor_scores(
    measure: PreferenceMeasure, g: DynamicGraph, v: int
) -> tuple[np.ndarray, np.ndarray]:
    """Score every neighbour of ``v`` at once.

    Returns ``(neighbours, scores)`` with neighbours ascending. Common
    neighbours of ``v`` and any ``u`` lie inside the neighbourhood of ``v``,
    so only the ``deg(v) x deg(v)`` sub-block of the adjacency is read.
    """
    nbrs = g.neighbors(v)
    if nbrs.size == 0:
        return nbrs, np.zeros(0)
    deg = g.degrees
    du = deg[nbrs]
    if measure is PreferenceMeasure.PREFERENTIAL_ATTACHMENT:
        return nbrs, (du * deg[v]).astype(np.float64)
    sub = g.adjacency[np.ix_(nbrs, nbrs)]
    if measure is PreferenceMeasure.ADAMIC_ADAR:
        # a common neighbour has degree >= 2; degree-1 columns never contribute
        weights = np.zeros(du.size)
        wide = du >= 2
        weights[wide] = 1.0 / np.log(du[wide].astype(np.float64))
        return nbrs, sub.astype(np.float64) @ weights
    cn = np.count_nonzero(sub, axis=1)
    if measure is PreferenceMeasure.JACCARD:
        return nbrs, cn / (du + deg[v] - cn)
    if measure is PreferenceMeasure.CWCN:
        return nbrs, (cn * du).astype(np.float64)
    raise ValueError(measure)


def argmax_set(nbrs: np.ndarray, scores: np.ndarray, degrees: np.ndarray) -> frozenset[int]:
    """Neighbours attaining the maximum score, ties kept.

    If every score is zero, fall back to the neighbours of maximum degree.
    """
    if nbrs.size == 0:
        return frozenset()
    best = scores.max()
    if best <= 0:
        d = degrees[nbrs]
        return frozenset(nbrs[d == d.max()].tolist())
    return frozenset(nbrs[scores >= best - TIE_TOLERANCE * best].tolist())


def preferred_leaders(measure: PreferenceMeasure, g: DynamicGraph, v: int) -> frozenset[int]:
    nbrs, scores = neighbor_scores(measure, g, v)
    return argmax_set(nbrs, scores, g.degrees)


def preferred_leaders_many(
    measure: PreferenceMeasure, g: DynamicGraph, vertices, chunk: int = 1024
) -> dict[int, frozenset[int]]:
    """:func:`preferred_leaders` for many vertices of one graph state.

    Scores every (vertex, neighbour) pair of a chunk with one matrix
    product; results equal the per-vertex function.
    """
    vertices = np.asarray(sorted(vertices), dtype=np.int64)
    out: dict[int, frozenset[int]] = {}
    if vertices.size == 0:
        return out
    deg = g.degrees.astype(np.float64)
    # 0/1 products are exact in float32 up to 2**24; Adamic-Adar needs float64
    exact_dtype = np.float64 if measure is PreferenceMeasure.ADAMIC_ADAR else np.float32
    adj = g.adjacency.astype(exact_dtype)
    if measure is PreferenceMeasure.ADAMIC_ADAR:
        with np.errstate(divide="ignore"):
            weights = np.where(deg >= 2, 1.0 / np.log(np.maximum(deg, 2.0)), 0.0)
    for start in range(0, vertices.size, chunk):
        rows = vertices[start : start + chunk]
        x = adj[rows]
        dv = deg[rows][:, None]
        if measure is PreferenceMeasure.PREFERENTIAL_ATTACHMENT:
            scores = dv * deg[None, :]
        elif measure is PreferenceMeasure.ADAMIC_ADAR:
            scores = (x * weights[None, :]) @ adj
        else:
            cn = (x @ adj).astype(np.float64)
            if measure is PreferenceMeasure.CWCN:
                scores = cn * deg[None, :]
            elif measure is PreferenceMeasure.JACCARD:
                with np.errstate(divide="ignore", invalid="ignore"):
                    scores = cn / (dv + deg[None, :] - cn)
            else:
                raise ValueError(measure)
        is_nbr = x > 0
        scores = np.where(is_nbr, scores, -np.inf)
        best = scores.max(axis=1)
        for i, v in enumerate(rows.tolist()):
            b = best[i]
            if b == -np.inf:
                out[v] = frozenset()
            elif b <= 0:
                d = np.where(is_nbr[i], deg, -1.0)
                out[v] = frozenset(np.flatnonzero(d == d.max()).tolist())
            else:
                out[v] = frozenset(np.flatnonzero(scores[i] >= b - TIE_TOLERANCE * b).tolist())
    return out
