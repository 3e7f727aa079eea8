"""Intersection graphs of lines and the two random edge filters.

A :class:`LineGraph` stores its edges as sorted numpy arrays ``(u, v)`` with
``u < v`` plus the meeting point of each edge; adjacency bitsets (Python
ints) are built lazily for clique search.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._random import keyed_bits, keyed_uniform
from .errors import MissingColor, NotLinear, VertexMismatch
from .unital import PartialLinearSpace


class LineGraph:
    def __init__(self, n_vertices: int, u, v, meet=None):
        self.n_vertices = int(n_vertices)
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        meet = np.full(len(u), -1, dtype=np.int64) if meet is None else np.asarray(meet, dtype=np.int64)
        if np.any(u >= v):
            raise ValueError("edges must satisfy u < v")
        order = np.lexsort((v, u))
        self.u, self.v, self.meet = u[order], v[order], meet[order]
        if len(self.u) > 1 and np.any((np.diff(self.u) == 0) & (np.diff(self.v) == 0)):
            raise ValueError("duplicate edge")

    @property
    def n_edges(self) -> int:
        return len(self.u)

    def __repr__(self):
        return f"LineGraph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"

    @cached_property
    def adj(self) -> list[int]:
        """Adjacency bitsets: bit j of ``adj[i]`` is set iff {i, j} is an edge."""
        adj = [0] * self.n_vertices
        for a, b in zip(self.u.tolist(), self.v.tolist()):
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj

    @cached_property
    def _meet_map(self) -> dict:
        return {(a, b): p for a, b, p in zip(self.u.tolist(), self.v.tolist(), self.meet.tolist())}

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._meet_map

    def meet_point(self, a: int, b: int) -> int:
        return self._meet_map[(min(a, b), max(a, b))]

    def degree(self, i: int) -> int:
        return bin(self.adj[i]).count("1")

    def edge_keys(self) -> np.ndarray:
        return self.u * self.n_vertices + self.v

    def _subgraph(self, mask) -> "LineGraph":
        return LineGraph(self.n_vertices, self.u[mask], self.v[mask], self.meet[mask])

    def to_text(self) -> str:
        rows = [f"g {self.n_vertices}"]
        for a, b, p in zip(self.u.tolist(), self.v.tolist(), self.meet.tolist()):
            rows.append(f"e {a} {b} {p}" if p >= 0 else f"e {a} {b}")
        return "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LineGraph":
        rows = [r for r in text.splitlines() if r.strip()]
        head = rows[0].split()
        if head[0] != "g":
            raise ValueError(f"bad header {rows[0]!r}")
        us, vs, ps = [], [], []
        for r in rows[1:]:
            t = r.split()
            if t[0] != "e":
                raise ValueError(f"bad edge row {r!r}")
            us.append(int(t[1]))
            vs.append(int(t[2]))
            ps.append(int(t[3]) if len(t) > 3 else -1)
        return cls(int(head[1]), us, vs, ps)

    def summary(self, **params) -> dict:
        return {"n_vertices": self.n_vertices, "n_edges": self.n_edges, "params": params}

    def summary_json(self, **params) -> str:
        return json.dumps(self.summary(**params), sort_keys=True)


def build_intersection_graph(H: PartialLinearSpace) -> LineGraph:
    """Lines of H as vertices, an edge for every pair of lines sharing a point.

    Each pencil (lines through one point) becomes a clique; in a partial
    linear space these cliques are edge-disjoint.
    """
    us, vs, ps = [], [], []
    for p, pencil in enumerate(H.point_to_lines):
        if len(pencil) < 2:
            continue
        ls = np.array(pencil, dtype=np.int64)
        i, j = np.triu_indices(len(ls), 1)
        us.append(ls[i])
        vs.append(ls[j])
        ps.append(np.full(len(i), p, dtype=np.int64))
    if not us:
        return LineGraph(H.n_lines, [], [], [])
    u, v, p = np.concatenate(us), np.concatenate(vs), np.concatenate(ps)
    keys = u * H.n_lines + v
    uniq, counts = np.unique(keys, return_counts=True)
    if np.any(counts > 1):
        k = int(uniq[np.argmax(counts > 1)])
        raise NotLinear(f"lines {k // H.n_lines} and {k % H.n_lines} share two or more points")
    return LineGraph(H.n_lines, u, v, p)


@dataclass
class PencilColoring:
    """``colors[p][line]`` in ``1..s`` for every line through point p."""

    s: int
    colors: dict

    def color(self, p: int, line: int) -> int:
        try:
            return self.colors[p][line]
        except KeyError:
            raise MissingColor((p, line)) from None


def random_pencil_coloring(H: PartialLinearSpace, s: int, seed: int) -> PencilColoring:
    """Independent uniform color in ``1..s`` for each incident (point, line) pair."""
    if s < 1:
        raise ValueError("need at least one color")
    colors = {}
    for p, pencil in enumerate(H.point_to_lines):
        if not pencil:
            colors[p] = {}
            continue
        ls = np.array(pencil, dtype=np.int64)
        c = (keyed_bits(seed, p, ls) % np.uint64(s)).astype(np.int64) + 1
        colors[p] = dict(zip(pencil, c.tolist()))
    return PencilColoring(s, colors)


def apply_pencil_filter(G: LineGraph, chi: PencilColoring) -> LineGraph:
    """Drop every edge whose two lines get the same color at their meeting point."""
    keep = np.zeros(G.n_edges, dtype=bool)
    for i, (a, b, p) in enumerate(zip(G.u.tolist(), G.v.tolist(), G.meet.tolist())):
        if p < 0:
            raise MissingColor(f"edge ({a}, {b}) has no meeting point")
        keep[i] = chi.color(p, a) != chi.color(p, b)
    return G._subgraph(keep)


def sample_edges(G: LineGraph, rho: float, seed: int) -> LineGraph:
    """Keep each edge with probability rho, decided by a hash of (seed, u, v)."""
    if not 0 <= rho <= 1:
        raise ValueError(f"probability {rho} outside [0, 1]")
    keep = keyed_uniform(seed, G.u, G.v) < rho
    return G._subgraph(keep)


def intersect_graphs(Ga: LineGraph, Gb: LineGraph) -> LineGraph:
    if Ga.n_vertices != Gb.n_vertices:
        raise VertexMismatch(f"{Ga.n_vertices} != {Gb.n_vertices} vertices")
    keep = np.isin(Ga.edge_keys(), Gb.edge_keys(), assume_unique=True)
    return Ga._subgraph(keep)
