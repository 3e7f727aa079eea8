"""Exact clique search and the structural checks built on it.

Vertex sets are Python int bitsets throughout: bit i set means vertex i is
in the set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, Optional

import numpy as np

from .errors import BudgetExceeded, TooLarge
from .unital import CrossingClass, PartialLinearSpace, classify_crossing

NODE_BUDGET = 10 ** 7
MAX_EXACT_VERTICES = 40


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


class _Counter:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget):
        self.nodes = 0
        self.budget = budget

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"clique search exceeded {self.budget} nodes", self.nodes)


def _find_clique(adj, cands: int, k: int, path: list, counter: _Counter) -> Optional[list]:
    counter.tick()
    if k == 0:
        return path
    while cands:
        if cands.bit_count() < k:
            return None
        low = cands & -cands
        v = low.bit_length() - 1
        cands ^= low
        found = _find_clique(adj, cands & adj[v], k - 1, path + [v], counter)
        if found is not None:
            return found
    return None


def iter_cliques(adj, k: int, within: Optional[int] = None,
                 node_budget: Optional[int] = NODE_BUDGET) -> Iterator[tuple[int, ...]]:
    """Every k-clique inside ``within`` (all vertices by default), each once, sorted."""
    if within is None:
        within = (1 << len(adj)) - 1
    counter = _Counter(node_budget)

    def rec(cands, k, path):
        counter.tick()
        if k == 0:
            yield tuple(path)
            return
        while cands:
            if cands.bit_count() < k:
                return
            low = cands & -cands
            v = low.bit_length() - 1
            cands ^= low
            yield from rec(cands & adj[v], k - 1, path + [v])

    yield from rec(within, k, [])


@dataclass
class CliqueWitness:
    vertices: tuple[int, ...]
    classification: Optional[CrossingClass] = None

    def to_dict(self):
        d = {"vertices": list(self.vertices)}
        if self.classification is not None:
            d["classification"] = self.classification.to_dict()
        return d


def _adj_of(graph):
    return graph.adj if hasattr(graph, "adj") else list(graph)


def contains_clique(G, X, k: int, node_budget: Optional[int] = NODE_BUDGET) -> Optional[CliqueWitness]:
    """A k-clique of the subgraph induced on X, or None.  Exact."""
    if k < 1:
        raise ValueError("k must be at least 1")
    adj = _adj_of(G)
    within = X if isinstance(X, int) else to_mask(X)
    found = _find_clique(adj, within, k, [], _Counter(node_budget))
    return None if found is None else CliqueWitness(tuple(sorted(found)))


# -- structural properties ----------------------------------------------------

@dataclass
class PropertyReport:
    name: str
    s: int
    mode: str
    cliques_checked: int = 0
    by_tag: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    edges_sampled: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "property": self.name, "s": self.s, "mode": self.mode,
            "cliques_checked": self.cliques_checked, "by_tag": dict(sorted(self.by_tag.items())),
            "edges_sampled": self.edges_sampled,
            "violations": [w.to_dict() for w in self.violations], "ok": self.ok,
        }


def _verify_property(name, G, H, s, accepted, node_budget, sample_edges, seed, max_violations=50):
    adj = G.adj
    k = s + 1
    rep = PropertyReport(name, s, "exhaustive")

    def check(clique):
        cls = classify_crossing(H, clique)
        rep.cliques_checked += 1
        rep.by_tag[cls.tag] = rep.by_tag.get(cls.tag, 0) + 1
        if cls.tag not in accepted and len(rep.violations) < max_violations:
            rep.violations.append(CliqueWitness(clique, cls))

    try:
        cliques = list(iter_cliques(adj, k, node_budget=node_budget))
    except BudgetExceeded:
        cliques = None
    if cliques is not None:
        for c in cliques:
            check(c)
        return rep

    # too many to enumerate: cliques through a seeded sample of edges
    rep = PropertyReport(name, s, "sampled")
    rng = np.random.default_rng(seed)
    n_pick = min(sample_edges, G.n_edges)
    picks = np.sort(rng.choice(G.n_edges, n_pick, replace=False)) if n_pick else []
    for e in picks:
        a, b = int(G.u[e]), int(G.v[e])
        rep.edges_sampled += 1
        common = adj[a] & adj[b]
        for rest in iter_cliques(adj, k - 2, within=common, node_budget=node_budget):
            check(tuple(sorted((a, b) + rest)))
    return rep


def verify_property_A(G, H: PartialLinearSpace, s: int, *, node_budget: int = 2 * 10 ** 6,
                      sample_edges: int = 200, seed: int = 0) -> PropertyReport:
    """Every K_{s+1} of G must be concurrent lines or an (s+1)-fan."""
    return _verify_property("A", G, H, s, ("concurrent", "fan"), node_budget, sample_edges, seed)


def verify_property_B(G_chi, H: PartialLinearSpace, s: int, *, node_budget: int = 2 * 10 ** 6,
                      sample_edges: int = 200, seed: int = 0) -> PropertyReport:
    """Every K_{s+1} of the pencil-filtered graph must be an (s+1)-fan."""
    return _verify_property("B", G_chi, H, s, ("fan",), node_budget, sample_edges, seed)


# -- the badness events A_X ---------------------------------------------------

@dataclass
class AXInstance:
    """Heavy points of a line set X and the fixed block families on them.

    ``heavy[p] = |X_p|`` for points with at least b lines of X through them;
    ``blocks[p]`` cuts sorted X_p into floor(|X_p|/b) consecutive b-blocks.
    """

    X: tuple[int, ...]
    b: int
    heavy: dict
    blocks: dict

    @property
    def sum_xp(self) -> int:
        return sum(self.heavy.values())

    @property
    def r(self) -> dict:
        return {p: len(bl) for p, bl in self.blocks.items()}

    @property
    def hat_edge_count(self) -> int:
        return sum(len(bl) for bl in self.blocks.values()) * comb(self.b, 2)

    def to_dict(self):
        return {"size": len(self.X), "b": self.b, "heavy_points": len(self.heavy),
                "sum_xp": self.sum_xp, "blocks": sum(self.r.values()),
                "hat_edge_count": self.hat_edge_count}


def build_ax_instance(H: PartialLinearSpace, X, b: int) -> AXInstance:
    if b < 1:
        raise ValueError("b must be at least 1")
    X = tuple(sorted(set(int(l) for l in X)))
    xs = set(X)
    heavy, blocks = {}, {}
    for p, pencil in enumerate(H.point_to_lines):
        xp = sorted(l for l in pencil if l in xs)
        if len(xp) >= b:
            heavy[p] = len(xp)
            blocks[p] = [tuple(xp[i * b:(i + 1) * b]) for i in range(len(xp) // b)]
    return AXInstance(X, b, heavy, blocks)


def event_ax_occurs(Hgraph, inst: AXInstance, s: int, node_budget: Optional[int] = NODE_BUDGET):
    """Whether X is bad: no block of any heavy point induces a K_s.

    Returns ``(bad, witness)`` with ``witness = (p, block, clique)`` when not
    bad.  With no heavy points the event holds vacuously.
    """
    for p in sorted(inst.blocks):
        for Y in inst.blocks[p]:
            w = contains_clique(Hgraph, Y, s, node_budget)
            if w is not None:
                return False, (p, Y, w.vertices)
    return True, None


def dependency_counts(inst: AXInstance, k, s: int):
    """``(kappa, lambda_bound)`` with kappa = C(s+1,2) k and lambda <= b k sum|X_p| / 2.

    Exact (int / Fraction) when k is an integer or Fraction.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if isinstance(k, (int, Fraction)):
        return comb(s + 1, 2) * k, Fraction(inst.b * inst.sum_xp) * k / 2
    return comb(s + 1, 2) * k, inst.b * k * inst.sum_xp / 2


# -- largest K_s-free induced subgraph -----------------------------------------

def max_ksfree_induced(graph, s: int) -> int:
    """Size of a largest vertex set inducing no K_s (exact, at most 40 vertices)."""
    adj = _adj_of(graph)
    n = len(adj)
    if n > MAX_EXACT_VERTICES:
        raise TooLarge(f"{n} vertices exceeds the exact limit {MAX_EXACT_VERTICES}")
    if s < 1:
        raise ValueError("s must be at least 1")
    if s == 1:
        return 0
    order = sorted(range(n), key=lambda v: -adj[v].bit_count())
    best = 0
    counter = _Counter(None)

    def creates_clique(c, v, inside):
        # does inside + {v, c} contain a K_s through both v and c?
        if not (adj[c] >> v) & 1:
            return False
        return _find_clique(adj, adj[c] & adj[v] & inside, s - 2, [], counter) is not None

    def rec(inside, size, cands):
        nonlocal best
        if size + len(cands) <= best:
            return
        if not cands:
            best = size
            return
        v, rest = cands[0], cands[1:]
        rec(inside | (1 << v), size + 1, [c for c in rest if not creates_clique(c, v, inside)])
        rec(inside, size, rest)

    rec(0, 0, order)
    return best
