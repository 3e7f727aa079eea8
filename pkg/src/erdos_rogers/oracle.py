"""Brute-force ground truth, sharing no formula code with :mod:`bounds`.

* exact Erdős–Rogers values f_s(n) for tiny n by enumerating every labeled
  graph on n vertices;
* direct-enumeration evaluators for the expected K_s count and the
  pair-overlap sum of a random s-partite graph;
* a Monte Carlo K_s counter and a subset-enumeration fan counter.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Optional

import numpy as np

from .errors import TooLarge
from .unital import PartialLinearSpace, classify_crossing

MAX_N = 7
LONG_MAX_N = 8
MAX_TUPLES = 10 ** 4
MAX_PAIRS = 10 ** 8


@dataclass(frozen=True)
class TinyGraph:
    """A graph on at most 16 vertices; ``rows[i]`` is the neighbour bitmask of i."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n > 16:
            raise TooLarge(f"TinyGraph holds at most 16 vertices, not {self.n}")
        for i, r in enumerate(self.rows):
            if (r >> i) & 1:
                raise ValueError("self-loop")
            for j in range(self.n):
                if ((r >> j) & 1) != ((self.rows[j] >> i) & 1):
                    raise ValueError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges) -> "TinyGraph":
        rows = [0] * n
        for a, b in edges:
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return cls(n, tuple(rows))

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> "TinyGraph":
        return cls.from_edges(n, [e for i, e in enumerate(combinations(range(n), 2)) if (mask >> i) & 1])

    @classmethod
    def cycle(cls, n: int) -> "TinyGraph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete(cls, n: int) -> "TinyGraph":
        return cls.from_edges(n, combinations(range(n), 2))

    @property
    def adj(self) -> list[int]:
        return list(self.rows)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in combinations(range(self.n), 2) if (self.rows[i] >> j) & 1]


@dataclass
class FValue:
    n: int
    s: int
    value: int
    graphs_checked: int
    witness: TinyGraph


def _subset_tables(n: int):
    pairs = list(combinations(range(n), 2))
    n_sub = 1 << n
    pair_mask = np.zeros(n_sub, dtype=np.uint64)
    for T in range(n_sub):
        m = 0
        for i, (a, b) in enumerate(pairs):
            if (T >> a) & 1 and (T >> b) & 1:
                m |= 1 << i
        pair_mask[T] = m
    size = np.array([bin(T).count("1") for T in range(n_sub)])
    return len(pairs), pair_mask, size


def brute_force_f(n: int, s: int, allow_long: bool = False, chunk: int = 1 << 15) -> FValue:
    """min over K_{s+1}-free labeled graphs on n vertices of the largest K_s-free induced subgraph."""
    if s < 2:
        raise ValueError("s must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    limit = LONG_MAX_N if allow_long else MAX_N
    if n > limit:
        raise TooLarge(f"n = {n} exceeds the enumeration limit {limit}")
    n_pairs, pair_mask, size = _subset_tables(n)
    n_sub = 1 << n
    big_sets = np.flatnonzero(size == s + 1)
    # drops[T] lists T minus each of its members, for the subset DP
    drops = [[T & ~(1 << v) for v in range(n) if (T >> v) & 1] for T in range(n_sub)]
    order = np.argsort(size, kind="stable")

    best, best_g, checked = n + 1, 0, 0
    total = 1 << n_pairs
    for start in range(0, total, chunk):
        g = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        clique = (g[:, None] & pair_mask[None, :]) == pair_mask[None, :]
        ok = ~clique[:, big_sets].any(axis=1) if len(big_sets) else np.ones(len(g), bool)
        if not ok.any():
            continue
        g, clique = g[ok], clique[ok]
        checked += len(g)
        has = np.zeros_like(clique)
        for T in order:
            if size[T] < s:
                continue
            h = clique[:, T] if size[T] == s else np.zeros(len(g), bool)
            for U in drops[T]:
                if size[U] >= s:
                    h = h | has[:, U]
            has[:, T] = h
        free_size = np.where(has, -1, size[None, :]).max(axis=1)
        i = int(np.argmin(free_size))
        if free_size[i] < best:
            best, best_g = int(free_size[i]), int(g[i])
    return FValue(n, s, best, checked, TinyGraph.from_edge_mask(n, best_g))


def largest_ksfree_subset(graph: TinyGraph, s: int) -> int:
    """Largest vertex subset with no s-clique, by checking every subset."""
    best = 0
    for T in range(1 << graph.n):
        verts = [v for v in range(graph.n) if (T >> v) & 1]
        if len(verts) <= best:
            continue
        if not any(all((graph.rows[a] >> b) & 1 for a, b in combinations(c, 2))
                   for c in combinations(verts, s)):
            best = len(verts)
    return best


# -- Janson oracles -----------------------------------------------------------

def _check_sizes(class_sizes, rho):
    if any(int(y) < 1 for y in class_sizes):
        raise ValueError("class sizes must be positive")
    if not 0 <= rho <= 1:
        raise ValueError("rho must lie in [0, 1]")


def brute_expected_ks(class_sizes, rho: float) -> float:
    """Sum over every transversal s-tuple of the probability that it spans a K_s."""
    _check_sizes(class_sizes, rho)
    n_tuples = int(np.prod([int(y) for y in class_sizes]))
    if n_tuples > MAX_TUPLES:
        raise TooLarge(f"{n_tuples} tuples exceeds {MAX_TUPLES}")
    s = len(class_sizes)
    n_edges = s * (s - 1) // 2
    total = 0.0
    for _ in product(*(range(int(y)) for y in class_sizes)):
        total += rho ** n_edges
    return total


def brute_delta(class_sizes, rho: float, chunk: int = 512) -> float:
    """Sum over ordered pairs of transversal tuples sharing between 2 and s-1 vertices.

    A pair sharing the vertices of color set S has union spanning
    2 C(s,2) - C(|S|,2) distinct edges; that many edges must be present.
    """
    _check_sizes(class_sizes, rho)
    s = len(class_sizes)
    tuples = np.array(list(product(*(range(int(y)) for y in class_sizes))), dtype=np.int64).reshape(-1, s)
    m = len(tuples)
    if m * m > MAX_PAIRS:
        raise TooLarge(f"{m * m} pairs exceeds {MAX_PAIRS}")
    shared_hist = np.zeros(s + 1, dtype=np.int64)
    for i in range(0, m, chunk):
        shared = (tuples[i:i + chunk, None, :] == tuples[None, :, :]).sum(axis=2)
        shared_hist += np.bincount(shared.ravel(), minlength=s + 1)
    total = 0.0
    edges_in_one = s * (s - 1) // 2
    for t in range(2, s):
        union_edges = 2 * edges_in_one - t * (t - 1) // 2
        total += int(shared_hist[t]) * rho ** union_edges
    return total


def _einsum_spec(s: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    terms = ["z" + letters[i] + letters[j] for i, j in combinations(range(s), 2)]
    return ",".join(terms) + "->z"


def monte_carlo_ks_counts(class_sizes, rho: float, samples: int, seed: int,
                          batch: int = 1000) -> np.ndarray:
    """Transversal K_s counts in ``samples`` independent random s-partite graphs."""
    _check_sizes(class_sizes, rho)
    s = len(class_sizes)
    if s < 2 or s > 12:
        raise ValueError("need 2 <= s <= 12 classes")
    rng = np.random.default_rng(seed)
    spec = _einsum_spec(s)
    out = np.empty(samples, dtype=np.int64)
    for start in range(0, samples, batch):
        b = min(batch, samples - start)
        mats = [(rng.random((b, class_sizes[i], class_sizes[j])) < rho).astype(np.int64)
                for i, j in combinations(range(s), 2)]
        out[start:start + b] = np.einsum(spec, *mats)
    return out


def monte_carlo_ksfree_probability(s: int, n: int, samples: int, seed: int) -> dict:
    """Empirical Pr(no transversal K_s) for s near-equal classes at rho = (8s/n)^(2/s)."""
    sizes = [n // s + (1 if i < n % s else 0) for i in range(s)]
    rho = min(1.0, (8 * s / n) ** (2 / s))
    counts = monte_carlo_ks_counts(sizes, rho, samples, seed)
    return {"s": s, "n": n, "rho": rho, "class_sizes": sizes, "samples": samples, "seed": seed,
            "empirical_no_ks": float(np.mean(counts == 0)), "mean_count": float(counts.mean())}


def chernoff_empirical_tail(n: int, p: float, eps: float, reps: int, seed: int, side: str = "upper") -> float:
    """Frequency of Bin(n, p) deviating from its mean by at least eps * mean in the given direction."""
    rng = np.random.default_rng(seed)
    x = rng.binomial(n, p, size=reps)
    mu = n * p
    if side == "upper":
        return float(np.mean(x >= (1 + eps) * mu))
    return float(np.mean(x <= (1 - eps) * mu))


# -- fans by subset enumeration ----------------------------------------------

def brute_fan_count(S: PartialLinearSpace, l1: int, l2: int, size: int,
                    limit: Optional[int] = 10 ** 6) -> int:
    """Count ``size``-fans containing l1 and l2 by classifying every candidate set."""
    common = [l for l in range(S.n_lines) if l not in (l1, l2)
              and S.line_sets[l] & S.line_sets[l1] and S.line_sets[l] & S.line_sets[l2]]
    if limit is not None and comb(len(common), size - 2) > limit:
        raise TooLarge(f"{comb(len(common), size - 2)} candidate sets exceeds {limit}")
    total = 0
    for rest in combinations(common, size - 2):
        if all(S.line_sets[a] & S.line_sets[b] for a, b in combinations(rest, 2)):
            if classify_crossing(S, (l1, l2) + rest).tag == "fan":
                total += 1
    return total
