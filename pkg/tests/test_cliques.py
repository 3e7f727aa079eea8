from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from erdos_rogers.cliques import (AXInstance, build_ax_instance, contains_clique, dependency_counts,
                                  event_ax_occurs, iter_cliques, max_ksfree_induced, to_mask,
                                  verify_property_A, verify_property_B)
from erdos_rogers.errors import BudgetExceeded, TooLarge
from erdos_rogers.graphs import (LineGraph, apply_pencil_filter, build_intersection_graph,
                                 random_pencil_coloring)
from erdos_rogers.oracle import TinyGraph, largest_ksfree_subset
from erdos_rogers.sampler import sample_points, x_point_counts
from erdos_rogers.unital import PartialLinearSpace


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return LineGraph(n, iu[keep], ju[keep])


def brute_has_clique(G, X, k):
    return any(all(G.has_edge(a, b) for a, b in combinations(c, 2)) for c in combinations(X, k))


def test_complete_graph_witness():
    G = TinyGraph.complete(5)
    w = contains_clique(G, range(5), 5)
    assert w.vertices == (0, 1, 2, 3, 4)


def test_edgeless_none():
    assert contains_clique(LineGraph(6, [], []), range(6), 2) is None


def test_within_mask_respected():
    G = TinyGraph.complete(6)
    assert contains_clique(G, [0, 2, 4], 4) is None
    assert contains_clique(G, to_mask([0, 2, 4]), 3).vertices == (0, 2, 4)


def test_budget_is_loud():
    G = random_graph(40, 0.9, 0)
    with pytest.raises(BudgetExceeded):
        list(iter_cliques(G.adj, 6, node_budget=100))


@pytest.mark.parametrize("seed", range(500))
def test_contains_clique_small_exhaustive(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 21))
    G = random_graph(n, float(rng.uniform(0.2, 0.8)), seed)
    X = sorted(rng.choice(n, int(rng.integers(3, n + 1)), replace=False).tolist())
    k = int(rng.integers(2, 6))
    w = contains_clique(G, X, k)
    assert (w is not None) == brute_has_clique(G, X, k)
    if w is not None:
        assert set(w.vertices) <= set(X)
        assert all(G.has_edge(a, b) for a, b in combinations(w.vertices, 2))


@pytest.mark.parametrize("seed", range(200))
def test_contains_clique_sixty_vertices(seed):
    rng = np.random.default_rng(1000 + seed)
    k = int(rng.integers(3, 6))
    G = random_graph(60, float(rng.uniform(0.05, 0.35)), seed)
    A = np.zeros((60, 60), dtype=np.int64)
    A[G.u, G.v] = A[G.v, G.u] = 1
    if k == 3:
        want = bool(((A @ A) * A).sum())
    else:
        # a k-clique exists iff some edge has a (k-2)-clique among its common neighbours
        want = False
        for a, b in zip(G.u.tolist(), G.v.tolist()):
            common = np.flatnonzero(A[a] & A[b])
            if len(common) >= k - 2 and brute_has_clique(G, common.tolist(), k - 2):
                want = True
                break
    assert (contains_clique(G, range(60), k) is not None) == want


def test_iter_cliques_counts_match_brute():
    G = random_graph(14, 0.6, 3)
    for k in (3, 4):
        got = list(iter_cliques(G.adj, k))
        want = [c for c in combinations(range(14), k) if all(G.has_edge(a, b) for a, b in combinations(c, 2))]
        assert got == want


def test_property_A_full_q3(unital3):
    G = build_intersection_graph(unital3)
    rep = verify_property_A(G, unital3, 3)
    assert rep.ok and rep.mode == "exhaustive"
    # frozen from the first exhaustive run: 28 * C(9, 4) concurrent plus 6048 fans
    assert rep.by_tag == {"concurrent": 28 * comb(9, 4), "fan": 6048}


def test_property_A_flags_onan(onan_pls):
    rep = verify_property_A(build_intersection_graph(onan_pls), onan_pls, 3)
    assert not rep.ok and rep.violations[0].vertices == (0, 1, 2, 3)
    assert rep.to_dict()["violations"][0]["classification"]["tag"] == "invalid"


def test_property_A_edgeless():
    S = PartialLinearSpace(4, [(0, 1), (2, 3)])
    rep = verify_property_A(build_intersection_graph(S), S, 3)
    assert rep.ok and rep.cliques_checked == 0


def test_property_B_seeds_q3(unital3):
    G = build_intersection_graph(unital3)
    for seed in range(5):
        rep = verify_property_B(apply_pencil_filter(G, random_pencil_coloring(unital3, 3, seed)), unital3, 3)
        assert rep.ok and set(rep.by_tag) <= {"fan"}


def test_property_B_rainbow_on_fan_only_space():
    S = PartialLinearSpace(4, [(0, 1), (0, 2), (0, 3), (1, 2, 3)])
    rep = verify_property_B(build_intersection_graph(S), S, 3)
    assert rep.ok and rep.by_tag == {"fan": 1}


def test_property_B_monochromatic_pencils(unital3):
    G = build_intersection_graph(unital3)
    rep = verify_property_B(apply_pencil_filter(G, random_pencil_coloring(unital3, 1, 0)), unital3, 3)
    assert rep.ok and rep.cliques_checked == 0


def test_property_sampled_mode(unital3):
    G = build_intersection_graph(unital3)
    rep = verify_property_A(G, unital3, 3, node_budget=2000, sample_edges=20, seed=1)
    assert rep.mode == "sampled" and rep.edges_sampled == 20 and rep.ok


def test_ax_empty_heavy(unital3):
    inst = build_ax_instance(unital3, [0, 1], b=5)
    assert inst.heavy == {} and inst.hat_edge_count == 0
    G = build_intersection_graph(unital3)
    assert event_ax_occurs(G, inst, 3) == (True, None)


def test_ax_floor_blocks():
    # 2b+1 = 7 lines through point 0 with b = 3
    S = PartialLinearSpace(8, [(0, i) for i in range(1, 8)])
    inst = build_ax_instance(S, range(7), b=3)
    assert inst.r == {0: 2} and inst.blocks[0] == [(0, 1, 2), (3, 4, 5)]


def test_ax_block_structure_q7(unital7):
    H = sample_points(unital7, 0.9, seed=2)
    rng = np.random.default_rng(0)
    X = rng.choice(H.n_lines, 200, replace=False)
    b = 5
    inst = build_ax_instance(H, X, b)
    xp = x_point_counts(H, X)
    assert inst.heavy == {int(p): int(xp[p]) for p in np.flatnonzero(xp >= b)}
    for p, blocks in inst.blocks.items():
        flat = [l for Y in blocks for l in Y]
        assert len(flat) == len(set(flat)) and all(len(Y) == b for Y in blocks)
        assert set(flat) <= set(H.point_to_lines[p]) & set(X.tolist())
        assert len(blocks) == inst.heavy[p] // b
    rb = sum(len(bl) for bl in inst.blocks.values()) * b
    assert rb <= inst.sum_xp <= 2 * rb
    assert 2 * inst.hat_edge_count <= b * inst.sum_xp


def test_ax_complete_block_is_not_bad():
    S = PartialLinearSpace(5, [(0, i) for i in range(1, 5)])
    G = build_intersection_graph(S)
    inst = build_ax_instance(S, range(4), b=4)
    bad, (p, Y, clique) = event_ax_occurs(G, inst, 3)
    assert not bad and p == 0 and len(clique) == 3


def test_dependency_counts():
    inst = AXInstance((), 6, {0: 10, 1: 7}, {0: [tuple(range(6))], 1: [tuple(range(6, 12))]})
    kappa, lam = dependency_counts(inst, 1, 3)
    assert kappa == 6
    kappa, lam = dependency_counts(inst, 5, 3)
    assert kappa <= inst.b * 5
    assert lam == Fraction(6 * 5 * 17, 2)
    assert 5 * inst.hat_edge_count <= lam


def test_max_ksfree_examples():
    assert max_ksfree_induced(TinyGraph.from_edges(6, []), 3) == 6
    for s in (2, 3, 4, 5):
        assert max_ksfree_induced(TinyGraph.complete(s), s) == s - 1
    assert max_ksfree_induced(TinyGraph.cycle(5), 2) == 2


def test_max_ksfree_too_large():
    with pytest.raises(TooLarge):
        max_ksfree_induced([0] * 41, 3)


@given(st.integers(1, 10), st.integers(2, 4), st.integers(0, 2 ** 45 - 1))
def test_max_ksfree_matches_subset_oracle(n, s, mask):
    G = TinyGraph.from_edge_mask(n, mask & ((1 << (n * (n - 1) // 2)) - 1))
    assert max_ksfree_induced(G, s) == largest_ksfree_subset(G, s)
