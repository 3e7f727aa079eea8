"""Sampling points of H_7 and filtering its line intersection graph.

Desk-scale parameters (a = 4, b = 5, rho = 0.3) stand in for the
astronomically large constants of the asymptotic construction.
"""
import numpy as np

from erdos_rogers import (SampleParams, apply_pencil_filter, build_ax_instance,
                          build_hermitian_unital, build_intersection_graph, contains_clique,
                          event_ax_occurs, intersect_graphs, iter_cliques, random_pencil_coloring,
                          sample_edges, sample_until_good, verify_b_bound, verify_property_B)
from erdos_rogers._random import derive_seed
from erdos_rogers.bounds import mainlemma_bound
from erdos_rogers.unital import classify_crossing

q, s, a, b, rho, seed = 7, 3, 4, 5, 0.3, 2024
U = build_hermitian_unital(q)

params = SampleParams(a=a, q=q, s=s, seed=derive_seed(seed, "sample"))
H, lemma, attempts = sample_until_good(U, params)
print(f"kept {H.n_points} of {U.n_points} points after {attempts} attempt(s), pi={params.probability:.3f}")
for item, value in lemma.to_dict().items():
    if item in ("i", "ii", "iii", "iv", "v"):
        print(f"  item {item}: {value}")

G = build_intersection_graph(H)
chi = random_pencil_coloring(H, s, derive_seed(seed, "chi"))
G_chi = apply_pencil_filter(G, chi)
G_rho = sample_edges(G, rho, derive_seed(seed, "rho"))
Hg = intersect_graphs(G_chi, G_rho)
print(f"\nedges: G {G.n_edges}, G_chi {G_chi.n_edges}, G_rho {G_rho.n_edges}, H {Hg.n_edges}")

# Every K_4 that survives both filters should be a 4-fan.
tags = {}
for c in iter_cliques(Hg.adj, s + 1):
    t = classify_crossing(H, c).tag
    tags[t] = tags.get(t, 0) + 1
print("K_4 in H by type:", tags)
print("property B on G_chi:", verify_property_B(G_chi, H, s, sample_edges=20, seed=1).to_dict()["by_tag"])

# Random line sets X of size 8bq^2: the block structure finds K_3 whenever X is not bad.
rng = np.random.default_rng(derive_seed(seed, "X"))
for trial in range(5):
    X = np.sort(rng.choice(H.n_lines, 8 * b * q * q, replace=False))
    inst = build_ax_instance(H, X, b)
    bad, witness = event_ax_occurs(Hg, inst, s)
    direct = contains_clique(Hg, X.tolist(), s)
    lhs, rhs, holds = verify_b_bound(H, X, a, b, q)
    print(f"X#{trial}: heavy points {len(inst.heavy)}, sum |X_p| {inst.sum_xp}, bad={bad}, "
          f"block witness {witness[2] if witness else None}, direct K_3 {direct.vertices if direct else None}, "
          f"b-bound {lhs} > {rhs:.0f}: {holds}, log bound {mainlemma_bound(inst, s).value.log_mag:.0f}")
