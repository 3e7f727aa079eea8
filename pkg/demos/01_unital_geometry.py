"""The Hermitian unital over GF(9) as a partial linear space.

Builds H_3, checks its design counts, confirms it has no O'Nan
configuration, and shows how sets of crossing lines classify.
"""
from itertools import combinations

from erdos_rogers import (PartialLinearSpace, build_hermitian_unital, classify_crossing,
                          count_fans_on_pair, field_create, find_onan, verify_design)

q = 3
F = field_create(q)
print(f"GF({F.order}) with modulus coefficients {F.modulus} (low degree first)")
print("norm values on GF(9):", sorted({F.norm(int(x)) for x in F.elements()}))

# Points are normalized solutions of x^(q+1) + y^(q+1) + z^(q+1) = 0.
U = build_hermitian_unital(q)
print(f"\nH_{q}: {U.n_points} points, {U.n_lines} lines, line sizes {sorted(set(U.line_sizes.tolist()))}")
print("design report:", verify_design(U, q).to_dict())

# No four lines of H_q meet pairwise in six distinct points.
search = find_onan(U)
print(f"\nO'Nan search: witness={search.witness}, triangles examined={search.triangles_examined}")
control = PartialLinearSpace(6, [(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5)])
print("hand-built configuration:", find_onan(control).witness,
      classify_crossing(control, range(4)).to_dict())

# Every four pairwise-crossing lines are either concurrent or a fan.
l1 = 0
l2 = next(l for l in range(1, U.n_lines) if U.meet(l1, l) is not None)
print(f"\nlines {l1} and {l2} meet at point {U.meet(l1, l2)};",
      f"they lie in {count_fans_on_pair(U, l1, l2, 4)} four-fans")
tags = {}
for S in combinations(range(20), 4):
    if all(U.meet(a, b) is not None for a, b in combinations(S, 2)):
        t = classify_crossing(U, S).tag
        tags[t] = tags.get(t, 0) + 1
print("crossing 4-sets among the first 20 lines:", tags)
