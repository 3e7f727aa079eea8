"""Exact Erdős–Rogers values for tiny n by enumerating every labeled graph."""
from erdos_rogers import TinyGraph, brute_force_f, max_ksfree_induced

print(" n  " + "  ".join(f"f_{s}" for s in (2, 3, 4)))
for n in range(1, 8):
    print(f"{n:2d}  " + "  ".join(f"{brute_force_f(n, s).value:3d}" for s in (2, 3, 4)))

c7 = TinyGraph.cycle(7)
print("\nC_7 is triangle-free and its largest independent set has", max_ksfree_induced(c7, 2), "vertices")
