"""Evaluating the probabilistic inequalities at their true parameter scale.

Numbers like 2^(40 s^2) overflow floats, so everything runs through LogReal
and natural logarithms.
"""
import math

from erdos_rogers.bounds import (LogReal, appendix_ratio, bertrand_prime, final_bound_check,
                                 janson_delta, janson_mu, lll_check, smallest_prime_power_at_least_alogq)

x = LogReal.exp(1e6)
print("exp(1e6) + exp(1e6 - 1) has log", (x + LogReal.exp(1e6 - 1)).log())

print("\nJanson on classes (2,2,2) at rho=1: mu =", float(janson_mu((2, 2, 2), 1)),
      "delta =", float(janson_delta((2, 2, 2), 1)))
for s in (3, 5, 8, 16):
    r, rep = appendix_ratio(s, 2 ** (40 * s))
    print(f"s={s:2d}: delta/mu bound {float(r):.3e}, terminal constant {rep['terminal_bound']:.4f}")

print("\n s      q   first margin   log(N+1) margin   heavy margin")
for s in range(3, 9):
    a = 1024 * s
    q = smallest_prime_power_at_least_alogq(a)
    rep = lll_check(s, q, a)
    m = rep.margins
    print(f"{s:2d} {q:6d} {m['first']:14.2f} {m['log_n_plus_1']:17.3e} {m['heavy_sum']:14.1f}")
print("8bq^2 exceeds the number of lines at these q, so N = 0 and the majorant step is not needed")

for s, q in [(3, 10 ** 6 + 3), (8, 2 ** 40)]:
    rep = final_bound_check(s, q)
    print(f"\ns={s}, q={q}: log(8bq^2)={rep['log_lhs']:.1f} <= log(2^(100s) sqrt(n) log n)={rep['log_rhs']:.1f}")
for n in (10 ** 2, 10 ** 6, 10 ** 10):
    p = bertrand_prime(n)
    print(f"prime {p} lies in [{n ** 0.25:.2f}, {2 * n ** 0.25:.2f}]")
print("sqrt(e) - 1 + 1/8 =", math.sqrt(math.e) - 1 + 1 / 8)
