import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from erdos_rogers import bounds as bd
from erdos_rogers.bounds import LogReal
from erdos_rogers.cliques import AXInstance
from erdos_rogers.errors import EpsilonOutOfRange, RhoExceedsOne
from erdos_rogers.oracle import chernoff_empirical_tail, monte_carlo_ksfree_probability

mags = st.floats(min_value=1e-300, max_value=1e300)
signed = st.tuples(st.sampled_from([-1, 1]), mags).map(lambda t: t[0] * t[1])


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# -- LogReal --------------------------------------------------------------------

def test_zero_invariant():
    z = LogReal(0)
    assert z.sign == 0 and z.log_mag == -math.inf and z.is_zero()
    assert LogReal.from_log(-math.inf).sign == 0
    assert (LogReal(3) - LogReal(3)).is_zero()


@given(signed, signed)
def test_add_matches_exact_rationals(x, y):
    exact = Fraction(x) + Fraction(y)
    assume(exact != 0 and abs(exact) >= Fraction(max(abs(x), abs(y))) / 1000)
    assert rel(float(LogReal(x) + LogReal(y)), float(exact)) < 1e-12


@given(signed, signed)
def test_mul_div_match(x, y):
    assume(1e-290 < abs(x * y) < 1e290 and 1e-290 < abs(x / y) < 1e290)
    assert rel(float(LogReal(x) * LogReal(y)), x * y) < 1e-12
    assert rel(float(LogReal(x) / LogReal(y)), x / y) < 1e-12


@given(st.floats(0.01, 100), st.integers(-50, 50))
def test_pow_matches(x, e):
    assert rel(float(LogReal(x) ** e), x ** e) < 1e-12


@given(signed, signed)
def test_ordering_matches_floats(x, y):
    assert (LogReal(x) < LogReal(y)) == (x < y)
    assert (LogReal(x) <= LogReal(y)) == (x <= y)


def test_huge_magnitudes():
    a = LogReal.exp(1e7)
    b = LogReal.exp(1e7 - 5)
    assert rel((a / b).log(), 5.0) < 1e-9
    assert rel((a + a).log(), 1e7 + math.log(2)) < 1e-15
    assert rel((a ** 3).log(), 3e7) < 1e-15
    big = LogReal(10 ** 400)
    assert rel((big + big).log_mag, math.log(2) + 400 * math.log(10)) < 1e-14
    assert float(LogReal.exp(800)) == math.inf


def test_negative_pow():
    assert float(LogReal(-2) ** 3) == pytest.approx(-8)
    with pytest.raises(ValueError):
        LogReal(-2) ** 0.5


# -- Chernoff -------------------------------------------------------------------

def test_chernoff_examples():
    assert float(bd.chernoff_tail_bound(5, 0.0)) == 1.0
    assert bd.chernoff_tail_bound(16, 1.0, "upper").log() == pytest.approx(-4, abs=1e-15)
    assert bd.chernoff_tail_bound(16, 1.0, "lower").log() == pytest.approx(-8, abs=1e-15)
    with pytest.raises(EpsilonOutOfRange):
        bd.chernoff_tail_bound(1, 1.5)


@pytest.mark.parametrize("eps", [0.1, 0.2, 0.5])
@pytest.mark.parametrize("side", ["upper", "lower"])
def test_chernoff_empirical(eps, side):
    n, p = 10 ** 4, 0.3
    freq = chernoff_empirical_tail(n, p, eps, 10 ** 4, seed=int(eps * 100), side=side)
    assert freq <= float(bd.chernoff_tail_bound(n * p, eps, side))


# -- Janson ---------------------------------------------------------------------

def test_mu_examples():
    assert float(bd.janson_mu((2, 2, 2), 1)) == pytest.approx(8, rel=1e-12)
    assert float(bd.janson_mu((3, 3), 0.5)) == pytest.approx(4.5, rel=1e-12)


def test_delta_examples():
    assert float(bd.janson_delta((2, 2, 2), 1)) == pytest.approx(24, rel=1e-12)
    assert bd.janson_delta((2, 2, 2), 0).is_zero()
    assert bd.janson_delta((3, 3), 0.5).is_zero()


def test_appendix_ratio_examples():
    r, rep = bd.appendix_ratio(3, 2 ** 120)
    assert r < 1 and rep["ratio_lt_1"]
    assert rep["terminal_bound"] == pytest.approx(math.sqrt(math.e) - 1 + 1 / 8, abs=1e-12)
    assert rep["ratio_le_terminal"] and rep["piece_bounds_hold"]


@pytest.mark.parametrize("s", range(3, 17))
def test_appendix_ratio_grid(s):
    r, rep = bd.appendix_ratio(s, 2 ** (40 * s))
    assert r < 1 and rep["ratio_le_terminal"] and rep["binomial_le_terminal"]


@pytest.mark.parametrize("s", range(3, 11))
def test_mu_lower_bound(s):
    _, _, holds = bd.janson_mu_lower(s, 2 ** (40 * s))
    assert holds


def test_ksfree_bound():
    fb = bd.janson_ksfree_bound(3, 2 ** 120)
    assert fb.value.log_mag == -4.0 * 2 ** 120
    assert fb.flags["n_at_least_2_40s"]
    assert not bd.janson_ksfree_bound(3, 600).flags["n_at_least_2_40s"]


def test_ksfree_desk_monte_carlo():
    mc = monte_carlo_ksfree_probability(3, 600, samples=200, seed=0)
    assert 0 <= mc["empirical_no_ks"] <= 1 and min(mc["class_sizes"]) >= 600 / 6


# -- local lemma ----------------------------------------------------------------

@pytest.mark.parametrize("s", range(3, 9))
def test_lll_margins_nonnegative(s):
    a = 1024 * s
    q = bd.smallest_prime_power_at_least_alogq(a)
    rep = bd.lll_check(s, q, a)
    assert all(m >= 0 for m in rep.margins.values()), rep.margins
    assert all(rep.checks.values()), rep.checks
    assert rep.chain["es_over_8_s_plus_1"] == pytest.approx(1 + math.log(s) - (s + 1) * math.log(8))
    assert rep.flags["q_at_least_a_log_q"] and rep.flags["a_is_1024s"]


def test_smallest_prime_power_s3():
    # frozen: first prime power with q >= 3072 log q
    q = bd.smallest_prime_power_at_least_alogq(3072)
    assert q == 31859
    assert q >= 3072 * math.log(q)
    assert not any(bd.is_prime_power(r) and r >= 3072 * math.log(r) for r in range(2, q))


def test_es_terminal_s3():
    assert 3 * math.e / 8 ** 4 < 1
    assert bd.lll_check(3, 31859, 3072).chain["es_over_8_s_plus_1"] == pytest.approx(math.log(3 * math.e / 4096))


def test_identity_exact():
    for s in range(3, 9):
        a = Fraction(1024 * s)
        assert Fraction(1, 64 * s) * 2 * a == 32


def test_lll_heavy_margin_sign():
    assert bd.lll_check(3, 31859, 3072).margins["heavy_sum"] == 0
    assert bd.lll_check(3, 31859, 2048).margins["heavy_sum"] < 0


def test_lll_binomial_preconditions():
    rep = bd.lll_check(3, 31859, 3072)
    assert not rep.flags["X_size_le_q4"]
    assert rep.log_binomials["log_N_plus_1"] == 0.0
    assert rep.log_binomials["log_binom_q4_minus_1"] is None


def test_rho_exceeds_one():
    with pytest.raises(RhoExceedsOne):
        bd.lll_check(3, 2, 1e-40)


def test_log_binomial_matches_exact():
    assert bd.log_binomial(50, 20) == pytest.approx(math.log(math.comb(50, 20)), rel=1e-12)


# -- final constant -------------------------------------------------------------

def test_final_large_q():
    rep = bd.final_bound_check(3, 10 ** 6 + 3)
    assert rep["holds"] and rep["margin"] > 100


@pytest.mark.parametrize("n", [10 ** 2, 10 ** 6, 10 ** 10])
def test_bertrand(n):
    p = bd.bertrand_prime(n)
    assert p is not None and n <= p ** 4 <= 16 * n
    assert all(p % d for d in range(2, math.isqrt(p) + 1))


def test_primes_between():
    assert bd.primes_between(10, 30) == [11, 13, 17, 19, 23, 29]


# -- badness-event bound --------------------------------------------------------

def test_mainlemma_zero_sum():
    assert float(bd.mainlemma_bound(AXInstance((), 6, {}, {}), 3).value) == 1.0


def test_mainlemma_desk():
    fb = bd.mainlemma_bound(AXInstance((), 6, {0: 240, 1: 240}, {}), 3)
    assert fb.value.log() == pytest.approx(-5.0)
    assert not fb.flags["b_at_least_2_40s"]


@pytest.mark.parametrize("s", range(3, 9))
def test_imbalance_step_for_b_at_least_16s(s):
    for b in range(16 * s, 16 * s + 400, 7):
        assert bd.mainlemma_values(0, b, s).details["two_imbalance_le_per_block"]
