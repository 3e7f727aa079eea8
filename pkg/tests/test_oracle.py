import numpy as np
import pytest

from erdos_rogers.bounds import janson_delta, janson_mu
from erdos_rogers.cliques import max_ksfree_induced
from erdos_rogers.errors import TooLarge
from erdos_rogers.oracle import (TinyGraph, brute_delta, brute_expected_ks, brute_force_f,
                                 largest_ksfree_subset, monte_carlo_ks_counts)


@pytest.mark.parametrize("s", [2, 3, 4, 5])
def test_f_below_s(s):
    for n in range(1, s):
        assert brute_force_f(n, s).value == n


@pytest.mark.parametrize("s", [2, 3, 4])
def test_f_at_s(s):
    r = brute_force_f(s, s)
    assert r.value == s - 1
    assert r.witness.edges == TinyGraph.complete(s).edges


def test_f3_3_count():
    # 8 labeled graphs on 3 vertices, all K_4-free
    assert brute_force_f(3, 3).graphs_checked == 8


def test_f2_5():
    r = brute_force_f(5, 2)
    assert r.value == 2
    assert max_ksfree_induced(r.witness, 2) == 2


def test_too_large():
    with pytest.raises(TooLarge):
        brute_force_f(8, 2)
    with pytest.raises(TooLarge):
        brute_force_f(9, 2, allow_long=True)


def test_tinygraph_validation():
    with pytest.raises(ValueError):
        TinyGraph(2, (0b10, 0))
    with pytest.raises(TooLarge):
        TinyGraph(17, (0,) * 17)


def test_expected_ks_examples():
    assert brute_expected_ks((2, 2, 2), 1) == 8
    assert brute_expected_ks((1, 1, 1), 0.5) == 0.125
    assert brute_expected_ks((3, 4, 5), 0.3) == pytest.approx(float(janson_mu((3, 4, 5), 0.3)), rel=1e-12)
    with pytest.raises(TooLarge):
        brute_expected_ks((100, 101), 0.5)


def test_delta_examples():
    assert brute_delta((2, 2, 2), 1) == 24
    assert brute_delta((3, 2, 4), 0) == 0
    assert brute_delta((2, 2, 2, 2), 0.5) == pytest.approx(float(janson_delta((2, 2, 2, 2), 0.5)), rel=1e-9)
    with pytest.raises(TooLarge):
        brute_delta((30, 30, 30), 0.5)


def test_monte_carlo_mean():
    counts = monte_carlo_ks_counts((3, 4, 5), 0.3, 10 ** 5, seed=2)
    se = counts.std(ddof=1) / np.sqrt(len(counts))
    assert abs(counts.mean() - brute_expected_ks((3, 4, 5), 0.3)) <= 3 * se


def test_monte_carlo_deterministic():
    a = monte_carlo_ks_counts((2, 3, 2), 0.5, 500, seed=7)
    assert np.array_equal(a, monte_carlo_ks_counts((2, 3, 2), 0.5, 500, seed=7))


def test_subset_oracle_on_cycle():
    assert largest_ksfree_subset(TinyGraph.cycle(7), 2) == 3
