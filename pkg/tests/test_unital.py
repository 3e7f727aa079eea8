from itertools import combinations

import pytest

from erdos_rogers.errors import BudgetExceeded, LinesDisjoint, NotPrimePower, UnknownLineId
from erdos_rogers.oracle import brute_fan_count
from erdos_rogers.unital import (PartialLinearSpace, build_hermitian_unital, classify_crossing,
                                 count_fans_on_pair, find_onan, verify_design)


@pytest.mark.parametrize("q, points, lines", [(2, 9, 12), (3, 28, 63), (4, 65, 208)])
def test_counts(q, points, lines):
    U = build_hermitian_unital(q)
    assert (U.n_points, U.n_lines) == (points, lines)
    assert set(U.line_sizes.tolist()) == {q + 1}


def test_points_satisfy_hermitian_equation():
    from erdos_rogers.field import field_create
    F = field_create(3)
    U = build_hermitian_unital(3)
    for x, y, z in U.coords:
        assert F.add(F.add(F.norm(int(x)), F.norm(int(y))), F.norm(int(z))) == 0


def test_not_prime_power_propagates():
    with pytest.raises(NotPrimePower):
        build_hermitian_unital(6)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_design_passes(q):
    rep = verify_design(build_hermitian_unital(q), q)
    assert rep.ok and rep.point_degrees == [q * q]


def test_design_detects_duplicated_line(unital3):
    bad = PartialLinearSpace(unital3.n_points, list(unital3.lines) + [unital3.lines[0]])
    rep = verify_design(bad, 3)
    assert not rep.ok
    assert any("pair" in f for f in rep.failures)


def test_text_roundtrip(unital3):
    assert PartialLinearSpace.from_text(unital3.to_text()) == unital3
    assert unital3.to_text().splitlines()[0] == "pls 28 63"


def test_linear(unital3):
    assert unital3.is_linear()
    assert not PartialLinearSpace(3, [(0, 1, 2), (0, 1)]).is_linear()


@pytest.mark.parametrize("q", [2, 3])
def test_no_onan(q):
    assert find_onan(build_hermitian_unital(q)).witness is None


def test_onan_positive_control(onan_pls):
    assert find_onan(onan_pls).witness == (0, 1, 2, 3)


def test_onan_budget(unital3):
    with pytest.raises(BudgetExceeded):
        find_onan(unital3, budget=10)


def test_classify_concurrent(unital3):
    pencil = unital3.point_to_lines[0][:3]
    c = classify_crossing(unital3, pencil)
    assert c.tag == "concurrent" and c.point == 0


def test_classify_triangle(unital3):
    # three points not on one line give a triangle of joining lines
    U = unital3
    for x, y, z in combinations(range(U.n_points), 3):
        lines = {U.line_through(x, y), U.line_through(x, z), U.line_through(y, z)}
        if len(lines) == 3:
            break
    c = classify_crossing(U, lines)
    assert c.tag == "fan" and c.triangle and c.point is None


def test_classify_disjoint(unital3):
    U = unital3
    l0 = 0
    far = next(l for l in range(U.n_lines) if not U.line_sets[l] & U.line_sets[l0])
    c = classify_crossing(U, [l0, far, U.point_to_lines[U.lines[l0][0]][1]])
    assert c.tag == "invalid"


def test_classify_neither_on_onan(onan_pls):
    assert classify_crossing(onan_pls, [0, 1, 2, 3]).reason == "neither"


def test_classify_unknown_line(unital3):
    with pytest.raises(UnknownLineId):
        classify_crossing(unital3, [0, 1, 999])


def _seven_line_pls():
    # lines 0,1,2 concurrent at point 0; line 3 crosses all three elsewhere
    return PartialLinearSpace(7, [(0, 1), (0, 2), (0, 3), (1, 2, 3), (4, 5), (5, 6), (4, 6)])


def test_fan_count_single_fan():
    S = _seven_line_pls()
    assert count_fans_on_pair(S, 0, 3, 4) == 1
    assert brute_fan_count(S, 0, 3, 4) == 1


def test_fan_count_no_room():
    S = PartialLinearSpace(3, [(0, 1), (0, 2)])
    assert count_fans_on_pair(S, 0, 1, 4) == 0


def test_fan_count_disjoint():
    with pytest.raises(LinesDisjoint):
        count_fans_on_pair(_seven_line_pls(), 4, 0, 4)


@pytest.mark.parametrize("size", [4, 5])
def test_fan_count_matches_subset_oracle(unital3, size):
    U = unital3
    pairs = [(0, l) for l in range(1, U.n_lines) if U.meet(0, l) is not None][:6]
    for l1, l2 in pairs:
        assert count_fans_on_pair(U, l1, l2, size) == brute_fan_count(U, l1, l2, size)


def test_fan_count_frozen_q3(unital3):
    # every crossing pair of H_3 lies in 36 four-fans (1008 edges * 36 / 6 = 6048 fans)
    l2 = next(l for l in range(1, 63) if unital3.meet(0, l) is not None)
    assert count_fans_on_pair(unital3, 0, l2, 4) == 36
