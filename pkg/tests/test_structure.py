import pytest

from pgm.errors import CheckFailure, FrameError, NotMaximalClass
from pgm.pcp import PcPresentation
from pgm.structure import (
    abelian_invariants,
    exponent_check_P2,
    lower_central_series,
    maximal_class_frame,
    nilpotency_class,
)
from pgm.subgroups import full_subgroup, induced_subgroup

from oracles import TableGroup


def test_lcs_abelian(c3x3):
    s = lower_central_series(c3x3)
    assert s.orders() == (9, 1)
    assert nilpotency_class(c3x3) == 1


def test_lcs_h27(h27):
    s = lower_central_series(h27)
    assert s.orders() == (27, 3, 1)
    # the middle term is the center <g3>
    assert s.terms[1].contains((0, 0, 1))


def test_lcs_mc81_vs_table(mc81):
    # oracle: exhaustive commutator closure over the 81-element table
    tg = TableGroup(mc81)
    oracle_orders = tuple(len(t) for t in tg.lower_central_series())
    s = lower_central_series(mc81)
    assert s.orders() == oracle_orders == (81, 9, 3, 1)
    for term, oracle_set in zip(s.terms, tg.lower_central_series()):
        assert {tg.index[x] for x in term.elements()} == oracle_set


def test_frame_mc81(mc81):
    frame = maximal_class_frame(mc81)
    assert frame.n == 4 and frame.p == 3
    # oracle: exhaustive centralizer computation on the multiplication table
    tg = TableGroup(mc81)
    gamma = tg.lower_central_series()
    P2, P4 = gamma[1], {tg.e}
    p1_oracle = tg.centralizer_of_section(P2, P4)
    assert frame.P(1).order_int() == len(p1_oracle) == 27
    assert {tg.index[x] for x in frame.P(1).elements()} == p1_oracle
    # s_3 is a nontrivial element of P_3
    s3 = frame.s[3]
    assert frame.P(3).contains(s3) and s3 != mc81.identity
    assert frame.exponent_of_G == 9
    # sections all have order p
    for i in range(4):
        assert frame.P(i).order_int() // frame.P(i + 1).order_int() == 3


def test_frame_membership_chain(mc81):
    frame = maximal_class_frame(mc81)
    for i in range(frame.n):
        assert frame.P(i).contains(frame.s[i])
        assert not frame.P(i + 1).contains(frame.s[i])


def test_frame_second_scan_order(mc81):
    f1 = maximal_class_frame(mc81, scan="lex")
    f2 = maximal_class_frame(mc81, scan="revlex")
    assert f1.s != f2.s  # genuinely different choice
    assert f1.series.orders() == f2.series.orders()
    assert f1.exponent_of_G == f2.exponent_of_G


def test_frame_errors(c3x3, h27):
    with pytest.raises(FrameError):
        maximal_class_frame(h27)  # n too small
    big_abelian = PcPresentation(3, 4)
    with pytest.raises(NotMaximalClass):
        maximal_class_frame(big_abelian)
    d16 = PcPresentation(
        2, 4,
        powers={1: [(2, 1)], 2: [(3, 1)]},
        comms={(1, 0): [(2, 1), (3, 1)], (2, 0): [(3, 1)]},
    )
    with pytest.raises(FrameError):
        maximal_class_frame(d16)  # p even


def test_exponent_check_P2(mc81):
    frame = maximal_class_frame(mc81)
    assert exponent_check_P2(frame) == (3, 9)


def test_exponent_check_exponent_p_fixture():
    # order 3^4 would need exponent 9; use 5^4 with exponent 5 instead
    pres = PcPresentation(
        5, 4,
        comms={(1, 0): [(2, 1)], (2, 0): [(3, 1)]},
    )
    assert pres.check_consistency() == []
    frame = maximal_class_frame(pres)
    assert frame.exponent_of_G == 5
    assert exponent_check_P2(frame) == (5, 5)


def test_abelian_invariants_wrapper(c9, c3x3):
    assert abelian_invariants(c9) == [9]
    assert abelian_invariants(c3x3) == [3, 3]
    z9z3 = PcPresentation(3, 3, powers={0: [(2, 1)]})
    assert abelian_invariants(z9z3) == [3, 9]
