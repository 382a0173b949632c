import numpy as np
import pytest

from pgm import _collect
from pgm.errors import InputError
from pgm.pcp import PcPresentation, dump_pcp, parse_pcp

from oracles import TableGroup


def test_collect_c9_power_relation(c9):
    assert c9.collect([(0, 1), (0, 1), (0, 1)]) == (0, 1)


def test_collect_h27_basic_swap(h27):
    assert h27.collect([(1, 1), (0, 1)]) == (1, 1, 1)


def test_collect_h27_cube_of_product_vs_table(h27):
    # expected value pinned by the exhaustive multiplication table
    tg = TableGroup(h27)
    assert tg.check_laws()
    g1 = tg.index[(1, 0, 0)]
    g2 = tg.index[(0, 1, 0)]
    x = tg.mul(g1, g2)
    cube = tg.mul(tg.mul(x, x), x)
    assert tg.elems[cube] == (0, 0, 0)
    assert h27.power(h27.collect([(0, 1), (1, 1)]), 3) == (0, 0, 0)


def test_collect_is_homomorphic(h27, mc81):
    rng = np.random.default_rng(0)
    for pres in (h27, mc81):
        for _ in range(200):
            u = [(int(rng.integers(pres.n)), int(rng.integers(-4, 5)) or 1)
                 for _ in range(int(rng.integers(1, 8)))]
            v = [(int(rng.integers(pres.n)), int(rng.integers(-4, 5)) or 1)
                 for _ in range(int(rng.integers(1, 8)))]
            assert pres.collect(list(u) + list(v)) == pres.multiply(pres.collect(u), pres.collect(v))


def test_collect_idempotent_on_normal_forms(h27, c9):
    for pres in (h27, c9):
        for a in pres.elements():
            assert pres.collect(pres.word_of(a)) == a


def test_group_laws_random(mc81):
    rng = np.random.default_rng(7)
    elems = [tuple(int(x) for x in rng.integers(0, 3, size=4)) for _ in range(60)]
    e = mc81.identity
    for a in elems:
        assert mc81.multiply(e, a) == a
        assert mc81.multiply(a, e) == a
        assert mc81.multiply(a, mc81.inverse(a)) == e
    for i in range(40):
        a, b, c = elems[i], elems[(i + 7) % 60], elems[(i + 23) % 60]
        lhs = mc81.multiply(mc81.multiply(a, b), c)
        rhs = mc81.multiply(a, mc81.multiply(b, c))
        assert lhs == rhs


def test_commutator_conjугation_conventions(h27):
    g1 = (1, 0, 0)
    g2 = (0, 1, 0)
    # [g1, g2] = [g2, g1]^-1 = g3^-1 = g3^2
    assert h27.commutator(g1, g2) == (0, 0, 2)
    assert h27.commutator(g2, g1) == (0, 0, 1)
    # a^b = a [a,b]
    for a in (g1, g2, (1, 2, 1)):
        for b in (g1, g2, (2, 1, 0)):
            assert h27.conjugate(a, b) == h27.multiply(a, h27.commutator(a, b))


def test_power_negative_and_order(c9, h27):
    g1 = (1, 0)
    assert c9.power(g1, 3) == (0, 1)
    assert c9.power(g1, -1) == c9.inverse(g1)
    assert c9.order_of(c9.identity) == 1
    assert c9.order_of(g1) == 9
    tg = TableGroup(h27)
    x = h27.collect([(0, 1), (1, 1)])
    assert h27.order_of(x) == tg.order(tg.index[x]) == 3


def test_orders_match_table_mc81(mc81):
    tg = TableGroup(mc81)
    assert tg.check_laws()
    assert tg.exponent() == 9
    for a in list(mc81.elements())[::5]:
        assert mc81.order_of(a) == tg.order(tg.index[a])


def test_consistency_fixtures(c9, h27, mc81):
    assert c9.check_consistency() == []
    assert h27.check_consistency() == []
    assert mc81.check_consistency() == []


def test_consistency_detects_perturbation(mc81):
    # inject s2^3 = s3 into the order-81 fixture: triangular and
    # weight-plausible, but inconsistent.  Hand collection of the overlap
    # s1^3 * s: the direct route gives s3^2 * s = s * s3^2 = (1,0,0,2);
    # the swapped route s1^2 * (s1 s) walks through
    # s s1^2 s2^2 -> s s1^3 s2^2 = s s2^2 s3^2 -> s s2^3 s3^2 = s s3^3 = s,
    # i.e. (1,0,0,0).  Two normal forms for one word.
    bad = PcPresentation(
        3, 4,
        powers={1: [(3, 2)], 2: [(3, 1)]},
        comms={(1, 0): [(2, 1)], (2, 0): [(3, 1)]},
    )
    report = bad.check_consistency()
    assert report
    v = next(v for v in report if v.kind == "pow_left" and v.indices == (1, 0))
    assert v.lhs == (1, 0, 0, 2)
    assert v.rhs == (1, 0, 0, 0)
    assert mc81.check_consistency() == []


def test_malformed_words_rejected(h27):
    with pytest.raises(InputError):
        h27.collect([(5, 1)])
    with pytest.raises(InputError):
        h27.element((1, 2))
    with pytest.raises(InputError):
        h27.element((1, 2, 3))


def test_ingestion_rules():
    with pytest.raises(InputError):
        PcPresentation(4, 2)  # composite "prime"
    with pytest.raises(InputError):
        PcPresentation(3, 2, powers={0: [(0, 1)]})  # non-triangular
    # negative exponents normalize into [0, p-1]
    pres = PcPresentation(3, 2, powers={0: [(1, -1)]})
    assert pres.power_rhs[0] == ((1, 2),)


def test_trivial_group():
    t = PcPresentation(3, 0)
    assert t.identity == ()
    assert t.collect([]) == ()
    assert t.check_consistency() == []


def test_python_and_numba_collectors_agree(mc81, h27):
    if not _collect.numba_available():
        pytest.skip("numba not available")
    rng = np.random.default_rng(3)
    for pres in (mc81, h27):
        slow = PcPresentation(pres.p, pres.n, pres.power_rhs, pres.comm_rhs)
        slow._packed.use_numba = False
        for _ in range(150):
            w = [(int(rng.integers(pres.n)), int(rng.integers(-5, 6)) or 2)
                 for _ in range(int(rng.integers(1, 10)))]
            assert pres.collect(w) == slow.collect(w)


def test_pcp_text_roundtrip(mc81):
    text = dump_pcp(mc81, comment="maximal class 3^4 fixture")
    back = parse_pcp(text)
    assert back == mc81
    assert dump_pcp(back) == dump_pcp(mc81)


def test_pcp_parse_errors():
    with pytest.raises(InputError):
        parse_pcp("prime 3\ngens 2\nend")
    with pytest.raises(InputError):
        parse_pcp("pcgroup\nprime 3\ngens 2\n")
    with pytest.raises(InputError):
        parse_pcp("pcgroup\nprime 3\ngens 2\npow 1 := 1^1\nend")
    with pytest.raises(InputError):
        parse_pcp("pcgroup\nprime 3\ngens 2\npow 1 := 2^3\nend")
    with pytest.raises(InputError):
        parse_pcp("pcgroup\nprime 6\ngens 2\nend")
