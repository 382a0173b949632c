import numpy as np
import pytest

from pgm.nq import nilpotent_quotient
from pgm.nu import build_nu_presentation
from pgm.pcp import PcPresentation
from pgm.structure import maximal_class_frame, nilpotency_class
from pgm.tensor import (
    commutator_subgroup_phi,
    kappa_subgroup,
    multiplier_analysis,
    retraction_to_source,
    schur_multiplier,
    section_generators_check,
    tensor_square_subgroup,
    x_image,
    y_image,
)

from oracles import abelian_tensor_square_order


def nu_of(pres, extra_class=0):
    fp = build_nu_presentation(pres)
    c = nilpotency_class(pres) if pres.n else 0
    return nilpotent_quotient(fp, c + 1 + extra_class, pres.p)


@pytest.fixture(scope="module")
def nu_c3x3(c3x3):
    return nu_of(c3x3)


@pytest.fixture(scope="module")
def nu_h27(h27):
    return nu_of(h27)


def test_embeddings_are_injective(nu_c3x3, c3x3):
    from pgm.subgroups import induced_subgroup
    xs = [x_image(nu_c3x3, g) for g in [(1, 0), (0, 1)]]
    sub = induced_subgroup(nu_c3x3.quotient, xs)
    assert sub.order()[1] == 2  # |image| = |G| = 3^2
    ys = [y_image(nu_c3x3, g) for g in [(1, 0), (0, 1)]]
    suby = induced_subgroup(nu_c3x3.quotient, ys)
    assert suby.order()[1] == 2


def test_tensor_square_abelian_case(nu_c3x3):
    S = tensor_square_subgroup(nu_c3x3)
    # |[G, G^phi]| = |G (x) G| = 3^4 for G = C3 x C3
    assert 3 ** S.order()[1] == abelian_tensor_square_order([3, 3]) == 81


def test_kappa_and_exterior_square_c3x3(nu_c3x3):
    kappa = kappa_subgroup(nu_c3x3, certify_samples=200)
    S = tensor_square_subgroup(nu_c3x3)
    # |G wedge G| = |M(G)| * |[G,G]| = 3 * 1
    assert S.order()[1] - kappa.order()[1] == 1


def test_kappa_trivial_group_and_c3():
    t = PcPresentation(3, 0)
    nut = nu_of(t)
    assert kappa_subgroup(nut, certify_samples=10).order()[1] == 0
    c3 = PcPresentation(3, 1)
    nuc3 = nu_of(c3)
    kappa = kappa_subgroup(nuc3, certify_samples=50)
    S = tensor_square_subgroup(nuc3)
    # cyclic: G wedge G trivial, so kappa = [G, G^phi]
    assert kappa.order() == S.order() == (3, 1)


def test_retraction_sends_commutator_to_commutator(nu_h27, h27):
    rho = retraction_to_source(nu_h27)
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = tuple(int(v) for v in rng.integers(0, 3, size=3))
        b = tuple(int(v) for v in rng.integers(0, 3, size=3))
        c = nu_h27.quotient.commutator(x_image(nu_h27, a), y_image(nu_h27, b))
        assert rho(c) == h27.commutator(a, b)


def test_schur_multiplier_small_groups(c9, c3x3, h27, m27):
    assert schur_multiplier(nu_of(c9), certify_samples=50) == []
    assert schur_multiplier(nu_of(c3x3), certify_samples=50) == [3]
    assert schur_multiplier(nu_of(h27), certify_samples=50) == [3, 3]
    assert schur_multiplier(nu_of(m27), certify_samples=50) == []


def test_schur_multiplier_p2_groups():
    d8 = PcPresentation(2, 3, comms={(1, 0): [(2, 1)]})
    q8 = PcPresentation(2, 3, powers={0: [(2, 1)], 1: [(2, 1)]}, comms={(1, 0): [(2, 1)]})
    d16 = PcPresentation(2, 4, powers={1: [(2, 1)], 2: [(3, 1)]},
                         comms={(1, 0): [(2, 1), (3, 1)], (2, 0): [(3, 1)]})
    q16 = PcPresentation(2, 4, powers={0: [(3, 1)], 1: [(2, 1)], 2: [(3, 1)]},
                         comms={(1, 0): [(2, 1), (3, 1)], (2, 0): [(3, 1)]})
    sd16 = PcPresentation(2, 4, powers={1: [(2, 1)], 2: [(3, 1)]},
                          comms={(1, 0): [(2, 1)], (2, 0): [(3, 1)]})
    for pres in (d8, q8, d16, q16, sd16):
        assert pres.check_consistency() == []
    assert schur_multiplier(nu_of(d8), certify_samples=50) == [2]
    assert schur_multiplier(nu_of(q8), certify_samples=50) == []
    assert schur_multiplier(nu_of(d16), certify_samples=50) == [2]
    assert schur_multiplier(nu_of(q16), certify_samples=50) == []
    assert schur_multiplier(nu_of(sd16), certify_samples=50) == []


def test_multiplier_bookkeeping_mc81(mc81):
    nu = nu_of(mc81)
    ana = multiplier_analysis(nu, certify_samples=200)
    o = ana.orders
    assert o["tensor"] == o["kappa"] + o["multiplier"] + o["derived"]
    assert ana.elementary_abelian
    assert ana.invariants and all(d == 3 for d in ana.invariants)


def test_commutator_subgroup_phi_equality_mc81(mc81):
    nu = nu_of(mc81)
    frame = maximal_class_frame(mc81)
    for i in range(2, frame.n):
        right = commutator_subgroup_phi(nu, list(frame.P(i).pc_sequence),
                                        [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
                                        "right")
        left = commutator_subgroup_phi(nu, list(frame.P(i).pc_sequence),
                                       [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
                                       "left")
        assert right == left
        exp, mode = right.exponent()
        assert mode == "exact" and exp <= 3


def test_section_generators_check_mc81(mc81):
    nu = nu_of(mc81)
    frame = maximal_class_frame(mc81)
    for i in (2, frame.n - 1):
        rep = section_generators_check(nu, frame, i)
        assert rep["abelian"] and rep["generated_by_si_sj"]
