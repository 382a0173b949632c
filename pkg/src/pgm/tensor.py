"""Tensor and exterior squares inside a computed nu(G); M(G) = ker Psi.

Everything happens in the pc presentation of nu(G) produced by the
nilpotent quotient engine.  [G, G^phi] is the normal closure of the
generator-level commutators [x_i, y_j]; kappa(G) is the normal closure of
the diagonal set {[x_i, y_i]} together with {[x_i, y_j][x_j, y_i]}, which
generates because [ab, (ab)^phi] expands over those elements modulo
deeper terms; a sampling certificate guards the reduction.  The map Psi
on the exterior-square quotient Q = [G, G^phi]/kappa is realized through
the retraction of nu(G) onto G that sends both copies to G, and M(G) is
extracted as the intersection of the graph subgroup of Psi inside
[G, G] x Q with the second factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CheckFailure,
    InputError,
    KappaCertificationError,
    PsiNotHomomorphism,
)
from .nq import QuotientResult
from .pcp import PcPresentation
from .subgroups import (
    Homomorphism,
    Subgroup,
    direct_product,
    induced_subgroup,
    quotient_presentation,
    subgroup_presentation,
    trivial_subgroup,
)


def _source(nu: QuotientResult) -> PcPresentation:
    G = nu.fp.source
    if G is None or nu.fp.half is None:
        raise InputError("quotient was not built from a nu presentation")
    return G


def x_image(nu: QuotientResult, g) -> tuple:
    """Image in nu(G) of an element of G under the first-copy embedding."""
    G = _source(nu)
    Q = nu.quotient
    x = Q.identity
    for l, e in G.word_of(G.element(g)):
        x = Q.multiply(x, Q.power(nu.images[l], e))
    return x


def y_image(nu: QuotientResult, g) -> tuple:
    G = _source(nu)
    Q = nu.quotient
    n = nu.fp.half
    x = Q.identity
    for l, e in G.word_of(G.element(g)):
        x = Q.multiply(x, Q.power(nu.images[n + l], e))
    return x


def retraction_to_source(nu: QuotientResult) -> Homomorphism:
    """nu(G) -> G sending both copies to G; realizes Psi on commutators."""
    G = _source(nu)
    n = nu.fp.half
    gens = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    return hom_from_definitions(nu.quotient, G, gens + gens)


def hom_from_definitions(quotient: PcPresentation, target: PcPresentation,
                         abstract_images, check: bool = True) -> Homomorphism:
    """Build a homomorphism out of a quotient-engine presentation from
    images of the abstract generators, walking the generator definitions."""
    if quotient.definitions is None:
        raise InputError("presentation carries no definitions")
    p = quotient.p
    imgs = []

    def eval_word(w):
        x = target.identity
        for g, e in w:
            x = target.multiply(x, target.power(imgs[g], e))
        return x

    for a in range(quotient.n):
        d = quotient.definitions[a]
        kind = d[0]
        if kind == "image":
            v = target.element(abstract_images[d[1]])
        elif kind == "power":
            v = target.power(imgs[d[1]], p)
        elif kind == "powrel":
            i = d[1]
            rhs = quotient.power_rhs.get(i, ())
            assert rhs and rhs[-1] == (a, 1), "defining relation lost its tail"
            v = target.multiply(target.inverse(eval_word(rhs[:-1])),
                                target.power(imgs[i], p))
        elif kind == "commrel":
            j, i = d[1], d[2]
            rhs = quotient.comm_rhs.get((j, i), ())
            assert rhs and rhs[-1] == (a, 1), "defining relation lost its tail"
            v = target.multiply(target.inverse(eval_word(rhs[:-1])),
                                target.commutator(imgs[j], imgs[i]))
        elif kind == "imagerel":
            l, old_word = d[1], d[2]
            v = target.multiply(target.inverse(eval_word(old_word)),
                                target.element(abstract_images[l]))
        else:
            raise AssertionError(f"unknown definition {d!r}")
        imgs.append(v)
    return Homomorphism(quotient, target, imgs, check=check)


def _gen_elements(pres):
    return [tuple(1 if k == i else 0 for k in range(pres.n)) for i in range(pres.n)]


def tensor_square_subgroup(nu: QuotientResult) -> Subgroup:
    """[G, G^phi] as a normal subgroup of nu(G)."""
    G = _source(nu)
    return commutator_subgroup_phi(nu, _gen_elements(G), _gen_elements(G), "right")


def commutator_subgroup_phi(nu: QuotientResult, H_gens_in_G, K_gens_in_G,
                            phi_side: str = "right") -> Subgroup:
    """[H, K^phi] (phi_side='right') or [H^phi, K] (phi_side='left') in nu(G).

    Generator lists are elements of G generating H and K; the subgroup is
    the normal closure of the generator-level commutators.
    """
    Q = nu.quotient
    if phi_side == "right":
        first, second = x_image, y_image
    elif phi_side == "left":
        first, second = y_image, x_image
    else:
        raise InputError("phi_side must be 'left' or 'right'")
    gens = []
    for h in H_gens_in_G:
        a = first(nu, h)
        for k in K_gens_in_G:
            b = second(nu, k)
            gens.append(Q.commutator(a, b))
    return induced_subgroup(Q, gens, normal_closure=True)


def kappa_subgroup(nu: QuotientResult, certify_samples: int = 1000,
                   seed: int = 0) -> Subgroup:
    """Normal closure of {[x_i, y_i]} and {[x_i, y_j][x_j, y_i] : i < j}.

    Certified by sifting [g, g^phi] for random g in G; failure raises
    KappaCertificationError with the witness element.
    """
    G = _source(nu)
    Q = nu.quotient
    n = G.n
    xs = [x_image(nu, g) for g in _gen_elements(G)]
    ys = [y_image(nu, g) for g in _gen_elements(G)]
    gens = []
    for i in range(n):
        gens.append(Q.commutator(xs[i], ys[i]))
    for i in range(n):
        for j in range(i + 1, n):
            gens.append(Q.multiply(Q.commutator(xs[i], ys[j]),
                                   Q.commutator(xs[j], ys[i])))
    kappa = induced_subgroup(Q, gens, normal_closure=True)
    if certify_samples:
        rng = np.random.default_rng(seed)
        for _ in range(certify_samples):
            g = tuple(int(v) for v in rng.integers(0, G.p, size=n))
            d = Q.commutator(x_image(nu, g), y_image(nu, g))
            if not kappa.contains(d):
                raise KappaCertificationError(f"kappa generators insufficient; witness g = {g}")
    return kappa


@dataclass
class MultiplierAnalysis:
    """Everything the verification suites need about one multiplier run."""

    nu: QuotientResult
    tensor_sub: Subgroup          # [G, G^phi] inside nu(G)
    kappa: Subgroup
    exterior_pres: PcPresentation  # Q = [G, G^phi]/kappa
    derived_pres: PcPresentation   # [G, G] as its own pc group
    psi: Homomorphism              # Q -> [G, G]
    multiplier_sub: Subgroup       # ker Psi inside Q
    invariants: list
    orders: dict                   # exponents of p for the bookkeeping identity

    @property
    def elementary_abelian(self):
        p = self.nu.prime
        return all(d == p for d in self.invariants)


def multiplier_analysis(nu: QuotientResult, certify_samples: int = 1000,
                        seed: int = 0) -> MultiplierAnalysis:
    G = _source(nu)
    Q = nu.quotient
    S = tensor_square_subgroup(nu)
    kappa = kappa_subgroup(nu, certify_samples=certify_samples, seed=seed)
    if not S.contains_subgroup(kappa):
        raise CheckFailure("kappa is not contained in [G, G^phi]")
    ext_pres, ext_reps, ext_project, _ = quotient_presentation(S, kappa)

    rho = retraction_to_source(nu)
    from .structure import derived_subgroup
    DG = derived_subgroup(G)
    der_pres, der_reps, der_project, _ = subgroup_presentation(DG)

    psi_images = []
    for u in ext_reps:
        v = rho(u)
        if not DG.contains(v):
            raise PsiNotHomomorphism(f"psi image {v} escapes [G, G]")
        psi_images.append(der_project(v))
    try:
        psi = Homomorphism(ext_pres, der_pres, psi_images, check=True)
    except CheckFailure as exc:
        raise PsiNotHomomorphism(f"psi not a homomorphism: {exc}") from exc

    # graph subgroup of Psi inside [G,G] x Q; members with trivial first
    # part form ker Psi
    prod = direct_product(der_pres, ext_pres)
    dn = der_pres.n
    graph_gens = []
    for k in range(ext_pres.n):
        vec = tuple(psi_images[k]) + tuple(1 if t == k else 0 for t in range(ext_pres.n))
        graph_gens.append(vec)
    graph = induced_subgroup(prod, graph_gens)
    if graph.order()[1] != ext_pres.n:
        raise PsiNotHomomorphism("graph subgroup order mismatch")
    kernel_parts = [u[dn:] for u in graph.pc_sequence if all(v == 0 for v in u[:dn])]
    M = induced_subgroup(ext_pres, kernel_parts)
    # |ker Psi| * |[G,G]| = |Q|
    if M.order()[1] + der_pres.n != ext_pres.n:
        raise CheckFailure("kernel order bookkeeping violated")
    invariants = M.abelian_invariants()
    if not M.is_central_in(_gen_elements(ext_pres)):
        raise CheckFailure("multiplier is not central in the exterior square")
    orders = {
        "tensor": S.order()[1],
        "kappa": kappa.order()[1],
        "derived": der_pres.n,
        "multiplier": M.order()[1],
        "exterior": ext_pres.n,
    }
    if orders["tensor"] != orders["kappa"] + orders["multiplier"] + orders["derived"]:
        raise CheckFailure("|[G,G^phi]| != |kappa| * |M(G)| * |[G,G]|")
    return MultiplierAnalysis(nu, S, kappa, ext_pres, der_pres, psi, M,
                              list(invariants), orders)


def schur_multiplier(nu: QuotientResult, certify_samples: int = 1000,
                     seed: int = 0) -> list:
    """Invariant factors of M(G) = ker(Psi: [G,G^phi]/kappa -> [G,G])."""
    return multiplier_analysis(nu, certify_samples=certify_samples, seed=seed).invariants


def section_generators_check(nu: QuotientResult, frame, i: int) -> dict:
    """Check that [P_i, G^phi]/[P_{i+1}, G^phi] is abelian and generated by
    the classes of [s_i, s_j^phi] for 0 <= j <= n-1."""
    G = _source(nu)
    n = frame.n
    if not 0 <= i <= n - 1:
        raise InputError("section index out of range")
    Pi = frame.P(i)
    Pi1 = frame.P(i + 1)
    gens_i = list(Pi.pc_sequence) if Pi.pc_sequence else []
    gens_i1 = list(Pi1.pc_sequence) if Pi1.pc_sequence else []
    Si = commutator_subgroup_phi(nu, gens_i, _gen_elements(G), "right") if gens_i \
        else trivial_subgroup(nu.quotient)
    Si1 = commutator_subgroup_phi(nu, gens_i1, _gen_elements(G), "right") if gens_i1 \
        else trivial_subgroup(nu.quotient)
    qpres, reps, project, _ = quotient_presentation(Si, Si1)
    abelian = all(not w for w in qpres.comm_rhs.values())
    Qnu = nu.quotient
    si = x_image(nu, frame.s[i])
    images = []
    for j in range(n):
        c = Qnu.commutator(si, y_image(nu, frame.s[j]))
        images.append(project(c))
    span = induced_subgroup(qpres, images)
    generated = span.order()[1] == qpres.n
    return {
        "section": i,
        "abelian": abelian,
        "generated_by_si_sj": generated,
        "section_order_exponent": qpres.n,
    }
