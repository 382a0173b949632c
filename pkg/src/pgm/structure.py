"""Series, two-step centralizers, maximal-class frames, abelian invariants.

Conventions for a maximal-class group of order p^n: P_0 = G,
P_1 = C_G(P_2/P_4), P_i = gamma_i for i >= 2, and the distinguished chain
s_0, s_1, s_i = [s_{i-1}, s_0].  The s-choice scans exponent vectors in a
fixed order, so frames are reproducible; a second scan order is available
to confirm that downstream invariants do not depend on the choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iterproduct
from typing import Optional

from .errors import CheckFailure, FrameError, NotMaximalClass
from .intlinalg import smith_normal_form  # noqa: F401  (re-exported operation)
from .pcp import PcPresentation
from .subgroups import (
    Subgroup,
    full_subgroup,
    induced_subgroup,
    quotient_presentation,
    trivial_subgroup,
)


@dataclass(frozen=True)
class SubgroupSeries:
    terms: tuple
    labels: tuple

    def __post_init__(self):
        for a, b in zip(self.terms, self.terms[1:]):
            if not (a.contains_subgroup(b) and a.order_int() > b.order_int()):
                raise CheckFailure("series is not strictly descending")
        if self.terms and self.terms[-1].order_int() != 1:
            raise CheckFailure("series does not terminate at the trivial group")

    def orders(self):
        return tuple(t.order_int() for t in self.terms)


def _generator_elements(pres):
    return [tuple(1 if k == i else 0 for k in range(pres.n)) for i in range(pres.n)]


def lower_central_series(pres: PcPresentation) -> SubgroupSeries:
    """gamma_1 >= gamma_2 >= ... down to the trivial subgroup."""
    gens = _generator_elements(pres)
    terms = [full_subgroup(pres)]
    cur = terms[0]
    while cur.order_int() > 1:
        comms = [pres.commutator(u, g) for u in cur.pc_sequence for g in gens]
        nxt = induced_subgroup(pres, comms, normal_closure=True)
        if nxt.order_int() >= cur.order_int():
            raise CheckFailure("lower central series failed to descend (non-nilpotent input?)")
        terms.append(nxt)
        cur = nxt
    labels = tuple(f"γ_{k + 1}" for k in range(len(terms)))
    return SubgroupSeries(tuple(terms), labels)


def nilpotency_class(pres: PcPresentation) -> int:
    return len(lower_central_series(pres).terms) - 1


def derived_subgroup(pres: PcPresentation) -> Subgroup:
    gens = _generator_elements(pres)
    comms = [pres.commutator(a, b) for a in gens for b in gens]
    return induced_subgroup(pres, comms, normal_closure=True)


@dataclass(frozen=True)
class MaximalClassFrame:
    pres: PcPresentation
    series: SubgroupSeries          # P_0 = G, P_1, P_2, ..., P_n = 1
    two_step_centralizers: tuple    # (P_1, C_G(P_{n-2}))
    s: tuple                        # s_0, ..., s_{n-1}
    exponent_of_G: int

    @property
    def n(self):
        return self.pres.n

    @property
    def p(self):
        return self.pres.p

    def P(self, i) -> Subgroup:
        if i >= len(self.series.terms):
            return self.series.terms[-1]
        return self.series.terms[i]


def _section_line_candidates(pres, gamma2):
    """Lift a generating pair of G/gamma_2 and enumerate the p+1 lines."""
    p = pres.n and pres.p or pres.p
    q, reps, project, lift = quotient_presentation(full_subgroup(pres), gamma2, check=False)
    if q.n != 2:
        raise NotMaximalClass(f"G/[G,G] has rank {q.n}, maximal class needs rank 2")
    a, b = reps[0], reps[1]
    cands = []
    for t in range(pres.p):
        cands.append(pres.multiply(a, pres.power(b, t)))
    cands.append(b)
    return cands


def _centralizer_of_section(pres, gamma2, upper: Subgroup, lower: Subgroup) -> Subgroup:
    """C_G(upper/lower) when it contains gamma_2 with index p in G.

    Tests the commutator condition on the p+1 line representatives of
    G/gamma_2 instead of enumerating G, so it scales to order 5^6.
    """
    for u in gamma2.pc_sequence:
        for x in upper.pc_sequence:
            if not lower.contains(pres.commutator(u, x)):
                raise NotMaximalClass("gamma_2 does not centralize the section")
    hits = []
    for cand in _section_line_candidates(pres, gamma2):
        if all(lower.contains(pres.commutator(cand, x)) for x in upper.pc_sequence):
            hits.append(cand)
    if len(hits) != 1:
        raise NotMaximalClass(
            f"two-step centralizer is not a maximal subgroup ({len(hits)} lines centralize)")
    return induced_subgroup(pres, [hits[0], *gamma2.pc_sequence])


def _scan_elements(pres, order: str):
    if order == "lex":
        return _iterproduct(range(pres.p), repeat=pres.n)
    if order == "revlex":
        return _iterproduct(range(pres.p - 1, -1, -1), repeat=pres.n)
    raise ValueError(f"unknown scan order {order!r}")


def maximal_class_frame(pres: PcPresentation, scan: str = "lex") -> MaximalClassFrame:
    """Distinguished series and s-chain of a p-group of maximal class.

    Requires p odd and n >= 4; raises NotMaximalClass when class != n-1.
    """
    if pres.p == 2:
        raise FrameError("p even")
    if pres.n <= 3:
        raise FrameError("n too small")
    n = pres.n
    gammas = lower_central_series(pres)
    cls = len(gammas.terms) - 1
    if cls != n - 1:
        raise NotMaximalClass(f"not maximal class: class {cls}, order p^{n}")
    gamma2 = gammas.terms[1]
    # P_i = gamma_i for i >= 2; with class n-1 the chain gamma_2..gamma_n ends at 1
    P = [full_subgroup(pres), None] + list(gammas.terms[1:])
    P4 = P[4] if n >= 4 else trivial_subgroup(pres)
    P1 = _centralizer_of_section(pres, gamma2, gamma2, P4)
    P[1] = P1
    CG = _centralizer_of_section(pres, gamma2, P[n - 2], trivial_subgroup(pres))

    s0 = None
    for vec in _scan_elements(pres, scan):
        x = tuple(vec)
        if not P1.contains(x) and not CG.contains(x):
            s0 = x
            break
    if s0 is None:
        raise NotMaximalClass("no element outside both two-step centralizers")
    s1 = None
    for vec in _scan_elements(pres, scan):
        x = tuple(vec)
        if P1.contains(x) and not gamma2.contains(x):
            s1 = x
            break
    assert s1 is not None
    s = [s0, s1]
    for i in range(2, n):
        s.append(pres.commutator(s[i - 1], s0))
    for i in range(n):
        if not P[i].contains(s[i]) or P[i + 1].contains(s[i]):
            raise NotMaximalClass(f"s_{i} violates the section membership constraints")
    for i in range(n):
        if P[i].order_int() != pres.p ** (n - i):
            raise NotMaximalClass(f"section P_{i}/P_{i + 1} does not have order p")
    exp, mode = full_subgroup(pres).exponent()
    if mode != "exact":
        raise CheckFailure("group too large for exact exponent computation")
    series = SubgroupSeries(tuple(P), tuple(f"P_{i}" for i in range(len(P))))
    return MaximalClassFrame(pres, series, (P1, CG), tuple(s), exp)


def exponent_check_P2(frame: MaximalClassFrame):
    """(exp P_2(G), exp G); the first component must equal p."""
    p, n = frame.p, frame.n
    if not 4 <= n <= p + 1:
        raise FrameError(f"exponent check needs 4 <= n <= p+1, got n={n}, p={p}")
    e2, mode = frame.P(2).exponent()
    if mode != "exact":
        raise CheckFailure("P_2 too large for exact exponent computation")
    eg = frame.exponent_of_G
    if e2 != p:
        raise CheckFailure(f"exp(P_2) = {e2} != p = {p}")
    if eg not in (p, p * p):
        raise CheckFailure(f"exp(G) = {eg} not in {{p, p^2}}")
    return (e2, eg)


def abelian_invariants(pres: PcPresentation, H: Optional[Subgroup] = None):
    """Invariant-factor decomposition of an abelian subgroup (default: G)."""
    if H is None:
        H = full_subgroup(pres)
    return H.abelian_invariants()
