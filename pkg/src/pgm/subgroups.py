"""Subgroups of pc-presented p-groups via induced (echelonized) sequences.

A subgroup is stored as a sequence of elements with strictly increasing
leading generator indices and leading exponent 1.  The sequence is closed
under p-th powers and pairwise commutators modulo deeper members, so
membership testing is a triangular sift and |H| = p^len(sequence).
"""

from __future__ import annotations

from itertools import product as _iterproduct
from typing import Callable, Iterable, Optional

from .errors import CheckFailure, InputError, NotAbelian
from .intlinalg import abelian_invariants_from_relations
from .pcp import PcPresentation


def _leading(a):
    for i, e in enumerate(a):
        if e:
            return i
    return None


class Subgroup:
    """Echelonized subgroup of a pc-presented group."""

    def __init__(self, ambient: PcPresentation, table: dict, is_normal: bool = False):
        self.ambient = ambient
        self.table = dict(table)  # leading index -> element with leading coeff 1
        self.leadings = tuple(sorted(self.table))
        self.pc_sequence = tuple(self.table[l] for l in self.leadings)
        self.is_normal = is_normal

    # -- queries ---------------------------------------------------------

    def order(self):
        """(p, exponent) pair; the subgroup order is p^exponent."""
        return (self.ambient.p, len(self.pc_sequence))

    def order_int(self) -> int:
        return self.ambient.p ** len(self.pc_sequence)

    def sift(self, x):
        """Residue of x after triangular reduction by the sequence."""
        amb = self.ambient
        while True:
            l = _leading(x)
            if l is None or l not in self.table:
                return x
            x = amb.multiply(amb.power(self.table[l], -x[l]), x)

    def coefficients(self, x):
        """Exponents (a_1, ..., a_r) with x = u_1^{a_1} ... u_r^{a_r}.

        Raises InputError when x is not a member.
        """
        amb = self.ambient
        coeffs = [0] * len(self.leadings)
        pos = {l: k for k, l in enumerate(self.leadings)}
        while True:
            l = _leading(x)
            if l is None:
                return tuple(coeffs)
            if l not in self.table:
                raise InputError(f"element not in subgroup (stuck at index {l})")
            c = x[l]
            coeffs[pos[l]] = c
            x = amb.multiply(amb.power(self.table[l], -c), x)

    def contains(self, x) -> bool:
        return _leading(self.sift(x)) is None

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.contains(u) for u in other.pc_sequence)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return (self.ambient is other.ambient or self.ambient == other.ambient) and \
            self.leadings == other.leadings and \
            self.contains_subgroup(other) and other.contains_subgroup(self)

    def __hash__(self):
        return hash((id(self.ambient), self.leadings))

    def elements(self) -> Iterable:
        """All p^r members, in lexicographic order of sequence exponents."""
        amb = self.ambient
        seq = self.pc_sequence
        powers = [[amb.power(u, e) for e in range(amb.p)] for u in seq]
        for exps in _iterproduct(range(amb.p), repeat=len(seq)):
            x = amb.identity
            for u_pows, e in zip(powers, exps):
                if e:
                    x = amb.multiply(x, u_pows[e])
            yield x

    def is_abelian(self) -> bool:
        seq = self.pc_sequence
        amb = self.ambient
        for i in range(len(seq)):
            for j in range(i):
                if amb.commutator(seq[i], seq[j]) != amb.identity:
                    return False
        return True

    def is_central_in(self, gens) -> bool:
        amb = self.ambient
        return all(amb.commutator(u, g) == amb.identity
                   for u in self.pc_sequence for g in gens)

    def exponent(self, enum_cap: int = 10 ** 6, samples: int = 10 ** 4, rng=None):
        """(exponent, mode) with mode 'exact' below the enumeration cap.

        Above the cap only the p-th powers of all sequence elements plus
        random products are inspected, and mode is 'sampled'.
        """
        amb = self.ambient
        p = amb.p
        if self.order_int() <= enum_cap:
            m = 1
            for x in self.elements():
                o = amb.order_of(x)
                if o > m:
                    m = o
            return m, "exact"
        import numpy as np
        if rng is None:
            rng = np.random.default_rng(0)
        m = 1
        for u in self.pc_sequence:
            o = amb.order_of(u)
            if o > m:
                m = o
        r = len(self.pc_sequence)
        for _ in range(samples):
            x = amb.identity
            for k in map(int, rng.integers(0, r, size=3)):
                e = int(rng.integers(1, p))
                x = amb.multiply(x, amb.power(self.pc_sequence[k], e))
            o = amb.order_of(x)
            if o > m:
                m = o
        return m, "sampled"

    def random_element(self, rng):
        amb = self.ambient
        x = amb.identity
        for u in self.pc_sequence:
            e = int(rng.integers(0, amb.p))
            if e:
                x = amb.multiply(x, amb.power(u, e))
        return x

    def abelian_invariants(self):
        """Invariant factors of an abelian subgroup via its relation matrix."""
        if not self.is_abelian():
            raise NotAbelian("subgroup is not abelian")
        amb = self.ambient
        r = len(self.pc_sequence)
        if r == 0:
            return []
        rows = []
        for i, u in enumerate(self.pc_sequence):
            coeffs = self.coefficients(amb.power(u, amb.p))
            row = [0] * r
            row[i] = amb.p
            for j in range(r):
                row[j] -= coeffs[j]
            rows.append(row)
        return abelian_invariants_from_relations(rows, r)

    def __repr__(self):
        return f"Subgroup(order={self.ambient.p}^{len(self.pc_sequence)}, leadings={self.leadings})"


def induced_subgroup(ambient: PcPresentation, generators, normal_closure: bool = False,
                     conjugators=None) -> Subgroup:
    """Echelonized closure of the given generators.

    With normal_closure the result is also closed under conjugation by
    `conjugators` (all ambient pc generators by default).
    """
    amb = ambient
    p = amb.p
    if normal_closure and conjugators is None:
        conjugators = [tuple(1 if k == i else 0 for k in range(amb.n)) for i in range(amb.n)]
    table = {}

    def sift_resid(x):
        while True:
            l = _leading(x)
            if l is None or l not in table:
                return x, l
            x = amb.multiply(amb.power(table[l], -x[l]), x)

    queue = [amb.element(g) for g in generators]
    while queue:
        x = queue.pop()
        r, l = sift_resid(x)
        if l is None:
            continue
        c = r[l]
        if c != 1:
            # normalize the leading exponent to 1 (c is a unit mod p)
            cinv = pow(c, -1, p)
            r = amb.power(r, cinv)
            assert r[l] == 1
        table[l] = r
        queue.append(amb.power(r, p))
        for u in list(table.values()):
            queue.append(amb.commutator(u, r))
        if normal_closure:
            for g in conjugators:
                queue.append(amb.conjugate(r, g))
    sub = Subgroup(amb, table, is_normal=normal_closure)
    for g in generators:
        assert sub.contains(amb.element(g)), "closure failed to absorb a generator"
    return sub


def trivial_subgroup(ambient) -> Subgroup:
    return Subgroup(ambient, {})


def full_subgroup(ambient) -> Subgroup:
    table = {i: tuple(1 if k == i else 0 for k in range(ambient.n)) for i in range(ambient.n)}
    return Subgroup(ambient, table, is_normal=True)


def quotient_presentation(H: Subgroup, N: Subgroup, check: bool = True):
    """Pc presentation of H/N for N normal in H.

    Returns (pres, reps, project, lift): reps are the coset representatives
    chosen from H's sequence, project maps an element of H to its quotient
    exponent vector, lift sends a quotient vector to a representative in H.
    """
    amb = H.ambient
    p = amb.p
    if not H.contains_subgroup(N):
        raise InputError("N is not contained in H")
    if check:
        for nel in N.pc_sequence:
            for h in H.pc_sequence:
                if not N.contains(amb.conjugate(nel, h)):
                    raise InputError("N is not normal in H")
    leadN = set(N.leadings)
    if not leadN <= set(H.leadings):
        raise AssertionError("incompatible echelons")
    adapted = {}
    for l in H.leadings:
        adapted[l] = N.table[l] if l in leadN else H.table[l]
    adapted_sub = Subgroup(amb, adapted)
    rep_leadings = [l for l in H.leadings if l not in leadN]
    reps = [adapted[l] for l in rep_leadings]
    r = len(reps)
    pos = {l: k for k, l in enumerate(adapted_sub.leadings)}
    rep_pos = [pos[l] for l in rep_leadings]

    def project(x):
        coeffs = adapted_sub.coefficients(x)
        return tuple(coeffs[k] for k in rep_pos)

    powers = {}
    comms = {}
    for a in range(r):
        vec = project(amb.power(reps[a], p))
        assert all(vec[b] == 0 for b in range(a + 1)), "quotient power not triangular"
        w = [(b, e) for b, e in enumerate(vec) if e]
        if w:
            powers[a] = w
    for b in range(r):
        for a in range(b):
            vec = project(amb.commutator(reps[b], reps[a]))
            assert all(vec[k] == 0 for k in range(b + 1)), "quotient commutator not triangular"
            w = [(k, e) for k, e in enumerate(vec) if e]
            if w:
                comms[(b, a)] = w
    pres = PcPresentation(p, r, powers, comms)
    if check:
        pres.require_consistent()

    def lift(vec):
        x = amb.identity
        for k, e in enumerate(vec):
            if e:
                x = amb.multiply(x, amb.power(reps[k], e))
        return x

    return pres, reps, project, lift


def subgroup_presentation(H: Subgroup, check: bool = True):
    """Pc presentation of the subgroup itself (quotient by the trivial group)."""
    return quotient_presentation(H, trivial_subgroup(H.ambient), check=check)


def direct_product(A: PcPresentation, B: PcPresentation) -> PcPresentation:
    """Direct product with A's generators first; cross commutators trivial."""
    if A.p != B.p:
        raise InputError("direct product needs a common prime")
    n = A.n + B.n
    powers = {}
    comms = {}
    for i, w in A.power_rhs.items():
        powers[i] = list(w)
    for (j, i), w in A.comm_rhs.items():
        comms[(j, i)] = list(w)
    off = A.n
    for i, w in B.power_rhs.items():
        powers[i + off] = [(g + off, e) for g, e in w]
    for (j, i), w in B.comm_rhs.items():
        comms[(j + off, i + off)] = [(g + off, e) for g, e in w]
    return PcPresentation(A.p, n, powers, comms)


class Homomorphism:
    """Map between pc-presented groups given by generator images.

    The defining relations of the domain are checked to map to the
    identity on construction unless check=False.
    """

    def __init__(self, domain: PcPresentation, codomain: PcPresentation,
                 images, check: bool = True):
        if len(images) != domain.n:
            raise InputError("one image per domain generator required")
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(codomain.element(im) for im in images)
        if check:
            bad = self.violations()
            if bad:
                raise CheckFailure(f"{len(bad)} domain relations have nontrivial image; first: {bad[0]}")

    def violations(self):
        dom, cod = self.domain, self.codomain
        out = []
        for i in range(dom.n):
            lhs = cod.power(self.images[i], dom.p)
            rhs = self.image_of_word(dom.power_rhs.get(i, ()))
            if lhs != rhs:
                out.append(("pow", i, lhs, rhs))
        for j in range(dom.n):
            for i in range(j):
                lhs = cod.commutator(self.images[j], self.images[i])
                rhs = self.image_of_word(dom.comm_rhs.get((j, i), ()))
                if lhs != rhs:
                    out.append(("comm", (j, i), lhs, rhs))
        return out

    def image_of_word(self, word):
        cod = self.codomain
        x = cod.identity
        for g, e in word:
            x = cod.multiply(x, cod.power(self.images[g], e))
        return x

    def __call__(self, a):
        return self.image_of_word(self.domain.word_of(self.domain.element(a)))

    def image_subgroup(self, normal_closure=False) -> Subgroup:
        return induced_subgroup(self.codomain, self.images, normal_closure=normal_closure)
