"""Arithmetic in finite p-groups given by refined power-commutator presentations.

A presentation on generators g_0 .. g_{n-1} (0-based internally, 1-based in
the text format) consists of power relations g_i^p = w_i and commutator
relations [g_j, g_i] = w_ji for j > i, where every right side only uses
generators of strictly larger index.  All relative orders equal p, so the
group has order p^n and every element has a unique normal form
g_0^{e_0} ... g_{n-1}^{e_{n-1}} with 0 <= e_i < p.

Elements are plain tuples of ints.  Words are sequences of (generator,
exponent) pairs with nonzero integer exponents; negative exponents are
allowed and are rewritten through precomputed generator inverses before
collection.  Conventions: [a, b] = a^-1 b^-1 a b and a^b = b^-1 a b.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from ._collect import PackedPresentation, collect_word, pair_index
from .errors import InconsistentPresentation, InputError

Element = tuple  # exponent vector, length ngens, entries in [0, p-1]
Word = Sequence  # of (gen, exp) pairs


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


class Violation(NamedTuple):
    kind: str          # "assoc", "pow_left", "pow_right", "pow_self"
    indices: tuple     # generator indices of the test word
    lhs: tuple         # first normal form
    rhs: tuple         # second normal form


class PcPresentation:
    """Consistent refined power-commutator presentation of a finite p-group.

    Immutable after construction; all operations are pure functions of
    (presentation, elements), so instances can be shared across threads.
    """

    def __init__(self, p, ngens, powers=None, comms=None, weights=None, definitions=None):
        """powers: {i: word} right sides of g_i^p, comms: {(j, i): word} with j > i.

        Words are iterables of (gen, exp); exponents are normalized into
        [1, p-1] and zero syllables dropped.
        """
        if not _is_prime(p):
            raise InputError(f"prime expected, got {p}")
        if ngens < 0:
            raise InputError("ngens must be >= 0")
        self.p = p
        self.n = ngens
        powers = dict(powers or {})
        comms = dict(comms or {})
        self.power_rhs = {}
        for i, w in powers.items():
            if not 0 <= i < ngens:
                raise InputError(f"power relation for generator {i} out of range")
            cw = self._canon_rhs(w, i)
            if cw:
                self.power_rhs[i] = cw
        self.comm_rhs = {}
        for (j, i), w in comms.items():
            if not (0 <= i < j < ngens):
                raise InputError(f"commutator pair ({j}, {i}) invalid")
            cw = self._canon_rhs(w, j)
            if cw:
                self.comm_rhs[(j, i)] = cw
        self.weights = tuple(weights) if weights is not None else None
        self.definitions = tuple(definitions) if definitions is not None else None
        rhs_words = []
        for i in range(ngens):
            rhs_words.append(self.power_rhs.get(i, ()))
        for j in range(ngens):
            for i in range(j):
                rhs_words.append(self.comm_rhs.get((j, i), ()))
        # rhs list above is ordered by rid = n + pair_index(j, i); pair_index
        # iterates i fastest which matches the nested loop order
        self._packed = PackedPresentation(ngens, p, rhs_words)
        self.identity = (0,) * ngens
        self._inv_words = self._build_inverse_words()

    def _canon_rhs(self, word, owner):
        out = []
        for g, e in word:
            if not owner < g < self.n:
                raise InputError(
                    f"right side references generator {g}, must lie in ({owner}, {self.n})")
            e %= self.p
            if e:
                out.append((int(g), int(e)))
        return tuple(out)

    # -- basic collection ------------------------------------------------

    def _collect_positive(self, syllables, start=None):
        evec = np.zeros(self.n, dtype=np.int64) if start is None else np.asarray(start, dtype=np.int64).copy()
        tails = np.zeros(0, dtype=np.int64)
        if syllables:
            wg = np.asarray([g for g, _ in syllables], dtype=np.int64)
            we = np.asarray([e for _, e in syllables], dtype=np.int64)
            self._packed.collect_into(evec, tails, wg, we)
        return tuple(int(x) for x in evec)

    def _build_inverse_words(self):
        inv = []
        for i in range(self.n):
            a = tuple(1 if k == i else 0 for k in range(self.n))
            inv.append(self._peel_inverse(a))
        return tuple(inv)

    def _peel_inverse(self, a):
        """Normal-form word of a^-1, found coordinate by coordinate.

        Right-multiplying by g_i^k never changes coordinates below i, so
        zeroing coordinates left to right terminates with the inverse.
        """
        p = self.p
        b = []
        r = a
        for i in range(self.n):
            e = r[i]
            if e:
                b.append((i, p - e))
                r = self._collect_positive([(i, p - e)], start=r)
        assert r == self.identity
        return tuple(b)

    def normalize_word(self, word):
        """Rewrite a word with arbitrary nonzero integer exponents into an
        equivalent positive word over the same generators."""
        out = []
        for g, e in word:
            g = int(g)
            e = int(e)
            if not 0 <= g < self.n:
                raise InputError(f"word references generator {g}, alphabet has {self.n}")
            if e == 0:
                continue
            if e > 0:
                out.append((g, e))
            else:
                iw = self._inv_words[g]
                for _ in range(-e):
                    out.extend(iw)
        return out

    def collect(self, word) -> Element:
        """Normal form of the group element represented by the word."""
        return self._collect_positive(self.normalize_word(word))

    def word_of(self, a) -> tuple:
        """Normal-form word of an element."""
        return tuple((i, int(e)) for i, e in enumerate(a) if e)

    def element(self, seq) -> Element:
        """Validate and canonicalize an exponent vector."""
        seq = tuple(int(x) for x in seq)
        if len(seq) != self.n:
            raise InputError(f"exponent vector length {len(seq)}, expected {self.n}")
        if any(not 0 <= x < self.p for x in seq):
            raise InputError("exponent out of range [0, p-1]")
        return seq

    # -- group operations --------------------------------------------------

    def multiply(self, a, b) -> Element:
        return self._collect_positive(self.word_of(b), start=a)

    def inverse(self, a) -> Element:
        return self._collect_positive(self._peel_inverse(a))

    def power(self, a, k: int) -> Element:
        if k < 0:
            a = self.inverse(a)
            k = -k
        result = self.identity
        base = a
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result

    def conjugate(self, a, b) -> Element:
        """b^-1 a b"""
        return self.multiply(self.multiply(self.inverse(b), a), b)

    def commutator(self, a, b) -> Element:
        """a^-1 b^-1 a b"""
        ab = self.multiply(a, b)
        ba = self.multiply(b, a)
        return self.multiply(self.inverse(ba), ab)

    def order_of(self, a) -> int:
        """Least k >= 1 with a^k = 1; always a power of p."""
        k = 1
        x = a
        while x != self.identity:
            x = self.power(x, self.p)
            k *= self.p
        return k

    def elements(self) -> Iterable[Element]:
        """All p^n elements in lexicographic order of exponent vectors."""
        import itertools
        return itertools.product(range(self.p), repeat=self.n)

    def order(self):
        """Group order as a (p, exponent) pair; p^n may exceed machine range."""
        return (self.p, self.n)

    # -- consistency -------------------------------------------------------

    def check_consistency(self, max_weight=None, weight=None):
        """Evaluate the overlap test words; return the list of violations.

        Empty list iff the presentation is consistent.  If max_weight is
        given together with per-generator weights, overlaps of total weight
        exceeding it are skipped (used by the quotient engine).
        """
        if weight is None:
            weight = self.weights
        viols = []
        n, p = self.n, self.p

        def wsum(*gens):
            if weight is None:
                return 0
            return sum(weight[g] for g in gens)

        gen = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        for k in range(n):
            for j in range(k):
                for i in range(j):
                    if max_weight is not None and wsum(k, j, i) > max_weight:
                        continue
                    # g_k (g_j g_i) vs (g_k g_j) g_i
                    lhs = self.multiply(gen[k], self.multiply(gen[j], gen[i]))
                    rhs = self.multiply(self.multiply(gen[k], gen[j]), gen[i])
                    if lhs != rhs:
                        viols.append(Violation("assoc", (k, j, i), lhs, rhs))
        for j in range(n):
            for i in range(j):
                if max_weight is not None and wsum(j, i) > max_weight:
                    continue
                # g_j^p g_i vs g_j^{p-1} (g_j g_i)
                lhs = self.multiply(self.power(gen[j], p), gen[i])
                rhs = self.multiply(self.power(gen[j], p - 1), self.multiply(gen[j], gen[i]))
                if lhs != rhs:
                    viols.append(Violation("pow_left", (j, i), lhs, rhs))
                # g_j g_i^p vs (g_j g_i) g_i^{p-1}
                lhs = self.multiply(gen[j], self.power(gen[i], p))
                rhs = self.multiply(self.multiply(gen[j], gen[i]), self.power(gen[i], p - 1))
                if lhs != rhs:
                    viols.append(Violation("pow_right", (j, i), lhs, rhs))
        for i in range(n):
            if max_weight is not None and wsum(i) > max_weight:
                continue
            lhs = self.multiply(self.power(gen[i], p), gen[i])
            rhs = self.multiply(gen[i], self.power(gen[i], p))
            if lhs != rhs:
                viols.append(Violation("pow_self", (i,), lhs, rhs))
        return viols

    def require_consistent(self):
        viols = self.check_consistency()
        if viols:
            v = viols[0]
            raise InconsistentPresentation(
                f"{len(viols)} violated test words; first: {v.kind}{v.indices}: "
                f"{v.lhs} != {v.rhs}")

    # -- misc ----------------------------------------------------------------

    def __repr__(self):
        return f"PcPresentation(p={self.p}, ngens={self.n})"

    def __eq__(self, other):
        if not isinstance(other, PcPresentation):
            return NotImplemented
        return (self.p == other.p and self.n == other.n
                and self.power_rhs == other.power_rhs
                and self.comm_rhs == other.comm_rhs)

    def __hash__(self):
        return hash((self.p, self.n,
                     tuple(sorted(self.power_rhs.items())),
                     tuple(sorted(self.comm_rhs.items()))))


# -- module-level operation wrappers (the functional API) -------------------

def collect(pres: PcPresentation, word) -> Element:
    return pres.collect(word)


def multiply(pres, a, b) -> Element:
    return pres.multiply(a, b)


def inverse(pres, a) -> Element:
    return pres.inverse(a)


def power(pres, a, k) -> Element:
    return pres.power(a, k)


def commutator(pres, a, b) -> Element:
    return pres.commutator(a, b)


def conjugate(pres, a, b) -> Element:
    return pres.conjugate(a, b)


def order_of(pres, a) -> int:
    return pres.order_of(a)


def check_consistency(pres) -> list:
    return pres.check_consistency()


# -- PCP text format ---------------------------------------------------------

def parse_pcp(text: str) -> PcPresentation:
    """Parse the PCP text format.

    Lines: `pcgroup`, `prime <p>`, `gens <n>`, zero or more
    `pow <i> := <j>^<e> ...`, zero or more `comm <j> <i> := ...`, `end`.
    Indices are 1-based; `#` starts a comment line.
    """
    lines = []
    for raw in text.splitlines():
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        lines.append(s)
    if not lines or lines[0] != "pcgroup":
        raise InputError("expected 'pcgroup' header")
    if lines[-1] != "end":
        raise InputError("expected trailing 'end'")
    body = lines[1:-1]
    p = None
    n = None
    powers = {}
    comms = {}

    def parse_rhs(tokens, low, p, n):
        word = []
        for tok in tokens:
            if "^" in tok:
                gs, es = tok.split("^", 1)
            else:
                gs, es = tok, "1"
            try:
                g = int(gs)
                e = int(es)
            except ValueError:
                raise InputError(f"bad syllable {tok!r}")
            if not 1 <= g <= n:
                raise InputError(f"right-side index {g} out of range")
            if g - 1 <= low:
                raise InputError(f"right-side index {g} not strictly larger than {low + 1}")
            if not 1 <= e <= p - 1:
                raise InputError(f"exponent {e} outside [1, {p - 1}]")
            word.append((g - 1, e))
        return word

    for line in body:
        parts = line.split()
        if parts[0] == "prime":
            if p is not None or len(parts) != 2:
                raise InputError("bad 'prime' line")
            p = int(parts[1])
            if not _is_prime(p):
                raise InputError(f"{p} is not prime")
        elif parts[0] == "gens":
            if n is not None or len(parts) != 2:
                raise InputError("bad 'gens' line")
            n = int(parts[1])
            if n < 0:
                raise InputError("gens must be >= 0")
        elif parts[0] == "pow":
            if p is None or n is None:
                raise InputError("'pow' before prime/gens")
            if len(parts) < 3 or parts[2] != ":=":
                raise InputError(f"bad pow line: {line!r}")
            i = int(parts[1]) - 1
            if not 0 <= i < n:
                raise InputError(f"pow index {i + 1} out of range")
            if i in powers:
                raise InputError(f"duplicate pow {i + 1}")
            powers[i] = parse_rhs(parts[3:], i, p, n)
        elif parts[0] == "comm":
            if p is None or n is None:
                raise InputError("'comm' before prime/gens")
            if len(parts) < 4 or parts[3] != ":=":
                raise InputError(f"bad comm line: {line!r}")
            j = int(parts[1]) - 1
            i = int(parts[2]) - 1
            if not 0 <= i < j < n:
                raise InputError(f"comm pair ({j + 1}, {i + 1}) invalid")
            if (j, i) in comms:
                raise InputError(f"duplicate comm {j + 1} {i + 1}")
            comms[(j, i)] = parse_rhs(parts[4:], j, p, n)
        else:
            raise InputError(f"unrecognized line: {line!r}")
    if p is None or n is None:
        raise InputError("missing prime or gens")
    return PcPresentation(p, n, powers, comms)


def dump_pcp(pres: PcPresentation, comment: Optional[str] = None) -> str:
    """Serialize in the canonical (bit-exact) PCP text form."""
    out = []
    if comment:
        for ln in comment.splitlines():
            out.append(f"# {ln}")
    out.append("pcgroup")
    out.append(f"prime {pres.p}")
    out.append(f"gens {pres.n}")
    for i in range(pres.n):
        w = pres.power_rhs.get(i)
        if w:
            rhs = " ".join(f"{g + 1}^{e}" for g, e in w)
            out.append(f"pow {i + 1} := {rhs}")
    for j in range(pres.n):
        for i in range(j):
            w = pres.comm_rhs.get((j, i))
            if w:
                rhs = " ".join(f"{g + 1}^{e}" for g, e in w)
                out.append(f"comm {j + 1} {i + 1} := {rhs}")
    out.append("end")
    return "\n".join(out) + "\n"
