"""Largest nilpotent quotient of class <= C of a finite presentation.

Class-by-class central extension with tails.  At each class step every
power and commutator relation that does not serve as a definition gets a
new central tail generator, as does the image of every abstract generator
that is not pinned exactly; consistency test words and relator images then
yield integer linear equations on the tails.  The equation system is
solved by Hermite reduction over Z, dead tails are eliminated newest
first, and surviving tails are refined into chains of prime-order
generators, so the working presentation always stays refined.  Sections
may have exponent p^2 or higher, which is why the linear algebra runs
over Z and not GF(p).

Every generator carries a definition (abstract-generator image, relation
tail, image correction, or p-th power in a chain), which both pins the
epimorphism and lets homomorphisms out of the quotient be rebuilt from
images of the abstract generators alone.

The step is self-certifying: after extension the full consistency test
and all relator images are re-verified on the new presentation.  A passing
presentation is exactly the largest class-k quotient, independent of which
equation subset was collected, so the weight filter on overlap words is an
optimization with a loud failure mode, not a correctness assumption.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._collect import PackedPresentation, pair_index
from .errors import (
    InfiniteSection,
    InputError,
    NotPGroupSection,
    TailsSystemError,
)
from .intlinalg import hermite_row_echelon
from .nu import FpPresentation
from .pcp import PcPresentation


def _p_power_exponent(d: int, p: int) -> Optional[int]:
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    return e if d == 1 else None


@dataclass
class QuotientResult:
    """Consistent pc presentation of the quotient plus the epimorphism data."""

    fp: FpPresentation
    prime: int
    quotient: PcPresentation
    images: tuple            # element of quotient per abstract generator
    image_exact: tuple       # True where the image is pinned by a definition
    class_reached: int
    section_ranks: tuple     # per class: (p, number of prime-order generators)

    def image_of(self, l):
        return self.images[l]

    def evaluate_word(self, word):
        """Image in the quotient of a word over the abstract alphabet."""
        Q = self.quotient
        x = Q.identity
        for l, e in word:
            if not 0 <= l < self.fp.ngens:
                raise InputError(f"abstract generator {l} out of range")
            x = Q.multiply(x, Q.power(self.images[l], e))
        return x


def evaluate_relator(result: QuotientResult, r) -> tuple:
    return result.evaluate_word(r)


# -- expressions over the new central layer ----------------------------------

class _Layer:
    """Bookkeeping for the new central generators created in one class step.

    Chains are keyed by the tail column that survived; a chain of modulus
    p^e occupies e consecutive generator slots linked by p-th powers.
    """

    def __init__(self, p, base_ngens):
        self.p = p
        self.base = base_ngens
        self.chains = {}        # col -> (modulus, slots tuple)
        self.order = []         # cols in ascending order

    def add_chain(self, col, modulus):
        self.chains[col] = (modulus, None)
        self.order.append(col)

    def assign_slots(self):
        nxt = self.base
        for col in sorted(self.order):
            modulus, _ = self.chains[col]
            e = 0
            m = modulus
            while m > 1:
                m //= self.p
                e += 1
            slots = tuple(range(nxt, nxt + e))
            nxt += e
            self.chains[col] = (modulus, slots)
        self.order = sorted(self.order)
        self.nslots = nxt - self.base

    def scale_add(self, dst, src, factor):
        for col, v in src.items():
            modulus = self.chains[col][0]
            nv = (dst.get(col, 0) + v * factor) % modulus
            if nv:
                dst[col] = nv
            elif col in dst:
                del dst[col]

    def word(self, expr):
        out = []
        for col in sorted(expr, key=lambda c: self.chains[c][1][0]):
            v = expr[col] % self.chains[col][0]
            for s in self.chains[col][1]:
                v, d = divmod(v, self.p)
                if d:
                    out.append((s, d))
            assert v == 0
        out.sort()
        return tuple(out)


# -- extended (tails) arithmetic ----------------------------------------------

class _TailsContext:
    """Collection in the central extension of Q by free tails."""

    def __init__(self, Q: PcPresentation, rel_tail, ntails):
        self.Q = Q
        self.n = Q.n
        self.p = Q.p
        self.T = ntails
        rhs = [Q.power_rhs.get(i, ()) for i in range(Q.n)]
        for j in range(Q.n):
            for i in range(j):
                rhs.append(Q.comm_rhs.get((j, i), ()))
        self.packed = PackedPresentation(Q.n, Q.p, rhs, rel_tail, ntails,
                                         use_numba=Q._packed.use_numba)
        self._inv = [self._gen_inverse(i) for i in range(Q.n)]

    def collect_pos(self, sylls, start=None):
        evec = np.zeros(self.n, dtype=np.int64) if start is None else \
            np.asarray(start, dtype=np.int64).copy()
        tails = np.zeros(self.T, dtype=np.int64)
        if sylls:
            wg = np.asarray([g for g, _ in sylls], dtype=np.int64)
            we = np.asarray([e for _, e in sylls], dtype=np.int64)
            self.packed.collect_into(evec, tails, wg, we)
        return evec, tails

    def _gen_inverse(self, i):
        # peel the inverse coordinate by coordinate (positive collects only)
        p, n = self.p, self.n
        bsyl = []
        r = np.zeros(n, dtype=np.int64)
        r[i] = 1
        for c in range(n):
            e = int(r[c])
            if e:
                bsyl.append((c, p - e))
                r, _ = self.collect_pos([(c, p - e)], start=r)
        assert not r.any()
        _, tau = self.collect_pos([(i, 1)] + bsyl)
        return tuple(bsyl), -tau

    def word_ext(self, word, acc):
        """Rewrite a word with signed exponents into positive syllables,
        adding inverse-substitution tail corrections into acc."""
        out = []
        for g, e in word:
            if e > 0:
                out.append((g, e))
            elif e < 0:
                iw, it = self._inv[g]
                for _ in range(-e):
                    out.extend(iw)
                acc += (-e) * it
        return out

    def eval_word(self, word):
        acc = np.zeros(self.T, dtype=np.int64)
        sylls = self.word_ext(word, acc)
        evec, tails = self.collect_pos(sylls)
        return evec, tails + acc

    # extended elements are (evec ndarray, tails ndarray)

    def gen_ext(self, i):
        e = np.zeros(self.n, dtype=np.int64)
        e[i] = 1
        return e, np.zeros(self.T, dtype=np.int64)

    def mul_ext(self, A, B):
        ea, ta = A
        eb, tb = B
        sylls = [(int(g), int(x)) for g, x in enumerate(eb) if x]
        evec, t = self.collect_pos(sylls, start=ea)
        return evec, ta + tb + t

    def pow_ext(self, A, k):
        out = (np.zeros(self.n, dtype=np.int64), np.zeros(self.T, dtype=np.int64))
        for _ in range(k):
            out = self.mul_ext(out, A)
        return out


# -- equation gathering --------------------------------------------------------

def _consistency_rows(ctx: _TailsContext, weights, k, filtered):
    rows = []
    n, p = ctx.n, ctx.p

    def add(L, R, what):
        if not np.array_equal(L[0], R[0]):
            raise TailsSystemError(f"inconsistent tails system: base parts differ at {what}")
        d = L[1] - R[1]
        if d.any():
            rows.append([int(x) for x in d])

    gens = [ctx.gen_ext(i) for i in range(n)]
    gpow = [ctx.pow_ext(gens[i], p) for i in range(n)]
    gpow1 = [ctx.pow_ext(gens[i], p - 1) for i in range(n)]
    for c in range(n):
        for b in range(c):
            for a in range(b):
                if filtered and weights[a] + weights[b] + weights[c] > k:
                    continue
                L = ctx.mul_ext(gens[c], ctx.mul_ext(gens[b], gens[a]))
                R = ctx.mul_ext(ctx.mul_ext(gens[c], gens[b]), gens[a])
                add(L, R, ("assoc", c, b, a))
    for b in range(n):
        for a in range(b):
            L = ctx.mul_ext(gpow[b], gens[a])
            R = ctx.mul_ext(gpow1[b], ctx.mul_ext(gens[b], gens[a]))
            add(L, R, ("pow_left", b, a))
            L = ctx.mul_ext(gens[b], gpow[a])
            R = ctx.mul_ext(ctx.mul_ext(gens[b], gens[a]), gpow1[a])
            add(L, R, ("pow_right", b, a))
    for a in range(n):
        L = ctx.mul_ext(gpow[a], gens[a])
        R = ctx.mul_ext(gens[a], gpow[a])
        add(L, R, ("pow_self", a))
    return rows


def _relator_rows(ctx: _TailsContext, fp, images, img_tail):
    rows = []
    Q = ctx.Q
    fwd = {}
    bwd = {}
    for l in range(fp.ngens):
        w = Q.word_of(images[l])
        tv = np.zeros(ctx.T, dtype=np.int64)
        if l in img_tail:
            tv[img_tail[l]] = 1
        fwd[l] = (w, tv)
        ainv = Q.inverse(images[l])
        _, tau = ctx.collect_pos(list(w) + list(Q.word_of(ainv)))
        bwd[l] = (Q.word_of(ainv), -tv - tau)
    for rel in fp.relators:
        sylls = []
        acc = np.zeros(ctx.T, dtype=np.int64)
        for l, e in rel:
            if e > 0:
                w, tv = fwd[l]
                for _ in range(e):
                    sylls.extend(w)
                acc += e * tv
            else:
                w, tv = bwd[l]
                for _ in range(-e):
                    sylls.extend(w)
                acc += (-e) * tv
        evec, tails = ctx.collect_pos(sylls)
        if evec.any():
            raise TailsSystemError("relator image nontrivial in the base quotient")
        d = tails + acc
        if d.any():
            rows.append([int(x) for x in d])
    return rows


# -- the class steps -----------------------------------------------------------

def _solve_layer(rows, ncols, p, base_ngens, step_label):
    """Hermite-solve the tail system; returns (layer, expressions)."""
    basis = hermite_row_echelon(rows, ncols)
    for col in range(ncols):
        if col not in basis:
            raise InfiniteSection(f"unbounded section at {step_label} (column {col})")
    layer = _Layer(p, base_ngens)
    for col in range(ncols):
        d = basis[col][col]
        if d > 1:
            e = _p_power_exponent(d, p)
            if e is None:
                raise NotPGroupSection(f"section invariant {d} is not a power of {p}")
            layer.add_chain(col, d)
    layer.assign_slots()
    expr = {}
    for col in range(ncols - 1, -1, -1):
        row = basis[col]
        rest = {}
        for l in range(col + 1, ncols):
            if row[l]:
                layer.scale_add(rest, expr[l], -row[l])
        if col in layer.chains:
            expr[col] = {col: 1}
            layer.chains[col] = layer.chains[col] + (rest,)  # (modulus, slots, rest)
        else:
            expr[col] = rest
    return layer, expr


def _abelian_step(fp: FpPresentation, p: int):
    s = fp.ngens
    rows = []
    for rel in fp.relators:
        vec = [0] * s
        for l, e in rel:
            vec[l] += e
        if any(vec):
            rows.append(vec)
    if s == 0:
        Q = PcPresentation(p, 0, weights=(), definitions=())
        return Q, (), ()
    layer, expr = _solve_layer(rows, s, p, 0, "class 1")
    powers = {}
    definitions = []
    slot_def = {}
    for col in layer.order:
        modulus, slots, rest = layer.chains[col]
        slot_def[slots[0]] = ("image", col)
        for q in range(1, len(slots)):
            slot_def[slots[q]] = ("power", slots[q - 1])
        for q in range(len(slots) - 1):
            powers[slots[q]] = [(slots[q + 1], 1)]
        w = layer.word(rest)
        if w:
            powers[slots[-1]] = list(w)
    m = layer.nslots
    definitions = tuple(slot_def[i] for i in range(m))
    Q = PcPresentation(p, m, powers, {}, weights=(1,) * m, definitions=definitions)
    images = []
    exact = []
    for l in range(s):
        w = layer.word(expr[l])
        images.append(Q.collect(w))
        exact.append(l in layer.chains)
    return Q, tuple(images), tuple(exact)


def _class_step(fp, Q, images, image_exact, k, filtered=True):
    n, p = Q.n, Q.p
    npairs = (n * (n - 1)) // 2
    weights = Q.weights
    defined_rids = set()
    for a, d in enumerate(Q.definitions):
        if d[0] == "powrel":
            defined_rids.add(d[1])
        elif d[0] == "power":
            defined_rids.add(d[1])
        elif d[0] == "commrel":
            defined_rids.add(n + pair_index(d[1], d[2]))

    tails = []
    img_tail = {}
    for l in range(fp.ngens):
        if not image_exact[l]:
            img_tail[l] = len(tails)
            tails.append(("img", l))
    rel_tail = np.full(n + npairs, -1, dtype=np.int64)
    for i in range(n):
        if i not in defined_rids:
            rel_tail[i] = len(tails)
            tails.append(("rel", i))
    for j in range(n):
        for i in range(j):
            rid = n + pair_index(j, i)
            if rid in defined_rids:
                continue
            if weights[j] + weights[i] > k:
                assert not Q.comm_rhs.get((j, i)), "deep commutator has nontrivial value"
                continue
            rel_tail[rid] = len(tails)
            tails.append(("rel", rid))
    T = len(tails)
    if T == 0:
        return Q, images, image_exact, 0

    ctx = _TailsContext(Q, rel_tail, T)
    rows = _consistency_rows(ctx, weights, k, filtered)
    rows += _relator_rows(ctx, fp, images, img_tail)
    layer, expr = _solve_layer(rows, T, p, n, f"class {k}")

    powers = {i: list(w) for i, w in Q.power_rhs.items()}
    comms = {ji: list(w) for ji, w in Q.comm_rhs.items()}
    for rid in range(n + npairs):
        t = int(rel_tail[rid])
        if t < 0:
            continue
        w = layer.word(expr[t])
        if not w:
            continue
        if rid < n:
            powers.setdefault(rid, []).extend(w)
        else:
            # decode the pair index
            j = 1
            while pair_index(j + 1, 0) <= rid - n:
                j += 1
            i = rid - n - pair_index(j, 0)
            comms.setdefault((j, i), []).extend(w)
    slot_def = {}
    for col in layer.order:
        modulus, slots, rest = layer.chains[col]
        kind, payload = tails[col]
        if kind == "img":
            slot_def[slots[0]] = ("imagerel", payload, Q.word_of(images[payload]))
        else:
            rid = payload
            if rid < n:
                slot_def[slots[0]] = ("powrel", rid)
            else:
                j = 1
                while pair_index(j + 1, 0) <= rid - n:
                    j += 1
                i = rid - n - pair_index(j, 0)
                slot_def[slots[0]] = ("commrel", j, i)
        for q in range(1, len(slots)):
            slot_def[slots[q]] = ("power", slots[q - 1])
        for q in range(len(slots) - 1):
            powers[slots[q]] = [(slots[q + 1], 1)]
        w = layer.word(rest)
        if w:
            powers[slots[-1]] = list(w)
    nslots = layer.nslots
    m2 = n + nslots
    definitions = tuple(Q.definitions) + tuple(slot_def[i] for i in range(n, m2))
    new_weights = tuple(Q.weights) + (k,) * nslots
    Q2 = PcPresentation(p, m2, powers, comms, weights=new_weights, definitions=definitions)

    pad = (0,) * nslots
    images2 = []
    for l in range(fp.ngens):
        base = tuple(images[l]) + pad
        if l in img_tail:
            w = layer.word(expr[img_tail[l]])
            base = Q2.collect(Q2.word_of(base) + w)
        images2.append(base)
    return Q2, tuple(images2), tuple(image_exact), nslots


def _verify_step(fp, Q, images):
    if Q.check_consistency():
        return False
    for rel in fp.relators:
        x = Q.identity
        for l, e in rel:
            x = Q.multiply(x, Q.power(images[l], e))
        if x != Q.identity:
            return False
    return True


def nilpotent_quotient(fp: FpPresentation, class_bound: int, prime: int,
                       trace=None) -> QuotientResult:
    """Largest nilpotent quotient of class <= class_bound, which must be a
    finite p-group for the given prime.

    Raises InfiniteSection when a class step produces an unbounded section
    (under-specified relator set) and NotPGroupSection when a section order
    is not a p-power.
    """
    if class_bound < 1:
        raise InputError("class bound must be >= 1")
    Q, images, image_exact = _abelian_step(fp, prime)
    if not _verify_step(fp, Q, images):
        raise TailsSystemError("abelian step failed verification")
    section_ranks = [(prime, Q.n)]
    if trace:
        trace(1, Q.n)
    k = 1
    while k < class_bound and fp.ngens:
        k += 1
        Q2, images2, image_exact2, count = _class_step(fp, Q, images, image_exact, k)
        if count and not _verify_step(fp, Q2, images2):
            warnings.warn(f"class-{k} step needed the unfiltered equation set")
            Q2, images2, image_exact2, count = _class_step(
                fp, Q, images, image_exact, k, filtered=False)
            if count and not _verify_step(fp, Q2, images2):
                raise TailsSystemError(f"class-{k} step failed verification")
        if count == 0:
            break
        Q, images, image_exact = Q2, images2, image_exact2
        section_ranks.append((prime, count))
        if trace:
            trace(k, count)
    class_reached = max(Q.weights) if Q.n else 0
    return QuotientResult(fp, prime, Q, images, image_exact,
                          class_reached, tuple(section_ranks))
