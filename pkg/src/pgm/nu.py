"""Finite presentation of nu(G) from a pc presentation of G.

nu(G) is the quotient of the free product G * G^phi by the relations
making conjugation by g and by g^phi agree on the commutators [g_1, g_2^phi].
The presentation uses 2n abstract generators: x_1..x_n for the first copy
and y_1..y_n for the phi copy.  Relators are instantiated on generator
triples only; conjugates appearing inside them are pre-collected in G so
relator lengths stay bounded by n*p.  The sampling suites certify that the
relations hold for arbitrary element triples in the computed group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InputError
from .pcp import PcPresentation


def inv_word(word):
    return tuple((g, -e) for g, e in reversed(word))


def comm_word(u, v):
    return inv_word(u) + inv_word(v) + tuple(u) + tuple(v)


def conj_word(w, g_syllable):
    g, e = g_syllable
    return ((g, -e),) + tuple(w) + ((g, e),)


@dataclass(frozen=True)
class FpPresentation:
    """Abstract generators plus relator words equal to the identity."""

    ngens: int
    relators: tuple
    half: Optional[int] = None  # set for nu-presentations: x = 0..half-1, y = half..2*half-1
    source: Optional[PcPresentation] = None  # the G a nu-presentation was built from

    def __post_init__(self):
        for rel in self.relators:
            for g, e in rel:
                if not 0 <= g < self.ngens:
                    raise InputError(f"relator references generator {g}")
                if e == 0:
                    raise InputError("zero exponent in relator")


def phi_swap(word, half: int):
    """Exchange x_i <-> y_i in a word over the nu alphabet."""
    out = []
    for g, e in word:
        if g < half:
            out.append((g + half, e))
        else:
            out.append((g - half, e))
    return tuple(out)


def build_nu_presentation(pres: PcPresentation) -> FpPresentation:
    """Relators: both copies of G's pc relations, plus for every generator
    triple (i, j, k) the words equating [x_i, y_j]^{x_k} with
    [x_i^{x_k}, (x_j^{x_k}) translated to y] and with [x_i, y_j]^{y_k}."""
    n = pres.n
    p = pres.p

    def xw(word):
        return tuple((g, e) for g, e in word)

    def yw(word):
        return tuple((g + n, e) for g, e in word)

    relators = []
    for copy in (xw, yw):
        for i in range(n):
            w = pres.power_rhs.get(i, ())
            relators.append(((copy([(i, 1)])[0][0], p),) + inv_word(copy(w)))
        for j in range(n):
            for i in range(j):
                w = pres.comm_rhs.get((j, i), ())
                cj = copy([(j, 1)])[0][0]
                ci = copy([(i, 1)])[0][0]
                rel = comm_word(((cj, 1),), ((ci, 1),)) + inv_word(copy(w))
                relators.append(rel)

    gen = [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
    conj_nf = [[pres.word_of(pres.conjugate(gen[i], gen[k])) for k in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            base = comm_word(((i, 1),), ((j + n, 1),))
            for k in range(n):
                lhs = conj_word(base, (k, 1))
                rhs = comm_word(xw(conj_nf[i][k]), yw(conj_nf[j][k]))
                relators.append(tuple(lhs) + inv_word(rhs))
                rhs2 = conj_word(base, (k + n, 1))
                relators.append(tuple(lhs) + inv_word(rhs2))
    return FpPresentation(2 * n, tuple(relators), half=n, source=pres)


def dump_fp(fp: FpPresentation, comment: Optional[str] = None) -> str:
    """One relator per line, PCP-style tokens, 1-based generator indices."""
    out = []
    if comment:
        for ln in comment.splitlines():
            out.append(f"# {ln}")
    if fp.half is not None:
        out.append(f"# generators 1..{fp.half} are x, {fp.half + 1}..{fp.ngens} are y")
    out.append("fpgroup")
    out.append(f"gens {fp.ngens}")
    for rel in fp.relators:
        toks = " ".join(f"{g + 1}^{e}" for g, e in rel)
        out.append(f"rel {toks}")
    out.append("end")
    return "\n".join(out) + "\n"
