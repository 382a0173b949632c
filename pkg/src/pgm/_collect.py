"""Collection-from-the-left kernel.

The kernel works on a packed form of a refined power-commutator
presentation (all relative orders equal the prime p, right sides only
reference strictly larger generator indices).  It brings a positive word
to its normal form, optionally accumulating one counter per presentation
relation ("tails"), which is what the nilpotent-quotient engine uses to
track central corrections.

Relation ids: rid = i        for the power relation   g_i^p = w_i
              rid = n + (j*(j-1))//2 + i   for [g_j, g_i] = w_ji  (j > i)

Two implementations with identical semantics: a numba-compiled one and a
pure-Python fallback.  Tests cross-validate them on random words.
"""

from __future__ import annotations

import os

import numpy as np

STEP_CAP = 1 << 40

_HAVE_NUMBA = False
if not os.environ.get("PGM_NO_NUMBA"):
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass


def pair_index(j: int, i: int) -> int:
    """Index of the commutator relation [g_j, g_i] among all pairs j > i."""
    return (j * (j - 1)) // 2 + i


def _collect_py(n, p, rhs_ptr, rhs_gen, rhs_exp, rel_tail, evec, tails, wgen, wexp):
    """Pure-Python collector.  Mutates evec/tails, returns step count."""
    sg = []
    se = []
    for k in range(len(wgen) - 1, -1, -1):
        e = wexp[k]
        if e:
            sg.append(wgen[k])
            se.append(e)
    steps = 0
    while sg:
        steps += 1
        if steps > STEP_CAP:
            raise RuntimeError("collection step cap exceeded")
        i = sg.pop()
        c = se.pop()
        # deepest nonzero entry above i in the collected prefix
        jmax = -1
        for j in range(n - 1, i, -1):
            if evec[j]:
                jmax = j
                break
        if jmax < 0:
            e = evec[i] + c
            q, evec[i] = divmod(e, p)
            if q:
                rid = i
                t = rel_tail[rid]
                if t >= 0:
                    tails[t] += q
                lo = rhs_ptr[rid]
                hi = rhs_ptr[rid + 1]
                if hi > lo:
                    for _ in range(q):
                        for k in range(hi - 1, lo - 1, -1):
                            sg.append(rhs_gen[k])
                            se.append(rhs_exp[k])
        else:
            # move one g_i across the rightmost collected letter g_jmax:
            # ... g_jmax g_i = ... g_i g_jmax w(jmax,i)
            if c > 1:
                sg.append(i)
                se.append(c - 1)
            evec[jmax] -= 1
            rid = n + (jmax * (jmax - 1)) // 2 + i
            t = rel_tail[rid]
            if t >= 0:
                tails[t] += 1
            lo = rhs_ptr[rid]
            hi = rhs_ptr[rid + 1]
            for k in range(hi - 1, lo - 1, -1):
                sg.append(rhs_gen[k])
                se.append(rhs_exp[k])
            sg.append(jmax)
            se.append(1)
            sg.append(i)
            se.append(1)
    return steps


if _HAVE_NUMBA:

    @njit(cache=True)
    def _collect_nb(n, p, rhs_ptr, rhs_gen, rhs_exp, rel_tail, evec, tails, wgen, wexp):
        cap = 64
        L = wgen.shape[0]
        if 4 * L > cap:
            cap = 4 * L
        sg = np.empty(cap, dtype=np.int64)
        se = np.empty(cap, dtype=np.int64)
        sp = 0
        for k in range(L - 1, -1, -1):
            if wexp[k]:
                sg[sp] = wgen[k]
                se[sp] = wexp[k]
                sp += 1
        steps = 0
        while sp > 0:
            steps += 1
            sp -= 1
            i = sg[sp]
            c = se[sp]
            jmax = -1
            for j in range(n - 1, i, -1):
                if evec[j]:
                    jmax = j
                    break
            if jmax < 0:
                e = evec[i] + c
                q = e // p
                evec[i] = e - q * p
                if q > 0:
                    rid = i
                    t = rel_tail[rid]
                    if t >= 0:
                        tails[t] += q
                    lo = rhs_ptr[rid]
                    hi = rhs_ptr[rid + 1]
                    need = sp + q * (hi - lo)
                    if need >= cap:
                        while cap <= need:
                            cap *= 2
                        nsg = np.empty(cap, dtype=np.int64)
                        nse = np.empty(cap, dtype=np.int64)
                        nsg[:sp] = sg[:sp]
                        nse[:sp] = se[:sp]
                        sg = nsg
                        se = nse
                    for _ in range(q):
                        for k in range(hi - 1, lo - 1, -1):
                            sg[sp] = rhs_gen[k]
                            se[sp] = rhs_exp[k]
                            sp += 1
            else:
                rid = n + (jmax * (jmax - 1)) // 2 + i
                lo = rhs_ptr[rid]
                hi = rhs_ptr[rid + 1]
                need = sp + (hi - lo) + 3
                if need >= cap:
                    while cap <= need:
                        cap *= 2
                    nsg = np.empty(cap, dtype=np.int64)
                    nse = np.empty(cap, dtype=np.int64)
                    nsg[:sp] = sg[:sp]
                    nse[:sp] = se[:sp]
                    sg = nsg
                    se = nse
                if c > 1:
                    sg[sp] = i
                    se[sp] = c - 1
                    sp += 1
                evec[jmax] -= 1
                t = rel_tail[rid]
                if t >= 0:
                    tails[t] += 1
                for k in range(hi - 1, lo - 1, -1):
                    sg[sp] = rhs_gen[k]
                    se[sp] = rhs_exp[k]
                    sp += 1
                sg[sp] = jmax
                se[sp] = 1
                sp += 1
                sg[sp] = i
                se[sp] = 1
                sp += 1
        return steps


class PackedPresentation:
    """Immutable packed relation tables consumed by the collector."""

    __slots__ = ("n", "p", "rhs_ptr", "rhs_gen", "rhs_exp", "rel_tail", "ntails", "use_numba")

    def __init__(self, n, p, rhs_words, rel_tail=None, ntails=0, use_numba=True):
        """rhs_words: list of syllable tuples indexed by relation id
        (n power relations, then n*(n-1)/2 commutator relations)."""
        nrel = n + (n * (n - 1)) // 2
        assert len(rhs_words) == nrel
        ptr = np.zeros(nrel + 1, dtype=np.int64)
        gens = []
        exps = []
        for rid, w in enumerate(rhs_words):
            for g, e in w:
                gens.append(g)
                exps.append(e)
            ptr[rid + 1] = len(gens)
        self.n = n
        self.p = p
        self.rhs_ptr = ptr
        self.rhs_gen = np.asarray(gens, dtype=np.int64)
        self.rhs_exp = np.asarray(exps, dtype=np.int64)
        if rel_tail is None:
            self.rel_tail = np.full(nrel, -1, dtype=np.int64)
        else:
            self.rel_tail = np.asarray(rel_tail, dtype=np.int64)
        self.ntails = ntails
        self.use_numba = use_numba and _HAVE_NUMBA

    def collect_into(self, evec, tails, wgen, wexp):
        """Right-multiply the normal form in evec by the positive word w."""
        if self.use_numba:
            return _collect_nb(
                self.n, self.p, self.rhs_ptr, self.rhs_gen, self.rhs_exp,
                self.rel_tail, evec, tails, wgen, wexp,
            )
        return _collect_py(
            self.n, self.p, self.rhs_ptr, self.rhs_gen, self.rhs_exp,
            self.rel_tail, evec, tails, wgen, wexp,
        )


def collect_word(packed, syllables, evec=None, tails=None):
    """Collect a positive word (iterable of (gen, exp) with exp >= 1).

    Returns (evec, tails) as numpy int64 arrays.
    """
    n = packed.n
    if evec is None:
        evec = np.zeros(n, dtype=np.int64)
    if tails is None:
        tails = np.zeros(packed.ntails, dtype=np.int64)
    if syllables:
        wgen = np.asarray([g for g, _ in syllables], dtype=np.int64)
        wexp = np.asarray([e for _, e in syllables], dtype=np.int64)
        packed.collect_into(evec, tails, wgen, wexp)
    return evec, tails


def numba_available() -> bool:
    return _HAVE_NUMBA
