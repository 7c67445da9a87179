"""Reductions between 2NPDA recognition, PDA emptiness, Dyck-2 reachability and hardest words.

Stack symbols are encoded as bracket words: ``phi(Z)`` is a fixed-length
word of opening brackets (the binary index of ``Z`` in sorted order, o1 for
0 and o2 for 1) and ``psi(Z)`` is its bracket-matched reversal, so a walk
label ``phi(Z) psi(Z)`` cancels.  A PDA transition ``(q, Z) -> (q', X1..Xk)``
becomes a path labelled ``psi(Z) phi(Xk) .. phi(X1)``: pop ``Z``, then push
the new word bottom first.
"""
from __future__ import annotations

import math
from itertools import count

from .model import (
    EDGESEP, MINUS, ONE, VMARK, Bracket, HardestWord, Instance, LabeledGraph, Pda, Transition,
    TwoNpda, HeadEscape, LEFT_END, RIGHT_END, hw_shape_error,
)
from .solver import decide


class SourceEqualsTarget(ValueError):
    """Instances with ``s == t`` and more than one vertex have no hardest-word encoding."""


# ---------------------------------------------------------------------------
# PDA normal form
# ---------------------------------------------------------------------------


def is_normal(pda: Pda) -> bool:
    return all(_normal(t) for t in pda.transitions)


def _normal(t: Transition) -> bool:
    g = t.gamma
    return len(g) == 0 or g == (t.Z,) or (len(g) == 2 and g[1] == t.Z)


def _fresh_names(taken, stem):
    for i in count():
        name = f"{stem}~{i}"
        if name not in taken:
            taken.add(name)
            yield name


def pda_normalize(pda: Pda) -> Pda:
    """Rewrite every transition into a push (``Z'Z``), a pop, or a no-op on the stack.

    Longer or replacing stack writes become chains through fresh states.
    Only the first step of a chain keeps the original head move; the rest
    are silent.
    """
    if is_normal(pda):
        return pda
    taken = set(pda.states)
    fresh = _fresh_names(taken, "n")
    out = set()
    for t in pda.sorted_transitions():
        if _normal(t):
            out.add(t)
            continue
        g = t.gamma
        if g[-1] == t.Z:
            pushes = list(reversed(g[:-1]))   # bottom-most first
            cur, tops, d = t.q, (t.Z,), t.d
        else:
            # bottom symbol never gets here: it is always rewritten to itself
            pushes = list(reversed(g))
            mid = next(fresh)
            out.add(Transition(t.q, t.a, t.Z, mid, (), t.d))
            cur, tops, d = mid, pda.stack, 0
        for k, x in enumerate(pushes):
            nxt = t.q2 if k == len(pushes) - 1 else next(fresh)
            for y in tops:
                out.add(Transition(cur, t.a, y, nxt, (x, y), d))
            cur, tops, d = nxt, (x,), 0
    return Pda(tuple(sorted(taken)), pda.input, pda.stack, frozenset(out),
               pda.init, pda.bottom, pda.final)


# ---------------------------------------------------------------------------
# stack-symbol codes
# ---------------------------------------------------------------------------


def code_length(alphabet_size: int) -> int:
    return max(1, math.ceil(math.log2(alphabet_size))) if alphabet_size > 1 else 1


def stack_codes(stack) -> tuple[int, dict, dict]:
    """``(ell, phi, psi)`` for the sorted stack alphabet."""
    syms = sorted(stack)
    ell = code_length(len(syms))
    phi, psi = {}, {}
    for i, z in enumerate(syms):
        bits = [(i >> (ell - 1 - j)) & 1 for j in range(ell)]
        word = tuple(Bracket.O2 if b else Bracket.O1 for b in bits)
        phi[z] = word
        psi[z] = tuple(b.matching() for b in reversed(word))
    return ell, phi, psi


class _GraphBuilder:
    """Accumulates labelled paths; interior vertices are numbered after the fixed ones."""

    def __init__(self, fixed: int):
        self.next = fixed + 1
        self.edges = []

    def vertex(self) -> int:
        v = self.next
        self.next += 1
        return v

    def path(self, src: int, dst: int, word) -> None:
        if not word:
            raise ValueError("empty path label")
        cur = src
        for k, lab in enumerate(word):
            nxt = dst if k == len(word) - 1 else self.vertex()
            self.edges.append((cur, nxt, lab))
            cur = nxt

    def exits(self, sources, word) -> int:
        """Paths labelled ``word`` from every source into a new sink, sharing all but the first edge."""
        word = list(word)
        chain = [self.vertex() for _ in range(len(word) - 1)]
        sink = self.vertex()
        stops = chain + [sink]
        for src in sources:
            self.edges.append((src, stops[0], word[0]))
        for k in range(1, len(word)):
            self.edges.append((stops[k - 1], stops[k], word[k]))
        return sink

    def instance(self, s: int, t: int) -> Instance:
        return Instance(self.next - 1, s, t, frozenset(self.edges))


def _transition_word(t: Transition, phi, psi):
    word = list(psi[t.Z])
    for x in reversed(t.gamma):
        word.extend(phi[x])
    return word


def pda_to_dyck2(pda: Pda) -> Instance:
    """Dyck-2 instance that is a yes-instance iff the language of ``pda`` is nonempty.

    Vertex 1 is the source, vertices ``2..|Q|+1`` the control states in
    sorted order, then path interiors, and the target comes last.
    """
    pda = pda_normalize(pda)
    _, phi, psi = stack_codes(pda.stack)
    vid = {q: i + 2 for i, q in enumerate(pda.states)}
    g = _GraphBuilder(len(pda.states) + 1)
    g.path(1, vid[pda.init], phi[pda.bottom])
    seen = set()
    for t in pda.sorted_transitions():
        key = (t.q, t.Z, t.q2, t.gamma)
        if key in seen:
            continue
        seen.add(key)
        g.path(vid[t.q], vid[t.q2], _transition_word(t, phi, psi))
    sink = g.exits([vid[f] for f in sorted(pda.final)], psi[pda.bottom])
    return g.instance(1, sink)


def cfl_to_dyck2(graph: LabeledGraph, lpda: Pda) -> Instance:
    """Dyck-2 instance that is yes iff some ``s -> t`` path of ``graph`` spells a word of ``lpda``.

    Product vertex ``(v, q)`` is numbered ``2 + (v-1)|Q| + index(q)``; vertex 1
    is a fresh entry and the last vertex the exit.  Letter-consuming
    transitions follow graph edges, silent ones stay on the graph vertex.
    """
    lpda = pda_normalize(lpda)
    _, phi, psi = stack_codes(lpda.stack)
    nq = len(lpda.states)
    qi = {q: i for i, q in enumerate(lpda.states)}

    def vid(v, q):
        return 2 + (v - 1) * nq + qi[q]

    g = _GraphBuilder(1 + graph.n * nq)
    g.path(1, vid(graph.s, lpda.init), phi[lpda.bottom])
    by_letter: dict = {}
    for u, v, a in sorted(graph.edges):
        by_letter.setdefault(a, []).append((u, v))
    for t in lpda.sorted_transitions():
        word = _transition_word(t, phi, psi)
        if t.d == 0:
            pairs = [(v, v) for v in range(1, graph.n + 1)]
        else:
            pairs = by_letter.get(t.a, [])
        for u, v in pairs:
            g.path(vid(u, t.q), vid(v, t.q2), word)
    sink = g.exits([vid(graph.t, f) for f in sorted(lpda.final)], psi[lpda.bottom])
    return g.instance(1, sink)


# ---------------------------------------------------------------------------
# 2NPDA on a fixed word
# ---------------------------------------------------------------------------

DUMMY_LETTER = "#"


def _tape(m: TwoNpda, word) -> list[str]:
    word = list(word)
    for a in word:
        if a in (LEFT_END, RIGHT_END) or a not in m.input:
            raise ValueError(f"word letter {a!r} is not an input letter of the machine")
    return [LEFT_END] + word + [RIGHT_END]


def twonpda_word_to_pda(m: TwoNpda, word) -> Pda:
    """One-way PDA over the letter ``#`` whose language is nonempty iff ``m`` accepts ``word``.

    State ``f"{q}@{i}"`` means control state ``q`` with the head on tape cell
    ``i`` (cell 0 holds ``<``).  All simulated moves are silent; one final
    move consumes ``#`` from an accepting state on ``>`` with bare stack.
    """
    tape = _tape(m, word)
    last = len(tape) - 1
    at = {}
    for i, a in enumerate(tape):
        at.setdefault(a, []).append(i)
    states = {f"{q}@{i}" for q in m.states for i in range(len(tape))}
    acc = next(_fresh_names(set(states), "acc"))
    trans = set()
    for t in m.sorted_transitions():
        for i in at.get(t.a, ()):
            j = i + t.d
            if not 0 <= j <= last:
                raise HeadEscape(f"transition {t} leaves the tape at cell {i}")
            trans.add(Transition(f"{t.q}@{i}", DUMMY_LETTER, t.Z, f"{t.q2}@{j}", t.gamma, 0))
    for f in sorted(m.final):
        trans.add(Transition(f"{f}@{last}", DUMMY_LETTER, m.bottom, acc, (m.bottom,), 1))
    states.add(acc)
    return Pda(tuple(sorted(states)), (DUMMY_LETTER,), m.stack, frozenset(trans),
               f"{m.init}@0", m.bottom, frozenset({acc}))


def twonpda_recognize(m: TwoNpda, word) -> bool:
    return decide(pda_to_dyck2(twonpda_word_to_pda(m, word)))


# ---------------------------------------------------------------------------
# hardest words
# ---------------------------------------------------------------------------


def normalize_endpoints(instance: Instance) -> tuple[Instance, list[int]]:
    """Relabel so the source is 1 and the target is n: swap s with 1, then t with n.

    Returns the relabelled instance and the map ``perm[v] -> new label``
    (index 0 unused).
    """
    n = instance.n
    perm = list(range(n + 1))

    def swap(a, b):
        # exchange the vertices currently labelled a and b
        for v in range(1, n + 1):
            if perm[v] == a:
                perm[v] = b
            elif perm[v] == b:
                perm[v] = a

    swap(perm[instance.s], 1)
    swap(perm[instance.t], n)
    edges = frozenset((perm[u], perm[v], lab) for u, v, lab in instance.edges)
    return Instance(n, perm[instance.s], perm[instance.t], edges), perm


def dyck2_to_hardest_word(instance: Instance) -> HardestWord:
    if instance.s == instance.t and instance.n > 1:
        raise SourceEqualsTarget("source equals target; the answer is trivially yes")
    inst, _ = normalize_endpoints(instance)
    blocks: list[list] = [[] for _ in range(inst.n + 1)]
    for u, v, lab in inst.edges:
        blocks[u].append((v, lab))
    toks = []
    for i in range(1, inst.n + 1):
        toks.append(VMARK)
        for k, (j, lab) in enumerate(sorted(blocks[i])):
            if k:
                toks.append(EDGESEP)
            toks.append(lab.token)
            if j < i:
                toks.append(MINUS)
            toks.extend([ONE] * abs(j - i))
    return HardestWord(tuple(toks))


def hardest_entries(word: HardestWord):
    """Yield ``(block, label, signed offset)`` for every entry, blocks numbered from 1."""
    block, i, toks = 0, 0, word.tokens
    while i < len(toks):
        tok = toks[i]
        if tok == VMARK:
            block += 1
            i += 1
        elif tok == EDGESEP:
            i += 1
        else:
            lab = Bracket.from_token(tok)
            i += 1
            sign = 1
            if i < len(toks) and toks[i] == MINUS:
                sign = -1
                i += 1
            k = 0
            while i < len(toks) and toks[i] == ONE:
                k += 1
                i += 1
            yield block, lab, sign * k


def reflect(i: int, offset: int, n: int) -> int | None:
    """Vertex reached from ``i`` by ``offset`` unit steps over ``<, 1..n, >``.

    Stepping onto a virtual endmarker uses up one step and reverses the
    direction.  ``None`` when the final step lands on an endmarker.
    """
    period = 2 * (n + 1)
    r = (i + offset) % period
    pos = r if r <= n + 1 else period - r
    return None if pos in (0, n + 1) else pos


def decode_hardest_word(word: HardestWord) -> Instance:
    n = sum(1 for tok in word.tokens if tok == VMARK)
    edges = set()
    for i, lab, off in hardest_entries(word):
        j = reflect(i, off, n)
        if j is not None:
            edges.add((i, j, lab))
    return Instance(n, 1, n, frozenset(edges))


def hardest_membership(word) -> bool:
    """Membership in the hardest language; anything not of block/entry shape is a non-member."""
    if not isinstance(word, HardestWord):
        toks = tuple(word)
        if hw_shape_error(toks) is not None:
            return False
        word = HardestWord(toks)
    return decide(decode_hardest_word(word))
