"""Brute-force reference answers for tests.

Everything here explores explicit configurations breadth-first with caps
and shares no code with the closure, the saturation or the reductions.  A
negative answer from a bounded search is never a proof of absence.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .model import Bracket, Instance, LEFT_END, PAutomaton, Pda, PushdownSystem, RIGHT_END, TwoNpda, Walk


def dyck2_word_check(word) -> bool:
    stack = []
    for lab in word:
        lab = Bracket(lab)
        if lab.is_open:
            stack.append(lab)
        elif not stack or stack.pop() != lab.matching():
            return False
    return not stack


def _walk_is_valid(instance: Instance, walk: Walk) -> bool:
    return (walk.start == instance.s and walk.end == instance.t
            and all(instance.has_edge(u, v, lab) for u, v, lab in walk.edges())
            and dyck2_word_check(walk.labels()))


def bounded_walk_search(instance: Instance, max_len: int) -> Walk | None:
    """A shortest valid ``s -> t`` walk with at most ``max_len`` edges, or ``None``."""
    out: dict = {}
    for u, v, lab in instance.sorted_edges():
        out.setdefault(u, []).append((v, lab))
    start = (instance.s, ())
    parent = {start: None}
    frontier = [start]
    for depth in range(max_len + 1):
        for conf in frontier:
            if conf == (instance.t, ()):
                steps = []
                while parent[conf] is not None:
                    prev, lab = parent[conf]
                    steps.append((conf[0], lab))
                    conf = prev
                walk = Walk(instance.s, steps[::-1])
                assert _walk_is_valid(instance, walk), walk
                return walk
        if depth == max_len:
            break
        nxt = []
        left = max_len - depth - 1
        for conf in frontier:
            v, stack = conf
            for w, lab in out.get(v, ()):
                if lab.is_open:
                    st = stack + (lab,)
                    if len(st) > left:
                        continue
                elif stack and stack[-1] == lab.matching():
                    st = stack[:-1]
                else:
                    continue
                c2 = (w, st)
                if c2 not in parent:
                    parent[c2] = (conf, lab)
                    nxt.append(c2)
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# two-way machines
# ---------------------------------------------------------------------------

ACCEPTS, REJECTS, INCONCLUSIVE = "accepts", "rejects-within-bounds", "inconclusive"


@dataclass(frozen=True)
class SearchResult:
    status: str
    run: tuple = ()          # transitions of an accepting run, when found
    configurations: int = 0


def _replay(m: TwoNpda, tape, run) -> bool:
    q, pos, stack = m.init, 0, (m.bottom,)
    for t in run:
        if (t.q, t.a, t.Z) != (q, tape[pos], stack[0]) or t not in m.transitions:
            return False
        q, pos, stack = t.q2, pos + t.d, t.gamma + stack[1:]
    return q in m.final and pos == len(tape) - 1 and stack == (m.bottom,)


def bounded_2npda_search(m: TwoNpda, word, stack_cap: int = 8,
                         config_cap: int = 100_000) -> SearchResult:
    tape = [LEFT_END] + list(word) + [RIGHT_END]
    last = len(tape) - 1
    moves: dict = {}
    for t in m.sorted_transitions():
        moves.setdefault((t.q, t.a, t.Z), []).append(t)
    start = (m.init, 0, (m.bottom,))
    parent = {start: None}
    queue = deque([start])
    truncated = False
    while queue:
        conf = queue.popleft()
        q, pos, stack = conf
        if q in m.final and pos == last and stack == (m.bottom,):
            run = []
            while parent[conf] is not None:
                conf, t = parent[conf]
                run.append(t)
            run.reverse()
            assert _replay(m, tape, run)
            return SearchResult(ACCEPTS, tuple(run), len(parent))
        for t in moves.get((q, tape[pos], stack[0]), ()):
            st = t.gamma + stack[1:]
            if len(st) > stack_cap:
                truncated = True
                continue
            c2 = (t.q2, pos + t.d, st)
            if c2 in parent:
                continue
            if len(parent) >= config_cap:
                truncated = True
                continue
            parent[c2] = (conf, t)
            queue.append(c2)
    return SearchResult(INCONCLUSIVE if truncated else REJECTS, (), len(parent))


# ---------------------------------------------------------------------------
# one-way machines
# ---------------------------------------------------------------------------


def bounded_pda_search(pda: Pda, max_steps: int, stack_cap: int = 8) -> int | None:
    """Fewest moves to an accepting configuration, ignoring input letters; ``None`` if not found."""
    moves: dict = {}
    for t in pda.sorted_transitions():
        moves.setdefault((t.q, t.Z), []).append(t)
    start = (pda.init, (pda.bottom,))
    seen = {start}
    frontier = [start]
    for depth in range(max_steps + 1):
        for q, stack in frontier:
            if q in pda.final and stack == (pda.bottom,):
                return depth
        nxt = []
        for q, stack in frontier:
            for t in moves.get((q, stack[0]), ()):
                c2 = (t.q2, t.gamma + stack[1:])
                if len(c2[1]) <= stack_cap and c2 not in seen:
                    seen.add(c2)
                    nxt.append(c2)
        frontier = nxt
    return None


def pda_words(pda: Pda, max_len: int, stack_cap: int = 8, config_cap: int = 100_000) -> set:
    """Words of length ``<= max_len`` accepted within the stack and configuration caps."""
    moves: dict = {}
    for t in pda.sorted_transitions():
        moves.setdefault((t.q, t.Z), []).append(t)
    start = (pda.init, (), (pda.bottom,))
    seen = {start}
    queue = deque([start])
    found = set()
    while queue and len(seen) < config_cap:
        q, read, stack = queue.popleft()
        if q in pda.final and stack == (pda.bottom,):
            found.add(read)
        for t in moves.get((q, stack[0]), ()):
            r2 = read + (t.a,) if t.d == 1 else read
            st = t.gamma + stack[1:]
            if len(r2) > max_len or len(st) > stack_cap:
                continue
            c2 = (t.q2, r2, st)
            if c2 not in seen:
                seen.add(c2)
                queue.append(c2)
    return found


# ---------------------------------------------------------------------------
# pushdown systems
# ---------------------------------------------------------------------------


def bounded_pds_reach(pds: PushdownSystem, aut: PAutomaton, starts, stack_cap: int = 8) -> set:
    """Subset of ``starts`` (``(q, word)`` pairs) reaching a configuration accepted by ``aut``.

    Explores the graph of configurations with at most ``stack_cap``
    symbols that are forward-reachable from ``starts`` and propagates
    acceptance backwards through it; a move that would exceed the cap is
    dropped, so this matches a forward search with the same cap.
    """
    moves: dict = {}
    for r in sorted(pds.rules):
        moves.setdefault((r.p, r.A), []).append(r)
    starts = [(q, tuple(w)) for q, w in starts]
    preds: dict = {}
    seen = set(starts)
    queue = deque(starts)
    while queue:
        q, w = queue.popleft()
        if not w:
            continue
        for r in moves.get((q, w[0]), ()):
            c2 = (r.q, r.w + w[1:])
            if len(c2[1]) > stack_cap:
                continue
            preds.setdefault(c2, []).append((q, w))
            if c2 not in seen:
                seen.add(c2)
                queue.append(c2)
    delta: dict = {}
    for s, a, s2 in aut.transitions:
        delta.setdefault((s, a), set()).add(s2)

    def accepted(q, w):
        cur = {q}
        for a in w:
            cur = {s2 for s in cur for s2 in delta.get((s, a), ())}
        return bool(cur & aut.final)

    good = {c for c in seen if accepted(*c)}
    queue = deque(good)
    while queue:
        c = queue.popleft()
        for p in preds.get(c, ()):
            if p not in good:
                good.add(p)
                queue.append(p)
    return {c for c in starts if c in good}
