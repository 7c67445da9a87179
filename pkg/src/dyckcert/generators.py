"""Seeded random instances and structured families.

Every generator draws from ``numpy.random.default_rng(seed)`` (PCG64), so
a seed determines the output on every platform.
"""
from __future__ import annotations

import numpy as np

from .model import (
    CONCAT, EPS, LEFT_END, RIGHT_END, WRAP, Bracket, Instance, PAutomaton, Pda,
    PushdownSystem, Rule, Transition, TwoNpda, WalkScheme,
)

# per-label edge probability for each density regime
DENSITIES = {"sparse": 0.06, "medium": 0.14, "dense": 0.3}


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_instance(seed, n: int, density: float = 0.14, open_bias: float = 0.5,
                    kind_bias: float = 0.5) -> Instance:
    """Random instance on ``n`` vertices.

    Each ordered pair gets each label independently; ``density`` is the
    mean probability per label, skewed towards opening brackets by
    ``open_bias`` and towards kind 1 by ``kind_bias``.
    """
    rng = _rng(seed)
    weights = np.array([open_bias * kind_bias, (1 - open_bias) * kind_bias,
                        open_bias * (1 - kind_bias), (1 - open_bias) * (1 - kind_bias)])
    p = np.clip(4 * density * weights, 0.0, 1.0)
    hit = rng.random((4, n, n)) < p[:, None, None]
    lab, u, v = np.nonzero(hit)
    s, t = (int(x) for x in rng.integers(1, n + 1, size=2))
    return Instance(n, s, t, frozenset(zip((u + 1).tolist(), (v + 1).tolist(),
                                           (Bracket(x) for x in lab.tolist()))))


def instance_population(seed, count: int, n_range=(1, 9)):
    """``count`` instances cycling through the density regimes, sizes uniform in ``n_range``."""
    rng = _rng(seed)
    regimes = list(DENSITIES.values())
    out = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        bias = float(rng.uniform(0.35, 0.65))
        out.append(random_instance(rng, n, regimes[i % len(regimes)], open_bias=bias))
    return out


def random_pds(seed, max_states: int = 4, max_stack: int = 3, max_rules: int = 10,
               extra_states: int = 2):
    """Random pushdown system and a target P-automaton obeying the saturation conventions."""
    rng = _rng(seed)
    Q = tuple(f"p{i}" for i in range(int(rng.integers(1, max_states + 1))))
    G = tuple("ABC"[:int(rng.integers(1, max_stack + 1))])
    rules = set()
    for _ in range(int(rng.integers(0, max_rules + 1))):
        w = tuple(G[int(x)] for x in rng.integers(0, len(G), size=int(rng.integers(0, 3))))
        rules.add(Rule(Q[int(rng.integers(len(Q)))], G[int(rng.integers(len(G)))],
                       Q[int(rng.integers(len(Q)))], w))
    extra = tuple(f"s{i}" for i in range(extra_states))
    states = Q + extra
    trans = set()
    for _ in range(int(rng.integers(1, 2 * len(states) + 1))):
        trans.add((states[int(rng.integers(len(states)))], G[int(rng.integers(len(G)))],
                   extra[int(rng.integers(len(extra)))]))
    final = {extra[int(rng.integers(len(extra)))]}
    return PushdownSystem(Q, G, frozenset(rules)), PAutomaton(states, frozenset(trans),
                                                              frozenset(final))


def _random_gamma(rng, Z, z0, others, max_push):
    k = int(rng.integers(0, max_push + 1))
    body = tuple(others[int(x)] for x in rng.integers(0, len(others), size=k)) if others else ()
    if Z == z0:
        return body + (z0,)
    return body


def random_pda(seed, max_states: int = 5, max_stack: int = 3, max_transitions: int = 12,
               max_push: int = 3) -> Pda:
    rng = _rng(seed)
    Q = tuple(f"q{i}" for i in range(int(rng.integers(1, max_states + 1))))
    others = tuple("XY"[:int(rng.integers(0, max_stack))])
    G = ("Z",) + others
    trans = set()
    for _ in range(int(rng.integers(0, max_transitions + 1))):
        Z = G[int(rng.integers(len(G)))]
        gamma = _random_gamma(rng, Z, "Z", others, max_push)
        trans.add(Transition(Q[int(rng.integers(len(Q)))], "ab"[int(rng.integers(2))], Z,
                             Q[int(rng.integers(len(Q)))], gamma, int(rng.integers(0, 2))))
    final = frozenset(q for q in Q if rng.random() < 0.35)
    return Pda(Q, ("a", "b"), G, frozenset(trans), Q[0], "Z", final)


def random_2npda(seed, max_states: int = 4, max_stack: int = 3,
                 max_transitions: int = 12) -> TwoNpda:
    rng = _rng(seed)
    Q = tuple(f"q{i}" for i in range(int(rng.integers(1, max_states + 1))))
    others = tuple("XY"[:int(rng.integers(0, max_stack))])
    G = ("Z",) + others
    letters = ("a", "b", LEFT_END, RIGHT_END)
    trans = set()
    for _ in range(int(rng.integers(max_transitions // 2, max_transitions + 1))):
        a = letters[int(rng.integers(len(letters)))]
        moves = [d for d in (-1, 0, 1)
                 if not (a == LEFT_END and d == -1) and not (a == RIGHT_END and d == 1)]
        Z = G[int(rng.integers(len(G)))]
        gamma = _random_gamma(rng, Z, "Z", others, 2)
        # rightward moves are favoured so runs tend to reach the right end
        d = moves[-1] if rng.random() < 0.5 else moves[int(rng.integers(len(moves)))]
        trans.add(Transition(Q[int(rng.integers(len(Q)))], a, Z, Q[int(rng.integers(len(Q)))],
                             gamma, d))
    # a partial left-to-right scan from the initial state yields accepting runs often enough
    for a in letters[:3]:
        if rng.random() < 0.6:
            trans.add(Transition(Q[0], a, "Z", Q[int(rng.integers(len(Q)))], ("Z",), 1))
    final = frozenset(q for q in Q if rng.random() < 0.5)
    return TwoNpda(Q, letters, G, frozenset(trans), Q[0], "Z", final)


def random_word(seed, max_len: int = 6, letters=("a", "b")) -> tuple:
    rng = _rng(seed)
    return tuple(letters[int(x)] for x in rng.integers(0, len(letters),
                                                       size=int(rng.integers(0, max_len + 1))))


def counter_pda(k: int) -> Pda:
    """Deterministic PDA whose only accepting run has at least ``2**k`` moves.

    State ``c{i}`` starts a level-``i`` call: it pushes frame ``F{i}`` and
    starts level ``i-1``.  A finished level ``i-1`` call leaves ``r`` looking
    at the caller's frame; on ``F{i}`` it pushes ``S{i}`` and runs level
    ``i-1`` again, on ``S{i}`` it unwinds both frames.  Level ``i`` thus
    runs level ``i-1`` twice.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    F = [None] + [f"F{i}" for i in range(1, k + 1)]
    Sx = [None] + [f"S{i}" for i in range(1, k + 1)]
    states = [f"c{i}" for i in range(k + 1)] + ["r", "e", "acc"]
    stack = ["Z0"] + F[1:] + Sx[1:]
    T = set()
    for i in range(k, 0, -1):
        tops = ["Z0"] if i == k else [F[i + 1], Sx[i + 1]]
        for x in tops:
            T.add(Transition(f"c{i}", "a", x, f"c{i - 1}", (F[i], x), 0))
    for x in (F[1], Sx[1]):
        T.add(Transition("c0", "a", x, "r", (x,), 0))
    for i in range(1, k + 1):
        T.add(Transition("r", "a", F[i], f"c{i - 1}", (Sx[i], F[i]), 0))
        T.add(Transition("r", "a", Sx[i], "e", (), 0))
        T.add(Transition("e", "a", F[i], "r", (), 0))
    T.add(Transition("r", "a", "Z0", "acc", ("Z0",), 0))
    return Pda(tuple(states), ("a",), tuple(stack), frozenset(T), f"c{k}", "Z0",
               frozenset({"acc"}))


def ladder_instance(n: int) -> Instance:
    """Path ``1 -> 2 -> .. -> n`` carrying both ``o1`` and ``c1`` on every step."""
    edges = set()
    for i in range(1, n):
        edges.add((i, i + 1, Bracket.O1))
        edges.add((i, i + 1, Bracket.C1))
    t = n if n % 2 == 1 else n - 1
    return Instance(n, 1, max(t, 1), frozenset(edges))


def ladder_scheme(n: int) -> WalkScheme:
    """Accepted walk scheme on :func:`ladder_instance` with every even-span pair as a nonterminal."""
    rows = []
    for i in range(1, n + 1):
        for j in range(i, n + 1, 2):
            if j == i:
                rows.append((i, j, EPS, 0, 0, -1))
            elif j == i + 2:
                rows.append((i, j, WRAP, i + 1, i + 1, int(Bracket.O1)))
            else:
                rows.append((i, j, CONCAT, i + 2, 0, -1))
    cols = np.array(rows, dtype=np.int64).T
    t = n if n % 2 == 1 else n - 1
    return WalkScheme((1, max(t, 1)), *cols)
