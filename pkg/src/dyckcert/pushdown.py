"""Backward saturation for pushdown systems and its matrix certificates.

Configurations are ``(state, stack word)`` with the top of stack first.  A
regular target set is given by a P-automaton whose runs start at control
states; the initial automaton may not enter control states and its final
states must lie outside them.  Saturation then adds ``(p, A, s)`` whenever
a rule ``(p, A) -> (q, w)`` exists and the automaton reads ``w`` from ``q``
to ``s``.

A non-reachability certificate is the family of matrices ``M^A`` (one per
stack symbol, over the automaton's states) together with the intermediate
products that witness ``M`` being closed under saturation.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass

import numpy as np

from .certno import exact_matmul, freivalds_equal
from .model import (
    Instance, PAutomaton, Pda, PdsCertificate, PushdownSystem, Rule, SeparatorBundle,
    Verdict, WalkScheme,
)


class ConventionViolation(ValueError):
    """The P-automaton does not meet the saturation prerequisites."""


def _check_conventions(pds: PushdownSystem, aut: PAutomaton) -> None:
    Q = set(pds.states)
    missing = Q - set(aut.states)
    if missing:
        raise ConventionViolation(f"control states {sorted(missing)} are not automaton states")
    into = sorted(t for t in aut.transitions if t[2] in Q)
    if into:
        raise ConventionViolation(f"transition {into[0]} enters a control state")
    both = sorted(aut.final & Q)
    if both:
        raise ConventionViolation(f"final state {both[0]} is a control state")


def prestar(pds: PushdownSystem, aut: PAutomaton) -> PAutomaton:
    """Least saturated extension of ``aut`` under the pushdown rules."""
    _check_conventions(pds, aut)
    by_first: dict = defaultdict(list)     # (q, B) -> [(p, A)] from rules (p,A)->(q,B)
    by_two: dict = defaultdict(list)       # (q, B) -> [(p, A, C)] from rules (p,A)->(q,BC)
    work = deque(sorted(aut.transitions))
    for r in sorted(pds.rules):
        if len(r.w) == 0:
            work.append((r.p, r.A, r.q))
        elif len(r.w) == 1:
            by_first[r.q, r.w[0]].append((r.p, r.A))
        else:
            by_two[r.q, r.w[0]].append((r.p, r.A, r.w[1]))
    rel: set = set()
    out: dict = defaultdict(list)          # (s, C) -> [s2] over rel
    while work:
        t = work.popleft()
        if t in rel:
            continue
        rel.add(t)
        q, B, s = t
        out[q, B].append(s)
        for p, A in by_first.get((q, B), ()):
            work.append((p, A, s))
        for p, A, C in by_two.get((q, B), ()):
            # (p, A) now behaves like a one-symbol rule to (s, C)
            by_first[s, C].append((p, A))
            for s2 in out.get((s, C), ()):
                work.append((p, A, s2))
    return PAutomaton(aut.states, frozenset(rel), aut.final)


def decide_pushdown_reach(pds: PushdownSystem, q0: str, gamma0: str, aut: PAutomaton) -> bool:
    """``True`` iff ``(q0, gamma0)`` can reach a configuration accepted by ``aut``."""
    if q0 not in pds.states or gamma0 not in pds.stack:
        raise ValueError(f"({q0}, {gamma0}) is not a configuration of the system")
    sat = prestar(pds, aut)
    return any(s == q0 and a == gamma0 and f in sat.final for s, a, f in sat.transitions)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def letter_matrices(aut: PAutomaton, stack) -> dict:
    """0-1 transition matrix of ``aut`` for each symbol in ``stack``."""
    idx = aut.index()
    k = len(aut.states)
    P = {A: np.zeros((k, k), dtype=np.int64) for A in stack}
    for s, a, s2 in aut.transitions:
        if a in P:
            P[a][idx[s], idx[s2]] = 1
    return P


def rule_matrices(pds: PushdownSystem, states) -> dict:
    """``T[(A, w)]`` over ``states``: 1 at ``(p, q)`` iff rule ``(p, A) -> (q, w)`` exists."""
    idx = {q: i for i, q in enumerate(states)}
    k = len(states)
    T: dict = {}
    for r in pds.rules:
        m = T.setdefault((r.A, r.w), np.zeros((k, k), dtype=np.int64))
        m[idx[r.p], idx[r.q]] = 1
    return T


def _zeros(k):
    return np.zeros((k, k), dtype=np.int64)


def extract_pds_certificate(pds: PushdownSystem, aut: PAutomaton) -> PdsCertificate:
    sat = prestar(pds, aut)
    g = pds.stack
    k = len(sat.states)
    M = letter_matrices(sat, g)
    T = rule_matrices(pds, sat.states)
    MAB, M1, M2 = {}, {}, {}
    for A in g:
        for B in g:
            MAB[A, B] = exact_matmul(T.get((A, (B,)), _zeros(k)), M[B])
            for C in g:
                m1 = exact_matmul(T.get((A, (B, C)), _zeros(k)), M[B])
                M1[A, B, C] = m1
                M2[A, B, C] = exact_matmul(m1, M[C])
    return PdsCertificate(sat.states, g, M, MAB, M1, M2)


def _cell(states, mask):
    i, j = np.unravel_index(int(np.argmax(mask)), mask.shape)
    return states[int(i)], states[int(j)]


def check_pds_certificate(pds: PushdownSystem, aut: PAutomaton, q0: str, gamma0: str,
                          cert: PdsCertificate, mode: str = "det", seed: int = 0,
                          reps: int = 4) -> Verdict:
    """Check the certificate conditions; ``mode`` is ``"det"`` or ``"rand"``.

    The rule and letter matrices are rebuilt from ``pds`` and ``aut``;
    only the ``M`` family comes from the certificate.
    """
    if mode not in ("det", "rand"):
        raise ValueError(f"mode must be 'det' or 'rand', not {mode!r}")
    _check_conventions(pds, aut)
    if q0 not in pds.states or gamma0 not in pds.stack:
        raise ValueError(f"({q0}, {gamma0}) is not a configuration of the system")
    if tuple(cert.states) != tuple(aut.states) or tuple(cert.stack) != tuple(pds.stack):
        return Verdict(False, "certificate states or stack alphabet differ from the instance")
    st = cert.states
    k = len(st)
    g = pds.stack
    P = letter_matrices(aut, g)
    T = rule_matrices(pds, st)
    M = cert.M
    probes = 0
    product = 0

    def reject(why):
        return Verdict(False, why, probes=probes)

    for A in g:
        bad = (P[A] > 0) & (M[A] == 0)
        if bad.any():
            return reject("P^A ≰ M^A for A=%s at (%s,%s)" % ((A,) + _cell(st, bad)))
        bad = (T.get((A, ()), _zeros(k)) > 0) & (M[A] == 0)
        if bad.any():
            return reject("T^{A,ε} ≰ M^A for A=%s at (%s,%s)" % ((A,) + _cell(st, bad)))

    def equal(left, right, claimed):
        nonlocal probes, product
        product += 1
        if mode == "det":
            return bool(np.array_equal(exact_matmul(left, right), claimed))
        if claimed.size and claimed.max() > k * k:
            return False  # no product of these factors has such an entry
        ok, used = freivalds_equal(left, right, claimed, seed, product - 1, reps)
        probes += used
        return ok

    for A in g:
        for B in g:
            mab = cert.MAB[A, B]
            if not equal(T.get((A, (B,)), _zeros(k)), M[B], mab):
                return reject(f"M^{{A,B}} ≠ T^{{A,B}}·M^B for A={A}, B={B}")
            bad = (mab > 0) & (M[A] == 0)
            if bad.any():
                return reject("bool(M^{A,B}) ≰ M^A for A=%s, B=%s at (%s,%s)"
                              % ((A, B) + _cell(st, bad)))
            for C in g:
                m1, m2 = cert.M1[A, B, C], cert.M2[A, B, C]
                if not equal(T.get((A, (B, C)), _zeros(k)), M[B], m1):
                    return reject(f"M1^{{A,B,C}} ≠ T^{{A,BC}}·M^B for A={A}, B={B}, C={C}")
                if not equal(m1, M[C], m2):
                    return reject(f"M2^{{A,B,C}} ≠ M1^{{A,B,C}}·M^C for A={A}, B={B}, C={C}")
                bad = (m2 > 0) & (M[A] == 0)
                if bad.any():
                    return reject("bool(M2^{A,B,C}) ≰ M^A for A=%s, B=%s, C=%s at (%s,%s)"
                                  % ((A, B, C) + _cell(st, bad)))
    i0 = st.index(q0)
    for f in sorted(aut.final):
        if M[gamma0][i0, st.index(f)] != 0:
            return reject(f"(M^{{γ0}})_{{q0,f}} ≠ 0 for f={f}")
    return Verdict(True, probes=probes)


# ---------------------------------------------------------------------------
# PDA emptiness, two independent routes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EmptinessResult:
    """``certificate`` is a WalkScheme when nonempty, a SeparatorBundle when empty."""

    empty: bool
    instance: Instance
    certificate: WalkScheme | SeparatorBundle


def pda_emptiness(pda: Pda) -> EmptinessResult:
    """Decide emptiness through the Dyck-2 image of ``pda`` and certify the answer."""
    from .certno import extract_separator
    from .certyes import extract_walk_scheme
    from .reductions import pda_to_dyck2
    from .solver import S, close

    inst = pda_to_dyck2(pda)
    rel = close(inst)
    if rel.holds(S, inst.s, inst.t):
        return EmptinessResult(False, inst, extract_walk_scheme(inst, rel))
    return EmptinessResult(True, inst, extract_separator(inst, rel))


def _fresh(base: str, taken) -> str:
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


def pda_as_pushdown(pda: Pda):
    """Letter-free pushdown system of ``pda`` plus the target automaton of final configurations.

    Returns ``(pds, aut, q0, Z0)``; ``(q0, Z0)`` reaches the target iff the
    language of ``pda`` is nonempty.
    """
    from .reductions import pda_normalize

    pda = pda_normalize(pda)
    pds = PushdownSystem(pda.states, pda.stack, frozenset(
        Rule(t.q, t.Z, t.q2, t.gamma) for t in pda.transitions))
    top = _fresh("accept", set(pda.states))
    aut = PAutomaton(pda.states + (top,), frozenset((f, pda.bottom, top) for f in pda.final),
                     frozenset({top}))
    return pds, aut, pda.init, pda.bottom


def pda_emptiness_prestar(pda: Pda) -> bool:
    """``True`` iff the language is empty, decided by saturation instead of the Dyck-2 solver."""
    pds, aut, q0, z0 = pda_as_pushdown(pda)
    return not decide_pushdown_reach(pds, q0, z0, aut)
