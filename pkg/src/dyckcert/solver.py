"""Cubic worklist closure for Dyck-2 reachability.

The closure computes three relations over vertex pairs for the grammar

    S -> S S | P c1 | Q c2 | eps,    P -> o1 S,    Q -> o2 S

and remembers, for every derived fact, the first rule application that
produced it.  Because facts are queued FIFO and a rule only fires on facts
already popped, every witness points at facts with smaller timestamps.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .model import Bracket, Instance

S, P, Q = 0, 1, 2
_REL_NAMES = ("S", "P", "Q")


class EpsRule(NamedTuple):
    u: int


class ConcatRule(NamedTuple):
    u: int
    w: int
    v: int


class CloseRule(NamedTuple):
    """``S(u, v)`` from ``P(u, y)`` (or ``Q``) and the closing edge ``(y, v, close)``."""

    u: int
    y: int
    v: int
    close: Bracket


class OpenRule(NamedTuple):
    """``P(u, v)`` (or ``Q``) from the opening edge ``(u, x, open)`` and ``S(x, v)``."""

    u: int
    x: int
    v: int
    open: Bracket


@dataclass(frozen=True, eq=False)
class SRelation:
    """Closure result.  All arrays are indexed ``[relation, u-1, v-1]``."""

    n: int
    facts: np.ndarray      # uint8 (3, n, n)
    wkind: np.ndarray      # int8, kernels.W_* or -1
    warg: np.ndarray       # int32, 0-based mid/edge vertex or -1
    stamp: np.ndarray      # int32 discovery order or -1

    @property
    def R_S(self) -> np.ndarray:
        return self.facts[S].astype(bool)

    @property
    def R_P(self) -> np.ndarray:
        return self.facts[P].astype(bool)

    @property
    def R_Q(self) -> np.ndarray:
        return self.facts[Q].astype(bool)

    def holds(self, rel: int, u: int, v: int) -> bool:
        return bool(self.facts[rel, u - 1, v - 1])

    def timestamp(self, rel: int, u: int, v: int) -> int:
        return int(self.stamp[rel, u - 1, v - 1])

    def witness(self, rel: int, u: int, v: int):
        """Justification of the fact ``rel(u, v)`` with 1-based vertices, or ``None``."""
        i, j = u - 1, v - 1
        k = int(self.wkind[rel, i, j])
        a = int(self.warg[rel, i, j]) + 1
        if k < 0:
            return None
        if k == kernels.W_EPS:
            return EpsRule(u)
        if k == kernels.W_CONCAT:
            return ConcatRule(u, a, v)
        if k in (kernels.W_CLOSE1, kernels.W_CLOSE2):
            return CloseRule(u, a, v, Bracket.C1 if k == kernels.W_CLOSE1 else Bracket.C2)
        return OpenRule(u, a, v, Bracket.O1 if k == kernels.W_OPEN1 else Bracket.O2)

    def premises(self, rel: int, u: int, v: int) -> list[tuple[int, int, int]]:
        """Facts ``(rel, u, v)`` the witness of ``rel(u, v)`` depends on."""
        w = self.witness(rel, u, v)
        if isinstance(w, ConcatRule):
            return [(S, w.u, w.w), (S, w.w, w.v)]
        if isinstance(w, CloseRule):
            return [(P if w.close == Bracket.C1 else Q, w.u, w.y)]
        if isinstance(w, OpenRule):
            return [(S, w.x, w.v)]
        return []

    def fact_count(self) -> int:
        return int(self.facts.sum())


def close(instance: Instance) -> SRelation:
    n = instance.n
    out_ptr, out_dst, in_ptr, in_src = kernels.edge_csr(n, instance.edge_array())
    facts, wkind, warg, stamp = kernels.closure(n, out_ptr, out_dst, in_ptr, in_src)
    for a in (facts, wkind, warg, stamp):
        a.setflags(write=False)
    return SRelation(n, facts, wkind, warg, stamp)


def decide(instance: Instance) -> bool:
    """``True`` iff some walk from ``s`` to ``t`` spells a Dyck-2 word."""
    if instance.s == instance.t:
        return True
    return close(instance).holds(S, instance.s, instance.t)
