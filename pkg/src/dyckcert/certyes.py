"""Walk schemes: extraction from a closure, linear-in-n² checking, expansion."""
from __future__ import annotations

import numpy as np

from . import kernels
from .model import (
    CONCAT, EPS, WRAP, Bracket, Concat, Eps, Instance, Verdict, Walk, WalkScheme, Wrap,
)
from .solver import P, Q, S, SRelation, close


class NotAYesInstance(ValueError):
    pass


class TooLong(ValueError):
    pass


def extract_walk_scheme(instance: Instance, closure: SRelation | None = None) -> WalkScheme:
    """Read one production per reachable nonterminal off the first-derivation witnesses.

    Witness timestamps strictly decrease along references, so the result is
    acyclic without a pruning pass.
    """
    if closure is None:
        closure = close(instance)
    s, t = instance.s, instance.t
    if not closure.holds(S, s, t):
        raise NotAYesInstance(f"no valid walk from {s} to {t}")
    wk, wa = closure.wkind[S], closure.warg[S]
    pw = {kernels.W_CLOSE1: closure.warg[P], kernels.W_CLOSE2: closure.warg[Q]}
    seen = {(s - 1, t - 1)}
    todo = [(s - 1, t - 1)]
    rows = []
    while todo:
        i, j = todo.pop()
        k = int(wk[i, j])
        if k == kernels.W_EPS:
            rows.append((i + 1, j + 1, EPS, 0, 0, -1))
            kids = ()
        elif k == kernels.W_CONCAT:
            w = int(wa[i, j])
            rows.append((i + 1, j + 1, CONCAT, w + 1, 0, -1))
            kids = ((i, w), (w, j))
        else:
            # S(i,j) <- P(i,y) c(y,j);  P(i,y) <- o(i,x) S(x,y)
            y = int(wa[i, j])
            x = int(pw[k][i, y])
            lab = Bracket.O1 if k == kernels.W_CLOSE1 else Bracket.O2
            rows.append((i + 1, j + 1, WRAP, x + 1, y + 1, int(lab)))
            kids = ((x, y),)
        for kid in kids:
            if kid not in seen:
                seen.add(kid)
                todo.append(kid)
    cols = np.array(rows, dtype=np.int64).reshape(-1, 6).T
    return WalkScheme((s, t), *cols)


def _reason(code: int, idx: int, instance: Instance, ws: WalkScheme) -> str:
    n = instance.n
    if code == kernels.AXIOM_MISMATCH:
        return f"axiom <{ws.axiom[0]},{ws.axiom[1]}> differs from <{instance.s},{instance.t}>"
    if code == kernels.AXIOM_MISSING:
        return f"axiom <{instance.s},{instance.t}> has no production"
    u, v = int(ws.u[idx]), int(ws.v[idx])
    a, b, lab = int(ws.a[idx]), int(ws.b[idx]), int(ws.label[idx])
    nt = f"<{u},{v}>"
    if code == kernels.BAD_KIND:
        return f"production for {nt} has unknown kind {int(ws.kind[idx])}"
    if code == kernels.OUT_OF_RANGE:
        return f"production for {nt} mentions a vertex outside 1..{n}"
    if code == kernels.WRAP_NOT_OPEN:
        return f"wrap for {nt} has non-opening label {lab}"
    if code == kernels.DUPLICATE:
        return f"duplicate production for {nt}"
    if code == kernels.EPS_OFF_DIAGONAL:
        return f"eps production for off-diagonal {nt}"
    if code == kernels.OPEN_EDGE_ABSENT:
        return f"edge ({u},{a},{Bracket(lab)}) absent"
    if code == kernels.CLOSE_EDGE_ABSENT:
        return f"edge ({b},{v},{Bracket(lab ^ 1)}) absent"
    if code == kernels.MISSING_LEFT:
        return f"<{u},{a}> used by {nt} has no production"
    if code == kernels.MISSING_RIGHT:
        return f"<{a},{v}> used by {nt} has no production"
    if code == kernels.MISSING_INNER:
        return f"<{a},{b}> used by {nt} has no production"
    if code == kernels.CYCLE:
        return f"dependency cycle through {nt}"
    raise AssertionError(code)


def _dense_adjacency(instance: Instance) -> np.ndarray:
    n = instance.n
    adj = np.zeros((4, n, n), dtype=np.uint8)
    e = instance.edge_array()
    adj[e[:, 2], e[:, 0] - 1, e[:, 1] - 1] = 1
    return adj


def verify_walk_scheme(instance: Instance, ws: WalkScheme) -> Verdict:
    """Check every walk-scheme condition from scratch; nothing from extraction is trusted."""
    code, idx, steps, _ = kernels.check_scheme(
        instance.n, instance.s, instance.t, ws.axiom[0], ws.axiom[1],
        ws.u, ws.v, ws.kind, ws.a, ws.b, ws.label, _dense_adjacency(instance))
    if code == kernels.OK:
        return Verdict(True, steps=steps)
    return Verdict(False, _reason(code, idx, instance, ws), steps=steps)


def _index(ws: WalkScheme) -> dict:
    return {(int(u), int(v)): i for i, (u, v) in enumerate(zip(ws.u.tolist(), ws.v.tolist()))}


def _children(ws: WalkScheme, i: int, index: dict) -> tuple:
    k = int(ws.kind[i])
    u, v, a, b = int(ws.u[i]), int(ws.v[i]), int(ws.a[i]), int(ws.b[i])
    if k == CONCAT:
        return index[u, a], index[a, v]
    if k == WRAP:
        return (index[a, b],)
    return ()


def expand_length(ws: WalkScheme) -> int:
    """Number of edges in the generated walk, counted without expanding it."""
    index = _index(ws)
    root = index[ws.axiom]
    length: dict[int, int] = {}
    stack = [root]
    while stack:
        i = stack[-1]
        if i in length:
            stack.pop()
            continue
        kids = _children(ws, i, index)
        pending = [c for c in kids if c not in length]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        base = 2 if ws.kind[i] == WRAP else 0
        length[i] = base + sum(length[c] for c in kids)
    return length[root]


def expand_walk(ws: WalkScheme, max_len: int) -> Walk:
    """The walk generated by ``ws``; ``TooLong`` if it has more than ``max_len`` edges."""
    total = expand_length(ws)
    if total > max_len:
        raise TooLong(f"walk has {total} edges, bound is {max_len}")
    index = _index(ws)
    steps = []
    # items: production index to expand, or a ready step (vertex, label)
    todo: list = [index[ws.axiom]]
    while todo:
        item = todo.pop()
        if isinstance(item, tuple):
            steps.append(item)
            continue
        k = int(ws.kind[item])
        u, v, a, b = int(ws.u[item]), int(ws.v[item]), int(ws.a[item]), int(ws.b[item])
        if k == CONCAT:
            todo.append(index[a, v])
            todo.append(index[u, a])
        elif k == WRAP:
            lab = Bracket(int(ws.label[item]))
            todo.append((v, lab.matching()))
            todo.append(index[a, b])
            todo.append((a, lab))
    return Walk(ws.axiom[0], steps)


__all__ = [
    "NotAYesInstance", "TooLong", "extract_walk_scheme", "verify_walk_scheme",
    "expand_length", "expand_walk", "Eps", "Concat", "Wrap",
]
