"""Hot loops: the closure worklist and the walk-scheme checker.

Each kernel exists twice, a numba version and a numpy/Python version with
identical outputs (same facts, same witnesses, same discovery order, same
verdict codes).  ``closure`` and ``check_scheme`` are bound to whichever
backend :mod:`dyckcert._backend` selected; both variants stay importable so
tests and ``benchmarks/`` can compare them.

Conventions shared by both variants: vertices are 0-based, relation index
``X`` is 0 for S, 1 for P (after an o1) and 2 for Q (after an o2); a fact
``(X, u, v)`` is stored at flat index ``X*n*n + u*n + v``.
"""
from __future__ import annotations

import numpy as np

from ._backend import USE_NUMBA, njit

# witness kinds
W_EPS, W_CONCAT, W_CLOSE1, W_CLOSE2, W_OPEN1, W_OPEN2 = 0, 1, 2, 3, 4, 5

# walk-scheme verdict codes
OK = 0
AXIOM_MISMATCH = 1
BAD_KIND = 2
OUT_OF_RANGE = 3
WRAP_NOT_OPEN = 4
DUPLICATE = 5
AXIOM_MISSING = 6
EPS_OFF_DIAGONAL = 7
OPEN_EDGE_ABSENT = 8
CLOSE_EDGE_ABSENT = 9
MISSING_LEFT = 10
MISSING_RIGHT = 11
MISSING_INNER = 12
CYCLE = 13

_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)


def _debruijn_table() -> np.ndarray:
    tab = np.zeros(64, dtype=np.int64)
    for i in range(64):
        tab[((1 << i) * 0x03F79D71B4CB0A89 % (1 << 64)) >> 58] = i
    return tab


_BIT_INDEX = _debruijn_table()


def edge_csr(n: int, edges: np.ndarray):
    """Per-label CSR adjacency for 1-based ``(from, to, label)`` rows.

    Returns ``out_ptr, out_dst, in_ptr, in_src``; the out-neighbours of
    ``u`` along label ``c`` are ``out_dst[out_ptr[c*n+u]:out_ptr[c*n+u+1]]``
    (ascending), and likewise ``in_src`` lists in-neighbours.
    """
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 3)
    u, v, lab = e[:, 0] - 1, e[:, 1] - 1, e[:, 2]
    order = np.lexsort((v, u, lab))
    out_dst = v[order].copy()
    out_ptr = np.zeros(4 * n + 1, dtype=np.int64)
    np.cumsum(np.bincount(lab * n + u, minlength=4 * n), out=out_ptr[1:])
    order = np.lexsort((u, v, lab))
    in_src = u[order].copy()
    in_ptr = np.zeros(4 * n + 1, dtype=np.int64)
    np.cumsum(np.bincount(lab * n + v, minlength=4 * n), out=in_ptr[1:])
    return out_ptr, out_dst, in_ptr, in_src


# ---------------------------------------------------------------------------
# closure: numba
# ---------------------------------------------------------------------------


@njit(cache=True)
def _add_fact(rel, wkind, warg, stamp, srow, scol, queue, tail, n, words, X, u, v, kind, arg):
    idx = X * n * n + u * n + v
    if rel[idx]:
        return tail
    rel[idx] = 1
    wkind[idx] = kind
    warg[idx] = arg
    stamp[idx] = tail
    queue[tail] = idx
    if X == 0:
        srow[u * words + (v >> 6)] |= np.uint64(1) << np.uint64(v & 63)
        scol[v * words + (u >> 6)] |= np.uint64(1) << np.uint64(u & 63)
    return tail + 1


@njit(cache=True)
def _closure_jit(n, out_ptr, out_dst, in_ptr, in_src, bit_index):
    nn = n * n
    words = (n + 63) >> 6
    rel = np.zeros(3 * nn, np.uint8)
    wkind = np.full(3 * nn, -1, np.int8)
    warg = np.full(3 * nn, -1, np.int32)
    stamp = np.full(3 * nn, -1, np.int32)
    srow = np.zeros(n * words, np.uint64)
    scol = np.zeros(n * words, np.uint64)
    queue = np.empty(3 * nn, np.int64)
    one = np.uint64(1)
    tail = 0
    for u in range(n):
        tail = _add_fact(rel, wkind, warg, stamp, srow, scol, queue, tail, n, words,
                         0, u, u, W_EPS, -1)
    head = 0
    while head < tail:
        idx = queue[head]
        head += 1
        X = idx // nn
        r = idx - X * nn
        u = r // n
        v = r - u * n
        if X == 0:
            # S(u,v) S(v,w) -> S(u,w)
            for k in range(words):
                d = srow[v * words + k] & ~srow[u * words + k]
                while d != 0:
                    low = d & (~d + one)
                    w = k * 64 + bit_index[(low * _DEBRUIJN) >> np.uint64(58)]
                    tail = _add_fact(rel, wkind, warg, stamp, srow, scol, queue, tail, n, words,
                                     0, u, w, W_CONCAT, v)
                    d ^= low
            # S(w,u) S(u,v) -> S(w,v)
            for k in range(words):
                d = scol[u * words + k] & ~scol[v * words + k]
                while d != 0:
                    low = d & (~d + one)
                    w = k * 64 + bit_index[(low * _DEBRUIJN) >> np.uint64(58)]
                    tail = _add_fact(rel, wkind, warg, stamp, srow, scol, queue, tail, n, words,
                                     0, w, v, W_CONCAT, u)
                    d ^= low
            # o1/o2 edge x->u, S(u,v) -> P/Q(x,v)
            for lab in (0, 2):
                X2 = 1 if lab == 0 else 2
                kind = W_OPEN1 if lab == 0 else W_OPEN2
                for e in range(in_ptr[lab * n + u], in_ptr[lab * n + u + 1]):
                    tail = _add_fact(rel, wkind, warg, stamp, srow, scol, queue, tail, n, words,
                                     X2, in_src[e], v, kind, u)
        else:
            # P/Q(u,v), c1/c2 edge v->w -> S(u,w)
            lab = 1 if X == 1 else 3
            kind = W_CLOSE1 if X == 1 else W_CLOSE2
            for e in range(out_ptr[lab * n + v], out_ptr[lab * n + v + 1]):
                tail = _add_fact(rel, wkind, warg, stamp, srow, scol, queue, tail, n, words,
                                 0, u, out_dst[e], kind, v)
    return rel, wkind, warg, stamp


def closure_numba(n, out_ptr, out_dst, in_ptr, in_src):
    rel, wkind, warg, stamp = _closure_jit(n, out_ptr, out_dst, in_ptr, in_src, _BIT_INDEX)
    shape = (3, n, n)
    return rel.reshape(shape), wkind.reshape(shape), warg.reshape(shape), stamp.reshape(shape)


# ---------------------------------------------------------------------------
# closure: numpy
# ---------------------------------------------------------------------------


def closure_numpy(n, out_ptr, out_dst, in_ptr, in_src):
    shape = (3, n, n)
    rel = np.zeros(shape, np.uint8)
    wkind = np.full(shape, -1, np.int8)
    warg = np.full(shape, -1, np.int32)
    stamp = np.full(shape, -1, np.int32)
    S = np.zeros((n, n), dtype=bool)
    queue = []

    def add(X, u, v, kind, arg):
        if rel[X, u, v]:
            return
        rel[X, u, v] = 1
        wkind[X, u, v] = kind
        warg[X, u, v] = arg
        stamp[X, u, v] = len(queue)
        queue.append((X, u, v))
        if X == 0:
            S[u, v] = True

    for u in range(n):
        add(0, u, u, W_EPS, -1)
    head = 0
    while head < len(queue):
        X, u, v = queue[head]
        head += 1
        if X == 0:
            for w in np.flatnonzero(S[v] & ~S[u]).tolist():
                add(0, u, w, W_CONCAT, v)
            for w in np.flatnonzero(S[:, u] & ~S[:, v]).tolist():
                add(0, w, v, W_CONCAT, u)
            for lab, X2, kind in ((0, 1, W_OPEN1), (2, 2, W_OPEN2)):
                for x in in_src[in_ptr[lab * n + u]:in_ptr[lab * n + u + 1]].tolist():
                    add(X2, x, v, kind, u)
        else:
            lab, kind = (1, W_CLOSE1) if X == 1 else (3, W_CLOSE2)
            for w in out_dst[out_ptr[lab * n + v]:out_ptr[lab * n + v + 1]].tolist():
                add(0, u, w, kind, v)
    return rel, wkind, warg, stamp


# ---------------------------------------------------------------------------
# walk-scheme checker
# ---------------------------------------------------------------------------


@njit(cache=True)
def _check_scheme_jit(n, s, t, ax_u, ax_v, pu, pv, kind, pa, pb, lab, adj):
    p = pu.shape[0]
    post = np.empty(p, np.int32)
    steps = n * n
    if ax_u != s or ax_v != t:
        return AXIOM_MISMATCH, -1, steps + 1, post[:0]
    # int32 keeps the n*n lookup table cache-resident for longer
    table = np.full(n * n, -1, np.int32)
    for i in range(p):
        steps += 1
        k = kind[i]
        if k < 0 or k > 2:
            return BAD_KIND, i, steps, post[:0]
        if pu[i] < 1 or pu[i] > n or pv[i] < 1 or pv[i] > n:
            return OUT_OF_RANGE, i, steps, post[:0]
        if k == 1 and (pa[i] < 1 or pa[i] > n):
            return OUT_OF_RANGE, i, steps, post[:0]
        if k == 2:
            if pa[i] < 1 or pa[i] > n or pb[i] < 1 or pb[i] > n:
                return OUT_OF_RANGE, i, steps, post[:0]
            if lab[i] != 0 and lab[i] != 2:
                return WRAP_NOT_OPEN, i, steps, post[:0]
        cell = (pu[i] - 1) * n + (pv[i] - 1)
        if table[cell] >= 0:
            return DUPLICATE, i, steps, post[:0]
        table[cell] = i
    steps += 1
    if table[(s - 1) * n + (t - 1)] < 0:
        return AXIOM_MISSING, -1, steps, post[:0]
    # children are resolved once here so the DFS below never touches the table
    ch = np.full((p, 2), -1, np.int32)
    for i in range(p):
        steps += 1
        k = kind[i]
        u = pu[i] - 1
        v = pv[i] - 1
        if k == 0:
            if u != v:
                return EPS_OFF_DIAGONAL, i, steps, post[:0]
        elif k == 1:
            w = pa[i] - 1
            steps += 2
            if table[u * n + w] < 0:
                return MISSING_LEFT, i, steps, post[:0]
            if table[w * n + v] < 0:
                return MISSING_RIGHT, i, steps, post[:0]
            ch[i, 0] = table[u * n + w]
            ch[i, 1] = table[w * n + v]
        else:
            x = pa[i] - 1
            y = pb[i] - 1
            steps += 3
            if adj[lab[i], u, x] == 0:
                return OPEN_EDGE_ABSENT, i, steps, post[:0]
            if adj[lab[i] + 1, y, v] == 0:
                return CLOSE_EDGE_ABSENT, i, steps, post[:0]
            if table[x * n + y] < 0:
                return MISSING_INNER, i, steps, post[:0]
            ch[i, 0] = table[x * n + y]
    color = np.zeros(p, np.int8)
    st_node = np.empty(p, np.int32)
    st_child = np.empty(p, np.int8)
    done = 0
    for root in range(p):
        if color[root] != 0:
            continue
        sp = 0
        st_node[0] = root
        st_child[0] = 0
        color[root] = 1
        steps += 1
        while sp >= 0:
            i = st_node[sp]
            c = st_child[sp]
            if c < 2 and ch[i, c] >= 0:
                st_child[sp] = c + 1
                child = ch[i, c]
                steps += 1
                if color[child] == 1:
                    return CYCLE, child, steps, post[:0]
                if color[child] == 0:
                    color[child] = 1
                    sp += 1
                    st_node[sp] = child
                    st_child[sp] = 0
            else:
                color[i] = 2
                post[done] = i
                done += 1
                sp -= 1
    return OK, -1, steps, post


def check_scheme_numba(n, s, t, ax_u, ax_v, pu, pv, kind, pa, pb, lab, adj):
    code, idx, steps, post = _check_scheme_jit(n, s, t, ax_u, ax_v, pu, pv, kind, pa, pb, lab, adj)
    return int(code), int(idx), int(steps), post


def check_scheme_numpy(n, s, t, ax_u, ax_v, pu, pv, kind, pa, pb, lab, adj):
    empty = np.empty(0, np.int64)
    steps = n * n
    if ax_u != s or ax_v != t:
        return AXIOM_MISMATCH, -1, steps + 1, empty
    pu, pv, kind, pa, pb, lab = (c.tolist() for c in (pu, pv, kind, pa, pb, lab))
    p = len(pu)
    table: dict[tuple[int, int], int] = {}
    for i in range(p):
        steps += 1
        k = kind[i]
        if k not in (0, 1, 2):
            return BAD_KIND, i, steps, empty
        if not (1 <= pu[i] <= n and 1 <= pv[i] <= n):
            return OUT_OF_RANGE, i, steps, empty
        if k == 1 and not 1 <= pa[i] <= n:
            return OUT_OF_RANGE, i, steps, empty
        if k == 2:
            if not (1 <= pa[i] <= n and 1 <= pb[i] <= n):
                return OUT_OF_RANGE, i, steps, empty
            if lab[i] not in (0, 2):
                return WRAP_NOT_OPEN, i, steps, empty
        key = (pu[i], pv[i])
        if key in table:
            return DUPLICATE, i, steps, empty
        table[key] = i
    steps += 1
    if (s, t) not in table:
        return AXIOM_MISSING, -1, steps, empty
    children: list[tuple[int, ...]] = []
    for i in range(p):
        steps += 1
        k, u, v = kind[i], pu[i], pv[i]
        if k == 0:
            if u != v:
                return EPS_OFF_DIAGONAL, i, steps, empty
            children.append(())
        elif k == 1:
            w = pa[i]
            steps += 2
            if (u, w) not in table:
                return MISSING_LEFT, i, steps, empty
            if (w, v) not in table:
                return MISSING_RIGHT, i, steps, empty
            children.append((table[u, w], table[w, v]))
        else:
            x, y = pa[i], pb[i]
            steps += 3
            if not adj[lab[i], u - 1, x - 1]:
                return OPEN_EDGE_ABSENT, i, steps, empty
            if not adj[lab[i] + 1, y - 1, v - 1]:
                return CLOSE_EDGE_ABSENT, i, steps, empty
            if (x, y) not in table:
                return MISSING_INNER, i, steps, empty
            children.append((table[x, y],))
    color = [0] * p
    post = []
    for root in range(p):
        if color[root]:
            continue
        color[root] = 1
        steps += 1
        stack = [(root, 0)]
        while stack:
            i, c = stack[-1]
            kids = children[i]
            if c < len(kids):
                stack[-1] = (i, c + 1)
                child = kids[c]
                steps += 1
                if color[child] == 1:
                    return CYCLE, child, steps, empty
                if color[child] == 0:
                    color[child] = 1
                    stack.append((child, 0))
            else:
                color[i] = 2
                post.append(i)
                stack.pop()
    return OK, -1, steps, np.array(post, dtype=np.int64)


if USE_NUMBA:
    closure = closure_numba
    check_scheme = check_scheme_numba
else:
    closure = closure_numpy
    check_scheme = check_scheme_numpy
