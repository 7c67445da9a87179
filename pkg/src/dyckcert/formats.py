"""Line-oriented text formats for every exchanged document.

Each document starts with a ``<tag> 1`` header line and continues with
whitespace-separated tokens.  ``serialize_document`` emits the canonical
form (sorted collections, single spaces, LF, trailing newline), and
``parse_document(fmt, serialize_document(x)) == x`` for every valid ``x``.
Blank lines are ignored on input.
"""
from __future__ import annotations

import re

import numpy as np

from .model import (
    CONCAT, EPS, SEPARATOR_NAMES, WRAP, Bracket, HardestWord, Instance, LabeledGraph,
    PAutomaton, Pda, PdsCertificate, PushdownSystem, Rule, SeparatorBundle, SeparatorMS,
    Transition, TwoNpda, WalkScheme, hw_shape_error,
)

_INT_RE = re.compile(r"-?(0|[1-9][0-9]*)")

FORMATS = ("d2r", "wsc", "sep", "pds", "pauto", "pdscert", "pda", "npda2", "hw", "cflg")


class FormatError(ValueError):
    def __init__(self, line: int | None, reason: str):
        self.line = line
        self.reason = reason
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + reason)


class _Reader:
    def __init__(self, text, fmt: str, headers: tuple[str, ...]):
        if isinstance(text, (bytes, bytearray)):
            try:
                text = text.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise FormatError(None, f"not UTF-8: {exc}") from None
        self.lines = [(i + 1, ln.split()) for i, ln in enumerate(text.split("\n")) if ln.strip()]
        self.pos = 0
        self.fmt = fmt
        if not self.lines:
            raise FormatError(1, f"empty {fmt} document")
        lineno, toks = self.lines[0]
        if len(toks) != 2 or toks[1] != "1" or toks[0] not in headers:
            raise FormatError(lineno, f"expected header {headers[0]!r} version 1")
        self.header = toks[0]
        self.pos = 1

    @property
    def lineno(self) -> int:
        if self.pos < len(self.lines):
            return self.lines[self.pos][0]
        return self.lines[-1][0] if self.lines else 1

    def at_end(self) -> bool:
        return self.pos >= len(self.lines)

    def peek_keyword(self) -> str | None:
        return None if self.at_end() else self.lines[self.pos][1][0]

    def line(self, keyword: str | None = None, nargs: int | None = None) -> list[str]:
        if self.at_end():
            raise FormatError(self.lineno, f"unexpected end of document"
                              + (f", expected {keyword!r}" if keyword else ""))
        lineno, toks = self.lines[self.pos]
        if keyword is not None:
            if toks[0] != keyword:
                raise FormatError(lineno, f"expected {keyword!r}, got {toks[0]!r}")
            toks = toks[1:]
        if nargs is not None and len(toks) != nargs:
            raise FormatError(lineno, f"expected {nargs} fields, got {len(toks)}")
        self.pos += 1
        return toks

    def fail(self, reason: str, back: int = 1):
        idx = max(0, min(self.pos - back, len(self.lines) - 1))
        raise FormatError(self.lines[idx][0], reason)

    def int(self, tok: str, lo: int | None = None, hi: int | None = None, what="value") -> int:
        if not _INT_RE.fullmatch(tok):
            self.fail(f"{what} {tok!r} is not an integer")
        x = int(tok)
        if (lo is not None and x < lo) or (hi is not None and x > hi):
            self.fail(f"{what} {x} out of range {lo}..{hi}")
        return x

    def end(self):
        if not self.at_end():
            raise FormatError(self.lines[self.pos][0], "trailing garbage")

    def build(self, ctor, *args, **kw):
        try:
            return ctor(*args, **kw)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            self.fail(str(exc), back=1)


def _bracket(r: _Reader, tok: str) -> Bracket:
    try:
        return Bracket.from_token(tok)
    except ValueError:
        r.fail(f"unknown token {tok!r}")


# ---------------------------------------------------------------------------
# parsers
# ---------------------------------------------------------------------------


def _parse_graph(r: _Reader, labeled: bool):
    n = r.int(r.line("vertices", 1)[0], 1, what="vertex count")
    s = r.int(r.line("source", 1)[0], 1, n, what="source")
    t = r.int(r.line("target", 1)[0], 1, n, what="target")
    m = r.int(r.line("edges", 1)[0], 0, what="edge count")
    edges = []
    for _ in range(m):
        u, v, lab = r.line(nargs=3)
        u = r.int(u, 1, n, what="vertex")
        v = r.int(v, 1, n, what="vertex")
        edges.append((u, v, lab if labeled else _bracket(r, lab)))
    r.end()
    if labeled:
        return r.build(LabeledGraph, n, s, t, frozenset(edges))
    return r.build(Instance, n, s, t, frozenset(edges))


def _parse_wsc(r: _Reader) -> WalkScheme:
    s, t = (r.int(x, 1, what="vertex") for x in r.line("axiom", 2))
    rows, seen = [], set()
    while not r.at_end():
        toks = r.line("prod")
        if len(toks) < 3:
            r.fail("short production line")
        u = r.int(toks[0], 1, what="vertex")
        v = r.int(toks[1], 1, what="vertex")
        kind, rest = toks[2], toks[3:]
        if (u, v) in seen:
            r.fail(f"duplicate production for <{u},{v}>")
        seen.add((u, v))
        if kind == "eps" and not rest:
            if u != v:
                r.fail(f"eps production on off-diagonal pair <{u},{v}>")
            rows.append((u, v, EPS, 0, 0, -1))
        elif kind == "concat" and len(rest) == 1:
            rows.append((u, v, CONCAT, r.int(rest[0], 1, what="vertex"), 0, -1))
        elif kind == "wrap" and len(rest) == 3:
            lab = _bracket(r, rest[2])
            if not lab.is_open:
                r.fail(f"wrap label {lab} is not an opening bracket")
            rows.append((u, v, WRAP, r.int(rest[0], 1, what="vertex"),
                         r.int(rest[1], 1, what="vertex"), int(lab)))
        else:
            r.fail(f"malformed production {' '.join(toks)!r}")
    arr = np.array(rows, dtype=np.int64).reshape(-1, 6)
    return WalkScheme((s, t), *arr.T)


def _parse_matrix(r: _Reader, name: str, k: int, hi: int | None, hi_msg: str) -> np.ndarray:
    got = r.line("matrix", 1)[0]
    if got != name:
        r.fail(f"expected matrix {name}, got {got}")
    m = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        row = r.line(nargs=k)
        for j, tok in enumerate(row):
            x = r.int(tok, 0, what="entry")
            if hi is not None and x > hi:
                r.fail(f"{name}[{i + 1},{j + 1}]: {hi_msg}")
            m[i, j] = x
    return m


def _parse_sep(r: _Reader):
    n = r.int(r.line("n", 1)[0], 1, what="dimension")
    if r.header == "sep-ms":
        ms = _parse_matrix(r, "MS", n, 1, "MS entry not in {0,1}")
        r.end()
        return r.build(SeparatorMS, ms)
    mats = {}
    for name in SEPARATOR_NAMES:
        if name == "MS":
            mats[name] = _parse_matrix(r, name, n, 1, "MS entry not in {0,1}")
        else:
            mats[name] = _parse_matrix(r, name, n, n * n, "entry exceeds n²")
    r.end()
    return r.build(SeparatorBundle, **mats)


def _parse_pds(r: _Reader) -> PushdownSystem:
    states = r.line("states")
    stack = r.line("stack")
    rules = []
    while not r.at_end():
        toks = r.line("rule")
        if len(toks) < 4 or toks[2] != "->" or len(toks) > 6:
            r.fail("expected 'rule p A -> q [B [C]]'")
        rules.append(Rule(toks[0], toks[1], toks[3], tuple(toks[4:])))
    if len(set(rules)) != len(rules):
        r.fail("duplicate rule")
    return r.build(PushdownSystem, tuple(states), tuple(stack), frozenset(rules))


def _parse_pauto(r: _Reader) -> PAutomaton:
    states = r.line("states")
    final = r.line("final")
    trans = []
    while not r.at_end():
        trans.append(tuple(r.line("trans", 3)))
    if len(set(trans)) != len(trans):
        r.fail("duplicate transition")
    return r.build(PAutomaton, tuple(states), frozenset(trans), frozenset(final))


def _parse_pdscert(r: _Reader) -> PdsCertificate:
    states = tuple(r.line("states"))
    stack = tuple(r.line("stack"))
    k = len(states)
    if list(states) != sorted(set(states)) or list(stack) != sorted(set(stack)):
        r.fail("states and stack must be listed sorted and without repeats")
    g = stack
    M = {a: _parse_matrix(r, f"M:{a}", k, 1, "M entry not in {0,1}") for a in g}
    MAB = {(a, b): _parse_matrix(r, f"MAB:{a}:{b}", k, None, "") for a in g for b in g}
    M1 = {(a, b, c): _parse_matrix(r, f"M1:{a}:{b}:{c}", k, None, "")
          for a in g for b in g for c in g}
    M2 = {(a, b, c): _parse_matrix(r, f"M2:{a}:{b}:{c}", k, None, "")
          for a in g for b in g for c in g}
    r.end()
    return r.build(PdsCertificate, states, stack, M, MAB, M1, M2)


_MOVES = {"+1": 1, "0": 0, "-1": -1}


def _parse_machine(r: _Reader, cls):
    states = r.line("states")
    inp = r.line("input")
    stack = r.line("stack")
    q0, z0 = r.line("init", 2)
    final = r.line("final")
    trans = []
    while not r.at_end():
        toks = r.line("trans", 7)
        q, a, z, arrow, q2, gamma, d = toks
        if arrow != "->":
            r.fail("expected 'trans q a Z -> q2 gamma d'")
        if d not in _MOVES:
            r.fail(f"head move {d!r} must be one of +1, 0, -1")
        g = () if gamma == "eps" else tuple(gamma.split(","))
        if any(not x for x in g):
            r.fail(f"malformed stack word {gamma!r}")
        trans.append(Transition(q, a, z, q2, g, _MOVES[d]))
    if len(set(trans)) != len(trans):
        r.fail("duplicate transition")
    return r.build(cls, tuple(states), tuple(inp), tuple(stack), frozenset(trans), q0, z0,
                   frozenset(final))


def _parse_hw(r: _Reader) -> HardestWord:
    toks = []
    while not r.at_end():
        toks.extend(r.line())
    err = hw_shape_error(toks)
    if err is not None:
        raise FormatError(None, f"malformed hardest word: {err}")
    return HardestWord(tuple(toks))


def hw_tokens(text) -> list[str]:
    """Token list of an ``hw`` document without any shape check beyond the header."""
    r = _Reader(text, "hw", ("hw",))
    toks = []
    while not r.at_end():
        toks.extend(r.line())
    return toks


def parse_document(fmt: str, text):
    """Parse ``text`` (bytes or str) as a document of format ``fmt``."""
    if fmt == "d2r":
        return _parse_graph(_Reader(text, fmt, ("d2r",)), labeled=False)
    if fmt == "cflg":
        return _parse_graph(_Reader(text, fmt, ("cflg",)), labeled=True)
    if fmt == "wsc":
        return _parse_wsc(_Reader(text, fmt, ("wsc",)))
    if fmt == "sep":
        return _parse_sep(_Reader(text, fmt, ("sep", "sep-ms")))
    if fmt == "pds":
        return _parse_pds(_Reader(text, fmt, ("pds",)))
    if fmt == "pauto":
        return _parse_pauto(_Reader(text, fmt, ("pauto",)))
    if fmt == "pdscert":
        return _parse_pdscert(_Reader(text, fmt, ("pdscert",)))
    if fmt == "pda":
        return _parse_machine(_Reader(text, fmt, ("pda",)), Pda)
    if fmt == "npda2":
        return _parse_machine(_Reader(text, fmt, ("npda2",)), TwoNpda)
    if fmt == "hw":
        return _parse_hw(_Reader(text, fmt, ("hw",)))
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# serializers
# ---------------------------------------------------------------------------


def _matrix_lines(name: str, m: np.ndarray) -> list[str]:
    return [f"matrix {name}"] + [" ".join(str(int(x)) for x in row) for row in m]


def _d(x: int) -> str:
    return {1: "+1", 0: "0", -1: "-1"}[x]


def _serialize_lines(doc) -> list[str]:
    if isinstance(doc, Instance):
        out = ["d2r 1", f"vertices {doc.n}", f"source {doc.s}", f"target {doc.t}",
               f"edges {len(doc.edges)}"]
        out += [f"{u} {v} {lab.token}" for u, v, lab in doc.sorted_edges()]
        return out
    if isinstance(doc, LabeledGraph):
        out = ["cflg 1", f"vertices {doc.n}", f"source {doc.s}", f"target {doc.t}",
               f"edges {len(doc.edges)}"]
        return out + [f"{u} {v} {a}" for u, v, a in sorted(doc.edges)]
    if isinstance(doc, WalkScheme):
        out = ["wsc 1", f"axiom {doc.axiom[0]} {doc.axiom[1]}"]
        for i in range(len(doc)):
            u, v, k = int(doc.u[i]), int(doc.v[i]), int(doc.kind[i])
            if k == EPS:
                out.append(f"prod {u} {v} eps")
            elif k == CONCAT:
                out.append(f"prod {u} {v} concat {int(doc.a[i])}")
            else:
                lab = Bracket(int(doc.label[i])).token
                out.append(f"prod {u} {v} wrap {int(doc.a[i])} {int(doc.b[i])} {lab}")
        return out
    if isinstance(doc, SeparatorBundle):
        out = ["sep 1", f"n {doc.n}"]
        for name, m in zip(SEPARATOR_NAMES, doc.matrices()):
            out += _matrix_lines(name, m)
        return out
    if isinstance(doc, SeparatorMS):
        return ["sep-ms 1", f"n {doc.MS.shape[0]}"] + _matrix_lines("MS", doc.MS)
    if isinstance(doc, PushdownSystem):
        out = ["pds 1", " ".join(["states", *doc.states]), " ".join(["stack", *doc.stack])]
        for r in sorted(doc.rules):
            out.append(" ".join(["rule", r.p, r.A, "->", r.q, *r.w]))
        return out
    if isinstance(doc, PAutomaton):
        out = ["pauto 1", " ".join(["states", *doc.states]),
               " ".join(["final", *sorted(doc.final)])]
        return out + [f"trans {s} {a} {s2}" for s, a, s2 in sorted(doc.transitions)]
    if isinstance(doc, PdsCertificate):
        out = ["pdscert 1", " ".join(["states", *doc.states]), " ".join(["stack", *doc.stack])]
        g = doc.stack
        for a in g:
            out += _matrix_lines(f"M:{a}", doc.M[a])
        for a in g:
            for b in g:
                out += _matrix_lines(f"MAB:{a}:{b}", doc.MAB[(a, b)])
        for name, d in (("M1", doc.M1), ("M2", doc.M2)):
            for a in g:
                for b in g:
                    for c in g:
                        out += _matrix_lines(f"{name}:{a}:{b}:{c}", d[(a, b, c)])
        return out
    if isinstance(doc, (Pda, TwoNpda)):
        tag = "npda2" if isinstance(doc, TwoNpda) else "pda"
        out = [f"{tag} 1", " ".join(["states", *doc.states]), " ".join(["input", *doc.input]),
               " ".join(["stack", *doc.stack]), f"init {doc.init} {doc.bottom}",
               " ".join(["final", *sorted(doc.final)])]
        for t in doc.sorted_transitions():
            g = ",".join(t.gamma) if t.gamma else "eps"
            out.append(f"trans {t.q} {t.a} {t.Z} -> {t.q2} {g} {_d(t.d)}")
        return out
    if isinstance(doc, HardestWord):
        return ["hw 1", " ".join(doc.tokens)]
    raise TypeError(f"cannot serialize {type(doc).__name__}")


def serialize_document(doc) -> bytes:
    return ("\n".join(_serialize_lines(doc)) + "\n").encode("utf-8")
