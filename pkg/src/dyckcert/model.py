"""Value types shared by the solver, the certificate checkers and the reductions.

Vertices are the integers ``1..n``.  Every type validates its invariants on
construction and raises :class:`ValueError` when they do not hold; the text
parsers in :mod:`dyckcert.formats` turn those into ``FormatError`` with a
line number.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator, Mapping, NamedTuple

import numpy as np


class Bracket(IntEnum):
    """One of the four Dyck-2 letters.  ``b ^ 1`` is the matching bracket."""

    O1 = 0
    C1 = 1
    O2 = 2
    C2 = 3

    @property
    def token(self) -> str:
        return _BRACKET_TOKENS[self]

    @property
    def is_open(self) -> bool:
        return self in (Bracket.O1, Bracket.O2)

    def matching(self) -> "Bracket":
        return Bracket(self ^ 1)

    @classmethod
    def from_token(cls, tok: str) -> "Bracket":
        try:
            return _TOKEN_BRACKETS[tok]
        except KeyError:
            raise ValueError(f"unknown bracket {tok!r}") from None

    def __str__(self) -> str:
        return self.token


_BRACKET_TOKENS = {Bracket.O1: "o1", Bracket.C1: "c1", Bracket.O2: "o2", Bracket.C2: "c2"}
_TOKEN_BRACKETS = {v: k for k, v in _BRACKET_TOKENS.items()}

OPEN_BRACKETS = (Bracket.O1, Bracket.O2)
CLOSE_BRACKETS = (Bracket.C1, Bracket.C2)


_NAME_RE = re.compile(r"[^\s,:]+")
_RESERVED = {"->", "eps"}


def check_name(name: str, what: str = "name") -> str:
    if not isinstance(name, str) or not _NAME_RE.fullmatch(name) or name in _RESERVED:
        raise ValueError(f"invalid {what} {name!r}")
    return name


# ---------------------------------------------------------------------------
# Dyck-2 instances, walks, walk schemes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """A Dyck-2 reachability instance: labelled digraph on ``1..n`` plus source and target."""

    n: int
    s: int
    t: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError("an instance needs at least one vertex")
        object.__setattr__(self, "n", n)
        for name in ("s", "t"):
            x = int(getattr(self, name))
            if not 1 <= x <= n:
                raise ValueError(f"{name}={x} outside 1..{n}")
            object.__setattr__(self, name, x)
        edges = set()
        for u, v, lab in self.edges:
            u, v = int(u), int(v)
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u},{v}) has an endpoint outside 1..{n}")
            edges.add((u, v, Bracket(lab)))
        object.__setattr__(self, "edges", frozenset(edges))

    def sorted_edges(self) -> list[tuple[int, int, Bracket]]:
        return sorted(self.edges)

    def edge_array(self) -> np.ndarray:
        """``(m, 3)`` int64 array of ``(from, to, label)`` rows, 1-based, canonical order."""
        arr = self.__dict__.get("_edge_array")
        if arr is None:
            arr = np.array(self.sorted_edges(), dtype=np.int64).reshape(-1, 3)
            arr.setflags(write=False)
            self.__dict__["_edge_array"] = arr
        return arr

    def adjacency(self, label: Bracket) -> np.ndarray:
        """0-1 int64 adjacency matrix of the edges carrying ``label`` (0-based indices)."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        e = self.edge_array()
        sel = e[e[:, 2] == int(label)]
        a[sel[:, 0] - 1, sel[:, 1] - 1] = 1
        return a

    def has_edge(self, u: int, v: int, label: Bracket) -> bool:
        return (u, v, Bracket(label)) in self.edges

    def with_edges(self, extra: Iterable) -> "Instance":
        return Instance(self.n, self.s, self.t, self.edges | frozenset(
            (u, v, Bracket(l)) for u, v, l in extra))

    def __repr__(self):
        return f"Instance(n={self.n}, s={self.s}, t={self.t}, edges={len(self.edges)})"


@dataclass(frozen=True)
class Walk:
    start: int
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((int(v), Bracket(l)) for v, l in self.steps))

    @property
    def end(self) -> int:
        return self.steps[-1][0] if self.steps else self.start

    def labels(self) -> list[Bracket]:
        return [lab for _, lab in self.steps]

    def edges(self) -> Iterator[tuple[int, int, Bracket]]:
        cur = self.start
        for v, lab in self.steps:
            yield cur, v, lab
            cur = v

    def __len__(self):
        return len(self.steps)


# production kind codes used by the array representation
EPS, CONCAT, WRAP = 0, 1, 2


@dataclass(frozen=True)
class Eps:
    pass


@dataclass(frozen=True)
class Concat:
    w: int


@dataclass(frozen=True)
class Wrap:
    x: int
    y: int
    open: Bracket

    def __post_init__(self):
        object.__setattr__(self, "open", Bracket(self.open))


Production = Eps | Concat | Wrap


_I32 = np.iinfo(np.int32)


class WalkScheme:
    """Straight-line grammar over vertex pairs, stored column-wise.

    Productions live in parallel int32 arrays sorted by left-hand side:
    ``u, v`` is the nonterminal, ``kind`` one of ``EPS/CONCAT/WRAP``,
    ``a`` the split vertex (concat) or ``x`` (wrap), ``b`` the ``y`` of a
    wrap and ``label`` its opening bracket (``-1`` otherwise).  Unused
    slots hold 0.  The arrays are not checked against any instance;
    :func:`dyckcert.certyes.verify_walk_scheme` does that.
    """

    __slots__ = ("axiom", "u", "v", "kind", "a", "b", "label")

    def __init__(self, axiom, u, v, kind, a, b, label):
        self.axiom = (int(axiom[0]), int(axiom[1]))
        cols = [np.asarray(c, dtype=np.int64).reshape(-1) for c in (u, v, kind, a, b, label)]
        if len({len(c) for c in cols}) > 1:
            raise ValueError("production columns differ in length")
        # int32 halves the checker's memory traffic; a silent wrap would alias vertex ids
        if any(c.size and (c.min() < _I32.min or c.max() > _I32.max) for c in cols):
            raise ValueError("production entry outside the int32 range")
        cols = [c.astype(np.int32) for c in cols]
        order = np.lexsort(cols[::-1])
        for name, c in zip(("u", "v", "kind", "a", "b", "label"), cols):
            c = c[order]
            c.setflags(write=False)
            setattr(self, name, c)

    @classmethod
    def from_productions(cls, axiom, productions) -> "WalkScheme":
        """Build from a mapping or an iterable of ``((u, v), production)`` pairs."""
        items = productions.items() if isinstance(productions, Mapping) else productions
        rows = []
        for (u, v), p in items:
            if isinstance(p, Eps):
                rows.append((u, v, EPS, 0, 0, -1))
            elif isinstance(p, Concat):
                rows.append((u, v, CONCAT, p.w, 0, -1))
            elif isinstance(p, Wrap):
                rows.append((u, v, WRAP, p.x, p.y, int(p.open)))
            else:
                raise TypeError(f"not a production: {p!r}")
        arr = np.array(rows, dtype=np.int64).reshape(-1, 6)
        return cls(axiom, *arr.T)

    def production_at(self, i: int) -> Production:
        k = int(self.kind[i])
        if k == EPS:
            return Eps()
        if k == CONCAT:
            return Concat(int(self.a[i]))
        if k == WRAP:
            return Wrap(int(self.a[i]), int(self.b[i]), Bracket(int(self.label[i])))
        raise ValueError(f"bad production kind {k}")

    def items(self) -> Iterator[tuple[tuple[int, int], Production]]:
        for i in range(len(self)):
            yield (int(self.u[i]), int(self.v[i])), self.production_at(i)

    @property
    def productions(self) -> dict:
        """Mapping view; assumes at most one production per nonterminal."""
        return dict(self.items())

    def __len__(self):
        return len(self.u)

    def __eq__(self, other):
        if not isinstance(other, WalkScheme):
            return NotImplemented
        return self.axiom == other.axiom and all(
            np.array_equal(getattr(self, c), getattr(other, c))
            for c in ("u", "v", "kind", "a", "b", "label"))

    def __hash__(self):
        return hash((self.axiom, len(self), self.u.tobytes(), self.kind.tobytes()))

    def __repr__(self):
        return f"WalkScheme(axiom={self.axiom}, productions={len(self)})"


# ---------------------------------------------------------------------------
# Separators
# ---------------------------------------------------------------------------

SEPARATOR_NAMES = ("MS", "MSS", "Mo1S", "Mo2S", "Mo1Sc1", "Mo2Sc2")


@dataclass(frozen=True, eq=False)
class SeparatorBundle:
    """The six ``n x n`` matrices of a non-reachability certificate."""

    MS: np.ndarray
    MSS: np.ndarray
    Mo1S: np.ndarray
    Mo2S: np.ndarray
    Mo1Sc1: np.ndarray
    Mo2Sc2: np.ndarray

    def __post_init__(self):
        n = None
        for name in SEPARATOR_NAMES:
            m = np.array(getattr(self, name), dtype=np.int64)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"{name} is not square")
            if n is None:
                n = m.shape[0]
            elif m.shape[0] != n:
                raise ValueError(f"{name} has dimension {m.shape[0]}, expected {n}")
            if m.size and (m.min() < 0 or m.max() > n * n):
                raise ValueError(f"{name}: entry exceeds n² or is negative")
            m.setflags(write=False)
            object.__setattr__(self, name, m)
        if self.MS.size and self.MS.max() > 1:
            raise ValueError("MS must be a 0-1 matrix")

    @property
    def n(self) -> int:
        return self.MS.shape[0]

    def matrices(self) -> tuple[np.ndarray, ...]:
        return tuple(getattr(self, name) for name in SEPARATOR_NAMES)

    def replace(self, **changes) -> "SeparatorBundle":
        kw = {name: getattr(self, name) for name in SEPARATOR_NAMES}
        kw.update(changes)
        return SeparatorBundle(**kw)

    def __eq__(self, other):
        if not isinstance(other, SeparatorBundle):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.matrices(), other.matrices()))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SeparatorMS:
    """Only the 0-1 matrix ``MS``; the rest is recomputed by ``complete_from_MS``."""

    MS: np.ndarray

    def __post_init__(self):
        m = np.array(self.MS, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("MS is not square")
        if m.size and (m.min() < 0 or m.max() > 1):
            raise ValueError("MS must be a 0-1 matrix")
        m.setflags(write=False)
        object.__setattr__(self, "MS", m)

    def __eq__(self, other):
        return isinstance(other, SeparatorMS) and np.array_equal(self.MS, other.MS)

    __hash__ = None


# ---------------------------------------------------------------------------
# Pushdown systems and P-automata
# ---------------------------------------------------------------------------


class Rule(NamedTuple):
    """``(p, A) -> (q, w)`` with ``w`` written top of stack first."""

    p: str
    A: str
    q: str
    w: tuple = ()


@dataclass(frozen=True)
class PushdownSystem:
    states: tuple
    stack: tuple
    rules: frozenset = frozenset()

    def __post_init__(self):
        states = tuple(sorted(set(check_name(q, "state") for q in self.states)))
        stack = tuple(sorted(set(check_name(a, "stack symbol") for a in self.stack)))
        if not states:
            raise ValueError("a pushdown system needs a state")
        qs, gs = set(states), set(stack)
        rules = set()
        for r in self.rules:
            r = Rule(r[0], r[1], r[2], tuple(r[3]))
            if r.p not in qs or r.q not in qs:
                raise ValueError(f"rule {r} uses an unknown state")
            if r.A not in gs or any(x not in gs for x in r.w):
                raise ValueError(f"rule {r} uses an unknown stack symbol")
            if len(r.w) > 2:
                raise ValueError(f"rule {r} pushes more than two symbols")
            rules.add(r)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "stack", stack)
        object.__setattr__(self, "rules", frozenset(rules))


@dataclass(frozen=True)
class PAutomaton:
    """NFA over stack symbols whose runs from control states accept configurations."""

    states: tuple
    transitions: frozenset = frozenset()
    final: frozenset = frozenset()

    def __post_init__(self):
        states = tuple(sorted(set(check_name(q, "state") for q in self.states)))
        ss = set(states)
        trans = set()
        for s, a, s2 in self.transitions:
            if s not in ss or s2 not in ss:
                raise ValueError(f"transition ({s},{a},{s2}) uses an unknown state")
            trans.add((s, check_name(a, "stack symbol"), s2))
        final = frozenset(self.final)
        if not final <= ss:
            raise ValueError("final states must be states")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", frozenset(trans))
        object.__setattr__(self, "final", final)

    def index(self) -> dict:
        return {q: i for i, q in enumerate(self.states)}

    def accepts(self, q: str, word: Iterable[str]) -> bool:
        cur = {q}
        for a in word:
            cur = {s2 for s, b, s2 in self.transitions if s in cur and b == a}
            if not cur:
                return False
        return bool(cur & self.final)


@dataclass(frozen=True, eq=False)
class PdsCertificate:
    """Matrix family certifying that a configuration cannot reach a regular set.

    ``M[A]`` is 0-1; ``MAB[(A, B)]``, ``M1[(A, B, C)]`` and ``M2[(A, B, C)]``
    are nonnegative integer matrices, all ``|S| x |S|`` over ``states``.
    """

    states: tuple
    stack: tuple
    M: dict
    MAB: dict
    M1: dict
    M2: dict

    def __post_init__(self):
        k = len(self.states)
        stack = tuple(self.stack)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "stack", stack)

        def norm(d, keys, name, boolean=False):
            if set(d) != set(keys):
                raise ValueError(f"{name}: wrong set of blocks")
            out = {}
            for key in keys:
                m = np.array(d[key], dtype=np.int64)
                if m.shape != (k, k):
                    raise ValueError(f"{name}{key}: expected {k}x{k}")
                if m.size and m.min() < 0:
                    raise ValueError(f"{name}{key}: negative entry")
                if boolean and m.size and m.max() > 1:
                    raise ValueError(f"{name}{key}: must be 0-1")
                m.setflags(write=False)
                out[key] = m
            return out

        g = stack
        object.__setattr__(self, "M", norm(self.M, g, "M", boolean=True))
        object.__setattr__(self, "MAB", norm(self.MAB, [(a, b) for a in g for b in g], "MAB"))
        triples = [(a, b, c) for a in g for b in g for c in g]
        object.__setattr__(self, "M1", norm(self.M1, triples, "M1"))
        object.__setattr__(self, "M2", norm(self.M2, triples, "M2"))

    def entry_count(self) -> int:
        return sum(m.size for d in (self.M, self.MAB, self.M1, self.M2) for m in d.values())

    def replace(self, **changes) -> "PdsCertificate":
        kw = dict(states=self.states, stack=self.stack, M=dict(self.M), MAB=dict(self.MAB),
                  M1=dict(self.M1), M2=dict(self.M2))
        kw.update(changes)
        return PdsCertificate(**kw)

    def __eq__(self, other):
        if not isinstance(other, PdsCertificate):
            return NotImplemented
        if (self.states, self.stack) != (other.states, other.stack):
            return False
        for name in ("M", "MAB", "M1", "M2"):
            a, b = getattr(self, name), getattr(other, name)
            if any(not np.array_equal(a[key], b[key]) for key in a):
                return False
        return True

    __hash__ = None


# ---------------------------------------------------------------------------
# One-way and two-way pushdown automata
# ---------------------------------------------------------------------------

LEFT_END, RIGHT_END = "<", ">"


class Transition(NamedTuple):
    """``(q, a, Z) -> (q2, gamma, d)``; ``gamma`` lists the new stack top first."""

    q: str
    a: str
    Z: str
    q2: str
    gamma: tuple
    d: int


class HeadEscape(ValueError):
    """A two-way transition would move the head off the tape."""


@dataclass(frozen=True)
class _Machine:
    states: tuple
    input: tuple
    stack: tuple
    transitions: frozenset
    init: str
    bottom: str
    final: frozenset = frozenset()

    _moves = (0, 1)
    _kind = "pda"

    def __post_init__(self):
        states = tuple(sorted(set(check_name(q, "state") for q in self.states)))
        inp = tuple(sorted(set(check_name(a, "input symbol") for a in self.input)))
        stack = tuple(sorted(set(check_name(a, "stack symbol") for a in self.stack)))
        qs, ins, gs = set(states), set(inp), set(stack)
        if self.init not in qs:
            raise ValueError(f"initial state {self.init!r} is not a state")
        if self.bottom not in gs:
            raise ValueError(f"bottom symbol {self.bottom!r} is not a stack symbol")
        final = frozenset(self.final)
        if not final <= qs:
            raise ValueError("final states must be states")
        z0 = self.bottom
        trans = set()
        for t in self.transitions:
            t = Transition(t[0], t[1], t[2], t[3], tuple(t[4]), int(t[5]))
            if t.q not in qs or t.q2 not in qs:
                raise ValueError(f"transition {t} uses an unknown state")
            if t.a not in ins:
                raise ValueError(f"transition {t} reads an unknown input symbol")
            if t.Z not in gs or any(x not in gs for x in t.gamma):
                raise ValueError(f"transition {t} uses an unknown stack symbol")
            if t.d not in self._moves:
                raise ValueError(f"transition {t} has head move {t.d} not in {self._moves}")
            if t.Z == z0:
                if not t.gamma or t.gamma[-1] != z0 or z0 in t.gamma[:-1]:
                    raise ValueError(f"transition {t} must keep {z0} at the bottom")
            elif z0 in t.gamma:
                raise ValueError(f"transition {t} pushes the bottom symbol {z0}")
            self._check_head(t)
            trans.add(t)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "input", inp)
        object.__setattr__(self, "stack", stack)
        object.__setattr__(self, "final", final)
        object.__setattr__(self, "transitions", frozenset(trans))

    def _check_head(self, t):
        pass

    def sorted_transitions(self) -> list[Transition]:
        return sorted(self.transitions)


class Pda(_Machine):
    """One-way nondeterministic PDA.

    ``d = +1`` transitions consume their input letter; ``d = 0`` transitions
    are silent moves whose letter is only a tag.  A word is accepted when it
    has been consumed entirely and the machine sits in a final state with
    only the bottom symbol on the stack.
    """

    _moves = (0, 1)


class TwoNpda(_Machine):
    """Two-way nondeterministic PDA over a tape ``< w >``."""

    _moves = (-1, 0, 1)
    _kind = "npda2"

    def __post_init__(self):
        if LEFT_END not in self.input or RIGHT_END not in self.input:
            raise ValueError("the input alphabet must contain the endmarkers < and >")
        super().__post_init__()

    def _check_head(self, t):
        if (t.a == LEFT_END and t.d == -1) or (t.a == RIGHT_END and t.d == 1):
            raise HeadEscape(f"transition {t} moves the head off the tape")


@dataclass(frozen=True)
class LabeledGraph:
    """Input to the general CFL-to-Dyck-2 reduction: edges carry arbitrary letters."""

    n: int
    s: int
    t: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        n = int(self.n)
        if n < 1 or not (1 <= self.s <= n and 1 <= self.t <= n):
            raise ValueError("bad vertex count or endpoint")
        edges = set()
        for u, v, a in self.edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u},{v}) has an endpoint outside 1..{n}")
            edges.add((int(u), int(v), check_name(a, "letter")))
        object.__setattr__(self, "edges", frozenset(edges))


# ---------------------------------------------------------------------------
# Hardest-language words
# ---------------------------------------------------------------------------

VMARK, ONE, MINUS, EDGESEP = "V", "1", "-", "E"
HW_TOKENS = frozenset({"o1", "c1", "o2", "c2", VMARK, ONE, MINUS, EDGESEP})


def hw_shape_error(tokens) -> str | None:
    """Return why ``tokens`` is not of the block/entry shape, or ``None``."""
    toks = list(tokens)
    for tok in toks:
        if tok not in HW_TOKENS:
            return f"unknown token {tok!r}"
    if not toks or toks[0] != VMARK:
        return "word must start with the vertex marker V"
    i, m = 0, len(toks)
    while i < m:
        # toks[i] == VMARK here
        i += 1
        if i == m or toks[i] == VMARK:
            continue
        while True:
            if toks[i] not in _TOKEN_BRACKETS:
                return f"token {i}: expected a bracket, got {toks[i]!r}"
            i += 1
            if i < m and toks[i] == MINUS:
                i += 1
                if i == m or toks[i] != ONE:
                    return f"token {i}: '-' must be followed by 1"
            while i < m and toks[i] == ONE:
                i += 1
            if i == m or toks[i] == VMARK:
                break
            if toks[i] != EDGESEP:
                return f"token {i}: expected E or V, got {toks[i]!r}"
            i += 1
            if i == m:
                return "word ends with an edge separator"
    return None


@dataclass(frozen=True)
class HardestWord:
    tokens: tuple = field(default_factory=tuple)

    def __post_init__(self):
        toks = tuple(self.tokens)
        err = hw_shape_error(toks)
        if err is not None:
            raise ValueError(err)
        object.__setattr__(self, "tokens", toks)

    def __len__(self):
        return len(self.tokens)

    def __str__(self):
        return " ".join(self.tokens)


# ---------------------------------------------------------------------------
# Checker results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of a certificate check.

    ``steps`` counts elementary checks (walk schemes), ``probes`` counts
    random probe vectors drawn (randomized checkers); both are 0 when unused.
    """

    ok: bool
    reason: str = ""
    steps: int = 0
    probes: int = 0

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "accept" if self.ok else f"reject: {self.reason}"
