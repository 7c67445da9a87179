import numpy as np
import pytest

from dyckcert import generators, kernels
from dyckcert.certyes import (
    NotAYesInstance, TooLong, expand_length, expand_walk, extract_walk_scheme, verify_walk_scheme,
)
from dyckcert.model import CONCAT, EPS, WRAP, Bracket, Concat, Eps, Instance, Walk, WalkScheme, Wrap
from dyckcert.oracle import bounded_walk_search, dyck2_word_check
from dyckcert.solver import decide


def scheme(axiom, prods):
    return WalkScheme.from_productions(axiom, prods)


def test_single_vertex_scheme(single):
    ws = extract_walk_scheme(single)
    assert ws.axiom == (1, 1) and ws.productions == {(1, 1): Eps()}
    assert verify_walk_scheme(single, ws).ok
    assert expand_length(ws) == 0
    assert expand_walk(ws, 0) == Walk(1, ())


def test_wrap3_scheme(wrap3):
    ws = extract_walk_scheme(wrap3)
    assert ws.productions == {(1, 3): Wrap(2, 2, Bracket.O1), (2, 2): Eps()}
    assert verify_walk_scheme(wrap3, ws).ok
    assert expand_length(ws) == 2
    walk = expand_walk(ws, 10)
    assert walk == Walk(1, ((2, Bracket.O1), (3, Bracket.C1)))
    assert walk.labels() == bounded_walk_search(wrap3, 4).labels()
    with pytest.raises(TooLong):
        expand_walk(ws, 1)


def test_no_instance_has_no_scheme(cycle2):
    with pytest.raises(NotAYesInstance):
        extract_walk_scheme(cycle2)


@pytest.mark.parametrize("axiom, prods, reason", [
    ((1, 3), {(1, 3): Wrap(2, 2, Bracket.O2), (2, 2): Eps()}, "edge (1,2,o2) absent"),
    ((1, 3), {(1, 3): Wrap(2, 2, Bracket.O1)}, "<2,2> used by <1,3> has no production"),
    ((1, 2), {(1, 3): Wrap(2, 2, Bracket.O1), (2, 2): Eps()}, "axiom <1,2> differs"),
    ((1, 3), {(2, 2): Eps()}, "axiom <1,3> has no production"),
    ((1, 3), {(1, 3): Concat(2), (1, 2): Eps(), (2, 2): Eps(), (2, 3): Eps()},
     "eps production for off-diagonal <1,2>"),
    ((1, 3), {(1, 3): Wrap(2, 4, Bracket.O1), (2, 2): Eps()}, "outside 1..3"),
    ((1, 3), {(1, 3): Wrap(2, 2, Bracket.C1), (2, 2): Eps()}, "non-opening label"),
    ((1, 3), {(1, 3): Concat(3), (3, 3): Concat(3)}, "dependency cycle"),
])
def test_rejections(wrap3, axiom, prods, reason):
    v = verify_walk_scheme(wrap3, scheme(axiom, prods))
    assert not v.ok and reason in v.reason


def test_self_reference_is_a_cycle(single):
    v = verify_walk_scheme(single, scheme((1, 1), {(1, 1): Concat(1)}))
    assert not v.ok and v.reason == "dependency cycle through <1,1>"


def test_duplicate_rows_are_rejected(wrap3):
    ws = WalkScheme((1, 3), [1, 1, 2], [3, 3, 2], [WRAP, WRAP, EPS], [2, 2, 0], [2, 2, 0],
                    [0, 0, -1])
    v = verify_walk_scheme(wrap3, ws)
    assert not v.ok and v.reason == "duplicate production for <1,3>"


def test_closing_edge_checked():
    inst = Instance(3, 1, 3, {(1, 2, Bracket.O1), (2, 3, Bracket.C2)})
    v = verify_walk_scheme(inst, scheme((1, 3), {(1, 3): Wrap(2, 2, Bracket.O1), (2, 2): Eps()}))
    assert v.reason == "edge (2,3,c1) absent"


def test_completeness_soundness_and_size():
    yes = 0
    for seed in range(200):
        inst = generators.random_instance(seed, int(seed % 8) + 1, generators.DENSITIES["medium"])
        if not decide(inst):
            continue
        yes += 1
        ws = extract_walk_scheme(inst)
        v = verify_walk_scheme(inst, ws)
        assert v.ok and len(ws) <= inst.n ** 2
        if expand_length(ws) <= 10_000:
            walk = expand_walk(ws, 10_000)
            assert walk.start == inst.s and walk.end == inst.t
            assert all(inst.has_edge(*e) for e in walk.edges())
            assert dyck2_word_check(walk.labels())
    assert yes > 60


def test_step_counter_is_quadratic():
    for n in (50, 100, 200):
        inst, ws = generators.ladder_instance(n), generators.ladder_scheme(n)
        v = verify_walk_scheme(inst, ws)
        assert v.ok and v.steps <= 8 * n * n


def _mutations(ws, n):
    """Every production replaced by each alternative over a small vertex range."""
    rows = list(zip(ws.u.tolist(), ws.v.tolist(), ws.kind.tolist(), ws.a.tolist(),
                    ws.b.tolist(), ws.label.tolist()))
    alts = [(EPS, 0, 0, -1)] + [(CONCAT, w, 0, -1) for w in range(1, n + 1)] + [
        (WRAP, x, y, int(o)) for x in range(1, n + 1) for y in range(1, n + 1)
        for o in (Bracket.O1, Bracket.O2)]
    for i, row in enumerate(rows):
        for alt in alts:
            if alt == row[2:]:
                continue
            new = rows[:i] + [row[:2] + alt] + rows[i + 1:]
            yield WalkScheme(ws.axiom, *np.array(new, dtype=np.int64).T)


def test_tampered_schemes_never_yield_invalid_walks():
    checked = 0
    for seed in range(40):
        inst = generators.random_instance(seed, 4, generators.DENSITIES["dense"])
        if not decide(inst):
            continue
        for bad in _mutations(extract_walk_scheme(inst), inst.n):
            if verify_walk_scheme(inst, bad).ok:
                walk = expand_walk(bad, 10 ** 6)
                assert walk.start == inst.s and walk.end == inst.t
                assert all(inst.has_edge(*e) for e in walk.edges())
                assert dyck2_word_check(walk.labels())
            checked += 1
    assert checked > 500


@pytest.mark.parametrize("impl", [kernels.check_scheme_numba, kernels.check_scheme_numpy])
def test_checker_backends_report_same_codes(impl, wrap3):
    from dyckcert.certyes import _dense_adjacency
    ws = scheme((1, 3), {(1, 3): Wrap(2, 2, Bracket.O2), (2, 2): Eps()})
    code, idx, steps, _ = impl(3, 1, 3, 1, 3, ws.u, ws.v, ws.kind, ws.a, ws.b, ws.label,
                               _dense_adjacency(wrap3))
    assert (code, idx, steps) == (kernels.OPEN_EDGE_ABSENT, 0, 9 + 2 + 1 + 1 + 3)
