from itertools import product

from dyckcert.model import Bracket, Instance, LEFT_END, RIGHT_END, Transition, TwoNpda
from dyckcert.oracle import (
    ACCEPTS, INCONCLUSIVE, REJECTS, bounded_2npda_search, bounded_walk_search, dyck2_word_check,
)
from machines import equal_counts_2npda, sweeping_2npda

O1, C1, O2, C2 = Bracket.O1, Bracket.C1, Bracket.O2, Bracket.C2


def test_word_check_examples():
    assert dyck2_word_check([])
    assert dyck2_word_check([O1, O2, C2, C1])
    assert not dyck2_word_check([O1, C2])
    assert not dyck2_word_check([C1, O1])


def _grammar_words(max_len):
    """Words of S -> o1 S c1 S | o2 S c2 S | eps by length (unique first-return split)."""
    words = {0: {()}}
    for n in range(2, max_len + 1, 2):
        words[n] = {(o,) + x + (Bracket(o ^ 1),) + y
                    for o in (O1, O2) for i in range(0, n - 1, 2)
                    for x in words[i] for y in words[n - 2 - i]}
    return set().union(*words.values())


def test_word_check_matches_grammar_up_to_length_10():
    lang = _grammar_words(10)
    assert len(lang) == 1 + 2 + 8 + 40 + 224 + 1344
    for n in range(11):
        for w in product(Bracket, repeat=n):
            assert dyck2_word_check(w) == (w in lang)


def test_walk_search_examples(wrap3, cycle2):
    walk = bounded_walk_search(wrap3, 4)
    assert len(walk) == 2 and walk.labels() == [O1, C1]
    assert len(bounded_walk_search(Instance(3, 2, 2, {(2, 3, O1)}), 0)) == 0
    assert bounded_walk_search(cycle2, 10) is None


def test_walk_search_finds_shortest():
    # the direct 1 -> 2 -> 3 route mismatches, so the detour through 4 is needed
    inst = Instance(4, 1, 3, {(1, 2, O1), (2, 3, C2), (2, 2, O2), (2, 4, C2), (4, 3, C1)})
    assert bounded_walk_search(inst, 3) is None
    walk = bounded_walk_search(inst, 10)
    assert walk.labels() == [O1, O2, C2, C1] and [v for v, _ in walk.steps] == [2, 2, 4, 3]


def test_2npda_search_outcomes():
    res = bounded_2npda_search(sweeping_2npda(), "ab")
    assert res.status == ACCEPTS and len(res.run) == 3
    m = TwoNpda(("q",), ("a", LEFT_END, RIGHT_END), ("Z",), frozenset(), "q", "Z", {"q"})
    assert bounded_2npda_search(m, "a").status == REJECTS
    assert bounded_2npda_search(equal_counts_2npda(), "aab").status == REJECTS


def test_2npda_search_hits_stack_cap():
    hungry = TwoNpda(("q",), ("a", LEFT_END, RIGHT_END), ("X", "Z"), {
        Transition("q", LEFT_END, "Z", "q", ("X", "Z"), 0),
        Transition("q", LEFT_END, "X", "q", ("X", "X"), 0)}, "q", "Z", {"q"})
    assert bounded_2npda_search(hungry, "", stack_cap=2).status == INCONCLUSIVE
    assert bounded_2npda_search(equal_counts_2npda(), "aaaa", stack_cap=2).status == INCONCLUSIVE
