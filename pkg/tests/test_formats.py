import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyckcert import generators
from dyckcert.certno import extract_separator
from dyckcert.certyes import extract_walk_scheme
from dyckcert.formats import FormatError, hw_tokens, parse_document, serialize_document
from dyckcert.model import (
    Bracket, Concat, Eps, HardestWord, Instance, LabeledGraph, SeparatorMS, WalkScheme, Wrap,
)
from dyckcert.pushdown import extract_pds_certificate
from dyckcert.reductions import dyck2_to_hardest_word
from dyckcert.solver import decide

SMALLEST = b"d2r 1\nvertices 1\nsource 1\ntarget 1\nedges 0\n"


def roundtrip(fmt, doc):
    data = serialize_document(doc)
    back = parse_document(fmt, data)
    assert back == doc
    assert serialize_document(back) == data
    return data


def test_smallest_instance_parses_and_serializes():
    inst = parse_document("d2r", SMALLEST)
    assert inst == Instance(1, 1, 1)
    assert serialize_document(inst) == SMALLEST


def test_instance_text_is_sorted_and_deduplicated():
    text = b"d2r 1\nvertices 3\nsource 1\ntarget 3\nedges 3\n2 3 c1\n1 2 o1\n2 3 c1\n"
    inst = parse_document("d2r", text)
    assert len(inst.edges) == 2
    assert serialize_document(inst) == (
        b"d2r 1\nvertices 3\nsource 1\ntarget 3\nedges 2\n1 2 o1\n2 3 c1\n")


def test_walk_scheme_text(wrap3):
    ws = extract_walk_scheme(wrap3)
    assert roundtrip("wsc", ws) == b"wsc 1\naxiom 1 3\nprod 1 3 wrap 2 2 o1\nprod 2 2 eps\n"


def test_separator_text(open_edge):
    data = roundtrip("sep", extract_separator(open_edge))
    assert data.startswith(b"sep 1\nn 2\nmatrix MS\n1 0\n0 1\nmatrix MSS\n")
    assert data.count(b"matrix ") == 6


def test_separator_ms_only():
    doc = parse_document("sep", b"sep-ms 1\nn 2\nmatrix MS\n1 0\n0 1\n")
    assert isinstance(doc, SeparatorMS)
    assert roundtrip("sep", doc) == b"sep-ms 1\nn 2\nmatrix MS\n1 0\n0 1\n"


def test_hardest_word_text():
    hw = dyck2_to_hardest_word(Instance(2, 1, 2, {(1, 2, Bracket.O1), (2, 1, Bracket.C1)}))
    assert roundtrip("hw", hw) == b"hw 1\nV o1 1 V c1 - 1\n"


@pytest.mark.parametrize("fmt, text, needle", [
    ("wsc", b"wsc 1\naxiom 1 1\nprod 1 1 eps\nprod 1 1 eps\n", "duplicate production"),
    ("sep", b"sep 1\nn 1\nmatrix MS\n1\nmatrix MSS\n2\nmatrix Mo1S\n0\nmatrix Mo2S\n0\n"
            b"matrix Mo1Sc1\n0\nmatrix Mo2Sc2\n0\n", "entry exceeds n²"),
    ("d2r", b"d2r 1\nvertices 2\nsource 1\ntarget 3\nedges 0\n", "target"),
    ("d2r", b"d2r 1\nvertices 2\nsource 1\ntarget 2\nedges 1\n1 2 x1\n", "unknown token"),
    ("d2r", b"d2r 1\nvertices 2\nsource 1\ntarget 2\nedges 1\n", "line"),
    ("d2r", SMALLEST + b"junk\n", "trailing garbage"),
    ("d2r", b"d2r 2\nvertices 1\n", "header"),
    ("wsc", b"wsc 1\naxiom 1 2\nprod 1 2 eps\n", "eps"),
    ("hw", b"hw 1\no1 V\n", "vertex marker"),
    ("hw", b"hw 1\nV o1 - V\n", "'-' must be followed by 1"),
    ("hw", b"hw 1\nV o1 E\n", "edge separator"),
    ("pds", b"pds 1\nstates p\nstack A\nrule p A -> q\n", "unknown state"),
    ("pda", b"pda 1\nstates q\ninput a\nstack Z\ninit q Z\nfinal\ntrans q a Z -> q eps 0\n",
     "bottom"),
])
def test_rejects(fmt, text, needle):
    with pytest.raises(FormatError) as exc:
        parse_document(fmt, text)
    assert needle in str(exc.value)


def test_format_error_reports_line():
    with pytest.raises(FormatError) as exc:
        parse_document("d2r", b"d2r 1\nvertices 2\nsource 1\ntarget 2\nedges 1\n1 9 o1\n")
    assert exc.value.line == 6


def test_lenient_hw_reader_keeps_bad_shapes():
    assert hw_tokens(b"hw 1\nE V\n") == ["E", "V"]


# --- property round-trips over seeded documents --------------------------------

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 8))
def test_roundtrip_instances_and_certificates(seed, n):
    inst = generators.random_instance(seed, n, 0.2)
    roundtrip("d2r", inst)
    if decide(inst):
        roundtrip("wsc", extract_walk_scheme(inst))
    else:
        roundtrip("sep", extract_separator(inst))
    if inst.s != inst.t or inst.n == 1:
        roundtrip("hw", dyck2_to_hardest_word(inst))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_roundtrip_pushdown_documents(seed):
    pds, aut = generators.random_pds(seed)
    roundtrip("pds", pds)
    roundtrip("pauto", aut)
    roundtrip("pdscert", extract_pds_certificate(pds, aut))
    roundtrip("pda", generators.random_pda(seed))
    roundtrip("npda2", generators.random_2npda(seed))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 6))
def test_roundtrip_labeled_graphs(seed, n):
    rng = np.random.default_rng(seed)
    edges = {(int(u), int(v), "ab"[int(a)]) for u, v, a in rng.integers([1, 1, 0], [n + 1, n + 1, 2],
                                                                         size=(6, 3))}
    roundtrip("cflg", LabeledGraph(n, 1, n, frozenset(edges)))


def test_equal_documents_give_identical_bytes():
    a = WalkScheme.from_productions((1, 3), {(2, 2): Eps(), (1, 3): Wrap(2, 2, Bracket.O1)})
    b = WalkScheme.from_productions((1, 3), [((1, 3), Wrap(2, 2, Bracket.O1)), ((2, 2), Eps())])
    assert a == b
    assert serialize_document(a) == serialize_document(b)


def test_concat_production_text():
    ws = WalkScheme.from_productions((1, 1), {(1, 1): Concat(1)})
    assert serialize_document(ws) == b"wsc 1\naxiom 1 1\nprod 1 1 concat 1\n"


def test_hardest_word_type_rejects_bad_shape():
    with pytest.raises(ValueError):
        HardestWord(("o1",))
