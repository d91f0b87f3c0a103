"""Word graphs and their graphing representations."""

from fractions import Fraction

import pytest

from gmachines.errors import BadAlphabet, PairingRequired
from gmachines.graphings import validate
from gmachines.microcosm import TransformationDescriptor
from gmachines.words import (ALT_PSI, DEFAULT_PSI, promote, representation,
                             word_graph, word_graphing)
from gmachines.space import equal_ae

from conftest import line_edge, seg


def test_empty_word_graph():
    wg = word_graph("")
    assert wg.edges == (("r", 0, ("*", "Out"), 0, ("*", "In"), 0),
                        ("l", 0, ("*", "In"), 0, ("*", "Out"), 0))


def test_single_letter_word_graph():
    wg = word_graph("0")
    assert len(wg.edges) == 4
    assert wg.edges[0] == ("r", 0, ("*", "Out"), 0, ("0", "In"), 1)
    assert wg.edges[1] == ("r", 1, ("0", "Out"), 1, ("*", "In"), 0)


def test_word_graph_positions_are_circular():
    wg = word_graph("01")
    assert ("r", 1, ("0", "Out"), 1, ("1", "In"), 2) in wg.edges
    assert ("r", 2, ("1", "Out"), 2, ("*", "In"), 0) in wg.edges
    rows = [e for e in wg.edges if e[0] == "r"]
    lefts = [e for e in wg.edges if e[0] == "l"]
    assert len(rows) == len(lefts) == 3


def test_word_graph_rejects_foreign_letters():
    with pytest.raises(BadAlphabet):
        word_graph("012")


def test_word_graphing_is_rigid_translation():
    g = word_graphing("01")
    assert g.dialect_size == 3
    assert len(g.edges) == 6
    assert validate(g, "z") == []
    for e in g.edges:
        assert e.mapd.slope == 1
        assert e.mapd.perm.is_identity()
        assert e.weight.a == 1 and e.weight.flag == 0


def test_word_graphing_blocks_follow_the_table():
    # the right-move reading '0' at position 1 goes from the In block of
    # '0' to the Out block of '0', one unit over
    g = word_graphing("0")
    srcs = {(b.line.lo, b.line.hi) for e in g.edges for b in e.source.boxes}
    assert all(hi - lo == 1 for lo, hi in srcs)


def test_promote_folds_dialect_into_first_coordinate():
    g = promote(word_graphing("0"))
    assert g.dialect_size == 1
    for e in g.edges:
        assert e.in_state == 0 and e.out_state == 0
        (box,) = e.source.boxes
        iv = box.coord(1)
        assert iv is not None and iv.hi - iv.lo == Fraction(1, 2)
        assert e.mapd.shift(1) == Fraction(1, 2)


def test_promote_is_trivial_on_single_state(seesaw):
    g = promote(seesaw)
    assert g.dialect_size == 1
    assert len(g.edges) == len(seesaw.edges)
    for e in g.edges:
        assert e.mapd.shifts == ()


def test_promote_refuses_busy_first_coordinate():
    from gmachines.graphings import Edge, GraphingRep, Weight
    t = TransformationDescriptor(offset=1, shifts={1: Fraction(1, 2)})
    g = GraphingRep(seg(0, 2), 2, [Edge(seg(0, 1), 0, 1, t, Weight())])
    with pytest.raises(PairingRequired):
        promote(g)


def test_representation_is_promoted_word_graphing():
    r = representation("01")
    assert r.dialect_size == 1
    assert len(r.edges) == 6
    fr = Fraction(1, 3)
    for e in r.edges:
        (box,) = e.source.boxes
        iv = box.coord(1)
        assert (iv.hi - iv.lo) == fr
        assert e.mapd.shift(1) % fr == 0


def test_representation_with_renamed_dialect():
    r = representation("0", renaming={0: 2, 1: 3})
    got = sorted((b.coord(1).lo, b.coord(1).hi, e.mapd.shift(1))
                 for e in r.edges for b in e.source.boxes)
    q = Fraction(1, 4)
    assert got == [(2 * q, 3 * q, q), (2 * q, 3 * q, q),
                   (3 * q, 4 * q, 3 * q), (3 * q, 4 * q, 3 * q)]


def test_vertex_tables_tile_the_line():
    for psi in (DEFAULT_PSI, ALT_PSI):
        blocks = sorted(dict(psi.items()).values())
        assert blocks == list(range(8))
        assert equal_ae(psi.mset("r"),
                        seg(psi.block("r"), psi.block("r") + 1))


def test_alt_table_shifts_word_support():
    d = word_graphing("1", psi=DEFAULT_PSI)
    a = word_graphing("1", psi=ALT_PSI)
    assert not equal_ae(d.support, a.support)
    assert len(d.edges) == len(a.edges)
