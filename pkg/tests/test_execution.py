"""Alternating paths, plugging, and the finite cell quotient."""

from collections import Counter
from fractions import Fraction
import random

import pytest

from gmachines.errors import IterationCapExceeded, NonTerminating, NotCellRigid
from gmachines.execution import (alternating_paths, cell_decompose,
                                 cell_path_counts, expansion_cap, plug,
                                 restrict_path)
from gmachines.graphings import GraphingRep, equivalent
from gmachines.space import equal_ae, measure
from gmachines.words import word_graphing

from conftest import line_edge, random_rigid_pair, seg
from oracles import brute_paths, brute_plug


def _pair_raw(conveyor, doubler):
    fs = [("a", (0, 1, 1, 1)), ("b", (2, 3, 1, -1)), ("c", (3, 4, 1, 1))]
    gs = [("d", (Fraction(3, 2), 2, 2, -1)), ("e", (1, Fraction(3, 2), 2, 1))]
    return fs, gs


def test_length_one_paths_are_the_edges(conveyor, doubler):
    paths = alternating_paths(conveyor, doubler, max_len=1)
    assert len(paths) == len(conveyor.edges) + len(doubler.edges)
    srcs = sorted(measure(p.source) for p in paths)
    assert srcs == sorted(measure(e.source) for e in
                          list(conveyor.edges) + list(doubler.edges))


def test_census_matches_brute_force(conveyor, doubler):
    paths = alternating_paths(conveyor, doubler, max_len=7)
    got = dict(sorted(Counter(p.length for p in paths).items()))
    fs, gs = _pair_raw(conveyor, doubler)
    brute = Counter(len(labels) for labels, *_ in brute_paths(fs, gs, 7))
    assert got == dict(brute)
    assert got == {1: 5, 2: 6, 3: 6, 4: 6, 5: 6, 6: 6, 7: 6}


def test_loop_family_shapes(conveyor, doubler):
    # one surviving odd-length family: lengths 3, 5, 7 with halving sources
    paths = alternating_paths(conveyor, doubler, max_len=7)
    fam = {}
    for p in paths:
        if p.length % 2 == 1 and p.length >= 3 \
                and all(b.line.hi <= 1 for b in p.source.boxes) \
                and all(b.line.lo >= 4 for b in p.target().boxes):
            fam[p.length] = p
    assert sorted(fam) == [3, 5, 7]
    assert equal_ae(fam[3].source, seg(0, "1/2"))
    assert equal_ae(fam[5].source, seg("1/2", "3/4"))
    assert equal_ae(fam[7].source, seg("3/4", "7/8"))
    assert (fam[3].composed.slope, fam[3].composed.offset) == (2, 4)
    assert (fam[5].composed.slope, fam[5].composed.offset) == (4, 2)
    assert (fam[7].composed.slope, fam[7].composed.offset) == (8, -2)


def test_disjoint_interfaces_stop_at_length_one(seesaw):
    far = GraphingRep(seg(10, 12), 1, [line_edge(10, 11, 1, 1)])
    paths = alternating_paths(seesaw, far, max_len=6)
    assert all(p.length == 1 for p in paths)


def test_paths_alternate_sides(conveyor, doubler):
    for p in alternating_paths(conveyor, doubler, max_len=5):
        assert all(a != b for a, b in zip(p.sides, p.sides[1:]))


def test_restrict_keeps_path_clear_of_cut(conveyor, doubler):
    paths = alternating_paths(conveyor, doubler, max_len=3)
    aec = next(p for p in paths
               if p.length == 3 and equal_ae(p.source, seg(0, "1/2")))
    r = restrict_path(aec, seg(1, 4))
    assert equal_ae(r.source, seg(0, "1/2"))
    assert (r.mapd.slope, r.mapd.offset) == (2, 4)


def test_restrict_drops_path_landing_in_cut(conveyor, doubler):
    paths = alternating_paths(conveyor, doubler, max_len=1)
    a = next(p for p in paths if equal_ae(p.source, seg(0, 1)))
    assert restrict_path(a, seg(1, 4)) is None
    far = restrict_path(a, seg(5, 6))
    assert equal_ae(far.source, seg(0, 1))


def test_plug_matches_frozen_worked_example(conveyor, doubler):
    out = plug(conveyor, doubler, seg(1, 4), max_len=7, allow_truncation=True)
    got = sorted((b.line.lo, b.line.hi, e.mapd.slope, e.mapd.offset)
                 for e in out.edges for b in e.source.boxes)
    assert got == [(0, Fraction(1, 2), 2, 4),
                   (Fraction(1, 2), Fraction(3, 4), 4, 2),
                   (Fraction(3, 4), Fraction(7, 8), 8, -2)]


def test_plug_matches_interval_oracle(conveyor, doubler):
    fs, gs = _pair_raw(conveyor, doubler)
    want = sorted((lo, hi, s, o)
                  for _, lo, hi, s, o in brute_plug(fs, gs, (1, 4), 7))
    out = plug(conveyor, doubler, seg(1, 4), max_len=7, allow_truncation=True)
    got = sorted((b.line.lo, b.line.hi, Fraction(e.mapd.slope), e.mapd.offset)
                 for e in out.edges for b in e.source.boxes)
    assert got == want


def test_plug_without_truncation_refuses_open_loop(conveyor, doubler):
    with pytest.raises(NonTerminating):
        plug(conveyor, doubler, seg(1, 4), max_len=7)


def test_plug_invariant_under_refining_the_cut_side(conveyor, doubler):
    # splitting an edge of g at an interior point must not change the result
    split = []
    for e in doubler.edges:
        boxes = e.source.boxes
        assert len(boxes) == 1
        lo, hi = boxes[0].line.lo, boxes[0].line.hi
        mid = (lo + hi) / 2
        split.append(line_edge(lo, mid, e.mapd.slope, e.mapd.offset))
        split.append(line_edge(mid, hi, e.mapd.slope, e.mapd.offset))
    g2 = GraphingRep(doubler.support, 1, split)
    base = plug(conveyor, doubler, seg(1, 4), max_len=7, allow_truncation=True)
    fine = plug(conveyor, g2, seg(1, 4), max_len=7, allow_truncation=True)
    assert equivalent(base, fine)


def test_plug_with_empty_partner(seesaw):
    empty = GraphingRep(seg(5, 6), 1, [])
    out = plug(seesaw, empty, seg(1, 2), max_len=4)
    # only x+1 restricted to the part that avoids [1,2) on both ends survives,
    # composed with x-1 back out of the cut
    assert all(measure(e.source) > 0 for e in out.edges)
    for e in out.edges:
        img = e.mapd.apply_mset(e.source)
        assert measure(img) == measure(e.source)
        for box in list(e.source.boxes) + list(img.boxes):
            assert box.line.hi <= 1 or box.line.lo >= 2


def test_cell_decompose_requires_rigidity(conveyor, doubler):
    with pytest.raises(NotCellRigid):
        cell_decompose([conveyor, doubler])


def test_cell_decompose_word_graphing():
    w = word_graphing("01")
    cg = cell_decompose([w])
    # every edge is applicable at exactly the cells of its source
    for j, e in enumerate(w.edges):
        srcs = cg.mset_cells(e.source)
        assert srcs
        for c in srcs:
            assert cg.applicable(0, j, c)
            img = cg.image(0, j, c)
            assert img != c or e.mapd.is_identity()


def test_cell_counts_refine_path_census():
    rng = random.Random(11)
    for _ in range(10):
        f, g = random_rigid_pair(rng)
        paths = alternating_paths(f, g, max_len=5)
        cg = cell_decompose([f, g])
        want = Counter()
        for p in paths:
            want[p.length] += len(cg.mset_cells(p.source))
        got = {k: v for k, v in cell_path_counts(f, g, 5).items() if v}
        assert dict(want) == got


def test_expansion_cap_resolution(monkeypatch):
    assert expansion_cap(77) == 77
    monkeypatch.setenv("GM_MAX_PATH_LEN", "123")
    assert expansion_cap() == 123
    monkeypatch.setenv("GM_MAX_PATH_LEN", "junk")
    assert expansion_cap() == 10_000
    monkeypatch.delenv("GM_MAX_PATH_LEN")
    assert expansion_cap() == 10_000


def test_iteration_cap_trips(conveyor, doubler):
    with pytest.raises(IterationCapExceeded):
        alternating_paths(conveyor, doubler, max_len=10 ** 6, cap=20)


def test_env_cap_applies(monkeypatch, conveyor, doubler):
    monkeypatch.setenv("GM_MAX_PATH_LEN", "15")
    with pytest.raises(IterationCapExceeded):
        alternating_paths(conveyor, doubler, max_len=10 ** 6)
