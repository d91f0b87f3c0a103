from fractions import Fraction

import pytest

from gmachines.graphings import Edge, GraphingRep, Weight
from gmachines.machines import Machine
from gmachines.microcosm import Perm, TransformationDescriptor
from gmachines.space import Box, Interval, MSet
from gmachines.words import DEFAULT_PSI, IN, OUT


def seg(lo, hi, **coords):
    cs = {int(k): Interval(Fraction(a), Fraction(b))
          for k, (a, b) in coords.items()}
    return MSet([Box(Interval(Fraction(lo), Fraction(hi)), cs)])


def line_edge(lo, hi, slope, offset, weight=None):
    d = TransformationDescriptor(slope=Fraction(slope), offset=Fraction(offset))
    return Edge(seg(lo, hi), 0, 0, d, weight or Weight())


@pytest.fixture
def seesaw():
    return GraphingRep(seg(0, 2), 1, [
        line_edge(0, 1, 1, 1),
        line_edge(1, 2, 1, -1),
    ])


@pytest.fixture
def seesaw_mirror():
    return GraphingRep(seg(0, 2), 1, [
        line_edge(0, 1, 1, 1),
        line_edge(1, 2, -1, 2),
    ])


@pytest.fixture
def seesaw_halved():
    return GraphingRep(seg(0, 2), 1, [
        line_edge(0, "1/2", 1, 1),
        line_edge("1/2", 1, 1, 1),
        line_edge(1, 2, 1, -1),
    ])


@pytest.fixture
def conveyor():
    support = MSet(seg(0, 1).boxes + seg(1, 2).boxes + seg(2, 3).boxes
                   + seg(3, 4).boxes + seg(4, 5).boxes)
    return GraphingRep(support, 1, [
        line_edge(0, 1, 1, 1),    # a
        line_edge(2, 3, 1, -1),   # b
        line_edge(3, 4, 1, 1),    # c
    ])


@pytest.fixture
def doubler():
    support = MSet(seg(1, 2).boxes + seg(2, 3).boxes + seg(3, 4).boxes)
    return GraphingRep(support, 1, [
        line_edge("3/2", 2, 2, -1),  # d
        line_edge(1, "3/2", 2, 1),   # e
    ])


def _move(psi, src, dst, in_state, out_state, perm=None):
    d = TransformationDescriptor(offset=psi.block(dst) - psi.block(src),
                                 perm=perm or Perm())
    return Edge(psi.mset(src), in_state, out_state, d, Weight())


@pytest.fixture
def winding_machine():
    """Three-head machine whose only loop drifts a coordinate each time
    around, so it never recurs and accepts every word."""
    psi = DEFAULT_PSI
    cyc = Perm({1: 2, 2: 3, 3: 1})
    edges = [
        _move(psi, "r", ("*", OUT), 0, 1, cyc),
        _move(psi, ("1", IN), "r", 1, 0),
        _move(psi, ("0", IN), "a", 1, 0),
    ]
    return Machine(GraphingRep(psi.machine_support(), 2, edges), 3, psi)


@pytest.fixture
def tape_loop_machine():
    """Three-head machine that walks the whole tape on the word 1 and
    comes back with a net coordinate cycle: recurrent, so it rejects
    exactly that word among the short ones."""
    psi = DEFAULT_PSI
    cyc = Perm({1: 2, 2: 3, 3: 1})
    edges = [
        _move(psi, "r", ("*", OUT), 0, 1, cyc),
        _move(psi, ("1", IN), ("1", OUT), 1, 2),
        _move(psi, ("*", IN), "r", 2, 0),
    ]
    return Machine(GraphingRep(psi.machine_support(), 3, edges), 3, psi)


def random_rigid_pair(rng, grid=3, bound=2, blocks=(0, 1, 2), edges_each=4,
                      dialect=2, flag_rate=0.4):
    """A pair of cell-rigid, measure-preserving graphings on a shared
    support, with grid-aligned sources, block translations, optional
    coordinate swaps and 1/grid shifts, and a sprinkling of flags."""
    support = MSet([b for blk in blocks for b in seg(blk, blk + 1).boxes])

    def one_graphing():
        out = []
        for _ in range(edges_each):
            src = rng.choice(blocks)
            dst = rng.choice(blocks)
            coords = {}
            if rng.random() < 0.5:
                c = rng.randrange(1, bound + 1)
                j = rng.randrange(grid)
                coords[str(c)] = (Fraction(j, grid), Fraction(j + 1, grid))
            perm = Perm({1: 2, 2: 1}) if rng.random() < 0.3 else Perm()
            shifts = {}
            if rng.random() < 0.4:
                c = rng.randrange(1, bound + 1)
                shifts[c] = Fraction(rng.randrange(1, grid), grid)
            d = TransformationDescriptor(offset=Fraction(dst - src),
                                         perm=perm, shifts=shifts)
            w = Weight(1, 1 if rng.random() < flag_rate else 0)
            out.append(Edge(seg(src, src + 1, **coords), rng.randrange(dialect),
                            rng.randrange(dialect), d, w))
        return GraphingRep(support, dialect, out)

    return one_graphing(), one_graphing()
