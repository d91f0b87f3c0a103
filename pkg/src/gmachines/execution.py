"""Running graphings against each other.

Two engines live here.  The exact engine enumerates alternating paths as
shrinking rational sets and works for any maps.  The cell engine applies
when every map is rigid at some grid: slope one, integer offsets, circle
shifts on grid lines, coordinate permutations within a bound.  Rigid maps
send grid cells to grid cells, so paths become walks on a finite graph of
cells and plugging terminates by state deduplication.

Plugging two graphings along a cut region composes every alternating path
that starts outside the cut, travels inside it, and exits; the composite
becomes a single edge of the result.  The dialect of the result is the
product dialect renamed to an initial segment; a path that never touched
one side is replicated over that side's states.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import lcm
from typing import Iterable, Sequence

from .errors import (
    IterationCapExceeded,
    NonTerminating,
    NotCellRigid,
    OverlappingSupports,
)
from .graphings import Edge, GraphingRep, ONE, Project, SymValue, Weight
from .microcosm import IDENTITY, TransformationDescriptor
from .space import Box, Interval, MSet

__all__ = [
    "AlternatingPath",
    "RestrictedEdge",
    "CellGraph",
    "cell_decompose",
    "alternating_paths",
    "restrict_path",
    "plug",
    "plug_projects",
    "rigidity",
    "expansion_cap",
    "cell_path_counts",
]

DEFAULT_CAP = 10_000
ENV_CAP = "GM_MAX_PATH_LEN"


def expansion_cap(override: int | None = None) -> int:
    """Iteration budget: explicit override, else environment, else default."""
    if override is not None:
        return int(override)
    raw = os.environ.get(ENV_CAP)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_CAP


def rigidity(gs: Sequence[GraphingRep], extra: Sequence[MSet] = ()) -> tuple[int, int] | None:
    """Grid size and coordinate bound making everything rigid, or None."""
    denom = 1
    bound = 0
    for g in gs:
        for e in g.edges:
            d = e.mapd
            if d.slope != 1 or d.offset.denominator != 1:
                return None
            for idx, lam in d.shifts:
                denom = lcm(denom, lam.denominator)
                bound = max(bound, idx)
            for idx in d.perm.support():
                bound = max(bound, idx)
            for b in e.source.boxes:
                if b.line.lo.denominator != 1 or b.line.hi.denominator != 1:
                    return None
                for idx, iv in b.coords:
                    denom = lcm(denom, iv.lo.denominator, iv.hi.denominator)
                    bound = max(bound, idx)
    for m in extra:
        for b in m.boxes:
            if b.line.lo.denominator != 1 or b.line.hi.denominator != 1:
                return None
            for idx, iv in b.coords:
                denom = lcm(denom, iv.lo.denominator, iv.hi.denominator)
                bound = max(bound, idx)
    return denom, bound


Cell = tuple[int, tuple[int, ...]]


class CellGraph:
    """Finite cell structure of a family of rigid graphings.

    A cell is a unit line block crossed with a grid cube; every edge of
    every graphing maps cells onto cells.  Arrows are computed on demand:
    the graph object only stores, per edge, which cells its source covers
    and how the map moves a cube.
    """

    def __init__(self, gs: Sequence[GraphingRep], grid: int, bound: int):
        self.gs = list(gs)
        self.n = int(grid)
        self.N = int(bound)
        if self.n < 1:
            raise ValueError("grid size must be at least 1")
        self._edge_info: dict[tuple[int, int], dict] = {}
        self._index: dict[tuple[int, int, int], list[int]] = {}
        for side, g in enumerate(self.gs):
            for k, e in enumerate(g.edges):
                info = self._prepare(side, k, e)
                self._edge_info[(side, k)] = info
                for blk in info["blocks"]:
                    self._index.setdefault((side, e.in_state, blk), []).append(k)

    def _prepare(self, side: int, k: int, e: Edge) -> dict:
        d = e.mapd
        where = f"graphing {side} edge {k}"
        if d.slope != 1:
            raise NotCellRigid(f"{where}: slope {d.slope} is not 1")
        if d.offset.denominator != 1:
            raise NotCellRigid(f"{where}: offset {d.offset} is not an integer")
        shift_steps = {}
        for idx, lam in d.shifts:
            step = lam * self.n
            if step.denominator != 1:
                raise NotCellRigid(f"{where}: shift {lam} off the 1/{self.n} grid")
            if idx > self.N:
                raise NotCellRigid(f"{where}: shift coordinate {idx} beyond bound {self.N}")
            shift_steps[idx] = int(step)
        for idx in d.perm.support():
            if idx > self.N:
                raise NotCellRigid(f"{where}: permuted coordinate {idx} beyond bound {self.N}")
        patterns = []
        blocks = set()
        for b in e.source.boxes:
            if b.line.lo.denominator != 1 or b.line.hi.denominator != 1:
                raise NotCellRigid(f"{where}: source block [{b.line.lo},{b.line.hi}) not integral")
            ranges = {}
            for idx, iv in b.coords:
                lo, hi = iv.lo * self.n, iv.hi * self.n
                if lo.denominator != 1 or hi.denominator != 1:
                    raise NotCellRigid(f"{where}: source coordinate {idx} off the grid")
                if idx > self.N:
                    raise NotCellRigid(f"{where}: source coordinate {idx} beyond bound {self.N}")
                ranges[idx] = (int(lo), int(hi))
            patterns.append((int(b.line.lo), int(b.line.hi), ranges))
            blocks.update(range(int(b.line.lo), int(b.line.hi)))
        return {
            "edge": e,
            "offset": int(d.offset),
            "perm": d.perm,
            "shifts": shift_steps,
            "patterns": patterns,
            "blocks": blocks,
        }

    # -- geometry of cells -------------------------------------------------

    def cell_mset(self, cell: Cell) -> MSet:
        blk, cube = cell
        coords = {
            c + 1: Interval(Fraction(j, self.n), Fraction(j + 1, self.n))
            for c, j in enumerate(cube)
        }
        return MSet([Box(Interval(blk, blk + 1), coords)])

    def cell_volume(self) -> Fraction:
        return Fraction(1, self.n) ** self.N

    def mset_cells(self, m: MSet, what: str = "set") -> frozenset[Cell]:
        """Decompose a set into cells exactly, or complain."""
        cells = set()
        for b in m.boxes:
            if b.line.lo.denominator != 1 or b.line.hi.denominator != 1:
                raise NotCellRigid(f"{what}: block [{b.line.lo},{b.line.hi}) not integral")
            ranges = []
            for c in range(1, self.N + 1):
                iv = b.coord(c)
                lo, hi = iv.lo * self.n, iv.hi * self.n
                if lo.denominator != 1 or hi.denominator != 1:
                    raise NotCellRigid(f"{what}: coordinate {c} off the 1/{self.n} grid")
                ranges.append(range(int(lo), int(hi)))
            for idx, _ in b.coords:
                if idx > self.N:
                    raise NotCellRigid(f"{what}: coordinate {idx} beyond bound {self.N}")
            for blk in range(int(b.line.lo), int(b.line.hi)):
                for cube in iproduct(*ranges):
                    cells.add((blk, cube))
        return frozenset(cells)

    # -- arrows ------------------------------------------------------------

    def source_cells(self, side: int, k: int) -> Iterable[Cell]:
        info = self._edge_info[(side, k)]
        for lo, hi, ranges in info["patterns"]:
            dims = [range(*ranges.get(c, (0, self.n))) for c in range(1, self.N + 1)]
            for blk in range(lo, hi):
                for cube in iproduct(*dims):
                    yield (blk, cube)

    def applicable(self, side: int, k: int, cell: Cell) -> bool:
        blk, cube = cell
        info = self._edge_info[(side, k)]
        for lo, hi, ranges in info["patterns"]:
            if not (lo <= blk < hi):
                continue
            ok = True
            for c in range(1, self.N + 1):
                rlo, rhi = ranges.get(c, (0, self.n))
                if not (rlo <= cube[c - 1] < rhi):
                    ok = False
                    break
            if ok:
                return True
        return False

    def image(self, side: int, k: int, cell: Cell) -> Cell:
        blk, cube = cell
        info = self._edge_info[(side, k)]
        perm = info["perm"]
        moved = list(cube)
        for c in range(1, self.N + 1):
            moved[perm(c) - 1] = cube[c - 1]
        for idx, step in info["shifts"].items():
            moved[idx - 1] = (moved[idx - 1] + step) % self.n
        return (blk + info["offset"], tuple(moved))

    def edges_from(self, side: int, state: int, cell: Cell) -> list[int]:
        blk, _ = cell
        out = []
        for k in self._index.get((side, state, blk), ()):
            if self.applicable(side, k, cell):
                out.append(k)
        return out

    def all_arrows(self) -> list[tuple[int, int, Cell, Cell]]:
        out = []
        for (side, k) in sorted(self._edge_info):
            for cell in self.source_cells(side, k):
                out.append((side, k, cell, self.image(side, k, cell)))
        return out

    def edge(self, side: int, k: int) -> Edge:
        return self.gs[side].edges[k]


def cell_decompose(gs: Sequence[GraphingRep], grid: int | None = None,
                   extra: Sequence[MSet] = ()) -> CellGraph:
    """Cell structure of the given graphings, inferring the grid if absent."""
    rig = rigidity(gs, extra)
    if rig is None:
        raise NotCellRigid("maps are not rigid: non-unit slope or fractional offset")
    denom, bound = rig
    if grid is None:
        grid = denom
    elif grid % denom != 0:
        raise NotCellRigid(f"grid {grid} does not refine the natural grid {denom}")
    return CellGraph(gs, grid, bound)


@dataclass(frozen=True)
class AlternatingPath:
    """A composable run of edges alternating between two graphings."""

    sides: tuple[int, ...]
    edges: tuple[Edge, ...]
    source: MSet
    composed: TransformationDescriptor
    in_pair: tuple[int | None, int | None]
    out_pair: tuple[int | None, int | None]
    weight: Weight

    @property
    def length(self) -> int:
        return len(self.edges)

    def target(self) -> MSet:
        return self.composed.apply_mset(self.source)


@dataclass(frozen=True)
class RestrictedEdge:
    """A path squeezed to the part living outside a cut."""

    source: MSet
    in_pair: tuple[int | None, int | None]
    out_pair: tuple[int | None, int | None]
    mapd: TransformationDescriptor
    weight: Weight


def _chain(states: tuple[int | None, int | None], side: int, e: Edge):
    """Dialect bookkeeping: (first-in, current-out) per side, or None."""
    first, out = states
    if out is None:
        return (e.in_state, e.out_state), True
    if out != e.in_state:
        return states, False
    return (first, e.out_state), True


def alternating_paths(f: GraphingRep, g: GraphingRep, max_len: int | None = None,
                      cap: int | None = None) -> list[AlternatingPath]:
    """Every alternating path of positive measure, shortest first.

    With max_len given, enumeration stops at that length; without it the
    enumeration must die out on its own within the iteration budget.
    """
    budget = expansion_cap(cap)
    pairs = (f, g)
    out: list[AlternatingPath] = []
    # queue entries: (src, cur, sides, edges, states_f, states_g, desc, weight)
    queue: deque = deque()
    for side in (0, 1):
        for e in pairs[side].edges:
            if e.source.is_empty():
                continue
            queue.append((e.source, None, side, e, ((None, None), (None, None)),
                          IDENTITY, ONE, (), ()))
    fires = 0
    while queue:
        src, cur, side, e, states, desc, weight, sides, edges = queue.popleft()
        fires += 1
        if fires > budget:
            if max_len is None:
                raise IterationCapExceeded(
                    f"alternating paths still alive after {budget} expansions")
            raise IterationCapExceeded(
                f"budget {budget} exhausted below requested length {max_len}")
        # fire edge e on the carried set
        piece = src if cur is None else cur.intersect(e.source)
        if piece.is_empty():
            continue
        if cur is None:
            new_src = piece
        else:
            new_src = desc.inverse().apply_mset(piece)
        new_states, ok = _chain(states[side], side, e)
        if not ok:
            continue
        st = (new_states, states[1]) if side == 0 else (states[0], new_states)
        new_desc = e.mapd.compose(desc)
        new_weight = weight * e.weight
        new_cur = e.mapd.apply_mset(piece)
        new_sides = sides + (side,)
        new_edges = edges + (e,)
        out.append(AlternatingPath(
            sides=new_sides,
            edges=new_edges,
            source=new_src,
            composed=new_desc,
            in_pair=(st[0][0], st[1][0]),
            out_pair=(st[0][1], st[1][1]),
            weight=new_weight,
        ))
        if max_len is not None and len(new_edges) >= max_len:
            continue
        other = 1 - side
        for e2 in pairs[other].edges:
            queue.append((new_src, new_cur, other, e2, st, new_desc, new_weight,
                          new_sides, new_edges))
    out.sort(key=lambda p: (p.length, p.sides))
    return out


def restrict_path(path: AlternatingPath, cut: MSet) -> RestrictedEdge | None:
    """Keep the part of a path that both starts and ends outside the cut."""
    target = path.composed.apply_mset(path.source)
    kept_target = target.difference(cut)
    src = path.source.difference(cut).intersect(
        path.composed.inverse().apply_mset(kept_target))
    if src.measure() == 0:
        return None
    return RestrictedEdge(src, path.in_pair, path.out_pair, path.composed, path.weight)


def _pair_state(in_f, out_f, in_g, out_g, df_size, dg_size):
    """Resolve free sides and rename the product dialect to an initial segment."""
    if in_f is None and in_g is None:
        raise AssertionError("a path must engage at least one side")
    if in_f is None:
        variants = [(d, d, in_g, out_g) for d in range(df_size)]
    elif in_g is None:
        variants = [(in_f, out_f, d, d) for d in range(dg_size)]
    else:
        variants = [(in_f, out_f, in_g, out_g)]
    out = []
    for a, b, c, d in variants:
        out.append((a * dg_size + c, b * dg_size + d))
    return out


def _check_supports(f: GraphingRep, g: GraphingRep, cut: MSet):
    overlap = f.support.intersect(g.support).difference(cut)
    if overlap.measure() != 0:
        raise OverlappingSupports(
            "graphings overlap outside the cut region")


def _plug_cells(f, g, cut, cap, max_len):
    cg = cell_decompose([f, g], extra=[cut])
    cutcells = cg.mset_cells(cut, "cut")
    pairs = (f, g)
    results: dict = {}
    budget = expansion_cap(cap)
    fires = 0
    queue: deque = deque()
    seen: set = set()

    def handle(start, cell, st, side, k):
        nonlocal fires
        e = cg.edge(side, k)
        new_states, ok = _chain(st[side], side, e)
        if not ok:
            return
        fires += 1
        if fires > budget:
            raise NonTerminating(
                f"plug exceeded the budget of {budget} cell-arrow expansions")
        stt = (new_states, st[1]) if side == 0 else (st[0], new_states)
        dst = cg.image(side, k, cell)
        return stt, dst

    # seeds: fire any edge from a cell outside the cut
    for side in (0, 1):
        for k, _e in enumerate(pairs[side].edges):
            for cell in cg.source_cells(side, k):
                if cell in cutcells:
                    continue
                fired = handle(cell, cell, ((None, None), (None, None)), side, k)
                if fired is None:
                    continue
                stt, dst = fired
                e = cg.edge(side, k)
                entry = (cell, dst, stt, side, e.mapd, e.weight, 1)
                key = entry[:6]
                if key in seen:
                    continue
                seen.add(key)
                if dst not in cutcells:
                    results[(cell, stt, e.mapd.key(), e.weight.a, e.weight.flag)] = \
                        (cell, stt, e.mapd, e.weight)
                else:
                    queue.append(entry)

    while queue:
        start, cell, st, side, desc, weight, length = queue.popleft()
        if max_len is not None and length >= max_len:
            continue
        other = 1 - side
        # a side not yet engaged may bind any in-state
        if st[other][1] is None:
            candidates = [k for k, e in enumerate(pairs[other].edges)
                          if cg.applicable(other, k, cell)]
        else:
            candidates = cg.edges_from(other, st[other][1], cell)
        for k in candidates:
            fired = handle(start, cell, st, other, k)
            if fired is None:
                continue
            stt, dst = fired
            e = cg.edge(other, k)
            new_desc = e.mapd.compose(desc)
            new_weight = weight * e.weight
            entry = (start, dst, stt, other, new_desc, new_weight, length + 1)
            key = entry[:6]
            if key in seen:
                continue
            seen.add(key)
            if dst not in cutcells:
                results[(start, stt, new_desc.key(), new_weight.a, new_weight.flag)] = \
                    (start, stt, new_desc, new_weight)
            else:
                queue.append(entry)

    edges = []
    for start, stt, desc, weight in results.values():
        (in_f, out_f), (in_g, out_g) = stt
        for in_state, out_state in _pair_state(in_f, out_f, in_g, out_g,
                                               f.dialect_size, g.dialect_size):
            edges.append(Edge(cg.cell_mset(start), in_state, out_state, desc, weight))
    return edges, False


def _plug_general(f, g, cut, cap, max_len):
    budget = expansion_cap(cap)
    pairs = (f, g)
    results: dict = {}
    queue: deque = deque()
    for side in (0, 1):
        for e in pairs[side].edges:
            src0 = e.source.difference(cut)
            if src0.measure() == 0:
                continue
            queue.append((src0, None, side, e, ((None, None), (None, None)),
                          IDENTITY, ONE, 0))
    fires = 0
    truncated = False
    while queue:
        src, cur, side, e, st, desc, weight, length = queue.popleft()
        if max_len is not None and length >= max_len:
            truncated = True
            continue
        fires += 1
        if fires > budget:
            return None, True
        piece = src if cur is None else cur.intersect(e.source)
        if piece.is_empty():
            continue
        new_states, ok = _chain(st[side], side, e)
        if not ok:
            continue
        stt = (new_states, st[1]) if side == 0 else (st[0], new_states)
        new_src = piece if cur is None else desc.inverse().apply_mset(piece)
        new_desc = e.mapd.compose(desc)
        new_weight = weight * e.weight
        img = e.mapd.apply_mset(piece)
        outside = img.difference(cut)
        inside = img.intersect(cut)
        if outside.measure() > 0:
            kept_src = new_desc.inverse().apply_mset(outside)
            key = (kept_src.boxes, stt, new_desc.key(), new_weight.a, new_weight.flag)
            results[key] = (kept_src, stt, new_desc, new_weight)
        if inside.measure() > 0:
            carried_src = new_desc.inverse().apply_mset(inside)
            other = 1 - side
            for e2 in pairs[other].edges:
                queue.append((carried_src, inside, other, e2, stt, new_desc,
                              new_weight, length + 1))
    edges = []
    for kept_src, stt, desc, weight in results.values():
        (in_f, out_f), (in_g, out_g) = stt
        for in_state, out_state in _pair_state(in_f, out_f, in_g, out_g,
                                               f.dialect_size, g.dialect_size):
            edges.append(Edge(kept_src, in_state, out_state, desc, weight))
    return edges, truncated


def plug(f: GraphingRep, g: GraphingRep, cut: MSet, *, max_len: int | None = None,
         cap: int | None = None, allow_truncation: bool = False,
         force_general: bool = False) -> GraphingRep:
    """Compose two graphings along a cut region.

    Rigid inputs take the finite cell route; everything else enumerates
    paths exactly and must either die out or be truncated explicitly.
    """
    _check_supports(f, g, cut)
    rigid = None if force_general else rigidity([f, g], [cut])
    if rigid is not None:
        edges, truncated = _plug_cells(f, g, cut, cap, max_len)
    else:
        edges, truncated = _plug_general(f, g, cut, cap, max_len)
        if edges is None:
            if not allow_truncation:
                raise NonTerminating(
                    f"plugging did not close off within {expansion_cap(cap)} expansions")
            edges, truncated = [], True
    if truncated and not allow_truncation:
        raise NonTerminating("plugging truncated at the requested length")
    support = f.support.union(g.support).difference(cut)
    edges.sort(key=lambda e: (e.in_state, e.out_state, e.mapd.key(),
                              e.weight.a, e.weight.flag,
                              tuple(b.sort_key() for b in e.source.boxes)))
    return GraphingRep(support, f.dialect_size * g.dialect_size, edges)


def plug_projects(p: Project, q: Project, cut: MSet) -> Project:
    """Plug projects: mix the wrappers, measure the cross terms, plug the
    graphings pairwise."""
    from .measurement import INF, measure_graphings

    wrapper = p.wrapper.scale(q.coeff_sum()) + q.wrapper.scale(p.coeff_sum())
    cross = SymValue(0)
    terms = []
    for ca, ga in p.terms:
        for cb, gb in q.terms:
            # a circuit is flagged only if some edge is, so fully
            # unflagged pairs measure to zero without a search
            if any(e.weight.flag for e in ga.edges + gb.edges):
                m = measure_graphings(ga, gb)
                if m is INF:
                    raise ValueError("cross measurement diverges while plugging")
                cross = cross + SymValue(m).scale(ca * cb)
            terms.append((ca * cb, plug(ga, gb, cut)))
    return Project(wrapper + cross, terms)


def cell_path_counts(f: GraphingRep, g: GraphingRep, max_len: int,
                     grid: int | None = None) -> dict[int, int]:
    """Number of cell-level alternating walks per length; the cell shadow
    of alternating_paths for rigid inputs."""
    cg = cell_decompose([f, g], grid)
    pairs = (f, g)
    counts: dict[int, int] = {}
    queue: deque = deque()
    for side in (0, 1):
        for k, _ in enumerate(pairs[side].edges):
            for cell in cg.source_cells(side, k):
                queue.append((cell, ((None, None), (None, None)), side, k, 1))
    while queue:
        cell, st, side, k, length = queue.popleft()
        e = cg.edge(side, k)
        new_states, ok = _chain(st[side], side, e)
        if not ok:
            continue
        stt = (new_states, st[1]) if side == 0 else (st[0], new_states)
        dst = cg.image(side, k, cell)
        counts[length] = counts.get(length, 0) + 1
        if length >= max_len:
            continue
        other = 1 - side
        for k2, _ in enumerate(pairs[other].edges):
            if cg.applicable(other, k2, dst):
                queue.append((dst, stt, other, k2, length + 1))
    return counts
