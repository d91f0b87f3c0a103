"""Measurement of interaction between graphings.

The measurement between two graphings totals, over the alternating
circuits they form, the return behaviour of each circuit's points.  Only
circuits carrying the marker flag contribute, and only points that
actually return do.  With every dilation equal to one this collapses to a
dichotomy: zero when no flagged circuit exists, infinite otherwise, and
the search is plain reachability on the finite cell structure.  With
dilations below one the series converges and is summed in closed form per
circuit orbit, with a certified geometric bound on the enumeration tail.

The decision procedure at the bottom runs a project against the answer
test and cross-checks the measurement verdict with a direct cycle search.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import IterationCapExceeded, SupportMismatch
from .execution import CellGraph, Cell, cell_decompose, expansion_cap
from .graphings import Edge, GraphingRep, ONE, Project, SymValue, Weight
from .microcosm import TransformationDescriptor
from .space import equal_ae
from .words import DEFAULT_PSI, VertexTable

__all__ = [
    "INF",
    "Orbit",
    "Circuit",
    "circuits",
    "measure_graphings",
    "measure_projects",
    "orthogonal",
    "TestFamily",
    "t_minus",
    "decide_against_test",
    "DEFAULT_TOL",
]

DEFAULT_TOL = Fraction(1, 2**30)


class _Inf:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Inf()


# ---------------------------------------------------------------------------
# walking the product of two graphings at cell level

def _walk_states(cg: CellGraph, f: GraphingRep, g: GraphingRep):
    """Seed states: every arrow fired once, with free other side."""
    pairs = (f, g)
    for side in (0, 1):
        for k, e in enumerate(pairs[side].edges):
            for cell in cg.source_cells(side, k):
                first = (e.in_state, e.out_state)
                ff, of = (first if side == 0 else (None, None))
                fg, og = (first if side == 1 else (None, None))
                dst = cg.image(side, k, cell)
                yield (side, k, cell, dst, ff, of, fg, og, e.weight.flag)


def _successors(cg: CellGraph, f: GraphingRep, g: GraphingRep, state):
    cell, ff, of, fg, og, turn = state
    pairs = (f, g)
    current = of if turn == 0 else og
    if current is None:
        candidates = [k for k, _ in enumerate(pairs[turn].edges)
                      if cg.applicable(turn, k, cell)]
    else:
        candidates = cg.edges_from(turn, current, cell)
    for k in candidates:
        e = cg.edge(turn, k)
        dst = cg.image(turn, k, cell)
        if turn == 0:
            nf, nof = (ff, e.out_state) if ff is not None else (e.in_state, e.out_state)
            yield k, e, (dst, nf, nof, fg, og, 1)
        else:
            ng, nog = (fg, e.out_state) if fg is not None else (e.in_state, e.out_state)
            yield k, e, (dst, ff, of, ng, nog, 0)


def _exists_flagged_circuit(f: GraphingRep, g: GraphingRep,
                            cap: int | None = None) -> bool:
    """Is there an alternating circuit with a recurrent point carrying the
    flag?  A circuit whose walk never comes back spatially has only broken
    orbits and cannot weigh anything, so the test looks for a directed
    cycle through a flagged arrow in the finite graph on (cell, state of
    either side, side to fire)."""
    if not (any(e.weight.flag for e in f.edges) or any(e.weight.flag for e in g.edges)):
        return False
    cg = cell_decompose([f, g])
    budget = expansion_cap(cap)
    df, dg = f.dialect_size, g.dialect_size
    adj: dict = {}
    arcs = 0
    for side, k, cell, dst in cg.all_arrows():
        e = cg.edge(side, k)
        fl = e.weight.flag
        for other in range(dg if side == 0 else df):
            if side == 0:
                src = (cell, e.in_state, other, 0)
                tgt = (dst, e.out_state, other, 1)
            else:
                src = (cell, other, e.in_state, 1)
                tgt = (dst, other, e.out_state, 0)
            adj.setdefault(src, []).append((tgt, fl))
            arcs += 1
            if arcs > budget:
                raise IterationCapExceeded(
                    f"circuit search grew past {budget} arrows")
    comp = _scc(adj)
    for src, outs in adj.items():
        for tgt, fl in outs:
            if fl and tgt in comp and comp[src] == comp[tgt]:
                return True
    return False


def _scc(adj: dict) -> dict:
    """Strongly connected components, iterative Tarjan; nodes without an
    entry in the adjacency map have no outgoing arcs."""
    index: dict = {}
    low: dict = {}
    comp: dict = {}
    stack: list = []
    on_stack: set = set()
    counter = 0
    comps = 0
    for root in adj:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, pos = work[-1]
            if pos == 0:
                index[node] = low[node] = counter = counter + 1
                stack.append(node)
                on_stack.add(node)
            outs = adj.get(node, ())
            advanced = False
            for nxt_pos in range(pos, len(outs)):
                child = outs[nxt_pos][0]
                if child not in index:
                    work[-1] = (node, nxt_pos + 1)
                    work.append((child, 0))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comps += 1
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    comp[top] = comps
                    if top == node:
                        break
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return comp


# ---------------------------------------------------------------------------
# explicit circuit enumeration

@dataclass(frozen=True)
class Orbit:
    cells: tuple[Cell, ...]
    closed: bool
    period: int | None
    measure: Fraction


@dataclass(frozen=True)
class Circuit:
    labels: tuple[tuple[int, int], ...]
    weight: Weight
    composed: TransformationDescriptor
    orbits: tuple[Orbit, ...]

    @property
    def length(self) -> int:
        return len(self.labels)


def _canonical_rotation(labels: tuple) -> tuple:
    rots = [labels[i:] + labels[:i] for i in range(len(labels))]
    return min(rots)


def _is_power(labels: tuple) -> bool:
    n = len(labels)
    for d in range(1, n):
        if n % d == 0 and labels[:d] * (n // d) == labels:
            return True
    return False


def _chain_ok(labels, f, g) -> tuple | None:
    """Cyclic dialect consistency of a label sequence; returns the anchor
    (first-in states per side) or None."""
    pairs = (f, g)
    ff = of = fg = og = None
    for side, k in labels:
        e = pairs[side].edges[k]
        if side == 0:
            if of is not None and of != e.in_state:
                return None
            if ff is None:
                ff = e.in_state
            of = e.out_state
        else:
            if og is not None and og != e.in_state:
                return None
            if fg is None:
                fg = e.in_state
            og = e.out_state
    if ff is None or fg is None or of != ff or og != fg:
        return None
    return (ff, fg)


def _walk_cells(cg: CellGraph, labels, cell: Cell) -> Cell | None:
    for side, k in labels:
        if not cg.applicable(side, k, cell):
            return None
        cell = cg.image(side, k, cell)
    return cell


def _orbits(cg: CellGraph, labels) -> tuple[Orbit, ...]:
    side0, k0 = labels[0]
    starts = {}
    for cell in cg.source_cells(side0, k0):
        end = _walk_cells(cg, labels, cell)
        if end is not None:
            starts[cell] = end
    orbits = []
    unvisited = set(starts)
    vol = cg.cell_volume()
    while unvisited:
        c = min(unvisited)
        trail = []
        index = {}
        cur = c
        while cur in starts and cur not in index:
            if cur not in unvisited:
                # joins territory already assigned to an earlier orbit
                break
            index[cur] = len(trail)
            trail.append(cur)
            cur = starts[cur]
        if cur in index:
            i = index[cur]
            tail, cycle = trail[:i], trail[i:]
        else:
            tail, cycle = trail, []
        for cell in trail:
            unvisited.discard(cell)
        if tail:
            orbits.append(Orbit(tuple(tail), False, None, vol * len(tail)))
        if cycle:
            orbits.append(Orbit(tuple(cycle), True, None, vol * len(cycle)))
    return tuple(orbits)


def _with_periods(circ: Circuit) -> Circuit:
    out = []
    for orb in circ.orbits:
        if not orb.closed:
            out.append(orb)
            continue
        q = len(orb.cells)
        r = circ.composed.power(q).order()
        period = None if r is None else q * r
        out.append(Orbit(orb.cells, True, period, orb.measure))
    return Circuit(circ.labels, circ.weight, circ.composed, tuple(out))


def circuits(f: GraphingRep, g: GraphingRep, max_len: int = 8,
             cap: int | None = None) -> list[Circuit]:
    """Primitive alternating circuits up to rotation, with orbit data.

    Enumeration is complete below max_len; powers of the returned
    circuits are the remaining ones below that length.
    """
    cg = cell_decompose([f, g])
    budget = expansion_cap(cap)
    pairs = (f, g)
    found: dict[tuple, None] = {}
    steps = 0
    # depth-first over label sequences with a witness cell
    stack: list[tuple] = []
    for side, k, cell, dst, ff, of, fg, og, _fl in _walk_states(cg, f, g):
        stack.append((((side, k),), dst, ff, of, fg, og, 1 - side, side))
    while stack:
        labels, cell, ff, of, fg, og, turn, seed_side = stack.pop()
        steps += 1
        if steps > budget:
            raise IterationCapExceeded(
                f"circuit enumeration exceeded {budget} expansions")
        if (turn == seed_side and of == ff and og == fg
                and ff is not None and fg is not None):
            canon = _canonical_rotation(labels)
            if not _is_power(canon):
                found.setdefault(canon)
        if len(labels) >= max_len:
            continue
        for k, e, nxt in _successors(cg, f, g, (cell, ff, of, fg, og, turn)):
            ncell, nff, nof, nfg, nog, nturn = nxt
            stack.append((labels + ((turn, k),), ncell, nff, nof, nfg, nog,
                          nturn, seed_side))
    out = []
    for canon in sorted(found):
        anchor = _chain_ok(canon, f, g)
        if anchor is None:
            continue
        # orbit data comes from the first rotation with live starts;
        # closed orbits are the same for every live rotation
        orbits: tuple[Orbit, ...] = ()
        chosen = canon
        for i in range(len(canon)):
            rot = canon[i:] + canon[:i]
            if _chain_ok(rot, f, g) is None:
                continue
            orbs = _orbits(cg, rot)
            if orbs:
                chosen, orbits = rot, orbs
                break
        if not orbits:
            continue
        weight = ONE
        composed = None
        for side, k in chosen:
            e = pairs[side].edges[k]
            weight = weight * e.weight
            composed = e.mapd if composed is None else e.mapd.compose(composed)
        out.append(_with_periods(Circuit(tuple(chosen), weight, composed, orbits)))
    return out


# ---------------------------------------------------------------------------
# summation

def _mobius(n: int) -> int:
    if n == 1:
        return 1
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    if n > 1:
        out = -out
    return out


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _coprime_power_sum(m: int, y: Fraction) -> Fraction:
    """Sum of y^k over k >= 1 coprime to m, for 0 <= y < 1."""
    total = Fraction(0)
    for e in _divisors(m):
        mu = _mobius(e)
        if mu:
            ye = y**e
            total += mu * ye / (1 - ye)
    return total


def _orbit_series(a: Fraction, flag: int, rho: int, mu: Fraction) -> Fraction:
    """Closed form of the full power series of one closed orbit."""
    if flag == 0 or a == 0:
        return Fraction(0)
    y = a**rho
    total = Fraction(0)
    for d in _divisors(rho):
        total += Fraction(d, rho) * _coprime_power_sum(rho // d, y)
    return mu * total


def _row_norm(cg: CellGraph, f: GraphingRep, g: GraphingRep) -> Fraction:
    """Largest total dilation leaving any product node."""
    pairs = (f, g)
    worst = Fraction(0)
    for side in (0, 1):
        tails: dict[tuple, Fraction] = {}
        for k, e in enumerate(pairs[side].edges):
            for cell in cg.source_cells(side, k):
                key = (cell, e.in_state)
                tails[key] = tails.get(key, Fraction(0)) + e.weight.a
        if tails:
            worst = max(worst, max(tails.values()))
    return worst


def measure_graphings(f: GraphingRep, g: GraphingRep, mode: str = "exact",
                      tol: Fraction = DEFAULT_TOL, cap: int | None = None):
    """Total circuit measurement between two graphings.

    Exact mode requires every dilation to be one and returns 0 or INF.
    Series mode sums closed orbits in closed form and certifies that the
    discarded tail of longer circuits stays below tol.
    """
    if mode == "exact":
        for e in f.edges + g.edges:
            if e.weight.a != 1:
                raise ValueError(
                    "exact mode needs every dilation equal to 1; use series mode")
        return INF if _exists_flagged_circuit(f, g, cap) else Fraction(0)
    if mode != "series":
        raise ValueError(f"unknown measurement mode {mode!r}")
    cg = cell_decompose([f, g])
    norm = _row_norm(cg, f, g)
    if norm >= 1:
        raise ValueError(
            f"series tail cannot be certified: row dilation norm {norm} >= 1")
    a_max = max([e.weight.a for e in f.edges + g.edges], default=Fraction(0))
    volume = f.support.union(g.support).measure()
    states = max(f.dialect_size * g.dialect_size, 1)
    # crude but sound node count for the tail bound
    node_count = states * 2 * max(
        1, len({c for side in (0, 1) for k, _ in enumerate((f, g)[side].edges)
                for c in cg.source_cells(side, k)}))
    length = 4
    while True:
        total = Fraction(0)
        for circ in circuits(f, g, max_len=length, cap=cap):
            for orb in circ.orbits:
                if orb.closed and orb.period is not None:
                    total += _orbit_series(circ.weight.a, circ.weight.flag,
                                           orb.period, orb.measure)
        tail = volume * node_count * norm**(length + 1) / ((1 - norm) * (1 - a_max))
        if tail < tol:
            return total
        length *= 2
        if length > 4096:
            raise IterationCapExceeded(
                "series enumeration length escalated beyond 4096")


def measure_projects(p: Project, q: Project, mode: str = "exact",
                     tol: Fraction = DEFAULT_TOL):
    """Measurement of projects: wrappers cross-scaled plus pairwise
    graphing measurements."""
    if not equal_ae(p.support(), q.support()):
        raise SupportMismatch("projects live on different supports")
    value = p.wrapper.scale(q.coeff_sum()) + q.wrapper.scale(p.coeff_sum())
    for ca, ga in p.terms:
        for cb, gb in q.terms:
            m = measure_graphings(ga, gb, mode=mode, tol=tol)
            if m is INF:
                if ca * cb != 0:
                    return INF
                continue
            value = value + SymValue(m).scale(ca * cb)
    return value


def orthogonal(p: Project, q: Project, mode: str = "exact",
               tol: Fraction = DEFAULT_TOL) -> bool:
    """Projects are orthogonal when their measurement avoids 0 and INF.

    A symbolic multiple of the test scalar is read as: for every nonzero
    value of the scalar.
    """
    value = measure_projects(p, q, mode=mode, tol=tol)
    if value is INF:
        return False
    if value.zeta == 0:
        return value.const != 0
    return value.const == 0


@dataclass(frozen=True)
class TestFamily:
    """The negative answer test: a flagged identity sitting on the reject
    block, scaled by an arbitrary nonzero scalar."""

    graphing: GraphingRep
    psi: VertexTable

    def project(self) -> Project:
        return Project(SymValue(0, 1), [(Fraction(1), self.graphing)])


def t_minus(psi: VertexTable = DEFAULT_PSI) -> TestFamily:
    edge = Edge(psi.mset("r"), 0, 0, TransformationDescriptor(), Weight(1, 1))
    graphing = GraphingRep(psi.answers_mset(), 1, [edge])
    return TestFamily(graphing, psi)


def decide_against_test(p: Project, tf: TestFamily | None = None,
                        psi: VertexTable = DEFAULT_PSI,
                        cap: int | None = None) -> str:
    """Run a computed project against the answer test.

    Both available procedures run: the measurement route decides by
    orthogonality of the symbolic value, the search route looks for an
    alternating flagged circuit against the test directly.  They must
    agree; the verdict is "pass" or "fail".
    """
    if tf is None:
        tf = t_minus(psi)
    by_measure = orthogonal(p, tf.project())
    by_search = not any(
        _exists_flagged_circuit(ga, tf.graphing, cap) for ca, ga in p.terms if ca != 0)
    if by_measure != by_search:
        raise AssertionError(
            f"decision routes disagree: measurement {by_measure}, search {by_search}")
    return "pass" if by_measure else "fail"
