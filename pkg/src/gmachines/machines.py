"""Machines: graphings that interact with word representations.

A machine is a graphing over the standard vertex blocks whose maps are
block translations composed with coordinate permutations.  Running a
machine on a word plugs the two graphings along the interface blocks;
what remains lives on the answer blocks and is judged against the answer
test.

Essential machines only use star transpositions.  essentialize rewrites
an arbitrary machine into an essential one by chaining each edge through
fresh dialect states: the extra hops bounce off the word inward and back
outward, so every intermediate displacement cancels and the language is
unchanged.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotEssential
from .execution import plug_projects
from .graphings import Edge, GraphingRep, ONE, Project, validate
from .measurement import decide_against_test, t_minus
from .microcosm import Perm, TransformationDescriptor, decompose_star
from .space import MSet
from .words import DEFAULT_PSI, IN, OUT, SYMBOLS, VertexTable, representation

__all__ = [
    "Machine",
    "validate_machine",
    "compute",
    "accepts",
    "language_m",
    "is_essential",
    "essentialize",
]


class Machine:
    def __init__(self, graphing: GraphingRep, head_bound: int,
                 psi: VertexTable = DEFAULT_PSI):
        self.graphing = graphing
        self.head_bound = int(head_bound)
        self.psi = psi

    def to_json(self) -> dict:
        return {"graphing": self.graphing.to_json(), "headBound": self.head_bound}

    @classmethod
    def from_json(cls, data, psi: VertexTable = DEFAULT_PSI) -> "Machine":
        return cls(GraphingRep.from_json(data["graphing"]),
                   int(data.get("headBound", 1)), psi)

    def __repr__(self):
        return (f"Machine({len(self.graphing.edges)} edges, "
                f"dialect {self.graphing.dialect_size}, "
                f"heads<= {self.head_bound})")


def validate_machine(g: GraphingRep, psi: VertexTable = DEFAULT_PSI,
                     head_bound: int | None = None) -> list[str]:
    """Diagnostics for a would-be machine graphing; empty when fine."""
    from .space import equal_ae

    diags = []
    if not equal_ae(g.support, psi.machine_support()):
        diags.append("support is not the standard vertex blocks")
    bound = head_bound if head_bound is not None else max(
        [max(e.mapd.perm.support(), default=1) for e in g.edges], default=1)
    diags.extend(validate(g, f"m({bound})"))
    return diags


def compute(m: Machine, word, psi: VertexTable | None = None) -> Project:
    """Run a machine against a word (or a prepared representation)."""
    psi = psi or m.psi
    rep = representation(word, psi=psi) if isinstance(word, str) else word
    cut = psi.interface_mset()
    return plug_projects(
        Project(0, [(Fraction(1), m.graphing)]),
        Project(0, [(Fraction(1), rep)]),
        cut,
    )


def accepts(m: Machine, w: str, psi: VertexTable | None = None) -> bool:
    psi = psi or m.psi
    result = compute(m, w, psi)
    return decide_against_test(result, t_minus(psi)) == "pass"


def language_m(m: Machine, max_len: int) -> list[str]:
    out = []
    for k in range(max_len + 1):
        for bits in range(2**k):
            w = format(bits, f"0{k}b") if k else ""
            if accepts(m, w):
                out.append(w)
    return out


def _is_star(p: Perm) -> bool:
    supp = p.support()
    return len(supp) == 0 or (len(supp) == 2 and 1 in supp)


def is_essential(m: Machine) -> bool:
    return all(_is_star(e.mapd.perm) for e in m.graphing.edges)


def _block_start(box) -> int:
    line = box.line
    if line.lo.denominator != 1 or line.hi - line.lo != 1:
        raise NotEssential(
            f"edge source [{line.lo},{line.hi}) is not a unit block")
    return int(line.lo)


def essentialize(m: Machine) -> Machine:
    """Rewrite every edge to use star transpositions only.

    An edge with permutation sigma becomes a chain: each factor of the
    star decomposition rides an outward hop, and an inward identity hop
    follows it, so the word steps forward then straight back.  Every hop
    sits behind fresh dialect states and guesses the block symbol it will
    land on; wrong guesses die inside the interface, the right one
    continues, and the final hop lands exactly where the original edge
    did.
    """
    psi = m.psi
    g = m.graphing
    edges: list[Edge] = []
    size = g.dialect_size

    def out_block(x):
        return psi.block((x, OUT))

    for e in g.edges:
        if _is_star(e.mapd.perm):
            edges.append(e)
            continue
        taus = [Perm.transposition(1, j) for j in decompose_star(e.mapd.perm)]
        t = len(taus)
        for box in e.source.boxes:
            blk = _block_start(box)
            target_blk = blk + int(e.mapd.offset)
            chain = [e.in_state] + [size + i for i in range(2 * t - 2)] + [e.out_state]
            size += 2 * t - 2
            # first hop: apply the first factor, land on some outward block
            for x in SYMBOLS:
                edges.append(Edge(
                    MSet([box]), chain[0], chain[1],
                    TransformationDescriptor(offset=out_block(x) - blk, perm=taus[0]),
                ))
            for i in range(2, t + 1):
                lo = 2 * i - 3  # state entering the inward hop
                # inward hop: hold position while the word steps back
                for y in SYMBOLS:
                    edges.append(Edge(
                        psi.mset((y, IN)), chain[lo], chain[lo + 1],
                        TransformationDescriptor(),
                    ))
                if i < t:
                    for z in SYMBOLS:
                        for x in SYMBOLS:
                            edges.append(Edge(
                                psi.mset((z, OUT)), chain[lo + 1], chain[lo + 2],
                                TransformationDescriptor(
                                    offset=out_block(x) - out_block(z),
                                    perm=taus[i - 1]),
                            ))
                else:
                    for z in SYMBOLS:
                        edges.append(Edge(
                            psi.mset((z, OUT)), chain[lo + 1], chain[lo + 2],
                            TransformationDescriptor(
                                offset=target_blk - out_block(z),
                                perm=taus[i - 1]),
                            e.weight,
                        ))
    return Machine(GraphingRep(g.support, size, edges), m.head_bound, psi)
