"""Graphings over the line-with-cube space, machines built from them, and
multihead automata, with translations in both directions."""

from .automata import (MultiheadAutomaton, Transition, co_accepts, language_a,
                       parity_automaton, trace_counts, zeros_ones_automaton)
from .encodings import (automaton_to_machine, family_counts,
                        machine_to_automaton, trace_path_correspondence)
from .errors import GMError
from .execution import alternating_paths, cell_decompose, plug, plug_projects
from .graphings import (Edge, GraphingRep, Project, SymValue, Weight,
                        equivalent, refines, rename_dialect, tensor,
                        tensor_graphings, validate)
from .machines import (Machine, accepts, compute, essentialize, is_essential,
                       language_m, validate_machine)
from .measurement import (INF, circuits, decide_against_test,
                          measure_graphings, measure_projects, orthogonal,
                          t_minus)
from .microcosm import (MicrocosmSpec, Perm, TransformationDescriptor,
                        classify, decompose_star, member)
from .space import Box, Interval, MSet, rat, rat_str
from .words import (ALT_PSI, DEFAULT_PSI, VertexTable, promote,
                    representation, word_graphing)

__version__ = "0.1.0"

__all__ = [
    "MultiheadAutomaton", "Transition", "co_accepts", "language_a",
    "parity_automaton", "trace_counts", "zeros_ones_automaton",
    "automaton_to_machine", "family_counts", "machine_to_automaton",
    "trace_path_correspondence", "GMError", "alternating_paths",
    "cell_decompose", "plug", "plug_projects", "Edge", "GraphingRep",
    "Project", "SymValue", "Weight", "equivalent", "refines",
    "rename_dialect", "tensor", "tensor_graphings", "validate", "Machine",
    "accepts", "compute", "essentialize", "is_essential", "language_m",
    "validate_machine", "INF", "circuits", "decide_against_test",
    "measure_graphings", "measure_projects", "orthogonal", "t_minus",
    "MicrocosmSpec", "Perm", "TransformationDescriptor", "classify",
    "decompose_star", "member", "Box", "Interval", "MSet", "rat", "rat_str",
    "ALT_PSI", "DEFAULT_PSI", "VertexTable", "promote", "representation",
    "word_graphing", "__version__",
]
