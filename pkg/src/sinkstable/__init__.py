"""Sink-stable and F-stable node sets in digraphs, with checkable certificates."""

from .certificates import DicutFamily, Partition, ViolatingCircuit, ViolatingDiCircuit
from .clar import PlaneBipartiteGraph, check_resonant, clar_number, k_resonant_max
from .dicut import dicut_equivalent, recognize_dicut_union, source_sequence
from .graph_core import Circuit, Digraph, doubled, reverse_edges
from .optimize import (
    cover_by_alpha_dicircuits,
    gallai_min_max,
    greene_kleitman,
    k_union_max_F,
    k_union_max_sink,
    max_F_stable,
    max_sink_stable,
    min_cost_circulation,
)
from .potential import feasible_potential
from .stability import (
    bondy_chromatic_bound,
    check_cyclic_stable,
    check_F_stable_union,
    check_sink_stable,
    coherent_cyclic_order,
    flat_transversal,
    min_F_stable_cover_number,
    partition_k_sink_stable,
)

__all__ = [
    "Circuit",
    "Digraph",
    "DicutFamily",
    "Partition",
    "PlaneBipartiteGraph",
    "ViolatingCircuit",
    "ViolatingDiCircuit",
    "bondy_chromatic_bound",
    "check_F_stable_union",
    "check_cyclic_stable",
    "check_resonant",
    "check_sink_stable",
    "clar_number",
    "coherent_cyclic_order",
    "cover_by_alpha_dicircuits",
    "dicut_equivalent",
    "doubled",
    "feasible_potential",
    "flat_transversal",
    "gallai_min_max",
    "greene_kleitman",
    "k_resonant_max",
    "k_union_max_F",
    "k_union_max_sink",
    "max_F_stable",
    "max_sink_stable",
    "min_F_stable_cover_number",
    "min_cost_circulation",
    "partition_k_sink_stable",
    "recognize_dicut_union",
    "reverse_edges",
    "source_sequence",
]
