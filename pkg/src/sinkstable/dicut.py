"""Unions of disjoint dicuts, dicut equivalence and source-flip sequences."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .certificates import DicutFamily, ViolatingCircuit
from .graph_core import Circuit, Digraph, reverse_edges, topological_order, weak_components
from .potential import NotATension, potential_from_tension


def family_from_potential(pi: Sequence[int]) -> DicutFamily:
    """Level sets ``{v : pi(v) >= i}`` for ``i = 1..max pi`` (a decreasing chain)."""
    top = max(pi, default=0)
    return DicutFamily(
        tuple(frozenset(v for v, p in enumerate(pi) if p >= i) for i in range(1, top + 1))
    )


def recognize_dicut_union(D: Digraph, F: Iterable[int]) -> DicutFamily | ViolatingCircuit:
    """Decide whether ``F`` splits into disjoint dicuts.

    ``F`` is such a union exactly when its indicator is a tension, so the
    answer is either the chain of level sets of that tension's potential or a
    circuit meeting ``F`` unevenly in the two directions.
    """
    F = frozenset(F)
    if any(not 0 <= e < D.m for e in F):
        raise ValueError(f"unknown edge ids in {sorted(F)}")
    chi = [1 if e in F else 0 for e in range(D.m)]
    try:
        pi = potential_from_tension(D, chi)
    except NotATension as exc:
        C = exc.circuit
        return ViolatingCircuit(C, counts=C.restrict_counts(F))
    fam = family_from_potential(pi)
    fam.validate(D)
    assert fam.edges(D) == F
    return fam


def dicut_equivalent(D: Digraph, D2: Digraph) -> DicutFamily | ViolatingCircuit:
    """Compare two orientations of one graph edge by edge id.

    A family certifies that ``D2`` arises from ``D`` by reversing its dicuts; a
    circuit certifies a different forward count in the two orientations.
    """
    if D.n != D2.n or D.m != D2.m:
        raise ValueError("digraphs differ in node or edge count")
    F = []
    for e, (a, b) in enumerate(zip(D.edges, D2.edges)):
        if a == b:
            continue
        if a != b[::-1]:
            raise ValueError(f"edge {e} joins different nodes in the two digraphs")
        F.append(e)
    return recognize_dicut_union(D, F)


def is_F_clean(D: Digraph, F: Iterable[int], Z: Iterable[int]) -> bool:
    """True iff every edge of the cut of ``Z`` pointing one way lies in ``F``
    and no edge pointing the other way does (for one of the two ways)."""
    F, Z = set(F), set(Z)
    entering = [e for e, (t, h) in enumerate(D.edges) if h in Z and t not in Z]
    leaving = [e for e, (t, h) in enumerate(D.edges) if t in Z and h not in Z]

    def clean(into, out):
        return all(e in F for e in into) and not any(e in F for e in out)

    return clean(entering, leaving) or clean(leaving, entering)


def source_flip(edges: list[tuple[int, int]], v: int) -> None:
    """Reverse, in place, every edge leaving ``v``; ``v`` must be a source."""
    if any(h == v for _, h in edges):
        raise ValueError(f"node {v} is not a source")
    for e, (t, h) in enumerate(edges):
        if t == v:
            edges[e] = (h, t)


def replay(D: Digraph, sequence: Iterable[int]) -> Digraph:
    edges = list(D.edges)
    for v in sequence:
        source_flip(edges, v)
    return Digraph(D.n, tuple(edges), D.names)


def source_sequence(D: Digraph, family: DicutFamily) -> list[int]:
    """Nodes to source-flip, in order, so that ``D`` becomes ``D`` with the
    family's dicuts reversed.

    A dicut entering ``Z`` is reversed by flipping, in topological order, the
    complement of ``Z`` inside each weak component the dicut touches. That
    complement must be acyclic; otherwise ``ValueError`` is raised.
    """
    family.validate(D)
    comp_of = [0] * D.n
    for i, comp in enumerate(weak_components(D)):
        for v in comp:
            comp_of[v] = i
    edges = list(D.edges)
    seq: list[int] = []
    for Z, B in zip(family.levels, family.dicuts(D)):
        touched = {comp_of[D.edges[e][1]] for e in B}
        W = [v for v in range(D.n) if v not in Z and comp_of[v] in touched]
        index = {v: i for i, v in enumerate(W)}
        sub = Digraph(
            len(W),
            tuple((index[t], index[h]) for t, h in edges if t in index and h in index),
        )
        order = topological_order(sub)
        if isinstance(order, Circuit):
            cyc = [W[i] for i in order.nodes]
            raise ValueError(f"source side of a dicut contains the di-circuit {cyc}")
        for i in order:
            source_flip(edges, W[i])
            seq.append(W[i])
    target = reverse_edges(D, family.edges(D))
    assert tuple(edges) == target.edges
    return seq
