"""Certificate objects returned by the recognition and optimization routines.

Every answer ships one of these. Each has ``to_json`` producing the exchange
format and a ``kind`` tag; ``validate`` re-checks the cheap side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_core import Circuit, Digraph


def _names(D: Digraph | None, nodes) -> list:
    if D is not None and D.names:
        return [D.name(v) for v in sorted(nodes)]
    return sorted(nodes)


@dataclass(frozen=True)
class DicutFamily:
    """Disjoint dicuts given as a chain of node sets.

    Dicut ``i`` is the set of edges entering ``levels[i]``; no edge may leave
    any level set.
    """

    levels: tuple[frozenset[int], ...] = ()
    kind = "dicut_family"

    def dicuts(self, D: Digraph) -> list[frozenset[int]]:
        return [
            frozenset(e for e, (t, h) in enumerate(D.edges) if h in Z and t not in Z)
            for Z in self.levels
        ]

    def edges(self, D: Digraph) -> frozenset[int]:
        out: set[int] = set()
        for B in self.dicuts(D):
            out |= B
        return frozenset(out)

    def validate(self, D: Digraph) -> None:
        seen: set[int] = set()
        for Z, B in zip(self.levels, self.dicuts(D)):
            leaving = [e for e, (t, h) in enumerate(D.edges) if t in Z and h not in Z]
            if leaving:
                raise AssertionError(f"edge {leaving[0]} leaves level set {sorted(Z)}")
            if seen & B:
                raise AssertionError("dicuts of the family are not disjoint")
            seen |= B

    def to_json(self, D: Digraph | None = None) -> dict:
        return {"kind": self.kind, "levels": [_names(D, Z) for Z in self.levels]}


@dataclass(frozen=True)
class ViolatingCircuit:
    """A circuit certifying a negative answer.

    For stability questions ``hits = |S ∩ V(C)|`` exceeds ``k * eta(C)``; for
    dicut questions ``counts = (phi_F(C), beta_F(C))`` differ.
    """

    circuit: Circuit
    hits: int | None = None
    k: int | None = None
    counts: tuple[int, int] | None = None
    kind = "violating_circuit"

    def validate(self, D: Digraph, S=None, F=None) -> None:
        Circuit.from_walk(D, self.circuit.nodes, self.circuit.edges)
        if S is not None:
            hits = len(set(S) & self.circuit.node_set)
            assert hits == self.hits and hits > self.k * self.circuit.eta
        if F is not None:
            counts = self.circuit.restrict_counts(F)
            assert counts == self.counts and counts[0] != counts[1]

    def to_json(self, D: Digraph | None = None) -> dict:
        out = {"kind": self.kind, **self.circuit.to_json(D), "eta": self.circuit.eta}
        if self.hits is not None:
            out.update(hits=self.hits, k=self.k)
        if self.counts is not None:
            out.update(phi_F=self.counts[0], beta_F=self.counts[1])
        return out


@dataclass(frozen=True)
class ViolatingDiCircuit:
    """A di-circuit ``K`` with ``|S ∩ V(K)| > k |F ∩ K|``."""

    circuit: Circuit
    hits: int
    k: int
    f_count: int
    kind = "violating_dicircuit"

    def validate(self, D: Digraph, S, F) -> None:
        K = Circuit.from_walk(D, self.circuit.nodes, self.circuit.edges)
        assert K.is_dicircuit
        assert len(set(S) & K.node_set) == self.hits
        assert len(set(F) & K.edge_set) == self.f_count
        assert self.hits > self.k * self.f_count

    def to_json(self, D: Digraph | None = None) -> dict:
        return {
            "kind": self.kind,
            **self.circuit.to_json(D),
            "hits": self.hits,
            "k": self.k,
            "f_count": self.f_count,
        }


@dataclass(frozen=True)
class Partition:
    """Classes partitioning a node set, each with the dicut family that turns it
    into a sink set of ``digraph`` (the digraph the classes are sink-stable in)."""

    classes: tuple[frozenset[int], ...]
    families: tuple[DicutFamily, ...] = field(default=())
    kind = "partition"

    def validate(self, D: Digraph, S) -> None:
        from .graph_core import reverse_edges

        union: set[int] = set()
        for cls in self.classes:
            assert not (union & cls), "classes overlap"
            union |= cls
        assert union == set(S), "classes do not cover S"
        for cls, fam in zip(self.classes, self.families):
            fam.validate(D)
            Dr = reverse_edges(D, fam.edges(D))
            assert all(not Dr.out_edges[v] for v in cls), "class member is not a sink"

    def to_json(self, D: Digraph | None = None) -> dict:
        return {
            "kind": self.kind,
            "classes": [_names(D, c) for c in self.classes],
            "certificates": [f.to_json(D) for f in self.families],
        }
