"""Sink-stable and F-stable sets: recognition, partitions, flat transversals
and coherent cyclic orders."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .certificates import DicutFamily, Partition, ViolatingCircuit, ViolatingDiCircuit
from .dicut import recognize_dicut_union
from .graph_core import (
    Circuit,
    Digraph,
    cyclic_edges,
    doubled,
    enumerate_dicircuits,
    find_path,
    is_stable,
    reachable,
    reverse_edges,
    strong_components,
    topological_order,
    weak_components,
)
from .potential import feasible_potential

#: Largest node count at which flatness is verified by default.
FLAT_VERIFY_MAX_N = 12


class SNotStable(ValueError):
    """The node set spans an edge, so no reorientation can make it a sink set."""

    def __init__(self, edge: int, D: Digraph):
        t, h = D.edges[edge]
        super().__init__(f"node set is not stable: edge {edge} joins {D.name(t)} and {D.name(h)}")
        self.edge = edge


class NotStrong(ValueError):
    pass


def _node_set(D: Digraph, S: Iterable) -> frozenset[int]:
    return frozenset(D.node_id(v) for v in S)


def _require_stable(D: Digraph, S: frozenset[int]) -> None:
    bad = is_stable(D, S)
    if bad is not None:
        raise SNotStable(bad, D)


def _require_strong(D: Digraph) -> None:
    """Each weakly connected piece must be strongly connected."""
    _, comp_of = strong_components(D)
    for comp in weak_components(D):
        if len({comp_of[v] for v in comp}) > 1:
            raise NotStrong(f"digraph is not strongly connected (component containing {D.name(comp[0])})")


# ------------------------------------------------------------ sink-stable


def check_sink_stable(D: Digraph, S: Iterable) -> DicutFamily | ViolatingCircuit:
    """Decide whether ``S`` can be turned into a set of sinks by reversing
    disjoint dicuts.

    Elements are made sinks one at a time in increasing id order. For the
    next element ``s`` we search, in the current orientation with edges into
    finished sinks made two-way, for a path from ``s`` back to an in-neighbour
    of ``s``. Such a path closes a circuit carrying more elements of ``S`` than
    its eta-value. Otherwise the nodes reachable from ``s`` span a dicut whose
    reversal, followed by a source flip at ``s``, makes ``s`` a sink without
    disturbing earlier ones.
    """
    S = _node_set(D, S)
    _require_stable(D, S)
    flipped: set[int] = set()
    done: list[int] = []
    m = D.m
    for s in sorted(S):
        cur = reverse_edges(D, flipped)
        into_done = [e for p in done for e in cur.in_edges[p]]
        aux = Digraph(D.n, cur.edges + tuple(cur.edges[e][::-1] for e in into_done))
        aux_id = list(range(m)) + into_done
        tails = {cur.edges[e][0] for e in cur.in_edges[s]}
        path = find_path(aux, s, tails)
        if path is not None:
            nodes, edges = path
            back = next(e for e in cur.in_edges[s] if cur.edges[e][0] == nodes[-1])
            C = Circuit.from_walk(D, nodes, [aux_id[e] for e in edges] + [back]).canonical()
            cert = ViolatingCircuit(C, hits=len(S & C.node_set), k=1)
            cert.validate(D, S=S)
            return cert
        Z = reachable(aux, s)
        B = {e for e, (t, h) in enumerate(cur.edges) if h in Z and t not in Z}
        flipped ^= B
        # s is now a source; flipping it makes it a sink
        flipped ^= {e for e, (t, h) in enumerate(cur.edges) if s in (t, h)}
        done.append(s)

    final = reverse_edges(D, flipped)
    assert all(not final.out_edges[v] for v in S)
    fam = recognize_dicut_union(D, flipped)
    assert isinstance(fam, DicutFamily), "accumulated reversal is not a dicut union"
    return fam


def partition_k_sink_stable(D: Digraph, S: Iterable, k: int) -> Partition | ViolatingCircuit:
    """Split ``S`` into ``k`` sink-stable classes or return a circuit ``C`` with
    ``|S ∩ V(C)| > k * eta(C)``.

    Works on ``D`` plus reversed copies: original edges cost ``k``, copies cost
    0, and edges ending in ``S`` are one cheaper. A feasible potential ``pi``
    is non-decreasing along original edges; its residues mod ``k`` give the
    classes and its level sets give the dicuts.
    """
    if k < 2:
        raise ValueError("k must be at least 2; use check_sink_stable for k = 1")
    S = _node_set(D, S)
    if not S:
        return Partition(tuple(frozenset() for _ in range(k)), tuple(DicutFamily() for _ in range(k)))
    Dd, _ = doubled(D)
    costs = [(k if e < D.m else 0) - (1 if h in S else 0) for e, (_, h) in enumerate(Dd.edges)]
    res = feasible_potential(Dd, costs)
    if isinstance(res, Circuit):
        C = Circuit.from_walk(D, res.nodes, [e % D.m for e in res.edges]).canonical()
        cert = ViolatingCircuit(C, hits=len(S & C.node_set), k=k)
        cert.validate(D, S=S)
        return cert
    pi = res
    top = max(pi)
    levels = {i: frozenset(v for v in range(D.n) if pi[v] >= i) for i in range(1, top + 1)}
    classes, families = [], []
    for j in range(k):
        classes.append(frozenset(v for v in S if pi[v] % k == j))
        families.append(DicutFamily(tuple(levels[i] for i in range(1, top + 1) if i % k == (j + 1) % k)))
    part = Partition(tuple(classes), tuple(families))
    part.validate(D, S)
    return part


# ------------------------------------------------------- flat transversals


def _opening_violation(D: Digraph, pos: list[int], nodes: list[int]):
    """First edge lying on no index-1 di-circuit of the cyclic order, together
    with the forward-closed set reached from its head."""
    n = len(nodes)
    for e, (a, b) in enumerate(D.edges):
        if a not in pos or b not in pos:
            continue
        # rotate so b comes first: then only a forward path b -> a can close e once
        rank = {v: (pos[v] - pos[b]) % n for v in nodes}
        seen = {b}
        queue = deque([b])
        while queue:
            u = queue.popleft()
            for f in D.out_edges[u]:
                v = D.edges[f][1]
                if v in pos and v not in seen and rank[v] > rank[u]:
                    seen.add(v)
                    queue.append(v)
        if a not in seen:
            return b, seen
    return None


def _coherent_order(D: Digraph, nodes: list[int]) -> list[int]:
    """A cyclic order of the strong piece ``nodes`` in which every edge lies on
    a di-circuit winding once. Each repair strictly shrinks the backward set."""
    inside = set(nodes)
    # reverse DFS postorder as a starting point
    order, seen = [], set()
    for root in nodes:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, iter(D.out_edges[root]))]
        while stack:
            u, it = stack[-1]
            for e in it:
                v = D.edges[e][1]
                if v in inside and v not in seen:
                    seen.add(v)
                    stack.append((v, iter(D.out_edges[v])))
                    break
            else:
                stack.pop()
                order.append(u)
    order.reverse()
    while True:
        pos = {v: i for i, v in enumerate(order)}
        bad = _opening_violation(D, pos, order)
        if bad is None:
            return order
        b, R = bad
        i = pos[b]
        rotated = order[i:] + order[:i]
        order = [v for v in rotated if v not in R] + [v for v in rotated if v in R]


def flat_transversal(D: Digraph) -> frozenset[int]:
    """An edge set meeting every di-circuit such that every cyclic edge lies on
    a di-circuit it meets exactly once.

    Each strong component gets a coherent cyclic order; the edges running
    backward in its opening form the transversal.
    """
    comps, _ = strong_components(D)
    F: set[int] = set()
    for comp in comps:
        if len(comp) < 2:
            continue
        order = _coherent_order(D, comp)
        pos = {v: i for i, v in enumerate(order)}
        F |= {e for e, (t, h) in enumerate(D.edges) if t in pos and h in pos and pos[t] > pos[h]}
    return frozenset(F)


def _min_f_distance(D: Digraph, F: frozenset[int], source: int) -> list[float]:
    """0/1 BFS: fewest ``F``-edges on a directed walk from ``source``."""
    dist = [float("inf")] * D.n
    dist[source] = 0
    dq = deque([source])
    while dq:
        u = dq.popleft()
        for e in D.out_edges[u]:
            v = D.edges[e][1]
            w = 1 if e in F else 0
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                if w:
                    dq.append(v)
                else:
                    dq.appendleft(v)
    return dist


def is_transversal(D: Digraph, F: Iterable[int]) -> bool:
    F = set(F)
    rest = Digraph(D.n, tuple(D.edges[e] for e in range(D.m) if e not in F))
    return not isinstance(topological_order(rest), Circuit)


def is_flat(D: Digraph, F: Iterable[int]) -> bool:
    """Every cyclic edge lies on a di-circuit containing exactly one ``F``-edge.

    Polynomial when ``F`` is also a transversal; otherwise enumerates
    di-circuits (exponential).
    """
    F = frozenset(F)
    cyc = cyclic_edges(D)
    if is_transversal(D, F):
        dist_from: dict[int, list[float]] = {}
        for e in cyc:
            t, h = D.edges[e]
            if h not in dist_from:
                dist_from[h] = _min_f_distance(D, F, h)
            if dist_from[h][t] + (1 if e in F else 0) != 1:
                return False
        return True
    covered: set[int] = set()
    for K in enumerate_dicircuits(D):
        if len(F & K.edge_set) == 1:
            covered |= K.edge_set
            if covered >= cyc:
                return True
    return covered >= cyc


# ---------------------------------------------------------- F-stable sets


def fsink_violator(D: Digraph, F: frozenset[int], S: frozenset[int], k: int) -> ViolatingDiCircuit | list[int]:
    """A di-circuit with ``|S ∩ V(K)| > k |F ∩ K|``, or a potential proving none exists."""
    costs = [(k if e in F else 0) - (1 if h in S else 0) for e, (_, h) in enumerate(D.edges)]
    res = feasible_potential(D, costs)
    if isinstance(res, Circuit):
        cert = ViolatingDiCircuit(res, len(S & res.node_set), k, len(F & res.edge_set))
        cert.validate(D, S, F)
        return cert
    return res


def _check_flat(D: Digraph, F: frozenset[int], verify_flat: bool | None) -> None:
    if verify_flat is None:
        verify_flat = D.n <= FLAT_VERIFY_MAX_N
    if verify_flat and not is_flat(D, F):
        raise ValueError("edge set is not flat")


def check_F_stable_union(
    D: Digraph, F: Iterable[int], S: Iterable, k: int = 1, verify_flat: bool | None = None
) -> Partition | ViolatingDiCircuit:
    """Decide whether ``S`` is the union of ``k`` F-stable sets.

    On success the classes come with dicut families valid in ``D`` with ``F``
    reversed. ``verify_flat=None`` checks flatness only on small inputs.
    """
    if k < 1:
        raise ValueError("k must be positive")
    F = frozenset(F)
    if any(not 0 <= e < D.m for e in F):
        raise ValueError(f"unknown edge ids in {sorted(F)}")
    S = _node_set(D, S)
    _require_strong(D)
    _check_flat(D, F, verify_flat)
    res = fsink_violator(D, F, S, k)
    if isinstance(res, ViolatingDiCircuit):
        return res
    DF = reverse_edges(D, F)
    if k == 1:
        fam = check_sink_stable(DF, S)
        assert isinstance(fam, DicutFamily), "condition holds but the set is not F-stable"
        part = Partition((S,), (fam,))
    else:
        part = partition_k_sink_stable(DF, S, k)
        assert isinstance(part, Partition), "condition holds but no k-partition was found"
    part.validate(DF, S)
    return part


@dataclass(frozen=True)
class CoverNumber:
    """Fewest F-stable sets covering ``S``, a partition attaining it, and a
    di-circuit showing one fewer set cannot work."""

    k: int
    partition: Partition
    witness: ViolatingDiCircuit | None
    kind = "cover_number"

    def to_json(self, D: Digraph | None = None) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "partition": self.partition.to_json(D),
            "witness": None if self.witness is None else self.witness.to_json(D),
        }


def min_F_stable_cover_number(
    D: Digraph, F: Iterable[int], S: Iterable, verify_flat: bool | None = None
) -> CoverNumber:
    F = frozenset(F)
    S = _node_set(D, S)
    _require_strong(D)
    if not is_transversal(D, F):
        raise ValueError("edge set does not meet every di-circuit")
    _check_flat(D, F, verify_flat)
    if not S:
        return CoverNumber(0, Partition(()), None)
    lo, hi = 1, len(S)
    while lo < hi:
        mid = (lo + hi) // 2
        if isinstance(fsink_violator(D, F, S, mid), ViolatingDiCircuit):
            lo = mid + 1
        else:
            hi = mid
    part = check_F_stable_union(D, F, S, lo, verify_flat=False)
    assert isinstance(part, Partition)
    witness = None
    if lo > 1:
        witness = fsink_violator(D, F, S, lo - 1)
        assert isinstance(witness, ViolatingDiCircuit)
    return CoverNumber(lo, part, witness)


def bondy_chromatic_bound(D: Digraph) -> CoverNumber:
    """Colour a strong digraph with at most as many stable classes as its
    longest di-circuit has nodes."""
    if D.n < 2:
        raise NotStrong("need at least two nodes")
    _require_strong(D)
    if len(weak_components(D)) != 1:
        raise NotStrong("digraph is not strongly connected")
    F = flat_transversal(D)
    res = min_F_stable_cover_number(D, F, range(D.n), verify_flat=False)
    for cls in res.partition.classes:
        assert is_stable(D, cls) is None
    return res


# ---------------------------------------------------------- cyclic orders


@dataclass(frozen=True)
class CyclicOrder:
    """A cyclic node order read from ``sequence[0]``; ``backward_edges`` are the
    edges pointing to an earlier position."""

    sequence: tuple[int, ...]
    backward_edges: frozenset[int]
    kind = "cyclic_order"

    @classmethod
    def from_sequence(cls, D: Digraph, sequence: Iterable) -> CyclicOrder:
        seq = tuple(D.node_id(v) for v in sequence)
        if sorted(seq) != list(range(D.n)):
            raise ValueError("a cyclic order must list every node exactly once")
        pos = {v: i for i, v in enumerate(seq)}
        return cls(seq, frozenset(e for e, (t, h) in enumerate(D.edges) if pos[t] > pos[h]))

    def to_json(self, D: Digraph | None = None) -> dict:
        seq = [D.name(v) for v in self.sequence] if D is not None and D.names else list(self.sequence)
        return {"kind": self.kind, "sequence": seq, "backward_edges": sorted(self.backward_edges)}


def index(D: Digraph, order: CyclicOrder, K: Circuit) -> int:
    """How many times the di-circuit ``K`` winds around the cyclic order."""
    K = Circuit.from_walk(D, K.nodes, K.edges)
    if not K.is_dicircuit:
        raise ValueError("index is defined for di-circuits only")
    n = len(order.sequence)
    pos = {v: i for i, v in enumerate(order.sequence)}
    turns = sum((pos[D.edges[e][1]] - pos[D.edges[e][0]]) % n for e in K.edges)
    assert turns % n == 0
    ind = len(order.backward_edges & K.edge_set)
    assert ind == turns // n
    return ind


def coherent_cyclic_order(D: Digraph) -> CyclicOrder:
    """A cyclic order of a strong digraph in which every edge lies on a
    di-circuit of index 1."""
    _require_strong(D)
    F = flat_transversal(D)
    seq = topological_order(reverse_edges(D, F))
    if isinstance(seq, Circuit):
        raise RuntimeError("reversing the flat transversal left a di-circuit")
    order = CyclicOrder.from_sequence(D, seq)
    assert order.backward_edges == F
    return order


def is_coherent(D: Digraph, order: CyclicOrder) -> bool:
    return is_flat(D, order.backward_edges)


def check_cyclic_stable(
    D: Digraph, order: CyclicOrder, S: Iterable, k: int = 1, verify: bool | None = None
) -> Partition | ViolatingDiCircuit:
    """``S`` meets every di-circuit in at most ``k`` times its index, via the
    equivalent F-stability test for the opening's backward edges."""
    if verify is None:
        verify = D.n <= FLAT_VERIFY_MAX_N
    if verify and not is_coherent(D, order):
        raise ValueError("cyclic order is not coherent")
    return check_F_stable_union(D, order.backward_edges, S, k, verify_flat=False)
