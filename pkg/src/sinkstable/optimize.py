"""Integral min-cost circulations and the min-max layer built on them.

Each solver returns a :class:`MinMaxResult` whose primal side has been
re-checked by the stability routines and whose dual side has been re-summed;
the two values are asserted equal before returning.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .certificates import DicutFamily, Partition
from .graph_core import Circuit, Digraph, doubled, enumerate_circuits, strong_components, topological_order
from .potential import feasible_potential
from .stability import (
    _check_flat,
    _require_strong,
    check_F_stable_union,
    check_sink_stable,
    flat_transversal,
    partition_k_sink_stable,
)

# ------------------------------------------------------------ flow engine


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    lower: int = 0
    upper: int | None = None  # None: unbounded
    cost: int = 0
    origin: object = None


@dataclass(frozen=True)
class FlowNetwork:
    n: int
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        for i, a in enumerate(self.arcs):
            if not (0 <= a.tail < self.n and 0 <= a.head < self.n):
                raise ValueError(f"arc {i} has an endpoint out of range")
            if a.lower < 0 or (a.upper is not None and a.upper < a.lower):
                raise ValueError(f"arc {i} has inconsistent bounds")
            if a.upper is None and a.cost < 0:
                raise ValueError(f"arc {i} is unbounded with negative cost")

    def as_digraph(self) -> Digraph:
        return Digraph(self.n, tuple((a.tail, a.head) for a in self.arcs if a.tail != a.head))


@dataclass(frozen=True)
class Circulation:
    flow: tuple[int, ...]
    cost: int
    potential: tuple[int, ...]  # reduced costs are non-negative on residual arcs


@dataclass(frozen=True)
class Infeasible:
    """Node set ``X`` whose entering lower bounds exceed its leaving capacity."""

    X: frozenset[int]
    demand_in: int
    capacity_out: int


class _Residual:
    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []

    def add(self, u: int, v: int, cap: int, cost: int) -> int:
        i = len(self.to)
        for a, b, c, w in ((u, v, cap, cost), (v, u, 0, -cost)):
            self.adj[a].append(len(self.to))
            self.to.append(b)
            self.cap.append(c)
            self.cost.append(w)
        return i

    def shortest(self, s: int, pot: list[int]):
        INF = float("inf")
        dist = [INF] * self.n
        prev = [-1] * self.n
        dist[s] = 0
        heap = [(0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for i in self.adj[u]:
                if self.cap[i] <= 0:
                    continue
                v = self.to[i]
                nd = d + self.cost[i] + pot[u] - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    prev[v] = i
                    heapq.heappush(heap, (nd, v))
        return dist, prev


def min_cost_circulation(net: FlowNetwork) -> Circulation | Infeasible:
    """Successive shortest paths on the lower-bound-reduced network.

    Negative-cost bounded arcs start saturated so that the initial residual
    graph has non-negative costs. The returned potential comes from a fresh
    Bellman-Ford run on the final residual graph and certifies optimality.
    """
    arcs = net.arcs
    z = [a.upper if a.cost < 0 else a.lower for a in arcs]
    excess = [0] * net.n
    for a, f in zip(arcs, z):
        excess[a.head] += f
        excess[a.tail] -= f
    supply = sum(x for x in excess if x > 0)
    big = 1 + supply + sum(a.upper for a in arcs if a.upper is not None)

    s, t = net.n, net.n + 1
    R = _Residual(net.n + 2)
    ids = []
    for a, f in zip(arcs, z):
        cap = big if a.upper is None else a.upper
        i = R.add(a.tail, a.head, cap - f, a.cost)
        R.cap[i ^ 1] = f - a.lower
        ids.append(i)
    for v, x in enumerate(excess):
        if x > 0:
            R.add(s, v, x, 0)
        elif x < 0:
            R.add(v, t, -x, 0)

    pot = [0] * R.n
    routed = 0
    while routed < supply:
        dist, prev = R.shortest(s, pot)
        if prev[t] == -1:
            break
        for v in range(R.n):
            if dist[v] != float("inf"):
                pot[v] += dist[v]
        push, v = supply - routed, t
        while v != s:
            i = prev[v]
            push = min(push, R.cap[i])
            v = R.to[i ^ 1]
        v = t
        while v != s:
            i = prev[v]
            R.cap[i] -= push
            R.cap[i ^ 1] += push
            v = R.to[i ^ 1]
        routed += push

    if routed < supply:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for i in R.adj[u]:
                if R.cap[i] > 0 and R.to[i] not in seen:
                    seen.add(R.to[i])
                    stack.append(R.to[i])
        X = frozenset(v for v in seen if v < net.n)
        demand = sum(a.lower for a in arcs if a.head in X and a.tail not in X)
        cap_out = sum(
            big if a.upper is None else a.upper for a in arcs if a.tail in X and a.head not in X
        )
        assert demand > cap_out, "cut from the final residual graph is not violated"
        return Infeasible(X, demand, cap_out)

    flow = tuple(a.lower + R.cap[i ^ 1] for a, i in zip(arcs, ids))
    for a, f in zip(arcs, flow):
        assert a.lower <= f and (a.upper is None or f <= a.upper)
    bal = [0] * net.n
    for a, f in zip(arcs, flow):
        bal[a.head] += f
        bal[a.tail] -= f
    assert not any(bal)

    res_edges, res_cost = [], []
    for a, f in zip(arcs, flow):
        if a.tail == a.head:
            continue
        if a.upper is None or f < a.upper:
            res_edges.append((a.tail, a.head))
            res_cost.append(a.cost)
        if f > a.lower:
            res_edges.append((a.head, a.tail))
            res_cost.append(-a.cost)
    pi = feasible_potential(Digraph(net.n, tuple(res_edges)), res_cost)
    assert not isinstance(pi, Circuit), "residual graph has a negative cycle"
    return Circulation(flow, sum(a.cost * f for a, f in zip(arcs, flow)), tuple(pi))


def decompose_circulation(D: Digraph, z: Sequence[int]) -> list[tuple[Circuit, int]]:
    """Peel di-circuits off a non-negative integral circulation.

    Each walk starts at the lowest-id edge still carrying flow and follows
    lowest-id positive out-edges until a node repeats.
    """
    z = list(z)
    if len(z) != D.m or any(x < 0 for x in z):
        raise ValueError("flow must be non-negative with one value per edge")
    bal = [0] * D.n
    for (t, h), x in zip(D.edges, z):
        bal[h] += x
        bal[t] -= x
    if any(bal):
        raise ValueError("flow is not a circulation")
    family: dict[tuple, list] = {}
    while True:
        start = next((e for e in range(D.m) if z[e] > 0), None)
        if start is None:
            break
        pos = {D.edges[start][0]: 0}
        walk_nodes = [D.edges[start][0]]
        walk_edges = [start]
        v = D.edges[start][1]
        while v not in pos:
            pos[v] = len(walk_nodes)
            walk_nodes.append(v)
            e = next(e for e in D.out_edges[v] if z[e] > 0)
            walk_edges.append(e)
            v = D.edges[e][1]
        i = pos[v]
        K = Circuit(tuple(walk_nodes[i:]), tuple(walk_edges[i:]), (True,) * len(walk_edges[i:])).as_dicircuit()
        y = min(z[e] for e in K.edges)
        for e in K.edges:
            z[e] -= y
        key = K.edges
        if key in family:
            family[key][1] += y
        else:
            family[key] = [K, y]
    return [(K, y) for K, y in family.values()]


# --------------------------------------------------------- min-max layer


@dataclass(frozen=True)
class MinMaxResult:
    """Optimal primal set or multiset with an equal-valued dual.

    ``dicircuits`` are pairs ``(K, y)`` in the solved digraph, each charged
    ``charge`` per copy. Sink variants also fold them into ``circuits`` of the
    input digraph (charged their eta-value) and single ``edges`` (charged 1).
    """

    primal: frozenset[int] | Mapping[int, int]
    primal_value: int
    dual_value: int
    dicircuits: tuple[tuple[Circuit, int, int], ...] = ()
    circuits: tuple[tuple[Circuit, int], ...] = ()
    edges: tuple[tuple[int, int], ...] = ()
    uncovered: frozenset[int] = frozenset()
    k: int = 1
    partition: Partition | None = None
    extra: dict = field(default_factory=dict)
    kind = "min_max"

    @property
    def equal(self) -> bool:
        return self.primal_value == self.dual_value

    def to_json(self, D: Digraph | None = None) -> dict:
        def nm(v):
            return D.name(v) if D is not None and D.names else v

        if isinstance(self.primal, Mapping):
            primal = {"multiset": {str(nm(v)): x for v, x in sorted(self.primal.items()) if x}}
        else:
            primal = {"set": [nm(v) for v in sorted(self.primal)]}
        dual: dict = {
            "dicircuits": [
                {"nodes": [nm(v) for v in K.nodes], "edges": list(K.edges), "mult": y, "charge": c}
                for K, y, c in self.dicircuits
            ]
        }
        if self.circuits or self.edges:
            dual["circuits"] = [
                {**C.to_json(D), "mult": y, "eta": C.eta} for C, y in self.circuits
            ]
            dual["edges"] = [e for e, y in self.edges for _ in range(y)]
        if self.uncovered:
            dual["uncovered"] = [nm(v) for v in sorted(self.uncovered)]
        out = {
            "kind": self.kind,
            "primal": primal,
            "dual": dual,
            "value": self.primal_value,
            "dual_value": self.dual_value,
            "k": self.k,
        }
        if self.partition is not None:
            out["partition"] = self.partition.to_json()
        out.update(self.extra)
        return out


def _weights(D: Digraph, w, default: int = 1) -> list[int]:
    if w is None:
        return [default] * D.n
    if isinstance(w, Mapping):
        out = [0] * D.n
        for v, x in w.items():
            out[D.node_id(v)] = x
    else:
        out = list(w)
        if len(out) != D.n:
            raise ValueError(f"expected {D.n} node weights")
    for x in out:
        if isinstance(x, bool) or int(x) != x or x < 0:
            raise ValueError("node weights must be non-negative integers")
    return [int(x) for x in out]


def _split_network(D: Digraph, c: Sequence[int], w: Sequence[int], relief: bool) -> FlowNetwork:
    """Node ``v`` becomes ``v'`` (id ``v``) and ``v''`` (id ``n + v``)."""
    n = D.n
    arcs = [Arc(t, n + h, 0, None, c[e], ("edge", e)) for e, (t, h) in enumerate(D.edges)]
    arcs += [Arc(n + v, v, w[v], None, 0, ("cover", v)) for v in range(n)]
    if relief:
        arcs += [Arc(v, n + v, 0, w[v], 1, ("relief", v)) for v in range(n) if w[v]]
    return FlowNetwork(2 * n, tuple(arcs))


def _solve_split(D, c, w, relief):
    net = _split_network(D, c, w, relief)
    sol = min_cost_circulation(net)
    assert isinstance(sol, Circulation), "covering network is infeasible"
    z = sol.flow[: D.m]
    fam = decompose_circulation(D, z)
    drop = [sol.potential[D.n + v] - sol.potential[v] for v in range(D.n)]
    return sol, fam, drop


def _coverage(D: Digraph, fam) -> list[int]:
    cov = [0] * D.n
    for K, y in fam:
        for v in K.nodes:
            cov[v] += y
    return cov


def gallai_min_max(D: Digraph, c: Sequence[int] | Mapping[int, int], w=None) -> MinMaxResult:
    """Max ``w``-weight of a multiset meeting each di-circuit ``K`` at most
    ``c(K)`` times, against min total cost of di-circuits covering each node
    ``v`` at least ``w(v)`` times."""
    from .potential import _cost_list

    c = _cost_list(D, c)
    if any(x < 0 for x in c):
        raise ValueError("costs must be non-negative")
    w = _weights(D, w)
    comps, comp_of = strong_components(D)
    for v in range(D.n):
        if w[v] and len(comps[comp_of[v]]) < 2:
            raise ValueError(f"node {D.name(v)} has positive weight but lies on no di-circuit")
    sol, fam, drop = _solve_split(D, c, w, relief=False)
    x = {v: (drop[v] if w[v] else 0) for v in range(D.n)}
    assert all(val >= 0 for val in x.values())
    cov = _coverage(D, fam)
    assert all(cov[v] >= w[v] for v in range(D.n))
    dual = sum(y * sum(c[e] for e in K.edges) for K, y in fam)
    assert dual == sol.cost
    # c-independence: no di-circuit may carry more x than its cost
    check = feasible_potential(D, [c[e] - x[h] for e, (_, h) in enumerate(D.edges)])
    assert not isinstance(check, Circuit), "extracted multiset is not c-independent"
    primal = sum(w[v] * x[v] for v in range(D.n))
    assert primal == dual, (primal, dual)
    return MinMaxResult(
        primal={v: m for v, m in x.items() if m},
        primal_value=primal,
        dual_value=dual,
        dicircuits=tuple((K, y, sum(c[e] for e in K.edges)) for K, y in fam),
    )


def max_F_stable(D: Digraph, F: Iterable[int], w=None, verify_flat: bool | None = None) -> MinMaxResult:
    """Largest ``w``-weight F-stable set, with di-circuits of least total
    F-value covering ``w``."""
    F = frozenset(F)
    _require_strong(D)
    _check_flat(D, F, verify_flat)
    w = _weights(D, w)
    res = gallai_min_max(D, [1 if e in F else 0 for e in range(D.m)], w)
    assert all(m == 1 for m in res.primal.values()), "flat cost gave a proper multiset"
    S = frozenset(res.primal)
    part = check_F_stable_union(D, F, S, 1, verify_flat=False)
    assert isinstance(part, Partition), "optimal set failed the F-stability check"
    return MinMaxResult(
        primal=S,
        primal_value=sum(w[v] for v in S),
        dual_value=res.dual_value,
        dicircuits=res.dicircuits,
        partition=part,
    )


def _fold(D: Digraph, K: Circuit) -> Circuit:
    """Map a di-circuit of the doubled digraph back to a circuit of ``D``."""
    return Circuit.from_walk(D, K.nodes, [e % D.m for e in K.edges]).canonical()


def _type_one(D: Digraph, K: Circuit) -> bool:
    return len(K) == 2 and K.edges[0] % D.m == K.edges[1] % D.m


def _require_no_isolated(D: Digraph) -> None:
    for v in range(D.n):
        if not D.incident[v]:
            raise ValueError(f"node {D.name(v)} is isolated")


def _merge_edge_pairs(D: Digraph, circuits: list, edges: dict[int, int]) -> None:
    """Swap two disjoint single-edge duals for a 4-circuit on their ends.

    A 4-circuit has eta at most 2, so coverage and cost are unchanged or
    better; this only makes the dual read more naturally.
    """
    changed = True
    while changed:
        changed = False
        ids = sorted(e for e, y in edges.items() if y)
        for i, e1 in enumerate(ids):
            for e2 in ids[i + 1 :]:
                X = set(D.edges[e1]) | set(D.edges[e2])
                if len(X) != 4:
                    continue
                sub_ids = [e for e, (t, h) in enumerate(D.edges) if t in X and h in X]
                sub = Digraph(D.n, tuple(D.edges[e] for e in sub_ids))
                C = next((C for C in enumerate_circuits(sub) if len(C) == 4), None)
                if C is None:
                    continue
                C = Circuit.from_walk(D, C.nodes, [sub_ids[e] for e in C.edges]).canonical()
                for e in (e1, e2):
                    edges[e] -= 1
                circuits.append((C, 1))
                changed = True
                break
            if changed:
                break


def max_sink_stable(D: Digraph, w=None, prefer_circuits: bool = True) -> MinMaxResult:
    """Largest ``w``-weight sink-stable set, with a dual of circuits (charged
    their eta-value) and single edges (charged 1) covering ``w``."""
    _require_no_isolated(D)
    w = _weights(D, w)
    Dd, Fd = doubled(D)
    res = max_F_stable(Dd, Fd, w, verify_flat=False)
    S = res.primal
    fam = check_sink_stable(D, S)
    assert isinstance(fam, DicutFamily)

    circuits: list[tuple[Circuit, int]] = []
    edges: dict[int, int] = defaultdict(int)
    for K, y, charge in res.dicircuits:
        if _type_one(D, K):
            edges[K.edges[0] % D.m] += y
        else:
            C = _fold(D, K)
            assert C.eta == charge, "optimal dual used the costlier direction"
            circuits.append((C, y))
    if prefer_circuits:
        _merge_edge_pairs(D, circuits, edges)
    circuits = _merge_same(circuits)
    edge_list = tuple(sorted((e, y) for e, y in edges.items() if y))
    cov = [0] * D.n
    for C, y in circuits:
        for v in C.nodes:
            cov[v] += y
    for e, y in edge_list:
        for v in D.edges[e]:
            cov[v] += y
    assert all(cov[v] >= w[v] for v in range(D.n))
    dual = sum(y * C.eta for C, y in circuits) + sum(y for _, y in edge_list)
    assert dual == res.primal_value, (dual, res.primal_value)
    return MinMaxResult(
        primal=S,
        primal_value=res.primal_value,
        dual_value=dual,
        dicircuits=res.dicircuits,
        circuits=tuple(circuits),
        edges=edge_list,
        partition=Partition((S,), (fam,)),
    )


def _merge_same(circuits):
    out: dict[tuple, list] = {}
    for C, y in circuits:
        key = C.edges
        if key in out:
            out[key][1] += y
        else:
            out[key] = [C, y]
    return [(C, y) for C, y in out.values()]


def cover_by_alpha_dicircuits(D: Digraph, U: Iterable | None = None) -> MinMaxResult:
    """Di-circuits covering ``U``, no more of them than the stable set returned
    alongside (which lies inside ``U``)."""
    if D.n < 2:
        raise ValueError("need at least two nodes")
    _require_strong(D)
    U = frozenset(range(D.n)) if U is None else frozenset(D.node_id(v) for v in U)
    F = flat_transversal(D)
    w = [1 if v in U else 0 for v in range(D.n)]
    res = max_F_stable(D, F, w, verify_flat=False)
    size = sum(y for _, y, _ in res.dicircuits)
    S = res.primal
    assert S <= U and size <= len(S)
    assert not any(t in S and h in S for t, h in D.edges)
    return MinMaxResult(
        primal=S,
        primal_value=len(S),
        dual_value=res.dual_value,
        dicircuits=res.dicircuits,
        extra={"family_size": size, "transversal": sorted(F)},
    )


# --------------------------------------------------------------- k-unions


def k_union_max_F(
    D: Digraph, F: Iterable[int], w=None, k: int = 2, verify_flat: bool | None = None
) -> MinMaxResult:
    """Largest ``w``-weight union of ``k`` F-stable sets.

    The dual charges ``k |F ∩ K|`` per di-circuit plus one for every unit of
    weight left uncovered.
    """
    if k < 2:
        raise ValueError("k must be at least 2; use max_F_stable for k = 1")
    if D.n < 2:
        raise ValueError("need at least two nodes")
    F = frozenset(F)
    _require_strong(D)
    _check_flat(D, F, verify_flat)
    w = _weights(D, w)
    c = [k if e in F else 0 for e in range(D.m)]
    sol, fam, drop = _solve_split(D, c, w, relief=True)
    S = frozenset(v for v in range(D.n) if w[v] and drop[v] >= 1)
    part = check_F_stable_union(D, F, S, k, verify_flat=False)
    assert isinstance(part, Partition), "extracted set is not a k-union"
    cov = _coverage(D, fam)
    gap = [max(0, w[v] - cov[v]) for v in range(D.n)]
    dual = sum(y * sum(c[e] for e in K.edges) for K, y in fam) + sum(gap)
    primal = sum(w[v] for v in S)
    assert dual == sol.cost and primal == dual, (primal, dual, sol.cost)
    return MinMaxResult(
        primal=S,
        primal_value=primal,
        dual_value=dual,
        dicircuits=tuple((K, y, sum(c[e] for e in K.edges)) for K, y in fam),
        uncovered=frozenset(v for v in range(D.n) if gap[v]),
        k=k,
        partition=part,
        extra={"uncovered_weight": sum(gap)},
    )


def k_union_max_sink(D: Digraph, w=None, k: int = 2) -> MinMaxResult:
    """Largest ``w``-weight k-sink-stable set, with a dual of circuits charged
    ``k`` times their eta-value plus uncovered weight."""
    _require_no_isolated(D)
    w = _weights(D, w)
    Dd, Fd = doubled(D)
    res = k_union_max_F(Dd, Fd, w, k, verify_flat=False)
    S = res.primal
    part = partition_k_sink_stable(D, S, k)
    assert isinstance(part, Partition)
    circuits = []
    for K, y, _ in res.dicircuits:
        if not _type_one(D, K):
            circuits.append((_fold(D, K), y))
    circuits = _merge_same(circuits)
    cov = [0] * D.n
    for C, y in circuits:
        for v in C.nodes:
            cov[v] += y
    gap = [max(0, w[v] - cov[v]) for v in range(D.n)]
    dual = k * sum(y * C.eta for C, y in circuits) + sum(gap)
    assert dual == res.primal_value, (dual, res.primal_value)
    return MinMaxResult(
        primal=S,
        primal_value=res.primal_value,
        dual_value=dual,
        dicircuits=res.dicircuits,
        circuits=tuple(circuits),
        uncovered=frozenset(v for v in range(D.n) if gap[v]),
        k=k,
        partition=part,
        extra={"uncovered_weight": sum(gap)},
    )


# -------------------------------------------------------- Greene-Kleitman


def is_transitive_acyclic(P: Digraph) -> bool:
    if isinstance(topological_order(P), Circuit):
        return False
    pairs = set(P.edges)
    return all((u, x) in pairs for u, v in P.edges for _, x in (P.edges[e] for e in P.out_edges[v]))


@dataclass(frozen=True)
class ChainCover:
    """Largest union of ``k`` antichains and disjoint chains with
    ``k * (#chains) + (#elements off the chains)`` equal to it."""

    k: int
    value: int
    antichains: tuple[frozenset[int], ...]
    chains: tuple[tuple[int, ...], ...]
    kind = "greene_kleitman"

    def to_json(self, D: Digraph | None = None) -> dict:
        def nm(v):
            return D.name(v) if D is not None and D.names else v

        return {
            "kind": self.kind,
            "k": self.k,
            "value": self.value,
            "antichains": [[nm(v) for v in sorted(a)] for a in self.antichains],
            "chains": [[nm(v) for v in ch] for ch in self.chains],
        }


def greene_kleitman(P: Digraph, k: int = 1) -> ChainCover:
    """Max size of a union of ``k`` antichains of the poset ``P`` (given as its
    transitive, acyclic comparability digraph) with a matching chain family."""
    if k < 1:
        raise ValueError("k must be positive")
    if not is_transitive_acyclic(P):
        raise ValueError("poset digraph must be transitive and acyclic")
    n = P.n
    if n == 0:
        return ChainCover(k, 0, tuple(frozenset() for _ in range(k)), ())
    z = n
    edges = list(P.edges)
    F = set()
    for u in range(n):
        edges.append((z, u))
        F.add(len(edges))  # id of the edge u -> z appended next
        edges.append((u, z))
    D = Digraph(n + 1, tuple(edges))
    w = [1] * n + [0]
    if k == 1:
        res = max_F_stable(D, F, w, verify_flat=False)
    else:
        res = k_union_max_F(D, F, w, k, verify_flat=False)
    S = res.primal
    assert z not in S

    covered: set[int] = set()
    chains = []
    for K, y, _ in res.dicircuits:
        K = K.rotated(z)
        chain = tuple(v for v in K.nodes[1:] if v not in covered)
        if chain:
            chains.append(chain)
            covered |= set(chain)
    pairs = set(P.edges)
    for ch in chains:
        assert all((a, b) in pairs for a, b in zip(ch, ch[1:]))
    value = k * len(chains) + (n - len(covered))
    assert value == len(S), (value, len(S))
    classes = tuple(frozenset(c) for c in res.partition.classes)
    for cls in classes:
        assert not any(t in cls and h in cls for t, h in P.edges)
    return ChainCover(k, len(S), classes, tuple(chains))
