"""Exhaustive reference implementations for desk-scale cross-checking.

Nothing here is clever: every routine enumerates circuits, subsets or
orientations directly. Costs are exponential; keep ``n`` small.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from functools import lru_cache

from .graph_core import Circuit, Digraph, enumerate_circuits, enumerate_dicircuits, reverse_edges


def all_digraphs(n: int) -> Iterator[Digraph]:
    """Every simple labelled digraph on ``n`` nodes (each pair: none, one way,
    the other way, or both)."""
    pairs = list(itertools.combinations(range(n), 2))
    for states in itertools.product(range(4), repeat=len(pairs)):
        edges = []
        for (u, v), s in zip(pairs, states):
            if s & 1:
                edges.append((u, v))
            if s & 2:
                edges.append((v, u))
        yield Digraph(n, tuple(edges))


def all_posets(n: int) -> Iterator[Digraph]:
    """Transitive relations ``i < j`` respecting the labelling; every poset on
    ``n`` elements appears up to isomorphism."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        rel = {p for i, p in enumerate(pairs) if mask >> i & 1}
        if all((a, c) in rel for a, b in rel for b2, c in rel if b == b2):
            yield Digraph(n, tuple(sorted(rel)))


def subsets(items: Iterable[int]) -> Iterator[frozenset[int]]:
    items = list(items)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


def is_stable_set(D: Digraph, S) -> bool:
    S = set(S)
    return not any(t in S and h in S for t, h in D.edges)


# ------------------------------------------------------------- conditions


def circuit_condition(D: Digraph, S, k: int = 1) -> Circuit | None:
    """A circuit with ``|S ∩ V(C)| > k eta(C)``, or ``None``."""
    S = set(S)
    for C in enumerate_circuits(D):
        if len(S & C.node_set) > k * C.eta:
            return C
    return None


def dicircuit_condition(D: Digraph, F, S, k: int = 1) -> Circuit | None:
    """A di-circuit with ``|S ∩ V(K)| > k |F ∩ K|``, or ``None``."""
    S, F = set(S), set(F)
    for K in enumerate_dicircuits(D):
        if len(S & K.node_set) > k * len(F & K.edge_set):
            return K
    return None


def dicuts(D: Digraph) -> list[frozenset[int]]:
    """Every non-empty dicut, one per defining node set."""
    out = set()
    for Z in subsets(range(D.n)):
        if any(t in Z and h not in Z for t, h in D.edges):
            continue
        B = frozenset(e for e, (t, h) in enumerate(D.edges) if h in Z and t not in Z)
        if B:
            out.add(B)
    return sorted(out, key=sorted)


def sink_stable_by_search(D: Digraph, S) -> bool:
    """Breadth-first search over orientations reachable by reversing one dicut
    at a time; succeeds when every node of ``S`` is a sink."""
    S = set(S)
    start = frozenset()
    seen = {start}
    queue = deque([start])
    while queue:
        flipped = queue.popleft()
        cur = reverse_edges(D, flipped)
        if all(not cur.out_edges[v] for v in S):
            return True
        for B in dicuts(cur):
            nxt = flipped ^ B
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def k_sink_stable_by_search(D: Digraph, S, k: int) -> bool:
    """Try every assignment of ``S`` to ``k`` classes (symmetry broken)."""
    S = sorted(set(S))
    cache: dict[frozenset[int], bool] = {}

    def ok(cls):
        if cls not in cache:
            cache[cls] = is_stable_set(D, cls) and sink_stable_by_search(D, cls)
        return cache[cls]

    def place(i, classes):
        if i == len(S):
            return all(ok(frozenset(c)) for c in classes)
        for c in classes:
            c.append(S[i])
            if ok(frozenset(c)) and place(i + 1, classes):
                return True
            c.pop()
        if len(classes) < k:
            classes.append([S[i]])
            if ok(frozenset(classes[-1])) and place(i + 1, classes):
                return True
            classes.pop()
        return False

    return place(0, [])


# ------------------------------------------------------------ optimization


def max_weight_subset(candidates: Iterable[int], w: Sequence[int], accept) -> tuple[int, frozenset[int]]:
    best, arg = 0, frozenset()
    for X in subsets(candidates):
        val = sum(w[v] for v in X)
        if val > best and accept(X):
            best, arg = val, X
    return best, arg


def alpha(D: Digraph, U=None) -> int:
    U = range(D.n) if U is None else U
    return max(len(X) for X in subsets(U) if is_stable_set(D, X))


def gallai_primal(D: Digraph, c: Sequence[int], w: Sequence[int]) -> int:
    """Max ``w.x`` over multisets with ``x(K) <= c(K)`` on every di-circuit."""
    circuits = [(K.nodes, sum(c[e] for e in K.edges)) for K in enumerate_dicircuits(D)]
    top = max((cap for _, cap in circuits), default=0)
    best = 0
    free = [v for v in range(D.n) if w[v] > 0]
    for vals in itertools.product(range(top + 1), repeat=len(free)):
        x = dict(zip(free, vals))
        if all(sum(x.get(v, 0) for v in nodes) <= cap for nodes, cap in circuits):
            best = max(best, sum(w[v] * x[v] for v in free))
    return best


def min_cover(D: Digraph, items: list[tuple[frozenset[int], int]], need: frozenset[int]) -> float:
    """Cheapest family of ``(node set, cost)`` items covering ``need`` (DP over subsets)."""
    need = sorted(need)
    index = {v: i for i, v in enumerate(need)}
    masks = []
    for nodes, cost in items:
        m = 0
        for v in nodes:
            if v in index:
                m |= 1 << index[v]
        if m:
            masks.append((m, cost))

    @lru_cache(maxsize=None)
    def best(left: int) -> float:
        if not left:
            return 0
        low = left & -left
        return min((cost + best(left & ~m) for m, cost in masks if m & low), default=float("inf"))

    return best((1 << len(need)) - 1)


def circuit_cover_cost(D: Digraph, allow_edges: bool) -> float:
    """Least total eta-value of circuits (and unit-cost edges, if allowed)
    covering every node."""
    items = [(C.node_set, C.eta) for C in enumerate_circuits(D)]
    if allow_edges:
        items += [(frozenset(e), 1) for e in D.edges]
    return min_cover(D, items, frozenset(range(D.n)))


def longest_chain(P: Digraph, X) -> int:
    X = set(X)
    best: dict[int, int] = {}

    def up(v):
        if v not in best:
            best[v] = 1 + max((up(P.edges[e][1]) for e in P.out_edges[v] if P.edges[e][1] in X), default=0)
        return best[v]

    return max((up(v) for v in X), default=0)


def max_k_antichain_union(P: Digraph, k: int) -> int:
    """A set splits into ``k`` antichains iff its longest chain has at most ``k`` elements."""
    return max(len(X) for X in subsets(range(P.n)) if longest_chain(P, X) <= k)


def min_cost_circulation_brute(net, bound: int | None = None) -> int | None:
    """Cheapest circulation with every arc flow in ``[lower, min(upper, bound)]``.

    The default bound, the total of all finite bounds, is enough for some
    optimum: an unbounded arc has non-negative cost, so flow on it only needs
    to carry what the bounded arcs force around.
    """
    if bound is None:
        bound = sum(a.lower + (a.upper or 0) for a in net.arcs)
    ranges = [range(a.lower, (bound if a.upper is None else min(a.upper, bound)) + 1) for a in net.arcs]
    best = None
    for z in itertools.product(*ranges):
        bal = [0] * net.n
        for a, f in zip(net.arcs, z):
            bal[a.head] += f
            bal[a.tail] -= f
        if any(bal):
            continue
        cost = sum(a.cost * f for a, f in zip(net.arcs, z))
        if best is None or cost < best:
            best = cost
    return best


def f_stable_by_search(D: Digraph, F, S) -> bool:
    return is_stable_set(D, S) and sink_stable_by_search(reverse_edges(D, F), S)


def _disjoint_faces(G, X) -> bool:
    nodes = [v for f in X for v in G.boundary_nodes(f)]
    return len(nodes) == len(set(nodes))


def clar_by_search(G) -> int:
    from .clar import check_resonant

    best = 0
    for X in subsets(range(len(G.faces))):
        if len(X) > best and _disjoint_faces(G, X) and check_resonant(G, X):
            best = len(X)
    return best


def k_resonant_by_search(G, k: int) -> int:
    """Most faces splittable into ``k`` resonant classes."""
    from .clar import check_resonant

    nf = len(G.faces)
    resonant = set()
    for X in subsets(range(nf)):
        if _disjoint_faces(G, X) and check_resonant(G, X):
            resonant.add(X)
    best = 0
    for X in subsets(range(nf)):
        if len(X) <= best:
            continue
        if _splits(sorted(X), k, resonant):
            best = len(X)
    return best


def _splits(items, k, good) -> bool:
    def place(i, classes):
        if i == len(items):
            return True
        for j in range(len(classes)):
            c = classes[j] | {items[i]}
            if c in good:
                classes[j] = c
                if place(i + 1, classes):
                    return True
                classes[j] = c - {items[i]}
        if len(classes) < k and frozenset({items[i]}) in good:
            classes.append(frozenset({items[i]}))
            if place(i + 1, classes):
                return True
            classes.pop()
        return False

    return place(0, [])
