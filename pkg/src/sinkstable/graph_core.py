"""Digraphs, traversal-classified circuits and basic structure queries.

Nodes are ``0..n-1``; edges are ``(tail, head)`` pairs whose list position is
their id. Parallel edges are allowed, loops are not. Every derived digraph
(reversal, doubling) keeps the id of each original edge.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(t), int(h)) for t, h in self.edges))
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        for i, (t, h) in enumerate(self.edges):
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise ValueError(f"edge {i} = ({t}, {h}) has an endpoint outside [0, {self.n})")
            if t == h:
                raise ValueError(f"edge {i} is a loop at node {t}")
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != self.n:
                raise ValueError("names must list exactly one name per node")
            if len(set(self.names)) != self.n:
                raise ValueError("node names must be distinct")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for i, (t, _) in enumerate(self.edges):
            out[t].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (_, h) in enumerate(self.edges):
            inc[h].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def incident(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, the ``(edge id, other endpoint)`` pairs in edge-id order."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (t, h) in enumerate(self.edges):
            inc[t].append((i, h))
            inc[h].append((i, t))
        return tuple(tuple(sorted(x)) for x in inc)

    def name(self, v: int) -> str:
        return self.names[v] if self.names is not None else str(v)

    def node_id(self, token: str | int) -> int:
        """Resolve a node given by id or by name."""
        if isinstance(token, int):
            v = token
        elif self.names is not None and token in self.names:
            return self.names.index(token)
        else:
            try:
                v = int(token)
            except ValueError:
                raise ValueError(f"unknown node {token!r}") from None
        if not 0 <= v < self.n:
            raise ValueError(f"node {v} out of range")
        return v

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.names is not None:
            out["names"] = list(self.names)
        return out

    @classmethod
    def from_json(cls, data: dict) -> Digraph:
        names = data.get("names")
        n = data["n"]
        lookup = {name: i for i, name in enumerate(names)} if names else {}

        def node(x):
            return lookup[x] if isinstance(x, str) and x in lookup else int(x)

        edges = [(node(t), node(h)) for t, h in data["edges"]]
        return cls(n, tuple(edges), tuple(names) if names else None)


def reverse_edges(D: Digraph, F: Iterable[int]) -> Digraph:
    """Return ``D_F``: the digraph with every edge of ``F`` reversed, ids kept."""
    F = set(F)
    bad = [e for e in F if not 0 <= e < D.m]
    if bad:
        raise ValueError(f"unknown edge ids {sorted(bad)}")
    edges = tuple((h, t) if i in F else (t, h) for i, (t, h) in enumerate(D.edges))
    return Digraph(D.n, edges, D.names)


def doubled(D: Digraph) -> tuple[Digraph, frozenset[int]]:
    """``D*``: add the reverse of every edge. Edge ``m + i`` is the reverse of ``i``.

    Returns the doubled digraph together with the set ``A'`` of added edges.
    """
    edges = D.edges + tuple((h, t) for t, h in D.edges)
    return Digraph(D.n, edges, D.names), frozenset(range(D.m, 2 * D.m))


# ---------------------------------------------------------------- circuits


@dataclass(frozen=True)
class Circuit:
    """A circuit with a fixed traversal.

    ``edges[i]`` joins ``nodes[i]`` to ``nodes[i+1]`` (cyclically) and
    ``forward[i]`` tells whether it is oriented along the traversal.
    """

    nodes: tuple[int, ...]
    edges: tuple[int, ...]
    forward: tuple[bool, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("a circuit has at least two nodes")
        if not len(self.nodes) == len(self.edges) == len(self.forward):
            raise ValueError("nodes, edges and flags must have equal length")
        if len(set(self.nodes)) != len(self.nodes) or len(set(self.edges)) != len(self.edges):
            raise ValueError("circuit nodes and edges must be distinct")

    @classmethod
    def from_walk(cls, D: Digraph, nodes: Iterable[int], edges: Iterable[int]) -> Circuit:
        """Build a circuit from its node and edge sequences, computing flags from ``D``."""
        nodes, edges = tuple(nodes), tuple(edges)
        flags = []
        for i, e in enumerate(edges):
            u, v = nodes[i], nodes[(i + 1) % len(nodes)]
            t, h = D.edges[e]
            if (t, h) == (u, v):
                flags.append(True)
            elif (t, h) == (v, u):
                flags.append(False)
            else:
                raise ValueError(f"edge {e} does not join {u} and {v}")
        return cls(nodes, edges, tuple(flags))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def phi(self) -> int:
        return sum(self.forward)

    @property
    def beta(self) -> int:
        return len(self.forward) - self.phi

    @property
    def eta(self) -> int:
        return min(self.phi, self.beta)

    @property
    def is_dicircuit(self) -> bool:
        return self.beta == 0

    @property
    def node_set(self) -> frozenset[int]:
        return frozenset(self.nodes)

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    def restrict_counts(self, F: Iterable[int]) -> tuple[int, int]:
        """``(phi_F, beta_F)``: forward and backward edges of the circuit lying in ``F``."""
        F = set(F)
        fw = sum(1 for e, f in zip(self.edges, self.forward) if f and e in F)
        bw = sum(1 for e, f in zip(self.edges, self.forward) if not f and e in F)
        return fw, bw

    def reversed(self) -> Circuit:
        k = len(self.nodes)
        nodes = (self.nodes[0],) + tuple(self.nodes[k - 1 : 0 : -1])
        edges = tuple(reversed(self.edges))
        flags = tuple(not f for f in reversed(self.forward))
        return Circuit(nodes, edges, flags)

    def rotated(self, start: int) -> Circuit:
        i = self.nodes.index(start)
        return Circuit(
            self.nodes[i:] + self.nodes[:i],
            self.edges[i:] + self.edges[:i],
            self.forward[i:] + self.forward[:i],
        )

    def canonical(self) -> Circuit:
        """Start at the smallest node, head toward its smaller neighbour.

        Two-node circuits are disambiguated by taking the smaller edge id first.
        """
        c = self.rotated(min(self.nodes))
        if len(c.nodes) == 2:
            return c if c.edges[0] < c.edges[1] else c.reversed()
        return c if c.nodes[1] < c.nodes[-1] else c.reversed()

    def as_dicircuit(self) -> Circuit:
        """The directed traversal of a di-circuit, started at its smallest node."""
        if all(self.forward):
            c = self
        elif not any(self.forward):
            c = self.reversed()
        else:
            raise ValueError("not a di-circuit")
        return c.rotated(min(c.nodes))

    def to_json(self, D: Digraph | None = None) -> dict:
        nodes = [D.name(v) for v in self.nodes] if D is not None and D.names else list(self.nodes)
        return {"nodes": nodes, "edges": list(self.edges), "forward": list(self.forward)}


def enumerate_circuits(D: Digraph, max_len: int | None = None) -> Iterator[Circuit]:
    """Yield every circuit of the underlying multigraph once, in canonical traversal.

    Exponential in general; meant for desk-scale instances and as a test oracle.
    ``max_len`` caps the number of edges.
    """
    cap = D.n if max_len is None else min(max_len, D.n)
    for s in range(D.n):
        on_path = [False] * D.n
        on_path[s] = True
        path_nodes = [s]
        path_edges: list[int] = []

        def extend(u: int) -> Iterator[Circuit]:
            for e, v in D.incident[u]:
                if v < s or (path_edges and e == path_edges[-1]):
                    continue
                if v == s:
                    if not path_edges:
                        continue
                    if len(path_nodes) == 2:
                        if path_edges[0] < e:
                            yield Circuit.from_walk(D, path_nodes, path_edges + [e])
                    elif path_nodes[1] < path_nodes[-1]:
                        yield Circuit.from_walk(D, path_nodes, path_edges + [e])
                    continue
                if on_path[v] or len(path_nodes) >= cap:
                    continue
                on_path[v] = True
                path_nodes.append(v)
                path_edges.append(e)
                yield from extend(v)
                path_edges.pop()
                path_nodes.pop()
                on_path[v] = False

        yield from extend(s)


def enumerate_dicircuits(D: Digraph, max_len: int | None = None) -> Iterator[Circuit]:
    """Yield every di-circuit once, in directed traversal starting at its smallest node."""
    cap = D.n if max_len is None else min(max_len, D.n)
    for s in range(D.n):
        on_path = [False] * D.n
        on_path[s] = True
        path_nodes = [s]
        path_edges: list[int] = []

        def extend(u: int) -> Iterator[Circuit]:
            for e in D.out_edges[u]:
                v = D.edges[e][1]
                if v < s:
                    continue
                if v == s:
                    yield Circuit(tuple(path_nodes), tuple(path_edges + [e]), (True,) * (len(path_edges) + 1))
                    continue
                if on_path[v] or len(path_nodes) >= cap:
                    continue
                on_path[v] = True
                path_nodes.append(v)
                path_edges.append(e)
                yield from extend(v)
                path_edges.pop()
                path_nodes.pop()
                on_path[v] = False

        yield from extend(s)


# ------------------------------------------------------ structure queries


def strong_components(D: Digraph) -> tuple[list[list[int]], list[int]]:
    """Tarjan's algorithm, iterative.

    Returns the components listed in a topological order of the condensation
    (no edge goes from a later component to an earlier one) and, per node,
    the index of its component in that list.
    """
    index = [-1] * D.n
    low = [0] * D.n
    on_stack = [False] * D.n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(D.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            outs = D.out_edges[v]
            if i < len(outs):
                work[-1] = (v, i + 1)
                w = D.edges[outs[i]][1]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    comps.reverse()
    comp_of = [0] * D.n
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    return comps, comp_of


def is_strongly_connected(D: Digraph) -> bool:
    return D.n > 0 and len(strong_components(D)[0]) == 1


def weak_components(D: Digraph) -> list[list[int]]:
    seen = [False] * D.n
    comps = []
    for s in range(D.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            u = queue.popleft()
            comp.append(u)
            for _, v in D.incident[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def cyclic_edges(D: Digraph) -> frozenset[int]:
    """Edges lying on some di-circuit (both ends in one strong component)."""
    _, comp_of = strong_components(D)
    return frozenset(i for i, (t, h) in enumerate(D.edges) if comp_of[t] == comp_of[h])


def topological_order(D: Digraph) -> list[int] | Circuit:
    """A topological order, or a di-circuit proving that none exists."""
    indeg = [len(D.in_edges[v]) for v in range(D.n)]
    queue = deque(v for v in range(D.n) if indeg[v] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for e in D.out_edges[u]:
            v = D.edges[e][1]
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(order) == D.n:
        return order
    # Every leftover node keeps an entering edge from another leftover node;
    # walking those edges backwards must close a di-circuit.
    left = set(range(D.n)) - set(order)
    v = min(left)
    pos: dict[int, int] = {}
    walk_nodes: list[int] = []
    walk_edges: list[int] = []
    while v not in pos:
        pos[v] = len(walk_nodes)
        walk_nodes.append(v)
        e = next(e for e in D.in_edges[v] if D.edges[e][0] in left)
        walk_edges.append(e)
        v = D.edges[e][0]
    i = pos[v]
    nodes = walk_nodes[i:][::-1]
    edges = walk_edges[i:][::-1]
    # edges[j] enters nodes[j] (walking backward); rotate so edges[j] leaves nodes[j]
    nodes = nodes[-1:] + nodes[:-1]
    return Circuit(tuple(nodes), tuple(edges), (True,) * len(edges)).as_dicircuit()


def find_path(D: Digraph, source: int, targets: Iterable[int], allowed: Iterable[int] | None = None):
    """BFS for a directed path from ``source`` to some other node in ``targets``.

    Returns ``(nodes, edges)`` or ``None``. ``allowed`` restricts usable edges.
    """
    targets = set(targets) - {source}
    allowed_set = None if allowed is None else set(allowed)
    parent: dict[int, tuple[int, int] | None] = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if u in targets:
            nodes, edges = [u], []
            while parent[u] is not None:
                u, e = parent[u]
                edges.append(e)
                nodes.append(u)
            return nodes[::-1], edges[::-1]
        for e in D.out_edges[u]:
            if allowed_set is not None and e not in allowed_set:
                continue
            v = D.edges[e][1]
            if v not in parent:
                parent[v] = (u, e)
                queue.append(v)
    return None


def reachable(D: Digraph, source: int, allowed: Iterable[int] | None = None) -> set[int]:
    allowed_set = None if allowed is None else set(allowed)
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for e in D.out_edges[u]:
            if allowed_set is not None and e not in allowed_set:
                continue
            v = D.edges[e][1]
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def is_stable(D: Digraph, S: Iterable[int]) -> int | None:
    """``None`` if ``S`` is stable, else the id of an edge inside ``S``."""
    S = set(S)
    for i, (t, h) in enumerate(D.edges):
        if t in S and h in S:
            return i
    return None
