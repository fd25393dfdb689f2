"""Resonant face sets of plane bipartite graphs via the oriented planar dual.

Faces become nodes of a dual digraph whose edges keep the ids of the primal
edges they cross. A perfect matching ``M`` gives the flat edge set ``F`` (the
duals of ``M``), and resonant face sets are exactly the F-stable sets there.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

from .graph_core import Digraph, is_strongly_connected
from .optimize import MinMaxResult, k_union_max_F, max_F_stable
from .stability import FLAT_VERIFY_MAX_N, is_flat


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class HallViolator:
    """Nodes on one side with fewer neighbours than members."""

    X: frozenset[int]
    neighbours: frozenset[int]
    kind = "hall_violator"

    def to_json(self) -> dict:
        return {"kind": self.kind, "X": sorted(self.X), "neighbours": sorted(self.neighbours)}


@dataclass(frozen=True)
class PlaneBipartiteGraph:
    """Bipartite plane graph given by its colour classes, edges and regions.

    ``faces`` lists the bounded regions and ``outer`` the unbounded one, each
    as a cyclic sequence of edge ids. Edges are stored as ``(s, t)`` with
    ``s`` in ``s_side``.
    """

    s_side: frozenset[int]
    t_side: frozenset[int]
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, ...], ...]
    outer: tuple[int, ...]

    def __post_init__(self):
        S, T = frozenset(self.s_side), frozenset(self.t_side)
        object.__setattr__(self, "s_side", S)
        object.__setattr__(self, "t_side", T)
        if S & T or S | T != frozenset(range(len(S) + len(T))):
            raise EmbeddingError("colour classes must partition the nodes 0..N-1")
        edges = []
        for i, (u, v) in enumerate(self.edges):
            if u in T and v in S:
                u, v = v, u
            if not (u in S and v in T):
                raise EmbeddingError(f"edge {i} does not join the two colour classes")
            edges.append((u, v))
        if len(set(edges)) != len(edges):
            raise EmbeddingError("parallel edges are not supported")
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "faces", tuple(tuple(f) for f in self.faces))
        object.__setattr__(self, "outer", tuple(self.outer))
        self._validate()

    @property
    def n(self) -> int:
        return len(self.s_side) + len(self.t_side)

    @property
    def regions(self) -> tuple[tuple[int, ...], ...]:
        return self.faces + (self.outer,)

    def digraph(self) -> Digraph:
        """The orientation from the S side to the T side."""
        return Digraph(self.n, self.edges)

    def boundary_nodes(self, r: int) -> tuple[int, ...]:
        return self.walks[r][0]

    @cached_property
    def walks(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """Per region, its boundary traversed so that every edge is met in
        opposite directions by its two regions: ``(nodes, edges)`` with edge
        ``i`` running from ``nodes[i]`` to ``nodes[i + 1]``."""
        raw = [_boundary_walk(self.edges, cyc, r) for r, cyc in enumerate(self.regions)]
        users: dict[int, list[int]] = {}
        for r, cyc in enumerate(self.regions):
            for e in cyc:
                users.setdefault(e, []).append(r)

        def step(r, flip, e):
            nodes, edges = raw[r]
            i = edges.index(e)
            a, b = nodes[i], nodes[(i + 1) % len(nodes)]
            return (b, a) if flip else (a, b)

        flip: dict[int, bool] = {0: False}
        queue = deque([0])
        while queue:
            r = queue.popleft()
            for e in self.regions[r]:
                other = next(x for x in users[e] if x != r)
                want = step(r, flip[r], e)[::-1]
                need = step(other, False, e) != want
                if other not in flip:
                    flip[other] = need
                    queue.append(other)
                elif flip[other] != need:
                    raise EmbeddingError(f"regions around edge {e} cannot be oriented coherently")
        if len(flip) != len(raw):
            raise EmbeddingError("region adjacency is disconnected")
        out = []
        for r, (nodes, edges) in enumerate(raw):
            if flip[r]:
                nodes = (nodes[0],) + tuple(reversed(nodes[1:]))
                edges = tuple(reversed(edges))
            out.append((nodes, edges))
        return tuple(out)

    def _validate(self) -> None:
        N, E = self.n, len(self.edges)
        count = [0] * E
        for r, cyc in enumerate(self.regions):
            for e in cyc:
                if not 0 <= e < E:
                    raise EmbeddingError(f"region {r} lists unknown edge {e}")
                count[e] += 1
        bad = [e for e in range(E) if count[e] != 2]
        if bad:
            raise EmbeddingError(f"edge {bad[0]} lies on {count[bad[0]]} region boundaries instead of 2")
        for r, cyc in enumerate(self.regions):
            if len(set(cyc)) != len(cyc):
                raise EmbeddingError(f"region {r} repeats an edge")
        if N - E + len(self.regions) != 2:
            raise EmbeddingError(f"Euler relation fails: {N} - {E} + {len(self.regions)} != 2")
        adj: list[list[int]] = [[] for _ in range(N)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen, stack = {0}, [0]
        while stack:
            for v in adj[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != N:
            raise EmbeddingError("graph is not connected")
        self.walks  # coherence of the region orientations

    def to_json(self) -> dict:
        return {
            "s_side": sorted(self.s_side),
            "t_side": sorted(self.t_side),
            "edges": [list(e) for e in self.edges],
            "faces": [list(f) for f in self.faces],
            "outer": list(self.outer),
        }

    @classmethod
    def from_json(cls, data: dict) -> PlaneBipartiteGraph:
        return cls(
            frozenset(data["s_side"]),
            frozenset(data["t_side"]),
            tuple(tuple(e) for e in data["edges"]),
            tuple(tuple(f) for f in data["faces"]),
            tuple(data["outer"]),
        )


def _boundary_walk(edges, cyc, r):
    if len(cyc) < 2:
        raise EmbeddingError(f"region {r} has fewer than two edges")
    first, second = set(edges[cyc[0]]), set(edges[cyc[1]])
    shared = first & second
    if len(shared) != 1:
        raise EmbeddingError(f"region {r}: edges {cyc[0]} and {cyc[1]} are not consecutive")
    (start,) = first - shared
    nodes = [start]
    v = start
    for e in cyc:
        a, b = edges[e]
        if v == a:
            v = b
        elif v == b:
            v = a
        else:
            raise EmbeddingError(f"region {r}: edge {e} does not continue the boundary")
        nodes.append(v)
    if nodes[-1] != start or len(set(nodes[:-1])) != len(cyc):
        raise EmbeddingError(f"region {r} is not bounded by a circuit")
    return tuple(nodes[:-1]), tuple(cyc)


# ---------------------------------------------------------------- matching


def perfect_matching(G: PlaneBipartiteGraph, removed: Iterable[int] = ()) -> frozenset[int] | HallViolator:
    """A perfect matching (as edge ids) of ``G`` minus ``removed``, or a set of
    nodes with too few neighbours."""
    removed = set(removed)
    S = sorted(G.s_side - removed)
    T = sorted(G.t_side - removed)
    inc: dict[int, list[tuple[int, int]]] = {v: [] for v in S + T}
    for e, (s, t) in enumerate(G.edges):
        if s in inc and t in inc:
            inc[s].append((e, t))
            inc[t].append((e, s))
    res = _kuhn(S, inc)
    if isinstance(res, HallViolator):
        return res
    if len(T) > len(S):
        res2 = _kuhn(T, inc)
        assert isinstance(res2, HallViolator)
        return res2
    return res


def _kuhn(left: list[int], inc) -> frozenset[int] | HallViolator:
    mate: dict[int, tuple[int, int]] = {}  # right node -> (edge, left node)

    def augment(u, seen):
        for e, v in inc[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in mate or augment(mate[v][1], seen):
                mate[v] = (e, u)
                return True
        return False

    for u in left:
        seen: set[int] = set()
        if not augment(u, seen):
            X = {u} | {mate[v][1] for v in seen}
            return HallViolator(frozenset(X), frozenset(seen))
    return frozenset(e for e, _ in mate.values())


def resonant_matching(G: PlaneBipartiteGraph, faces: Iterable[int]) -> frozenset[int] | None:
    """A perfect matching alternating around every listed face, or ``None``
    when deleting the faces leaves no perfect matching."""
    faces = sorted(set(faces))
    used: set[int] = set()
    for f in faces:
        if not 0 <= f < len(G.faces):
            raise ValueError(f"unknown face {f}")
        nodes = set(G.boundary_nodes(f))
        if used & nodes:
            raise ValueError(f"face {f} shares a node with another listed face")
        used |= nodes
    rest = perfect_matching(G, used)
    if isinstance(rest, HallViolator):
        return None
    M = set(rest)
    for f in faces:
        M |= set(G.walks[f][1][::2])
    M = frozenset(M)
    covered = [0] * G.n
    for e in M:
        for v in G.edges[e]:
            covered[v] += 1
    assert all(c == 1 for c in covered)
    return M


def check_resonant(G: PlaneBipartiteGraph, faces: Iterable[int]) -> bool:
    return resonant_matching(G, faces) is not None


# -------------------------------------------------------------- dual side


def dual_digraph(G: PlaneBipartiteGraph, M: Iterable[int] | None = None, verify: bool | None = None):
    """The oriented dual of the S-to-T orientation and the duals of ``M``.

    Node ``i < len(faces)`` is face ``i``; the last node is the outer region.
    Dual edge ``e`` crosses primal edge ``e`` and leaves the region whose
    boundary walk runs against that edge.
    """
    if M is None:
        M = perfect_matching(G)
        if isinstance(M, HallViolator):
            raise ValueError("graph has no perfect matching")
    side: dict[int, list[tuple[int, bool]]] = {}
    for r, (nodes, edges) in enumerate(G.walks):
        for i, e in enumerate(edges):
            along = (nodes[i], nodes[(i + 1) % len(nodes)]) == G.edges[e]
            side.setdefault(e, []).append((r, along))
    dual = []
    for e in range(len(G.edges)):
        (r1, a1), (r2, a2) = side[e]
        assert a1 != a2
        dual.append((r2, r1) if a1 else (r1, r2))
    names = tuple(f"f{i}" for i in range(len(G.faces))) + ("outer",)
    D = Digraph(len(G.faces) + 1, tuple(dual), names)
    F = frozenset(M)
    if not is_strongly_connected(D):
        raise EmbeddingError("dual digraph is not strongly connected")
    if verify is None:
        verify = D.n <= FLAT_VERIFY_MAX_N
    if verify and not is_flat(D, F):
        raise EmbeddingError("dual of the matching is not flat")
    return D, F


@dataclass(frozen=True)
class FeasibleCut:
    """Cut of ``G`` all of whose edges enter ``Z`` in the S-to-T orientation."""

    Z: frozenset[int]
    edges: frozenset[int]
    value: int
    faces: frozenset[int]

    def to_json(self) -> dict:
        return {"Z": sorted(self.Z), "edges": sorted(self.edges), "value": self.value, "faces": sorted(self.faces)}


def cut_from_dicircuit(G: PlaneBipartiteGraph, M: frozenset[int], K) -> FeasibleCut:
    """Read a di-circuit of the dual as a cut of ``G`` and measure it."""
    B = frozenset(K.edges)
    adj: list[list[int]] = [[] for _ in range(G.n)]
    for e, (u, v) in enumerate(G.edges):
        if e not in B:
            adj[u].append(v)
            adj[v].append(u)
    head = G.edges[min(B)][1]
    Z, stack = {head}, [head]
    while stack:
        for v in adj[stack.pop()]:
            if v not in Z:
                Z.add(v)
                stack.append(v)
    Z = frozenset(Z)
    crossing = {e for e, (u, v) in enumerate(G.edges) if (u in Z) != (v in Z)}
    assert crossing == B, "dual di-circuit is not a bond"
    assert all(v in Z and u not in Z for u, v in (G.edges[e] for e in B)), "cut is not a dicut"
    val = len(M & B)
    assert val == len(Z & G.t_side) - len(Z & G.s_side)
    outer = len(G.faces)
    return FeasibleCut(Z, B, val, frozenset(v for v in K.nodes if v != outer))


@dataclass(frozen=True)
class ClarResult:
    """Resonant faces (split into ``k`` classes) against feasible cuts.

    ``value = k * sum(cut values) + faces met by no cut``.
    """

    k: int
    value: int
    faces: frozenset[int]
    classes: tuple[frozenset[int], ...]
    cuts: tuple[tuple[FeasibleCut, int], ...]
    matchings: tuple[frozenset[int], ...]
    optimum: MinMaxResult
    kind = "clar"

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "k": self.k,
            "value": self.value,
            "faces": sorted(self.faces),
            "classes": [sorted(c) for c in self.classes],
            "cuts": [{**c.to_json(), "mult": y} for c, y in self.cuts],
            "matchings": [sorted(m) for m in self.matchings],
        }
        if self.k == 1:
            out["clar"] = self.value
        return out


def _solve(G: PlaneBipartiteGraph, k: int) -> ClarResult:
    M = perfect_matching(G)
    if isinstance(M, HallViolator):
        raise ValueError(f"graph has no perfect matching (Hall violator {sorted(M.X)})")
    D, F = dual_digraph(G, M)
    w = [1] * len(G.faces) + [0]
    res = max_F_stable(D, F, w, verify_flat=False) if k == 1 else k_union_max_F(D, F, w, k, verify_flat=False)
    faces = frozenset(res.primal)
    cuts = []
    for K, y, charge in res.dicircuits:
        cut = cut_from_dicircuit(G, M, K)
        assert cut.value == charge // k
        cuts.append((cut, y))
    met = set()
    for cut, _ in cuts:
        met |= cut.faces
    dual = k * sum(c.value * y for c, y in cuts) + (len(G.faces) - len(met))
    assert dual == len(faces), (dual, len(faces))
    classes = tuple(frozenset(c) for c in res.partition.classes)
    matchings = []
    for cls in classes:
        Mc = resonant_matching(G, cls)
        assert Mc is not None, f"class {sorted(cls)} is not resonant"
        matchings.append(Mc)
    return ClarResult(k, len(faces), faces, classes, tuple(cuts), tuple(matchings), res)


def clar_number(G: PlaneBipartiteGraph) -> ClarResult:
    """Largest resonant face set, with feasible cuts meeting every face whose
    total value equals its size."""
    return _solve(G, 1)


def k_resonant_max(G: PlaneBipartiteGraph, k: int) -> ClarResult:
    """Most faces splittable into ``k`` resonant sets, against feasible cuts
    charged ``k`` times their value plus one per face they miss."""
    if k < 2:
        raise ValueError("k must be at least 2; use clar_number for k = 1")
    return _solve(G, k)
