"""Feasible potentials, negative di-circuits and tension reconstruction."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from .graph_core import Circuit, Digraph, weak_components


class NotATension(ValueError):
    """Raised when an edge function is not a potential difference.

    ``circuit`` is a circuit whose forward and backward sums differ.
    """

    def __init__(self, circuit: Circuit, forward_sum: int, backward_sum: int):
        super().__init__(
            f"not a tension: circuit {circuit.nodes} has forward sum {forward_sum} "
            f"and backward sum {backward_sum}"
        )
        self.circuit = circuit
        self.forward_sum = forward_sum
        self.backward_sum = backward_sum


def _cost_list(D: Digraph, c: Mapping[int, int] | Sequence[int]) -> list[int]:
    if isinstance(c, Mapping):
        costs = [0] * D.m
        for e, val in c.items():
            e = int(e)
            if not 0 <= e < D.m:
                raise ValueError(f"cost given for unknown edge {e}")
            costs[e] = val
    else:
        costs = list(c)
        if len(costs) != D.m:
            raise ValueError(f"expected {D.m} edge costs, got {len(costs)}")
    for val in costs:
        if isinstance(val, bool) or int(val) != val:
            raise ValueError("costs must be integers")
    return [int(v) for v in costs]


def normalize(D: Digraph, pi: list[int]) -> list[int]:
    """Shift ``pi`` so that its minimum is 0 on every weakly connected component."""
    pi = list(pi)
    for comp in weak_components(D):
        low = min(pi[v] for v in comp)
        for v in comp:
            pi[v] -= low
    return pi


def cycle_cost(c: Sequence[int], K: Circuit) -> int:
    return sum(c[e] for e in K.edges)


def feasible_potential(D: Digraph, c: Mapping[int, int] | Sequence[int]) -> list[int] | Circuit:
    """Either an integer potential with ``pi[h] - pi[t] <= c[e]`` on every edge,
    or a di-circuit of negative total cost.

    Bellman-Ford from a virtual source joined to every node at cost 0. The
    potential is normalized to minimum 0 per weakly connected component.
    """
    costs = _cost_list(D, c)
    dist = [0] * D.n
    pred: list[int | None] = [None] * D.n
    last = None
    for _ in range(D.n + 1):
        last = None
        for e, (t, h) in enumerate(D.edges):
            nd = dist[t] + costs[e]
            if nd < dist[h]:
                dist[h] = nd
                pred[h] = e
                last = h
        if last is None:
            break
    if last is None:
        pi = normalize(D, dist)
        assert all(pi[h] - pi[t] <= costs[e] for e, (t, h) in enumerate(D.edges))
        return pi

    # A relaxation in round n+1 means the predecessor graph holds a cycle; n
    # steps back from the last relaxed node are guaranteed to land on it.
    v = last
    for _ in range(D.n):
        v = D.edges[pred[v]][0]
    nodes, edges = [], []
    u = v
    while True:
        e = pred[u]
        nodes.append(u)
        edges.append(e)
        u = D.edges[e][0]
        if u == v:
            break
    nodes.reverse()
    edges.reverse()
    # edges[i] now enters nodes[i]; shift so that edges[i] leaves nodes[i]
    nodes = nodes[-1:] + nodes[:-1]
    K = Circuit(tuple(nodes), tuple(edges), (True,) * len(edges)).as_dicircuit()
    assert cycle_cost(costs, K) < 0, "predecessor cycle is not negative"
    return K


def reduced_costs(D: Digraph, c: Sequence[int], pi: Sequence[int]) -> list[int]:
    """``c_pi(uv) = c(uv) - pi(v) + pi(u)``; non-negative when ``pi`` is feasible."""
    return [c[e] - pi[h] + pi[t] for e, (t, h) in enumerate(D.edges)]


def potential_from_tension(D: Digraph, x: Mapping[int, int] | Sequence[int]) -> list[int]:
    """An integer potential whose difference is exactly ``x`` on every edge.

    Runs the feasibility test on ``D`` plus opposite edges carrying ``-x``.
    Raises ``NotATension`` with a witnessing circuit of ``D`` otherwise.
    """
    xs = _cost_list(D, x)
    both = Digraph(D.n, D.edges + tuple((h, t) for t, h in D.edges))
    res = feasible_potential(both, xs + [-v for v in xs])
    if isinstance(res, Circuit):
        C = Circuit.from_walk(D, res.nodes, [e % D.m for e in res.edges]).canonical()
        fw = sum(xs[e] for e, f in zip(C.edges, C.forward) if f)
        bw = sum(xs[e] for e, f in zip(C.edges, C.forward) if not f)
        raise NotATension(C, fw, bw)
    assert all(res[h] - res[t] == xs[e] for e, (t, h) in enumerate(D.edges))
    return res
