import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dicycle, digraphs, strong_digraphs
from sinkstable.certificates import DicutFamily, Partition
from sinkstable.graph_core import Digraph, enumerate_dicircuits
from sinkstable.optimize import (
    Arc,
    Circulation,
    FlowNetwork,
    Infeasible,
    cover_by_alpha_dicircuits,
    decompose_circulation,
    gallai_min_max,
    greene_kleitman,
    k_union_max_F,
    k_union_max_sink,
    max_F_stable,
    max_sink_stable,
    min_cost_circulation,
)
from sinkstable.oracles import (
    all_posets,
    alpha,
    circuit_condition,
    circuit_cover_cost,
    dicircuit_condition,
    gallai_primal,
    is_stable_set,
    max_k_antichain_union,
    max_weight_subset,
    min_cost_circulation_brute,
)
from sinkstable.stability import flat_transversal

weights = st.lists(st.integers(0, 2), min_size=8, max_size=8)


def _no_isolated(D):
    return all(D.incident[v] for v in range(D.n))


# ------------------------------------------------------------- circulations


@st.composite
def networks(draw):
    n = draw(st.integers(2, 4))
    arcs = []
    free = 0
    for _ in range(draw(st.integers(1, 5))):
        t, h = draw(st.sampled_from([(u, v) for u in range(n) for v in range(n) if u != v]))
        lower = draw(st.integers(0, 1))
        bounded = free >= 2 or draw(st.booleans())
        free += not bounded
        upper = draw(st.integers(lower, 3)) if bounded else None
        cost = draw(st.integers(-2, 2)) if bounded else draw(st.integers(0, 2))
        arcs.append(Arc(t, h, lower, upper, cost))
    return FlowNetwork(n, tuple(arcs))


@given(networks())
@settings(max_examples=150, deadline=None)
def test_circulation_against_brute_force(net):
    res = min_cost_circulation(net)
    best = min_cost_circulation_brute(net)
    if isinstance(res, Infeasible):
        assert best is None
        into = sum(a.lower for a in net.arcs if a.head in res.X and a.tail not in res.X)
        assert into == res.demand_in > res.capacity_out
    else:
        assert res.cost == best
        bal = [0] * net.n
        for a, f in zip(net.arcs, res.flow):
            assert a.lower <= f and (a.upper is None or f <= a.upper)
            bal[a.head] += f
            bal[a.tail] -= f
        assert not any(bal)


def test_infeasible_lower_bound():
    net = FlowNetwork(2, (Arc(0, 1, lower=2), Arc(1, 0, upper=1)))
    res = min_cost_circulation(net)
    assert isinstance(res, Infeasible)
    assert (res.demand_in, res.capacity_out) == (2, 1)


def test_negative_unbounded_arc_rejected():
    with pytest.raises(ValueError):
        FlowNetwork(2, (Arc(0, 1, cost=-1),))


def test_negative_cycle_saturates():
    net = FlowNetwork(2, (Arc(0, 1, upper=3, cost=-2), Arc(1, 0, cost=1)))
    res = min_cost_circulation(net)
    assert isinstance(res, Circulation) and res.flow == (3, 3) and res.cost == -3


@given(strong_digraphs(max_n=5), st.data())
@settings(max_examples=60, deadline=None)
def test_decomposition_resums(D, data):
    z = [0] * D.m
    for K in enumerate_dicircuits(D):
        y = data.draw(st.integers(0, 2))
        for e in K.edges:
            z[e] += y
    parts = decompose_circulation(D, z)
    again = [0] * D.m
    for K, y in parts:
        assert K.is_dicircuit and y > 0
        for e in K.edges:
            again[e] += y
    assert again == z


def test_decomposition_rejects_imbalance(square):
    with pytest.raises(ValueError):
        decompose_circulation(square, [1, 0, 0, 0])


# ------------------------------------------------------------------ Gallai


def test_triangle_gallai():
    res = gallai_min_max(dicycle(3), [1, 1, 1])
    assert res.primal_value == res.dual_value == 3


def test_gallai_needs_cyclic_nodes(square):
    with pytest.raises(ValueError):
        gallai_min_max(square, [1] * 4)


@given(strong_digraphs(max_n=4), st.data())
@settings(max_examples=50, deadline=None)
def test_gallai_against_multiset_search(D, data):
    c = data.draw(st.lists(st.integers(0, 2), min_size=D.m, max_size=D.m))
    w = data.draw(st.lists(st.integers(0, 2), min_size=D.n, max_size=D.n))
    res = gallai_min_max(D, c, w)
    assert res.equal
    assert res.primal_value == gallai_primal(D, c, w)


# ---------------------------------------------------------------- F-stable


@given(strong_digraphs(max_n=6), weights)
@settings(max_examples=60, deadline=None)
def test_max_F_stable_against_subsets(D, w):
    w = w[: D.n]
    F = flat_transversal(D)
    res = max_F_stable(D, F, w)
    best, _ = max_weight_subset(range(D.n), w, lambda X: dicircuit_condition(D, F, X) is None)
    assert res.equal and res.primal_value == best
    assert isinstance(res.partition, Partition)


@given(strong_digraphs(max_n=5), st.integers(2, 3), weights)
@settings(max_examples=50, deadline=None)
def test_k_union_F_against_subsets(D, k, w):
    w = w[: D.n]
    F = flat_transversal(D)
    res = k_union_max_F(D, F, w, k)
    best, _ = max_weight_subset(range(D.n), w, lambda X: dicircuit_condition(D, F, X, k) is None)
    assert res.equal and res.primal_value == best


def test_weight_scaling():
    D = Digraph(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0)))
    F = flat_transversal(D)
    w = [1, 2, 1, 1]
    assert max_F_stable(D, F, [2 * x for x in w]).primal_value == 2 * max_F_stable(D, F, w).primal_value


# ------------------------------------------------------------- sink-stable


def test_fan_max_sink_stable(fan):
    res = max_sink_stable(fan)
    assert res.primal == frozenset({1, 2, 3}) and res.primal_value == res.dual_value == 3
    (C, y), = res.circuits
    assert (C.eta, y) == (2, 1)
    assert [y for _, y in res.edges] == [1]
    assert circuit_cover_cost(fan, allow_edges=False) == 4


def test_square_max_sink(square):
    assert max_sink_stable(square).primal_value == 1


def test_square_two_classes(square):
    res = k_union_max_sink(square, k=2)
    assert res.primal_value == res.dual_value == 2
    (C, y), = res.circuits
    assert C.eta == 1 and y == 1 and not res.uncovered


def test_isolated_node_rejected():
    with pytest.raises(ValueError):
        max_sink_stable(Digraph(3, ((0, 1),)))


@given(digraphs(min_n=2, max_n=6).filter(_no_isolated), weights)
@settings(max_examples=60, deadline=None)
def test_max_sink_against_subsets(D, w):
    w = w[: D.n]
    res = max_sink_stable(D, w)
    best, _ = max_weight_subset(
        range(D.n), w, lambda X: is_stable_set(D, X) and circuit_condition(D, X) is None
    )
    assert res.equal and res.primal_value == best
    assert isinstance(res.partition.families[0], DicutFamily)


@given(digraphs(min_n=2, max_n=5).filter(_no_isolated))
@settings(max_examples=40, deadline=None)
def test_unit_weight_dual_is_cheapest_cover(D):
    assert max_sink_stable(D).dual_value == circuit_cover_cost(D, allow_edges=True)


@given(digraphs(min_n=2, max_n=5).filter(_no_isolated), st.integers(2, 3), weights)
@settings(max_examples=50, deadline=None)
def test_k_union_sink_against_subsets(D, k, w):
    w = w[: D.n]
    res = k_union_max_sink(D, w, k)
    best, _ = max_weight_subset(range(D.n), w, lambda X: circuit_condition(D, X, k) is None)
    assert res.equal and res.primal_value == best


# ------------------------------------------------------------ alpha covers


def test_triangle_alpha_cover():
    res = cover_by_alpha_dicircuits(dicycle(3))
    assert res.extra["family_size"] == 1 == alpha(dicycle(3))


@given(strong_digraphs(max_n=6))
@settings(max_examples=50, deadline=None)
def test_alpha_cover(D):
    res = cover_by_alpha_dicircuits(D)
    assert res.extra["family_size"] <= alpha(D)
    covered = set()
    for K, y, _ in res.dicircuits:
        covered |= K.node_set
    assert covered == set(range(D.n))


# -------------------------------------------------------- Greene-Kleitman


def test_chain_of_four():
    P = Digraph(4, tuple((i, j) for i in range(4) for j in range(i + 1, 4)))
    assert [greene_kleitman(P, k).value for k in (1, 2, 3)] == [1, 2, 3]


def test_antichain():
    P = Digraph(3, ())
    res = greene_kleitman(P, 1)
    assert res.value == 3
    assert res.value == len(res.chains) and all(len(ch) == 1 for ch in res.chains)


def test_poset_must_be_transitive():
    with pytest.raises(ValueError):
        greene_kleitman(Digraph(3, ((0, 1), (1, 2))), 1)


@pytest.mark.parametrize("k", [1, 2])
def test_small_posets(k):
    for P in all_posets(4):
        res = greene_kleitman(P, k)
        assert res.value == max_k_antichain_union(P, k)
        on_chains = {v for ch in res.chains for v in ch}
        assert res.value == k * len(res.chains) + P.n - len(on_chains)
