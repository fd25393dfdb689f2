import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dicycle, digraphs, strong_digraphs
from sinkstable.certificates import DicutFamily, Partition, ViolatingCircuit, ViolatingDiCircuit
from sinkstable.graph_core import Digraph, doubled, enumerate_dicircuits, is_stable, reverse_edges
from sinkstable.oracles import (
    circuit_condition,
    dicircuit_condition,
    f_stable_by_search,
    is_stable_set,
    k_sink_stable_by_search,
    sink_stable_by_search,
)
from sinkstable.stability import (
    CyclicOrder,
    NotStrong,
    SNotStable,
    bondy_chromatic_bound,
    check_cyclic_stable,
    check_F_stable_union,
    check_sink_stable,
    coherent_cyclic_order,
    flat_transversal,
    index,
    is_coherent,
    is_flat,
    is_transversal,
    min_F_stable_cover_number,
    partition_k_sink_stable,
)

TRIANGLE = dicycle(3)


def _sinks_after(D, fam):
    Dr = reverse_edges(D, fam.edges(D))
    return {v for v in range(D.n) if not Dr.out_edges[v]}


# ------------------------------------------------------------- sink-stable


@pytest.mark.parametrize("v", "abcd")
def test_square_singletons(square, v):
    fam = check_sink_stable(square, [v])
    assert isinstance(fam, DicutFamily)
    assert square.node_id(v) in _sinks_after(square, fam)


def test_square_pair_violates(square):
    cert = check_sink_stable(square, ["a", "c"])
    assert isinstance(cert, ViolatingCircuit)
    assert (cert.hits, cert.circuit.eta) == (2, 1)
    cert.validate(square, S={0, 2})


def test_sinks_need_no_flips(fan):
    sinks = [v for v in range(fan.n) if not fan.out_edges[v]]
    assert check_sink_stable(fan, sinks) == DicutFamily(())


def test_fan_largest(fan):
    fam = check_sink_stable(fan, "bcd")
    assert {1, 2, 3} <= _sinks_after(fan, fam)


def test_adjacent_set_is_an_input_error(square):
    with pytest.raises(SNotStable) as info:
        check_sink_stable(square, "ab")
    assert info.value.edge == 0


@given(digraphs(max_n=6), st.data())
@settings(max_examples=120, deadline=None)
def test_checker_agrees_with_circuits(D, data):
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    if not is_stable_set(D, S):
        with pytest.raises(SNotStable):
            check_sink_stable(D, S)
        return
    res = check_sink_stable(D, S)
    assert isinstance(res, DicutFamily) == (circuit_condition(D, S) is None)
    if isinstance(res, DicutFamily):
        res.validate(D)
        assert S <= _sinks_after(D, res)
    else:
        res.validate(D, S=S)


@given(digraphs(max_n=5), st.data())
@settings(max_examples=60, deadline=None)
def test_checker_agrees_with_reorientation_search(D, data):
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    if is_stable_set(D, S):
        assert isinstance(check_sink_stable(D, S), DicutFamily) == sink_stable_by_search(D, S)


@given(digraphs(max_n=6), st.data())
@settings(max_examples=60, deadline=None)
def test_subsets_of_stable_sets_stay_stable(D, data):
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    if not is_stable_set(D, S) or not isinstance(check_sink_stable(D, S), DicutFamily):
        return
    T = data.draw(st.frozensets(st.sampled_from(sorted(S)))) if S else frozenset()
    assert isinstance(check_sink_stable(D, T), DicutFamily)


# -------------------------------------------------------------- k classes


def test_square_split_pair(square):
    part = partition_k_sink_stable(square, "ac", 2)
    assert isinstance(part, Partition)
    assert sorted(map(sorted, filter(None, part.classes))) == [[0], [2]]


def test_square_everything_violates_for_two(square):
    cert = partition_k_sink_stable(square, "abcd", 2)
    assert isinstance(cert, ViolatingCircuit)
    assert cert.hits == 4 and cert.circuit.eta == 1


def test_empty_set_partition(square):
    part = partition_k_sink_stable(square, (), 3)
    assert isinstance(part, Partition) and not any(part.classes)


def test_k_must_be_two_or_more(square):
    with pytest.raises(ValueError):
        partition_k_sink_stable(square, "a", 1)


@given(digraphs(max_n=6), st.integers(2, 3), st.data())
@settings(max_examples=100, deadline=None)
def test_partition_agrees_with_circuits(D, k, data):
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    res = partition_k_sink_stable(D, S, k)
    assert isinstance(res, Partition) == (circuit_condition(D, S, k) is None)
    if isinstance(res, Partition):
        res.validate(D, S)
        for cls in res.classes:
            assert is_stable(D, cls) is None
            assert isinstance(check_sink_stable(D, cls), DicutFamily)
    else:
        res.validate(D, S=S)


@given(digraphs(max_n=4), st.data())
@settings(max_examples=40, deadline=None)
def test_partition_agrees_with_class_search(D, data):
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    assert isinstance(partition_k_sink_stable(D, S, 2), Partition) == k_sink_stable_by_search(D, S, 2)


@given(digraphs(min_n=2, max_n=5), st.integers(1, 3), st.data())
@settings(max_examples=60, deadline=None)
def test_doubling_turns_sink_stability_into_F_stability(D, k, data):
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    if k == 1 and not is_stable_set(D, S):
        return
    Dd, copies = doubled(D)
    direct = partition_k_sink_stable(D, S, k) if k > 1 else check_sink_stable(D, S)
    via = check_F_stable_union(Dd, copies, S, k)
    assert isinstance(via, Partition) == isinstance(direct, (Partition, DicutFamily))


# ------------------------------------------------------------------ flatness


def test_acyclic_needs_no_transversal(square):
    assert flat_transversal(square) == frozenset()


def test_triangle_transversal():
    assert len(flat_transversal(TRIANGLE)) == 1


def test_complete_three_node_digraph():
    D = Digraph(3, ((0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)))
    F = flat_transversal(D)
    assert is_flat(D, F)
    assert not is_flat(D, range(6))  # every di-circuit picks up two


@given(strong_digraphs(max_n=7))
@settings(max_examples=80, deadline=None)
def test_transversal_is_flat_by_enumeration(D):
    F = flat_transversal(D)
    dicircuits = list(enumerate_dicircuits(D))
    assert all(F & K.edge_set for K in dicircuits)
    for e in range(D.m):
        assert any(e in K.edge_set and len(F & K.edge_set) == 1 for K in dicircuits)
    assert is_flat(D, F) and is_transversal(D, F)


@given(digraphs(max_n=6), st.data())
@settings(max_examples=60, deadline=None)
def test_flatness_against_enumeration(D, data):
    F = data.draw(st.frozensets(st.integers(0, D.m - 1))) if D.m else frozenset()
    dicircuits = list(enumerate_dicircuits(D))
    cyclic = set().union(*(K.edge_set for K in dicircuits)) if dicircuits else set()
    expected = all(any(e in K.edge_set and len(F & K.edge_set) == 1 for K in dicircuits) for e in cyclic)
    assert is_flat(D, F) == expected
    assert is_transversal(D, F) == all(F & K.edge_set for K in dicircuits)


# ---------------------------------------------------------------- F-stable


def test_empty_set_is_F_stable():
    assert isinstance(check_F_stable_union(TRIANGLE, {0}, (), 1), Partition)


def test_two_cycle_against_search():
    D = Digraph(2, ((0, 1), (1, 0)))
    res = check_F_stable_union(D, {1}, {0}, 1)
    assert isinstance(res, Partition) == f_stable_by_search(D, {1}, {0})
    assert isinstance(res, Partition)


def test_needs_strong_components():
    with pytest.raises(NotStrong):
        check_F_stable_union(Digraph(2, ((0, 1),)), (), {0})


def test_rejects_non_flat():
    D = Digraph(3, ((0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)))
    with pytest.raises(ValueError):
        check_F_stable_union(D, range(6), {0})


@given(strong_digraphs(max_n=7), st.integers(1, 3), st.data())
@settings(max_examples=80, deadline=None)
def test_F_stable_agrees_with_dicircuits(D, k, data):
    F = flat_transversal(D)
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    res = check_F_stable_union(D, F, S, k)
    assert isinstance(res, Partition) == (dicircuit_condition(D, F, S, k) is None)
    if isinstance(res, ViolatingDiCircuit):
        res.validate(D, S, F)
    else:
        res.validate(reverse_edges(D, F), S)


@given(strong_digraphs(max_n=4), st.data())
@settings(max_examples=30, deadline=None)
def test_F_stable_agrees_with_search(D, data):
    F = flat_transversal(D)
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    assert isinstance(check_F_stable_union(D, F, S, 1), Partition) == f_stable_by_search(D, F, S)


# ------------------------------------------------------------- cover number


def test_cover_number_of_empty_set():
    assert min_F_stable_cover_number(TRIANGLE, {0}, ()).k == 0


def test_triangle_cover_number():
    res = min_F_stable_cover_number(TRIANGLE, {0}, range(3))
    assert res.k == 3
    assert res.witness.hits == 3 and res.witness.f_count == 1


def test_cover_needs_transversal():
    with pytest.raises(ValueError):
        min_F_stable_cover_number(TRIANGLE, (), {0})


@given(strong_digraphs(max_n=7), st.data())
@settings(max_examples=60, deadline=None)
def test_cover_number_is_max_ratio(D, data):
    F = flat_transversal(D)
    S = data.draw(st.frozensets(st.integers(0, D.n - 1), min_size=1))
    ratio = max(math.ceil(len(S & K.node_set) / len(F & K.edge_set)) for K in enumerate_dicircuits(D))
    res = min_F_stable_cover_number(D, F, S)
    assert res.k == max(ratio, 1)
    assert len(res.partition.classes) == res.k
    if res.k > 1:
        res.witness.validate(D, S, F)


def test_bondy_triangle():
    res = bondy_chromatic_bound(TRIANGLE)
    assert res.k == 3 and all(len(c) == 1 for c in res.partition.classes)


def test_bondy_four_cycle():
    res = bondy_chromatic_bound(dicycle(4))
    assert res.k <= 4
    for cls in res.partition.classes:
        assert is_stable(dicycle(4), cls) is None


def test_bondy_needs_strong():
    with pytest.raises(NotStrong):
        bondy_chromatic_bound(Digraph(2, ((0, 1),)))


@given(strong_digraphs(max_n=7))
@settings(max_examples=60, deadline=None)
def test_bondy_bound(D):
    res = bondy_chromatic_bound(D)
    longest = max(len(K) for K in enumerate_dicircuits(D))
    assert res.k <= longest
    assert sorted(v for c in res.partition.classes for v in c) == list(range(D.n))
    assert all(is_stable(D, c) is None for c in res.partition.classes)


# ------------------------------------------------------------ cyclic orders


@pytest.mark.parametrize("n", range(3, 9))
def test_cycle_index_both_ways(n):
    D = dicycle(n)
    (K,) = list(enumerate_dicircuits(D))
    assert index(D, coherent_cyclic_order(D), K) == 1
    backwards = CyclicOrder.from_sequence(D, [0, *range(n - 1, 0, -1)])
    assert index(D, backwards, K) == n - 1
    assert not is_coherent(D, backwards)


@pytest.mark.parametrize("seq", [[0, 1], [1, 0]])
def test_two_cycle_winds_once(seq):
    D = Digraph(2, ((0, 1), (1, 0)))
    (K,) = list(enumerate_dicircuits(D))
    assert index(D, CyclicOrder.from_sequence(D, seq), K) == 1


def test_index_needs_dicircuit(square):
    from sinkstable.graph_core import enumerate_circuits

    (C,) = list(enumerate_circuits(square))
    with pytest.raises(ValueError):
        index(square, CyclicOrder.from_sequence(square, "abcd"), C)


def test_triangle_one_node_is_cyclic_stable():
    order = coherent_cyclic_order(TRIANGLE)
    assert isinstance(check_cyclic_stable(TRIANGLE, order, {0}), Partition)
    assert isinstance(check_cyclic_stable(TRIANGLE, order, ()), Partition)


@given(strong_digraphs(max_n=7), st.integers(1, 2), st.data())
@settings(max_examples=50, deadline=None)
def test_coherent_order_and_delegation(D, k, data):
    order = coherent_cyclic_order(D)
    dicircuits = list(enumerate_dicircuits(D))
    for e in range(D.m):
        assert any(e in K.edge_set and index(D, order, K) == 1 for K in dicircuits)
    S = data.draw(st.frozensets(st.integers(0, D.n - 1)))
    a = check_cyclic_stable(D, order, S, k)
    b = check_F_stable_union(D, order.backward_edges, S, k)
    assert type(a) is type(b)
    expected = all(len(S & K.node_set) <= k * index(D, order, K) for K in dicircuits)
    assert isinstance(a, Partition) == expected
