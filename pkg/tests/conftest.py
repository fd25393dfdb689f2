import json
from pathlib import Path

import pytest
from hypothesis import strategies as st

from sinkstable.clar import PlaneBipartiteGraph
from sinkstable.graph_core import Digraph, is_strongly_connected

DATA = Path(__file__).resolve().parent.parent / "data"


def load_digraph(name: str) -> Digraph:
    return Digraph.from_json(json.loads((DATA / name).read_text()))


def load_plane(name: str) -> PlaneBipartiteGraph:
    return PlaneBipartiteGraph.from_json(json.loads((DATA / name).read_text()))


@pytest.fixture
def square() -> Digraph:
    return load_digraph("square.json")


@pytest.fixture
def fan() -> Digraph:
    return load_digraph("fan.json")


@pytest.fixture
def cube() -> PlaneBipartiteGraph:
    return load_plane("cube.json")


def dicycle(n: int) -> Digraph:
    return Digraph(n, tuple((i, (i + 1) % n) for i in range(n)))


@st.composite
def digraphs(draw, min_n=1, max_n=6, density=None, simple=True):
    """Random digraphs; ``simple`` forbids parallel edges (opposite pairs allowed)."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if simple:
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        edges = [p for p, keep in zip(pairs, mask) if keep]
    else:
        edges = draw(st.lists(st.sampled_from(pairs), max_size=3 * n)) if pairs else []
    return Digraph(n, tuple(edges))


@st.composite
def strong_digraphs(draw, min_n=2, max_n=6):
    """Strongly connected: a Hamiltonian di-circuit plus random chords."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    edges = {(perm[i], perm[(i + 1) % n]) for i in range(n)}
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and (u, v) not in edges]
    extra = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    D = Digraph(n, tuple(sorted(edges | set(extra))))
    assert is_strongly_connected(D)
    return D


@st.composite
def digraph_and_set(draw, graphs=None):
    D = draw(graphs or digraphs())
    S = draw(st.frozensets(st.integers(0, D.n - 1))) if D.n else frozenset()
    return D, S


ACCEPTANCE: dict[str, str] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
