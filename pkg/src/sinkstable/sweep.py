"""Cross-check every solver against enumeration on one digraph at a time.

``verify_digraph`` returns a list of failure messages (empty when all checks
agree); ``exhaustive_sweep`` and ``random_sweep`` drive it over families of
digraphs and report timings.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from .certificates import DicutFamily, Partition
from .graph_core import Digraph, enumerate_circuits, enumerate_dicircuits, strong_components
from .oracles import all_digraphs, is_stable_set, max_weight_subset, subsets
from .optimize import (
    cover_by_alpha_dicircuits,
    gallai_min_max,
    k_union_max_F,
    k_union_max_sink,
    max_F_stable,
    max_sink_stable,
)
from .stability import (
    bondy_chromatic_bound,
    check_sink_stable,
    flat_transversal,
    partition_k_sink_stable,
)


@dataclass
class SweepConfig:
    ks: tuple[int, ...] = (2, 3)
    subset_search_max_n: int = 7
    seed: int = 0


def induced(D: Digraph, nodes) -> Digraph:
    nodes = sorted(nodes)
    new = {v: i for i, v in enumerate(nodes)}
    return Digraph(len(nodes), tuple((new[t], new[h]) for t, h in D.edges if t in new and h in new))


def _violates(circuits, S, k) -> bool:
    return any(len(S & C.node_set) > k * C.eta for C in circuits)


def _violates_F(dicircuits, F, S, k) -> bool:
    return any(len(S & K.node_set) > k * len(F & K.edge_set) for K in dicircuits)


def _check_conditions(D, circuits, cfg, fails):
    for S in subsets(range(D.n)):
        if is_stable_set(D, S):
            ok = isinstance(check_sink_stable(D, S), DicutFamily)
            if ok == _violates(circuits, S, 1):
                fails.append(f"(a) S={sorted(S)}")
        for k in cfg.ks:
            ok = isinstance(partition_k_sink_stable(D, S, k), Partition)
            if ok == _violates(circuits, S, k):
                fails.append(f"(b) k={k} S={sorted(S)}")


def _check_sink_solvers(D, circuits, cfg, fails):
    core = [v for v in range(D.n) if D.incident[v]]
    if len(core) < 2:
        return
    H = induced(D, core)
    Hc = [C for C in enumerate_circuits(H)] if len(core) < D.n else circuits
    res = max_sink_stable(H)
    if not res.equal:
        fails.append("(c) max_sink_stable duality gap")
    search = H.n <= cfg.subset_search_max_n
    if search:
        best, _ = max_weight_subset(
            range(H.n), [1] * H.n, lambda X: is_stable_set(H, X) and not _violates(Hc, X, 1)
        )
        if best != res.primal_value:
            fails.append(f"(c) max_sink_stable {res.primal_value} != {best}")
    for k in cfg.ks:
        res = k_union_max_sink(H, None, k)
        if not res.equal:
            fails.append(f"(c) k_union_max_sink k={k} duality gap")
        if search:
            best, _ = max_weight_subset(range(H.n), [1] * H.n, lambda X: not _violates(Hc, X, k))
            if best != res.primal_value:
                fails.append(f"(c) k_union_max_sink k={k} {res.primal_value} != {best}")


def _check_strong_part(D, cfg, fails, rng):
    comps, _ = strong_components(D)
    for comp in comps:
        if len(comp) < 2:
            continue
        H = induced(D, comp)
        dic = list(enumerate_dicircuits(H))
        F = flat_transversal(H)
        # (e) flat transversal, checked by enumeration
        if not all(F & K.edge_set for K in dic) or not all(
            any(e in K.edge_set and len(F & K.edge_set) == 1 for K in dic) for e in range(H.m)
        ):
            fails.append("(e) flat_transversal not flat")
            continue
        # (c) Gallai with random costs; primal and dual feasibility plus equality prove optimality
        c = [rng.randint(0, 2) for _ in range(H.m)]
        g = gallai_min_max(H, c)
        x = g.primal
        if not g.equal or any(sum(x.get(v, 0) for v in K.nodes) > sum(c[e] for e in K.edges) for K in dic):
            fails.append("(c) gallai_min_max")
        search = H.n <= cfg.subset_search_max_n
        res = max_F_stable(H, F)
        if not res.equal or _violates_F(dic, F, res.primal, 1):
            fails.append("(c) max_F_stable")
        if search:
            best, _ = max_weight_subset(range(H.n), [1] * H.n, lambda X: not _violates_F(dic, F, X, 1))
            if best != res.primal_value:
                fails.append(f"(c) max_F_stable {res.primal_value} != {best}")
        for k in cfg.ks:
            res = k_union_max_F(H, F, None, k)
            if not res.equal or _violates_F(dic, F, res.primal, k):
                fails.append(f"(c) k_union_max_F k={k}")
            if search:
                best, _ = max_weight_subset(range(H.n), [1] * H.n, lambda X: not _violates_F(dic, F, X, k))
                if best != res.primal_value:
                    fails.append(f"(c) k_union_max_F k={k} {res.primal_value} != {best}")
        # (d) at most alpha di-circuits
        cov = cover_by_alpha_dicircuits(H)
        alpha = max(len(X) for X in subsets(range(H.n)) if is_stable_set(H, X))
        if cov.extra["family_size"] > alpha:
            fails.append("(d) cover_by_alpha_dicircuits exceeds alpha")
        # (f) Bondy
        if bondy_chromatic_bound(H).k > max(len(K) for K in dic):
            fails.append("(f) bondy_chromatic_bound exceeds longest di-circuit")


def verify_digraph(D: Digraph, cfg: SweepConfig | None = None, rng: random.Random | None = None) -> list[str]:
    cfg = cfg or SweepConfig()
    rng = rng or random.Random(cfg.seed)
    circuits = list(enumerate_circuits(D))
    fails: list[str] = []
    _check_conditions(D, circuits, cfg, fails)
    _check_sink_solvers(D, circuits, cfg, fails)
    _check_strong_part(D, cfg, fails, rng)
    return fails


def random_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    return Digraph(n, tuple((u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p))


@dataclass
class SweepReport:
    checked: int = 0
    total: int = 0
    seconds: float = 0.0
    failures: list[tuple[Digraph, list[str]]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.checked == self.total

    @property
    def projected_seconds(self) -> float:
        return math.inf if not self.checked else self.seconds * self.total / self.checked


def exhaustive_sweep(n: int, budget: float, cfg: SweepConfig | None = None) -> SweepReport:
    """All labelled digraphs on ``n`` nodes, stopping once ``budget`` seconds pass."""
    cfg = cfg or SweepConfig()
    rng = random.Random(cfg.seed)
    rep = SweepReport(total=4 ** (n * (n - 1) // 2))
    start = time.perf_counter()
    for D in all_digraphs(n):
        fails = verify_digraph(D, cfg, rng)
        if fails:
            rep.failures.append((D, fails))
        rep.checked += 1
        if time.perf_counter() - start > budget:
            break
    rep.seconds = time.perf_counter() - start
    return rep


def random_sweep(count: int, max_n: int, p: float = 0.3, cfg: SweepConfig | None = None) -> SweepReport:
    cfg = cfg or SweepConfig()
    rng = random.Random(cfg.seed)
    rep = SweepReport(total=count)
    start = time.perf_counter()
    for _ in range(count):
        D = random_digraph(rng, rng.randint(2, max_n), p)
        fails = verify_digraph(D, cfg, rng)
        if fails:
            rep.failures.append((D, fails))
        rep.checked += 1
    rep.seconds = time.perf_counter() - start
    return rep
