"""Command-line front end: ``sinkstable VERB GRAPH [options]``.

Answers (including negative ones) are printed as JSON and exit with 0; input
and usage problems exit with 2 and a JSON error on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import clar as clar_mod
from . import dicut, optimize, oracles, stability
from .certificates import DicutFamily, Partition, ViolatingCircuit, ViolatingDiCircuit
from .graph_core import Digraph, reverse_edges

SCHEMA = "sinkstable/1"


class InputError(Exception):
    def __init__(self, message: str, **info):
        super().__init__(message)
        self.info = info


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", path=path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc.msg}", path=path, line=exc.lineno, column=exc.colno) from None


def load_digraph(path: str) -> Digraph:
    data = _load_json(path)
    try:
        return Digraph.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: invalid digraph: {exc}", path=path) from None


def load_plane(path: str) -> clar_mod.PlaneBipartiteGraph:
    data = _load_json(path)
    try:
        return clar_mod.PlaneBipartiteGraph.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: invalid plane graph: {exc}", path=path) from None


def _tokens(text: str | None) -> list[str]:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_set(D: Digraph, text: str | None) -> frozenset[int]:
    try:
        return frozenset(D.node_id(t) for t in _tokens(text))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def parse_edge_set(D: Digraph, text: str | None) -> frozenset[int]:
    """Edge ids, or ``u>v`` naming the lowest-id edge from ``u`` to ``v``."""
    out = set()
    for tok in _tokens(text):
        if ">" in tok:
            u, v = (D.node_id(x.strip()) for x in tok.split(">", 1))
            e = next((i for i, pair in enumerate(D.edges) if pair == (u, v)), None)
            if e is None:
                raise InputError(f"no edge {tok}")
            out.add(e)
            continue
        try:
            e = int(tok)
        except ValueError:
            raise InputError(f"bad edge token {tok!r}") from None
        if not 0 <= e < D.m:
            raise InputError(f"edge id {e} out of range")
        out.add(e)
    return frozenset(out)


def parse_weights(D: Digraph, text: str | None):
    if text is None:
        return None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--weights: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    try:
        return optimize._weights(D, data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"--weights: {exc}") from None


def _names(D, nodes):
    return [D.name(v) for v in sorted(nodes)] if D.names else sorted(nodes)


def _verify(cert, D: Digraph, S=None, F=None) -> bool:
    """Re-run the cheap side of a certificate."""
    if isinstance(cert, DicutFamily):
        cert.validate(D)
        if S is not None:
            Dr = reverse_edges(D, cert.edges(D))
            assert all(not Dr.out_edges[v] for v in S)
        if F is not None:
            assert cert.edges(D) == F
    elif isinstance(cert, ViolatingCircuit):
        cert.validate(D, S=S if cert.hits is not None else None, F=F if cert.counts is not None else None)
    elif isinstance(cert, ViolatingDiCircuit):
        cert.validate(D, S, F)
    elif isinstance(cert, Partition):
        cert.validate(D if F is None else reverse_edges(D, F), S)
    return True


# ----------------------------------------------------------------- verbs


def cmd_check_sink_stable(a):
    D = load_digraph(a.graph)
    S = parse_set(D, a.set)
    cert = stability.check_sink_stable(D, S)
    return D, cert.to_json(D), lambda: _verify(cert, D, S=S)


def cmd_partition_k(a):
    D = load_digraph(a.graph)
    S = parse_set(D, a.set)
    cert = stability.partition_k_sink_stable(D, S, a.k)
    return D, cert.to_json(D), lambda: _verify(cert, D, S=S)


def cmd_check_f_stable(a):
    D = load_digraph(a.graph)
    S, F = parse_set(D, a.set), parse_edge_set(D, a.edge_set)
    cert = stability.check_F_stable_union(D, F, S, a.k)
    return D, cert.to_json(D), lambda: _verify(cert, D, S=S, F=F)


def cmd_flat_transversal(a):
    D = load_digraph(a.graph)
    F = stability.flat_transversal(D)
    out = {"kind": "flat_transversal", "edges": sorted(F)}
    return D, out, lambda: stability.is_flat(D, F) and stability.is_transversal(D, F)


def cmd_dicut_union(a):
    D = load_digraph(a.graph)
    F = parse_edge_set(D, a.edge_set)
    cert = dicut.recognize_dicut_union(D, F)
    return D, cert.to_json(D), lambda: _verify(cert, D, F=F)


def cmd_dicut_equiv(a):
    D = load_digraph(a.graph)
    if not a.other:
        raise InputError("dicut-equiv needs a second digraph")
    D2 = load_digraph(a.other)
    try:
        cert = dicut.dicut_equivalent(D, D2)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return D, cert.to_json(D), lambda: _verify(cert, D)


def cmd_source_sequence(a):
    D = load_digraph(a.graph)
    if a.other:
        D2 = load_digraph(a.other)
        try:
            fam = dicut.dicut_equivalent(D, D2)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        fam = dicut.recognize_dicut_union(D, parse_edge_set(D, a.edge_set))
    if not isinstance(fam, DicutFamily):
        return D, {"kind": "no_sequence", "reason": fam.to_json(D)}, lambda: _verify(fam, D)
    try:
        seq = dicut.source_sequence(D, fam)
    except ValueError as exc:
        return D, {"kind": "no_sequence", "reason": str(exc), "family": fam.to_json(D)}, None
    out = {"kind": "source_sequence", "sequence": [D.name(v) if D.names else v for v in seq], "family": fam.to_json(D)}
    return D, out, lambda: dicut.replay(D, seq).edges == reverse_edges(D, fam.edges(D)).edges


def _order(D, a):
    if a.order:
        return stability.CyclicOrder.from_sequence(D, _tokens(a.order))
    return stability.coherent_cyclic_order(D)


def cmd_cyclic_order(a):
    D = load_digraph(a.graph)
    order = _order(D, a)
    return D, order.to_json(D), lambda: stability.is_coherent(D, order)


def cmd_check_cyclic_stable(a):
    D = load_digraph(a.graph)
    order = _order(D, a)
    S = parse_set(D, a.set)
    cert = stability.check_cyclic_stable(D, order, S, a.k)
    out = cert.to_json(D)
    out["order"] = order.to_json(D)
    return D, out, lambda: _verify(cert, D, S=S, F=order.backward_edges)


def cmd_max_sink_stable(a):
    D = load_digraph(a.graph)
    res = optimize.max_sink_stable(D, parse_weights(D, a.weights))
    return D, res.to_json(D), lambda: res.equal


def cmd_max_f_stable(a):
    D = load_digraph(a.graph)
    F = parse_edge_set(D, a.edge_set)
    res = optimize.max_F_stable(D, F, parse_weights(D, a.weights))
    return D, res.to_json(D), lambda: res.equal


def cmd_k_union_max(a):
    D = load_digraph(a.graph)
    w = parse_weights(D, a.weights)
    if a.sink:
        res = optimize.k_union_max_sink(D, w, a.k)
    else:
        res = optimize.k_union_max_F(D, parse_edge_set(D, a.edge_set), w, a.k)
    return D, res.to_json(D), lambda: res.equal


def cmd_cover_dicircuits(a):
    D = load_digraph(a.graph)
    U = parse_set(D, a.set) if a.set else None
    res = optimize.cover_by_alpha_dicircuits(D, U)
    return D, res.to_json(D), lambda: res.extra["family_size"] <= len(res.primal)


def cmd_chromatic_bound(a):
    D = load_digraph(a.graph)
    res = stability.bondy_chromatic_bound(D)
    return D, res.to_json(D), lambda: all(oracles.is_stable_set(D, c) for c in res.partition.classes)


def cmd_clar(a):
    G = load_plane(a.graph)
    res = clar_mod.clar_number(G)
    return None, res.to_json(), lambda: clar_mod.check_resonant(G, res.faces)


def cmd_k_resonant(a):
    G = load_plane(a.graph)
    res = clar_mod.k_resonant_max(G, a.k)
    return None, res.to_json(), lambda: all(clar_mod.check_resonant(G, c) for c in res.classes)


def cmd_greene_kleitman(a):
    D = load_digraph(a.graph)
    res = optimize.greene_kleitman(D, a.k)
    return D, res.to_json(D), lambda: res.value == res.k * len(res.chains) + D.n - sum(map(len, res.chains))


def cmd_oracle(a):
    D = load_digraph(a.graph)
    if D.n > a.oracle_max_n:
        raise InputError(f"oracle refuses n = {D.n} > --oracle-max-n {a.oracle_max_n}")
    S = parse_set(D, a.set)
    out: dict = {"kind": "oracle", "k": a.k}
    bad = oracles.circuit_condition(D, S, a.k)
    out["circuit_condition"] = bad is None
    if bad is not None:
        out["violating_circuit"] = bad.to_json(D)
    if a.k == 1:
        stable = oracles.is_stable_set(D, S)
        out["stable"] = stable
        if stable:
            out["search"] = oracles.sink_stable_by_search(D, S)
            out["checker"] = isinstance(stability.check_sink_stable(D, S), DicutFamily)
    else:
        out["search"] = oracles.k_sink_stable_by_search(D, S, a.k)
        out["checker"] = isinstance(stability.partition_k_sink_stable(D, S, a.k), Partition)
    if "search" in out:
        out["agree"] = out["search"] == out["checker"] == out["circuit_condition"]
    return D, out, None


VERBS = {
    "check-sink-stable": (cmd_check_sink_stable, "is S sink-stable? (--set)"),
    "partition-k": (cmd_partition_k, "split S into k sink-stable sets (--set, --k)"),
    "check-f-stable": (cmd_check_f_stable, "is S a union of k F-stable sets? (--set, --edge-set, --k)"),
    "flat-transversal": (cmd_flat_transversal, "flat transversal of the di-circuits"),
    "dicut-union": (cmd_dicut_union, "is the edge set a union of disjoint dicuts? (--edge-set)"),
    "dicut-equiv": (cmd_dicut_equiv, "are two orientations dicut equivalent? (GRAPH OTHER)"),
    "source-sequence": (cmd_source_sequence, "source flips realizing a dicut reversal (OTHER or --edge-set)"),
    "cyclic-order": (cmd_cyclic_order, "coherent cyclic order (or check --order)"),
    "check-cyclic-stable": (cmd_check_cyclic_stable, "cyclic stability w.r.t. a coherent order (--set, --k)"),
    "max-sink-stable": (cmd_max_sink_stable, "max-weight sink-stable set with dual (--weights)"),
    "max-f-stable": (cmd_max_f_stable, "max-weight F-stable set with dual (--edge-set, --weights)"),
    "k-union-max": (cmd_k_union_max, "max-weight k-union (--k, --edge-set or --sink)"),
    "cover-dicircuits": (cmd_cover_dicircuits, "cover by at most alpha di-circuits (--set for U)"),
    "chromatic-bound": (cmd_chromatic_bound, "colouring by at most longest-di-circuit classes"),
    "clar": (cmd_clar, "Clar number of a plane bipartite graph"),
    "k-resonant": (cmd_k_resonant, "max faces in k resonant sets (--k)"),
    "greene-kleitman": (cmd_greene_kleitman, "max k-antichain union of a poset (--k)"),
    "oracle": (cmd_oracle, "brute-force cross-check of the checkers (--set, --k)"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sinkstable", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", metavar="VERB", required=True)
    for verb, (_, help_text) in VERBS.items():
        s = sub.add_parser(verb, help=help_text)
        s.add_argument("graph", help="input JSON file")
        s.add_argument("other", nargs="?", help="second digraph (dicut-equiv, source-sequence)")
        s.add_argument("--set", help="comma-separated node ids or names")
        s.add_argument("--edge-set", help="comma-separated edge ids or u>v pairs")
        s.add_argument("--k", type=int, default=1 if verb not in ("partition-k", "k-union-max", "k-resonant") else 2)
        s.add_argument("--weights", help="JSON list or object of node weights")
        s.add_argument("--order", help="cyclic order as comma-separated nodes")
        s.add_argument("--sink", action="store_true", help="k-union-max: sink-stable variant")
        s.add_argument("--verify", action="store_true", help="re-check the emitted certificate")
        s.add_argument("--oracle-max-n", type=int, default=8)
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("-o", "--output", help="write to this file instead of stdout")
    return p


def _text(out: dict) -> str:
    lines = [f"{out.get('verb')}: {out.get('kind', '')}"]
    for key in ("value", "clar", "k", "sequence", "edges", "classes", "nodes", "levels", "verified"):
        if key in out:
            lines.append(f"  {key}: {out[key]}")
    return "\n".join(lines)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    func, _ = VERBS[a.verb]
    try:
        D, out, check = func(a)
    except (InputError, stability.SNotStable, stability.NotStrong, clar_mod.EmbeddingError, ValueError) as exc:
        err = {"schema": SCHEMA, "verb": a.verb, "error": str(exc), **getattr(exc, "info", {})}
        print(json.dumps(err), file=sys.stderr)
        return 2
    out = {"schema": SCHEMA, "verb": a.verb, **out}
    if D is not None and D.names:
        out["names"] = list(D.names)
    if a.verify and check is not None:
        out["verified"] = bool(check())
    text = json.dumps(out, indent=2) if a.format == "json" else _text(out)
    if a.output:
        Path(a.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
