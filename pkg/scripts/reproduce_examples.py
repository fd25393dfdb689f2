"""Print the worked examples shipped in data/ with their certificates."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from sinkstable import (
    Digraph,
    PlaneBipartiteGraph,
    check_sink_stable,
    clar_number,
    coherent_cyclic_order,
    dicut_equivalent,
    k_resonant_max,
    k_union_max_sink,
    max_sink_stable,
    partition_k_sink_stable,
    reverse_edges,
)
from sinkstable.graph_core import enumerate_dicircuits
from sinkstable.stability import CyclicOrder, index

DATA = Path(__file__).resolve().parent.parent / "data"


@dataclass
class Config:
    data: Path = DATA
    max_cycle: int = 8


def digraph(cfg: Config, name: str) -> Digraph:
    return Digraph.from_json(json.loads((cfg.data / name).read_text()))


def show(title: str, payload) -> None:
    print(f"== {title}")
    print(json.dumps(payload, indent=2))


def main(cfg: Config) -> None:
    square = digraph(cfg, "square.json")
    for v in "abcd":
        show(f"square: is {{{v}}} sink-stable", check_sink_stable(square, v).to_json(square))
    show("square: is {a, c} sink-stable", check_sink_stable(square, "ac").to_json(square))
    show("square: {a, c} in two classes", partition_k_sink_stable(square, "ac", 2).to_json(square))
    show("square: best union of two", k_union_max_sink(square, k=2).to_json(square))

    fan = digraph(cfg, "fan.json")
    show("fan: largest sink-stable set", max_sink_stable(fan).to_json(fan))

    cube = PlaneBipartiteGraph.from_json(json.loads((cfg.data / "cube.json").read_text()))
    show("cube: Clar number", clar_number(cube).to_json())
    for k in (2, 3):
        show(f"cube: faces in {k} resonant sets", k_resonant_max(cube, k).to_json())

    T = Digraph(4, tuple((i, j) for i in range(4) for j in range(i + 1, 4)))
    show("tournament vs its reverse", dicut_equivalent(T, reverse_edges(T, range(T.m))).to_json(T))

    rows = []
    for n in range(3, cfg.max_cycle + 1):
        D = Digraph(n, tuple((i, (i + 1) % n) for i in range(n)))
        (K,) = enumerate_dicircuits(D)
        back = CyclicOrder.from_sequence(D, [0, *range(n - 1, 0, -1)])
        rows.append({"n": n, "coherent": index(D, coherent_cyclic_order(D), K), "reversed": index(D, back, K)})
    show("directed cycles: winding numbers", rows)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--data", type=Path, default=DATA)
    p.add_argument("--max-cycle", type=int, default=8)
    a = p.parse_args()
    main(Config(a.data, a.max_cycle))
