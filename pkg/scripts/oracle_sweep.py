"""Cross-check all solvers against brute force over many small digraphs.

    python3 scripts/oracle_sweep.py --exhaustive 4 --random 200 --max-n 8
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

from sinkstable.sweep import SweepConfig, exhaustive_sweep, random_sweep


@dataclass
class Config:
    exhaustive: int = 4
    budget: float = 60.0
    random: int = 200
    max_n: int = 8
    density: float = 0.3
    seed: int = 0


def main(cfg: Config) -> int:
    sweep_cfg = SweepConfig(seed=cfg.seed)
    bad = 0
    for n in range(2, cfg.exhaustive + 1):
        rep = exhaustive_sweep(n, cfg.budget, sweep_cfg)
        bad += len(rep.failures)
        print(
            f"all digraphs n={n}: {rep.checked}/{rep.total} in {rep.seconds:.1f}s, "
            f"{len(rep.failures)} disagreements"
            + ("" if rep.complete else f" (stopped; projected {rep.projected_seconds:.0f}s)")
        )
    rep = random_sweep(cfg.random, cfg.max_n, cfg.density, sweep_cfg)
    bad += len(rep.failures)
    print(f"random n<={cfg.max_n}: {rep.checked} in {rep.seconds:.1f}s, {len(rep.failures)} disagreements")
    for D, msgs in rep.failures[:5]:
        print(json.dumps({"digraph": D.to_json(), "failures": msgs}))
    print(json.dumps({"config": asdict(cfg), "disagreements": bad}))
    return 1 if bad else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in Config.__dataclass_fields__.values():
        p.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    raise SystemExit(main(Config(**vars(p.parse_args()))))
