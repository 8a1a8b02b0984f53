"""Probe how often random 3-graph systems hold a rainbow tight Hamilton cycle.

For every degree level on the grid, draws ``trials`` seeded random systems
with that minimum relative (k-2)-degree and runs the exact solver.  Writes
one JSON document with a row per level.

    python3 scripts/run_probe.py --n 7 --levels 0.1 0.2 0.3 0.5 --trials 20 --out probe.json
"""

import argparse
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from rainbowtight.solver import SearchConfig, threshold_probe

log = logging.getLogger("run_probe")


@dataclass
class ProbeConfig:
    k: int = 3
    n: int = 7
    levels: list = field(default_factory=lambda: ["1/10", "1/6", "1/4", "1/3", "1/2"])
    trials: int = 20
    seed: int = 0
    jobs: int = 1
    node_limit: int | None = 2_000_000


def run(cfg: ProbeConfig) -> dict:
    grid = [Fraction(x) for x in cfg.levels]
    start = time.perf_counter()
    rows = threshold_probe(cfg.k, cfg.n, grid, cfg.trials, cfg.seed,
                           SearchConfig(node_limit=cfg.node_limit), jobs=cfg.jobs)
    for r in rows:
        log.info("level %s: %d/%d found, %d exhausted", r.level, r.found, r.trials, r.exhausted)
    return {"config": asdict(cfg),
            "rows": [{**r.to_json(), "level": str(r.level)} for r in rows],
            "seconds": round(time.perf_counter() - start, 2)}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--levels", nargs="+", default=ProbeConfig().levels)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--node-limit", type=int, default=2_000_000)
    p.add_argument("--out")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    cfg = ProbeConfig(args.k, args.n, args.levels, args.trials, args.seed, args.jobs, args.node_limit)
    result = run(cfg)
    text = json.dumps(result, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)


if __name__ == "__main__":
    main()
