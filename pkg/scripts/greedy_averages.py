"""Average flips of the greedy lookahead sorter on random burnt stacks.

Prints one CSV report row per stack size, next to the published averages.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from pancakes.experiments import ExperimentReport, average_flips

PUBLISHED = {10: 14.935, 100: 123.463, 1000: 1127.901, 10000: 10863.502}


@dataclass(frozen=True)
class GreedyConfig:
    sizes: tuple[int, ...] = (10, 100, 1000)
    samples: dict[int, int] = field(default_factory=lambda: {10: 100_000, 100: 10_000, 1000: 100})
    seed: int = 0
    threads: int = 1


def run(cfg: GreedyConfig, out) -> None:
    out.write(ExperimentReport.CSV_HEADER + ",published,relative_gap\n")
    for n in cfg.sizes:
        rep = average_flips("greedy", n, samples=cfg.samples.get(n, 100), seed=cfg.seed, threads=cfg.threads)
        pub = PUBLISHED.get(n)
        gap = "" if pub is None else f"{rep.mean / pub - 1:+.4f}"
        out.write(f"{rep.csv_row()},{'' if pub is None else pub},{gap}\n")
        out.flush()


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=list(GreedyConfig.sizes))
    p.add_argument("--samples", type=int, help="same sample count for every size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    a = p.parse_args()
    cfg = GreedyConfig(sizes=tuple(a.sizes), seed=a.seed, threads=a.threads)
    if a.samples:
        cfg = GreedyConfig(cfg.sizes, {n: a.samples for n in cfg.sizes}, cfg.seed, cfg.threads)
    run(cfg, sys.stdout)


if __name__ == "__main__":
    main()
