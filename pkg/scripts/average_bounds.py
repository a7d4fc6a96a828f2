"""Measured averages of the two proven sorters against their closed-form bounds.

Small sizes are run exhaustively (every stack, and every coin sequence for the
randomized sorter); larger sizes use seeded samples.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from pancakes.experiments import EXHAUSTIVE_LIMIT, ExperimentReport, average_flips, reference_bounds


@dataclass(frozen=True)
class BoundsConfig:
    exhaustive_sizes: tuple[int, ...] = (3, 4, 5, 6)
    sampled_sizes: tuple[int, ...] = (10, 50, 100, 1000)
    samples: int = 2000
    seed: int = 0


def run(cfg: BoundsConfig, out) -> None:
    out.write(ExperimentReport.CSV_HEADER + ",mode,burnt_avg_lb\n")
    for algo in ("burnt-avg", "unburnt-rand"):
        variant = "burnt" if algo == "burnt-avg" else "unburnt"
        for n in cfg.exhaustive_sizes:
            if n > EXHAUSTIVE_LIMIT[variant] or (algo == "unburnt-rand" and n > 6):
                continue
            rep = average_flips(algo, n, "exhaustive")
            out.write(f"{rep.csv_row()},exhaustive,\n")
        for n in cfg.sampled_sizes:
            rep = average_flips(algo, n, samples=cfg.samples, seed=cfg.seed)
            lb = reference_bounds(n).burnt_avg_lb if algo == "burnt-avg" else None
            out.write(f"{rep.csv_row()},sampled,{'' if lb is None else lb}\n")
        out.flush()


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sampled-sizes", type=int, nargs="+", default=list(BoundsConfig.sampled_sizes))
    p.add_argument("--samples", type=int, default=BoundsConfig.samples)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    run(BoundsConfig(sampled_sizes=tuple(a.sampled_sizes), samples=a.samples, seed=a.seed), sys.stdout)


if __name__ == "__main__":
    main()
