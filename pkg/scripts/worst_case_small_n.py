"""Worst-case flip counts for small stacks, from BFS tables and A*.

Writes ``n,variant,max_distance,neg_identity`` rows to stdout or ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from pancakes.core import make_special
from pancakes.exact import SolverConfig, astar_distance, bfs_distances


@dataclass(frozen=True)
class WorstCaseConfig:
    max_unburnt: int = 10
    max_burnt: int = 8
    max_neg_identity: int = 10
    endgame_table_size: int = 7


def run(cfg: WorstCaseConfig, out) -> None:
    writer = csv.writer(out)
    writer.writerow(["n", "variant", "max_distance", "neg_identity"])
    for n in range(2, cfg.max_unburnt + 1):
        writer.writerow([n, "unburnt", bfs_distances(n, "unburnt").max_distance, ""])
    solver = SolverConfig(endgame_table_size=cfg.endgame_table_size)
    for n in range(2, max(cfg.max_burnt, cfg.max_neg_identity) + 1):
        neg = make_special("negidentity", n)
        if n <= cfg.max_burnt:
            table = bfs_distances(n, "burnt")
            writer.writerow([n, "burnt", table.max_distance, table.distance(neg)])
        else:
            writer.writerow([n, "burnt", "", astar_distance(neg, solver)])
        out.flush()


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-unburnt", type=int, default=WorstCaseConfig.max_unburnt)
    p.add_argument("--max-burnt", type=int, default=WorstCaseConfig.max_burnt)
    p.add_argument("--max-neg-identity", type=int, default=WorstCaseConfig.max_neg_identity)
    p.add_argument("--table-size", type=int, default=WorstCaseConfig.endgame_table_size)
    p.add_argument("--out")
    a = p.parse_args()
    cfg = WorstCaseConfig(a.max_unburnt, a.max_burnt, a.max_neg_identity, a.table_size)
    if a.out:
        with open(a.out, "w", newline="") as fh:
            run(cfg, fh)
    else:
        run(cfg, sys.stdout)


if __name__ == "__main__":
    main()
