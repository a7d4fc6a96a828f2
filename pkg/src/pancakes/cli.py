"""Command line interface: ``pancakes <subcommand> ...``.

Exit codes: 0 success, 1 invalid input or unsortable request, 2 usage error,
3 resource limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .core import BurntStack, MixedStack, UnburntStack, format_stack, parse_stack, to_unburnt
from .exact import (
    ResourceLimitError,
    SolverConfig,
    astar_distance,
    bfs_distances,
    candidate_set,
    greedy_lb_burnt,
    verify_trace,
)
from .experiments import ALGORITHMS, average_flips
from .potential import lower_bound_potential
from .sorters import sort_burnt_average, sort_greedy_lookahead, sort_unburnt_randomized

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
# options whose values may start with "-" (e.g. "-I19")
_VALUE_OPTIONS = ("--stack", "--flips")


class DomainError(Exception):
    pass


def _as_burnt(stack) -> BurntStack:
    if isinstance(stack, BurntStack):
        return stack
    if isinstance(stack, UnburntStack):
        return BurntStack._trusted(stack)
    raise DomainError("this operation needs a burnt or unburnt stack, not a mixed one")


def _emit(fmt: str, data: dict, text: str, csv_header: str, csv_rows: Sequence[Sequence]) -> str:
    if fmt == "json":
        return json.dumps(data, sort_keys=True)
    if fmt == "csv":
        lines = [csv_header] + [",".join(str(x) for x in row) for row in csv_rows]
        return "\n".join(lines)
    return text


def cmd_sort(args) -> str:
    stack = parse_stack(args.stack)
    if isinstance(stack, MixedStack):
        raise DomainError("sorters take burnt or unburnt stacks")
    if args.algo == "unburnt-rand":
        outcome = sort_unburnt_randomized(to_unburnt(stack), seed=args.seed)
    elif args.algo == "burnt-avg":
        outcome = sort_burnt_average(_as_burnt(stack))
    else:
        outcome = sort_greedy_lookahead(_as_burnt(stack))
    flips = list(outcome.trace.flips)
    trace = ",".join(map(str, flips))
    return _emit(
        args.format,
        {"algo": args.algo, "stack": format_stack(outcome.trace.start), "flips": flips,
         "count": len(flips), "seed": args.seed},
        f"trace: {trace}".rstrip() + f"\nflips: {len(flips)}",
        "algo,count,flips",
        [(args.algo, len(flips), f'"{trace}"')],
    )


def cmd_bound(args) -> str:
    stack = _as_burnt(parse_stack(args.stack))
    bound = lower_bound_potential(stack)
    data = {"stack": format_stack(stack), "potential_lb": bound, "bound": bound}
    if args.greedy:
        g = greedy_lb_burnt(stack)
        data.update(greedy_lb=g.bound, greedy_exact=g.exact)
        bound = max(bound, g.bound)
        data["bound"] = bound
    return _emit(args.format, data, str(bound), "stack,bound", [(format_stack(stack), bound)])


def cmd_exact(args) -> str:
    stack = parse_stack(args.stack)
    if isinstance(stack, MixedStack):
        raise DomainError("exact distances are defined for burnt or unburnt stacks")
    if args.variant == "burnt":
        stack = _as_burnt(stack)
    elif args.variant == "unburnt":
        stack = to_unburnt(stack)
    config = SolverConfig(endgame_table_size=args.table_size, node_limit=args.node_limit)
    d = astar_distance(stack, config)
    return _emit(args.format, {"stack": format_stack(stack), "distance": d}, str(d),
                 "stack,distance", [(format_stack(stack), d)])


def cmd_bfs(args) -> str:
    table = bfs_distances(args.n, args.variant)
    if args.out:
        table.save(args.out)
    hist = table.histogram
    text = "\n".join([f"n={args.n} variant={args.variant} max={table.max_distance}"]
                     + [f"{d}\t{c}" for d, c in hist.items()])
    return _emit(
        args.format,
        {"n": args.n, "variant": args.variant, "max": table.max_distance,
         "histogram": {str(d): c for d, c in hist.items()}},
        text,
        "n,variant,distance,count",
        [(args.n, args.variant, d, c) for d, c in hist.items()],
    )


def cmd_candidates(args) -> str:
    if args.n < 2:
        raise DomainError("candidate sets need n >= 2")
    prev = bfs_distances(args.n - 1, args.variant)
    cands = candidate_set(prev, args.m, args.variant)
    config = SolverConfig()
    counts: dict[int, int] = {}
    for stack in cands:
        d = astar_distance(stack, config)
        counts[d] = counts.get(d, 0) + 1
    counts = dict(sorted(counts.items()))
    text = "\n".join([f"n={args.n} variant={args.variant} m={args.m} candidates={len(cands)}"]
                     + [f"{d}\t{c}" for d, c in counts.items()])
    return _emit(
        args.format,
        {"n": args.n, "variant": args.variant, "m": args.m, "size": len(cands),
         "by_distance": {str(d): c for d, c in counts.items()}},
        text,
        "n,variant,distance,count",
        [(args.n, args.variant, d, c) for d, c in counts.items()],
    )


def cmd_bench(args) -> str:
    mode = "exhaustive" if args.exhaustive else "sampled"
    try:
        report = average_flips(args.algo, args.n, mode, args.samples, args.seed, args.threads)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    if args.format == "json":
        return json.dumps(report.to_dict(), sort_keys=True)
    if args.format == "csv":
        return report.to_csv().rstrip("\n")
    return report.to_text().rstrip("\n")


def cmd_verify(args) -> str:
    stack = parse_stack(args.stack)
    try:
        flips = [int(tok) for tok in args.flips.replace(",", " ").split()]
    except ValueError:
        raise DomainError(f"cannot read flip list {args.flips!r}") from None
    ok = verify_trace(stack, flips)
    return _emit(args.format, {"stack": format_stack(stack), "flips": flips, "sorted": ok},
                 f"sorted: {'true' if ok else 'false'}", "sorted", [(str(ok).lower(),)])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="pancakes", description="Sort and analyse pancake stacks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sort", parents=[common], help="sort a stack and print the flip trace")
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--stack", required=True)
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("bound", parents=[common], help="potential lower bound of a burnt stack")
    p.add_argument("--stack", required=True)
    p.add_argument("--greedy", action="store_true", help="also run the greedy lower bound")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("exact", parents=[common], help="exact flip distance by A*")
    p.add_argument("--stack", required=True)
    p.add_argument("--variant", choices=("auto", "burnt", "unburnt"), default="auto")
    p.add_argument("--table-size", type=int, default=7)
    p.add_argument("--node-limit", type=int, default=SolverConfig.node_limit)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bfs", parents=[common], help="distance table of every stack of one size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", choices=("burnt", "unburnt"), default="burnt")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bfs)

    p = sub.add_parser("candidates", parents=[common], help="candidate stacks needing at least m flips")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--variant", choices=("burnt", "unburnt"), default="burnt")
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("bench", parents=[common], help="average flips of a sorter")
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", parents=[common], help="check that a flip list sorts a stack")
    p.add_argument("--stack", required=True)
    p.add_argument("--flips", required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def _join_values(argv: Sequence[str]) -> list[str]:
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            value = next(it, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_values(sys.argv[1:] if argv is None else argv))
    try:
        print(args.func(args))
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
