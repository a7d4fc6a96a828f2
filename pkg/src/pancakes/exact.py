"""Exact flip distances: BFS tables, greedy lower bounds, A* and candidate sets."""

from __future__ import annotations

import heapq
import io
import itertools
import os
import struct
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from . import _kernels as K
from .core import (
    BurntStack,
    FlipTrace,
    UnburntStack,
    expand,
    flip,
    make_special,
    rank,
    state_count,
    unrank,
    variant_of,
)
from .potential import lower_bound_potential

MAGIC = b"PANC"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHHB7x")
_VARIANT_CODE = {"burnt": 1, "unburnt": 0}
UNSET = K.UNSET

DEFAULT_MEM_LIMIT_MB = 1024


class ResourceLimitError(RuntimeError):
    """A search or table would exceed its node or memory budget."""


@dataclass(frozen=True)
class SolverConfig:
    endgame_table_size: int = 7
    use_potential_bound: bool = True
    use_greedy_bound: bool = True
    node_limit: int = 2_000_000
    greedy_node_limit: int = 200_000

    def __post_init__(self):
        if not 0 <= self.endgame_table_size <= 9:
            raise ValueError("endgame_table_size must be in 0..9")


# --- distance tables --------------------------------------------------------

@dataclass
class DistanceTable:
    n: int
    variant: str
    dist: np.ndarray

    @property
    def histogram(self) -> dict[int, int]:
        counts = np.bincount(self.dist[self.dist != UNSET])
        return {d: int(c) for d, c in enumerate(counts) if c}

    @property
    def max_distance(self) -> int:
        return int(self.dist[self.dist != UNSET].max())

    def distance(self, stack) -> int:
        return int(self.dist[rank(stack)])

    def ranks_at(self, d: int) -> np.ndarray:
        return np.flatnonzero(self.dist == d)

    def stacks_at(self, d: int) -> Iterator:
        for r in self.ranks_at(d):
            yield unrank(int(r), self.n, self.variant)

    def slices(self, lo: int) -> dict[int, list]:
        """Stacks grouped by distance, for every distance from ``lo`` to the maximum."""
        return {d: list(self.stacks_at(d)) for d in range(max(lo, 0), self.max_distance + 1)}

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, self.n, _VARIANT_CODE[self.variant])
        return header + self.dist.tobytes()

    def save(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> "DistanceTable":
        if len(data) < _HEADER.size:
            raise ValueError("truncated distance table")
        magic, version, n, code = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise ValueError("not a distance table (bad magic)")
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported table version {version}")
        variant = {v: k for k, v in _VARIANT_CODE.items()}[code]
        dist = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size).copy()
        if dist.shape[0] != state_count(n, variant):
            raise ValueError("table size does not match header")
        return cls(n, variant, dist)

    @classmethod
    def load(cls, path) -> "DistanceTable":
        return cls.from_bytes(Path(path).read_bytes())

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,variant,distance,count\n")
        for d, c in self.histogram.items():
            buf.write(f"{self.n},{self.variant},{d},{c}\n")
        return buf.getvalue()


def _mem_limit_bytes() -> int:
    return int(float(os.environ.get("PANCAKE_MEM_LIMIT_MB", DEFAULT_MEM_LIMIT_MB)) * 2**20)


def bfs_distances(n: int, variant: str = "burnt") -> DistanceTable:
    """Distance of every stack of size ``n`` from the sorted stack."""
    if n < 1:
        raise ValueError("n must be positive")
    limit = 9 if variant == "burnt" else 11
    total = state_count(n, variant)
    if n > limit or total > _mem_limit_bytes():
        raise ResourceLimitError(f"{variant} table for n={n} needs {total} bytes")
    return _cached_table(n, variant)


@lru_cache(maxsize=None)
def _cached_table(n: int, variant: str) -> DistanceTable:
    dist = np.full(state_count(n, variant), UNSET, dtype=np.uint8)
    if variant == "burnt":
        K.bfs_burnt(n, dist)
    else:
        K.bfs_unburnt(n, dist)
    dist.setflags(write=False)
    return DistanceTable(n, variant, dist)


# --- greedy lower bounds ----------------------------------------------------

class GreedyBound(NamedTuple):
    bound: int
    exact: bool
    truncated: bool = False


def missing_adjacencies(stack) -> int:
    """Adjacencies still to be made, counting the largest pancake at the bottom as one."""
    a = np.asarray(stack, dtype=np.int64)
    if isinstance(stack, UnburntStack):
        return len(stack) - int(K.unburnt_adjacencies(a))
    return len(stack) - int(K.burnt_adjacencies(a))


def greedy_lb_unburnt(stack: UnburntStack, node_limit: int = 1_000_000) -> GreedyBound:
    need = missing_adjacencies(stack)
    found, _, truncated = K.unburnt_greedy_search(np.asarray(stack, dtype=np.int64), node_limit)
    if found:
        return GreedyBound(need, True)
    if truncated:
        return GreedyBound(need, False, True)
    return GreedyBound(need + 1, False)


def greedy_lb_burnt(stack: BurntStack, node_limit: int = 1_000_000) -> GreedyBound:
    """Lower bound from sequences with at most two flips that make no adjacency.

    A sorting sequence of length ``missing + b`` contains at most ``b`` such
    flips, so an exhausted search at budget ``b`` proves the distance exceeds
    ``missing + b``.
    """
    a = np.asarray(stack, dtype=np.int64)
    need = missing_adjacencies(stack)
    lb = need
    for budget in range(3):
        best, _, truncated = K.burnt_greedy_search(a, budget, need + 2 * budget + 1, node_limit)
        if truncated:
            return GreedyBound(lb, False, True)
        if best != -1 and best <= need + budget:
            return GreedyBound(best, True)
        lb = need + budget + 1
        if best == lb:
            return GreedyBound(best, True)
    return GreedyBound(lb, False)


# --- reduction and A* -------------------------------------------------------

def reduce_burnt(entries: Sequence[int]) -> tuple[int, ...]:
    """Contract every block and drop a bottom pancake that is already in place.

    Both steps leave the flip distance unchanged.
    """
    reps = []
    prev = None
    for e in entries:
        if prev is not None and e == prev + 1:
            if e < 0:
                reps[-1] = e
        else:
            reps.append(e)
        prev = e
    order = sorted(range(len(reps)), key=lambda k: abs(reps[k]))
    out = [0] * len(reps)
    for lab, k in enumerate(order, 1):
        out[k] = lab if reps[k] > 0 else -lab
    while out and out[-1] == len(out):
        out.pop()
    return tuple(out)


def reduce_unburnt(entries: Sequence[int]) -> tuple[int, ...]:
    out = list(entries)
    while out and out[-1] == len(out):
        out.pop()
    return tuple(out)


class _Search:
    def __init__(self, variant: str, config: SolverConfig):
        self.variant = variant
        self.config = config
        self.burnt = variant == "burnt"
        self.tables = {}
        self.reduce = reduce_burnt if self.burnt else reduce_unburnt

    def table(self, n: int) -> DistanceTable:
        t = self.tables.get(n)
        if t is None:
            t = self.tables[n] = bfs_distances(n, self.variant)
        return t

    def children(self, state: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        r = len(state)
        if self.burnt:
            for i in range(1, r + 1):
                yield self.reduce(tuple(-e for e in reversed(state[:i])) + state[i:])
        else:
            for i in range(2, r + 1):
                yield self.reduce(state[i - 1::-1] + state[i:])

    def estimate(self, state: tuple[int, ...]) -> tuple[int, bool]:
        """(lower bound, exact?) for a reduced state."""
        r = len(state)
        if r == 0:
            return 0, True
        if r <= self.config.endgame_table_size:
            stack = (BurntStack if self.burnt else UnburntStack)._trusted(state)
            return self.table(r).distance(stack), True
        bound = 1
        if self.burnt:
            stack = BurntStack._trusted(state)
            if self.config.use_potential_bound:
                bound = max(bound, lower_bound_potential(stack))
            if self.config.use_greedy_bound:
                g = greedy_lb_burnt(stack, self.config.greedy_node_limit)
                if g.exact:
                    return g.bound, True
                bound = max(bound, g.bound)
        else:
            if self.config.use_greedy_bound:
                g = greedy_lb_unburnt(UnburntStack._trusted(state), self.config.greedy_node_limit)
                if g.exact:
                    return g.bound, True
                bound = max(bound, g.bound)
        return bound, False

    def distance(self, state: tuple[int, ...], upper: int | None = None) -> int:
        h, exact = self.estimate(state)
        if exact:
            return h
        if upper is not None and upper == h:
            return h
        tie = itertools.count()
        # entries: (f, -g, tie, state, resolved)
        heap = [(h, 0, next(tie), state, False)]
        best_g = {state: 0}
        expanded = 0
        while heap:
            f, neg_g, _, cur, resolved = heapq.heappop(heap)
            if resolved:
                return f
            g = -neg_g
            if best_g.get(cur, g) < g:
                continue
            expanded += 1
            if expanded > self.config.node_limit:
                raise ResourceLimitError(f"A* exceeded {self.config.node_limit} expansions")
            for child in self.children(cur):
                cg = g + 1
                if best_g.get(child, cg + 1) <= cg:
                    continue
                best_g[child] = cg
                ch, cexact = self.estimate(child)
                cf = cg + ch
                if upper is not None and cf > upper:
                    continue
                heapq.heappush(heap, (cf, -cg, next(tie), child, cexact))
        if upper is not None:
            return upper
        raise RuntimeError("search space exhausted without reaching the sorted stack")


def _upper_bound(stack) -> int:
    from .sorters import sort_greedy_lookahead, sort_unburnt_randomized

    if isinstance(stack, BurntStack):
        return sort_greedy_lookahead(stack).flips_used
    return sort_unburnt_randomized(stack, seed=0).flips_used


def astar_distance(stack, config: SolverConfig | None = None) -> int:
    """Exact flip distance of a burnt or unburnt stack."""
    config = config or SolverConfig()
    variant = variant_of(stack)
    if variant == "mixed":
        raise TypeError("A* works on burnt or unburnt stacks")
    search = _Search(variant, config)
    state = search.reduce(tuple(stack))
    return search.distance(state, _upper_bound(stack))


# --- candidate sets ---------------------------------------------------------

@dataclass(frozen=True)
class CandidateSet:
    n: int
    variant: str
    m_min: int
    stacks: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.stacks)

    def __contains__(self, stack) -> bool:
        return rank(stack) in self.stacks

    def __iter__(self):
        for r in sorted(self.stacks):
            yield unrank(r, self.n, self.variant)


def _source_stacks(prev, m: int) -> tuple[int | None, list]:
    """Stacks of size n-1 needing at least m-2 flips, with their size."""
    lo = m - 2
    if isinstance(prev, DistanceTable):
        stacks = []
        for d in range(max(lo, 0), prev.max_distance + 1):
            stacks.extend(prev.stacks_at(d))
        return prev.n, stacks
    slices: Mapping[int, Iterable] = prev
    if not slices:
        return None, []
    top = max(slices)
    missing = [d for d in range(max(lo, 0), top + 1) if d not in slices]
    if missing or min(slices) > max(lo, 0):
        raise ValueError(f"slices must cover every distance from {lo} to {top}; missing {missing}")
    stacks = []
    for d in range(max(lo, 0), top + 1):
        stacks.extend(slices[d])
    sizes = {len(s) for s in stacks}
    if len(sizes) > 1:
        raise ValueError("slices mix stack sizes")
    return (sizes.pop() if sizes else None), stacks


def candidate_set_unburnt(prev, m: int) -> CandidateSet:
    """Superset of the unburnt stacks of size n needing at least ``m`` flips."""
    size, sources = _source_stacks(prev, m)
    if size is None:
        return CandidateSet(0, "unburnt", m)
    n = size + 1
    found = set()
    for src in sources:
        base = UnburntStack._trusted(tuple(src) + (n,))
        found.add(rank(base))
        top = flip(base, n)
        found.add(rank(top))
        for i in range(2, n + 1):
            found.add(rank(flip(top, i)))
    return CandidateSet(n, "unburnt", m, frozenset(found))


def candidate_set_burnt(prev, m: int) -> CandidateSet:
    """Superset of the burnt stacks of size n needing at least ``m`` flips.

    Every such stack other than the all-upside-down one reaches an adjacency
    within two flips, so it is found by splitting a pancake of a shorter stack
    and undoing at most two flips.
    """
    size, sources = _source_stacks(prev, m)
    if size is None:
        return CandidateSet(0, "burnt", m)
    n = size + 1
    found = {rank(make_special("negidentity", n))}
    for src in sources:
        seeds = [expand(src, p) for p in range(1, n)]
        seeds.append(BurntStack._trusted(tuple(src) + (n,)))
        for s in seeds:
            found.add(rank(s))
            for i in range(1, n + 1):
                s1 = flip(s, i)
                found.add(rank(s1))
                for j in range(1, n + 1):
                    if j != i:
                        found.add(rank(flip(s1, j)))
    return CandidateSet(n, "burnt", m, frozenset(found))


def candidate_set(prev, m: int, variant: str) -> CandidateSet:
    if variant == "burnt":
        return candidate_set_burnt(prev, m)
    return candidate_set_unburnt(prev, m)


def distance_slices(n: int, variant: str, lo: int, config: SolverConfig | None = None,
                    bfs_limit: int | None = None) -> dict[int, list]:
    """Every stack of size ``n`` needing at least ``lo`` flips, grouped by distance.

    Sizes up to ``bfs_limit`` come straight from a BFS table; larger ones are
    built from the slices one size down through candidate sets and A*.
    """
    config = config or SolverConfig()
    if bfs_limit is None:
        bfs_limit = config.endgame_table_size
    if n <= bfs_limit:
        return bfs_distances(n, variant).slices(lo)
    prev = distance_slices(n - 1, variant, lo - 2, config, bfs_limit)
    cands = candidate_set(prev, lo, variant)
    out: dict[int, list] = {}
    for stack in cands:
        d = astar_distance(stack, config)
        if d >= lo:
            out.setdefault(d, []).append(stack)
    if not out:
        return {}
    return {d: out.get(d, []) for d in range(max(lo, 0), max(out) + 1)}


def max_flips(n: int, variant: str = "burnt", config: SolverConfig | None = None,
              method: str = "auto", bfs_limit: int | None = None) -> tuple[int, list]:
    """Largest flip distance over all stacks of size ``n`` and every stack attaining it."""
    config = config or SolverConfig()
    if method == "auto":
        method = "bfs" if n <= (8 if variant == "burnt" else 10) else "candidates"
    if method == "bfs":
        table = bfs_distances(n, variant)
        top = table.max_distance
        return top, list(table.stacks_at(top))
    if method != "candidates":
        raise ValueError(f"unknown method {method!r}")
    if bfs_limit is None:
        bfs_limit = min(n - 1, 8 if variant == "burnt" else 10)
    if n <= 1:
        return max_flips(n, variant, config, "bfs")
    prev_max, _ = max_flips(n - 1, variant, config, "auto" if n - 1 <= bfs_limit else "candidates", bfs_limit)
    # the maximum never drops and grows by at most two per extra pancake
    for lo in (prev_max + 1, prev_max):
        slices = distance_slices(n, variant, lo, config, bfs_limit)
        if slices:
            top = max(d for d, s in slices.items() if s)
            return top, sorted(slices[top], key=rank)
    raise RuntimeError("candidate search found no stack at the previous maximum")


def verify_trace(stack, flips: Sequence[int] | FlipTrace) -> bool:
    """Whether replaying ``flips`` (sizes or a trace) from ``stack`` yields the sorted stack."""
    if isinstance(flips, FlipTrace):
        flips = flips.flips
    n = len(stack)
    for f in flips:
        if not isinstance(f, (int, np.integer)) or not 0 <= f <= n:
            raise ValueError(f"flip size {f!r} outside 0..{n}")
    if variant_of(stack) == "mixed":
        cur = stack
        for f in flips:
            cur = flip(cur, f)
        return cur.is_sorted()
    a = np.asarray(stack, dtype=np.int64)
    fl = np.asarray(flips, dtype=np.int64)
    if isinstance(stack, BurntStack):
        out = K.replay_signed(a, fl)
    else:
        fl = fl[fl >= 2]
        out = K.replay_plain(a, fl)
    return bool(np.array_equal(out, np.arange(1, n + 1)))
