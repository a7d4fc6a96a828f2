"""Average-case sorting algorithms.

* :func:`sort_burnt_average` - deterministic burnt sorter built on a fixed
  case table after cyclically renumbering the top pancake to 2.
* :func:`sort_unburnt_randomized` - the same idea for unburnt stacks, where
  joined pancakes become burnt and a fair coin picks which neighbour to join.
* :func:`sort_greedy_lookahead` - greedy adjacency creation with one flip of
  lookahead when no adjacency can be made directly.

Each returns a :class:`SortOutcome` whose trace replays to the sorted stack.
Flips of size 1 on an unburnt pancake do nothing and are never recorded.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels as K
from .core import (
    BurntStack,
    FlipTrace,
    MixedStack,
    Orientation,
    UnburntStack,
    flip,
)


@dataclass(frozen=True)
class SortOutcome:
    trace: FlipTrace
    iterations: int

    @property
    def flips_used(self) -> int:
        return len(self.trace.flips)


# --- finishing --------------------------------------------------------------

def _natural_cuts(real: Sequence[int], burnt: bool) -> set[int]:
    cuts = set()
    for c in range(1, len(real)):
        x, y = real[c - 1], real[c]
        joined = (y == x + 1) if burnt else abs(x - y) == 1
        if not joined:
            cuts.add(c)
    return cuts


def _segment_stack(real: Sequence[int], cuts: set[int], burnt: bool):
    """Cut ``real`` into runs of consecutive pancakes; returns (small stack, run lengths)."""
    n = len(real)
    bounds = [0] + sorted(c for c in cuts if 0 < c < n) + [n]
    runs = [real[a:b] for a, b in zip(bounds, bounds[1:])]
    order = sorted(range(len(runs)), key=lambda k: min(abs(v) for v in runs[k]))
    label = {k: i + 1 for i, k in enumerate(order)}
    lengths = tuple(len(r) for r in runs)
    if burnt:
        small = BurntStack._trusted(label[k] if runs[k][0] > 0 else -label[k] for k in range(len(runs)))
        return small, lengths
    entries = []
    for k, run in enumerate(runs):
        if len(run) == 1:
            o = Orientation.UNBURNT
        else:
            o = Orientation.DOWN if run[1] > run[0] else Orientation.UP
        entries.append((label[k], o))
    return MixedStack._trusted(entries), lengths


def _is_goal(stack) -> bool:
    return stack.is_sorted()


@lru_cache(maxsize=100_000)
def _small_solution(small) -> tuple[int, ...]:
    """Shortest flip sequence sorting a small burnt or mixed stack (BFS, smallest flips first)."""
    if _is_goal(small):
        return ()
    r = len(small)
    mixed = isinstance(small, MixedStack)
    parent = {small: None}
    queue = deque([small])
    while queue:
        cur = queue.popleft()
        for k in range(1, r + 1):
            if mixed and k == 1 and cur[0][1] == Orientation.UNBURNT:
                continue
            nxt = flip(cur, k)
            if nxt in parent:
                continue
            parent[nxt] = (cur, k)
            if _is_goal(nxt):
                path = []
                node = nxt
                while parent[node] is not None:
                    node, size = parent[node]
                    path.append(size)
                return tuple(reversed(path))
            queue.append(nxt)
    raise RuntimeError(f"no sorting sequence for {small!r}")


def _finish(real: Sequence[int], cuts: set[int], burnt: bool) -> list[int]:
    """Shortest real flip sequence that keeps every run between cuts intact."""
    cuts = set(cuts) | _natural_cuts(real, burnt)
    small, lengths = _segment_stack(real, cuts, burnt)
    lengths = list(lengths)
    flips = []
    for k in _small_solution(small):
        flips.append(sum(lengths[:k]))
        lengths[:k] = lengths[k - 1::-1]
    return flips


def endgame_finish(stack: BurntStack) -> FlipTrace:
    """Shortest trace for a stack made of at most two runs of consecutive pancakes.

    Such stacks are what remains once a sorter has joined everything into a
    single (possibly cyclically wrapped) run; four flips always suffice.
    """
    cuts = _natural_cuts(stack, True)
    if len(cuts) > 1:
        raise RuntimeError(f"{stack!r} is not an endgame state ({len(cuts) + 1} runs)")
    flips = _finish(list(stack), cuts, True)
    if len(flips) > 4:
        raise RuntimeError(f"endgame needed {len(flips)} flips")
    return FlipTrace(stack, tuple(flips))


# --- sorters ----------------------------------------------------------------

def _check(code: int, what: str) -> None:
    if code < 0:
        raise RuntimeError(f"{what} kernel failed with code {code}")


def burnt_average_flips(entries: np.ndarray) -> tuple[list[int], int]:
    """Flip sizes chosen by the burnt average-case sorter (array is consumed)."""
    n = entries.shape[0]
    out = np.empty(4 * n + 8, np.int64)
    w = np.empty(n, np.int64)
    nf, m = K.burnt_average(entries, out, w)
    _check(nf, "burnt average")
    cuts = set(np.cumsum(w[:m])[:-1].tolist())
    flips = out[:nf].tolist() + _finish(entries.tolist(), cuts, True)
    return flips, n - m


def sort_burnt_average(stack: BurntStack) -> SortOutcome:
    flips, iterations = burnt_average_flips(np.array(stack, dtype=np.int64))
    return SortOutcome(FlipTrace(stack, tuple(flips)), iterations)


def _coins_for(n: int, seed) -> np.ndarray:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.integers(0, 2, size=max(n, 1)).astype(np.int64)


def unburnt_randomized_flips(entries: np.ndarray, coins: np.ndarray) -> tuple[list[int], int]:
    n = entries.shape[0]
    out = np.empty(3 * n + 8, np.int64)
    lab = np.empty(n, np.int64)
    ori = np.empty(n, np.int64)
    w = np.empty(n, np.int64)
    nf, m = K.unburnt_randomized(entries, coins, out, lab, ori, w)
    _check(nf, "unburnt randomized")
    cuts = set(np.cumsum(w[:m])[:-1].tolist())
    flips = out[:nf].tolist() + _finish(entries.tolist(), cuts, False)
    return flips, n - m


def sort_unburnt_randomized(stack: UnburntStack, seed=0, coins: Sequence[int] | None = None) -> SortOutcome:
    """Sort with the randomized algorithm.

    ``seed`` is an integer or a ``numpy.random.Generator``; ``coins`` overrides
    the random bits (one per iteration, 0 joins pancake 1 and 1 joins pancake 3).
    """
    n = len(stack)
    if coins is None:
        bits = _coins_for(n, seed)
    else:
        bits = np.zeros(max(n, 1), np.int64)
        bits[: len(coins)] = coins
    flips, iterations = unburnt_randomized_flips(np.array(stack, dtype=np.int64), bits)
    return SortOutcome(FlipTrace(stack, tuple(flips)), iterations)


def greedy_lookahead_flips(entries: np.ndarray) -> list[int]:
    n = entries.shape[0]
    out = np.empty(4 * n * n + 16, np.int64)
    nf = K.greedy_lookahead(entries, out)
    _check(nf, "greedy lookahead")
    return out[:nf].tolist() + _finish(entries.tolist(), set(), True)


def sort_greedy_lookahead(stack: BurntStack) -> SortOutcome:
    entries = np.array(stack, dtype=np.int64)
    out = np.empty(4 * len(stack) ** 2 + 16, np.int64)
    nf = K.greedy_lookahead(entries, out)
    _check(nf, "greedy lookahead")
    tail = endgame_finish(BurntStack._trusted(entries.tolist()))
    return SortOutcome(FlipTrace(stack, tuple(out[:nf].tolist()) + tail.flips), nf)
