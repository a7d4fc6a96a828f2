"""Average-flip measurements, adjacency statistics and closed-form reference bounds."""

from __future__ import annotations

import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .core import BurntStack, UnburntStack, all_stacks
from .potential import neg_identity_bound
from .sorters import burnt_average_flips, greedy_lookahead_flips, unburnt_randomized_flips

ALGORITHMS = ("burnt-avg", "unburnt-rand", "greedy")
_VARIANT = {"burnt-avg": "burnt", "unburnt-rand": "unburnt", "greedy": "burnt"}
EXHAUSTIVE_LIMIT = {"burnt": 7, "unburnt": 8}


def random_stack(n: int, variant: str, rng: np.random.Generator):
    """Uniformly random stack: a shuffled permutation plus one fair bit per pancake if burnt."""
    if n < 1:
        raise ValueError("n must be positive")
    labels = rng.permutation(n) + 1
    if variant == "unburnt":
        return UnburntStack._trusted(labels.tolist())
    if variant != "burnt":
        raise ValueError(f"unknown variant {variant!r}")
    signs = 1 - 2 * rng.integers(0, 2, size=n)
    return BurntStack._trusted((labels * signs).tolist())


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one sample, so results do not depend on how work is split."""
    return np.random.default_rng([seed, index])


# --- reference bounds -------------------------------------------------------

@dataclass(frozen=True)
class ReferenceBounds:
    n: int
    b: int
    burnt_avg_lb: float | None
    burnt_avg_ub: Fraction
    unburnt_avg_ub: Fraction
    av_plus: Fraction
    unburnt_avg_lb: int
    neg_identity_lb: int


def av_plus(n: int, b: int) -> Fraction:
    return Fraction(17 * n, 12) + Fraction(7 * b, 12) - Fraction((n - b + 1) * b, 6 * n) + 9


def reference_bounds(n: int, b: int = 0) -> ReferenceBounds:
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 <= b <= n:
        raise ValueError("burnt count must lie in 0..n")
    lb = n + n / (16 * math.log2(n)) - 1.5 if n >= 16 else None
    return ReferenceBounds(
        n=n,
        b=b,
        burnt_avg_lb=lb,
        burnt_avg_ub=Fraction(7 * n, 4) + 5,
        unburnt_avg_ub=av_plus(n, 0),
        av_plus=av_plus(n, b),
        unburnt_avg_lb=n - 2,
        neg_identity_lb=neg_identity_bound(n),
    )


def _report_bounds(algorithm: str, n: int) -> tuple[float | None, float | None]:
    if n < 2:
        return None, None
    ref = reference_bounds(n)
    if algorithm == "burnt-avg":
        return float(ref.burnt_avg_ub), ref.burnt_avg_lb
    if algorithm == "unburnt-rand":
        return float(ref.unburnt_avg_ub), float(ref.unburnt_avg_lb)
    return None, ref.burnt_avg_lb


# --- average flips ----------------------------------------------------------

@dataclass(frozen=True)
class ExperimentReport:
    algorithm: str
    n: int
    mode: str
    sample_count: int
    seed: int
    mean: float
    std: float
    min: int
    max: int
    bound_ub: float | None
    bound_lb: float | None

    CSV_HEADER = "algo,n,samples,seed,mean,std,min,max,bound_ub,bound_lb"

    def csv_row(self) -> str:
        fields = (self.algorithm, self.n, self.sample_count, self.seed, self.mean,
                  self.std, self.min, self.max, self.bound_ub, self.bound_lb)
        return ",".join("" if f is None else repr(f) if isinstance(f, float) else str(f) for f in fields)

    def to_csv(self) -> str:
        return f"{self.CSV_HEADER}\n{self.csv_row()}\n"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        out = io.StringIO()
        out.write(f"{self.algorithm} n={self.n} {self.mode} samples={self.sample_count} seed={self.seed}\n")
        out.write(f"  mean {self.mean:.4f}  std {self.std:.4f}  min {self.min}  max {self.max}\n")
        if self.bound_ub is not None:
            out.write(f"  upper bound {self.bound_ub:.4f}\n")
        if self.bound_lb is not None:
            out.write(f"  lower bound {self.bound_lb:.4f}\n")
        return out.getvalue()


def _run_one(algorithm: str, entries, coins=None) -> int:
    """Sort one stack, check the trace, and return its length."""
    start = np.asarray(entries, dtype=np.int64)
    work = start.copy()
    if algorithm == "burnt-avg":
        flips, _ = burnt_average_flips(work)
    elif algorithm == "greedy":
        flips = greedy_lookahead_flips(work)
    else:
        flips, _ = unburnt_randomized_flips(work, coins)
    fl = np.asarray(flips, dtype=np.int64)
    end = K.replay_plain(start, fl) if algorithm == "unburnt-rand" else K.replay_signed(start, fl)
    if not np.array_equal(end, np.arange(1, start.shape[0] + 1)):
        raise AssertionError(f"{algorithm} produced an unsorted result for {start.tolist()}")
    return len(flips)


def _sampled_chunk(algorithm: str, n: int, seed: int, indices: range) -> list[int]:
    variant = _VARIANT[algorithm]
    counts = []
    for idx in indices:
        rng = sample_rng(seed, idx)
        stack = random_stack(n, variant, rng)
        coins = rng.integers(0, 2, size=n).astype(np.int64) if algorithm == "unburnt-rand" else None
        counts.append(_run_one(algorithm, stack, coins))
    return counts


def _exhaustive_counts(algorithm: str, n: int) -> list[int]:
    variant = _VARIANT[algorithm]
    counts = []
    if algorithm != "unburnt-rand":
        for stack in all_stacks(n, variant):
            counts.append(_run_one(algorithm, stack))
        return counts
    # one coin per iteration and at most n-2 iterations, so this covers every branch equally
    width = max(n - 2, 0)
    coin_rows = [np.array(bits + (0,) * (n - width), dtype=np.int64)
                 for bits in itertools.product((0, 1), repeat=width)]
    for stack in all_stacks(n, variant):
        for coins in coin_rows:
            counts.append(_run_one(algorithm, stack, coins))
    return counts


def average_flips(algorithm: str, n: int, mode: str = "sampled", samples: int = 1000,
                  seed: int = 0, threads: int = 1) -> ExperimentReport:
    """Mean trace length of ``algorithm`` over every stack or over seeded samples.

    Exhaustive runs of the randomized sorter also average over every coin
    sequence, which gives its exact expected flip count.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if n < 1:
        raise ValueError("n must be positive")
    variant = _VARIANT[algorithm]
    if mode == "exhaustive":
        if n > EXHAUSTIVE_LIMIT[variant]:
            raise ValueError(f"exhaustive {variant} runs are limited to n <= {EXHAUSTIVE_LIMIT[variant]}")
        counts = _exhaustive_counts(algorithm, n)
    elif mode == "sampled":
        if samples < 1:
            raise ValueError("samples must be positive")
        if threads <= 1:
            counts = _sampled_chunk(algorithm, n, seed, range(samples))
        else:
            step = -(-samples // threads)
            chunks = [range(a, min(a + step, samples)) for a in range(0, samples, step)]
            with ThreadPoolExecutor(threads) as pool:
                parts = pool.map(lambda r: _sampled_chunk(algorithm, n, seed, r), chunks)
            counts = [c for part in parts for c in part]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    arr = np.asarray(counts, dtype=np.float64)
    ub, lb = _report_bounds(algorithm, n)
    return ExperimentReport(
        algorithm=algorithm,
        n=n,
        mode=mode,
        sample_count=len(counts),
        seed=seed,
        mean=float(arr.mean()),
        std=float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
        min=int(arr.min()),
        max=int(arr.max()),
        bound_ub=ub,
        bound_lb=lb,
    )


# --- adjacency statistics ---------------------------------------------------

@dataclass(frozen=True)
class AdjacencyStats:
    n: int
    variant: str
    samples: int
    mean: float
    stderr: float
    closed_form: Fraction


def adjacency_closed_form(n: int, variant: str) -> Fraction:
    if variant == "burnt":
        return Fraction(n - 1, 2 * n)
    return Fraction(1, n) + Fraction(2 * (n - 1), n)


def _adjacency_counts(stacks: np.ndarray, variant: str) -> np.ndarray:
    n = stacks.shape[1]
    upper, lower = stacks[:, :-1], stacks[:, 1:]
    if variant == "burnt":
        return (lower == upper + 1).sum(axis=1)
    return (np.abs(lower - upper) == 1).sum(axis=1) + (stacks[:, -1] == n)


def adjacency_stats(n: int, variant: str, samples: int | None = 10_000, seed: int = 0) -> AdjacencyStats:
    """Empirical mean adjacency count next to its closed form.

    Burnt stacks count internal adjacencies only; unburnt stacks also count a
    largest pancake lying on the plate. ``samples=None`` enumerates every stack.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if samples is None:
        stacks = np.array(list(all_stacks(n, variant)), dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        stacks = rng.permuted(np.tile(np.arange(1, n + 1), (samples, 1)), axis=1)
        if variant == "burnt":
            stacks = stacks * (1 - 2 * rng.integers(0, 2, size=stacks.shape))
    counts = _adjacency_counts(stacks, variant).astype(np.float64)
    k = counts.shape[0]
    stderr = float(counts.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
    return AdjacencyStats(n, variant, k, float(counts.mean()), stderr, adjacency_closed_form(n, variant))
