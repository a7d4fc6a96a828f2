"""Potential function lower bounds for burnt stacks.

All arithmetic is carried out in thirds so that every quantity is an integer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BurntStack, analyze_structure, flip


@dataclass(frozen=True)
class PotentialBreakdown:
    a: int
    a_minus: int
    b: int
    b_minus: int
    o: int
    o_minus: int
    l: int
    l_minus: int
    ll: int
    ll_minus: int

    @property
    def value_thirds(self) -> int:
        return (
            3 * (self.a - self.a_minus)
            - (self.b - self.b_minus)
            + (self.o - self.o_minus)
            + 3 * (self.l - self.l_minus)
            + (self.ll - self.ll_minus)
        )


def _components(stack: BurntStack) -> tuple[int, int, int, int, int]:
    """(adjacencies, deep blocks, o, l, ll) of a single stack."""
    n = len(stack)
    rep = analyze_structure(stack)
    in_block = set()
    for start, end in rep.blocks:
        in_block.update(range(start, end + 1))
    top_free_up_one = stack[0] == -1 and 1 in rep.free
    one_pos = next(p for p, e in enumerate(stack, 1) if abs(e) == 1)
    o = int(top_free_up_one or one_pos in in_block)
    l = int(stack[-1] == n)
    ll = int(n >= 2 and stack[-1] == n and stack[-2] == n - 1)
    return len(rep.adjacencies), rep.deep_blocks, o, l, ll


def potential(stack: BurntStack) -> PotentialBreakdown:
    a, b, o, l, ll = _components(stack)
    am, bm, om, lm, llm = _components(-stack)
    return PotentialBreakdown(a, am, b, bm, o, om, l, lm, ll, llm)


def identity_value_thirds(n: int) -> int:
    """Three times the potential of the sorted stack of size ``n >= 2``."""
    return 3 * n + 2


def delta_v(stack: BurntStack, i: int) -> int:
    """Potential change, in thirds, caused by an ``i``-flip."""
    return potential(flip(stack, i)).value_thirds - potential(stack).value_thirds


def lower_bound_potential(stack: BurntStack) -> int:
    n = len(stack)
    if n == 1:
        return 0 if stack[0] == 1 else 1
    gap = identity_value_thirds(n) - potential(stack).value_thirds
    # each flip raises the potential by at most 4 thirds
    return max(0, -(-gap // 4))


def neg_identity_bound(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return 3 * (n + 1) // 2
