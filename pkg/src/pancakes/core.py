"""Stack types, flips, adjacency structure, contraction and text I/O.

Burnt stacks are signed permutations listed top first: ``+i`` is pancake ``i``
with its burnt side down, ``-i`` burnt side up.  Unburnt stacks are plain
permutations.  Mixed stacks pair every label with an :class:`Orientation` and
appear while the unburnt sorter contracts adjacent pancakes into burnt ones.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from math import factorial
from typing import Iterator, Sequence, Union


class ParseError(ValueError):
    """Malformed stack text; ``position`` is the 1-based offending token."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"token {position}: {message}"
        super().__init__(message)


class Orientation(enum.IntEnum):
    UP = -1
    UNBURNT = 0
    DOWN = 1


def _check_permutation(labels: Sequence[int], what: str) -> None:
    n = len(labels)
    if n < 1:
        raise ValueError(f"{what} needs at least one pancake")
    seen = [False] * (n + 1)
    for pos, lab in enumerate(labels, 1):
        if not 1 <= lab <= n:
            raise ValueError(f"{what}: label {lab} at position {pos} outside 1..{n}")
        if seen[lab]:
            raise ValueError(f"{what}: label {lab} repeated at position {pos}")
        seen[lab] = True


class BurntStack(tuple):
    """Signed permutation, top first."""

    __slots__ = ()

    def __new__(cls, entries: Sequence[int] = ()):
        entries = tuple(int(e) for e in entries)
        _check_permutation([abs(e) for e in entries], "burnt stack")
        return tuple.__new__(cls, entries)

    @classmethod
    def _trusted(cls, entries) -> "BurntStack":
        return tuple.__new__(cls, entries)

    @property
    def n(self) -> int:
        return len(self)

    def __neg__(self) -> "BurntStack":
        return BurntStack._trusted(-e for e in self)

    def __repr__(self) -> str:
        return f"BurntStack({format_stack(self)!r})"

    def is_sorted(self) -> bool:
        return all(e == i for i, e in enumerate(self, 1))


class UnburntStack(tuple):
    """Permutation of 1..n, top first."""

    __slots__ = ()

    def __new__(cls, entries: Sequence[int] = ()):
        entries = tuple(int(e) for e in entries)
        _check_permutation(entries, "unburnt stack")
        return tuple.__new__(cls, entries)

    @classmethod
    def _trusted(cls, entries) -> "UnburntStack":
        return tuple.__new__(cls, entries)

    @property
    def n(self) -> int:
        return len(self)

    def __repr__(self) -> str:
        return f"UnburntStack({format_stack(self)!r})"

    def is_sorted(self) -> bool:
        return all(e == i for i, e in enumerate(self, 1))


class MixedStack(tuple):
    """Tuple of ``(label, Orientation)`` pairs, top first."""

    __slots__ = ()

    def __new__(cls, entries: Sequence[tuple[int, int]] = ()):
        entries = tuple((int(lab), Orientation(o)) for lab, o in entries)
        _check_permutation([lab for lab, _ in entries], "mixed stack")
        return tuple.__new__(cls, entries)

    @classmethod
    def _trusted(cls, entries) -> "MixedStack":
        return tuple.__new__(cls, entries)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def burnt_count(self) -> int:
        return sum(1 for _, o in self if o != Orientation.UNBURNT)

    def __repr__(self) -> str:
        return f"MixedStack({format_stack(self)!r})"

    def is_sorted(self) -> bool:
        return all(lab == i and o != Orientation.UP for i, (lab, o) in enumerate(self, 1))

    @classmethod
    def from_unburnt(cls, stack: Sequence[int]) -> "MixedStack":
        return cls((lab, Orientation.UNBURNT) for lab in stack)

    @classmethod
    def from_burnt(cls, stack: Sequence[int]) -> "MixedStack":
        return cls((abs(e), Orientation.DOWN if e > 0 else Orientation.UP) for e in stack)


Stack = Union[BurntStack, UnburntStack, MixedStack]


@dataclass(frozen=True)
class FlipTrace:
    """A start stack plus the flip sizes applied to it, in order."""

    start: Stack
    flips: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.flips)

    def replay(self) -> Stack:
        stack = self.start
        for i in self.flips:
            stack = flip(stack, i)
        return stack

    def states(self) -> Iterator[Stack]:
        stack = self.start
        yield stack
        for i in self.flips:
            stack = flip(stack, i)
            yield stack


def variant_of(stack: Stack) -> str:
    if isinstance(stack, BurntStack):
        return "burnt"
    if isinstance(stack, UnburntStack):
        return "unburnt"
    if isinstance(stack, MixedStack):
        return "mixed"
    raise TypeError(f"not a stack: {stack!r}")


def identity(n: int, variant: str = "burnt") -> Stack:
    if variant == "burnt":
        return BurntStack(range(1, n + 1))
    if variant == "unburnt":
        return UnburntStack(range(1, n + 1))
    raise ValueError(f"unknown variant {variant!r}")


def make_special(kind: str, n: int) -> BurntStack:
    """Identity, NegIdentity, J (top pancake turned over) or Y (second lowest turned over)."""
    if n < 1:
        raise ValueError("stack size must be at least 1")
    key = kind.lower().replace("-", "").replace("_", "")
    if key in ("identity", "i"):
        return BurntStack(range(1, n + 1))
    neg = [-i for i in range(1, n + 1)]
    if key in ("negidentity", "negi"):
        return BurntStack(neg)
    if key == "j":
        neg[0] = 1
        return BurntStack(neg)
    if key == "y":
        if n < 2:
            raise ValueError("Y stack needs n >= 2")
        neg[n - 2] = n - 1
        return BurntStack(neg)
    raise ValueError(f"unknown special stack {kind!r}")


def flip(stack: Stack, i: int) -> Stack:
    """Reverse the top ``i`` pancakes, turning burnt ones over."""
    n = len(stack)
    if i < 0 or i > n:
        raise ValueError(f"flip size {i} outside 0..{n}")
    if isinstance(stack, BurntStack):
        return BurntStack._trusted(tuple(-e for e in reversed(stack[:i])) + stack[i:])
    if isinstance(stack, UnburntStack):
        if i <= 1:
            return stack
        return UnburntStack._trusted(stack[i - 1::-1] + stack[i:])
    if isinstance(stack, MixedStack):
        top = tuple((lab, Orientation(-o)) for lab, o in reversed(stack[:i]))
        return MixedStack._trusted(top + stack[i:])
    raise TypeError(f"not a stack: {stack!r}")


def apply_flips(stack: Stack, flips: Sequence[int]) -> Stack:
    for i in flips:
        stack = flip(stack, i)
    return stack


# --- adjacency structure ----------------------------------------------------

def successor(value: int, n: int, cyclic: bool) -> int:
    """Signed value that must sit directly below ``value`` to form an adjacency.

    Returns 0 when no pancake qualifies (non-cyclic ``-1`` and ``+n``).
    """
    nxt = value + 1
    if cyclic:
        if value == n:
            return 1
        if value == -1:
            return -n
    elif value == n:
        return 0
    return nxt


def is_adjacent(upper: int, lower: int, n: int, cyclic: bool = False) -> bool:
    return lower == successor(upper, n, cyclic)


def is_anti_adjacent(upper: int, lower: int, n: int, cyclic: bool = False) -> bool:
    return -lower == successor(-upper, n, cyclic)


@dataclass(frozen=True)
class StructureReport:
    """Positions are 1-based; a pair at position p means positions p and p+1."""

    n: int
    adjacencies: tuple[int, ...]
    anti_adjacencies: tuple[int, ...]
    blocks: tuple[tuple[int, int], ...]
    clans: tuple[tuple[int, int], ...]
    free: tuple[int, ...]

    @property
    def block_surface(self) -> tuple[bool, ...]:
        return tuple(start == 1 for start, _ in self.blocks)

    @property
    def clan_surface(self) -> tuple[bool, ...]:
        return tuple(start == 1 for start, _ in self.clans)

    @property
    def deep_blocks(self) -> int:
        return sum(1 for start, _ in self.blocks if start != 1)

    @property
    def deep_clans(self) -> int:
        return sum(1 for start, _ in self.clans if start != 1)


def _runs(pairs: Sequence[int]) -> tuple[tuple[int, int], ...]:
    runs = []
    for p in pairs:
        if runs and runs[-1][1] == p:
            runs[-1][1] = p + 1
        else:
            runs.append([p, p + 1])
    return tuple((a, b) for a, b in runs)


def analyze_structure(stack: BurntStack, cyclic: bool = False) -> StructureReport:
    n = len(stack)
    adj = tuple(p for p in range(1, n) if is_adjacent(stack[p - 1], stack[p], n, cyclic))
    anti = tuple(p for p in range(1, n) if is_anti_adjacent(stack[p - 1], stack[p], n, cyclic))
    blocks = _runs(adj)
    clans = _runs(anti)
    covered = set()
    for a, b in blocks + clans:
        covered.update(range(a, b + 1))
    free = tuple(p for p in range(1, n + 1) if p not in covered)
    return StructureReport(n, adj, anti, blocks, clans, free)


def adjacency_count(stack: BurntStack, cyclic: bool = False) -> int:
    n = len(stack)
    return sum(1 for p in range(1, n) if is_adjacent(stack[p - 1], stack[p], n, cyclic))


def single_flip_adjacency(stack: BurntStack, cyclic: bool = False) -> int | None:
    """Size of the unique flip that turns the top pancake into a new adjacency."""
    n = len(stack)
    target = successor(-stack[0], n, cyclic)
    if target == 0:
        return None
    for pos in range(2, n + 1):
        if stack[pos - 1] == target:
            return pos - 1
    return None


# --- contraction ------------------------------------------------------------

def mixed_adjacent(stack: MixedStack, p: int) -> bool:
    """Whether the pair at positions ``p, p+1`` can be oriented into an adjacency."""
    (ua, uo), (la, lo) = stack[p - 1], stack[p]
    if abs(ua - la) != 1:
        return False
    uppers = (-ua, ua) if uo == Orientation.UNBURNT else (ua * uo,)
    lowers = (-la, la) if lo == Orientation.UNBURNT else (la * lo,)
    return any(lw == up + 1 for up in uppers for lw in lowers)


def contract(stack: BurntStack | MixedStack, p: int) -> BurntStack | MixedStack:
    """Merge the adjacent pair at positions ``p, p+1`` into one pancake.

    The merged pancake takes the smaller label; labels above the larger one
    drop by one.  A merged mixed pair becomes burnt, burnt side toward the
    member with the higher label.
    """
    n = len(stack)
    if not 1 <= p < n:
        raise ValueError(f"pair position {p} outside 1..{n - 1}")
    if isinstance(stack, BurntStack):
        upper, lower = stack[p - 1], stack[p]
        if lower != upper + 1:
            raise ValueError(f"pancakes at {p} and {p + 1} are not adjacent")
        merged = upper if upper > 0 else lower
        gone = abs(merged) + 1
        out = [e if abs(e) < gone else (e - 1 if e > 0 else e + 1) for e in stack]
        out[p - 1] = merged
        del out[p]
        return BurntStack._trusted(out)
    if isinstance(stack, MixedStack):
        if not mixed_adjacent(stack, p):
            raise ValueError(f"pancakes at {p} and {p + 1} are not adjacent")
        ua, la = stack[p - 1][0], stack[p][0]
        low, gone = min(ua, la), max(ua, la)
        orient = Orientation.DOWN if la > ua else Orientation.UP
        out = [(lab - 1 if lab > gone else lab, o) for lab, o in stack]
        out[p - 1] = (low, orient)
        del out[p]
        return MixedStack._trusted(out)
    raise TypeError("contraction needs a burnt or mixed stack")


def expand(stack: BurntStack, p: int) -> BurntStack:
    """Inverse of :func:`contract`: split the pancake at ``p`` into an adjacent pair."""
    n = len(stack)
    if not 1 <= p <= n:
        raise ValueError(f"position {p} outside 1..{n}")
    s = stack[p - 1]
    k = abs(s)
    out = [e if abs(e) <= k else (e + 1 if e > 0 else e - 1) for e in stack]
    pair = [k, k + 1] if s > 0 else [-(k + 1), -k]
    out[p - 1:p] = pair
    return BurntStack._trusted(out)


def cyclic_renumber(stack: BurntStack | MixedStack) -> BurntStack | MixedStack:
    """Shift labels cyclically so that the top pancake is numbered 2."""
    n = len(stack)
    if isinstance(stack, BurntStack):
        s = 2 - abs(stack[0])
        out = []
        for e in stack:
            lab = (abs(e) + s - 1) % n + 1
            out.append(lab if e > 0 else -lab)
        return BurntStack._trusted(out)
    if isinstance(stack, MixedStack):
        s = 2 - stack[0][0]
        return MixedStack._trusted(((lab + s - 1) % n + 1, o) for lab, o in stack)
    raise TypeError("renumbering needs a burnt or mixed stack")


# --- ranking ----------------------------------------------------------------

def state_count(n: int, variant: str) -> int:
    if variant == "burnt":
        return factorial(n) << n
    if variant == "unburnt":
        return factorial(n)
    raise ValueError(f"unknown variant {variant!r}")


def _perm_rank(labels: Sequence[int]) -> int:
    n = len(labels)
    r = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if labels[j] < labels[i])
        r = r * (n - i) + smaller
    return r


def _perm_unrank(index: int, n: int) -> list[int]:
    digits = []
    for radix in range(1, n + 1):
        index, d = divmod(index, radix)
        digits.append(d)
    digits.reverse()
    pool = list(range(1, n + 1))
    return [pool.pop(d) for d in digits]


def rank(stack: BurntStack | UnburntStack) -> int:
    """Lehmer index of the permutation, times 2**n plus orientation bits when burnt.

    Bit ``k`` (counting from the top pancake as the most significant) is set
    when that pancake is burnt side up.
    """
    if isinstance(stack, BurntStack):
        bits = 0
        for e in stack:
            bits = (bits << 1) | (e < 0)
        return (_perm_rank([abs(e) for e in stack]) << len(stack)) | bits
    if isinstance(stack, UnburntStack):
        return _perm_rank(stack)
    raise TypeError("ranking needs a burnt or unburnt stack")


def unrank(index: int, n: int, variant: str = "burnt") -> BurntStack | UnburntStack:
    total = state_count(n, variant)
    if not 0 <= index < total:
        raise ValueError(f"index {index} outside 0..{total - 1}")
    if variant == "unburnt":
        return UnburntStack._trusted(_perm_unrank(index, n))
    perm = _perm_unrank(index >> n, n)
    bits = index & ((1 << n) - 1)
    out = [-lab if (bits >> (n - 1 - k)) & 1 else lab for k, lab in enumerate(perm)]
    return BurntStack._trusted(out)


def all_stacks(n: int, variant: str = "burnt") -> Iterator[BurntStack | UnburntStack]:
    """Every stack of size ``n`` in rank order."""
    for r in range(state_count(n, variant)):
        yield unrank(r, n, variant)


# --- text format ------------------------------------------------------------

_SHORTHAND = re.compile(r"^(-?I|J|Y)(\d+)$")
_TOKEN = re.compile(r"^([+-]?)(\d+)(u?)$")


def parse_stack(text: str) -> Stack:
    """Parse whitespace separated tokens, top first.

    ``"-1 +2"`` is burnt, ``"2 1"`` unburnt, ``"2u -1"`` mixed; ``I5``, ``-I5``,
    ``J5`` and ``Y5`` name the special burnt stacks.
    """
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ParseError("empty stack")
    if len(tokens) == 1:
        m = _SHORTHAND.match(tokens[0])
        if m:
            kind = {"I": "identity", "-I": "negidentity", "J": "J", "Y": "Y"}[m.group(1)]
            try:
                return make_special(kind, int(m.group(2)))
            except ValueError as exc:
                raise ParseError(str(exc), 1) from None
    parsed = []
    for pos, tok in enumerate(tokens, 1):
        m = _TOKEN.match(tok)
        if not m:
            raise ParseError(f"cannot read {tok!r}", pos)
        sign, digits, unburnt = m.groups()
        lab = int(digits)
        if lab == 0:
            raise ParseError("pancake 0 does not exist", pos)
        if unburnt and sign:
            raise ParseError(f"unburnt token {tok!r} cannot carry a sign", pos)
        parsed.append((sign, lab, bool(unburnt)))
    n = len(parsed)
    seen = {}
    for pos, (_, lab, _) in enumerate(parsed, 1):
        if lab > n:
            raise ParseError(f"label {lab} exceeds stack size {n}", pos)
        if lab in seen:
            raise ParseError(f"label {lab} already used at token {seen[lab]}", pos)
        seen[lab] = pos
    if any(u for _, _, u in parsed):
        return MixedStack._trusted(
            (lab, Orientation.UNBURNT if u else (Orientation.UP if s == "-" else Orientation.DOWN))
            for s, lab, u in parsed
        )
    if any(s for s, _, _ in parsed):
        return BurntStack._trusted(-lab if s == "-" else lab for s, lab, _ in parsed)
    return UnburntStack._trusted(lab for _, lab, _ in parsed)


def format_stack(stack: Stack) -> str:
    if isinstance(stack, BurntStack):
        return " ".join(f"{e:+d}" for e in stack)
    if isinstance(stack, UnburntStack):
        return " ".join(str(e) for e in stack)
    if isinstance(stack, MixedStack):
        return " ".join(
            f"{lab}u" if o == Orientation.UNBURNT else f"{lab * int(o):+d}" for lab, o in stack
        )
    raise TypeError(f"not a stack: {stack!r}")


def to_unburnt(stack: Stack) -> UnburntStack:
    """Drop orientations (shorthands like ``I5`` parse as burnt)."""
    if isinstance(stack, UnburntStack):
        return stack
    if isinstance(stack, BurntStack):
        return UnburntStack._trusted(abs(e) for e in stack)
    return UnburntStack._trusted(lab for lab, _ in stack)
