import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pancakes.core import (
    BurntStack,
    MixedStack,
    Orientation,
    ParseError,
    UnburntStack,
    adjacency_count,
    all_stacks,
    analyze_structure,
    apply_flips,
    contract,
    cyclic_renumber,
    expand,
    flip,
    format_stack,
    identity,
    make_special,
    mixed_adjacent,
    parse_stack,
    rank,
    single_flip_adjacency,
    state_count,
    successor,
    unrank,
)
from pancakes.exact import bfs_distances

from .conftest import burnt_stacks, mixed_stacks, unburnt_stacks

D, U, N = Orientation.DOWN, Orientation.UP, Orientation.UNBURNT


# --- construction -----------------------------------------------------------

def test_special_stacks():
    assert make_special("negidentity", 3) == (-1, -2, -3)
    assert make_special("J", 3) == (1, -2, -3)
    assert make_special("Y", 4) == (-1, -2, 3, -4)
    assert make_special("identity", 4) == identity(4)


@pytest.mark.parametrize("kind,n", [("identity", 0), ("negidentity", 0), ("J", 0), ("Y", 1)])
def test_special_stack_rejects_bad_size(kind, n):
    with pytest.raises(ValueError):
        make_special(kind, n)


@pytest.mark.parametrize("bad", [(), (1, 1), (0, 1), (1, 3), (2, -2)])
def test_burnt_stack_validates(bad):
    with pytest.raises(ValueError):
        BurntStack(bad)


def test_mixed_burnt_count():
    s = MixedStack([(2, N), (1, D), (3, U)])
    assert s.burnt_count == 2
    assert not s.is_sorted()
    assert MixedStack([(1, N), (2, D)]).is_sorted()


# --- flips ------------------------------------------------------------------

def test_flip_examples():
    assert flip(BurntStack((-1, -2, -3)), 3) == (3, 2, 1)
    assert flip(BurntStack((2, 1, -3)), 2) == (-1, -2, -3)
    assert flip(UnburntStack((1, 3, 2)), 0) == (1, 3, 2)
    assert flip(UnburntStack((3, 1, 2)), 1) == (3, 1, 2)


def test_mixed_flip_keeps_unburnt_orientation():
    s = MixedStack([(2, N), (1, D), (3, U)])
    assert flip(s, 2) == MixedStack([(1, U), (2, N), (3, U)])


def test_flip_size_out_of_range():
    with pytest.raises(ValueError):
        flip(identity(3), 4)
    with pytest.raises(ValueError):
        flip(identity(3), -1)


@given(burnt_stacks(), st.data())
def test_flip_is_involution(stack, data):
    i = data.draw(st.integers(0, len(stack)))
    assert flip(flip(stack, i), i) == stack


@given(mixed_stacks(), st.data())
def test_mixed_flip_is_involution(stack, data):
    i = data.draw(st.integers(0, len(stack)))
    assert flip(flip(stack, i), i) == stack


@given(burnt_stacks(min_n=2), st.data())
def test_flip_changes_adjacency_only_at_cut(stack, data):
    n = len(stack)
    i = data.draw(st.integers(1, n))
    after = flip(stack, i)
    adj_before = analyze_structure(stack).adjacencies
    adj_after = analyze_structure(after).adjacencies
    # pairs inside the flipped prefix are reversed and negated, which keeps them adjacent
    inside_before = {p for p in adj_before if p < i}
    inside_after = {i - p for p in adj_after if p < i}
    assert inside_before == inside_after
    assert {p for p in adj_before if p > i} == {p for p in adj_after if p > i}


def test_apply_flips_matches_loop():
    s = make_special("negidentity", 5)
    assert apply_flips(s, [5, 3, 1]) == flip(flip(flip(s, 5), 3), 1)


# --- structure --------------------------------------------------------------

def _ref_structure(stack):
    """Deliberately naive reference for adjacency, blocks, clans and free positions."""
    n = len(stack)
    adj = [p for p in range(1, n) if stack[p] - stack[p - 1] == 1]
    anti = [p for p in range(1, n) if stack[p] - stack[p - 1] == -1]

    def runs(pairs):
        out = []
        for p in pairs:
            for r in out:
                if r[1] == p:
                    r[1] = p + 1
                    break
            else:
                out.append([p, p + 1])
        return [tuple(r) for r in out]

    blocks, clans = runs(adj), runs(anti)
    covered = {q for a, b in blocks + clans for q in range(a, b + 1)}
    return adj, anti, blocks, clans, [p for p in range(1, n + 1) if p not in covered]


def test_structure_examples():
    rep = analyze_structure(identity(5))
    assert len(rep.adjacencies) == 4 and rep.blocks == ((1, 5),) and rep.block_surface == (True,)
    assert rep.clans == ()
    rep = analyze_structure(make_special("negidentity", 5))
    assert rep.adjacencies == () and len(rep.anti_adjacencies) == 4
    assert rep.clans == ((1, 5),) and rep.clan_surface == (True,)
    rep = analyze_structure(BurntStack((2, -1, 3)))
    assert rep.adjacencies == () and rep.anti_adjacencies == () and rep.free == (1, 2, 3)


def test_deep_and_surface_blocks():
    rep = analyze_structure(BurntStack((1, 2, -5, 3, 4)))
    assert rep.blocks == ((1, 2), (4, 5))
    assert rep.block_surface == (True, False)
    assert rep.deep_blocks == 1


@settings(max_examples=300)
@given(burnt_stacks())
def test_structure_matches_reference(stack):
    rep = analyze_structure(stack)
    adj, anti, blocks, clans, free = _ref_structure(stack)
    assert list(rep.adjacencies) == adj
    assert list(rep.anti_adjacencies) == anti
    assert list(rep.blocks) == blocks
    assert list(rep.clans) == clans
    assert list(rep.free) == free


def test_anti_adjacency_is_adjacency_of_negation(rng):
    for _ in range(2000):
        n = int(rng.integers(1, 15))
        s = BurntStack((rng.permutation(n) + 1) * rng.choice([-1, 1], n))
        assert analyze_structure(s).anti_adjacencies == analyze_structure(-s).adjacencies
        assert analyze_structure(s).deep_clans == analyze_structure(-s).deep_blocks


def test_cyclic_successor():
    assert successor(3, 3, cyclic=True) == 1
    assert successor(-1, 3, cyclic=True) == -3
    assert successor(3, 3, cyclic=False) == 0
    assert successor(-2, 3, cyclic=False) == -1
    assert adjacency_count(BurntStack((3, 1, 2)), cyclic=True) == 2
    assert adjacency_count(BurntStack((3, 1, 2)), cyclic=False) == 1


def _brute_single_flip(stack, cyclic):
    base = adjacency_count(stack, cyclic)
    hits = [i for i in range(1, len(stack) + 1) if adjacency_count(flip(stack, i), cyclic) == base + 1]
    return hits


def test_single_flip_adjacency_examples():
    assert single_flip_adjacency(BurntStack((2, -3, -1, 4))) == 2
    s = BurntStack((-2, 4, 3, 1))
    assert single_flip_adjacency(s) == 2
    assert flip(s, 2) == (-4, 2, 3, 1)
    assert single_flip_adjacency(identity(5)) is None


@pytest.mark.parametrize("cyclic", [False, True])
def test_single_flip_adjacency_exhaustive(cyclic):
    for n in range(2, 6):
        for s in all_stacks(n, "burnt"):
            got = single_flip_adjacency(s, cyclic)
            assert _brute_single_flip(s, cyclic) == ([] if got is None else [got])


@pytest.mark.parametrize("cyclic", [False, True])
def test_single_flip_adjacency_random(rng, cyclic):
    n = 12
    for _ in range(5000):
        s = BurntStack((rng.permutation(n) + 1) * rng.choice([-1, 1], n))
        got = single_flip_adjacency(s, cyclic)
        assert _brute_single_flip(s, cyclic) == ([] if got is None else [got])


# --- contraction ------------------------------------------------------------

def test_contract_examples():
    assert contract(BurntStack((3, 1, 2)), 2) == (2, 1)
    assert contract(identity(3), 1) == identity(2)
    assert contract(MixedStack([(2, N), (3, D), (1, N)]), 1) == MixedStack([(2, D), (1, N)])


def test_contract_rejects_non_adjacent():
    with pytest.raises(ValueError):
        contract(BurntStack((1, 3, 2)), 1)


def test_mixed_adjacent_examples():
    assert mixed_adjacent(MixedStack([(2, N), (1, N)]), 1)
    assert not mixed_adjacent(MixedStack([(2, N), (4, N), (1, N), (3, N)]), 1)
    assert mixed_adjacent(MixedStack([(2, D), (3, N), (1, N)]), 1)
    assert not mixed_adjacent(MixedStack([(2, D), (1, N)]), 1)


def _completions(lab, o):
    return [lab, -lab] if o == N else [lab * int(o)]


@given(mixed_stacks(min_n=2))
def test_mixed_adjacent_matches_enumeration(stack):
    for p in range(1, len(stack)):
        (a, oa), (b, ob) = stack[p - 1], stack[p]
        expected = any(y == x + 1 for x in _completions(a, oa) for y in _completions(b, ob))
        assert mixed_adjacent(stack, p) == expected


def test_expand_examples():
    assert expand(BurntStack((1,)), 1) == (1, 2)
    assert expand(BurntStack((-1,)), 1) == (-2, -1)


def test_expand_contract_round_trip_exhaustive():
    for n in range(1, 6):
        for s in all_stacks(n, "burnt"):
            for p in range(1, n + 1):
                assert contract(expand(s, p), p) == s


def test_contraction_preserves_distance():
    for n in range(2, 6):
        big, small = bfs_distances(n, "burnt"), bfs_distances(n - 1, "burnt")
        for s in all_stacks(n, "burnt"):
            for p in analyze_structure(s).adjacencies:
                assert small.distance(contract(s, p)) == big.distance(s)


def test_cyclic_renumber():
    assert cyclic_renumber(BurntStack((3, 1, 2))) == (2, 3, 1)
    s = cyclic_renumber(BurntStack((-5, 1, 2, 3, 4)))
    assert s[0] == -2
    assert cyclic_renumber(s) == s


@given(mixed_stacks(min_n=2))
def test_cyclic_renumber_mixed_keeps_orientation(stack):
    out = cyclic_renumber(stack)
    assert out[0][0] == 2
    assert [o for _, o in out] == [o for _, o in stack]


# --- ranking ----------------------------------------------------------------

def test_rank_of_sorted_is_zero():
    assert rank(identity(3)) == 0
    assert rank(identity(5, "unburnt")) == 0


@pytest.mark.parametrize("variant", ["burnt", "unburnt"])
def test_rank_bijection_small(variant):
    for n in range(1, 5):
        ranks = [rank(s) for s in all_stacks(n, variant)]
        assert sorted(ranks) == list(range(state_count(n, variant)))


def test_rank_round_trip_random(rng):
    n = 10
    for _ in range(20000):
        s = BurntStack((rng.permutation(n) + 1) * rng.choice([-1, 1], n))
        assert unrank(rank(s), n, "burnt") == s
        u = UnburntStack(rng.permutation(n) + 1)
        assert unrank(rank(u), n, "unburnt") == u


def test_unrank_out_of_range():
    with pytest.raises(ValueError):
        unrank(48, 3, "burnt")
    with pytest.raises(ValueError):
        unrank(-1, 3, "unburnt")


# --- text -------------------------------------------------------------------

def test_parse_examples():
    assert parse_stack("-I4") == (-1, -2, -3, -4)
    assert isinstance(parse_stack("3 1 2"), UnburntStack)
    assert format_stack(parse_stack("+2 -1 +3")) == "+2 -1 +3"
    assert parse_stack("2u -3 1u") == MixedStack([(2, N), (3, U), (1, N)])
    assert parse_stack("J3") == (1, -2, -3)


@pytest.mark.parametrize("text,pos", [("1 1", 2), ("0 1", 1), ("1 4 2", 2), ("1 x", 2), ("-2u 1", 1)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_stack(text)
    assert err.value.position == pos


def test_parse_empty():
    with pytest.raises(ParseError):
        parse_stack("   ")


@given(st.one_of(burnt_stacks(), unburnt_stacks(), mixed_stacks()))
def test_parse_format_round_trip(stack):
    text = format_stack(stack)
    back = parse_stack(text)
    if isinstance(stack, BurntStack) and all(e > 0 for e in stack):
        # an all-positive burnt stack reads back as unburnt
        assert tuple(back) == tuple(stack)
    elif isinstance(stack, MixedStack) and stack.burnt_count == len(stack) and all(o == D for _, o in stack):
        assert tuple(back) == tuple(lab for lab, _ in stack)
    elif isinstance(stack, MixedStack) and stack.burnt_count == len(stack):
        assert back == BurntStack(lab * int(o) for lab, o in stack)
    else:
        assert back == stack
    assert " ".join(text.split()) == text


def test_all_stacks_counts():
    assert sum(1 for _ in all_stacks(3, "burnt")) == 48
    assert sum(1 for _ in all_stacks(4, "unburnt")) == 24
    assert len({tuple(s) for s in itertools.islice(all_stacks(4, "burnt"), 1000)}) == 384
    assert np.all(np.array([len(s) for s in all_stacks(3, "burnt")]) == 3)
