import itertools

import pytest
from hypothesis import given, settings

from pancakes.core import BurntStack, UnburntStack, all_stacks, flip, identity
from pancakes.experiments import average_flips
from pancakes.sorters import (
    endgame_finish,
    sort_burnt_average,
    sort_greedy_lookahead,
    sort_unburnt_randomized,
)

from .conftest import burnt_stacks, unburnt_stacks


def _sorted_after(outcome):
    end = outcome.trace.replay()
    return end.is_sorted() and len(end) == len(outcome.trace.start)


def test_already_sorted_inputs():
    assert sort_burnt_average(identity(2)).flips_used == 0
    for n in (1, 5, 30):
        assert sort_greedy_lookahead(identity(n)).flips_used == 0
        out = sort_unburnt_randomized(identity(n, "unburnt"), seed=3)
        assert _sorted_after(out)


@pytest.mark.parametrize("sorter", [sort_burnt_average, sort_greedy_lookahead])
def test_burnt_sorters_exhaustive(sorter):
    for n in range(1, 7):
        for s in all_stacks(n, "burnt"):
            out = sorter(s)
            assert _sorted_after(out), s
            assert out.flips_used == len(out.trace)


def test_unburnt_sorter_exhaustive():
    for n in range(1, 8):
        for k, s in enumerate(all_stacks(n, "unburnt")):
            out = sort_unburnt_randomized(s, seed=k)
            assert _sorted_after(out), s
            assert all(f >= 2 for f in out.trace.flips)


def test_unburnt_sorter_every_coin_string():
    for n in range(2, 7):
        for s in all_stacks(n, "unburnt"):
            for coins in itertools.product((0, 1), repeat=n):
                assert _sorted_after(sort_unburnt_randomized(s, coins=coins))


def test_random_larger_stacks(rng):
    for _ in range(3000):
        n = int(rng.integers(7, 60))
        b = BurntStack((rng.permutation(n) + 1) * rng.choice([-1, 1], n))
        u = UnburntStack(rng.permutation(n) + 1)
        assert _sorted_after(sort_burnt_average(b))
        assert _sorted_after(sort_greedy_lookahead(b))
        assert _sorted_after(sort_unburnt_randomized(u, seed=rng))


@settings(max_examples=200, deadline=None)
@given(burnt_stacks(max_n=40))
def test_burnt_average_one_contraction_per_iteration(stack):
    out = sort_burnt_average(stack)
    assert out.iterations == max(len(stack) - 2, 0)
    assert _sorted_after(out)


@settings(max_examples=200, deadline=None)
@given(unburnt_stacks(max_n=40))
def test_unburnt_sorter_property(stack):
    out = sort_unburnt_randomized(stack, seed=7)
    assert _sorted_after(out)
    assert all(f >= 2 for f in out.trace.flips)


def test_determinism(rng):
    n = 25
    b = BurntStack((rng.permutation(n) + 1) * rng.choice([-1, 1], n))
    u = UnburntStack(rng.permutation(n) + 1)
    assert sort_burnt_average(b) == sort_burnt_average(b)
    assert sort_greedy_lookahead(b) == sort_greedy_lookahead(b)
    assert sort_unburnt_randomized(u, seed=11) == sort_unburnt_randomized(u, seed=11)
    coins = [1] * n
    assert sort_unburnt_randomized(u, coins=coins) == sort_unburnt_randomized(u, coins=coins)


def test_exhaustive_burnt_means_respect_bound():
    for n in range(1, 7):
        rep = average_flips("burnt-avg", n, "exhaustive")
        assert rep.mean <= 7 * n / 4 + 5


def test_exhaustive_unburnt_means_respect_bound():
    # averaged over every stack and every coin sequence
    for n in range(1, 7):
        rep = average_flips("unburnt-rand", n, "exhaustive")
        assert rep.mean <= 17 * n / 12 + 9


def test_unburnt_sampled_n12():
    rep = average_flips("unburnt-rand", 12, samples=100_000, seed=0)
    assert rep.mean <= 26


# --- endgame ----------------------------------------------------------------

def test_endgame_examples():
    assert endgame_finish(identity(6)).flips == ()
    assert endgame_finish(BurntStack((-1,))).flips == (1,)


def test_endgame_all_two_run_states():
    for s in all_stacks(2, "burnt"):
        tr = endgame_finish(s)
        assert len(tr) <= 4 and tr.replay().is_sorted()


def test_endgame_rotations_of_identity():
    n = 9
    for cut in range(n):
        rot = BurntStack(list(range(cut + 1, n + 1)) + list(range(1, cut + 1)))
        for state in (rot, flip(rot, n)):
            tr = endgame_finish(state)
            assert len(tr) <= 4 and tr.replay().is_sorted()


def test_endgame_rejects_scrambled_stack():
    with pytest.raises(RuntimeError):
        endgame_finish(BurntStack((1, 3, 2)))


def test_coin_argument_pads_short_lists():
    stack = UnburntStack((3, 1, 4, 2))
    out = sort_unburnt_randomized(stack, coins=[1])
    assert _sorted_after(out)
    assert out == sort_unburnt_randomized(stack, coins=[1, 0, 0, 0])
