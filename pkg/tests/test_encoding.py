import numpy as np

from bufshop.encoding import Bounds, DEFAULT_BOUNDS, clamp, keys_to_sequence, random_position


def test_sort_order():
    assert keys_to_sequence([0.3, 0.1, 0.2]) == (2, 3, 1)


def test_ties_break_to_lower_id():
    assert keys_to_sequence([0.5, 0.5]) == (1, 2)
    assert keys_to_sequence([0.7, 0.5, 0.5, 0.5]) == (2, 3, 4, 1)


def test_increasing_keys_give_identity():
    assert keys_to_sequence([0.1, 0.2, 0.5, 0.9]) == (1, 2, 3, 4)


def test_rank_only_dependence(rng):
    # Any strictly increasing transform of all keys decodes identically.
    for _ in range(50):
        keys = rng.random(8)
        base = keys_to_sequence(keys)
        assert keys_to_sequence(3.0 * keys + 1.0) == base
        assert keys_to_sequence(np.exp(keys)) == base
        assert keys_to_sequence(keys ** 3) == base


def test_always_a_permutation(rng):
    for _ in range(50):
        n = int(rng.integers(1, 12))
        seq = keys_to_sequence(rng.random(n))
        assert sorted(seq) == list(range(1, n + 1))


def test_clamp_edges():
    assert clamp(np.array([1.7]))[0] == 1.0
    assert clamp(np.array([-0.2]))[0] == 0.0
    assert clamp(np.array([0.4]))[0] == 0.4


def test_clamp_idempotent(rng):
    keys = rng.normal(0.5, 2.0, 64)
    once = clamp(keys)
    assert (clamp(once) == once).all()
    assert (once >= 0.0).all() and (once <= 1.0).all()


def test_random_position_deterministic():
    a = random_position(6, DEFAULT_BOUNDS, np.random.default_rng(9))
    b = random_position(6, DEFAULT_BOUNDS, np.random.default_rng(9))
    assert (a == b).all()


def test_random_position_uniform_mean(rng):
    samples = random_position(100_000, DEFAULT_BOUNDS, rng)
    assert abs(samples.mean() - 0.5) < 0.01


def test_random_position_degenerate_interval(rng):
    pos = random_position(5, Bounds(2.0, 2.0), rng)
    assert (pos == 2.0).all()
