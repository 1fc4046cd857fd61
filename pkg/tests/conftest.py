import itertools

import numpy as np
import pytest

from cadec.ca import LazyRule, RingWord

# Five assignments of the 3-state, 2-neighbor rule whose periodic solution
# from 012 has temporal period 6.
TILE_ASSIGNMENTS = {(2, 0): 1, (1, 2): 1, (1, 1): 1, (1, 0): 2, (0, 1): 0}
TILE_ROWS = ["012", "101", "120", "011", "201", "110"]


def figure2_assignments(long_cycle_period=6):
    """Windows of a 5-state 2-neighbor rule realizing the 13-vertex DEC example.

    The canonical word ab of a class evolves to (f(b, a), f(a, b)).
    """
    pins = {
        (1, 0): 1, (0, 1): 0,  # 01 -> 10: self-loop with a rotation
        (2, 0): 0, (0, 2): 1,  # 02 -> 01
        (3, 2): 2, (2, 3): 4,  # 23 -> 24
        (4, 2): 4, (2, 4): 3,  # 24 -> 43
        (4, 0): 0, (0, 4): 3,  # 04 -> 03
        (3, 0): 2, (0, 3): 2,  # 03 -> 22
        (2, 1): 1, (1, 2): 3,  # 12 -> 13
        (4, 1): 1, (1, 4): 3,  # 14 -> 13
        (3, 1): 4, (1, 3): 4,  # 13 -> 44
    }
    if long_cycle_period == 6:
        pins.update({(4, 3): 2, (3, 4): 3})  # 34 -> 23, 43 -> 32
    else:
        pins.update({(4, 3): 3, (3, 4): 2})  # 34 -> 32, 43 -> 23
    return pins


@pytest.fixture
def tile_rule():
    return LazyRule(3, 2, seed=11, pinned=TILE_ASSIGNMENTS)


@pytest.fixture
def figure2_rule():
    return LazyRule(5, 2, seed=5, pinned=figure2_assignments(6))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def word(text, n):
    return RingWord.from_str(text, n)


def naive_min_period(states):
    sigma = len(states)
    for p in range(1, sigma + 1):
        if sigma % p == 0 and all(states[i] == states[i % p] for i in range(sigma)):
            return p


def brute_aperiodic_count(sigma, n):
    return sum(naive_min_period(w) == sigma
               for w in itertools.product(range(n), repeat=sigma))
