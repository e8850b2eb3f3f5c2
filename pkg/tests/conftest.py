import random

import pytest

from pinlab import Corpus

TINY_PINS = [(1, 2, 3, 4), (1, 2, 3, 4), (1, 2, 3, 5), (9, 8, 7, 6)]


@pytest.fixture
def tiny_pins():
    return list(TINY_PINS)


@pytest.fixture
def tiny_corpus():
    return Corpus.from_pins(TINY_PINS)


def random_pins(rng: random.Random, n: int, skew: bool = False):
    """Random PIN tuples; with skew=True, draws repeat heavily so contexts recur."""
    if skew:
        pool = [tuple(rng.randrange(10) for _ in range(4)) for _ in range(max(3, n // 8))]
        return [rng.choice(pool) for _ in range(n)]
    return [tuple(rng.randrange(10) for _ in range(4)) for _ in range(n)]
