import math

import numpy as np
import pytest


def random_probs(rng, shape, zero_rate=0.15):
    """Flat-simplex draw over ``shape`` with occasional exact zeros."""
    size = int(np.prod(shape))
    p = rng.dirichlet(np.ones(size))
    mask = rng.random(size) < zero_rate
    if mask.all():
        mask[rng.integers(size)] = False
    p[mask] = 0.0
    return (p / p.sum()).reshape(shape)


def brute_entropy(probs, q):
    """Deliberately naive Tsallis entropy, used as an independent check."""
    total = 0.0
    power_sum = 0.0
    for p in np.ravel(probs):
        p = float(p)
        if p > 0:
            total -= p * math.log(p)
            power_sum += p**q
    if q == 1:
        return total
    return (power_sum - 1.0) / (1.0 - q)


def brute_conditional(table, q):
    """sum_y p(y)^q H_q(X|y) for rows x, columns y, by explicit loops."""
    table = np.asarray(table)
    total = 0.0
    for y in range(table.shape[1]):
        py = float(sum(table[x, y] for x in range(table.shape[0])))
        if py == 0:
            continue
        cond = [table[x, y] / py for x in range(table.shape[0])]
        total += py**q * brute_entropy(cond, q)
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)
