import random
from fractions import Fraction

import pytest

from sncgame.fixtures import emit_fixture
from sncgame.game import SNCGame
from sncgame.network import build_network


@pytest.fixture
def load():
    def _load(name):
        return emit_fixture(name)
    return _load


def random_network(rng, n, density=0.5, signed=True, undirected=False):
    """Random signed network with small integer weights for property tests."""
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j or (undirected and j < i):
                continue
            if rng.random() >= density:
                continue
            w = rng.choice([1, 2, 3, Fraction(1, 2)])
            if signed and rng.random() < 0.5:
                w = -w
            edges.append((i, j, w))
            if undirected:
                edges.append((j, i, w))
    return build_network(n, edges)


def random_game(rng, n, density=0.5, signed=True, undirected=False,
                with_field=True):
    net = random_network(rng, n, density, signed, undirected)
    field = None
    if with_field:
        field = [rng.choice([-2, -1, 0, 0, 1, 2]) for _ in range(n)]
    return SNCGame(net, field)


def random_sigma(rng, n):
    return tuple(rng.choice([1, -1]) for _ in range(n))
