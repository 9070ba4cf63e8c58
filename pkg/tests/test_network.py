import random
from fractions import Fraction

import pytest

from sncgame.errors import DuplicateEdge, NodeOutOfRange, SelfLoop, ZeroWeight
from sncgame.network import (build_network, classify, find_balanced_partition,
                             gauge_transform, is_structurally_balanced_oracle,
                             out_degree, subnetwork, total_out_degree)

from conftest import random_network, random_sigma


def test_build_network_validation():
    with pytest.raises(SelfLoop):
        build_network(2, [(0, 0, 1)])
    with pytest.raises(ZeroWeight):
        build_network(2, [(0, 1, 0)])
    with pytest.raises(DuplicateEdge):
        build_network(2, [(0, 1, 1), (0, 1, 2)])
    with pytest.raises(NodeOutOfRange):
        build_network(2, [(0, 2, 1)])


def test_weights_are_exact_rationals():
    net = build_network(2, [(0, 1, "3/2"), (1, 0, Fraction(-1, 3))])
    assert net.weight(0, 1) == Fraction(3, 2)
    assert net.weight(1, 0) == Fraction(-1, 3)
    assert net.weight(0, 1) + net.weight(1, 0) == Fraction(7, 6)


def test_out_degree_uses_absolute_weights():
    net = build_network(3, [(0, 1, -2), (0, 2, "1/2"), (1, 2, 1)])
    assert out_degree(net, 0, [1, 2]) == Fraction(5, 2)
    assert out_degree(net, 0, [1]) == 2
    assert total_out_degree(net, 0) == Fraction(5, 2)
    assert out_degree(net, 2, [0, 1]) == 0


def test_subnetwork_reindexes():
    net = build_network(4, [(0, 2, 1), (2, 3, -1), (3, 0, 2), (1, 2, 5)])
    sub, index_map = subnetwork(net, [0, 2, 3])
    assert index_map == [0, 2, 3]
    assert sub.n == 3
    assert sub.weight(0, 1) == 1
    assert sub.weight(1, 2) == -1
    assert sub.weight(2, 0) == 2
    assert sub.weight(0, 2) == 0  # the edge from node 1 is gone


def test_classify():
    undirected = build_network(2, [(0, 1, -1), (1, 0, -1)])
    assert classify(undirected) == (True, False)
    unsigned = build_network(2, [(0, 1, 2)])
    assert classify(unsigned) == (False, True)


def test_gauge_transform_involution():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 7)
        net = random_network(rng, n)
        sigma = random_sigma(rng, n)
        assert gauge_transform(gauge_transform(net, sigma), sigma) == net


def test_gauge_flips_cross_signs():
    net = build_network(2, [(0, 1, 3), (1, 0, -2)])
    out = gauge_transform(net, (1, -1))
    assert out.weight(0, 1) == -3
    assert out.weight(1, 0) == 2


def test_balanced_partition_fig4_core(load):
    doc = load("fig4")
    net = doc.to_game().network
    sub, _ = subnetwork(net, doc.node_set("R"))
    cert = find_balanced_partition(sub)
    assert cert.balanced
    assert set(map(frozenset, cert.partition)) == {frozenset({1, 2}),
                                                   frozenset({0, 3})}
    gauged = gauge_transform(sub, cert.gauge)
    assert all(w > 0 for _, w in gauged.edges())


def test_unbalanced_witness_is_a_bad_cycle(load):
    net = load("fig4").to_game().network
    cert = find_balanced_partition(net)
    assert not cert.balanced
    cycle = cert.witness
    # The witness walks a closed chain of links whose sign product is
    # negative, which no bipartition can satisfy.
    sign = 1
    for _, _, w in cycle:
        sign *= 1 if w > 0 else -1
    assert sign == -1
    endpoints = [(i, j) for i, j, _ in cycle]
    for k in range(len(endpoints)):
        a = endpoints[k]
        b = endpoints[(k + 1) % len(endpoints)]
        assert set(a) & set(b), "witness links must chain up"


def test_balance_detector_matches_oracle_small():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 8)
        net = random_network(rng, n, density=rng.uniform(0.1, 0.9))
        cert = find_balanced_partition(net)
        assert cert.balanced == is_structurally_balanced_oracle(net)
        if cert.balanced:
            gauged = gauge_transform(net, cert.gauge)
            assert all(w > 0 for _, w in gauged.edges())


def test_empty_and_singleton_networks_are_balanced():
    for n in (1, 3):
        cert = find_balanced_partition(build_network(n, []))
        assert cert.balanced
        assert cert.gauge == (1,) * n
