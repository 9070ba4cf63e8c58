"""Finite directed weighted signed graphs with exact rational weights.

Networks are immutable: every operation returns a new instance. Weights are
`fractions.Fraction`, so all sign and ordering tests are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import (
    CapExceeded,
    DuplicateEdge,
    EmptySubset,
    LengthMismatch,
    NodeOutOfRange,
    SelfLoop,
    ZeroWeight,
)

Weight = Fraction

ORACLE_CAP = 20


def as_weight(value) -> Fraction:
    """Coerce ints, "p/q" strings and Fractions to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a weight")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class SignedNetwork:
    """A directed weighted signed graph on nodes 0..n-1 with no self-loops."""

    __slots__ = ("n", "weights", "_out")

    def __init__(self, n: int, weights: dict):
        self.n = n
        self.weights = dict(weights)
        # adjacency: node -> list of (head, weight), sorted by head
        out = {i: [] for i in range(n)}
        for (i, j), w in sorted(self.weights.items()):
            out[i].append((j, w))
        self._out = out

    def out_edges(self, i: int):
        return self._out[i]

    def weight(self, i: int, j: int) -> Fraction:
        return self.weights.get((i, j), Fraction(0))

    def edges(self):
        return sorted(self.weights.items())

    def __eq__(self, other):
        return (
            isinstance(other, SignedNetwork)
            and self.n == other.n
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.weights.items())))

    def __repr__(self):
        return f"SignedNetwork(n={self.n}, edges={len(self.weights)})"


@dataclass(frozen=True)
class BalanceCertificate:
    """Outcome of structural-balance detection.

    When `balanced`, `gauge` turns the network unsigned and is -1 exactly on
    `partition[0]`. When unbalanced, `witness` is a cycle of links whose sign
    constraints cannot be satisfied simultaneously.
    """

    balanced: bool
    partition: Optional[tuple] = None  # (V1, V2) as frozensets
    gauge: Optional[tuple] = None
    witness: Optional[tuple] = None  # tuple of (i, j, weight)


def build_network(n: int, edges: Iterable) -> SignedNetwork:
    """Validate an edge list and build a network.

    Each edge is (tail, head, weight); weights may be ints, "p/q" strings or
    Fractions.
    """
    if n < 1:
        raise ValueError("node count must be at least 1")
    weights = {}
    for i, j, w in edges:
        for node in (i, j):
            if not (0 <= node < n):
                raise NodeOutOfRange(node, n)
        if i == j:
            raise SelfLoop(i)
        w = as_weight(w)
        if w == 0:
            raise ZeroWeight(i, j)
        if (i, j) in weights:
            raise DuplicateEdge(i, j)
        weights[(i, j)] = w
    return SignedNetwork(n, weights)


def subnetwork(G: SignedNetwork, U: Iterable[int]):
    """Restrict to U, densely re-indexed.

    Returns (network, index_map) where index_map[k] is the original id of the
    new node k.
    """
    U = sorted(set(U))
    if not U:
        raise EmptySubset("subnetwork of an empty node set")
    for u in U:
        if not (0 <= u < G.n):
            raise NodeOutOfRange(u, G.n)
    pos = {u: k for k, u in enumerate(U)}
    weights = {
        (pos[i], pos[j]): w
        for (i, j), w in G.weights.items()
        if i in pos and j in pos
    }
    return SignedNetwork(len(U), weights), list(U)


def out_degree(G: SignedNetwork, i: int, B: Iterable[int]) -> Fraction:
    """Absolute weight mass from node i into the set B."""
    B = set(B)
    total = Fraction(0)
    for j, w in G.out_edges(i):
        if j in B:
            total += abs(w)
    return total


def total_out_degree(G: SignedNetwork, i: int) -> Fraction:
    return sum((abs(w) for _, w in G.out_edges(i)), Fraction(0))


def classify(G: SignedNetwork):
    """Return (undirected, unsigned)."""
    undirected = all(G.weight(j, i) == w for (i, j), w in G.weights.items())
    unsigned = all(w > 0 for w in G.weights.values())
    return undirected, unsigned


def gauge_transform(G: SignedNetwork, sigma) -> SignedNetwork:
    """Conjugate the weight matrix by the diagonal sign matrix [sigma]."""
    _check_gauge(G.n, sigma)
    weights = {
        (i, j): sigma[i] * w * sigma[j] for (i, j), w in G.weights.items()
    }
    return SignedNetwork(G.n, weights)


def _check_gauge(n, sigma):
    if len(sigma) != n:
        raise LengthMismatch(f"gauge length {len(sigma)} != node count {n}")
    if any(s not in (1, -1) for s in sigma):
        raise ValueError("gauge entries must be +1 or -1")


class _ParityUnionFind:
    """Union-find where each node carries a sign relative to its root."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.parity = [1] * n  # sign of node relative to parent chain

    def find(self, x):
        """Return (root, sign of x relative to root), with path compression."""
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        sign = 1
        for y in reversed(path):
            sign *= self.parity[y]
            self.parent[y] = x
            self.parity[y] = sign
        return x, self.parity[path[0]] if path else 1

    def sign_to_root(self, x):
        self.find(x)
        return self.parity[x]

    def union(self, x, y, rel):
        """Constrain sign(x) = rel * sign(y). Returns False on contradiction."""
        rx, sx = self.find(x)
        ry, sy = self.find(y)
        if rx == ry:
            return sx == rel * sy
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
            sx, sy = sy, sx
        # attach ry under rx; need parity[ry] with sign(x) = rel*sign(y)
        self.parent[ry] = rx
        self.parity[ry] = sx * rel * sy
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True


def find_balanced_partition(G: SignedNetwork) -> BalanceCertificate:
    """Decide structural balance by sign-constraint propagation.

    A positive link forces equal gauge signs at its endpoints, a negative
    link forces opposite signs. Satisfiability is checked with parity
    union-find; nodes in fully unconstrained components get +1.
    """
    uf = _ParityUnionFind(G.n)
    accepted = []  # spanning forest of processed constraints
    tree = {i: [] for i in range(G.n)}
    for (i, j), w in G.edges():
        rel = 1 if w > 0 else -1
        ri, _ = uf.find(i)
        rj, _ = uf.find(j)
        if ri != rj:
            uf.union(i, j, rel)
            tree[i].append(j)
            tree[j].append(i)
            accepted.append((i, j, w))
        elif uf.sign_to_root(i) != rel * uf.sign_to_root(j):
            witness = _constraint_cycle(G, tree, accepted, i, j, w)
            return BalanceCertificate(balanced=False, witness=witness)

    # canonical gauge: +1 on the lowest-indexed node of every component
    sigma = [0] * G.n
    anchor_sign = {}
    for i in range(G.n):
        root, s = uf.find(i)
        if root not in anchor_sign:
            anchor_sign[root] = s  # i is the smallest node of its component
        sigma[i] = s * anchor_sign[root]
    sigma = tuple(sigma)
    v1 = frozenset(i for i in range(G.n) if sigma[i] == -1)
    v2 = frozenset(i for i in range(G.n) if sigma[i] == 1)
    return BalanceCertificate(balanced=True, partition=(v1, v2), gauge=sigma)


def _constraint_cycle(G, tree, accepted, i, j, w):
    """Path from i to j in the accepted forest, plus the failing link."""
    prev = {i: None}
    queue = [i]
    while queue:
        x = queue.pop(0)
        if x == j:
            break
        for y in tree[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    links = [(i, j, w)]
    x = j
    while prev.get(x) is not None:
        p = prev[x]
        uv = (p, x) if (p, x) in G.weights else (x, p)
        links.append((uv[0], uv[1], G.weights[uv]))
        x = p
    return tuple(links)


def is_structurally_balanced_oracle(G: SignedNetwork, cap: int = ORACLE_CAP) -> bool:
    """Exhaustive balance test over all 2^n gauge vectors."""
    if G.n > cap:
        raise CapExceeded(G.n, cap)
    items = G.edges()
    for mask in range(1 << G.n):
        sigma = [1 if mask >> i & 1 else -1 for i in range(G.n)]
        if all(sigma[i] * w * sigma[j] > 0 for (i, j), w in items):
            return True
    return False
