"""Binary-action coordination/anti-coordination games on signed networks.

A profile is a tuple of +/-1 actions, one per node. Profiles also have a
bit-mask form (bit i set means node i plays +1) used for enumeration and by
the dynamics module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from .errors import CapExceeded, EmptySubset, LengthMismatch, NotUndirected, NotUnsigned
from .network import (
    SignedNetwork,
    as_weight,
    classify,
    gauge_transform,
    subnetwork,
)

Profile = Tuple[int, ...]

ENUMERATION_CAP = 24
IDP_CAP = 12


class SNCGame:
    """A signed network plus a per-node external field."""

    __slots__ = ("network", "field")

    def __init__(self, network: SignedNetwork, field=None):
        if field is None:
            field = [0] * network.n
        if len(field) != network.n:
            raise LengthMismatch(
                f"field length {len(field)} != node count {network.n}"
            )
        self.network = network
        self.field = tuple(as_weight(h) for h in field)

    @property
    def n(self) -> int:
        return self.network.n

    def __eq__(self, other):
        return (
            isinstance(other, SNCGame)
            and self.network == other.network
            and self.field == other.field
        )

    def __repr__(self):
        return f"SNCGame(n={self.n}, edges={len(self.network.weights)})"


def mask_to_profile(mask: int, n: int) -> Profile:
    return tuple(1 if mask >> i & 1 else -1 for i in range(n))

def profile_to_mask(x: Profile) -> int:
    mask = 0
    for i, v in enumerate(x):
        if v == 1:
            mask |= 1 << i
    return mask

def check_profile(x, n):
    if len(x) != n:
        raise LengthMismatch(f"profile length {len(x)} != node count {n}")
    if any(v not in (1, -1) for v in x):
        raise ValueError("profile entries must be +1 or -1")


def utility(game: SNCGame, i: int, x: Profile) -> Fraction:
    """u_i(x) = h_i x_i + x_i sum_j W_ij x_j."""
    s = game.field[i]
    for j, w in game.network.out_edges(i):
        s += w * x[j]
    return x[i] * s


def payoff_gap(game: SNCGame, i: int, x: Profile) -> Fraction:
    """Utility advantage of +1 over -1 for player i; does not read x_i."""
    s = game.field[i]
    for j, w in game.network.out_edges(i):
        s += w * x[j]
    return 2 * s


def best_response(game: SNCGame, i: int, x: Profile) -> frozenset:
    gap = payoff_gap(game, i, x)
    if gap > 0:
        return frozenset((1,))
    if gap < 0:
        return frozenset((-1,))
    return frozenset((1, -1))


def is_nash(game: SNCGame, x: Profile) -> bool:
    for i in range(game.n):
        gap = payoff_gap(game, i, x)
        if (gap > 0 and x[i] != 1) or (gap < 0 and x[i] != -1):
            return False
    return True


def indifferent_players(game: SNCGame, x: Profile) -> List[int]:
    """Players whose payoff gap at x is exactly zero."""
    return [i for i in range(game.n) if payoff_gap(game, i, x) == 0]


def is_strict_nash(game: SNCGame, x: Profile) -> bool:
    for i in range(game.n):
        gap = payoff_gap(game, i, x)
        if (gap > 0 and x[i] != 1) or (gap <= 0 and x[i] != -1) or gap == 0:
            return False
    return True


@dataclass(frozen=True)
class NashEnumeration:
    profiles: tuple  # all Nash profiles, ordered by bit-mask value
    strict: tuple  # the strict subset, same order


def enumerate_nash(game: SNCGame, cap: int = ENUMERATION_CAP) -> NashEnumeration:
    """Exhaustive Nash enumeration over all 2^n profiles."""
    n = game.n
    if n > cap:
        raise CapExceeded(n, cap)
    nash = []
    strict = []
    for mask in range(1 << n):
        x = mask_to_profile(mask, n)
        ok = True
        any_tie = False
        for i in range(n):
            gap = payoff_gap(game, i, x)
            if gap == 0:
                any_tie = True
            elif (1 if gap > 0 else -1) != x[i]:
                ok = False
                break
        if ok:
            nash.append(x)
            if not any_tie:
                strict.append(x)
    return NashEnumeration(tuple(nash), tuple(strict))


def restricted_game(game: SNCGame, R: Iterable[int], frozen: dict):
    """The game on the subnetwork over R with outside actions frozen.

    `frozen` maps every node outside R to its fixed action. The external
    field of a node i in R absorbs the cross weights: h_i + sum_{j not in R}
    W_ij z_j. Returns (game, index_map).
    """
    R = sorted(set(R))
    if not R:
        raise EmptySubset("restricted game on an empty player set")
    inside = set(R)
    outside = [j for j in range(game.n) if j not in inside]
    for j in outside:
        if frozen.get(j) not in (1, -1):
            raise ValueError(f"frozen action missing or invalid for node {j}")
    sub, index_map = subnetwork(game.network, R)
    field = []
    for i in R:
        h = game.field[i]
        for j, w in game.network.out_edges(i):
            if j not in inside:
                h += w * frozen[j]
        field.append(h)
    return SNCGame(sub, field), index_map


def gauge_game(game: SNCGame, sigma) -> SNCGame:
    """Transformed game: W -> [sigma] W [sigma], h -> [sigma] h."""
    net = gauge_transform(game.network, sigma)
    field = [sigma[i] * game.field[i] for i in range(game.n)]
    return SNCGame(net, field)


def potential(game: SNCGame, x: Profile) -> Fraction:
    """Exact potential (constant fixed to 0); defined for undirected games only."""
    undirected, _ = classify(game.network)
    if not undirected:
        raise NotUndirected("only undirected games admit an exact potential")
    s = Fraction(0)
    for (i, j), w in game.network.weights.items():
        s += w * x[i] * x[j]
    s = s / 2
    for i in range(game.n):
        s += game.field[i] * x[i]
    return s


@dataclass(frozen=True)
class PotentialObstruction:
    """Four-profile cycle witnessing that no exact potential exists.

    The profiles (x, y, w, z) differ by unilateral flips of players i and j,
    and the closed cycle of deviator utility differences sums to
    4*(W_ji - W_ij) != 0, while any potential's differences would telescope
    to zero around the cycle.
    """

    i: int
    j: int
    profiles: tuple
    cycle_sum: Fraction


def exact_potential_obstruction(game: SNCGame) -> Optional[PotentialObstruction]:
    """Find a cycle certificate of non-existence of an exact potential.

    Returns None when the network is undirected (an exact potential exists).
    """
    net = game.network
    pair = None
    for (i, j), w in net.edges():
        if net.weight(j, i) != w:
            pair = (i, j) if w < net.weight(j, i) else (j, i)
            break
    if pair is None:
        return None
    i, j = pair
    base = [-1] * game.n
    x = tuple(base)
    y = tuple(1 if k == i else v for k, v in enumerate(base))
    w_ = tuple(1 if k == j else v for k, v in enumerate(base))
    z = tuple(1 if k in (i, j) else v for k, v in enumerate(base))
    cycle = (
        (utility(game, i, y) - utility(game, i, x))
        + (utility(game, j, x) - utility(game, j, w_))
        + (utility(game, i, w_) - utility(game, i, z))
        + (utility(game, j, z) - utility(game, j, y))
    )
    assert cycle == 4 * (net.weight(j, i) - net.weight(i, j))
    return PotentialObstruction(i, j, (x, y, w_, z), cycle)


def is_supermodular(game: SNCGame, exhaustive: bool = False, cap: int = IDP_CAP) -> bool:
    """Increasing differences test.

    Structurally: true iff every weight is non-negative. With
    `exhaustive=True`, verifies increasing differences over all comparable
    profile pairs instead (n <= cap).
    """
    if not exhaustive:
        return all(w > 0 for w in game.network.weights.values())
    n = game.n
    if n > cap:
        raise CapExceeded(n, cap)
    for ymask in range(1 << n):
        y = mask_to_profile(ymask, n)
        gaps_y = [payoff_gap(game, i, y) for i in range(n)]
        # x <= y iff x's +1 positions are a subset of y's
        sub = ymask
        while True:
            x = mask_to_profile(sub, n)
            for i in range(n):
                if payoff_gap(game, i, x) > gaps_y[i]:
                    return False
            if sub == 0:
                break
            sub = (sub - 1) & ymask
    return True


def extremal_nash_unsigned(game: SNCGame, which: str = "top") -> Profile:
    """Monotone best-response sweep from an extreme profile (unsigned only).

    Ties break toward the starting extreme, so the iterates move away from
    it monotonically and a fixed point is reached within n sweeps.
    """
    _, unsigned = classify(game.network)
    if not unsigned:
        raise NotUnsigned("extremal sweep requires all weights positive")
    if which not in ("top", "bottom"):
        raise ValueError("which must be 'top' or 'bottom'")
    a = 1 if which == "top" else -1
    x = [a] * game.n
    changed = True
    while changed:
        changed = False
        for i in range(game.n):
            gap = payoff_gap(game, i, x)
            best = a if gap == 0 else (1 if gap > 0 else -1)
            if x[i] != best:
                x[i] = best
                changed = True
    result = tuple(x)
    assert is_nash(game, result)
    return result
