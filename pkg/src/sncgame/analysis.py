"""Structural certificates: cohesiveness, field boxes, indecomposability,
and the constructive existence / stability checks built on them.

All certificate objects expose `to_json_dict()` with every hypothesis check,
margin vector, and witness included; rationals serialize as "p/q" strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import CapExceeded, NotUnsigned
from .game import (
    SNCGame,
    enumerate_nash,
    extremal_nash_unsigned,
    gauge_game,
    is_nash,
    mask_to_profile,
    payoff_gap,
    potential,
    restricted_game,
)
from .network import (
    SignedNetwork,
    classify,
    find_balanced_partition,
    gauge_transform,
    out_degree,
    subnetwork,
)
from . import dynamics

INDECOMPOSABILITY_CAP = 24
RESTRICTED_BRUTE_CAP = 20


def _frac(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class FieldBox:
    """Elementwise interval [hminus, hplus] of external fields over `nodes`."""

    nodes: tuple  # original node ids, ascending
    hminus: tuple
    hplus: tuple

    def __post_init__(self):
        if any(lo > hi for lo, hi in zip(self.hminus, self.hplus)):
            raise ValueError("field box requires hminus <= hplus elementwise")

    def to_json_dict(self):
        return {
            "nodes": list(self.nodes),
            "hminus": [_frac(v) for v in self.hminus],
            "hplus": [_frac(v) for v in self.hplus],
        }


def field_box(game: SNCGame, R: Iterable[int], tau) -> FieldBox:
    """h+_i = tau_i h_i + w_i^S, h-_i = tau_i h_i - w_i^S over R."""
    R = sorted(set(R))
    S = [j for j in range(game.n) if j not in set(R)]
    hplus, hminus = [], []
    for k, i in enumerate(R):
        ws = out_degree(game.network, i, S)
        base = tau[k] * game.field[i]
        hplus.append(base + ws)
        hminus.append(base - ws)
    return FieldBox(tuple(R), tuple(hminus), tuple(hplus))


@dataclass(frozen=True)
class CohesionResult:
    ok: bool
    margins: tuple  # per-node slack, aligned with nodes
    nodes: tuple
    violations: tuple = ()  # offending nodes or (i, j) sign pairs

    def to_json_dict(self):
        return {
            "ok": self.ok,
            "nodes": list(self.nodes),
            "margins": [_frac(m) for m in self.margins],
            "violations": [list(v) if isinstance(v, tuple) else v
                           for v in self.violations],
        }


def check_consensus_cohesion(game: SNCGame, R: Iterable[int], a: int) -> CohesionResult:
    """w_i^R + a*h_i >= w_i^S for all i in R; requires the R-subnetwork unsigned."""
    R = sorted(set(R))
    sub, _ = subnetwork(game.network, R)
    if not classify(sub)[1]:
        raise NotUnsigned("consensus cohesion requires an unsigned core")
    S = [j for j in range(game.n) if j not in set(R)]
    margins = []
    bad = []
    for i in R:
        m = (out_degree(game.network, i, R) + a * game.field[i]
             - out_degree(game.network, i, S))
        margins.append(m)
        if m < 0:
            bad.append(i)
    return CohesionResult(not bad, tuple(margins), tuple(R), tuple(bad))


def check_polarized_cohesion(game: SNCGame, R: Iterable[int], tau) -> CohesionResult:
    """Sign compatibility tau_i W_ij tau_j >= 0 inside R, plus the degree
    condition w_i^R + tau_i h_i >= w_i^S."""
    R = sorted(set(R))
    pos = {i: k for k, i in enumerate(R)}
    S = [j for j in range(game.n) if j not in pos]
    bad = []
    for (i, j), w in game.network.edges():
        if i in pos and j in pos and tau[pos[i]] * w * tau[pos[j]] < 0:
            bad.append((i, j))
    margins = []
    for k, i in enumerate(R):
        m = (out_degree(game.network, i, R) + tau[k] * game.field[i]
             - out_degree(game.network, i, S))
        margins.append(m)
        if m < 0:
            bad.append(i)
    return CohesionResult(not bad, tuple(margins), tuple(R), tuple(bad))


def check_strict_cohesion(game: SNCGame, R: Iterable[int]) -> CohesionResult:
    """Strict inequality w_i^R - |h_i| > w_i^S for all i in R."""
    R = sorted(set(R))
    S = [j for j in range(game.n) if j not in set(R)]
    margins = []
    bad = []
    for i in R:
        m = (out_degree(game.network, i, R) - abs(game.field[i])
             - out_degree(game.network, i, S))
        margins.append(m)
        if m <= 0:
            bad.append(i)
    return CohesionResult(not bad, tuple(margins), tuple(R), tuple(bad))


@dataclass(frozen=True)
class IndecomposabilityResult:
    indecomposable: bool
    witness: Optional[tuple]  # (V+, V-) as frozensets, present iff decomposable
    partitions_examined: int

    def to_json_dict(self):
        return {
            "indecomposable": self.indecomposable,
            "witness": None if self.witness is None else
                       [sorted(self.witness[0]), sorted(self.witness[1])],
            "partitions_examined": self.partitions_examined,
        }


def is_indecomposable(G: SignedNetwork, box: FieldBox,
                      cap: int = INDECOMPOSABILITY_CAP) -> IndecomposabilityResult:
    """Exhaustive test of Definition-style indecomposability over the box.

    Every ordered binary partition (V+, V-) must contain a node that is
    strictly out-pulled by the other side: either i in V+ with
    w_i^{V+} + hplus_i < w_i^{V-}, or i in V- with w_i^{V-} - hminus_i
    < w_i^{V+}. The two sides are not interchangeable because hplus and
    hminus enter asymmetrically; both orientations of every split are
    checked. Splits are visited by increasing bit-mask of the side holding
    node 0, with that side as V+ first.
    """
    n = G.n
    if n > cap:
        raise CapExceeded(n, cap)
    if len(box.hplus) != n:
        raise ValueError("field box length mismatch")
    totals = [out_degree(G, i, range(n)) for i in range(n)]
    adj = [G.out_edges(i) for i in range(n)]

    def plus_degree(i, mask):
        return sum((abs(w) for j, w in adj[i] if mask >> j & 1), Fraction(0))

    examined = 0
    full = (1 << n) - 1
    for m in range(1, full, 2):  # node 0 always on the m side
        for vplus in (m, full ^ m):
            examined += 1
            satisfied = False
            for i in range(n):
                wp = plus_degree(i, vplus)
                wm = totals[i] - wp
                if vplus >> i & 1:
                    if wp + box.hplus[i] < wm:
                        satisfied = True
                        break
                else:
                    if wm - box.hminus[i] < wp:
                        satisfied = True
                        break
            if not satisfied:
                witness = (
                    frozenset(i for i in range(n) if vplus >> i & 1),
                    frozenset(i for i in range(n) if not vplus >> i & 1),
                )
                return IndecomposabilityResult(False, witness, examined)
    return IndecomposabilityResult(True, None, examined)


def _potential_ascent(game: SNCGame):
    """Strict-improvement walk to a local potential maximum (undirected games).

    Ties break toward the lowest player index, preferring flips to +1.
    """
    x = [1] * game.n
    while True:
        move = None
        for target in (1, -1):
            for i in range(game.n):
                if x[i] == target:
                    continue
                gap = payoff_gap(game, i, x)
                if (target == 1 and gap > 0) or (target == -1 and gap < 0):
                    move = (i, target)
                    break
            if move:
                break
        if move is None:
            return tuple(x)
        x[move[0]] = move[1]


def solve_restricted_S(game: SNCGame, R: Iterable[int], y,
                       cap: int = RESTRICTED_BRUTE_CAP):
    """Find a Nash profile of the S-restricted game with R frozen to y.

    Strategy ladder: undirected core -> potential ascent; structurally
    balanced core -> gauge to unsigned and run the monotone sweep; otherwise
    brute-force enumeration (capped). Returns the profile over sorted(S), or
    None when brute force exhausts without finding one. S may be empty.
    """
    R = sorted(set(R))
    S = [j for j in range(game.n) if j not in set(R)]
    if not S:
        return ()
    frozen = {i: y[k] for k, i in enumerate(R)}
    sgame, _ = restricted_game(game, S, frozen)
    undirected, unsigned = classify(sgame.network)
    if undirected:
        z = _potential_ascent(sgame)
        assert is_nash(sgame, z)
        return z
    cert = find_balanced_partition(sgame.network)
    if cert.balanced:
        transformed = gauge_game(sgame, cert.gauge)
        zt = extremal_nash_unsigned(transformed, "top")
        z = tuple(cert.gauge[i] * zt[i] for i in range(len(S)))
        assert is_nash(sgame, z)
        return z
    if len(S) > cap:
        raise CapExceeded(len(S), cap)
    result = enumerate_nash(sgame, cap=cap)
    return result.profiles[0] if result.profiles else None


@dataclass(frozen=True)
class ExistenceCertificate:
    """Record of the consensus/polarization existence construction."""

    R: tuple
    tau: Optional[tuple]
    hypotheses: dict
    equilibrium: Optional[tuple]  # full profile, None when a hypothesis failed
    failed: Optional[str] = None  # name of the first failing check

    def to_json_dict(self):
        return {
            "R": list(self.R),
            "tau": None if self.tau is None else list(self.tau),
            "hypotheses": self.hypotheses,
            "equilibrium": None if self.equilibrium is None
                           else list(self.equilibrium),
            "failed": self.failed,
        }


def construct_consensus_equilibrium(game: SNCGame, R: Iterable[int],
                                    tau=None) -> ExistenceCertificate:
    """Build a Nash profile whose R-restriction equals tau.

    Checks sign compatibility and cohesion, then witnesses a Nash profile of
    the S-restricted game. Structurally balanced or undirected S-cores make
    the witness step guaranteed; either way the witness is computed and the
    assembled profile is verified with is_nash before it is returned. When
    tau is omitted it is discovered from the canonical balanced partition of
    the R-subnetwork.
    """
    R = sorted(set(R))
    hypotheses = {}
    sub, _ = subnetwork(game.network, R)
    if tau is None:
        cert = find_balanced_partition(sub)
        hypotheses["core_balanced"] = cert.balanced
        if not cert.balanced:
            return ExistenceCertificate(tuple(R), None, hypotheses, None,
                                        failed="core_balanced")
        tau = cert.gauge
    tau = tuple(tau)
    hypotheses["tau"] = list(tau)

    cohesion = check_polarized_cohesion(game, R, tau)
    sign_ok = not any(isinstance(v, tuple) for v in cohesion.violations)
    degree_ok = all(m >= 0 for m in cohesion.margins)
    hypotheses["sign_compatible"] = sign_ok
    hypotheses["cohesion"] = cohesion.to_json_dict()
    if not sign_ok:
        return ExistenceCertificate(tuple(R), tau, hypotheses, None,
                                    failed="sign_compatible")
    if not degree_ok:
        return ExistenceCertificate(tuple(R), tau, hypotheses, None,
                                    failed="cohesion")

    S = [j for j in range(game.n) if j not in set(R)]
    if S:
        ssub, _ = subnetwork(game.network, S)
        s_undirected, _ = classify(ssub)
        s_balanced = find_balanced_partition(ssub).balanced
    else:
        s_undirected = s_balanced = True
    hypotheses["s_core_undirected"] = s_undirected
    hypotheses["s_core_balanced"] = s_balanced

    z = solve_restricted_S(game, R, tau)
    hypotheses["s_solution_found"] = z is not None
    if z is None:
        return ExistenceCertificate(tuple(R), tau, hypotheses, None,
                                    failed="s_nash_nonempty")
    x = [0] * game.n
    for k, i in enumerate(R):
        x[i] = tau[k]
    for k, j in enumerate(S):
        x[j] = z[k]
    x = tuple(x)
    assert is_nash(game, x)
    return ExistenceCertificate(tuple(R), tau, hypotheses, x)


@dataclass(frozen=True)
class StabilityCertificate:
    """Record of the stability hypotheses and the tier they support."""

    R: tuple
    tau: Optional[tuple]
    hypotheses: dict
    tier: str  # "stable-subset" | "reachable" | "hypotheses-failed"
    failed: Optional[str] = None
    empirical: Optional[dict] = None

    def to_json_dict(self):
        return {
            "R": list(self.R),
            "tau": None if self.tau is None else list(self.tau),
            "hypotheses": self.hypotheses,
            "tier": self.tier,
            "failed": self.failed,
            "empirical": self.empirical,
        }


def _restricted_side_tiers(game, R, tau, cap):
    """Verify the S-side hypothesis per frozen profile, by exhaustion."""
    reachable = True
    stable = True
    for y in (tau, tuple(-t for t in tau)):
        Rs = sorted(set(R))
        S = [j for j in range(game.n) if j not in set(Rs)]
        if not S:
            continue
        frozen = {i: y[k] for k, i in enumerate(Rs)}
        sgame, _ = restricted_game(game, S, frozen)
        if len(S) > cap:
            raise CapExceeded(len(S), cap)
        graph = dynamics.build_transition_graph(sgame, cap=cap)
        nash = enumerate_nash(sgame).profiles
        if not nash:
            return False, False
        if not dynamics.is_globally_br_reachable(sgame, nash, graph):
            reachable = False
        core = dynamics.maximal_invariant_subset(
            graph, [dynamics.profile_to_mask(x) for x in nash])
        if not (core and dynamics.is_globally_br_reachable(sgame, core, graph)):
            stable = False
    return reachable, stable


def check_stability(game: SNCGame, R: Iterable[int], tau=None,
                    empirical: bool = False,
                    cap: int = dynamics.TRANSITION_CAP) -> StabilityCertificate:
    """Evaluate the stability hypotheses and classify the conclusion tier.

    Order of checks: the tau-gauged R-core is unsigned; strict cohesion;
    indecomposability of the gauged core against the field box; then the
    S-side, via structure (balanced core -> "reachable", undirected core ->
    "stable-subset") or, failing structure, per-frozen-profile exhaustive
    verification of the restricted games. With `empirical`, the conclusion
    is additionally validated on the full transition graph.
    """
    R = sorted(set(R))
    hypotheses = {}
    sub, _ = subnetwork(game.network, R)
    if tau is None:
        cert = find_balanced_partition(sub)
        hypotheses["core_balanced"] = cert.balanced
        if not cert.balanced:
            return StabilityCertificate(tuple(R), None, hypotheses,
                                        "hypotheses-failed", failed="core_balanced")
        tau = cert.gauge
    tau = tuple(tau)
    hypotheses["tau"] = list(tau)

    gauged = gauge_transform(sub, tau)
    gauge_unsigned = classify(gauged)[1] or not gauged.weights
    hypotheses["gauge_unsigned"] = gauge_unsigned
    if not gauge_unsigned:
        return StabilityCertificate(tuple(R), tau, hypotheses,
                                    "hypotheses-failed", failed="gauge_unsigned")

    cohesion = check_strict_cohesion(game, R)
    hypotheses["strict_cohesion"] = cohesion.to_json_dict()
    if not cohesion.ok:
        return StabilityCertificate(tuple(R), tau, hypotheses,
                                    "hypotheses-failed", failed="strict_cohesion")

    box = field_box(game, R, tau)
    hypotheses["field_box"] = box.to_json_dict()
    indec = is_indecomposable(gauged, box)
    hypotheses["indecomposable"] = indec.to_json_dict()
    if not indec.indecomposable:
        return StabilityCertificate(tuple(R), tau, hypotheses,
                                    "hypotheses-failed", failed="indecomposable")

    S = [j for j in range(game.n) if j not in set(R)]
    if S:
        ssub, _ = subnetwork(game.network, S)
        s_undirected = classify(ssub)[0]
        s_balanced = find_balanced_partition(ssub).balanced
    else:
        s_undirected = s_balanced = True
    hypotheses["s_core_undirected"] = s_undirected
    hypotheses["s_core_balanced"] = s_balanced

    if s_undirected:
        tier = "stable-subset"
    elif s_balanced:
        tier = "reachable"
    else:
        reachable, stable = _restricted_side_tiers(game, R, tau, cap)
        hypotheses["s_side_reachable"] = reachable
        hypotheses["s_side_stable"] = stable
        if stable:
            tier = "stable-subset"
        elif reachable:
            tier = "reachable"
        else:
            return StabilityCertificate(tuple(R), tau, hypotheses,
                                        "hypotheses-failed", failed="s_side")

    empirical_report = None
    if empirical and game.n <= cap:
        empirical_report = _empirical_stability(game, R, tau, cap)
    return StabilityCertificate(tuple(R), tau, hypotheses, tier,
                                empirical=empirical_report)


def _empirical_stability(game, R, tau, cap):
    """Transition-graph verification of the claimed tier."""
    graph = dynamics.build_transition_graph(game, cap=cap)
    nash = enumerate_nash(game, cap=cap).profiles
    neg = tuple(-t for t in tau)
    target = [
        x for x in nash
        if tuple(x[i] for i in R) in (tau, neg)
    ]
    masks = [dynamics.profile_to_mask(x) for x in target]
    reachable = bool(masks) and dynamics.is_globally_br_reachable(game, masks, graph)
    core = dynamics.maximal_invariant_subset(graph, masks)
    stable_subset = bool(core) and dynamics.is_globally_br_reachable(game, core, graph)
    return {
        "target_size": len(masks),
        "globally_br_reachable": reachable,
        "stable_subset_exists": stable_subset,
        "stable_subset": sorted(core),
    }
