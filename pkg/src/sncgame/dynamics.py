"""Best-response transitions: paths, the full transition graph, reachability
and invariance queries, and the asynchronous randomized dynamics simulator.

Profile sets and graph nodes are bit-masks (bit i set = node i plays +1);
conversion helpers live in the game module.
"""

from __future__ import annotations

import csv
import io
import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import CapExceeded
from .game import (
    Profile,
    SNCGame,
    best_response,
    is_strict_nash,
    mask_to_profile,
    payoff_gap,
    profile_to_mask,
    utility,
)

TRANSITION_CAP = 20


@dataclass(frozen=True)
class BRPath:
    """A sequence of profiles linked by single best-response deviations."""

    profiles: tuple  # k+1 profiles
    deviators: tuple  # k node ids, one per step

    def __len__(self):
        return len(self.deviators)


def br_successors(game: SNCGame, x: Profile) -> List[Tuple[int, Profile]]:
    """All legal single-step deviations from x; empty iff x is strict Nash."""
    out = []
    for i in range(game.n):
        gap = payoff_gap(game, i, x)
        flip = -x[i]
        # the flipped action must be a best response
        if gap == 0 or (1 if gap > 0 else -1) == flip:
            y = list(x)
            y[i] = flip
            out.append((i, tuple(y)))
    return out


def validate_br_path(game: SNCGame, path: BRPath) -> bool:
    profiles, deviators = path.profiles, path.deviators
    if len(profiles) != len(deviators) + 1 or not profiles:
        return False
    for k, i in enumerate(deviators):
        x, y = profiles[k], profiles[k + 1]
        if y[i] == x[i]:
            return False
        if any(y[j] != x[j] for j in range(game.n) if j != i):
            return False
        if y[i] not in best_response(game, i, x):
            return False
    return True


def is_improvement_path(game: SNCGame, path: BRPath) -> bool:
    """Every step must strictly increase the deviator's utility."""
    profiles, deviators = path.profiles, path.deviators
    if len(profiles) != len(deviators) + 1 or not profiles:
        return False
    for k, i in enumerate(deviators):
        x, y = profiles[k], profiles[k + 1]
        if any(y[j] != x[j] for j in range(game.n) if j != i):
            return False
        if not utility(game, i, y) > utility(game, i, x):
            return False
    return True


class TransitionGraph:
    """The best-response step relation over all 2^n profiles."""

    def __init__(self, n: int, edges):
        self.n = n
        self.size = 1 << n
        # successors[mask] = sorted list of (deviator, mask after flip)
        self.successors = edges

    def predecessors(self):
        pred = [[] for _ in range(self.size)]
        for x, succ in enumerate(self.successors):
            for i, y in succ:
                pred[y].append((i, x))
        return pred

    def sinks(self):
        return [x for x in range(self.size) if not self.successors[x]]


def build_transition_graph(game: SNCGame, cap: int = TRANSITION_CAP) -> TransitionGraph:
    n = game.n
    if n > cap:
        raise CapExceeded(n, cap)
    edges = []
    for mask in range(1 << n):
        x = mask_to_profile(mask, n)
        succ = []
        for i in range(n):
            gap = payoff_gap(game, i, x)
            flip = -x[i]
            if gap == 0 or (1 if gap > 0 else -1) == flip:
                succ.append((i, mask ^ (1 << i)))
        edges.append(succ)
    return TransitionGraph(n, edges)


def _as_mask_set(n, S) -> set:
    masks = set()
    for x in S:
        masks.add(x if isinstance(x, int) else profile_to_mask(x))
    return masks


def is_br_invariant(game: SNCGame, S, graph: Optional[TransitionGraph] = None,
                    cap: int = TRANSITION_CAP):
    """True iff no best-response edge leaves S.

    Returns (invariant, violating_edge) where the edge is
    (from_mask, deviator, to_mask) or None.
    """
    if graph is None:
        graph = build_transition_graph(game, cap)
    masks = _as_mask_set(game.n, S)
    for x in sorted(masks):
        for i, y in graph.successors[x]:
            if y not in masks:
                return False, (x, i, y)
    return True, None


def backward_closure(graph: TransitionGraph, S: Iterable[int]) -> set:
    """All profiles from which S is reachable along BR edges."""
    pred = graph.predecessors()
    seen = set(S)
    stack = list(seen)
    while stack:
        y = stack.pop()
        for _, x in pred[y]:
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return seen


def is_globally_br_reachable(game: SNCGame, S, graph: Optional[TransitionGraph] = None,
                             cap: int = TRANSITION_CAP) -> bool:
    if graph is None:
        graph = build_transition_graph(game, cap)
    masks = _as_mask_set(game.n, S)
    if not masks:
        return False
    return len(backward_closure(graph, masks)) == graph.size


def is_globally_br_stable(game: SNCGame, S, graph: Optional[TransitionGraph] = None,
                          cap: int = TRANSITION_CAP) -> bool:
    if graph is None:
        graph = build_transition_graph(game, cap)
    invariant, _ = is_br_invariant(game, S, graph)
    return invariant and is_globally_br_reachable(game, S, graph)


def maximal_invariant_subset(graph: TransitionGraph, S: Iterable[int]) -> set:
    """Largest subset of S with no exiting BR edge (may be empty)."""
    current = set(_as_mask_set(graph.n, S))
    changed = True
    while changed:
        changed = False
        for x in list(current):
            if any(y not in current for _, y in graph.successors[x]):
                current.discard(x)
                changed = True
    return current


def shortest_br_path(game: SNCGame, start: Profile, target,
                     graph: Optional[TransitionGraph] = None,
                     cap: int = TRANSITION_CAP) -> Optional[BRPath]:
    """Breadth-first shortest BR-path from start into the target set.

    Deterministic: queue order is FIFO with successors expanded by
    (deviator, mask) order.
    """
    if graph is None:
        graph = build_transition_graph(game, cap)
    n = game.n
    targets = _as_mask_set(n, target)
    s = profile_to_mask(start)
    if s in targets:
        return BRPath((tuple(start),), ())
    prev = {s: None}
    queue = deque([s])
    goal = None
    while queue:
        x = queue.popleft()
        for i, y in sorted(graph.successors[x]):
            if y in prev:
                continue
            prev[y] = (x, i)
            if y in targets:
                goal = y
                queue.clear()
                break
            queue.append(y)
    if goal is None:
        return None
    masks = [goal]
    deviators = []
    x = goal
    while prev[x] is not None:
        p, i = prev[x]
        deviators.append(i)
        masks.append(p)
        x = p
    masks.reverse()
    deviators.reverse()
    return BRPath(tuple(mask_to_profile(m, n) for m in masks), tuple(deviators))


@dataclass(frozen=True)
class SimulationConfig:
    """Knobs for the asynchronous randomized best-response dynamics."""

    seed: int = 0
    max_steps: int = 10_000
    activation: Optional[Sequence] = None  # per-node weights, default uniform
    stop_set: Optional[frozenset] = None  # profile masks; absorb on entry

    def activation_weights(self, n):
        if self.activation is None:
            return [1] * n
        if len(self.activation) != n:
            raise ValueError("activation distribution length mismatch")
        if any(p <= 0 for p in self.activation):
            raise ValueError("activation probabilities must be positive")
        return list(self.activation)


@dataclass
class Trajectory:
    initial: Profile
    events: list  # (step, deviator, new profile)
    steps_taken: int
    termination: str  # "absorbed" | "fixed_point" | "budget"
    recent_profiles: frozenset = field(default_factory=frozenset)  # masks seen lately

    def final_profile(self) -> Profile:
        return self.events[-1][2] if self.events else self.initial

    def to_csv(self, labels=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["step", "deviator_label", "profile_bitmask_hex"])
        for step, i, x in self.events:
            label = labels[i] if labels else str(i)
            writer.writerow([step, label, format(profile_to_mask(x), "x")])
        return buf.getvalue()

    def to_json(self, labels=None) -> str:
        events = [
            {
                "step": step,
                "deviator": labels[i] if labels else i,
                "profile_bitmask": profile_to_mask(x),
            }
            for step, i, x in self.events
        ]
        return json.dumps(
            {
                "initial_bitmask": profile_to_mask(self.initial),
                "events": events,
                "steps_taken": self.steps_taken,
                "termination": self.termination,
            },
            indent=2,
        )


def simulate(game: SNCGame, x0: Profile, config: SimulationConfig) -> Trajectory:
    """Run the asynchronous dynamics: activate a random player, draw her new
    action uniformly from her best-response set.

    Only actual changes are recorded; no-op activations advance the step
    counter. Terminates on stop-set absorption, on reaching a strict Nash
    profile, or when the step budget runs out.
    """
    n = game.n
    rng = random.Random(config.seed)
    weights = config.activation_weights(n)
    stop = config.stop_set or frozenset()
    x = list(x0)
    events = []
    window = deque(maxlen=min(1 << n, 1 << 16))
    window.append(profile_to_mask(tuple(x)))

    if profile_to_mask(tuple(x)) in stop:
        return Trajectory(tuple(x0), [], 0, "absorbed", frozenset(window))
    if is_strict_nash(game, tuple(x)):
        return Trajectory(tuple(x0), [], 0, "fixed_point", frozenset(window))

    for step in range(1, config.max_steps + 1):
        i = rng.choices(range(n), weights=weights)[0]
        br = best_response(game, i, tuple(x))
        choice = rng.choice(sorted(br))
        if choice != x[i]:
            x[i] = choice
            current = tuple(x)
            events.append((step, i, current))
            window.append(profile_to_mask(current))
            if profile_to_mask(current) in stop:
                return Trajectory(tuple(x0), events, step, "absorbed",
                                  frozenset(window))
            if is_strict_nash(game, current):
                return Trajectory(tuple(x0), events, step, "fixed_point",
                                  frozenset(window))
    return Trajectory(tuple(x0), events, config.max_steps, "budget",
                      frozenset(window))
