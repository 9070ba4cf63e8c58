"""Exact-arithmetic toolkit for binary-action coordination games on signed
networks: equilibrium enumeration, best-response dynamics, structural
balance, cohesiveness and indecomposability certificates."""

from .network import (
    BalanceCertificate,
    SignedNetwork,
    build_network,
    classify,
    find_balanced_partition,
    gauge_transform,
    is_structurally_balanced_oracle,
    out_degree,
    subnetwork,
)
from .game import (
    SNCGame,
    best_response,
    enumerate_nash,
    extremal_nash_unsigned,
    gauge_game,
    is_nash,
    is_strict_nash,
    is_supermodular,
    mask_to_profile,
    payoff_gap,
    potential,
    profile_to_mask,
    restricted_game,
    utility,
)
from .dynamics import (
    BRPath,
    SimulationConfig,
    Trajectory,
    br_successors,
    build_transition_graph,
    is_br_invariant,
    is_globally_br_reachable,
    is_globally_br_stable,
    is_improvement_path,
    shortest_br_path,
    simulate,
    validate_br_path,
)
from .analysis import (
    FieldBox,
    check_consensus_cohesion,
    check_polarized_cohesion,
    check_stability,
    check_strict_cohesion,
    construct_consensus_equilibrium,
    field_box,
    is_indecomposable,
    solve_restricted_S,
)
from .document import GameDocument, parse_document
from .fixtures import emit_fixture

__version__ = "0.1.0"
