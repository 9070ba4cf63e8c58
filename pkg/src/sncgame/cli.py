"""Command-line front end.

Reads a JSON game document, runs one analysis, and writes a schema-versioned
report to stdout or a file. Exit codes: 0 the command ran (and any predicate
it computes is true), 2 a predicate came back false or construction
hypotheses failed, 1 usage or parse errors, 3 a state-space cap was exceeded.

The default cap for exhaustive state-space work can be overridden with the
SNCGAME_CAP environment variable; an explicit --cap flag wins over both.
"""

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from .document import GameDocument, format_weight, parse_document
from .dynamics import (SimulationConfig, build_transition_graph,
                       is_br_invariant, is_globally_br_reachable,
                       is_globally_br_stable, simulate)
from .errors import CapExceeded, SncError
from .fixtures import BUNDLED, emit_fixture
from .game import (enumerate_nash, exact_potential_obstruction, potential,
                   profile_to_mask)
from .analysis import (FieldBox, check_consensus_cohesion,
                       check_polarized_cohesion, check_strict_cohesion,
                       construct_consensus_equilibrium, field_box,
                       is_indecomposable, check_stability)
from .errors import NotUndirected
from .network import find_balanced_partition, subnetwork

REPORT_SCHEMA_VERSION = 1
CAP_ENV_VAR = "SNCGAME_CAP"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling sys.exit, so usage errors map
    to this tool's exit code 1 rather than argparse's default 2."""

    def error(self, message):
        raise UsageError(message)


def _load_document(source: str) -> GameDocument:
    """Load a game document from a file path, or fall back to a bundled
    fixture when the argument names one (with or without .json)."""
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return parse_document(fh.read())
    stem = source[:-5] if source.endswith(".json") else source
    if stem in BUNDLED or stem.startswith("example4"):
        return emit_fixture(stem)
    raise UsageError(f"game file not found: {source}")


def _resolve_cap(args, default):
    if getattr(args, "cap", None) is not None:
        return args.cap
    env = os.environ.get(CAP_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{CAP_ENV_VAR} must be an integer, got {env!r}")
    return default


def _parse_rationals(text: str, expected: int, flag: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != expected:
        raise UsageError(f"{flag} expects {expected} comma-separated values")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational in {flag}: {exc}")


def _node_set(doc: GameDocument, args, default="R"):
    name = getattr(args, "set", None) or default
    if name not in doc.sets:
        if getattr(args, "set", None) is None and default == "R":
            # No set named and no R declared: fall back to all nodes.
            return name, list(range(len(doc.nodes)))
        raise UsageError(f"document declares no node set named {name!r}")
    return name, doc.node_set(name)


def _tau_for(doc: GameDocument, args, R):
    if getattr(args, "tau", None) is not None:
        return doc.partial_profile(args.tau, R)
    if getattr(args, "a", None) is not None:
        return (args.a,) * len(R)
    return None


def _profile_json(doc: GameDocument, x):
    labels = doc.labels_sorted
    return {
        "actions": {labels[i]: x[i] for i in range(len(x))},
        "bitmask_hex": format(profile_to_mask(x), "x"),
    }


def _labels(doc: GameDocument, nodes):
    labels = doc.labels_sorted
    return [labels[i] for i in nodes]


# ---------------------------------------------------------------- commands


def _cmd_nash(doc, game, args):
    cap = _resolve_cap(args, 24)
    res = enumerate_nash(game, cap=cap)
    strict = set(res.strict)
    payload = {
        "count": len(res.profiles),
        "equilibria": [dict(_profile_json(doc, x), strict=x in strict)
                       for x in res.profiles],
    }
    return payload, (0 if res.profiles else 2), {"cap": cap}


def _cmd_simulate(doc, game, args):
    if args.profile is not None:
        x0 = doc.profile(args.profile)
    else:
        x0 = (1,) * game.n
    config = SimulationConfig(seed=args.seed, max_steps=args.steps)
    traj = simulate(game, x0, config)
    labels = doc.labels_sorted
    payload = {
        "initial": _profile_json(doc, x0),
        "final": _profile_json(doc, traj.final_profile()),
        "steps_taken": traj.steps_taken,
        "termination": traj.termination,
        "events": [
            {"step": step, "deviator_label": labels[i],
             "profile_bitmask_hex": format(profile_to_mask(x), "x")}
            for step, i, x in traj.events
        ],
    }
    config_echo = {"seed": args.seed, "steps": args.steps}
    if args.plot:
        _render_trajectory_plot(traj, x0, labels, args.plot)
        config_echo["plot"] = args.plot
    if args.format == "csv":
        return traj.to_csv(labels), 0, config_echo
    return payload, 0, config_echo


def _render_trajectory_plot(traj, x0, labels, path):
    """Render each player's action over time as a step plot."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    steps = [0] + [step for step, _, _ in traj.events]
    profiles = [x0] + [x for _, _, x in traj.events]
    if traj.steps_taken > steps[-1]:
        steps.append(traj.steps_taken)
        profiles.append(profiles[-1])
    n = len(x0)
    fig, ax = plt.subplots(figsize=(8, 0.6 * n + 2))
    for i in range(n):
        # Offset each player's +/-1 track so the lines do not overlap.
        track = [x[i] * 0.35 + (n - 1 - i) for x in profiles]
        ax.step(steps, track, where="post", label=labels[i])
    ax.set_yticks([n - 1 - i for i in range(n)])
    ax.set_yticklabels(labels)
    ax.set_xlabel("step")
    ax.set_title(f"best-response trajectory ({traj.termination})")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _cmd_balance(doc, game, args):
    cert = find_balanced_partition(game.network)
    if cert.balanced:
        payload = {
            "balanced": True,
            "partition": [sorted(_labels(doc, cert.partition[0])),
                          sorted(_labels(doc, cert.partition[1]))],
            "gauge": list(cert.gauge),
        }
        return payload, 0, {}
    labels = doc.labels_sorted
    payload = {
        "balanced": False,
        "witness_cycle": [[labels[i], labels[j], format_weight(w)]
                          for i, j, w in cert.witness],
    }
    return payload, 2, {}


def _cmd_indecomposable(doc, game, args):
    name, R = _node_set(doc, args)
    sub, index_map = subnetwork(game.network, R)
    if args.hplus is not None:
        hplus = _parse_rationals(args.hplus, len(R), "--hplus")
        hminus = (_parse_rationals(args.hminus, len(R), "--hminus")
                  if args.hminus is not None else tuple(-v for v in hplus))
        box = FieldBox(tuple(range(len(R))), hminus, hplus)
    else:
        tau = _tau_for(doc, args, R)
        if tau is None:
            raise UsageError("indecomposable needs --hplus or --tau/--a")
        full_box = field_box(game, R, tau)
        box = FieldBox(tuple(range(len(R))), full_box.hminus, full_box.hplus)
    cap = _resolve_cap(args, 24)
    res = is_indecomposable(sub, box, cap=cap)
    payload = res.to_json_dict()
    if res.witness is not None:
        payload["witness"] = [sorted(_labels(doc, [R[i] for i in side]))
                              for side in res.witness]
    payload["set"] = name
    payload["hplus"] = [format_weight(v) for v in box.hplus]
    payload["hminus"] = [format_weight(v) for v in box.hminus]
    return payload, (0 if res.indecomposable else 2), {"cap": cap}


def _cmd_cohesion(doc, game, args):
    name, R = _node_set(doc, args)
    tau = _tau_for(doc, args, R)
    if getattr(args, "tau", None) is not None:
        mode, res = "polarized", check_polarized_cohesion(game, R, tau)
    elif args.a is not None:
        mode, res = "consensus", check_consensus_cohesion(game, R, args.a)
    else:
        mode, res = "strict", check_strict_cohesion(game, R)
    payload = dict(res.to_json_dict(), mode=mode, set=name)
    return payload, (0 if res.ok else 2), {}


def _cmd_existence(doc, game, args):
    name, R = _node_set(doc, args)
    tau = _tau_for(doc, args, R)
    cert = construct_consensus_equilibrium(game, R, tau)
    payload = dict(cert.to_json_dict(), set=name)
    if cert.equilibrium is not None:
        payload["equilibrium"] = _profile_json(doc, cert.equilibrium)
    return payload, (0 if cert.equilibrium is not None else 2), {}


def _cmd_stability(doc, game, args):
    name, R = _node_set(doc, args)
    tau = _tau_for(doc, args, R)
    cap = _resolve_cap(args, 20)
    cert = check_stability(game, R, tau, empirical=args.empirical, cap=cap)
    payload = dict(cert.to_json_dict(), set=name)
    code = 0 if cert.tier != "hypotheses-failed" else 2
    return payload, code, {"cap": cap, "empirical": args.empirical}


def _cmd_reach(doc, game, args):
    cap = _resolve_cap(args, 20)
    graph = build_transition_graph(game, cap=cap)
    if args.profile is not None:
        target = [doc.profile(args.profile)]
        target_name = args.profile
    else:
        target = list(enumerate_nash(game, cap=cap).profiles)
        target_name = "nash"
    reachable = bool(target) and is_globally_br_reachable(game, target, graph)
    invariant, exit_edge = (is_br_invariant(game, target, graph)
                            if target else (False, None))
    payload = {
        "target": target_name,
        "target_size": len(target),
        "globally_br_reachable": reachable,
        "br_invariant": invariant,
        "globally_br_stable": reachable and invariant,
    }
    if exit_edge is not None:
        src, dev, dst = exit_edge
        labels = doc.labels_sorted
        payload["exit_edge"] = {
            "from_bitmask_hex": format(src, "x"),
            "deviator_label": labels[dev],
            "to_bitmask_hex": format(dst, "x"),
        }
    return payload, (0 if reachable else 2), {"cap": cap}


def _cmd_potential(doc, game, args):
    obstruction = exact_potential_obstruction(game)
    if obstruction is None:
        payload = {"exact_potential": True}
        if args.profile is not None:
            x = doc.profile(args.profile)
            payload["value_at_profile"] = format_weight(potential(game, x))
            payload["profile"] = args.profile
        return payload, 0, {}
    labels = doc.labels_sorted
    payload = {
        "exact_potential": False,
        "obstruction": {
            "players": [labels[obstruction.i], labels[obstruction.j]],
            "cycle_bitmasks_hex": [format(profile_to_mask(x), "x")
                                   for x in obstruction.profiles],
            "cycle_sum": format_weight(obstruction.cycle_sum),
        },
    }
    return payload, 2, {}


COMMANDS = {
    "nash": _cmd_nash,
    "simulate": _cmd_simulate,
    "balance": _cmd_balance,
    "indecomposable": _cmd_indecomposable,
    "cohesion": _cmd_cohesion,
    "existence": _cmd_existence,
    "stability": _cmd_stability,
    "reach": _cmd_reach,
    "potential": _cmd_potential,
}


def build_parser() -> _Parser:
    parser = _Parser(prog="sncgame",
                     description="Analyze coordination games on signed "
                                 "networks from JSON game documents.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, **extra):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--game", required=True,
                       help="game document file or bundled fixture name")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--cap", type=int,
                       help="max node count for exhaustive state-space work")
        for flag, kwargs in extra.items():
            p.add_argument(flag, **kwargs)
        return p

    add("nash", "enumerate Nash equilibria (exit 2 when none exist)")
    add("simulate", "run asynchronous best-response dynamics",
        **{"--profile": dict(help="named initial profile (default all +1)"),
           "--seed": dict(type=int, default=0),
           "--steps": dict(type=int, default=10_000),
           "--plot": dict(help="also render the trajectory to this image "
                               "file (PNG etc.)")})
    add("balance", "detect structural balance (exit 2 when unbalanced)")
    add("indecomposable", "test field-box indecomposability of a node set",
        **{"--set": dict(help="node set name (default R)"),
           "--hplus": dict(help="comma-separated upper field bounds"),
           "--hminus": dict(help="comma-separated lower bounds "
                                 "(default -hplus)"),
           "--tau": dict(help="named partial profile to derive the box from"),
           "--a": dict(type=int, choices=(1, -1),
                       help="consensus action to derive the box from")})
    add("cohesion", "check cohesion of a node set",
        **{"--set": dict(help="node set name (default R)"),
           "--tau": dict(help="named partial profile: polarized variant"),
           "--a": dict(type=int, choices=(1, -1),
                       help="consensus variant at this action")})
    add("existence", "construct a Nash profile with the set at consensus",
        **{"--set": dict(help="node set name (default R)"),
           "--tau": dict(help="named partial profile for the set"),
           "--a": dict(type=int, choices=(1, -1),
                       help="uniform consensus action")})
    add("stability", "check the stability hypotheses for a node set",
        **{"--set": dict(help="node set name (default R)"),
           "--tau": dict(help="named partial profile for the set"),
           "--a": dict(type=int, choices=(1, -1)),
           "--empirical": dict(action="store_true",
                               help="also verify on the full transition "
                                    "graph")})
    add("reach", "reachability/invariance of a target profile set",
        **{"--profile": dict(help="named target profile "
                                  "(default: the Nash set)")})
    add("potential", "exact-potential test with obstruction certificate",
        **{"--profile": dict(help="also evaluate the potential here")})
    return parser


def _write_output(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.format == "csv" and args.command != "simulate":
            raise UsageError("--format csv is only available for simulate")
        doc = _load_document(args.game)
        game = doc.to_game()
        payload, code, config_echo = COMMANDS[args.command](doc, game, args)
    except UsageError as exc:
        print(f"sncgame: error: {exc}", file=sys.stderr)
        return 1
    except CapExceeded as exc:
        print(f"sncgame: error: {exc}", file=sys.stderr)
        return 3
    except (SncError, OSError, json.JSONDecodeError) as exc:
        print(f"sncgame: error: {exc}", file=sys.stderr)
        return 1

    if isinstance(payload, str):  # csv trajectory
        _write_output(payload, args.out)
        return code
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": [args.command] + argv[1:],
        "config": dict(config_echo, game=args.game, format=args.format),
        "result": payload,
        "exit_status": code,
    }
    _write_output(json.dumps(report, indent=2), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
