"""JSON game documents: the single on-disk format the CLI consumes.

A document carries string node labels, signed rational edge weights, an
optional external field, and named node-sets / profiles used by the certificate
commands. Label-to-index mapping is the sorted label order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DocumentError
from .game import SNCGame
from .network import build_network

SCHEMA_VERSION = 1


def _parse_weight(raw, path):
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise DocumentError(path, f"weight must be an integer or 'p/q' string, got {raw!r}")
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(path, f"cannot parse rational {raw!r}: {exc}")
    return value


def format_weight(value: Fraction):
    """Serialize bit-exactly: bare int when integral, else "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


@dataclass
class GameDocument:
    nodes: list  # string labels
    edges: list  # (from_label, to_label, Fraction)
    field: dict = None  # label -> Fraction, zero when absent
    sets: dict = None  # name -> sorted list of labels
    profiles: dict = None  # name -> {label: +/-1}

    def __post_init__(self):
        self.field = dict(self.field or {})
        self.sets = {k: sorted(v) for k, v in (self.sets or {}).items()}
        self.profiles = dict(self.profiles or {})

    @property
    def label_index(self):
        return {label: k for k, label in enumerate(sorted(self.nodes))}

    @property
    def labels_sorted(self):
        return sorted(self.nodes)

    def node_set(self, name):
        if name not in self.sets:
            raise DocumentError(f"$.sets.{name}", "no such node set")
        idx = self.label_index
        return sorted(idx[label] for label in self.sets[name])

    def profile(self, name):
        """A named profile as a tuple over all nodes (must be total)."""
        if name not in self.profiles:
            raise DocumentError(f"$.profiles.{name}", "no such profile")
        idx = self.label_index
        assignment = self.profiles[name]
        out = [0] * len(self.nodes)
        for label, v in assignment.items():
            out[idx[label]] = v
        if 0 in out:
            missing = [l for l in self.labels_sorted if l not in assignment]
            raise DocumentError(f"$.profiles.{name}",
                                f"profile does not cover nodes {missing}")
        return tuple(out)

    def partial_profile(self, name, nodes):
        """A named profile restricted to `nodes` (dense indices, ascending)."""
        if name not in self.profiles:
            raise DocumentError(f"$.profiles.{name}", "no such profile")
        idx = self.label_index
        rev = {v: k for k, v in idx.items()}
        assignment = self.profiles[name]
        out = []
        for i in sorted(nodes):
            label = rev[i]
            if label not in assignment:
                raise DocumentError(f"$.profiles.{name}",
                                    f"profile missing node {label}")
            out.append(assignment[label])
        return tuple(out)

    def to_game(self) -> SNCGame:
        idx = self.label_index
        edges = [(idx[a], idx[b], w) for a, b, w in self.edges]
        net = build_network(len(self.nodes), edges)
        h = [Fraction(0)] * len(self.nodes)
        for label, v in self.field.items():
            h[idx[label]] = v
        return SNCGame(net, h)

    def to_json_dict(self):
        doc = {
            "schema_version": SCHEMA_VERSION,
            "nodes": list(self.nodes),
            "edges": [
                {"from": a, "to": b, "weight": format_weight(w)}
                for a, b, w in self.edges
            ],
        }
        if self.field:
            doc["field"] = {k: format_weight(v) for k, v in sorted(self.field.items())}
        if self.sets:
            doc["sets"] = {k: list(v) for k, v in sorted(self.sets.items())}
        if self.profiles:
            doc["profiles"] = {
                k: {l: v for l, v in sorted(p.items())}
                for k, p in sorted(self.profiles.items())
            }
        return doc

    def serialize(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def parse_document(text: str) -> GameDocument:
    """Parse and validate a JSON game document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("$", f"invalid JSON: {exc}")
    if not isinstance(raw, dict):
        raise DocumentError("$", "document must be a JSON object")

    nodes = raw.get("nodes")
    if not isinstance(nodes, list) or not nodes:
        raise DocumentError("$.nodes", "a non-empty list of labels is required")
    for k, label in enumerate(nodes):
        if not isinstance(label, str):
            raise DocumentError(f"$.nodes[{k}]", f"label must be a string, got {label!r}")
    if len(set(nodes)) != len(nodes):
        dupes = sorted({l for l in nodes if nodes.count(l) > 1})
        raise DocumentError("$.nodes", f"duplicate labels {dupes}")
    known = set(nodes)

    edges = []
    for k, entry in enumerate(raw.get("edges", [])):
        path = f"$.edges[{k}]"
        if not isinstance(entry, dict):
            raise DocumentError(path, "edge must be an object")
        for key in ("from", "to", "weight"):
            if key not in entry:
                raise DocumentError(path, f"missing '{key}'")
        a, b = entry["from"], entry["to"]
        for end, label in (("from", a), ("to", b)):
            if label not in known:
                raise DocumentError(f"{path}.{end}", f"unknown label {label!r}")
        w = _parse_weight(entry["weight"], f"{path}.weight")
        if w == 0:
            raise DocumentError(f"{path}.weight", "weight must be nonzero")
        if a == b:
            raise DocumentError(path, f"self-loop on {a!r}")
        if any(x == a and y == b for x, y, _ in edges):
            raise DocumentError(path, f"duplicate edge {a!r} -> {b!r}")
        edges.append((a, b, w))

    field = {}
    for label, v in (raw.get("field") or {}).items():
        if label not in known:
            raise DocumentError(f"$.field.{label}", "unknown label")
        field[label] = _parse_weight(v, f"$.field.{label}")

    sets = {}
    for name, members in (raw.get("sets") or {}).items():
        path = f"$.sets.{name}"
        if not isinstance(members, list):
            raise DocumentError(path, "node set must be a list of labels")
        for label in members:
            if label not in known:
                raise DocumentError(path, f"unknown label {label!r}")
        if len(set(members)) != len(members):
            raise DocumentError(path, "repeated labels")
        sets[name] = sorted(members)
    if "R" in sets and "S" in sets and set(sets["R"]) & set(sets["S"]):
        raise DocumentError("$.sets", "partition sets R and S must be disjoint")

    profiles = {}
    for name, assignment in (raw.get("profiles") or {}).items():
        path = f"$.profiles.{name}"
        if not isinstance(assignment, dict):
            raise DocumentError(path, "profile must map labels to +/-1")
        for label, v in assignment.items():
            if label not in known:
                raise DocumentError(f"{path}.{label}", "unknown label")
            if v not in (1, -1):
                raise DocumentError(f"{path}.{label}", f"action must be 1 or -1, got {v!r}")
        profiles[name] = dict(assignment)

    return GameDocument(list(nodes), edges, field, sets, profiles)
