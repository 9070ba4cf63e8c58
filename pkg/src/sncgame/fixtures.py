"""Bundled game documents for the worked figures; see data/AUDIT.md for
the per-edge audit table against the figures' declared links."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .document import GameDocument, parse_document
from .errors import UnknownFixture

BUNDLED = (
    "fig1", "fig2a", "fig2b", "fig3", "fig4", "fig5",
    "fig6", "fig6_alt", "fig7", "fig8",
)


def fixture_text(name: str) -> str:
    """Byte-exact content of a bundled fixture document."""
    if name not in BUNDLED:
        raise UnknownFixture(name)
    return (
        resources.files("sncgame.data").joinpath(f"{name}.json").read_text()
    )


def emit_fixture(name: str) -> GameDocument:
    """A bundled figure document, or the parametrized two-player game
    "example4:ALPHA" (ALPHA an integer or p/q rational)."""
    if name.startswith("example4"):
        alpha = Fraction(0)
        if ":" in name:
            try:
                alpha = Fraction(name.split(":", 1)[1])
            except (ValueError, ZeroDivisionError):
                raise UnknownFixture(name)
        field = {"2": alpha} if alpha != 0 else None
        return GameDocument(
            ["1", "2"], [("1", "2", Fraction(1))], field,
            profiles={"consensus_up": {"1": 1, "2": 1},
                      "consensus_down": {"1": -1, "2": -1}},
        )
    return parse_document(fixture_text(name))
