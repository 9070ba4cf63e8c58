import json
from fractions import Fraction

import pytest

from sncgame.document import parse_document
from sncgame.errors import DocumentError, UnknownFixture
from sncgame.fixtures import BUNDLED, emit_fixture, fixture_text


def doc_text(**overrides):
    base = {
        "nodes": ["a", "b"],
        "edges": [{"from": "a", "to": "b", "weight": 1}],
    }
    base.update(overrides)
    return json.dumps(base)


def test_round_trip_all_fixtures():
    for name in BUNDLED:
        doc = emit_fixture(name)
        assert parse_document(doc.serialize()) == doc


def test_bundled_text_parses():
    for name in BUNDLED:
        doc = parse_document(fixture_text(name))
        assert doc.nodes


def test_rational_weight_parsing():
    doc = parse_document(doc_text(
        edges=[{"from": "a", "to": "b", "weight": "3/2"}]))
    assert doc.to_game().network.weight(0, 1) == Fraction(3, 2)


def test_unknown_label_names_the_label():
    with pytest.raises(DocumentError) as err:
        parse_document(doc_text(
            edges=[{"from": "a", "to": "zz", "weight": 1}]))
    assert "zz" in str(err.value)


def test_error_carries_json_path():
    with pytest.raises(DocumentError) as err:
        parse_document(doc_text(
            edges=[{"from": "a", "to": "b", "weight": 0}]))
    assert "edges[0]" in str(err.value)


def test_duplicate_labels_rejected():
    with pytest.raises(DocumentError):
        parse_document(doc_text(nodes=["a", "a"]))


def test_self_loop_rejected():
    with pytest.raises(DocumentError):
        parse_document(doc_text(
            edges=[{"from": "a", "to": "a", "weight": 1}]))


def test_overlapping_r_and_s_rejected():
    with pytest.raises(DocumentError):
        parse_document(doc_text(sets={"R": ["a"], "S": ["a", "b"]}))


def test_bad_profile_value_rejected():
    with pytest.raises(DocumentError):
        parse_document(doc_text(profiles={"p": {"a": 0, "b": 1}}))


def test_field_defaults_to_zero():
    doc = parse_document(doc_text(field={"b": "-1/3"}))
    game = doc.to_game()
    assert game.field == (0, Fraction(-1, 3))


def test_label_index_is_sorted_order():
    doc = parse_document(json.dumps({
        "nodes": ["10", "2", "1"],
        "edges": [],
    }))
    assert doc.labels_sorted == ["1", "10", "2"]
    assert doc.label_index == {"1": 0, "10": 1, "2": 2}


def test_example4_parametrized():
    doc = emit_fixture("example4:-1/2")
    game = doc.to_game()
    assert game.field == (0, Fraction(-1, 2))
    assert doc.profile("consensus_up") == (1, 1)


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        emit_fixture("fig99")
