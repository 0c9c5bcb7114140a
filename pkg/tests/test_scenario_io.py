import math

import pytest

from histq import ScenarioFileError, export_scenario, get_builtin, load_scenario
from histq.scenario_io import format_amplitude, parse_amplitude

SPIN_DOC = """
histq_scenario: 1
name: spin
spaces:
  spin: {labels: ["z+", "z-"]}
times: [t0, t1]
steps:
  - matrix:
      - ["1", "0"]
      - ["0", "1"]
projectors:
  Zplus: {basis: ["z+"]}
  Zminus: {complement: Zplus}
states:
  xplus: {"z+": 1/sqrt2, "z-": 1/sqrt2}
families:
  Z:
    initial: I
    slots: [[Zplus, Zminus]]
queries:
  up: {family: Z, target: "Zplus@t1"}
"""


@pytest.mark.parametrize("text,expected", [
    ("1/2", 0.5),
    ("-1/sqrt3", -1 / math.sqrt(3)),
    ("1/sqrt2", 1 / math.sqrt(2)),
    ("2/3/sqrt2", 2 / (3 * math.sqrt(2))),
    ("1/sqrt(2)", 1 / math.sqrt(2)),
    ("0.25", 0.25),
    ("0.5+0.5j", 0.5 + 0.5j),
    (3, 3.0),
])
def test_amplitude_grammar(text, expected):
    assert parse_amplitude(text) == pytest.approx(expected)


def test_amplitude_grammar_rejects_garbage():
    with pytest.raises(ScenarioFileError):
        parse_amplitude("one half")


def test_amplitude_round_trip():
    for z in (0.5 + 0.25j, -1 / math.sqrt(2) + 0j, 1e-17 - 0.3j):
        assert parse_amplitude(format_amplitude(z)) == pytest.approx(z, abs=1e-15)


def test_load_minimal_document():
    scenario, queries = load_scenario(SPIN_DOC)
    assert scenario.name == "spin"
    fam = scenario.named_families["Z"]
    assert fam.certificate.weights == pytest.approx((1.0, 1.0))
    assert queries["up"]["target"] == "Zplus@t1"
    r = scenario.query("Z", "Zplus@t1")
    assert r.value == pytest.approx(0.5)


def test_load_permutation_and_map_steps():
    doc = """
histq_scenario: 1
name: hop
spaces:
  s: {labels: [a, b, c]}
times: [t0, t1, t2]
steps:
  - permutation: {a: b, b: a}
  - map:
      a: {b: 1/sqrt2, c: 1/sqrt2}
projectors:
  B: {basis: [b]}
  notB: {complement: B}
families:
  F:
    initial: I
    slots: [[B, notB], [B, notB]]
"""
    scenario, _ = load_scenario(doc)
    assert "F" in scenario.named_families


@pytest.mark.parametrize("mutation,fragment", [
    ("histq_scenario: 1", "histq_scenario: 2"),
    ("times: [t0, t1]", "times: [t0]"),
    ('Zplus: {basis: ["z+"]}', 'Zplus: {basis: ["nope"]}'),
    ("initial: I", "initial: Missing"),
])
def test_load_errors(mutation, fragment):
    with pytest.raises(ScenarioFileError):
        load_scenario(SPIN_DOC.replace(mutation, fragment))


def test_load_rejects_non_mapping_root():
    with pytest.raises(ScenarioFileError):
        load_scenario("- just\n- a list\n")
    with pytest.raises(ScenarioFileError):
        load_scenario(": bad: yaml: [")


@pytest.mark.parametrize("name", [
    "beamsplitter", "confirmation-b", "confirmation-c",
    "av", "three-channel", "spin-half",
])
def test_export_round_trip_preserves_certificates(name):
    original = get_builtin(name)
    reloaded, _ = load_scenario(export_scenario(original))
    assert set(reloaded.named_families) == set(original.named_families)
    for label, fam in original.named_families.items():
        got = reloaded.named_families[label]
        assert got.certificate.weights == pytest.approx(
            fam.certificate.weights, abs=1e-9)
        assert got.certificate.condition == fam.certificate.condition


def test_export_round_trip_preserves_query_answers(beamsplitter):
    reloaded, _ = load_scenario(export_scenario(beamsplitter))
    for target, data, expected in [
        ("Cstar@t2", None, 0.5),
        ("s@t1", "CstarD@t2", 1.0),
    ]:
        r = reloaded.query("F2", target, data=data)
        assert r.value == pytest.approx(expected, abs=1e-9)
    assert reloaded.query("F2", "S@t2").is_meaningless
