"""Golden probabilities for the built-in scenarios.

Expected values are exact fractions fixed by elementary amplitude
arithmetic (squares of 1/sqrt(2) and 1/sqrt(3) amplitudes); each is frozen
here as a literal and checked at 1e-9.
"""

import pytest

from histq import get_builtin
from histq.scenarios import BUILTIN_BUILDERS

TOL = 1e-9


def _value(scenario, family, target, data=None, condition=None):
    r = scenario.query(family, target, data=data, condition=condition)
    assert r.is_value, f"{family}: {target} | {data} -> {r.to_dict()}"
    return r.value


def test_builtin_registry_complete():
    assert set(BUILTIN_BUILDERS) == {
        "beamsplitter", "confirmation-b", "confirmation-c",
        "av", "three-channel", "spin-half",
    }
    with pytest.raises(Exception):
        get_builtin("nope")


def test_unitary_family_certainty(beamsplitter):
    # the superposition branch is the only finite-weight history
    assert _value(beamsplitter, "F1", "S@t2", "Psi0@t0") == pytest.approx(1.0, abs=TOL)
    assert _value(beamsplitter, "F1", "sCD@t1") == pytest.approx(1.0, abs=TOL)


def test_detector_outcomes_half_half(beamsplitter):
    for fam in ("F2", "F3"):
        assert _value(beamsplitter, fam, "Cstar@t2") == pytest.approx(0.5, abs=TOL)
        assert _value(beamsplitter, fam, "Dstar@t2") == pytest.approx(0.5, abs=TOL)


def test_detector_outcomes_exclusive_and_exhaustive(beamsplitter):
    assert _value(beamsplitter, "F2", "Cstar@t2 OR Dstar@t2") == pytest.approx(1.0, abs=TOL)
    assert _value(beamsplitter, "F2", "Cstar@t2 AND Dstar@t2") == pytest.approx(0.0, abs=TOL)


def test_channel_probabilities(beamsplitter):
    assert _value(beamsplitter, "F3", "c@t1") == pytest.approx(0.5, abs=TOL)
    assert _value(beamsplitter, "F3", "d@t1") == pytest.approx(0.5, abs=TOL)


def test_which_channel_retrodiction(beamsplitter):
    assert _value(beamsplitter, "F3", "c@t1", "Cstar@t2") == pytest.approx(1.0, abs=TOL)
    assert _value(beamsplitter, "F3", "d@t1", "Cstar@t2") == pytest.approx(0.0, abs=TOL)


def test_superposition_retrodiction(beamsplitter):
    assert _value(beamsplitter, "F2", "s@t1", "CstarD@t2") == pytest.approx(1.0, abs=TOL)
    assert _value(beamsplitter, "F2", "s@t1", "Psi0@t0") == pytest.approx(1.0, abs=TOL)


def test_mqs_event_rejected_in_detector_family(beamsplitter):
    assert beamsplitter.query("F2", "S@t2").is_meaningless
    assert beamsplitter.query("F3", "S@t2").is_meaningless
    assert beamsplitter.query("F2", "c@t1").is_meaningless


def test_coarse_and_fine_detector_families_agree(beamsplitter):
    # the conditional channel/detector correlation is framework-independent
    for fam in ("F3", "F3fine"):
        target = "cCD@t1" if fam == "F3fine" else "c@t1"
        assert _value(beamsplitter, fam, target, "Cstar@t2") == pytest.approx(1.0, abs=TOL)
        assert _value(beamsplitter, fam, "Cstar@t2") == pytest.approx(0.5, abs=TOL)


def test_confirmation_b_channel_families(confirmation_b):
    assert _value(confirmation_b, "E1", "c@t1") == pytest.approx(0.5, abs=TOL)
    assert _value(confirmation_b, "E2", "s@t1") == pytest.approx(1.0, abs=TOL)
    assert _value(confirmation_b, "E1confirm", "c@t1", "Cstar@t2") == pytest.approx(1.0, abs=TOL)


def test_confirmation_c_detector_confirms_superposition(confirmation_c):
    assert _value(confirmation_c, "confirm", "Fstar@t3") == pytest.approx(1.0, abs=TOL)
    assert _value(confirmation_c, "confirm", "Estar@t3") == pytest.approx(0.0, abs=TOL)
    assert _value(confirmation_c, "confirm", "s@t1", "Fstar@t3") == pytest.approx(1.0, abs=TOL)
    assert _value(confirmation_c, "E2", "s@t1") == pytest.approx(1.0, abs=TOL)


def test_av_probability_one_inferences(av):
    assert _value(av, "calA", "A@t1", "Psi@t2") == pytest.approx(1.0, abs=TOL)
    assert _value(av, "calB", "B@t1", "Psi@t2") == pytest.approx(1.0, abs=TOL)
    # unconditional weights: 1/9 to the Psi branch through each channel
    assert _value(av, "calA", "A@t1 AND Psi@t2") == pytest.approx(1 / 9, abs=TOL)


def test_three_channel_thirds(three_channel):
    for p in ("CstarDE", "CDstarE", "CDEstar"):
        assert _value(three_channel, "D1", f"{p}@t2") == pytest.approx(1 / 3, abs=TOL)
    assert _value(three_channel, "D2", "SE@t2") == pytest.approx(2 / 3, abs=TOL)
    assert _value(three_channel, "D2", "CDEstar@t2") == pytest.approx(1 / 3, abs=TOL)


def test_three_channel_families_do_not_mix(three_channel):
    # the MQS event is invisible to the all-detector family and vice versa
    assert three_channel.query("D1", "SE@t2").is_meaningless
    assert three_channel.query("D2", "CstarDE@t2").is_meaningless


def test_spin_half_families(spin_half):
    assert _value(spin_half, "Z", "Zplus@t1") == pytest.approx(0.5, abs=TOL)
    assert _value(spin_half, "X", "Xplus@t1") == pytest.approx(0.5, abs=TOL)
    assert spin_half.query("Z", "Xplus@t1").is_meaningless
    assert spin_half.query("X", "Zplus@t1").is_meaningless


@pytest.mark.parametrize("condition", ["medium", "strong"])
def test_golden_values_condition_independent(beamsplitter, three_channel, condition):
    assert _value(beamsplitter, "F2", "Cstar@t2",
                  condition=condition) == pytest.approx(0.5, abs=TOL)
    assert _value(beamsplitter, "F3", "c@t1", "Cstar@t2",
                  condition=condition) == pytest.approx(1.0, abs=TOL)
    assert _value(three_channel, "D2", "SE@t2",
                  condition=condition) == pytest.approx(2 / 3, abs=TOL)
