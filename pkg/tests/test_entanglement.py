import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecsmetro import fock_oracle as fo
from ecsmetro.channels import LossScenario
from ecsmetro.entanglement import (
    negativity,
    negativity_both_arms,
    negativity_both_arms_values,
    negativity_one_arm,
    negativity_one_arm_b123,
    one_arm_b123_coefficients,
)
from ecsmetro.errors import FormulaDomainError
from ecsmetro.states import ProbeSpec


def oracle(p, model, rate):
    return fo.oracle_negativity(fo.output_state(p, model, rate))


def test_both_arms_examples():
    assert negativity_both_arms(ProbeSpec(1.3, -0.7), LossScenario("both", 1.0)).value == 0.0
    assert negativity_both_arms(ProbeSpec(0.8, 0.8), LossScenario("both", 0.2)).value == 0.0
    p = ProbeSpec(1, 0)
    assert negativity_both_arms(p, LossScenario("both", 0.3)).value == pytest.approx(
        oracle(p, "both_arms", 0.3), abs=1e-9)


def test_one_arm_examples():
    assert negativity_one_arm(ProbeSpec(0.8, 0.8), LossScenario("one", 0.2)).value == 0.0
    p = ProbeSpec(1, 0)
    assert negativity_one_arm(p, LossScenario("one", 0.0)).value == pytest.approx(
        negativity_both_arms(p, LossScenario("both", 0.0)).value, abs=1e-12)
    assert negativity_one_arm(p, LossScenario("one", 0.4)).value == pytest.approx(
        oracle(p, "one_arm_a", 0.4), abs=1e-9)
    assert negativity_one_arm(ProbeSpec(2, -1), LossScenario("one", 1.0)).value == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("model", ["both_arms", "one_arm_a"])
@given(st.floats(-2.5, 2.5), st.floats(-2.5, 2.5), st.floats(0, 1))
def test_closed_forms_match_oracle(model, alpha, beta, rate):
    p = ProbeSpec(alpha, beta)
    assert negativity(p, LossScenario(model, rate)).value == pytest.approx(oracle(p, model, rate), abs=1e-9)


def test_lossless_value_is_pure_state_negativity():
    p = ProbeSpec(1.5, -0.5)
    psi = fo.ecs_fock(p)
    ref = fo.oracle_negativity(fo.density(psi))
    for model in ("both", "one"):
        assert negativity(p, LossScenario(model, 0.0)).value == pytest.approx(ref, abs=1e-10)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_both_arms_nonincreasing_in_rate(alpha, beta):
    r = np.linspace(0, 1, 101)
    v = negativity_both_arms_values(alpha, beta, r)
    assert np.all(np.diff(v) <= 1e-15)


def test_entanglement_reversal_at_large_amplitude():
    r = np.linspace(0.0, 0.99, 100)
    low = negativity_both_arms_values(5.0, 0.0, r)
    high = negativity_both_arms_values(5.0, 3.5, r)
    assert low[0] > high[0]
    assert np.any(high > low)


def test_b123_one_arm_expression_is_out_of_domain():
    p, s = ProbeSpec(1, 0), LossScenario("one", 0.4)
    b1, b2, b3, _ = one_arm_b123_coefficients(p, s)
    assert b2 * b2 - 4 * b3 < 0
    with pytest.raises(FormulaDomainError) as info:
        negativity_one_arm_b123(p, s)
    d = info.value.details
    assert d["oracle"] == pytest.approx(oracle(p, "one_arm_a", 0.4), abs=1e-9)
    assert d["corrected"] == pytest.approx(d["oracle"], abs=1e-9)


def test_minus_sign_not_supported():
    with pytest.raises(ValueError):
        negativity_both_arms(ProbeSpec(1, 0, "minus"), LossScenario("both", 0.2))
