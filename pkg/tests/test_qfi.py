import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecsmetro import fock_oracle as fo
from ecsmetro.channels import LossScenario
from ecsmetro.errors import TruncationError, UnreachableEnergyError
from ecsmetro.qfi import (
    alpha_for_energy,
    cfi_pnrd,
    compare_at_fixed_energy,
    qfi_ecs,
    qfi_separable_coherent,
    qfi_values,
)
from ecsmetro.states import ProbeSpec, mean_photon_a


def test_full_loss_gives_zero():
    assert qfi_ecs(ProbeSpec(1, 0), LossScenario("both", 1.0)).value == 0.0


@pytest.mark.parametrize("model", ["both_arms", "one_arm_a"])
@pytest.mark.parametrize("sign", ["plus", "minus"])
@pytest.mark.parametrize("alpha,beta,rate", [(1, 0, 0.2), (1, 0, 0.3), (1, 0, 0.0), (1.8, -0.9, 0.6)])
def test_closed_form_matches_oracle(alpha, beta, rate, sign, model):
    p = ProbeSpec(alpha, beta, sign)
    s = LossScenario(model, rate)
    assert qfi_ecs(p, s).value == pytest.approx(fo.oracle_qfi_for(p, model, rate), abs=1e-7)


def test_golden_oracle_value(golden):
    g = golden["qfi_oracle_alpha1_beta0.3_rate0.2_both_arms"]
    s = LossScenario(g["model"], g["rate"])
    assert qfi_ecs(ProbeSpec(g["alpha"], g["beta"]), s).value == pytest.approx(g["value"], abs=1e-7)
    assert fo.oracle_qfi_for(ProbeSpec(g["alpha"], g["beta"]), g["model"], g["rate"],
                             truncation=g["truncation"]) == pytest.approx(g["value"], abs=1e-10)


def test_breakdown_is_consistent():
    r = qfi_ecs(ProbeSpec(1.3, -0.2), LossScenario("one", 0.4))
    assert r.value == pytest.approx(r.variance_term - r.coherence_penalty, abs=1e-14)
    assert r.coherence_penalty >= 0


def test_degenerate_probe_uses_baseline():
    r = qfi_ecs(ProbeSpec(1.4, 1.4), LossScenario("both", 0.3))
    assert r.separable and r.value == pytest.approx(4 * 0.7 * 1.96, abs=1e-14)


def test_continuity_at_degenerate_point():
    s = LossScenario("both", 0.3)
    near = qfi_ecs(ProbeSpec(1.0, 1.0 - 1e-4), s).value
    ref = fo.oracle_qfi_for(ProbeSpec(1.0, 1.0 - 1e-4), "both", 0.3)
    assert near == pytest.approx(ref, abs=1e-7)
    assert near == pytest.approx(4 * 0.7, abs=1e-3)


def test_baseline_examples():
    assert qfi_separable_coherent(2, LossScenario("both", 0.5)).value == 8.0
    assert qfi_separable_coherent(0, LossScenario("one", 0.3)).value == 0.0
    assert qfi_separable_coherent(1, LossScenario("both", 0.0)).value == 4.0


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1), st.sampled_from([1, -1]),
       st.sampled_from(["both_arms", "one_arm_a"]))
def test_qfi_nonnegative_and_sign_insensitive(alpha, beta, rate, sign, model):
    if sign < 0 and abs(alpha - beta) < 1e-6:
        return
    v = float(qfi_values(alpha, beta, rate, sign, model))
    assert v >= -1e-9
    # swapping the two modes' roles leaves the probe invariant up to a phase convention on n_a
    assert v == pytest.approx(float(qfi_values(beta, alpha, rate, sign, model)), rel=1e-9, abs=1e-9)


@given(st.floats(0.05, 3), st.floats(-1, 0.95), st.floats(0, 1))
def test_qfi_bounded_by_lossless_value(alpha, ratio, rate):
    beta = ratio * alpha
    if abs(alpha - beta) < 1e-6:
        return
    lossy = float(qfi_values(alpha, beta, rate, 1, "both_arms"))
    clean = float(qfi_values(alpha, beta, 0.0, 1, "both_arms"))
    assert lossy <= clean + 1e-9


def test_energy_matched_advantage():
    p = ProbeSpec(0.6, -0.3)
    s = LossScenario("both", 1e-3)
    n = mean_photon_a(p)
    assert qfi_ecs(p, s).value > qfi_separable_coherent(math.sqrt(n), s).value


def test_alpha_for_energy_roundtrip():
    for gamma in (-1.0, -0.2, 0.0, 0.5):
        for sign in ("plus", "minus"):
            n = 1.7
            a = alpha_for_energy(n, gamma, sign)
            assert mean_photon_a(ProbeSpec(a, gamma * a, sign)) == pytest.approx(n, abs=1e-10)


def test_energy_comparison_examples():
    s = LossScenario("both", 0.0)
    c = compare_at_fixed_energy(1.0, 1.0, "plus", s)
    assert c.qfi_ecs == pytest.approx(c.qfi_coherent, abs=1e-12)
    with pytest.raises(UnreachableEnergyError):
        compare_at_fixed_energy(0.49, -1.0, "minus", s)
    c = compare_at_fixed_energy(2.0, 0.0, "plus", s)
    assert c.qfi_ecs > c.qfi_coherent


def test_minus_family_needs_distinct_amplitudes():
    with pytest.raises(UnreachableEnergyError):
        alpha_for_energy(1.0, 1.0, "minus")


def test_cfi_golden(golden):
    g = golden["cfi_max_alpha1_beta0_rate0"]
    r = cfi_pnrd(ProbeSpec(g["alpha"], g["beta"]), LossScenario("both", g["rate"]), g["phi"], g["truncation"])
    assert r.value == pytest.approx(g["value"], abs=1e-9)


def test_cfi_depends_on_phase():
    p, s = ProbeSpec(1, 0), LossScenario("both", 0.2)
    assert abs(cfi_pnrd(p, s, 0.3).value - cfi_pnrd(p, s, 0.7).value) > 1e-3


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0, 1), st.floats(0, 3),
       st.sampled_from(["both_arms", "one_arm_a"]))
def test_cfi_below_qfi(alpha, beta, rate, phi, model):
    p, s = ProbeSpec(alpha, beta), LossScenario(model, rate)
    assert cfi_pnrd(p, s, phi).value <= qfi_ecs(p, s).value + 1e-6


def test_cfi_truncation_guard():
    with pytest.raises(TruncationError):
        cfi_pnrd(ProbeSpec(3, 0), LossScenario("both", 0.1), 0.5, truncation=10)


def test_cfi_matches_finite_difference():
    p, s, N = ProbeSpec(1.1, -0.3), LossScenario("one", 0.25), 18
    prob, dprob = fo.detection_probabilities(fo.output_state(p, s.model, s.rate, 0.6, N))
    h = 1e-6
    up, _ = fo.detection_probabilities(fo.output_state(p, s.model, s.rate, 0.6 + h, N))
    dn, _ = fo.detection_probabilities(fo.output_state(p, s.model, s.rate, 0.6 - h, N))
    assert np.allclose(dprob, (up - dn) / (2 * h), atol=1e-8)
    assert prob.sum() == pytest.approx(1.0, abs=1e-10)
