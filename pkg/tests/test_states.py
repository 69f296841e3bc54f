import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecsmetro import fock_oracle as fo
from ecsmetro.errors import DegenerateStateError
from ecsmetro.states import (
    ProbeSpec,
    Sign,
    degree_of_entanglement,
    generation_inputs,
    mean_photon_a,
    mean_photon_number,
    normalization,
    schmidt_probabilities,
)

amp = st.floats(-3, 3, allow_nan=False)


def test_normalization_examples():
    assert normalization(ProbeSpec(1, 1)) == pytest.approx(4.0, abs=1e-15)
    assert normalization(ProbeSpec(1, 0)) == pytest.approx(2 * (1 + math.exp(-1)), abs=1e-15)
    assert normalization(ProbeSpec(1, 0, "minus")) == pytest.approx(2 * (1 - math.exp(-1)), abs=1e-15)


@pytest.mark.parametrize("sign", ["plus", "minus"])
def test_normalization_against_fock_norm(sign):
    N = 20
    a, b = fo.coherent_fock(1.0, N), fo.coherent_fock(0.0, N)
    raw = np.outer(a, b) + (1 if sign == "plus" else -1) * np.outer(b, a)
    assert np.sum(raw**2) == pytest.approx(normalization(ProbeSpec(1, 0, sign)), abs=1e-12)


def test_mean_photon_examples():
    assert mean_photon_a(ProbeSpec(1, 1)) == pytest.approx(1.0, abs=1e-15)
    assert mean_photon_a(ProbeSpec(1, 0)) == pytest.approx(1 / (2 * (1 + math.exp(-1))), abs=1e-15)
    assert mean_photon_a(ProbeSpec(1e-5, -1e-5, "minus")) == pytest.approx(0.5, abs=1e-9)


def test_minus_energy_floor_is_an_infimum():
    a = np.geomspace(0.05, 2, 60)
    n = mean_photon_number(a, -a, -1)
    assert np.all(n > 0.5)
    assert np.all(np.diff(n) > 0)


@given(amp, amp, st.sampled_from([1, -1]))
def test_mean_photon_matches_fock(alpha, beta, sign):
    if sign < 0 and abs(alpha - beta) < 1e-3:
        return
    p = ProbeSpec(alpha, beta, sign)
    ref = fo.mean_number_a(fo.ecs_fock(p))
    assert mean_photon_a(p) == pytest.approx(ref, abs=1e-9)


@given(amp, amp)
def test_mean_photon_symmetric_in_modes(alpha, beta):
    psi = fo.ecs_fock(ProbeSpec(alpha, beta))
    prob = np.abs(psi.amplitudes) ** 2
    n = np.arange(psi.truncation + 1)
    assert n @ prob.sum(axis=1) == pytest.approx(n @ prob.sum(axis=0), abs=1e-10)


def test_minus_rejects_degenerate():
    with pytest.raises(DegenerateStateError):
        ProbeSpec(1, 1, "minus")


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        ProbeSpec(float("nan"), 0)


def test_doe_examples():
    assert degree_of_entanglement(ProbeSpec(0.7, 0.7)) == 0.0
    assert degree_of_entanglement(ProbeSpec(3, -3)) == pytest.approx(1.0, abs=1e-12)
    ref = fo.oracle_entropy_of_reduction(fo.ecs_fock(ProbeSpec(1, -1)))
    assert degree_of_entanglement(ProbeSpec(1, -1)) == pytest.approx(ref, abs=1e-9)


def test_schmidt_weights_sum_to_one():
    pp, pm = schmidt_probabilities(ProbeSpec(1.3, -0.4))
    assert pp + pm == pytest.approx(1.0, abs=1e-15)
    assert pp > pm > 0


@given(st.floats(0, 6), st.floats(-5, 5))
def test_doe_translation_invariant(d, c):
    base = degree_of_entanglement(ProbeSpec(d, 0.0))
    assert degree_of_entanglement(ProbeSpec(d + c, c)) == pytest.approx(base, abs=1e-12)


def test_doe_monotone_in_distance():
    d = np.linspace(0, 6, 200)
    doe = [degree_of_entanglement(ProbeSpec(x, 0.0)) for x in d]
    assert np.all(np.diff(doe) >= 0)


def test_minus_doe_constant():
    for a, b in [(0.1, 0.0), (1, -1), (2.5, 0.3)]:
        assert degree_of_entanglement(ProbeSpec(a, b, Sign.MINUS)) == 1.0


def test_generation_inputs():
    g = generation_inputs(ProbeSpec(1, 0))
    assert g.coherent_amplitude == pytest.approx(1 / math.sqrt(2))
    assert g.cat_amplitude == pytest.approx(1 / math.sqrt(2))
    g = generation_inputs(ProbeSpec(0.8, 0.8))
    assert g.coherent_amplitude == pytest.approx(math.sqrt(2) * 0.8)
    assert g.cat_amplitude == 0.0
    g = generation_inputs(ProbeSpec(1, -1))
    assert g.coherent_amplitude == 0.0
    assert g.cat_amplitude == pytest.approx(math.sqrt(2))
    with pytest.raises(ValueError):
        generation_inputs(ProbeSpec(1, 0, "minus"))
