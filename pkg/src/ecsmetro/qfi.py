"""Quantum Fisher information of the lossy probe and its coherent baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import fock_oracle
from .channels import LossScenario, spectral_arrays
from .errors import TruncationError, UnreachableEnergyError
from .states import ProbeSpec, Sign, mean_photon_number

#: probabilities below this are skipped in the classical Fisher sum
CFI_FLOOR = 1e-15


@dataclass(frozen=True)
class QfiResult:
    value: float
    variance_term: float
    coherence_penalty: float
    probe: ProbeSpec | None = None
    scenario: LossScenario | None = None
    separable: bool = False


def qfi_terms(alpha, beta, rate, sign, model):
    """Vectorised (variance_term, coherence_penalty) of the rank-2 formula.

    F = 4 sum_k lam_k (g_k - h_k^2) - 16 lam_+ lam_- / (lam_+ + lam_-) cross^2
    """
    sp = spectral_arrays(alpha, beta, rate, sign, model)
    lp, lm = sp["lambda_plus"], sp["lambda_minus"]
    variance = 4.0 * (lp * (sp["gpp"] - sp["hpp"] ** 2) + lm * (sp["gmm"] - sp["hmm"] ** 2))
    with np.errstate(invalid="ignore", divide="ignore"):
        weight = np.where(lp * lm > 0, lp * lm / (lp + lm), 0.0)
    penalty = 16.0 * weight * sp["cross"] ** 2
    return variance, penalty


def qfi_values(alpha, beta, rate, sign, model):
    """Vectorised QFI; alpha == beta falls back to the separable 4 T alpha^2."""
    alpha, beta, rate = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (alpha, beta, rate)))
    variance, penalty = qfi_terms(alpha, beta, rate, sign, model)
    value = variance - penalty
    degenerate = np.abs(alpha - beta) < 1e-9
    if np.any(degenerate):
        value = np.where(degenerate, 4.0 * (1.0 - rate) * alpha**2, value)
    return value


def qfi_ecs(p: ProbeSpec, s: LossScenario) -> QfiResult:
    """Closed-form QFI of the probe after phase shift and loss."""
    if p.is_degenerate:
        base = qfi_separable_coherent(p.alpha, s)
        return QfiResult(base.value, base.value, 0.0, p, s, separable=True)
    variance, penalty = qfi_terms(p.alpha, p.beta, s.rate, int(p.sign), s.model)
    variance, penalty = float(variance), float(penalty)
    return QfiResult(max(variance - penalty, 0.0), variance, penalty, p, s)


def qfi_separable_coherent(alpha: float, s: LossScenario) -> QfiResult:
    """QFI 4 (1 - R) alpha^2 of |alpha>|alpha>; identical for both loss models."""
    value = 4.0 * (1.0 - s.rate) * float(alpha) ** 2
    return QfiResult(value, value, 0.0, ProbeSpec(alpha, alpha), s, separable=True)


# --------------------------------------------------------------------------
# energy-matched comparison


def alpha_for_energy(n_av: float, gamma: float, sign=Sign.PLUS, xtol: float = 1e-12) -> float:
    """Solve mean_photon_a(alpha, gamma * alpha) = n_av for alpha >= 0."""
    sign = Sign.parse(sign)
    if n_av < 0:
        raise UnreachableEnergyError("mean photon number must be nonnegative")
    if sign is Sign.MINUS and abs(1.0 - gamma) < 1e-12:
        raise UnreachableEnergyError("the minus-sign probe is undefined for gamma == 1")
    if sign is Sign.PLUS and abs(1.0 - gamma) < 1e-12:
        return math.sqrt(n_av)

    def energy(a):
        return float(mean_photon_number(a, gamma * a, int(sign)))

    # the minus-sign family never drops below 1/2 photon in mode a
    lo = 1e-6 if sign is Sign.MINUS else 0.0
    f_lo = energy(lo) - n_av if lo > 0 else -n_av
    if f_lo > 0:
        raise UnreachableEnergyError(
            f"n_av={n_av} is below the minimum {energy(lo):.6g} of this probe family"
        )
    if f_lo == 0:
        return lo
    hi = 10.0 * math.sqrt(max(n_av, 1e-12))
    if energy(hi) < n_av:
        raise UnreachableEnergyError(f"n_av={n_av} not reached for alpha <= {hi:.6g}")
    return brentq(lambda a: energy(a) - n_av, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


@dataclass(frozen=True)
class EnergyComparison:
    n_av: float
    gamma: float
    alpha: float
    beta: float
    qfi_ecs: float
    qfi_coherent: float
    meta: dict = field(default_factory=dict)


def compare_at_fixed_energy(n_av: float, ratio_gamma: float, sign, s: LossScenario) -> EnergyComparison:
    """QFI of the probe with beta = gamma * alpha versus |a_c>|a_c>, a_c = sqrt(n_av)."""
    sign = Sign.parse(sign)
    alpha = alpha_for_energy(n_av, ratio_gamma, sign)
    beta = ratio_gamma * alpha
    if sign is Sign.MINUS and abs(alpha - beta) < 1e-9:
        raise UnreachableEnergyError("root-find landed on the degenerate minus-sign probe")
    ecs = qfi_ecs(ProbeSpec(alpha, beta, sign), s).value
    coherent = qfi_separable_coherent(math.sqrt(n_av), s).value
    return EnergyComparison(n_av, ratio_gamma, alpha, beta, ecs, coherent)


# --------------------------------------------------------------------------
# photon-number-resolving detection


@dataclass(frozen=True)
class CfiResult:
    value: float
    captured_probability: float
    truncation: int
    floor: float = CFI_FLOOR
    derivative: str = "analytic"


def cfi_pnrd(p: ProbeSpec, s: LossScenario, phi: float, truncation: int | None = None) -> CfiResult:
    """Classical Fisher information of joint photon counting.

    Counting is done after recombining the two arms on a 50:50 beam splitter
    (counting directly after the phase shift carries no phase information,
    since exp(i phi n_a) is diagonal in the number basis).  dP/dphi is exact:
    the state factor obeys dW/dphi = i n_a W.
    """
    if truncation is None:
        truncation = fock_oracle.auto_truncation(p.alpha, p.beta)
    state = fock_oracle.output_state(p, s.model, s.rate, phi, truncation)
    prob, dprob = fock_oracle.detection_probabilities(state)
    captured = 1.0 - max(
        fock_oracle.coherent_leakage(p.alpha, truncation),
        fock_oracle.coherent_leakage(p.beta, truncation),
    )
    if captured < 1.0 - 1e-10:
        raise TruncationError(f"cutoff {truncation} captures only {captured:.12f} of the probe")
    mask = prob > CFI_FLOOR
    value = float(np.sum(dprob[mask] ** 2 / prob[mask]))
    return CfiResult(value, captured, truncation)
