"""Negativity of the lossy plus-sign probe under both loss models."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import LossModel, LossScenario
from .errors import FormulaDomainError
from .states import ProbeSpec, Sign


@dataclass(frozen=True)
class NegativityResult:
    value: float
    model: LossModel
    probe: ProbeSpec
    rate: float


def _require_plus(p: ProbeSpec):
    if p.sign is not Sign.PLUS:
        raise ValueError("closed-form negativity is available for the plus-sign probe only")


def negativity_both_arms_values(alpha, beta, rate):
    """Vectorised (e^{T d2} - 1) / (2 (1 + e^{d2})), rewritten with decaying exponentials."""
    d2 = (np.asarray(beta, dtype=float) - np.asarray(alpha, dtype=float)) ** 2
    rate = np.asarray(rate, dtype=float)
    t = 1.0 - rate
    return np.exp(-rate * d2) * -np.expm1(-t * d2) / (2.0 * (1.0 + np.exp(-d2)))


def negativity_one_arm_values(alpha, beta, rate):
    """Vectorised negativity for loss on mode a only.

    In the basis {|sqrt(T) b>, |sqrt(T) a>} x {|a>, |b>} the partial
    transpose has one negative eigenvalue,

        E_N = [sqrt((1-y)^2 (1+c)^2 - 4 c (s-t)^2) - (1-y)(1-c)] / (2 N_T),

    with c = e^{-R d2/2}, y = e^{-(1+T) d2/2}, s = e^{-T d2/2}, t = e^{-d2/2}.
    For s == t it collapses onto the both-arm expression.
    """
    d2 = (np.asarray(beta, dtype=float) - np.asarray(alpha, dtype=float)) ** 2
    rate = np.asarray(rate, dtype=float)
    t_ = 1.0 - rate
    c = np.exp(-rate * d2 / 2)
    one_minus_c = -np.expm1(-rate * d2 / 2)
    one_minus_y = -np.expm1(-(1.0 + t_) * d2 / 2)
    s_minus_t = np.exp(-t_ * d2 / 2) * one_minus_c
    n_t = 2.0 * (1.0 + np.exp(-d2))
    disc = (one_minus_y * (1.0 + c)) ** 2 - 4.0 * c * s_minus_t**2
    value = (np.sqrt(np.maximum(disc, 0.0)) - one_minus_y * one_minus_c) / (2.0 * n_t)
    return np.maximum(value, 0.0)


def negativity_both_arms(p: ProbeSpec, s: LossScenario) -> NegativityResult:
    _require_plus(p)
    value = 0.0 if p.is_degenerate else float(negativity_both_arms_values(p.alpha, p.beta, s.rate))
    return NegativityResult(max(value, 0.0), LossModel.BOTH_ARMS, p, s.rate)


def negativity_one_arm(p: ProbeSpec, s: LossScenario) -> NegativityResult:
    _require_plus(p)
    value = 0.0 if p.is_degenerate else float(negativity_one_arm_values(p.alpha, p.beta, s.rate))
    return NegativityResult(value, LossModel.ONE_ARM_A, p, s.rate)


def one_arm_b123_coefficients(p: ProbeSpec, s: LossScenario) -> tuple[float, float, float, float]:
    """(B1, B2, B3, N_T) of the alternative closed form |B1 - sqrt(B2^2 - 4 B3)| / (16 N_T)."""
    d2 = (p.beta - p.alpha) ** 2
    r, t = s.rate, 1.0 - s.rate
    b1 = 8 * (1 - math.exp(-r * d2 / 2)) * (1 - math.exp(-(1 + t) * d2 / 2))
    b2 = 8 * (1 - math.exp(-r * d2 / 2)) * (math.exp(-t * d2 / 2) - math.exp(-d2 / 2))
    b3 = 16 * (1 + math.exp(-r * d2 / 2)) ** 2 * (1 - math.exp(-t * d2)) * (1 - math.exp(-d2))
    n_t = 2 * (1 + math.exp(-d2))
    return b1, b2, b3, n_t


def negativity_one_arm_b123(p: ProbeSpec, s: LossScenario, oracle_value: float | None = None) -> NegativityResult:
    """Evaluate the alternative B1/B2/B3 closed form for one-arm loss.

    This expression does not agree with the partial-transpose spectrum; its
    discriminant is negative over most of the parameter space.  A negative
    discriminant raises :class:`FormulaDomainError` carrying the
    discriminant and the brute-force negativity.
    """
    _require_plus(p)
    b1, b2, b3, n_t = one_arm_b123_coefficients(p, s)
    disc = b2 * b2 - 4 * b3
    if disc < 0:
        if oracle_value is None:
            from . import fock_oracle

            rho = fock_oracle.output_state(p, LossModel.ONE_ARM_A, s.rate)
            oracle_value = fock_oracle.oracle_negativity(rho)
        raise FormulaDomainError(
            "negative discriminant in the B1/B2/B3 one-arm negativity",
            discriminant=disc, b1=b1, b2=b2, b3=b3, oracle=oracle_value,
            corrected=negativity_one_arm(p, s).value,
        )
    return NegativityResult(abs((b1 - math.sqrt(disc)) / (16 * n_t)), LossModel.ONE_ARM_A, p, s.rate)


def negativity(p: ProbeSpec, s: LossScenario) -> NegativityResult:
    if s.model is LossModel.BOTH_ARMS:
        return negativity_both_arms(p, s)
    return negativity_one_arm(p, s)
