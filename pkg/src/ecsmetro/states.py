"""Entangled coherent state probes |a>|b> +/- |b>|a> with real amplitudes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError

#: |alpha - beta| below this is treated as alpha == beta.
DEGENERATE_TOL = 1e-9


class Sign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value) -> "Sign":
        if isinstance(value, Sign):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("plus", "+", "+1", "1"):
                return cls.PLUS
            if key in ("minus", "-", "-1"):
                return cls.MINUS
            raise ValueError(f"unknown sign {value!r}; expected 'plus' or 'minus'")
        if value in (1, -1):
            return cls(int(value))
        raise ValueError(f"unknown sign {value!r}")

    @property
    def label(self) -> str:
        return "plus" if self is Sign.PLUS else "minus"


@dataclass(frozen=True)
class ProbeSpec:
    """Amplitude pair and superposition sign of the input probe."""

    alpha: float
    beta: float
    sign: Sign = Sign.PLUS

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "sign", Sign.parse(self.sign))
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite reals")
        if self.sign is Sign.MINUS and self.is_degenerate:
            raise DegenerateStateError(
                "the minus-sign probe vanishes identically at alpha == beta"
            )

    @property
    def distance(self) -> float:
        return abs(self.alpha - self.beta)

    @property
    def is_degenerate(self) -> bool:
        return self.distance < DEGENERATE_TOL


@dataclass(frozen=True)
class OverlapBundle:
    d2: float
    x: float
    n_t: float


def overlaps(p: ProbeSpec) -> OverlapBundle:
    d2 = (p.beta - p.alpha) ** 2
    return OverlapBundle(d2=d2, x=math.exp(-d2 / 2), n_t=_norm_const(d2, int(p.sign)))


def _norm_const(d2, s):
    # 2(1 + s e^{-d2}); the minus branch is written with expm1 to keep precision
    if s > 0:
        return 2.0 * (1.0 + np.exp(-d2))
    return -2.0 * np.expm1(-d2)


def normalization(p: ProbeSpec) -> float:
    """Squared norm N_T of the unnormalised superposition."""
    return float(_norm_const((p.beta - p.alpha) ** 2, int(p.sign)))


def mean_photon_number(alpha, beta, sign=1):
    """Vectorised <n_a> of the normalised probe (equal to <n_b> by symmetry).

    Uses <a,b| n_a |b,a> = alpha*beta*e^{-(a-b)^2}; the forms below avoid
    cancellation near alpha == beta for the minus sign and near alpha == -beta
    for the plus sign.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    d2 = (alpha - beta) ** 2
    one_minus = -np.expm1(-d2)
    ab = alpha * beta
    if sign > 0:
        return ((alpha + beta) ** 2 - 2 * ab * one_minus) / (2 * (1 + np.exp(-d2)))
    return d2 / (2 * one_minus) + ab


def mean_photon_a(p: ProbeSpec) -> float:
    return float(mean_photon_number(p.alpha, p.beta, int(p.sign)))


def schmidt_probabilities(p: ProbeSpec) -> tuple[float, float]:
    """Schmidt weights (p_plus, p_minus) of the probe.

    The plus-sign state is (1+x)|A+>|A+> - (1-x)|A->|A->, up to norm, with
    |A+-> the normalised |a> +- |b> and x = <a|b>.  The minus-sign state has
    two equal Schmidt coefficients.
    """
    if p.sign is Sign.MINUS:
        return 0.5, 0.5
    x = math.exp(-((p.beta - p.alpha) ** 2) / 2)
    denom = 2.0 * (1.0 + x * x)
    return (1.0 + x) ** 2 / denom, (1.0 - x) ** 2 / denom


def _entropy_bits(probs) -> float:
    return float(-sum(q * math.log2(q) for q in probs if q > 0.0))


def degree_of_entanglement(p: ProbeSpec) -> float:
    """Von Neumann entropy (bits) of either reduced state of the probe."""
    if p.sign is Sign.MINUS:
        return 1.0
    if p.is_degenerate:
        return 0.0
    return _entropy_bits(schmidt_probabilities(p))


@dataclass(frozen=True)
class GenerationInputs:
    """Beam-splitter inputs: coherent state on port a, even cat on port b.

    The even cat is the normalised superposition |c> + |-c> with
    c = ``cat_amplitude``; c == 0 is the vacuum.
    """

    coherent_amplitude: float
    cat_amplitude: float


def generation_inputs(p: ProbeSpec) -> GenerationInputs:
    if p.sign is not Sign.PLUS:
        raise ValueError("a beam-splitter recipe is only available for the plus-sign probe")
    root2 = math.sqrt(2.0)
    return GenerationInputs(
        coherent_amplitude=(p.alpha + p.beta) / root2,
        cat_amplitude=(p.alpha - p.beta) / root2,
    )
