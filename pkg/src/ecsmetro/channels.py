"""Rank-2 spectral description of the phase-shifted, lossy probe.

After a phase shift exp(i phi n_a) and photon loss, the output state is

    rho = [ |u><u| + |v><v| + s c (|u><v| + |v><u|) ] / N_T

with two-mode coherent kets u, v, their overlap y = <u|v>, the environment
overlap c, and s = +/-1 the probe sign.  Writing the eigenvectors as
|lam_+-> = (u +- v) / sqrt(2 (1 +- y)) gives

    lam_+ = (1 + s c)(1 + y) / N_T,    lam_- = (1 - s c)(1 - y) / N_T.

The eigenvectors depend on phi only through exp(i phi n_a), so every
derivative inner product is a moment of n_a in the rank-2 basis.

Conventions stored in :class:`SpectralPair`:

* ``gpp``/``gmm`` are <lam'_+-|lam'_+-> (real, >= 0);
* ``hpp``/``hmm`` are the real h with <lam'_+-|lam_+-> = -i h;
* ``cross`` is the real c with <lam'_+|lam_-> = <lam'_-|lam_+> = -i c.

The both-arm model orders the kets as u = |sqrt(T) a>|sqrt(T) b>,
v = |sqrt(T) b>|sqrt(T) a>; the one-arm model uses u = |sqrt(T) b>|a>,
v = |sqrt(T) a>|b>, which flips the sign of ``cross`` relative to the
both-arm ordering.  Only |cross|^2 enters the QFI.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError
from .states import DEGENERATE_TOL, ProbeSpec, Sign


class LossModel(str, enum.Enum):
    BOTH_ARMS = "both_arms"
    ONE_ARM_A = "one_arm_a"

    @classmethod
    def parse(cls, value) -> "LossModel":
        if isinstance(value, LossModel):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"both": cls.BOTH_ARMS, "both_arms": cls.BOTH_ARMS,
                   "one": cls.ONE_ARM_A, "one_arm": cls.ONE_ARM_A,
                   "one_arm_a": cls.ONE_ARM_A}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown loss model {value!r}") from None


@dataclass(frozen=True)
class LossScenario:
    model: LossModel = LossModel.BOTH_ARMS
    rate: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "model", LossModel.parse(self.model))
        rate = float(self.rate)
        if not 0.0 <= rate <= 1.0:
            raise ValueError(f"loss rate must lie in [0, 1], got {rate}")
        object.__setattr__(self, "rate", rate)
        object.__setattr__(self, "phase", float(self.phase))

    @property
    def transmissivity(self) -> float:
        return 1.0 - self.rate


@dataclass(frozen=True)
class SpectralPair:
    lambda_plus: float
    lambda_minus: float
    gpp: float
    gmm: float
    hpp: float
    hmm: float
    cross: float
    overlap: float
    #: (mode-a, mode-b) amplitudes of u and v, mode-a phase factor omitted
    kets: tuple[tuple[float, float], tuple[float, float]]


def spectral_arrays(alpha, beta, rate, sign, model):
    """Vectorised spectral scalars; returns a dict of broadcast arrays.

    No degeneracy check is made here; callers guard alpha == beta.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    rate = np.asarray(rate, dtype=float)
    t = 1.0 - rate
    d2 = (beta - alpha) ** 2
    model = LossModel.parse(model)
    if model is LossModel.BOTH_ARMS:
        env_exp = rate * d2
        ket_exp = t * d2
    else:
        env_exp = rate * d2 / 2
        ket_exp = (1.0 + t) * d2 / 2
    c = np.exp(-env_exp)
    one_minus_c = -np.expm1(-env_exp)
    y = np.exp(-ket_exp)
    one_minus_y = -np.expm1(-ket_exp)
    one_minus_y2 = -np.expm1(-2 * ket_exp)

    if sign > 0:
        n_t = 2.0 * (1.0 + np.exp(-d2))
        lam_p = (1.0 + c) * (1.0 + y) / n_t
        lam_m = one_minus_c * one_minus_y / n_t
    else:
        n_t = -2.0 * np.expm1(-d2)
        lam_p = one_minus_c * (1.0 + y) / n_t
        lam_m = (1.0 + c) * one_minus_y / n_t

    ab = alpha * beta
    a2b2 = ab * ab
    # <u|n|u> + <v|n|v> +- 2<u|n|v>, and the same for n^2, in cancellation-free form
    first_p = (alpha + beta) ** 2 - 2 * ab * one_minus_y
    first_m = d2 + 2 * ab * one_minus_y
    second_p = t * ((alpha**2 + beta**2) ** 2 - 2 * a2b2 * one_minus_y) + first_p
    second_m = t * ((alpha**2 - beta**2) ** 2 + 2 * a2b2 * one_minus_y) + first_m

    with np.errstate(divide="ignore", invalid="ignore"):
        hpp = t * first_p / (2 * (1.0 + y))
        gpp = t * second_p / (2 * (1.0 + y))
        hmm = t * first_m / (2 * one_minus_y)
        gmm = t * second_m / (2 * one_minus_y)
        cross = t * (alpha**2 - beta**2) / (2 * np.sqrt(one_minus_y2))
    if model is LossModel.ONE_ARM_A:
        cross = -cross

    # every derivative vector carries a factor T; the T -> 0 kets are vacuum
    dark = t == 0.0
    if np.any(dark):
        zero = np.zeros(np.broadcast(alpha, beta, rate).shape)
        gpp, gmm, hpp, hmm, cross = (np.where(dark, zero, q) for q in (gpp, gmm, hpp, hmm, cross))
    return {
        "lambda_plus": lam_p, "lambda_minus": lam_m,
        "gpp": gpp, "gmm": gmm, "hpp": hpp, "hmm": hmm, "cross": cross,
        "overlap": y,
    }


def _pair(p: ProbeSpec, s: LossScenario) -> SpectralPair:
    if p.distance < DEGENERATE_TOL:
        raise DegenerateStateError(
            "the rank-2 decomposition is singular at alpha == beta"
        )
    arr = spectral_arrays(p.alpha, p.beta, s.rate, int(p.sign), s.model)
    rt = math.sqrt(s.transmissivity)
    if s.model is LossModel.BOTH_ARMS:
        kets = ((rt * p.alpha, rt * p.beta), (rt * p.beta, rt * p.alpha))
    else:
        kets = ((rt * p.beta, p.alpha), (rt * p.alpha, p.beta))
    return SpectralPair(kets=kets, **{k: float(v) for k, v in arr.items()})


def spectral_both_arms(p: ProbeSpec, s: LossScenario) -> SpectralPair:
    if s.model is not LossModel.BOTH_ARMS:
        raise ValueError("scenario must use the both-arms loss model")
    if p.sign is not Sign.PLUS:
        raise ValueError("use spectral_minus for the minus-sign probe")
    return _pair(p, s)


def spectral_one_arm(p: ProbeSpec, s: LossScenario) -> SpectralPair:
    if s.model is not LossModel.ONE_ARM_A:
        raise ValueError("scenario must use the one-arm loss model")
    if p.sign is not Sign.PLUS:
        raise ValueError("use spectral_minus for the minus-sign probe")
    return _pair(p, s)


def spectral_minus(p: ProbeSpec, s: LossScenario) -> SpectralPair:
    if p.sign is not Sign.MINUS:
        raise ValueError("spectral_minus requires the minus-sign probe")
    return _pair(p, s)


def spectral(p: ProbeSpec, s: LossScenario) -> SpectralPair:
    """Dispatch on sign and loss model."""
    if p.sign is Sign.MINUS:
        return spectral_minus(p, s)
    if s.model is LossModel.BOTH_ARMS:
        return spectral_both_arms(p, s)
    return spectral_one_arm(p, s)
