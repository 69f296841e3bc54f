"""Symmetric logarithmic derivative of the lossy probe and photon-counting CFI.

For the rank-2 output state the off-diagonal block of the SLD in the
eigenbasis {|lam_+>, |lam_->} is

    L = A (|lam_-><lam_+| - |lam_+><lam_-|),   A = 2 i (lam_+ - lam_-) c_x,

where c_x is the real cross coefficient of :mod:`ecsmetro.channels`.  This
block carries the coherence part of the QFI only.  The derivative of rho
also maps the support into the kernel, and that part of the SLD is not
represented by the two-dimensional operator; :func:`verify_sld_identities`
measures both contributions separately.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import fock_oracle
from .channels import LossModel, LossScenario, spectral
from .errors import DegenerateStateError
from .qfi import CfiResult, cfi_pnrd, qfi_ecs
from .states import ProbeSpec, Sign

__all__ = ["SldDescription", "SldReport", "sld", "sld_coefficient", "verify_sld_identities", "cfi_pnrd", "CfiResult"]


@dataclass(frozen=True)
class SldDescription:
    #: A = i * coefficient_a
    coefficient_a: float
    #: |lam_+-> = (u +- v) / sqrt(2 (1 +- y)), u and v as (mode-a, mode-b) coherent amplitudes
    basis: dict
    eigenbasis_note: str


def sld_coefficient(p: ProbeSpec, s: LossScenario) -> float:
    """Imaginary part of A; A vanishes at beta == -alpha."""
    if p.sign is not Sign.PLUS:
        raise ValueError("the SLD closed form is available for the plus-sign probe only")
    if p.is_degenerate:
        raise DegenerateStateError("the SLD eigenbasis is singular at alpha == beta")
    d2 = (p.beta - p.alpha) ** 2
    t = s.transmissivity
    if s.model is LossModel.BOTH_ARMS:
        c, y, sign = math.exp(-s.rate * d2), math.exp(-t * d2), 1.0
    else:
        c, y, sign = math.exp(-s.rate * d2 / 2), math.exp(-(1 + t) * d2 / 2), -1.0
    one_minus_y2 = -math.expm1(-2 * (t * d2 if s.model is LossModel.BOTH_ARMS else (1 + t) * d2 / 2))
    if one_minus_y2 == 0.0:
        return 0.0
    return sign * t * (p.alpha**2 - p.beta**2) * (y + c) / ((1 + math.exp(-d2)) * math.sqrt(one_minus_y2))


def sld(p: ProbeSpec, s: LossScenario) -> SldDescription:
    a = sld_coefficient(p, s)
    pair = spectral(p, s)
    (ua, ub), (va, vb) = pair.kets
    y = pair.overlap
    basis = {
        "u": (ua, ub),
        "v": (va, vb),
        "phase_on_mode_a": True,
        "norm_plus": math.sqrt(2 * (1 + y)),
        "norm_minus": math.sqrt(2 * (1 - y)),
        "lambda_plus": pair.lambda_plus,
        "lambda_minus": pair.lambda_minus,
    }
    note = "projective measurement onto (|lam_+> + i|lam_->)/sqrt2 and (|lam_+> - i|lam_->)/sqrt2"
    return SldDescription(a, basis, note)


@dataclass(frozen=True)
class SldReport:
    coefficient_a: float
    lyapunov_residual: float
    projected_lyapunov_residual: float
    zero_mean_residual: float
    trace_rho_l2: float
    qfi_closed_form: float
    qfi_oracle: float
    qfi_residual: float
    kernel_contribution: float
    truncation: int
    anomaly: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _basis_kets(p: ProbeSpec, s: LossScenario, phi: float, truncation: int):
    desc = sld(p, s)
    kets = []
    for amp_a, amp_b in (desc.basis["u"], desc.basis["v"]):
        vec = fock_oracle.product_state(
            fock_oracle.coherent_fock(amp_a, truncation), fock_oracle.coherent_fock(amp_b, truncation)
        )
        kets.append(fock_oracle.phase_shift(vec, phi).flat)
    u, v = kets
    plus, minus = u + v, u - v
    return desc.coefficient_a, plus / np.linalg.norm(plus), minus / np.linalg.norm(minus)


def verify_sld_identities(p: ProbeSpec, s: LossScenario, truncation: int | None = None,
                          phi: float = 0.3) -> SldReport:
    """Build rho, d rho / d phi = i [n_a, rho] and L in the Fock basis and test the SLD identities.

    ``kernel_contribution`` is 4 sum_k lam_k ||(1 - P) n_a |lam_k>||^2 with P
    the support projector: the part of the QFI carried by derivative
    components that leave the support of rho, which the two-dimensional
    operator cannot represent.
    """
    if truncation is None:
        truncation = fock_oracle.auto_truncation(p.alpha, p.beta)
    a_im, lam_p, lam_m = _basis_kets(p, s, phi, truncation)
    lossy = fock_oracle.output_state(p, s.model, s.rate, 0.0, truncation)
    state = fock_oracle.phase_shift(lossy, phi)
    rho = state.dense().matrix
    drho = fock_oracle.phase_derivative(state.dense())

    coeff = 1j * a_im
    ell = coeff * (np.outer(lam_m, lam_p.conj()) - np.outer(lam_p, lam_m.conj()))
    rho_l = rho @ ell
    residual = drho - 0.5 * (rho_l + ell @ rho)
    basis = np.stack([lam_p, lam_m], axis=1)
    projected = basis.conj().T @ residual @ basis

    lam, vecs = fock_oracle.support_eigen(state)
    n_vecs = fock_oracle.number_a(truncation)[:, None] * vecs
    leak = n_vecs - vecs @ (vecs.conj().T @ n_vecs)
    kernel = 4.0 * float(lam @ np.sum(np.abs(leak) ** 2, axis=0))

    trace_l = abs(np.trace(rho_l))
    trace_l2 = float(np.trace(rho_l @ ell).real)
    f_closed = qfi_ecs(p, s).value
    f_oracle = fock_oracle.oracle_qfi(lambda x: fock_oracle.phase_shift(lossy, x), phi)
    return SldReport(
        coefficient_a=a_im,
        lyapunov_residual=float(np.linalg.norm(residual)),
        projected_lyapunov_residual=float(np.linalg.norm(projected)),
        zero_mean_residual=float(trace_l),
        trace_rho_l2=trace_l2,
        qfi_closed_form=f_closed,
        qfi_oracle=f_oracle,
        qfi_residual=abs(trace_l2 - f_closed),
        kernel_contribution=kernel,
        truncation=truncation,
        anomaly=abs(a_im) < 1e-15 and f_closed > 1e-9,
    )
