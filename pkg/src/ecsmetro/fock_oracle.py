"""Brute-force two-mode Fock-space backend.

Everything here is built from number-basis amplitudes and generic linear
algebra (Kraus maps, eigendecompositions, partial transposes) and never
uses the closed forms of :mod:`ecsmetro.channels`.  It serves as the
reference the analytic modules are tested against.

Two-mode vectors are stored as ``(N+1, N+1)`` arrays indexed ``[n_a, n_b]``
and flattened in C order, so the flat index is ``n_a * (N+1) + n_b``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln, xlog1py, xlogy
from scipy.stats import poisson

from .errors import DerivativeMismatchError, NumericalError, TruncationError
from .states import ProbeSpec

#: per-component tail mass targeted by :func:`auto_truncation`
TARGET_LEAKAGE = 1e-13
#: largest tolerated tail mass of any coherent component
LEAKAGE_BUDGET = 1e-10
#: eigenvalues at or below this are treated as the null space
EIG_FLOOR = 1e-12


# --------------------------------------------------------------------------
# containers


@dataclass(frozen=True)
class FockVector:
    truncation: int
    amplitudes: np.ndarray  # shape (N+1, N+1), indexed [n_a, n_b]

    @property
    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FockVector":
        return FockVector(self.truncation, self.amplitudes / self.norm())


@dataclass(frozen=True)
class FockOperator:
    truncation: int
    matrix: np.ndarray  # shape ((N+1)^2, (N+1)^2)

    def tensor(self) -> np.ndarray:
        d = self.truncation + 1
        return self.matrix.reshape(d, d, d, d)


@dataclass(frozen=True)
class FactoredState:
    """Density operator stored as ``factor @ factor.conj().T``."""

    truncation: int
    factor: np.ndarray  # shape ((N+1)^2, m)

    def dense(self) -> FockOperator:
        w = self.factor
        return FockOperator(self.truncation, w @ w.conj().T)

    def trace(self) -> float:
        return float(np.vdot(self.factor, self.factor).real)

    def columns(self) -> np.ndarray:
        d = self.truncation + 1
        return self.factor.T.reshape(-1, d, d)


def factored(psi: FockVector) -> FactoredState:
    return FactoredState(psi.truncation, psi.flat.reshape(-1, 1).copy())


def density(psi: FockVector) -> FockOperator:
    v = psi.flat
    return FockOperator(psi.truncation, np.outer(v, v.conj()))


# --------------------------------------------------------------------------
# single-mode states


def coherent_leakage(alpha: float, truncation: int) -> float:
    """Probability mass of |alpha> above photon number ``truncation``."""
    return float(poisson.sf(truncation, alpha * alpha))


def auto_truncation(*amplitudes: float, leakage: float = TARGET_LEAKAGE, minimum: int = 8) -> int:
    """Smallest cutoff whose coherent tail mass is below ``leakage``."""
    mean = max((a * a for a in amplitudes), default=0.0)
    n = max(minimum, int(mean))
    while poisson.sf(n, mean) > leakage:
        n += 1
    return n


def coherent_fock(alpha: float, truncation: int, budget: float = LEAKAGE_BUDGET) -> np.ndarray:
    """Normalised truncated coherent state e^{-a^2/2} sum a^n / sqrt(n!) |n>."""
    leak = coherent_leakage(alpha, truncation)
    if leak > budget:
        raise TruncationError(
            f"cutoff {truncation} leaks {leak:.3g} of |{alpha}> (budget {budget:.1g})"
        )
    amp = np.empty(truncation + 1)
    amp[0] = math.exp(-alpha * alpha / 2)
    for n in range(1, truncation + 1):
        amp[n] = amp[n - 1] * alpha / math.sqrt(n)
    return amp / np.linalg.norm(amp)


def even_cat_fock(gamma: float, truncation: int) -> np.ndarray:
    vec = coherent_fock(gamma, truncation) + coherent_fock(-gamma, truncation)
    return vec / np.linalg.norm(vec)


def product_state(a_vec: np.ndarray, b_vec: np.ndarray) -> FockVector:
    return FockVector(len(a_vec) - 1, np.outer(a_vec, b_vec))


def ecs_fock(probe: ProbeSpec, truncation: int | None = None) -> FockVector:
    """Normalised |alpha>|beta> +/- |beta>|alpha> in the truncated basis."""
    if truncation is None:
        truncation = auto_truncation(probe.alpha, probe.beta)
    a = coherent_fock(probe.alpha, truncation)
    b = coherent_fock(probe.beta, truncation)
    amps = np.outer(a, b) + int(probe.sign) * np.outer(b, a)
    return FockVector(truncation, amps).normalized()


def number_a(truncation: int) -> np.ndarray:
    """Diagonal of n_a in the flattened two-mode basis."""
    return np.repeat(np.arange(truncation + 1, dtype=float), truncation + 1)


# --------------------------------------------------------------------------
# beam splitter


@functools.lru_cache(maxsize=None)
def _bs_block(total: int) -> np.ndarray:
    # basis |k, total-k>; generator a^dag b - b^dag a is real antisymmetric
    k = np.arange(total)
    gen = np.zeros((total + 1, total + 1))
    gen[k + 1, k] = np.sqrt((k + 1.0) * (total - k))
    gen -= gen.T
    # a^dag -> (a^dag + b^dag)/sqrt2, b^dag -> (b^dag - a^dag)/sqrt2
    return expm(-math.pi / 4 * gen)


def _apply_bs(batch: np.ndarray, out_truncation: int) -> tuple[np.ndarray, float]:
    """Apply the 50:50 unitary to a stack of two-mode arrays ``(m, N+1, N+1)``.

    The unitary conserves total photon number, so it acts exactly on each
    anti-diagonal block.  Returns the output stack and the discarded norm^2.
    """
    m, d, _ = batch.shape
    n_in = d - 1
    out = np.zeros((m, out_truncation + 1, out_truncation + 1), dtype=np.result_type(batch, float))
    dropped = 0.0
    for total in range(2 * n_in + 1):
        lo, hi = max(0, total - n_in), min(total, n_in)
        na = np.arange(lo, hi + 1)
        vec = np.zeros((m, total + 1), dtype=out.dtype)
        vec[:, na] = batch[:, na, total - na]
        res = vec @ _bs_block(total).T
        olo, ohi = max(0, total - out_truncation), min(total, out_truncation)
        keep = np.arange(olo, ohi + 1)
        out[:, keep, total - keep] = res[:, keep]
        if olo > 0 or ohi < total:
            mask = np.ones(total + 1, dtype=bool)
            mask[keep] = False
            dropped += float(np.sum(np.abs(res[:, mask]) ** 2))
    return out, dropped


def beam_splitter_50_50(
    state: FockVector, out_truncation: int | None = None, tol: float = LEAKAGE_BUDGET
) -> FockVector:
    """Exact 50:50 beam splitter.

    By default the output cutoff is twice the input cutoff, which holds every
    output component.  A smaller ``out_truncation`` raises
    :class:`TruncationError` if more than ``tol`` of the norm^2 is discarded.
    """
    if out_truncation is None:
        out_truncation = 2 * state.truncation
    out, dropped = _apply_bs(state.amplitudes[None], out_truncation)
    if dropped > tol:
        raise TruncationError(f"beam splitter output cutoff discards {dropped:.3g} of the norm")
    return FockVector(out_truncation, out[0])


# --------------------------------------------------------------------------
# phase shift and loss


@functools.singledispatch
def phase_shift(state, phi: float):
    """Apply exp(i phi n_a)."""
    raise TypeError(f"unsupported state type {type(state).__name__}")


@phase_shift.register
def _(state: FockVector, phi: float) -> FockVector:
    ph = np.exp(1j * phi * np.arange(state.truncation + 1))
    return FockVector(state.truncation, ph[:, None] * state.amplitudes)


@phase_shift.register
def _(state: FockOperator, phi: float) -> FockOperator:
    ph = np.exp(1j * phi * number_a(state.truncation))
    return FockOperator(state.truncation, ph[:, None] * state.matrix * ph.conj()[None, :])


@phase_shift.register
def _(state: FactoredState, phi: float) -> FactoredState:
    ph = np.exp(1j * phi * number_a(state.truncation))
    return FactoredState(state.truncation, ph[:, None] * state.factor)


@functools.lru_cache(maxsize=64)
def loss_kraus(rate: float, truncation: int) -> np.ndarray:
    """Kraus stack ``K[k]`` of a pure-loss channel with transmissivity 1 - rate.

    K_k = sum_n sqrt(C(n,k) T^(n-k) R^k) |n-k><n|, i.e. the amplitude of
    losing k of n photons; the cutoff caps the Kraus rank at N+1.
    """
    d = truncation + 1
    kraus = np.zeros((d, d, d))
    n = np.arange(d)
    for k in range(d):
        src = n[k:]
        log_pmf = (gammaln(src + 1) - gammaln(k + 1) - gammaln(src - k + 1)
                   + xlogy(k, rate) + xlog1py(src - k, -rate))
        kraus[k, src - k, src] = np.exp(0.5 * log_pmf)
    kraus.setflags(write=False)
    return kraus


def _modes(modes) -> tuple[str, ...]:
    if isinstance(modes, str):
        modes = ("a", "b") if modes in ("both", "ab") else (modes,)
    modes = tuple(modes)
    if not set(modes) <= {"a", "b"}:
        raise ValueError(f"modes must be drawn from 'a' and 'b', got {modes}")
    return modes


@functools.singledispatch
def loss_channel(state, rate: float, modes=("a", "b")):
    """Photon loss with transmissivity 1 - rate on the given modes."""
    raise TypeError(f"unsupported state type {type(state).__name__}")


@loss_channel.register
def _(state: FockOperator, rate: float, modes=("a", "b")) -> FockOperator:
    kraus = loss_kraus(float(rate), state.truncation)
    rho = state.tensor()
    for mode in _modes(modes):
        if mode == "a":
            rho = np.einsum("kia,abcd,kjc->ibjd", kraus, rho, kraus, optimize=True)
        else:
            rho = np.einsum("kib,abcd,kjd->aicj", kraus, rho, kraus, optimize=True)
    d = state.truncation + 1
    return FockOperator(state.truncation, rho.reshape(d * d, d * d))


@loss_channel.register
def _(state: FactoredState, rate: float, modes=("a", "b"), prune: float = 1e-30) -> FactoredState:
    kraus = loss_kraus(float(rate), state.truncation)
    cols = state.columns()
    for mode in _modes(modes):
        if mode == "a":
            new = np.einsum("kij,cjb->kcib", kraus, cols, optimize=True)
        else:
            new = np.einsum("kij,caj->kcai", kraus, cols, optimize=True)
        d = state.truncation + 1
        new = new.reshape(-1, d, d)
        weight = np.einsum("cij,cij->c", new, new.conj()).real
        cols = new[weight > prune]
    return FactoredState(state.truncation, cols.reshape(cols.shape[0], -1).T.copy())


@loss_channel.register
def _(state: FockVector, rate: float, modes=("a", "b")) -> FactoredState:
    return loss_channel(factored(state), rate, modes)


def output_state(probe: ProbeSpec, model, rate: float, phi: float = 0.0,
                 truncation: int | None = None) -> FactoredState:
    """Probe after exp(i phi n_a) and photon loss, as a factored density."""
    from .channels import LossModel

    model = LossModel.parse(model)
    psi = ecs_fock(probe, truncation)
    psi = phase_shift(psi, phi) if phi else psi
    modes = ("a", "b") if model is LossModel.BOTH_ARMS else ("a",)
    return loss_channel(factored(psi), rate, modes)


# --------------------------------------------------------------------------
# spectra and QFI


def support_eigen(state: FactoredState, floor: float = EIG_FLOOR, seed: int = 0,
                  rank_guess: int = 6, deficit_tol: float = 1e-10):
    """Eigenpairs of a factored density with eigenvalue above ``floor``.

    Small factors are diagonalised exactly by a thin SVD.  Otherwise a
    randomised range finder with power iterations is used, and its rank is
    doubled until the trace deficit (the sum of all eigenvalues not
    captured, each nonnegative) drops below ``deficit_tol``.
    """
    w = state.factor
    dim, m = w.shape
    total = state.trace()
    rng = np.random.default_rng(seed)
    k = rank_guess
    while True:
        if m <= 4 * k or k >= dim:
            u, s, _ = np.linalg.svd(w, full_matrices=False)
        else:
            omega = rng.standard_normal((m, k + 6))
            q, _ = np.linalg.qr(w @ omega)
            for _ in range(2):
                q, _ = np.linalg.qr(w @ (w.conj().T @ q))
            ub, s, _ = np.linalg.svd(q.conj().T @ w, full_matrices=False)
            u = q @ ub
        lam = s * s
        deficit = total - float(lam.sum())
        if deficit <= deficit_tol or m <= 4 * k or k >= dim:
            break
        k *= 2
    if deficit > deficit_tol:
        raise NumericalError(f"eigen-solver left trace deficit {deficit:.3g}")
    keep = lam > floor
    return lam[keep], u[:, keep]


def _qfi_support(lam, vecs, n_diag) -> float:
    nv = n_diag[:, None] * vecs
    h = vecs.conj().T @ nv
    second = np.einsum("ik,ik->k", nv.conj(), nv).real
    pair = lam[:, None] * lam[None, :] / (lam[:, None] + lam[None, :])
    value = 4.0 * float(lam @ second) - 8.0 * float(np.sum(pair * np.abs(h) ** 2))
    return value


def _qfi_dense(rho: np.ndarray, n_diag: np.ndarray, floor: float) -> float:
    drho = 1j * (n_diag[:, None] * rho - rho * n_diag[None, :])
    lam, vecs = np.linalg.eigh(rho)
    d = vecs.conj().T @ drho @ vecs
    denom = lam[:, None] + lam[None, :]
    mask = denom > floor
    return float(np.sum(2.0 * np.abs(d[mask]) ** 2 / denom[mask]))


def phase_derivative(state, vectors=None):
    """d rho / d phi = i [n_a, rho] for dense operators, or its action on vectors."""
    n = number_a(state.truncation)
    if isinstance(state, FockOperator):
        return 1j * (n[:, None] * state.matrix - state.matrix * n[None, :])
    w = state.factor
    rho_x = w @ (w.conj().T @ vectors)
    rho_nx = w @ (w.conj().T @ (n[:, None] * vectors))
    return 1j * (n[:, None] * rho_x - rho_nx)


def _apply(state, vectors):
    if isinstance(state, FockOperator):
        return state.matrix @ vectors
    w = state.factor
    return w @ (w.conj().T @ vectors)


def check_phase_derivative(rho_builder, phi0: float, step: float = 1e-5, tol: float = 1e-6,
                           n_probe: int = 3, seed: int = 1) -> float:
    """Compare i[n_a, rho] against a central difference of ``rho_builder``.

    Returns the relative mismatch; raises :class:`DerivativeMismatchError`
    above ``tol``.
    """
    centre = rho_builder(phi0)
    dim = (centre.truncation + 1) ** 2
    rng = np.random.default_rng(seed)
    probe = rng.standard_normal((dim, n_probe)) + 1j * rng.standard_normal((dim, n_probe))
    probe /= np.linalg.norm(probe, axis=0)
    analytic = phase_derivative(centre, probe) if isinstance(centre, FactoredState) \
        else phase_derivative(centre) @ probe
    fd = (_apply(rho_builder(phi0 + step), probe) - _apply(rho_builder(phi0 - step), probe)) / (2 * step)
    mismatch = float(np.linalg.norm(fd - analytic) / max(1.0, np.linalg.norm(analytic)))
    if mismatch > tol:
        raise DerivativeMismatchError(
            f"analytic and finite-difference derivatives differ by {mismatch:.3g}"
        )
    return mismatch


def oracle_qfi(rho_builder, phi0: float = 0.0, *, floor: float = EIG_FLOOR,
               check_derivative: bool = True, fd_step: float = 1e-5) -> float:
    """Quantum Fisher information of ``rho_builder(phi)`` at ``phi0``.

    ``rho_builder`` returns a :class:`FockOperator` or :class:`FactoredState`.
    Dense operators use the full-spectrum sum
    F = sum_{l_n + l_m > floor} 2 |<n| d rho |m>|^2 / (l_n + l_m).
    Factored states use the algebraically identical support form
    F = 4 sum_k l_k <k|n_a^2|k> - 8 sum_{k,l} l_k l_l / (l_k + l_l) |<k|n_a|l>|^2,
    which needs only eigenvectors with nonzero eigenvalue.
    """
    state = rho_builder(phi0)
    if check_derivative:
        check_phase_derivative(rho_builder, phi0, step=fd_step)
    n = number_a(state.truncation)
    if isinstance(state, FockOperator):
        value = _qfi_dense(state.matrix, n, floor)
    else:
        lam, vecs = support_eigen(state, floor)
        value = _qfi_support(lam, vecs, n)
    return max(value, 0.0)


def oracle_qfi_for(probe: ProbeSpec, model, rate: float, phi0: float = 0.0,
                   truncation: int | None = None, **kwargs) -> float:
    if truncation is None:
        truncation = auto_truncation(probe.alpha, probe.beta)
    # loss commutes with the phase shift, so the Kraus map is applied once
    lossy = output_state(probe, model, rate, 0.0, truncation)
    return oracle_qfi(lambda phi: phase_shift(lossy, phi), phi0, **kwargs)


# --------------------------------------------------------------------------
# entanglement


def partial_transpose_a(op: FockOperator) -> FockOperator:
    d = op.truncation + 1
    t = op.tensor().transpose(2, 1, 0, 3)
    return FockOperator(op.truncation, t.reshape(d * d, d * d))


def oracle_negativity(rho) -> float:
    """Absolute sum of the negative eigenvalues of rho^{T_a}."""
    if isinstance(rho, FactoredState):
        rho = rho.dense()
    mat = partial_transpose_a(rho).matrix
    if np.iscomplexobj(mat) and np.max(np.abs(mat.imag), initial=0.0) < 1e-15:
        mat = mat.real
    eig = np.linalg.eigvalsh(mat)
    return float(-eig[eig < 0].sum())


def reduced_spectrum(psi: FockVector) -> np.ndarray:
    s = np.linalg.svd(psi.amplitudes / psi.norm(), compute_uv=False)
    return s * s


def oracle_entropy_of_reduction(psi: FockVector) -> float:
    """Von Neumann entropy (bits) of the mode-a reduced state."""
    p = reduced_spectrum(psi)
    p = p[p > 1e-300]
    return float(max(-np.sum(p * np.log2(p)), 0.0))


def mean_number_a(psi: FockVector) -> float:
    prob = np.abs(psi.amplitudes) ** 2
    return float(np.arange(psi.truncation + 1) @ prob.sum(axis=1) / prob.sum())


def number_variance_a(psi: FockVector) -> float:
    prob = np.abs(psi.amplitudes) ** 2
    prob_a = prob.sum(axis=1) / prob.sum()
    n = np.arange(psi.truncation + 1)
    mean = n @ prob_a
    return float((n * n) @ prob_a - mean * mean)


# --------------------------------------------------------------------------
# photon counting after a recombining beam splitter


def detection_probabilities(state: FactoredState):
    """Joint photon-number distribution after a final 50:50 beam splitter.

    Returns ``(P, dP)`` over output counts ``[n_a, n_b]`` where ``dP`` is the
    analytic phase derivative obtained from d W / d phi = i n_a W.
    """
    cols = state.columns()
    n = np.arange(state.truncation + 1, dtype=float)
    dcols = 1j * n[None, :, None] * cols
    out_n = 2 * state.truncation
    out, _ = _apply_bs(cols.astype(complex), out_n)
    dout, _ = _apply_bs(dcols, out_n)
    prob = np.sum(np.abs(out) ** 2, axis=0)
    dprob = 2.0 * np.sum((out.conj() * dout).real, axis=0)
    return prob, dprob
