"""Economical point: the best QFI per input photon over the second amplitude."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import LossScenario
from .qfi import qfi_ecs, qfi_values
from .states import ProbeSpec, Sign, mean_photon_a, mean_photon_number

GRID_POINTS = 401
#: beta = alpha is excluded from the search interval by this margin
EDGE_EPS = 1e-6
XTOL = 1e-6
#: relative gap to 4T below which the optimum is reported at the beta -> alpha edge
BOUNDARY_RTOL = 1e-9

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EcoResult:
    alpha: float
    beta_opt: float
    eco_value: float
    grid_trace: tuple[np.ndarray, np.ndarray]
    refined: bool
    boundary: bool
    scenario: LossScenario

    @property
    def distance(self) -> float:
        return abs(self.alpha - self.beta_opt)


def eco_ratio(p: ProbeSpec, s: LossScenario) -> float:
    """F_Q / <n_a> for a single probe."""
    n = mean_photon_a(p)
    if n <= 0.0:
        raise ValueError("F_Q / <n_a> is undefined for a zero-energy probe")
    return qfi_ecs(p, s).value / n


def ratio_curve(alpha: float, betas, s: LossScenario, sign=Sign.PLUS) -> np.ndarray:
    sign = int(Sign.parse(sign))
    betas = np.asarray(betas, dtype=float)
    return qfi_values(alpha, betas, s.rate, sign, s.model) / mean_photon_number(alpha, betas, sign)


def golden_max(f, lo: float, hi: float, xtol: float = XTOL, max_iter: int = 200):
    """Golden-section search for a maximum of a unimodal ``f`` on [lo, hi]."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > xtol and it < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        it += 1
    x = c if fc >= fd else d
    return x, max(fc, fd), b - a <= xtol


def optimize_beta(alpha: float, s: LossScenario, grid_points: int = GRID_POINTS, *,
                  sign=Sign.PLUS, eps: float = EDGE_EPS, xtol: float = XTOL) -> EcoResult:
    """Maximise F_Q / <n_a> over beta in [-alpha, alpha - eps].

    A uniform grid locates the best cell (first maximum, i.e. the smallest
    beta on ties) and golden-section search refines within the neighbouring
    cells.  When the optimum does not beat the separable limit 4T, the
    supremum sits at beta -> alpha and the result is flagged ``boundary``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    betas = np.linspace(-alpha, alpha - eps, grid_points)
    ratios = ratio_curve(alpha, betas, s, sign)
    i = int(np.argmax(ratios))
    best_beta, best = float(betas[i]), float(ratios[i])

    spread = float(ratios.max() - ratios.min())
    refined = False
    if spread > 1e-12 * max(1.0, abs(best)):
        lo, hi = float(betas[max(i - 1, 0)]), float(betas[min(i + 1, grid_points - 1)])
        x, fx, refined = golden_max(lambda b: float(ratio_curve(alpha, b, s, sign)), lo, hi, xtol)
        if fx > best:
            best_beta, best = x, fx

    separable = 4.0 * s.transmissivity
    boundary = best <= separable * (1.0 + BOUNDARY_RTOL)
    if boundary:
        best_beta, best = alpha - eps, separable
    return EcoResult(alpha, best_beta, best, (betas, ratios), refined, boundary, s)


def eco_surface(alpha_grid, r_grid, s_model, grid_points: int = GRID_POINTS, *,
                sign=Sign.PLUS) -> list[EcoResult]:
    """Row-major sweep: alpha outer, loss rate inner."""
    alphas = [float(a) for a in alpha_grid]
    rates = [float(r) for r in r_grid]
    if not alphas or not rates:
        raise ValueError("grids must be nonempty")
    if alphas != sorted(alphas) or rates != sorted(rates):
        raise ValueError("grids must be sorted ascending")
    return [
        optimize_beta(a, LossScenario(s_model, r), grid_points, sign=sign)
        for a in alphas
        for r in rates
    ]
