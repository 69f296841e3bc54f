"""Tabular datasets behind each figure (no plotting)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock_oracle
from .channels import LossModel, LossScenario
from .economical import GRID_POINTS, optimize_beta
from .entanglement import negativity
from .qfi import compare_at_fixed_energy, qfi_ecs
from .states import ProbeSpec, Sign, degree_of_entanglement, mean_photon_a


def span(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, rounded to suppress drift in the last digits."""
    n = int(round((stop - start) / step))
    return [float(np.round(start + i * step, 12)) for i in range(n + 1)]


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row length does not match the header")
        self.rows.append(list(values))


def _oracle_qfi(alpha, beta, sign, model, rate):
    return fock_oracle.oracle_qfi_for(ProbeSpec(alpha, beta, sign), model, rate)


# --------------------------------------------------------------------------
# panel layouts

FIG4_ALPHAS = (0.6, 1.0, 1.8, 3.0)
FIG5_PANELS = ((-0.2, 0.1), (0.3, 0.3), (0.5, 0.5), (0.7, 0.7))
FIG7_PANELS = ((-0.1, 0.1), (0.2, 0.3), (0.4, 0.5), (0.5, 0.7))
FIG8_ALPHAS = (1.0, 1.8, 3.0, 5.0)
FIG8_RATIOS = (-0.2, 0.0, 0.5, 0.7)
FIG9_RATIOS = (-0.1, 0.0, 0.4, 0.5)
FIG11_PANELS = ((-1.0, 0.1), (0.3, 0.1), (-1.0, 0.7), (0.3, 0.7))
FIG12_PANELS = ((-1.0, 0.1), (0.3, 0.1), (0.6, 0.7), (0.4, 0.7))


def fig2(distances=None) -> Table:
    """Degree of entanglement against |alpha - beta| (evaluated at beta = 0)."""
    distances = span(0.0, 4.0, 0.05) if distances is None else distances
    table = Table(["distance", "doe"])
    for d in distances:
        table.add(d, degree_of_entanglement(ProbeSpec(d, 0.0)))
    return table


def fig3(alphas=None, oracle=False) -> Table:
    """Lossless economical point against alpha."""
    alphas = span(0.4, 3.0, 0.05) if alphas is None else alphas
    return eco_table(alphas, [0.0], LossModel.BOTH_ARMS, oracle)


def eco_table(alphas, rates, model, oracle=False, grid_points=GRID_POINTS) -> Table:
    cols = ["alpha", "rate", "beta_opt", "eco", "boundary", "refined"]
    if oracle:
        cols += ["oracle_eco", "residual"]
    table = Table(cols)
    model = LossModel.parse(model)
    for a in alphas:
        for r in rates:
            res = optimize_beta(a, LossScenario(model, r), grid_points)
            row = [a, r, res.beta_opt, res.eco_value, int(res.boundary), int(res.refined)]
            if oracle:
                probe = ProbeSpec(a, res.beta_opt)
                ratio = fock_oracle.oracle_qfi_for(probe, model, r) / mean_photon_a(probe)
                row += [ratio, abs(ratio - res.eco_value)]
            table.add(*row)
    return table


def fig4(alphas=None, rates=None, oracle=False) -> Table:
    return eco_table(alphas or FIG4_ALPHAS, rates or span(0.0, 0.8, 0.05), LossModel.BOTH_ARMS, oracle)


def fig6(alphas=None, rates=None, oracle=False) -> Table:
    return eco_table(alphas or FIG4_ALPHAS, rates or span(0.0, 0.8, 0.05), LossModel.ONE_ARM_A, oracle)


def fig10(alphas=None, rates=None, oracle=False) -> Table:
    return eco_table(alphas or span(0.2, 3.0, 0.1), rates or span(0.0, 0.9, 0.1), LossModel.BOTH_ARMS, oracle)


def comparison_table(panels, model, sign, n_grid, oracle=False, with_gamma0=True) -> Table:
    """Energy-matched QFI of the probe, beta = gamma alpha, against |a_c>|a_c>."""
    cols = ["panel", "rate", "gamma", "n_av", "alpha", "beta", "qfi_ecs"]
    if with_gamma0:
        cols.append("qfi_ecs_gamma0")
    cols.append("qfi_coherent")
    if oracle:
        cols += ["oracle_qfi_ecs", "residual"]
    table = Table(cols)
    model = LossModel.parse(model)
    for k, (gamma, rate) in enumerate(panels):
        s = LossScenario(model, rate)
        for n in n_grid:
            cmp = compare_at_fixed_energy(n, gamma, sign, s)
            row = [chr(ord("a") + k), rate, gamma, n, cmp.alpha, cmp.beta, cmp.qfi_ecs]
            if with_gamma0:
                row.append(compare_at_fixed_energy(n, 0.0, sign, s).qfi_ecs)
            row.append(cmp.qfi_coherent)
            if oracle:
                ref = _oracle_qfi(cmp.alpha, cmp.beta, sign, model, rate)
                row += [ref, abs(ref - cmp.qfi_ecs)]
            table.add(*row)
    return table


def fig5(n_grid=None, oracle=False) -> Table:
    return comparison_table(FIG5_PANELS, LossModel.BOTH_ARMS, Sign.PLUS, n_grid or span(0.1, 4.0, 0.1), oracle)


def fig7(n_grid=None, oracle=False) -> Table:
    return comparison_table(FIG7_PANELS, LossModel.ONE_ARM_A, Sign.PLUS, n_grid or span(0.1, 4.0, 0.1), oracle)


def fig11(n_grid=None, oracle=False) -> Table:
    return comparison_table(FIG11_PANELS, LossModel.BOTH_ARMS, Sign.MINUS,
                            n_grid or span(0.55, 4.0, 0.05), oracle, with_gamma0=False)


def fig12(n_grid=None, oracle=False) -> Table:
    return comparison_table(FIG12_PANELS, LossModel.ONE_ARM_A, Sign.MINUS,
                            n_grid or span(0.55, 4.0, 0.05), oracle, with_gamma0=False)


def negativity_table(alphas, ratios, rates, model, oracle=False) -> Table:
    cols = ["alpha", "beta_ratio", "beta", "rate", "negativity"]
    if oracle:
        cols += ["oracle_negativity", "residual"]
    table = Table(cols)
    model = LossModel.parse(model)
    for a in alphas:
        for g in ratios:
            probe = ProbeSpec(a, g * a)
            for r in rates:
                value = negativity(probe, LossScenario(model, r)).value
                row = [a, g, g * a, r, value]
                if oracle:
                    ref = fock_oracle.oracle_negativity(fock_oracle.output_state(probe, model, r))
                    row += [ref, abs(ref - value)]
                table.add(*row)
    return table


def fig8(alphas=None, rates=None, oracle=False) -> Table:
    return negativity_table(alphas or FIG8_ALPHAS, FIG8_RATIOS, rates or span(0.0, 1.0, 0.02),
                            LossModel.BOTH_ARMS, oracle)


def fig9(alphas=None, rates=None, oracle=False) -> Table:
    return negativity_table(alphas or FIG8_ALPHAS, FIG9_RATIOS, rates or span(0.0, 1.0, 0.02),
                            LossModel.ONE_ARM_A, oracle)


FIGURES = {2: fig2, 3: fig3, 4: fig4, 5: fig5, 6: fig6, 7: fig7, 8: fig8, 9: fig9,
           10: fig10, 11: fig11, 12: fig12}


def qfi_table(alphas, betas, rates, model, sign, oracle=False) -> Table:
    cols = ["alpha", "beta", "rate", "qfi", "qfi_coherent"]
    if oracle:
        cols += ["oracle_qfi", "residual"]
    table = Table(cols)
    model = LossModel.parse(model)
    sign = Sign.parse(sign)
    for a in alphas:
        for b in betas:
            for r in rates:
                value = qfi_ecs(ProbeSpec(a, b, sign), LossScenario(model, r)).value
                row = [a, b, r, value, 4.0 * (1.0 - r) * a * a]
                if oracle:
                    ref = _oracle_qfi(a, b, sign, model, r)
                    row += [ref, abs(ref - value)]
                table.add(*row)
    return table
