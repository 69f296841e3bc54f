"""Entangled coherent state probes for lossy phase estimation."""

__version__ = "0.1.0"

from .channels import LossModel, LossScenario, SpectralPair, spectral
from .economical import EcoResult, eco_ratio, eco_surface, optimize_beta
from .entanglement import NegativityResult, negativity, negativity_both_arms, negativity_one_arm
from .errors import (
    ConfigError,
    DegenerateStateError,
    EcsError,
    FormulaDomainError,
    NumericalError,
    TruncationError,
    UnreachableEnergyError,
)
from .qfi import QfiResult, cfi_pnrd, compare_at_fixed_energy, qfi_ecs, qfi_separable_coherent
from .sld_cfi import SldDescription, sld, verify_sld_identities
from .states import ProbeSpec, Sign, degree_of_entanglement, mean_photon_a, normalization
