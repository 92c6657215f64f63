"""k-Dicke model: mean-field, symmetry-adapted and exact ground states."""
from .errors import (ConfigError, ConvergenceError, DegenerateProjectionError, KDickeError,
                     NoDipError, OutOfDomainError, SolverError)
from .model import DickeReference, ModelParams, build_dicke_truncated, build_kdicke, build_parity
from .meanfield import AngleSet, gamma_critical, gamma_cutoff, mf_critical, mf_observables
from .variational import Parity, csas_observables, minimize_sas, sas_energy_surface, sas_state
from .exact import fidelity_curve, ground_state, locate_transition, observables

__version__ = "0.1.0"

__all__ = [
    "KDickeError", "ConfigError", "SolverError", "OutOfDomainError", "DegenerateProjectionError",
    "ConvergenceError", "NoDipError", "ModelParams", "DickeReference", "build_kdicke",
    "build_dicke_truncated", "build_parity", "AngleSet", "gamma_critical", "gamma_cutoff",
    "mf_critical", "mf_observables", "Parity", "sas_state", "sas_energy_surface",
    "csas_observables", "minimize_sas", "ground_state", "observables", "fidelity_curve",
    "locate_transition",
]
