"""Bound states, eigenfunctions and dipole matrix elements of a symmetric
square double quantum well with position-dependent effective mass."""

from .dipole import (DipoleBreakdown, dipole_closed_form, dipole_infinite_well_approx,
                     dipole_numeric, dipole_regions)
from .eigenstates import (BoundState, CoefficientSet, boundary_residuals, coefficients,
                          coefficients_linear, eval_psi, solve_state, solve_states)
from .params import GAAS, HBAR2_2ME, WaveNumbers, WellParams, validate, wavenumbers
from .spectrum import (Level, Parity, det_full_matrix, det_scaled,
                       det_special_equal_barrier, find_levels)

__version__ = "0.1.0"

__all__ = [
    "GAAS", "HBAR2_2ME", "BoundState", "CoefficientSet", "DipoleBreakdown", "Level", "Parity",
    "WaveNumbers", "WellParams", "boundary_residuals", "coefficients", "coefficients_linear",
    "det_full_matrix", "det_scaled", "det_special_equal_barrier", "dipole_closed_form",
    "dipole_infinite_well_approx", "dipole_numeric", "dipole_regions", "eval_psi",
    "find_levels", "solve_state", "solve_states", "validate", "wavenumbers",
]
