"""Boundary-value models: the interval Schrödinger operator and a two-interval example without UCP."""
from .interval import (
    BC_NAMES,
    IntervalProblem,
    Potential,
    bc_catalog,
    cauchy_data_frame,
    cauchy_data_plane,
    fundamental_solutions,
)
from .spectra import (
    Extension,
    SpectrumSlice,
    counting_function,
    eigenvalues,
    interlacing_check,
    morse_index,
    sharpness_demo,
    spectral_shift_direct,
    spectral_shift_predicted,
    sweep_csv,
)
from .no_ucp import no_ucp_model

__all__ = [
    "BC_NAMES", "IntervalProblem", "Potential", "bc_catalog", "cauchy_data_frame", "cauchy_data_plane",
    "fundamental_solutions", "Extension", "SpectrumSlice", "counting_function", "eigenvalues",
    "interlacing_check", "morse_index", "sharpness_demo", "spectral_shift_direct",
    "spectral_shift_predicted", "sweep_csv", "no_ucp_model",
]
