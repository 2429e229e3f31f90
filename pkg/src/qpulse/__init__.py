"""qpulse: stochastic ensemble simulator for quantized pulse propagation in
one-dimensional dispersive, absorbing Kerr media."""

__version__ = "0.1.0"

from .medium import (
    DispersionExpansion,
    MediumError,
    MediumModel,
    PhysicalConstants,
    Resonance,
    kk_residual,
    permittivity,
    refractive_index,
    taylor_expand,
    wavenumber,
)

__all__ = [
    "__version__",
    "DispersionExpansion",
    "MediumError",
    "MediumModel",
    "PhysicalConstants",
    "Resonance",
    "kk_residual",
    "permittivity",
    "refractive_index",
    "taylor_expand",
    "wavenumber",
]
