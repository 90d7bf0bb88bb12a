"""Spectral toolkit and empirical verification harness for the
critical-regularity nonlinear Schroedinger equation on a rectangular
(irrational) 3-torus: Littlewood-Paley calculus, adapted V^2/Y^s norms,
paradifferential linearization of the power nonlinearity, Duhamel/Picard
solvers, and a randomized inequality-checking harness."""

from . import errors
from .lattice import (DEFAULT_LAPLACE_SCALE, GridField, SpectralField,
                      TorusMetric, to_grid, to_spectral)
from .nonlinearity import PowerNonlinearity, s_critical
from .norms import SpaceTimePath, TimeGrid

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_LAPLACE_SCALE", "GridField", "PowerNonlinearity", "SpaceTimePath",
    "SpectralField", "TimeGrid", "TorusMetric", "errors", "s_critical",
    "to_grid", "to_spectral",
]
