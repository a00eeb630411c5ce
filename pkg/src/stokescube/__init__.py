"""High-order cubature solver for the unsteady Stokes system in free space.

The solver represents the velocity as the sum of a heat propagator applied
to the divergence-free initial velocity and a volume heat potential of the
projected forcing; the pressure comes from a Newton-potential cubature of
the forcing divergence.  All three building blocks share one family of
Gaussian-type generating functions, so a single order parameter M yields
approximation order 2M in space for every field.
"""

from __future__ import annotations

from .grid import (
    GridField,
    SeparatedFunction3,
    SeparatedTerm,
    TimeGrid,
    UniformGrid3,
    sample,
    separated_divergence,
    time_margin,
)
from .harmonic import (
    HarmonicRule,
    grad_harmonic_basis,
    grad_pressure_grid_separated,
    harmonic_basis,
    pressure_cubature,
    pressure_grid_separated,
)
from .heat import SpaceTimeDensity, heat_cubature, heat_grid_separated
from .poisson import (
    CubatureParams,
    poisson_basis,
    poisson_cubature,
    poisson_grid_separated,
)
from .problems import PROBLEMS, BuiltinProblem
from .quadrature import DEParams, QuadRule, de_halfline_rule, mori_finite_rule
from .special_fn import MAX_ORDER, eta_2m, hermite, q_m, r_m
from .stokes import StokesProblem, StokesSolution, assemble_phi, solve

__all__ = [
    "MAX_ORDER",
    "BuiltinProblem",
    "CubatureParams",
    "DEParams",
    "GridField",
    "HarmonicRule",
    "PROBLEMS",
    "QuadRule",
    "SeparatedFunction3",
    "SeparatedTerm",
    "SpaceTimeDensity",
    "StokesProblem",
    "StokesSolution",
    "TimeGrid",
    "UniformGrid3",
    "assemble_phi",
    "de_halfline_rule",
    "eta_2m",
    "grad_harmonic_basis",
    "grad_pressure_grid_separated",
    "harmonic_basis",
    "heat_cubature",
    "heat_grid_separated",
    "hermite",
    "mori_finite_rule",
    "poisson_basis",
    "poisson_cubature",
    "poisson_grid_separated",
    "pressure_cubature",
    "pressure_grid_separated",
    "q_m",
    "r_m",
    "sample",
    "separated_divergence",
    "solve",
    "time_margin",
]

__version__ = "0.1.0"
