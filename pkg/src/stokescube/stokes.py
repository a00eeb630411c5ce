"""End-to-end solver for the unsteady Stokes initial-value problem.

For velocity u and pressure P with

    u_t - nu Lap u + grad P = f,   div u = 0,   u(., 0) = g,

on free space with decaying data, the solution splits into three stages
that the other modules provide:

1. the pressure solves -Lap P = -div f, evaluated by the Newtonian
   potential stage together with its exact gradient;
2. u1 propagates the divergence-free initial velocity by the heat
   propagator;
3. u2 is the volume heat potential of phi = f - grad P.

``solve`` runs the three stages on separated problem data and evaluates
u = u1 + u2, P and grad P at the requested output times on the grid (or a
sub-lattice).  The time dependence of f must ride on the term coefficients,
so the potential stage runs once per term with static data and the time
samples enter only through scalar weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import (
    GridField,
    SeparatedFunction3,
    SeparatedTerm,
    TimeGrid,
    UniformGrid3,
    separated_divergence,
    time_margin,
)
from .harmonic import HarmonicRule, grad_pressure_grid_separated, pressure_grid_separated
from .heat import SpaceTimeDensity, heat_grid_separated, _Part
from .poisson import CubatureParams, poisson_grid_separated
from .quadrature import QuadRule, mori_finite_rule

__all__ = ["StokesProblem", "StokesSolution", "assemble_phi", "solve"]

VectorSeparated = tuple[SeparatedFunction3, SeparatedFunction3, SeparatedFunction3]


@dataclass(frozen=True)
class StokesProblem:
    """Problem data: cubature parameters, initial velocity g, forcing f.

    Both fields are 3-tuples of separated functions; either may be None
    (zero).  g must be divergence free; f needs analytic factor
    derivatives on every term so its divergence is available.
    """

    params: CubatureParams
    g: VectorSeparated | None = None
    f: VectorSeparated | None = None

    def __post_init__(self):
        if self.g is None and self.f is None:
            raise ValueError("problem needs at least one of g (initial data) or f (forcing)")
        for name, vec in (("g", self.g), ("f", self.f)):
            if vec is not None and len(vec) != 3:
                raise ValueError(f"{name} must have exactly 3 components")


@dataclass
class StokesSolution:
    """Velocity, pressure and pressure gradient at the output times.

    Arrays are indexed [time, (component,) i1, i2, i3] over the output
    sub-lattice (the full grid by default).
    """

    grid: UniformGrid3
    times: tuple[float, ...]
    out_indices: tuple[np.ndarray, np.ndarray, np.ndarray]
    u: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)
    grad_p: np.ndarray = field(repr=False)

    def at_time(self, t: float) -> dict:
        for i, ti in enumerate(self.times):
            if abs(ti - t) <= 1e-12 * max(1.0, abs(t)):
                return {"u": self.u[i], "p": self.p[i], "grad_p": self.grad_p[i]}
        raise KeyError(f"time {t} is not among the solution times {self.times}")


def assemble_phi(
    f: VectorSeparated,
    grad_p: np.ndarray,
    grid: UniformGrid3,
    tgrid: TimeGrid,
) -> tuple[SpaceTimeDensity, SpaceTimeDensity, SpaceTimeDensity]:
    """Tabulated heat-potential densities phi_j = f_j - (grad P)_j.

    grad_p holds the pressure gradient per time sample with shape
    (n_times, 3, n, n, n), margins included, matching tgrid.  The result
    is one tabulated density per velocity component; memory is the same
    shape, so this path suits moderate grids.
    """
    times = tgrid.times()
    n = grid.size
    grad_p = np.asarray(grad_p, dtype=float)
    if grad_p.shape != (len(times), 3, n, n, n):
        raise ValueError(
            f"grad_p shape {grad_p.shape} does not match (n_times, 3, n, n, n) "
            f"= ({len(times)}, 3, {n}, {n}, {n})")
    coords = grid.coords()
    out = []
    for j in range(3):
        vals = np.empty((len(times), n, n, n))
        for i, ti in enumerate(times):
            vals[i] = f[j].tabulate(coords, ti) - grad_p[i, j]
        out.append(SpaceTimeDensity.tabulated(grid, tgrid, vals))
    return out[0], out[1], out[2]


def _divergence_residual(g_fields: list[np.ndarray], h: float) -> float:
    """Max central-difference divergence over interior grid points."""
    div = np.zeros_like(g_fields[0][1:-1, 1:-1, 1:-1])
    sl = (slice(1, -1), slice(1, -1), slice(1, -1))
    for axis in range(3):
        up = [slice(1, -1)] * 3
        dn = [slice(1, -1)] * 3
        up[axis] = slice(2, None)
        dn[axis] = slice(None, -2)
        div += (g_fields[axis][tuple(up)] - g_fields[axis][tuple(dn)]) / (2.0 * h)
    return float(np.abs(div).max())


def _static_terms(func: SeparatedFunction3) -> list[SeparatedFunction3]:
    """Each term as its own separated function with unit coefficient."""
    singles = []
    for term in func.terms:
        singles.append(SeparatedFunction3(terms=(
            SeparatedTerm(coeff=1.0, factors=term.factors, dfactors=term.dfactors),)))
    return singles


def solve(
    problem: StokesProblem,
    grid: UniformGrid3,
    tgrid: TimeGrid,
    times,
    out_indices=None,
    halfline_rule: QuadRule | None = None,
    mori_kappa: float = 0.002,
    mori_n: int = 3800,
    check_divergence: bool = True,
) -> StokesSolution:
    """Run all stages and evaluate the solution at the given times.

    Output times must lie on the tgrid lattice and leave the
    quasi-interpolation margin inside it.  The quadrature controls default
    to the accuracy-first rules; coarser settings make large studies
    affordable when the measured error is far above quadrature precision.
    """
    params = problem.params
    times = [float(t) for t in np.atleast_1d(times)]
    margin = time_margin(params.d0_effective)
    for t in times:
        if t < 0.0:
            raise ValueError(f"output times must be >= 0, got {t}")
        steps = t / tgrid.tau
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError(f"output time {t} is not a multiple of tau={tgrid.tau}")
        if tgrid.i_min > -margin or tgrid.i_max < round(steps) + margin:
            raise ValueError(
                f"time grid [{tgrid.i_min}, {tgrid.i_max}] lacks the margin "
                f"{margin} around [0, {t}]")

    if out_indices is None:
        idx = grid.indices()
        out_axes = (idx, idx, idx)
    else:
        out_axes = tuple(np.asarray(ix, dtype=int) for ix in out_indices)
    shape = tuple(len(ix) for ix in out_axes)
    n_t = len(times)

    u = np.zeros((n_t, 3) + shape)
    p = np.zeros((n_t,) + shape)
    grad_p = np.zeros((n_t, 3) + shape)

    if problem.g is not None:
        if check_divergence:
            coords = grid.coords()
            fields = [problem.g[j].tabulate(coords, 0.0) for j in range(3)]
            residual = _divergence_residual(fields, grid.h)
            scale = max(np.abs(f).max() for f in fields)
            if residual > 10.0 * grid.h ** 2 * max(scale, 1e-300):
                raise ValueError(
                    f"initial velocity is not divergence free: central-difference "
                    f"residual {residual:.3e} exceeds 10 h^2 * max|g| = "
                    f"{10.0 * grid.h ** 2 * scale:.3e}")
        for it, t in enumerate(times):
            for j in range(3):
                u[it, j] += poisson_grid_separated(
                    problem.g[j], params, grid, t, out_indices=out_axes)

    if problem.f is not None:
        f_density = separated_divergence(problem.f)
        hrule = HarmonicRule(params, grid.h, rule=halfline_rule)

        # Terms whose coefficient samples agree on the time lattice are
        # interchangeable for everything computed here (output times lie on
        # the lattice too), so their static gradient fields can be merged.
        coeff_fns = [term.coeff for term in f_density.terms]
        lattice = tgrid.times()
        sample_rows = [
            np.array([float(fn(ti)) if callable(fn) else float(fn) for ti in lattice])
            for fn in coeff_fns
        ]
        groups: dict[bytes, list[int]] = {}
        for s, row in enumerate(sample_rows):
            groups.setdefault(row.tobytes(), []).append(s)

        group_members = list(groups.values())
        singles = _static_terms(f_density)
        grads = []
        for members in group_members:
            merged = SeparatedFunction3(
                terms=tuple(t for s in members for t in singles[s].terms))
            grads.append(grad_pressure_grid_separated(merged, hrule, grid, 0.0).values)

        def group_coeff(gi: int, t: float) -> float:
            fn = coeff_fns[group_members[gi][0]]
            return float(fn(t)) if callable(fn) else float(fn)

        for it, t in enumerate(times):
            p[it] = pressure_grid_separated(f_density, hrule, grid, t, out_indices=out_axes)
        off = grid.half_extent
        sel = np.ix_(out_axes[0] + off, out_axes[1] + off, out_axes[2] + off)
        for it, t in enumerate(times):
            for gi in range(len(group_members)):
                c = group_coeff(gi, t)
                for j in range(3):
                    grad_p[it, j] += c * grads[gi][j][sel]

        for j in range(3):
            parts = list(SpaceTimeDensity.from_separated(grid, tgrid, problem.f[j]).parts)
            for gi in range(len(group_members)):
                fn = coeff_fns[group_members[gi][0]]
                neg = (lambda t, f=fn: -float(f(t))) if callable(fn) else -float(fn)
                parts.append(_Part(coeff=neg, dense=grads[gi][j]))
            phi_j = SpaceTimeDensity(grid=grid, tgrid=tgrid, parts=tuple(parts))
            for it, t in enumerate(times):
                if t == 0.0:
                    continue
                rule = mori_finite_rule(t, kappa=mori_kappa, n=mori_n)
                u[it, j] += heat_grid_separated(
                    phi_j, params, grid, t, out_indices=out_axes, rule=rule)

    return StokesSolution(grid=grid, times=tuple(times), out_indices=out_axes,
                          u=u, p=p, grad_p=grad_p)
