"""Heat propagator on tensor-product Gaussian grids.

Approximates u(x, t) = (4 pi nu t)^{-3/2} int exp(-|x-y|^2/(4 nu t)) g(y) dy,
the solution of u_t = nu Lap u with initial data g, by quasi-interpolating g
with shifted Gaussian-Hermite generating functions of order 2M and evolving
each basis function in closed form.  The result is a single lattice sum

    u(x, t) ~ (pi D)^{-3/2} sum_m g(h m)
              * exp(-|x - h m|^2 / (h^2 D + 4 nu t))
              * prod_j q_m(M, (x_j - h m_j)/(h sqrt(D)), t_scaled)

with t_scaled = 4 nu t / (h^2 D).  Two evaluation paths are provided: a
direct sum over the full lattice for arbitrary points, and a separated path
for data given as sums of products of one-dimensional profiles, which
reduces each axis to a matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import corr_columns, q_kernel
from .grid import GridField, SeparatedFunction3, UniformGrid3
from .special_fn import MAX_ORDER, q_m

__all__ = ["CubatureParams", "poisson_basis", "poisson_cubature", "poisson_grid_separated"]


@dataclass(frozen=True)
class CubatureParams:
    """Approximation order and shape parameters shared by all stages.

    m is the order index (accuracy O(h^{2m}) up to the saturation floor),
    d and d0 the spatial and temporal Gaussian shape parameters, nu the
    viscosity.  Larger d shrinks the saturation floor (roughly exp(-pi^2 d))
    at the cost of slower kernel decay in lattice units.
    """

    m: int
    d: float
    nu: float
    d0: float | None = None

    def __post_init__(self):
        if not 1 <= self.m <= MAX_ORDER:
            raise ValueError(f"order index must be in 1..{MAX_ORDER}, got {self.m}")
        if self.d < 1.0:
            raise ValueError(f"shape parameter d must be >= 1, got {self.d}")
        if self.nu <= 0.0:
            raise ValueError(f"viscosity must be positive, got {self.nu}")
        if self.d0 is not None and self.d0 < 1.0:
            raise ValueError(f"shape parameter d0 must be >= 1, got {self.d0}")

    @property
    def d0_effective(self) -> float:
        return self.d if self.d0 is None else self.d0


def poisson_basis(m: int, x, s: float) -> float:
    """Heat evolution of the order-2m generating function at scaled time s.

    Returns pi^{-3/2} exp(-|x|^2/(1+s)) prod_j q_m(m, x_j, s); at s = 0 this
    reproduces the tensor-product generating function itself.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {x.shape}")
    if s < 0.0:
        raise ValueError(f"scaled time must be >= 0, got {s}")
    val = np.exp(-np.dot(x, x) / (1.0 + s)) * np.pi ** -1.5
    for j in range(3):
        val *= q_m(m, x[j], s)
    return float(val)


def poisson_cubature(g: GridField, params: CubatureParams, x, t: float) -> float:
    """Direct lattice sum for the heat propagator at one point.

    g holds the initial data sampled on its grid; x need not be
    grid-aligned.  Cost is one pass over the full lattice, so this path is
    meant for moderate grids and cross-checking; use
    poisson_grid_separated for production-size studies.
    """
    if g.ncomp != 1:
        raise ValueError("poisson_cubature expects scalar data; pass one component")
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {x.shape}")
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    grid = g.grid
    h, d = grid.h, params.d
    t_scaled = 4.0 * params.nu * t / (h * h * d)
    mjs = grid.indices()
    kappas = []
    for j in range(3):
        xi = (x[j] - h * mjs) / (h * np.sqrt(d))
        kappas.append(q_kernel(params.m, xi, t_scaled))
    val = np.einsum("i,j,k,ijk->", kappas[0], kappas[1], kappas[2], g.values)
    return float(val * (np.pi * d) ** -1.5)


def poisson_grid_separated(
    g: SeparatedFunction3,
    params: CubatureParams,
    grid: UniformGrid3,
    t: float,
    out_indices=None,
):
    """Heat propagator for separated data, evaluated on grid points.

    Each term of g contributes a product of three one-dimensional
    convolutions, so the full-grid cost is O(N^2) per axis instead of
    O(N^3) per point.  With out_indices = (i1, i2, i3) (integer grid
    indices along each axis) only the selected sub-lattice is evaluated and
    a plain array of shape (len(i1), len(i2), len(i3)) is returned;
    otherwise a GridField over the full grid.
    """
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    h, d = grid.h, params.d
    t_scaled = 4.0 * params.nu * t / (h * h * d)
    k_half = grid.half_extent
    m_idx = grid.indices()

    full = out_indices is None
    if full:
        out_axes = [m_idx, m_idx, m_idx]
    else:
        out_axes = [np.asarray(ix, dtype=int) for ix in out_indices]
        for ix in out_axes:
            if ix.ndim != 1:
                raise ValueError("out_indices must be three 1-d integer arrays")
            if ix.size and (ix.min() < -k_half or ix.max() > k_half):
                raise ValueError("out_indices outside the grid index range")

    samples = g.factor_samples(grid.coords())
    coeffs = np.array([term.coeff_at(t) for term in g.terms])
    n_terms = len(coeffs)

    # one kernel table shared by every term and axis
    deltas = np.arange(-2 * k_half, 2 * k_half + 1)
    table = q_kernel(params.m, deltas / np.sqrt(d), t_scaled)[None, :]

    convs = []
    for axis in range(3):
        b = np.column_stack([samples[s][1][axis] for s in range(n_terms)])
        conv = corr_columns(table, b[::-1], out_axes[axis], k_half)
        convs.append(conv[0])  # (n_out, n_terms)

    pref = (np.pi * d) ** -1.5
    vals = np.einsum("s,is,js,ks->ijk", coeffs * pref, convs[0], convs[1], convs[2])
    if full:
        return GridField(grid, vals)
    return vals
