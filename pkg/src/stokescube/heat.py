"""Volume heat potential of space-time densities on tensor-product grids.

Approximates u(x, t) = int_0^t int Gamma(x - y, nu (t - sigma)) phi(y, sigma)
dy dsigma, where Gamma is the heat kernel, by quasi-interpolating phi with
shifted Gaussian-Hermite generating functions in all four variables.  The
spatial integral of each basis function is available in closed form (the
same evolved profile the initial-value propagator uses); the remaining
one-dimensional integral over sigma is discretized with the finite-interval
double-exponential rule.  At a grid point h*k this gives

    u(h k, t) ~ pref * sum_q w_q sum_i eta_2m((sigma_q - tau i)/(tau sqrt(D0)))
                * sum_m phi(h m, tau i)
                * prod_j q_kernel(M, (k_j - m_j)/sqrt(D), s_q)

with s_q = 4 nu (t - sigma_q)/(h^2 D) and pref = (pi^3 D^3 D0)^{-1/2} / pi^{... }
written out as pi^{-3/2} D^{-3/2} D0^{-1/2}.

Densities are handled by ``SpaceTimeDensity`` in two storage modes:

* structured -- a sum of parts, each a time coefficient (constant or a
  callable of t) times a static spatial profile that is either separated
  (three univariate factors) or a dense (n, n, n) array.  The time
  quasi-interpolation then acts on the coefficients only, so large grids
  stay affordable.
* tabulated -- dense samples of shape (n_i, n, n, n) on the time grid,
  margins included.  Costs one pass over the space-time data per
  quadrature node chunk; meant for moderate grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._kernels import cp_eval, corr_columns, q_kernel
from .grid import GridField, SeparatedFunction3, TimeGrid, UniformGrid3, time_margin
from .poisson import CubatureParams
from .quadrature import QuadRule, mori_finite_rule
from .special_fn import eta_2m

__all__ = ["SpaceTimeDensity", "km_kernel", "heat_cubature", "heat_grid_separated"]


@dataclass(frozen=True)
class _Part:
    """One structured summand coeff(t) * (separated or dense spatial profile)."""

    coeff: float | Callable[[float], float]
    factors: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
    dense: np.ndarray | None = None

    def coeff_samples(self, times: np.ndarray) -> np.ndarray:
        if callable(self.coeff):
            return np.array([float(self.coeff(t)) for t in times])
        return np.full(len(times), float(self.coeff))


@dataclass(frozen=True)
class SpaceTimeDensity:
    """Scalar density phi(x, t) bound to a space grid and a time grid.

    The time grid must include margin samples on both sides of the
    integration window (see ``time_margin``); vector densities are handled
    as one instance per component.  Construct via ``from_separated``,
    ``from_static`` or ``tabulated``, and combine structured instances
    with ``+``.
    """

    grid: UniformGrid3
    tgrid: TimeGrid
    parts: tuple[_Part, ...] = ()
    tvalues: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if (len(self.parts) > 0) == (self.tvalues is not None):
            raise ValueError("density needs either structured parts or tabulated values")
        if self.tvalues is not None:
            n = self.grid.size
            n_i = self.tgrid.i_max - self.tgrid.i_min + 1
            if self.tvalues.shape != (n_i, n, n, n):
                raise ValueError(
                    f"tabulated values shape {self.tvalues.shape} does not match "
                    f"time grid ({n_i}) and space grid ({n})")
        for part in self.parts:
            if (part.factors is None) == (part.dense is None):
                raise ValueError("each part needs exactly one of factors or dense data")
            if part.dense is not None and part.dense.shape != (self.grid.size,) * 3:
                raise ValueError("dense part shape does not match the grid")

    @classmethod
    def from_separated(cls, grid: UniformGrid3, tgrid: TimeGrid,
                       func: SeparatedFunction3) -> "SpaceTimeDensity":
        """Structured density from separated data; term coefficients carry t."""
        c = grid.coords()
        parts = []
        for coeff, vals in func.factor_samples(c):
            parts.append(_Part(coeff=coeff, factors=(vals[0], vals[1], vals[2])))
        return cls(grid=grid, tgrid=tgrid, parts=tuple(parts))

    @classmethod
    def from_static(cls, grid: UniformGrid3, tgrid: TimeGrid, values: np.ndarray,
                    coeff: float | Callable[[float], float] = 1.0) -> "SpaceTimeDensity":
        """Structured density coeff(t) * values with a dense static profile."""
        return cls(grid=grid, tgrid=tgrid,
                   parts=(_Part(coeff=coeff, dense=np.asarray(values, dtype=float)),))

    @classmethod
    def tabulated(cls, grid: UniformGrid3, tgrid: TimeGrid,
                  values: np.ndarray) -> "SpaceTimeDensity":
        """Dense space-time samples (n_times, n, n, n), margins included."""
        return cls(grid=grid, tgrid=tgrid, tvalues=np.asarray(values, dtype=float))

    def __add__(self, other: "SpaceTimeDensity") -> "SpaceTimeDensity":
        if not isinstance(other, SpaceTimeDensity):
            return NotImplemented
        if self.tvalues is not None or other.tvalues is not None:
            raise ValueError("only structured densities can be combined")
        if self.grid != other.grid or self.tgrid != other.tgrid:
            raise ValueError("densities live on different grids")
        return SpaceTimeDensity(grid=self.grid, tgrid=self.tgrid,
                                parts=self.parts + other.parts)

    def _check_window(self, params: CubatureParams, t: float):
        margin = time_margin(params.d0_effective)
        tg = self.tgrid
        if tg.i_min > -margin or tg.times()[-1] < t + margin * tg.tau - 1e-12 * tg.tau:
            raise ValueError(
                f"time grid [{tg.i_min}, {tg.i_max}] * tau does not cover the "
                f"window [0, t] with margin {margin} on both sides")


def _eta_time_matrix(m: int, sigma: np.ndarray, tgrid: TimeGrid, d0: float) -> np.ndarray:
    """eta_2m((sigma_q - tau i)/(tau sqrt(d0))) as an (n_q, n_i) matrix."""
    theta = (sigma[:, None] - tgrid.times()[None, :]) / (tgrid.tau * np.sqrt(d0))
    return eta_2m(m, theta)


def km_kernel(params: CubatureParams, h: float, tau: float, k, m, ell: int, i: int,
              rule: QuadRule | None = None) -> float:
    """Space-time influence kernel between grid nodes (m, i) and (k, ell).

    The heat potential of tabulated data is, up to the factor
    D^{-3/2} D0^{-1/2}, the sum of phi(h m, tau i) times this kernel.
    """
    if ell <= 0:
        return 0.0
    t_end = tau * ell
    if rule is None:
        rule = mori_finite_rule(t_end)
    sigma, w = rule.nodes, rule.weights
    d, d0 = params.d, params.d0_effective
    s_q = 4.0 * params.nu * (t_end - sigma) / (h * h * d)
    eta_t = eta_2m(params.m, (sigma - tau * i) / (tau * np.sqrt(d0)))
    delta = (np.asarray(k, dtype=float) - np.asarray(m, dtype=float)) / np.sqrt(d)
    spatial = np.ones_like(sigma)
    for j in range(3):
        spatial = spatial * q_kernel(params.m, delta[j], s_q)
    return float(np.pi ** -1.5 * (w @ (eta_t * spatial)))


def _out_axes(grid: UniformGrid3, out_indices):
    k_half = grid.half_extent
    if out_indices is None:
        idx = grid.indices()
        return [idx, idx, idx], True
    axes = [np.asarray(ix, dtype=int) for ix in out_indices]
    for ix in axes:
        if ix.ndim != 1:
            raise ValueError("out_indices must be three 1-d integer arrays")
        if ix.size and (ix.min() < -k_half or ix.max() > k_half):
            raise ValueError("out_indices outside the grid index range")
    return axes, False


def _gather_index(out_idx: np.ndarray, k_half: int) -> np.ndarray:
    """Column indices (n_out, 2K+1) mapping kernel tables to window matrices.

    Row j holds (out_idx[j] - m) + 2K for ascending m, so table[:, idx]
    yields per-node kernel vectors aligned with the data axis.
    """
    m = np.arange(-k_half, k_half + 1)
    return (np.asarray(out_idx, dtype=int)[:, None] - m[None, :]) + 2 * k_half


def _dense_contract(wq, table, part_dense, gathers, chunk: int = 64) -> np.ndarray:
    """sum_q wq[q] sum_m V[m] prod_a table[q, (k_a - m_a)+2K], chunked over q.

    The axis-1 contraction is one matrix product per chunk; the remaining
    axes are small once the output sub-lattice is.
    """
    n_q = len(wq)
    n = part_dense.shape[0]
    n1, n2, n3 = (g.shape[0] for g in gathers)
    out = np.zeros((n1, n2, n3))
    flat = part_dense.reshape(n, n * n)
    for q0 in range(0, n_q, chunk):
        c = min(chunk, n_q - q0)
        sl = slice(q0, q0 + c)
        w1 = table[sl][:, gathers[0]]
        w2 = table[sl][:, gathers[1]]
        w3 = table[sl][:, gathers[2]]
        c1 = (w1.reshape(c * n1, n) @ flat).reshape(c, n1, n, n)
        c2 = np.einsum("qajk,qbj->qabk", c1, w2)
        c3 = np.einsum("qabk,qck->qabc", c2, w3)
        out += np.tensordot(wq[sl], c3, axes=(0, 0))
    return out


def heat_grid_separated(
    phi: SpaceTimeDensity,
    params: CubatureParams,
    grid: UniformGrid3,
    t: float,
    out_indices=None,
    rule: QuadRule | None = None,
):
    """Heat potential of a space-time density, evaluated on grid points.

    Structured densities cost one kernel table plus a few matrix products
    per part; tabulated densities additionally stream the space-time data
    once per quadrature chunk.  Returns a GridField on the full grid or a
    plain array on the sub-lattice selected by out_indices.
    """
    if grid != phi.grid:
        raise ValueError("density is bound to a different grid")
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    out_axes, full = _out_axes(grid, out_indices)
    shape = (len(out_axes[0]), len(out_axes[1]), len(out_axes[2]))
    if t == 0.0:
        vals = np.zeros(shape)
        return GridField(grid, vals) if full else vals
    phi._check_window(params, t)
    if rule is None:
        rule = mori_finite_rule(t)
    sigma, w = rule.nodes, rule.weights
    h, d, d0, m_ord = grid.h, params.d, params.d0_effective, params.m
    k_half = grid.half_extent

    s_q = 4.0 * params.nu * (t - sigma) / (h * h * d)
    deltas = np.arange(-2 * k_half, 2 * k_half + 1) / np.sqrt(d)
    table = q_kernel(m_ord, deltas[None, :], s_q[:, None])
    eta_t = _eta_time_matrix(m_ord, sigma, phi.tgrid, d0)

    pref = np.pi ** -1.5 * d ** -1.5 / np.sqrt(d0)
    vals = np.zeros(shape)
    times = phi.tgrid.times()
    gathers = None
    if phi.tvalues is not None or any(p.dense is not None for p in phi.parts):
        gathers = [_gather_index(out_axes[a], k_half) for a in range(3)]

    for part in phi.parts:
        wq = w * (eta_t @ part.coeff_samples(times))
        if part.factors is not None:
            convs = [
                corr_columns(table, part.factors[a][::-1, None], out_axes[a], k_half)[:, :, 0]
                for a in range(3)
            ]
            vals += pref * cp_eval(wq, convs[0], convs[1], convs[2])
        else:
            vals += pref * _dense_contract(wq, table, part.dense, gathers)

    if phi.tvalues is not None:
        n_q = len(sigma)
        flat = phi.tvalues.reshape(len(times), -1)
        n = grid.size
        chunk = max(1, int(2e7) // flat.shape[1])
        for q0 in range(0, n_q, chunk):
            sl = slice(q0, min(q0 + chunk, n_q))
            phibar = (eta_t[sl] @ flat).reshape(sl.stop - q0, n, n, n)
            for qi, q in enumerate(range(q0, sl.stop)):
                vals += (pref * w[q]) * np.einsum(
                    "ijk,ai,bj,ck->abc", phibar[qi], table[q][gathers[0]],
                    table[q][gathers[1]], table[q][gathers[2]], optimize=True)

    return GridField(grid, vals) if full else vals


def heat_cubature(
    phi: SpaceTimeDensity,
    params: CubatureParams,
    x,
    t: float,
    rule: QuadRule | None = None,
) -> float:
    """Heat potential at one arbitrary point by direct lattice summation.

    x need not be grid-aligned.  Meant for moderate grids and
    cross-checking the grid path.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {x.shape}")
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    phi._check_window(params, t)
    if rule is None:
        rule = mori_finite_rule(t)
    sigma, w = rule.nodes, rule.weights
    grid = phi.grid
    h, d, d0, m_ord = grid.h, params.d, params.d0_effective, params.m

    s_q = 4.0 * params.nu * (t - sigma) / (h * h * d)
    coords = grid.coords()
    kap = [
        q_kernel(m_ord, (x[j] - coords)[None, :] / (h * np.sqrt(d)), s_q[:, None])
        for j in range(3)
    ]
    eta_t = _eta_time_matrix(m_ord, sigma, phi.tgrid, d0)
    pref = np.pi ** -1.5 * d ** -1.5 / np.sqrt(d0)
    times = phi.tgrid.times()
    total = 0.0

    for part in phi.parts:
        wq = w * (eta_t @ part.coeff_samples(times))
        if part.factors is not None:
            c1 = kap[0] @ part.factors[0]
            c2 = kap[1] @ part.factors[1]
            c3 = kap[2] @ part.factors[2]
            total += wq @ (c1 * c2 * c3)
        else:
            per_q = np.einsum("qi,qj,qk,ijk->q", kap[0], kap[1], kap[2],
                              part.dense, optimize=True)
            total += wq @ per_q

    if phi.tvalues is not None:
        n = grid.size
        flat = phi.tvalues.reshape(len(times), -1)
        n_q = len(sigma)
        chunk = max(1, int(2e7) // flat.shape[1])
        for q0 in range(0, n_q, chunk):
            sl = slice(q0, min(q0 + chunk, n_q))
            phibar = (eta_t[sl] @ flat).reshape(sl.stop - q0, n, n, n)
            per_q = np.einsum("qi,qj,qk,qijk->q", kap[0][sl], kap[1][sl],
                              kap[2][sl], phibar, optimize=True)
            total += w[sl] @ per_q

    return float(pref * total)
