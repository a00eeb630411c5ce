"""Trapezoidal quadrature rules with double-exponential variable transforms.

Two rules are provided:

* ``de_halfline_rule``   -- for integrals over (0, inf) whose integrands decay
  algebraically, as they arise in the one-dimensional integral representation
  of the harmonic potential of tensor-product generating functions;
* ``mori_finite_rule``   -- for integrals over (0, T) with possible endpoint
  singularities, used for the time integral of the heat kernel factor.

Both substitutions turn the trapezoidal sum into a doubly exponentially
convergent rule; weights include the full transform Jacobian and the step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEParams",
    "QuadRule",
    "de_halfline_rule",
    "mori_finite_rule",
]

# Largest admissible transformed node; anything above would overflow a double
# once the Jacobian is attached.
_R_CAP = math.log(np.finfo(float).max / 2.0)

# Nodes whose weight cannot influence a double precision result for any
# integrand bounded by the algebraic envelopes seen in this package.
_NEGLIGIBLE_WEIGHT = 1e-300


@dataclass(frozen=True)
class DEParams:
    """Parameters of the half-line double-exponential rule.

    ``n`` counts steps of the symmetric u-grid u_p = kappa*p with
    p = -n/2 .. n/2.  The inner/outer substitution strengths ``a`` and ``b``
    control how fast the transformed integrand decays.
    """

    a: float = 5.0
    b: float = 6.0
    kappa: float = 0.0009
    n: int = 2200

    def __post_init__(self) -> None:
        if self.a <= 0 or self.b <= 0:
            raise ValueError("substitution strengths a, b must be positive")
        if self.kappa <= 0:
            raise ValueError("step kappa must be positive")
        if self.n < 2:
            raise ValueError("need at least 2 quadrature steps")


@dataclass(frozen=True)
class QuadRule:
    """Nodes and weights of a quadrature rule on ``interval``.

    ``n_requested`` records the raw symmetric node count before nodes were
    dropped for overflow clamping or negligible weight; ``len(nodes)`` is the
    effective count.
    """

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]
    n_requested: int

    def __post_init__(self) -> None:
        if self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights must have equal length")

    @property
    def n_effective(self) -> int:
        return len(self.nodes)

    def integrate(self, f) -> float:
        """Apply the rule to a vectorised integrand."""
        return float(np.dot(self.weights, f(self.nodes)))


def de_halfline_rule(params: DEParams = DEParams()) -> QuadRule:
    """Trapezoidal rule for integrals over (0, inf) after the composed substitution.

    r = exp(xi), xi = a (tau + exp(tau)), tau = b (u - exp(-u)); nodes are
    r(u_p) on the symmetric u-grid and weights kappa * dr/du(u_p).  The map
    and its derivative are evaluated in closed form; u values whose image
    would overflow are clamped away and nodes of negligible weight dropped,
    so the effective node count can be smaller than requested.
    """
    half = params.n // 2
    u = params.kappa * np.arange(-half, half + 1, dtype=float)
    with np.errstate(over="ignore"):
        tau = params.b * (u - np.exp(-u))
        exp_tau = np.exp(tau)
        xi = params.a * (tau + exp_tau)
        # log of dr/du = xi + log(a b (1 + e^tau) (1 + e^-u)); the log form
        # decides finiteness before any exponential is taken.
        log_jac = xi + np.log(params.a * params.b) + np.log1p(exp_tau) + np.log1p(np.exp(-u))
    keep = np.isfinite(xi) & (xi <= _R_CAP) & np.isfinite(log_jac) & (log_jac <= _R_CAP)
    u, xi, log_jac = u[keep], xi[keep], log_jac[keep]
    r = np.exp(xi)
    w = params.kappa * np.exp(log_jac)
    # Envelope used for the negligibility cut: integrands in this package are
    # bounded near r = 0 and fall off at least like (1+r)^(-1/2).
    keep = (r > 0.0) & (w * np.minimum(1.0, 1.0 / np.sqrt(1.0 + r)) >= _NEGLIGIBLE_WEIGHT)
    return QuadRule(nodes=r[keep], weights=w[keep], interval=(0.0, math.inf),
                    n_requested=params.n + 1)


def mori_finite_rule(t_end: float, kappa: float = 0.002, n: int = 3800) -> QuadRule:
    """Trapezoidal rule for integrals over (0, t_end), tolerant of endpoint blow-up.

    Substitution sigma(x) = t_end / (1 + exp(-pi sinh x)) on the symmetric
    x-grid of step ``kappa``.  Nodes that round onto either endpoint in
    double precision are dropped so every node lies strictly inside the
    interval; their residual weight is below the roundoff of the integral.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    if kappa <= 0:
        raise ValueError("step kappa must be positive")
    if n < 2:
        raise ValueError("need at least 2 quadrature steps")
    half = n // 2
    x = kappa * np.arange(-half, half + 1, dtype=float)
    y = math.pi * np.sinh(x)
    # Stable logistic evaluated from the non-overflowing side; the weight
    # needs sig*(1-sig), formed as a product of the two stable halves rather
    # than by subtraction.
    e = np.exp(-np.abs(y))
    big = 1.0 / (1.0 + e)    # logistic at |y|
    small = e / (1.0 + e)    # logistic at -|y|
    sig = np.where(y >= 0, big, small)
    nodes = t_end * sig
    w = kappa * t_end * math.pi * np.cosh(x) * big * small
    keep = (nodes > 0.0) & (nodes < t_end)
    return QuadRule(nodes=nodes[keep], weights=w[keep], interval=(0.0, t_end),
                    n_requested=n + 1)
