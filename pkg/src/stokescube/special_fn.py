"""Hermite polynomials and the generating functions of Gaussian quasi-interpolation.

The cubature formulas in this package are built on a single family of
generating functions ``eta_2m`` (order 2M, one per space dimension) together
with two polynomial families obtained from their heat evolution:

* ``q_m(M, x, r)``  -- even polynomial part of the heat-evolved generating
  function at rescaled time ``r``,
* ``r_m(M, x, r)``  -- its derivative in ``x``.

All evaluators accept scalars or numpy arrays (broadcasting in ``x`` and
``r``) and are singularity free: the division of the odd Hermite polynomial
by ``x`` inside ``eta_2m`` is carried out on coefficients, never pointwise.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "MAX_ORDER",
    "hermite",
    "eta_2m",
    "q_m",
    "r_m",
]

# The Hermite coefficient recurrence is exact in integers far beyond this,
# but the quadrature defaults of the package are tuned for moderate orders.
MAX_ORDER = 10


def _check_order(m: int) -> int:
    if not isinstance(m, (int, np.integer)):
        raise ValueError(f"order M must be an integer, got {m!r}")
    if not 1 <= m <= MAX_ORDER:
        raise ValueError(f"order M must satisfy 1 <= M <= {MAX_ORDER}, got {m}")
    return int(m)


@lru_cache(maxsize=None)
def _hermite_coeffs(k: int) -> tuple[int, ...]:
    """Coefficients of the physicists' Hermite polynomial H_k, lowest power first.

    Computed exactly in integer arithmetic from the three-term recurrence
    H_{k+1}(x) = 2 x H_k(x) - 2 k H_{k-1}(x).
    """
    if k == 0:
        return (1,)
    prev: list[int] = [1]          # H_0
    cur: list[int] = [0, 2]        # H_1
    for n in range(1, k):
        nxt = [0] * (n + 2)
        for j, c in enumerate(cur):     # 2 x H_n
            nxt[j + 1] += 2 * c
        for j, c in enumerate(prev):    # - 2 n H_{n-1}
            nxt[j] -= 2 * n * c
        prev, cur = cur, nxt
    return tuple(cur)


def hermite(k: int, x):
    """Evaluate the physicists' Hermite polynomial H_k at ``x`` (scalar or array)."""
    if k < 0:
        raise ValueError("Hermite degree must be non-negative")
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.ones_like(x) if x.ndim else 1.0
    hkm1 = np.ones_like(x)
    hk = 2.0 * x
    for n in range(1, k):
        hkm1, hk = hk, 2.0 * x * hk - 2.0 * n * hkm1
    return hk if x.ndim else float(hk)


@lru_cache(maxsize=None)
def _eta_even_coeffs(m: int) -> tuple[float, ...]:
    """Coefficients c_j of eta_2m's polynomial factor: sum_j c_j y^j with y = x**2.

    eta_2m(x) = N_M * H_{2M-1}(x) exp(-x^2) / x  with
    N_M = (-1)^(M-1) / (2^(2M-1) sqrt(pi) (M-1)!).  H_{2M-1} is odd, so
    H_{2M-1}(x)/x is an even polynomial; we divide on coefficients.
    """
    coeffs = _hermite_coeffs(2 * m - 1)
    even = coeffs[1::2]  # coefficient of x^(2j+1) becomes coefficient of y^j
    norm = (-1) ** (m - 1) / (2.0 ** (2 * m - 1) * math.sqrt(math.pi) * math.factorial(m - 1))
    return tuple(norm * c for c in even)


def eta_2m(m: int, x):
    """Generating function of order 2M at ``x``.

    Normalised to unit integral over the line, with vanishing moments of
    every order 1 .. 2M-1.

    Parameters
    ----------
    m : int
        Approximation order index M (the approximation order is 2M).
    x : scalar or ndarray

    Returns
    -------
    Same shape as ``x``.
    """
    m = _check_order(m)
    x = np.asarray(x, dtype=float)
    y = x * x
    coeffs = _eta_even_coeffs(m)
    poly = np.full_like(y, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        poly = poly * y + c
    out = poly * np.exp(-y)
    return out if x.ndim else float(out)


@lru_cache(maxsize=None)
def _q_coeffs(m: int) -> tuple[float, ...]:
    # (-1)^k / (4^k k!) for k = 0 .. M-1
    return tuple((-1.0) ** k / (4.0 ** k * math.factorial(k)) for k in range(m))


@lru_cache(maxsize=None)
def _r_coeffs(m: int) -> tuple[float, ...]:
    # (-1)^k / (4^(k-1) (k-1)!) for k = 1 .. M-1
    return tuple((-1.0) ** k / (4.0 ** (k - 1) * math.factorial(k - 1)) for k in range(1, m))


def q_m(m: int, x, r):
    """Polynomial factor of the heat-evolved generating function.

    q_m(M, x, r) = sum_{k=0}^{M-1} (1+r)^(-(k+1/2)) (-1)^k/(4^k k!) H_{2k}(x/sqrt(1+r))

    ``x`` and ``r`` broadcast against each other; ``r`` must be non-negative.
    At r = 0 it ties back to the generating function through
    eta_2m(x) = exp(-x^2) q_m(M, x, 0) / sqrt(pi).
    """
    m = _check_order(m)
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    scalar = x.ndim == 0 and r.ndim == 0
    op = 1.0 + r
    y = x / np.sqrt(op)
    inv = 1.0 / op
    coeffs = _q_coeffs(m)
    acc = coeffs[0] * np.ones(np.broadcast(y, inv).shape)
    if m > 1:
        hprev = np.ones_like(y)   # H_0
        hcur = 2.0 * y            # H_1
        powr = np.ones_like(inv)
        for n in range(2, 2 * m - 1):
            hprev, hcur = hcur, 2.0 * y * hcur - 2.0 * (n - 1) * hprev
            if n % 2 == 0:
                powr = powr * inv
                acc = acc + coeffs[n // 2] * hcur * powr
    out = acc / np.sqrt(op)
    return float(out) if scalar else out


def r_m(m: int, x, r):
    """Derivative in ``x`` of ``q_m``; identically zero for M = 1.

    r_m(M, x, r) = sum_{k=1}^{M-1} (1+r)^(-(k+1)) (-1)^k/(4^(k-1) (k-1)!) H_{2k-1}(x/sqrt(1+r))
    """
    m = _check_order(m)
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    scalar = x.ndim == 0 and r.ndim == 0
    shape = np.broadcast(x, r).shape
    if m == 1:
        return 0.0 if scalar else np.zeros(shape)
    op = 1.0 + r
    y = x / np.sqrt(op)
    inv = 1.0 / op
    coeffs = _r_coeffs(m)
    acc = np.zeros(shape)
    hprev = np.ones_like(y)   # H_0
    hcur = 2.0 * y            # H_1
    powr = inv * inv          # (1+r)^(-(k+1)) at k = 1
    acc = acc + coeffs[0] * hcur * powr
    for n in range(2, 2 * m - 2):
        hprev, hcur = hcur, 2.0 * y * hcur - 2.0 * (n - 1) * hprev
        if n % 2 == 1:
            powr = powr * inv
            acc = acc + coeffs[n // 2] * hcur * powr
    return float(acc) if scalar else acc
