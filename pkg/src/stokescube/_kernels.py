"""Shared one-dimensional kernel evaluations for the cubature stages.

Every stage reduces to tensor products of one-dimensional kernels evaluated
at scaled offsets x = (k - m)/sqrt(D) (grid paths) or
x = (x_phys - h m)/(h sqrt(D)) (off-grid paths), at a rescaled time or
quadrature node r >= 0:

* ``q_kernel``  -- exp(-x^2/(1+r)) * q_m(M, x, r), the heat-evolved profile;
* ``t_kernel``  -- its exact x-derivative's Gaussian part,
  -2 x/(1+r) * q_kernel;
* ``r_kernel``  -- the polynomial part of the derivative,
  exp(-x^2/(1+r)) * r_m(M, x, r).

All three broadcast ``x`` against ``r``; large offsets underflow cleanly to
zero through the Gaussian factor.
"""

from __future__ import annotations

import numpy as np

from .special_fn import q_m, r_m

__all__ = ["q_kernel", "t_kernel", "r_kernel", "corr_columns", "cp_eval"]


def q_kernel(m: int, x, r):
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    return np.exp(-x * x / (1.0 + r)) * q_m(m, x, r)


def t_kernel(m: int, x, r):
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    return (-2.0 * x / (1.0 + r)) * q_kernel(m, x, r)


def r_kernel(m: int, x, r):
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    return np.exp(-x * x / (1.0 + r)) * r_m(m, x, r)


def corr_columns(table: np.ndarray, brev: np.ndarray, out_idx: np.ndarray, k_half: int) -> np.ndarray:
    """Correlate kernel tables with factor profiles at selected output indices.

    ``table`` has shape (n_rules, 4K+1) over offsets delta = -2K .. 2K;
    ``brev`` is the factor sample matrix over m = -K .. K, already reversed
    along m, with shape (2K+1, S).  Returns (n_rules, n_out, S) with entries
    sum_m table[p, (k-m)+2K] * B[m, s].
    """
    n_rules = table.shape[0]
    n_out = len(out_idx)
    s = brev.shape[1]
    out = np.empty((n_rules, n_out, s))
    n = 2 * k_half + 1
    for j, k in enumerate(np.asarray(out_idx, dtype=int)):
        # columns (k-m)+2K for ascending m form the contiguous slice
        # [k, k+2K] read backwards; reversing B instead keeps the slice
        # contiguous for the matmul.
        out[:, j, :] = table[:, k + k_half:k + k_half + n] @ brev
    return out


def cp_eval(w: np.ndarray, c1: np.ndarray, c2: np.ndarray, c3: np.ndarray,
            chunk: int = 256) -> np.ndarray:
    """sum_q w[q] * outer(c1[q], c2[q], c3[q]), accumulated in q-chunks.

    The inputs are (n_q, n_i) profile matrices; chunking keeps the
    (chunk, n1, n2) intermediate small while the heavy contraction stays a
    matrix product.
    """
    n_q = len(w)
    out = np.zeros((c1.shape[1], c2.shape[1], c3.shape[1]))
    for q0 in range(0, n_q, chunk):
        sl = slice(q0, q0 + chunk)
        tmp = np.einsum("q,qi,qj->qij", w[sl], c1[sl], c2[sl])
        out += np.tensordot(tmp, c3[sl], axes=([0], [0]))
    return out
