"""k-point correlation functions of determinantal and permanental processes."""

from __future__ import annotations

import numpy as np

from ..kernels import KernelSpec, kernel_matrix

__all__ = ["permanent", "kpoint_determinantal", "kpoint_permanental"]

MAX_K = 8


def permanent(m) -> complex:
    """Permanent by Ryser's inclusion-exclusion formula with Gray-code ordering."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("permanent needs a square matrix")
    if n == 0:
        return 1.0 + 0j
    row_sums = np.zeros(n, dtype=complex)
    total = 0j
    subset = 0
    for i in range(1, 2**n):
        # flip the column given by the lowest set bit of i
        j = (i & -i).bit_length() - 1
        if subset >> j & 1:
            row_sums -= m[:, j]
        else:
            row_sums += m[:, j]
        subset ^= 1 << j
        size = bin(subset).count("1")
        total += (-1) ** size * np.prod(row_sums)
    return (-1) ** n * total


def _check_points(spec: KernelSpec, points) -> np.ndarray:
    mat = kernel_matrix(spec, points)
    if mat.shape[0] > MAX_K:
        raise ValueError(f"k-point correlations are evaluated for k <= {MAX_K}")
    return mat


def kpoint_determinantal(spec: KernelSpec, points) -> float:
    """``rho_k(x_1..x_k) = det K(x_i, x_j)`` (LU with partial pivoting)."""
    mat = _check_points(spec, points)
    return float(np.linalg.det(mat).real)


def kpoint_permanental(spec: KernelSpec, points) -> float:
    """``rho_k(x_1..x_k) = per K(x_i, x_j)``."""
    mat = _check_points(spec, points)
    return float(permanent(mat).real)
