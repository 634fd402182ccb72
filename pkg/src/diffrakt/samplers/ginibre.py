"""Ginibre process via the complex Gaussian matrix model."""

from __future__ import annotations

import math

import numpy as np
from scipy import linalg

from .rng import make_rng
from .simple import SamplerError
from .window import PointConfiguration, Shape, Window

__all__ = ["sample_ginibre", "ginibre_matrix_size", "MAX_MATRIX", "BULK_FRACTION"]

MAX_MATRIX = 4096
BULK_FRACTION = 0.7


def ginibre_matrix_size(radius: float) -> int:
    """Smallest ``N`` with ``radius <= 0.7 sqrt(N / pi)``."""
    n = max(1, math.ceil(math.pi * (radius / BULK_FRACTION) ** 2))
    if n > MAX_MATRIX:
        raise SamplerError(
            f"disk radius {radius:g} needs a {n}x{n} matrix; the cap is {MAX_MATRIX} "
            f"(radius <= {BULK_FRACTION * math.sqrt(MAX_MATRIX / math.pi):.4g})"
        )
    return n


def sample_ginibre(window: Window, seed: int, N: int | None = None, precision: str = "double") -> PointConfiguration:
    """Eigenvalues of an ``N x N`` standard complex Gaussian matrix, divided by ``sqrt(pi)``.

    The eigenvalues then have bulk density one on the disk of radius
    ``sqrt(N / pi)``; only those inside ``window`` are kept.

    Parameters
    ----------
    window : Window
        Disk centred at the origin with ``radius <= 0.7 sqrt(N / pi)``.
    seed : int
    N : int, optional
        Matrix size; by default the smallest admissible one for the radius.
    precision : {"double", "single"}
        Floating-point precision of the eigensolve. Single precision roughly
        halves the run time; eigenvalue errors stay near 1e-5.
    """
    if window.shape is not Shape.DISK:
        raise SamplerError("the Ginibre sampler needs a disk window")
    cx, cy, radius = window.params
    if cx != 0.0 or cy != 0.0:
        raise SamplerError("the Ginibre window must be centred at the origin")
    if precision not in ("double", "single"):
        raise SamplerError("precision must be 'double' or 'single'")
    label = "ginibre"
    if radius == 0.0:
        return PointConfiguration(2, window, np.empty((0, 2)), seed, label)
    if N is None:
        N = ginibre_matrix_size(radius)
    if not 1 <= N <= MAX_MATRIX:
        raise SamplerError(f"matrix size must lie in [1, {MAX_MATRIX}]")
    if radius > BULK_FRACTION * math.sqrt(N / math.pi) * (1.0 + 1e-12):
        raise SamplerError(
            f"disk radius {radius:g} is outside the bulk of a {N}x{N} matrix "
            f"(limit {BULK_FRACTION * math.sqrt(N / math.pi):.4g})"
        )
    rng = make_rng(seed)
    dtype = np.complex128 if precision == "double" else np.complex64
    g = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(2.0)
    ev = linalg.eigvals(g.astype(dtype), overwrite_a=True, check_finite=False).astype(np.complex128)
    ev /= math.sqrt(math.pi)
    ev = ev[np.abs(ev) <= radius]
    return PointConfiguration(2, window, np.column_stack([ev.real, ev.imag]), seed, label)
