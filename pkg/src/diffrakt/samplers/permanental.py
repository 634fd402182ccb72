"""Permanental processes as Cox processes directed by ``|X|^2``.

``X`` is a stationary complex Gaussian field with covariance ``K``, built by
spectral synthesis on a periodic grid twice the size of the window so that
wrap-around correlations do not reach across the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kernels import KernelSpec, spectral_density
from .rng import make_rng
from .simple import SamplerError, require_volume
from .window import PointConfiguration, Window

__all__ = ["FieldGrid", "field_grid", "field_variance", "sample_gaussian_field", "sample_permanental"]

MASS_TOL = 1e-6
DEFAULT_SPACING = 0.01
MAX_CELLS = 2**24
PERIOD_FACTOR = 2.0


@dataclass(frozen=True)
class FieldGrid:
    """Periodic synthesis grid: ``shape`` cells of side ``spacing`` from ``lower``."""

    lower: np.ndarray
    spacing: np.ndarray
    shape: tuple[int, ...]

    @property
    def period(self) -> np.ndarray:
        return self.spacing * np.asarray(self.shape)

    def frequencies(self) -> np.ndarray:
        axes = [np.fft.fftfreq(n, d=h) for n, h in zip(self.shape, self.spacing)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


def field_grid(window: Window, grid_size: int | None = None) -> FieldGrid:
    """Grid of ``grid_size`` cells per window side (spacing about 0.01 by default)."""
    lower, sides = window.bounding_box
    if grid_size is None:
        counts = np.ceil(sides / DEFAULT_SPACING).astype(int)
    else:
        if grid_size < 1:
            raise SamplerError("grid_size must be positive")
        counts = np.full(len(sides), int(grid_size))
    spacing = sides / counts
    shape = tuple(int(math.ceil(PERIOD_FACTOR * c)) for c in counts)
    if math.prod(shape) > MAX_CELLS:
        raise SamplerError(f"field grid {shape} exceeds {MAX_CELLS} cells")
    return FieldGrid(lower, spacing, shape)


def _amplitudes(spec: KernelSpec, grid: FieldGrid) -> np.ndarray:
    freqs = grid.frequencies()
    dt = 1.0 / float(np.prod(grid.period))
    phi = np.asarray(spectral_density(spec, freqs.reshape(-1, len(grid.shape))), dtype=float)
    return (phi * dt).reshape(grid.shape)


def field_variance(spec: KernelSpec, grid: FieldGrid) -> float:
    """``E|X|^2 = sum_j phi(t_j) dt`` of the synthesized field (Parseval)."""
    return float(np.sum(_amplitudes(spec, grid)))


def sample_gaussian_field(spec: KernelSpec, grid: FieldGrid, rng: np.random.Generator) -> np.ndarray:
    """``X(x_m) = sum_j sqrt(phi(t_j) dt) xi_j e^(2 pi i t_j . x_m)`` on the grid nodes.

    Raises if the frequency grid captures less than ``1 - 1e-6`` of the
    spectral mass.
    """
    if not spec.translation_invariant:
        raise SamplerError("the field construction needs a translation-invariant kernel")
    weights = _amplitudes(spec, grid)
    captured = float(np.sum(weights))
    if captured < 1.0 - MASS_TOL:
        raise SamplerError(
            f"frequency grid captures {captured:.8f} of the spectral mass (need >= {1 - MASS_TOL}); refine the grid"
        )
    xi = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) / math.sqrt(2.0)
    return np.fft.ifftn(np.sqrt(weights) * xi) * math.prod(grid.shape)


def sample_permanental(
    spec: KernelSpec, window: Window, grid_size: int | None = None, seed: int = 0
) -> PointConfiguration:
    """Cox process with random intensity ``|X|^2``, ``X`` complex Gaussian with covariance ``K_p``.

    Intensity is held constant on each grid cell; each cell receives a
    Poisson number of uniformly placed points.

    Parameters
    ----------
    spec : KernelSpec
        Translation-invariant kernel (any ``p``; no upper bound on ``phi``).
    window : Window
    grid_size : int, optional
        Cells per window side; defaults to a spacing of about 0.01.
    seed : int
    """
    require_volume(window)
    if window.dimension != spec.dimension:
        raise SamplerError("window dimension does not match the kernel")
    grid = field_grid(window, grid_size)
    rng = make_rng(seed)
    field = sample_gaussian_field(spec, grid, rng)
    d = spec.dimension
    lower, sides = window.bounding_box
    counts_in_window = np.ceil(sides / grid.spacing - 1e-9).astype(int)
    sub = field[tuple(slice(0, int(c)) for c in counts_in_window)]
    cell_volume = float(np.prod(grid.spacing))
    counts = rng.poisson(np.abs(sub) ** 2 * cell_volume)
    idx = np.repeat(np.arange(counts.size), counts.ravel())
    corner = np.stack(np.unravel_index(idx, counts.shape), axis=-1) * grid.spacing + lower
    pts = corner + grid.spacing * rng.random((idx.size, d))
    pts = pts[window.contains(pts)]
    if d == 1:
        pts = np.sort(pts, axis=0)
    return PointConfiguration(d, window, pts, seed, f"permanental:{spec.label}")
