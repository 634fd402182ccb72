"""Empirical pair correlation and scattering intensity, and comparison with closed forms."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .measures import SpectralMeasure
from .parallel import map_ordered
from .samplers.window import PointConfiguration, Shape, Window

__all__ = [
    "EstimatorError",
    "BinnedCurve",
    "CompareReport",
    "estimate_pair_correlation",
    "scattering_intensity",
    "estimate_scattering_intensity",
    "estimate_atom_mass",
    "compare",
    "curve_csv",
    "write_curve_csv",
    "read_curve_csv",
]

DEFAULT_BINS = 64


class EstimatorError(ValueError):
    pass


@dataclass(frozen=True)
class BinnedCurve:
    """Estimated curve with across-realization standard errors."""

    abscissa: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    n_realizations: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("abscissa", "values", "stderr"):
            arr = np.asarray(getattr(self, name), dtype=float).ravel()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = self.abscissa.size
        if self.values.size != n or self.stderr.size != n:
            raise ValueError("abscissa, values and stderr must have equal lengths")
        if n > 1 and np.any(np.diff(self.abscissa) <= 0):
            raise ValueError("abscissa must be strictly increasing")
        if not np.all(np.isfinite(self.stderr)) or np.any(self.stderr < 0):
            raise ValueError("stderr must be finite and non-negative")

    def __len__(self) -> int:
        return self.abscissa.size

    def restrict(self, lo: float, hi: float) -> "BinnedCurve":
        keep = (self.abscissa >= lo) & (self.abscissa <= hi)
        return BinnedCurve(
            self.abscissa[keep], self.values[keep], self.stderr[keep], self.n_realizations, dict(self.metadata)
        )


def _common_window(samples) -> Window:
    samples = list(samples)
    if not samples:
        raise EstimatorError("no samples given")
    window = samples[0].window
    for s in samples[1:]:
        if s.window != window or s.dimension != samples[0].dimension:
            raise EstimatorError("all samples must share the window and dimension")
    return window


def _mean_and_stderr(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = rows.shape[0]
    mean = rows.mean(axis=0)
    if m < 2:
        return mean, np.zeros_like(mean)
    return mean, rows.std(axis=0, ddof=1) / math.sqrt(m)


def pair_bins(r_max: float, n_bins: int) -> np.ndarray:
    """Bin edges of width ``r_max / (n_bins + 1/2)`` starting half a bin from zero."""
    width = r_max / (n_bins + 0.5)
    return 0.5 * width + width * np.arange(n_bins + 1)


def _shell_measures(edges: np.ndarray, d: int) -> np.ndarray:
    if d == 1:
        return 2.0 * np.diff(edges)
    if d == 2:
        return np.pi * np.diff(edges**2)
    return 4.0 / 3.0 * np.pi * np.diff(edges**3)


def _pair_row(config: PointConfiguration, edges: np.ndarray, shells: np.ndarray) -> np.ndarray:
    pts = config.points
    if len(pts) < 2:
        return np.zeros(len(shells))
    tree = cKDTree(pts)
    pairs = tree.query_pairs(edges[-1], output_type="ndarray")
    if pairs.size == 0:
        return np.zeros(len(shells))
    diff = pts[pairs[:, 0]] - pts[pairs[:, 1]]
    dist = np.sqrt(np.sum(diff * diff, axis=1))
    weight = 2.0 / config.window.set_covariance(diff)  # ordered pairs (x, y) and (y, x)
    sums, _ = np.histogram(dist, bins=edges, weights=weight)
    return sums / shells


def estimate_pair_correlation(
    samples, r_max: float, n_bins: int = DEFAULT_BINS, workers: int | None = None
) -> BinnedCurve:
    """Pair-correlation estimate with translation edge correction.

    For each bin, ordered pairs of distinct points are weighted by
    ``1 / |W cap (W + (x - y))|`` and divided by the shell measure. No
    division by an estimated intensity is made: at mean density one the
    result estimates the density of the reduced second moment measure
    (``1 - g`` for determinantal, ``1 + |K|^2`` for permanental processes).

    Parameters
    ----------
    samples : sequence of PointConfiguration
        Realizations sharing one window.
    r_max : float
        At most half the inradius of the window.
    n_bins : int
    workers : int, optional
        Threads for the per-realization pass; the result does not depend on it.
    """
    samples = list(samples)
    window = _common_window(samples)
    if not r_max > 0:
        raise EstimatorError("r_max must be positive")
    if r_max > 0.5 * window.inradius * (1.0 + 1e-12):
        raise EstimatorError(f"r_max={r_max:g} exceeds half the window inradius ({0.5 * window.inradius:g})")
    if n_bins < 1:
        raise EstimatorError("n_bins must be positive")
    edges = pair_bins(r_max, n_bins)
    shells = _shell_measures(edges, window.dimension)
    rows = np.asarray(map_ordered(lambda c: _pair_row(c, edges, shells), samples, workers))
    mean, err = _mean_and_stderr(rows)
    meta = {"estimator": "pair_correlation", "process": samples[0].process_label, "window": window.describe()}
    return BinnedCurve(0.5 * (edges[1:] + edges[:-1]), mean, err, len(samples), meta)


def _as_wavevectors(wavenumbers, d: int) -> np.ndarray:
    t = np.asarray(wavenumbers, dtype=float)
    if t.ndim == 0:
        t = t[None]
    if d == 1:
        return t.reshape(-1, 1)
    if t.ndim == 1:
        # scalar wavenumbers point along the first axis
        out = np.zeros((t.size, d))
        out[:, 0] = t
        return out
    if t.shape[-1] != d:
        raise EstimatorError(f"wave vectors must have {d} components")
    return t


def scattering_intensity(config: PointConfiguration, wavevectors) -> np.ndarray:
    """``|sum_x e^(-2 pi i t.x)|^2 / |W|`` for each row of ``wavevectors``.

    Computed from the cosine and sine sums, so values at ``t`` and ``-t``
    coincide exactly.
    """
    t = _as_wavevectors(wavevectors, config.dimension)
    if len(config.points) == 0:
        return np.zeros(len(t))
    theta = 2.0 * np.pi * (config.points @ t.T)
    c = np.cos(theta).sum(axis=0)
    s = np.sin(theta).sum(axis=0)
    return (c * c + s * s) / config.window.volume


def _fourier_lattice_groups(window: Window, t: np.ndarray, bandwidth: float) -> list[np.ndarray]:
    """For each requested wave vector, the frequencies ``k / L`` of the bounding box used for it."""
    _, sides = window.bounding_box
    groups = []
    for tv in t:
        if bandwidth <= 0:
            groups.append((np.round(tv * sides) / sides)[None, :])
            continue
        half = 0.5 * bandwidth
        axes = [np.arange(math.ceil((tv[i] - half) * sides[i]), math.floor((tv[i] + half) * sides[i]) + 1) / sides[i]
                for i in range(len(sides))]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(sides))
        if len(sides) > 1:
            grid = grid[np.sum((grid - tv) ** 2, axis=1) <= half * half]
        if grid.size == 0:
            grid = (np.round(tv * sides) / sides)[None, :]
        groups.append(grid)
    return groups


def estimate_scattering_intensity(
    samples, wavenumbers, bandwidth: float = 0.0, workers: int | None = None
) -> BinnedCurve:
    """Scattering intensity averaged over realizations.

    Each requested wave vector ``t`` is replaced by the frequencies ``k / L``
    of the window's bounding box within ``bandwidth / 2`` of it (the nearest
    one when ``bandwidth`` is 0). On an interval or rectangle these are the
    frequencies at which the window transform vanishes, so the central
    ``delta_0`` atom leaks no mass into the estimate; averaging over several
    of them (Daniell smoothing) reduces the periodogram variance.

    Parameters
    ----------
    samples : sequence of PointConfiguration
    wavenumbers : array_like
        Strictly increasing scalars (along the first axis in d = 2) or an
        array of wave vectors; each must satisfy ``|t| >= 2 / diam(W)``.
    bandwidth : float
        Width of the smoothing band.
    workers : int, optional
    """
    samples = list(samples)
    window = _common_window(samples)
    d = window.dimension
    t = _as_wavevectors(wavenumbers, d)
    radius = np.sqrt(np.sum(t * t, axis=1))
    cutoff = 2.0 / window.diameter
    if np.any(radius < cutoff):
        raise EstimatorError(f"wavenumbers must stay at least 2/diam(W) = {cutoff:.4g} away from 0")
    if bandwidth < 0:
        raise EstimatorError("bandwidth must be non-negative")
    groups = _fourier_lattice_groups(window, t, bandwidth)
    flat = np.concatenate(groups)
    if np.any(np.sqrt(np.sum(flat * flat, axis=1)) < 0.5 * cutoff):
        raise EstimatorError("the smoothing band reaches the zero frequency; reduce the bandwidth")
    bounds = np.cumsum([0] + [len(g) for g in groups])

    def row(config):
        vals = scattering_intensity(config, flat)
        return np.add.reduceat(vals, bounds[:-1]) / np.diff(bounds)

    rows = np.asarray(map_ordered(row, samples, workers))
    mean, err = _mean_and_stderr(rows)
    abscissa = radius if d > 1 else t[:, 0]
    meta = {
        "estimator": "scattering_intensity",
        "process": samples[0].process_label,
        "window": window.describe(),
        "bandwidth": f"{bandwidth:g}",
    }
    return BinnedCurve(abscissa, mean, err, len(samples), meta)


def estimate_atom_mass(samples, location) -> tuple[float, float]:
    """Mean and standard error of ``I(t) / |W|`` at a Bragg-peak location ``t``.

    At an atom of mass ``m`` the scattering intensity grows like ``m |W|``,
    so the ratio tends to ``m``.
    """
    samples = list(samples)
    window = _common_window(samples)
    t = _as_wavevectors(location, window.dimension)[:1]
    rows = np.array([scattering_intensity(c, t)[0] / window.volume for c in samples])
    mean, err = _mean_and_stderr(rows[:, None])
    return float(mean[0]), float(err[0])


@dataclass(frozen=True)
class CompareReport:
    rms: float
    sup_dev: float
    coverage: float
    n_bins: int


def compare(curve: BinnedCurve, analytic: SpectralMeasure, atom_exclusion: float = 1e-9) -> CompareReport:
    """Deviation of an estimated curve from the absolutely continuous density of ``analytic``.

    Bins within ``atom_exclusion`` of an atom are skipped. ``coverage`` is
    the fraction of bins whose analytic value lies within three standard
    errors of the estimate.
    """
    x = curve.abscissa
    keep = np.ones(x.size, dtype=bool)
    for atom in analytic.atoms:
        loc = float(np.sqrt(np.sum(np.square(atom.location)))) if analytic.dimension > 1 else atom.location[0]
        keep &= np.abs(x - loc) > atom_exclusion
    if not np.any(keep):
        raise EstimatorError("no bins left after excluding atoms")
    xs = x[keep]
    target = np.asarray(analytic.ac_density(np.abs(xs)), dtype=float)
    dev = curve.values[keep] - target
    covered = np.abs(dev) <= 3.0 * curve.stderr[keep]
    return CompareReport(
        rms=float(np.sqrt(np.mean(dev * dev))),
        sup_dev=float(np.max(np.abs(dev))),
        coverage=float(np.mean(covered)),
        n_bins=int(keep.sum()),
    )


def curve_csv(curve: BinnedCurve) -> str:
    buf = io.StringIO()
    meta = dict(curve.metadata)
    meta["n_realizations"] = str(curve.n_realizations)
    for key in sorted(meta):
        buf.write(f"# {key}={meta[key]}\n")
    buf.write("abscissa,value,stderr\n")
    for a, v, e in zip(curve.abscissa, curve.values, curve.stderr):
        buf.write(f"{a:.17g},{v:.17g},{e:.17g}\n")
    return buf.getvalue()


def write_curve_csv(curve: BinnedCurve, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(curve_csv(curve))


def read_curve_csv(path) -> BinnedCurve:
    meta, rows = {}, []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            elif not line.startswith("abscissa"):
                rows.append([float(v) for v in line.split(",")])
    arr = np.asarray(rows, dtype=float).reshape(-1, 3)
    n = int(meta.pop("n_realizations", "1"))
    return BinnedCurve(arr[:, 0], arr[:, 1], arr[:, 2], n, meta)
