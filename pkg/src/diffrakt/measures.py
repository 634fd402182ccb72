"""Measures of the form "finitely many atoms + radial absolutely continuous part".

Both the autocorrelation and the diffraction of every process in the
package have this shape: a point mass at the origin (plus Bragg atoms for
the cosine Cox process) and a density ``offset + profile(|x|)`` with
respect to Lebesgue measure.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Atom",
    "RadialProfile",
    "SpectralMeasure",
    "assemble_autocorrelation",
    "evaluate",
    "zero_profile",
    "density_csv",
    "atoms_csv",
]


@dataclass(frozen=True)
class Atom:
    location: tuple[float, ...]
    mass: float

    def __post_init__(self):
        if not self.mass >= 0:
            raise ValueError(f"atom mass must be non-negative, got {self.mass}")
        object.__setattr__(self, "location", tuple(float(c) for c in np.atleast_1d(self.location)))


@dataclass(frozen=True)
class RadialProfile:
    """A scalar function of the radius on R^d.

    ``func`` must accept numpy arrays. The optional hints help the radial
    Fourier transform: ``support`` (the profile vanishes beyond it),
    ``cutoff`` (beyond it the profile is negligible), ``scale`` (largest
    quadrature chunk) and ``tail(U)`` (an estimate of the radial mass
    ``int_U^inf r^(d-1) g(r) dr`` for slowly decaying profiles).
    """

    dimension: int
    func: Callable[[np.ndarray], np.ndarray]
    label: str = ""
    support: float | None = None
    cutoff: float | None = None
    scale: float | None = None
    tail: Callable[[float], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dimension}")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.asarray(self.func(r), dtype=float)
        return float(out) if out.ndim == 0 else out

    def scaled(self, factor: float, amplitude: float = 1.0, label: str | None = None) -> "RadialProfile":
        """Profile ``r -> amplitude * g(r / factor)``."""
        return RadialProfile(
            dimension=self.dimension,
            func=lambda r, f=self.func: amplitude * np.asarray(f(np.asarray(r) / factor)),
            label=label or self.label,
            support=None if self.support is None else self.support * factor,
            cutoff=None if self.cutoff is None else self.cutoff * factor,
            scale=None if self.scale is None else self.scale * factor,
            tail=None
            if self.tail is None
            else (lambda u, t=self.tail: amplitude * factor**self.dimension * t(u / factor)),
        )

    def negated(self, label: str | None = None) -> "RadialProfile":
        return RadialProfile(
            dimension=self.dimension,
            func=lambda r, f=self.func: -np.asarray(f(r)),
            label=label or f"-{self.label}",
            support=self.support,
            cutoff=self.cutoff,
            scale=self.scale,
            tail=None if self.tail is None else (lambda u, t=self.tail: -t(u)),
        )


def zero_profile(dimension: int) -> RadialProfile:
    return RadialProfile(dimension, lambda r: np.zeros_like(np.asarray(r, dtype=float)), "zero", support=0.0)


@dataclass(frozen=True)
class SpectralMeasure:
    """``sum(atoms) + (density_offset + density(|t|)) * Lebesgue^d``."""

    dimension: int
    atoms: tuple[Atom, ...]
    density: RadialProfile
    density_offset: float = 0.0
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if self.density.dimension != self.dimension:
            raise ValueError("density profile dimension does not match the measure")
        locations = [a.location for a in self.atoms]
        if len(set(locations)) != len(locations):
            raise ValueError("atoms must have distinct locations")
        for a in self.atoms:
            if len(a.location) != self.dimension:
                raise ValueError(f"atom at {a.location} is not in R^{self.dimension}")

    def ac_density(self, r):
        """Absolutely continuous density at radius ``r`` (atoms excluded)."""
        return self.density_offset + self.density(r)

    def check_positive(self, grid: Sequence[float], tol: float = 1e-12) -> bool:
        return bool(np.all(np.asarray(self.ac_density(np.asarray(grid, dtype=float))) >= -tol))


def assemble_autocorrelation(density_1: float, g: RadialProfile, label: str = "") -> SpectralMeasure:
    """``rho * delta_0 + (rho^2 + g) * Lebesgue``.

    The sign of ``g`` is the caller's: determinantal processes pass ``-|K|^2``.
    """
    if not density_1 > 0:
        raise ValueError("mean density must be positive")
    origin = (0.0,) * g.dimension
    return SpectralMeasure(
        dimension=g.dimension,
        atoms=(Atom(origin, density_1),),
        density=g,
        density_offset=density_1**2,
        label=label or g.label,
    )


def evaluate(m: SpectralMeasure, test_radius_grid: Sequence[float]) -> list[float]:
    """Absolutely continuous density of ``m`` on a radius grid; atoms are not included."""
    grid = np.asarray(test_radius_grid, dtype=float)
    if np.any(grid < 0):
        raise ValueError("radius grid must be non-negative")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("radius grid must be strictly increasing")
    return [float(v) for v in np.atleast_1d(m.ac_density(grid))]


def density_csv(m: SpectralMeasure, grid: Sequence[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "density"])
    for r, v in zip(grid, evaluate(m, grid)):
        w.writerow([repr(float(r)), repr(float(v))])
    return buf.getvalue()


def atoms_csv(m: SpectralMeasure) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["location", "mass"])
    for a in m.atoms:
        w.writerow([" ".join(repr(c) for c in a.location), repr(a.mass)])
    return buf.getvalue()
