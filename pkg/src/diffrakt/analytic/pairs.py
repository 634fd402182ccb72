"""Closed-form autocorrelation / diffraction pairs of the process families."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..kernels import Family, KernelSpec, g_hat_profile, g_profile, validate_dpp
from ..measures import Atom, RadialProfile, SpectralMeasure, assemble_autocorrelation, zero_profile
from .gaf import gaf_g, gaf_h

__all__ = ["ProcessKind", "ProcessSpec", "InvalidProcessError", "diffraction_pair"]


class InvalidProcessError(ValueError):
    pass


class ProcessKind(str, enum.Enum):
    DETERMINANTAL = "determinantal"
    PERMANENTAL = "permanental"
    COX_COSINE = "cox_cosine"
    GAF = "gaf"
    POISSON = "poisson"


@dataclass(frozen=True)
class ProcessSpec:
    kind: ProcessKind
    kernel: KernelSpec | None = None
    dimension: int = 1

    def __post_init__(self):
        kind = ProcessKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (ProcessKind.DETERMINANTAL, ProcessKind.PERMANENTAL):
            if self.kernel is None:
                raise InvalidProcessError(f"{kind.value} process needs a kernel")
            object.__setattr__(self, "dimension", self.kernel.dimension)
            if kind is ProcessKind.DETERMINANTAL:
                report = validate_dpp(self.kernel)
                if not report.passed:
                    raise InvalidProcessError(
                        f"{self.kernel.label} does not define a determinantal process: {report.message}"
                    )
        elif kind is ProcessKind.GAF:
            object.__setattr__(self, "dimension", 2)
        elif kind is ProcessKind.COX_COSINE:
            object.__setattr__(self, "dimension", 1)
        if self.dimension not in (1, 2, 3):
            raise InvalidProcessError("dimension must be 1, 2 or 3")

    @property
    def label(self) -> str:
        if self.kernel is not None:
            return f"{self.kind.value}:{self.kernel.label}"
        return self.kind.value


def _gaf_profiles() -> tuple[RadialProfile, RadialProfile]:
    g = RadialProfile(2, gaf_g, "gaf_g", cutoff=6.0, scale=0.25)
    h = RadialProfile(2, gaf_h, "gaf_h", cutoff=6.0, scale=0.25)
    return g, h


def diffraction_pair(spec: ProcessSpec) -> tuple[SpectralMeasure, SpectralMeasure]:
    """Autocorrelation ``gamma`` and diffraction ``gamma^`` at mean density one."""
    d = spec.dimension
    origin = (0.0,) * d
    kind = spec.kind
    if kind in (ProcessKind.DETERMINANTAL, ProcessKind.PERMANENTAL):
        g, g_hat = g_profile(spec.kernel), g_hat_profile(spec.kernel)
        if kind is ProcessKind.DETERMINANTAL:
            g, g_hat = g.negated(), g_hat.negated()
        gamma = assemble_autocorrelation(1.0, g, label=f"gamma[{spec.label}]")
        gamma_hat = SpectralMeasure(d, (Atom(origin, 1.0),), g_hat, 1.0, label=f"gamma^[{spec.label}]")
        return gamma, gamma_hat
    if kind is ProcessKind.GAF:
        g, h = _gaf_profiles()
        gamma = assemble_autocorrelation(1.0, g.negated(), label="gamma[gaf]")
        gamma_hat = SpectralMeasure(2, (Atom(origin, 1.0),), h.negated(), 1.0, label="gamma^[gaf]")
        return gamma, gamma_hat
    if kind is ProcessKind.COX_COSINE:
        # reduced covariance of 1 + cos(2 pi (t + U)) is cos(2 pi t) / 2
        cov = RadialProfile(1, lambda r: 0.5 * np.cos(2.0 * np.pi * np.asarray(r)), "cos/2")
        gamma = assemble_autocorrelation(1.0, cov, label="gamma[cox_cosine]")
        atoms = (Atom((0.0,), 1.0), Atom((-1.0,), 0.25), Atom((1.0,), 0.25))
        gamma_hat = SpectralMeasure(1, atoms, zero_profile(1), 1.0, label="gamma^[cox_cosine]")
        return gamma, gamma_hat
    zero = zero_profile(d)
    gamma = assemble_autocorrelation(1.0, zero, label="gamma[poisson]")
    gamma_hat = SpectralMeasure(d, (Atom(origin, 1.0),), zero, 1.0, label="gamma^[poisson]")
    return gamma, gamma_hat


def determinantal(family: str | Family, **kwargs) -> ProcessSpec:
    return ProcessSpec(ProcessKind.DETERMINANTAL, KernelSpec(family, **kwargs))


def permanental(family: str | Family, **kwargs) -> ProcessSpec:
    return ProcessSpec(ProcessKind.PERMANENTAL, KernelSpec(family, **kwargs))
