"""Invariant suite: closed forms checked against independent computations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic
from .analytic import gaf
from .kernels import (
    Family,
    KernelSpec,
    g_hat_profile,
    g_profile,
    integral_of_g,
    is_self_reproducing,
    kernel_function,
)
from .measures import RadialProfile
from .numerics import QuadratureSpec, bessel_j, radial_fourier, riemann_zeta

__all__ = ["InvariantResult", "run_invariants", "MUTATIONS"]

CATALOG = [
    KernelSpec("sine"),
    KernelSpec("sine", thinning_p=0.5),
    KernelSpec("ball", dimension=1),
    KernelSpec("ball", dimension=2),
    KernelSpec("ball", dimension=3),
    KernelSpec("gauss", dimension=1),
    KernelSpec("gauss", dimension=2),
    KernelSpec("exp", alpha=0.5),
    KernelSpec("exp", alpha=0.25),
    KernelSpec("cpA"),
    KernelSpec("cpB"),
    KernelSpec("ginibre"),
]
TIGHT = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=400)


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    measured: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.measured}"


def _mutated_h(s):
    # fault injection: the zeta(3) coefficient of h is perturbed by one percent
    s = np.asarray(s, dtype=float)
    return gaf.gaf_h(s) + 0.01 * (np.pi * s * s) ** 2 * riemann_zeta(3.0)


MUTATIONS: dict[str, Callable] = {"gaf_h": _mutated_h}


def _check(name: str, value: float, limit: float, fmt: str = ".3g") -> InvariantResult:
    return InvariantResult(name, bool(value <= limit), f"{value:{fmt}} (limit {limit:g})")


def _zeta_pin():
    return _check("riemann_zeta(3) pinned to 1.2020569032", abs(riemann_zeta(3.0) - 1.2020569032), 1e-9)


def _bessel_zero():
    return _check("J0 at its first zero", abs(bessel_j(0, 2.404825557695773)), 1e-9)


def _gaf_transform(h):
    grid = np.linspace(0.0, 2.0, 21)
    g = RadialProfile(2, gaf.gaf_g, "gaf_g", cutoff=6.0, scale=0.25)
    dev = max(abs(float(h(s)) - radial_fourier(g, s)) for s in grid)
    return _check("gaf transform consistency |h - F[g]|", dev, 1e-6)


def _gaf_moments():
    worst = 0.0
    for alpha in (0.0, 0.5, 1.0, 2.0, 3.0):
        cutoff = gaf.gaf_tail_cutoff(alpha, 1e-13)
        prof = RadialProfile(1, lambda u, a=alpha: np.asarray(u) ** a * gaf.gaf_phi(u), "u^a phi",
                             cutoff=cutoff, scale=0.5)
        # radial_fourier in d = 1 at s = 0 is 2 * int_0^inf
        value = 0.5 * radial_fourier(prof, 0.0, TIGHT)
        worst = max(worst, abs(value - gaf.gaf_I(alpha)))
    return _check("gaf moments int u^a phi = a(1-a)Gamma(a+1)zeta(a+1)", worst, 1e-8)


def _gaf_two_point():
    worst = 0.0
    for r in (0.3, 0.7, 1.2, 2.0):
        worst = max(worst, abs(gaf.gaf_kpoint([0.0, r]) - (1.0 - gaf.gaf_g(r))))
    return _check("gaf 2-point function = 1 - g", worst, 1e-8)


def _gaf_overshoot(h):
    s = np.linspace(0.5, 1.5, 201)
    peak = float(np.max(1.0 - h(s)))
    return InvariantResult("gaf diffraction density exceeds 1 near s = 1", peak > 1.0, f"max = {peak:.6f}")


def _integrability():
    worst = max(integral_of_g(k) for k in CATALOG)
    return _check("int g <= 1 over the catalog", worst - 1.0, 1e-8)


def _density_bounds():
    t = np.linspace(0.0, 6.0, 601)
    lo, hi = np.inf, -np.inf
    perm_lo = np.inf
    for k in CATALOG:
        gh = g_hat_profile(k)(t)
        lo = min(lo, float(np.min(1.0 - gh)))
        hi = max(hi, float(np.max(1.0 - gh)))
        perm_lo = min(perm_lo, float(np.min(1.0 + gh)))
    ok = lo >= -1e-12 and hi <= 1.0 + 1e-12 and perm_lo >= 1.0 - 1e-12
    return InvariantResult(
        "0 <= determinantal density <= 1, permanental density >= 1",
        ok,
        f"det in [{lo:.3g}, {hi:.3g}], perm >= {perm_lo:.3g}",
    )


def _self_reproducing():
    expected = {"sine": True, "ball": True, "gauss": False, "exp": False}
    got = {
        "sine": bool(is_self_reproducing(KernelSpec("sine"))),
        "ball": bool(is_self_reproducing(KernelSpec("ball", dimension=2))),
        "gauss": bool(is_self_reproducing(KernelSpec("gauss"))),
        "exp": bool(is_self_reproducing(KernelSpec("exp"))),
    }
    return InvariantResult("self-reproducing classification", got == expected, str(got))


def _inversion():
    worst = 0.0
    cases = [
        (KernelSpec("sine"), [0.3, 0.7, 1.3, 2.2], [0.2, 0.5, 0.8, 1.5]),
        (KernelSpec("ball", dimension=2), [0.3, 0.9, 1.7], [0.2, 0.6, 0.9]),
        (KernelSpec("gauss", dimension=2), [0.2, 0.6, 1.1], [0.3, 0.8, 1.4]),
        (KernelSpec("gauss", dimension=1, thinning_p=0.5), [0.2, 0.6, 1.1], [0.3, 0.8, 1.4]),
        (KernelSpec("ginibre"), [0.2, 0.6, 1.1], [0.3, 0.8, 1.4]),
    ]
    for spec, radii, freqs in cases:
        g, gh = g_profile(spec), g_hat_profile(spec)
        for r in radii:
            worst = max(worst, abs(radial_fourier(gh, r) - float(g(r))))
        for s in freqs:
            worst = max(worst, abs(radial_fourier(g, s) - float(gh(s))))
    return _check("Fourier round trips g <-> g^", worst, 1e-6)


def _thinning():
    t = np.linspace(0.0, 5.0, 501)
    worst = 0.0
    base = g_hat_profile(KernelSpec("sine"))
    for p in (0.25, 0.5):
        _, gamma_hat = analytic.diffraction_pair(analytic.determinantal("sine", thinning_p=p))
        worst = max(worst, float(np.max(np.abs(gamma_hat.ac_density(t) - (1.0 - p * base(t * p))))))
    return _check("thinning law 1 - p g^(t p)", worst, 1e-10)


def _ginibre_duality():
    gamma, gamma_hat = analytic.diffraction_pair(analytic.determinantal("ginibre"))
    r = np.linspace(0.0, 4.0, 401)
    dev = float(np.max(np.abs(gamma.ac_density(r) - gamma_hat.ac_density(r))))
    return _check("Ginibre autocorrelation and diffraction densities coincide", dev, 1e-12)


def _non_uniqueness():
    x = np.linspace(-5.0, 5.0, 1000)[:, None]
    ka, kb = kernel_function(KernelSpec("cpA")), kernel_function(KernelSpec("cpB"))
    dev = float(np.max(np.abs(np.abs(ka(x)) ** 2 - np.abs(kb(x)) ** 2)))
    pts = [0.0, 1.0 / 3.0, 0.5]
    gap = abs(analytic.kpoint_determinantal(KernelSpec("cpA"), pts) - analytic.kpoint_determinantal(KernelSpec("cpB"), pts))
    ok = dev <= 1e-12 and gap > 1e-6
    return InvariantResult("cpA/cpB share |K|^2 but not rho_3", ok, f"||K_A|^2 - |K_B|^2| = {dev:.2g}, rho_3 gap = {gap:.6g}")


def _sampler_determinism():
    from .samplers import Window, sample_dpp_spectral, sample_gaf_zeros

    a = sample_dpp_spectral(KernelSpec("sine"), Window.interval(0.0, 20.0), seed=7).points
    b = sample_dpp_spectral(KernelSpec("sine"), Window.interval(0.0, 20.0), seed=7).points
    c = sample_gaf_zeros(Window.disk(2.0), 64, 7).points
    d = sample_gaf_zeros(Window.disk(2.0), 64, 7).points
    ok = np.array_equal(a, b) and np.array_equal(c, d)
    return InvariantResult("samplers are deterministic in the seed", ok, f"{len(a)} + {len(c)} points compared")


def run_invariants(mutate: str | None = None) -> list[InvariantResult]:
    """Run every invariant; ``mutate`` names a deliberate fault to inject."""
    if mutate is not None and mutate not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutate!r}; choose from {sorted(MUTATIONS)}")
    h = MUTATIONS[mutate] if mutate else gaf.gaf_h
    checks = [
        _zeta_pin,
        _bessel_zero,
        lambda: _gaf_transform(h),
        _gaf_moments,
        _gaf_two_point,
        lambda: _gaf_overshoot(h),
        _integrability,
        _density_bounds,
        _self_reproducing,
        _inversion,
        _thinning,
        _ginibre_duality,
        _non_uniqueness,
        _sampler_determinism,
    ]
    return [check() for check in checks]
