"""Catalog of determinantal/permanental kernels and their spectral densities.

Translation-invariant entries are given as ``K = phi^`` for a probability
density ``phi``; thinning by ``p`` maps ``K(x) -> K(x / p^(1/d))`` and
``phi(t) -> p phi(t p^(1/d))``. The Ginibre kernel is the one entry that is
not translation invariant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special, stats

from .measures import RadialProfile
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, ball_volume, radial_fourier

__all__ = [
    "Family",
    "KernelSpec",
    "ValidationReport",
    "UnsupportedFamilyError",
    "parse_family",
    "kernel_value",
    "kernel_function",
    "kernel_matrix",
    "spectral_density",
    "validate_dpp",
    "g_profile",
    "g_hat_profile",
    "integral_of_g",
    "is_self_reproducing",
    "compound_poisson_pmf",
]


class UnsupportedFamilyError(ValueError):
    pass


class Family(str, enum.Enum):
    SINE = "sine"
    BALL = "ball"
    GAUSS = "gauss"
    EXP = "exp"
    CPA = "cpA"
    CPB = "cpB"
    GINIBRE = "ginibre"


_ONE_DIMENSIONAL = {Family.SINE, Family.EXP, Family.CPA, Family.CPB}


def parse_family(name: str) -> Family:
    for fam in Family:
        if fam.value.lower() == str(name).lower():
            return fam
    raise ValueError(f"unknown kernel family {name!r}; expected one of {[f.value for f in Family]}")


@dataclass(frozen=True)
class KernelSpec:
    """A catalog kernel with its thinning parameter.

    ``alpha`` is the decay length of the exponential family. The dimension
    defaults to the family's natural one (1 for sine/exp/cpA/cpB, 2 for
    Ginibre) and must be given for ball/gauss when it is not 1.
    """

    family: Family
    thinning_p: float = 1.0
    dimension: int = 1
    alpha: float = 0.5

    def __post_init__(self):
        fam = parse_family(self.family) if not isinstance(self.family, Family) else self.family
        object.__setattr__(self, "family", fam)
        if fam is Family.GINIBRE and self.dimension == 1:
            object.__setattr__(self, "dimension", 2)
        if not self.thinning_p > 0:
            raise ValueError("thinning parameter p must be positive")
        if fam in _ONE_DIMENSIONAL and self.dimension != 1:
            raise ValueError(f"{fam.value} kernel lives on the line (d = 1)")
        if fam is Family.GINIBRE and self.dimension != 2:
            raise ValueError("the Ginibre kernel lives on the plane (d = 2)")
        if self.dimension not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2 or 3")
        if fam is Family.EXP and not self.alpha > 0:
            raise ValueError("exponential kernel needs alpha > 0")

    @property
    def translation_invariant(self) -> bool:
        return self.family is not Family.GINIBRE

    @property
    def scale(self) -> float:
        """Spatial dilation ``p^(1/d)`` applied by thinning."""
        return self.thinning_p ** (1.0 / self.dimension)

    @property
    def label(self) -> str:
        extra = f",alpha={self.alpha:g}" if self.family is Family.EXP else ""
        return f"{self.family.value}(d={self.dimension},p={self.thinning_p:g}{extra})"


# --- base (p = 1) kernels as functions of the difference vector norm -------------


def _sinc(x):
    """sin(pi x) / (pi x) with a series branch near the removable singularity."""
    x = np.asarray(x, dtype=float)
    y = np.pi * x
    small = np.abs(y) < 1e-4
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(small, 1.0 - y * y / 6.0 + y**4 / 120.0, np.sin(y) / np.where(small, 1.0, y))
    return out


def _ball_radius(d: int) -> float:
    """Radius of the volume-one ball in R^d."""
    return ball_volume(d) ** (-1.0 / d)


def _ball_kernel(r, d: int):
    """Gamma(nu+1) (2/z)^nu J_nu(z), nu = d/2, z = 2 pi r / alpha^(1/d); equals 1 at r = 0."""
    nu = d / 2.0
    z = 2.0 * np.pi * _ball_radius(d) * np.asarray(r, dtype=float)
    small = z < 1e-3
    zs = np.where(small, 1.0, z)
    big = math.gamma(nu + 1.0) * (2.0 / zs) ** nu * special.jv(nu, zs)
    series = 1.0 - z * z / (4.0 * (nu + 1.0)) + z**4 / (32.0 * (nu + 1.0) * (nu + 2.0))
    return np.where(small, series, big)


def _base_kernel(spec: KernelSpec, u):
    """Unthinned kernel as a function of the (signed, for d = 1) difference ``u``.

    ``u`` is an array of shape (..., d); returns complex values.
    """
    u = np.asarray(u, dtype=float)
    r = np.sqrt(np.sum(u * u, axis=-1))
    fam = spec.family
    if fam is Family.SINE:
        return _sinc(r).astype(complex)
    if fam is Family.BALL:
        return _ball_kernel(r, spec.dimension).astype(complex)
    if fam is Family.GAUSS:
        return np.exp(-np.pi * r * r).astype(complex)
    if fam is Family.EXP:
        return np.exp(-r / spec.alpha).astype(complex)
    x = u[..., 0]
    if fam is Family.CPA:
        return np.exp(np.exp(-2j * np.pi * x) - 1.0) * _sinc(x)
    if fam is Family.CPB:
        return (np.exp(np.cos(2.0 * np.pi * x) - 1.0) * _sinc(x)).astype(complex)
    raise UnsupportedFamilyError(f"{fam.value} has no translation-invariant kernel function")


def _as_points(x, d: int) -> np.ndarray:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        x = np.stack([x.real, x.imag], axis=-1)
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != d:
        raise ValueError(f"expected points in R^{d}, got shape {x.shape}")
    return x


def _ginibre(z, w, p: float):
    z = (z[..., 0] + 1j * z[..., 1]) / math.sqrt(p)
    w = (w[..., 0] + 1j * w[..., 1]) / math.sqrt(p)
    return np.exp(-0.5 * np.pi * np.abs(z) ** 2 - 0.5 * np.pi * np.abs(w) ** 2 + np.pi * z * np.conj(w))


def kernel_value(spec: KernelSpec, x, y) -> complex:
    """``K_p(x, y)``; translation-invariant families evaluate ``K_p(x - y)``.

    Points in R^2 may be given as pairs or as complex numbers.
    """
    d = spec.dimension
    xp, yp = _as_points(x, d), _as_points(y, d)
    if spec.family is Family.GINIBRE:
        out = _ginibre(xp, yp, spec.thinning_p)
    else:
        out = _base_kernel(spec, (xp - yp) / spec.scale)
    return complex(out) if np.ndim(out) == 0 else out


def kernel_function(spec: KernelSpec):
    """Callable ``u -> K_p(u)`` on difference vectors of shape (..., d)."""
    if not spec.translation_invariant:
        raise UnsupportedFamilyError("the Ginibre kernel is not translation invariant")
    return lambda u: _base_kernel(spec, _as_points(u, spec.dimension) / spec.scale)


def kernel_matrix(spec: KernelSpec, points) -> np.ndarray:
    """Matrix ``K(x_i, x_j)`` for a list of points."""
    pts = _as_points(points, spec.dimension)
    if pts.ndim == 1:
        pts = pts[None, :]
    return np.asarray(kernel_value(spec, pts[:, None, :], pts[None, :, :]), dtype=complex).reshape(
        len(pts), len(pts)
    )


# --- spectral densities -----------------------------------------------------------


@lru_cache(maxsize=None)
def compound_poisson_pmf(which: str, mass_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Support and weights of the distributions behind the cpA/cpB kernels.

    ``"A"``: Poisson(1). ``"B"``: compound Poisson with rate 1 and jumps +-1
    with probability 1/2 each, obtained by convolving the jump law with
    itself and mixing over the Poisson number of jumps. Both are truncated
    once the accumulated mass reaches ``1 - mass_tol``.
    """
    poisson = stats.poisson(1.0)
    m_max = int(poisson.ppf(1.0 - mass_tol / 10.0)) + 2
    if which == "A":
        support = np.arange(0, m_max + 1)
        weights = poisson.pmf(support)
    elif which == "B":
        jump = np.array([0.5, 0.0, 0.5])  # on {-1, 0, +1}
        weights = np.zeros(2 * m_max + 1)
        power = np.array([1.0])
        for m in range(m_max + 1):
            offset = m_max - (len(power) - 1) // 2
            weights[offset : offset + len(power)] += poisson.pmf(m) * power
            power = np.convolve(power, jump)
        support = np.arange(-m_max, m_max + 1)
    else:
        raise ValueError(which)
    keep = weights > 0
    support, weights = support[keep], weights[keep]
    order = np.argsort(-weights)
    cumulative = np.cumsum(weights[order])
    n_keep = int(np.searchsorted(cumulative, 1.0 - mass_tol)) + 1
    chosen = np.sort(order[:n_keep])
    return support[chosen].astype(float), weights[chosen]


def _indicator_mixture(which: str, t):
    """Density of Q * U[-1/2, 1/2] at ``t`` (Q supported on the integers)."""
    support, weights = compound_poisson_pmf(which)
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for n, q in zip(support, weights):
        out = out + q * (np.abs(t - n) <= 0.5)
    return out


def _base_spectral(spec: KernelSpec, t):
    t = np.asarray(t, dtype=float)
    s = np.sqrt(np.sum(t * t, axis=-1))
    fam = spec.family
    if fam is Family.SINE:
        return (s <= 0.5).astype(float)
    if fam is Family.BALL:
        return (s <= _ball_radius(spec.dimension)).astype(float)
    if fam is Family.GAUSS:
        return np.exp(-np.pi * s * s)
    if fam is Family.EXP:
        a = spec.alpha
        return 2.0 * a / (1.0 + (2.0 * np.pi * a * s) ** 2)
    if fam is Family.CPA:
        return _indicator_mixture("A", t[..., 0])
    if fam is Family.CPB:
        return _indicator_mixture("B", t[..., 0])
    raise UnsupportedFamilyError(
        "the Ginibre kernel is not translation invariant and has no spectral density"
    )


def spectral_density(spec: KernelSpec, t):
    """``phi_p(t) = p phi(t p^(1/d))``."""
    tp = _as_points(t, spec.dimension)
    out = spec.thinning_p * _base_spectral(spec, tp * spec.scale)
    return float(out) if np.ndim(out) == 0 else out


def _spectral_sup_grid(spec: KernelSpec, n: int = 10_000) -> np.ndarray:
    """Radii at which the essential range of phi_p is probed."""
    if spec.family in (Family.CPA, Family.CPB):
        support, _ = compound_poisson_pmf("A" if spec.family is Family.CPA else "B")
        lo, hi = support.min() - 1.0, support.max() + 1.0
        return np.linspace(lo, hi, n) / spec.scale
    reach = {
        Family.SINE: 1.0,
        Family.BALL: 2.0 * _ball_radius(spec.dimension),
        Family.GAUSS: 5.0,
        Family.EXP: 50.0,
    }[spec.family]
    return np.linspace(0.0, reach / spec.scale, n)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    sup_phi: float
    inf_phi: float
    message: str = ""

    def __bool__(self):
        return self.passed


def validate_dpp(spec: KernelSpec) -> ValidationReport:
    """Check ``0 <= phi_p <= 1`` on a dense grid (the spectrum of the
    convolution operator is the essential range of ``phi_p``)."""
    if not spec.translation_invariant:
        # projection kernel; valid for p <= 1 by the thinning argument
        ok = spec.thinning_p <= 1.0
        return ValidationReport(ok, spec.thinning_p, 0.0, "" if ok else "thinning p > 1")
    grid = _spectral_sup_grid(spec)
    if spec.dimension == 1 and spec.family in (Family.CPA, Family.CPB):
        values = spectral_density(spec, grid)
    else:
        pts = np.zeros((grid.size, spec.dimension))
        pts[:, 0] = grid
        values = spectral_density(spec, pts)
    sup, inf = float(np.max(values)), float(np.min(values))
    ok = sup <= 1.0 + 1e-12 and inf >= 0.0
    message = "" if ok else f"phi_p outside [0, 1]: sup={sup:.6g}, inf={inf:.6g}"
    return ValidationReport(ok, sup, inf, message)


# --- g = |K|^2 and its Fourier transform ---------------------------------------------


def _ball_tail_constant(d: int) -> float:
    # |K|^2 ~ Gamma(nu+1)^2 4^nu / (pi z^(d+1)) on average, z = c r
    nu = d / 2.0
    c = 2.0 * np.pi * _ball_radius(d)
    return math.gamma(nu + 1.0) ** 2 * 4.0**nu / (np.pi * c ** (d + 1))


def _base_g(spec: KernelSpec) -> RadialProfile:
    fam, d = spec.family, spec.dimension
    if fam is Family.SINE:
        return RadialProfile(1, lambda r: _sinc(r) ** 2, "sinc^2", cutoff=300.0, scale=0.5,
                             tail=lambda u: 1.0 / (2.0 * np.pi**2 * u))
    if fam is Family.BALL:
        const = _ball_tail_constant(d)
        c = 2.0 * np.pi * _ball_radius(d)
        theta = d * np.pi / 4.0 + np.pi / 4.0
        # J_nu^2 ~ (1 + cos(2z - 2 theta)) / (pi z); keep the oscillating term of the tail too
        return RadialProfile(d, lambda r: _ball_kernel(r, d) ** 2, f"ball{d}", cutoff=300.0, scale=0.5,
                             tail=lambda u: const * (1.0 / u - np.sin(2.0 * c * u - 2.0 * theta) / (2.0 * c * u * u)))
    if fam is Family.GAUSS:
        return RadialProfile(d, lambda r: np.exp(-2.0 * np.pi * np.asarray(r) ** 2), f"gauss{d}",
                             cutoff=5.0, scale=0.25)
    if fam is Family.EXP:
        a = spec.alpha
        return RadialProfile(1, lambda r: np.exp(-2.0 * np.asarray(r) / a), "exp", cutoff=20.0 * a, scale=a)
    if fam in (Family.CPA, Family.CPB):
        const = math.exp(-2.0) * (special.i0(2.0) - special.i1(2.0)) / (2.0 * np.pi**2)
        return RadialProfile(
            1,
            lambda r: np.exp(2.0 * np.cos(2.0 * np.pi * np.asarray(r)) - 2.0) * _sinc(r) ** 2,
            fam.value,
            cutoff=300.0,
            scale=0.25,
            tail=lambda u: const / u,
        )
    # Ginibre: |K(z, w)|^2 = exp(-pi |z - w|^2)
    return RadialProfile(2, lambda r: np.exp(-np.pi * np.asarray(r) ** 2), "ginibre", cutoff=5.0, scale=0.25)


def g_profile(spec: KernelSpec) -> RadialProfile:
    """``g_p(x) = |K_p(0, x)|^2 = g(x / p^(1/d))``."""
    base = _base_g(spec)
    return base.scaled(spec.scale, label=f"g[{spec.label}]")


def _lens_volume(t, radius: float, d: int):
    """Volume of the intersection of two radius-``radius`` balls at distance ``t``."""
    t = np.minimum(np.asarray(t, dtype=float), 2.0 * radius)
    if d == 1:
        return 2.0 * radius - t
    if d == 2:
        return 2.0 * radius**2 * np.arccos(t / (2.0 * radius)) - 0.5 * t * np.sqrt(4.0 * radius**2 - t * t)
    return np.pi / 12.0 * (4.0 * radius + t) * (2.0 * radius - t) ** 2


def _lattice_autocorrelation(which: str) -> tuple[np.ndarray, np.ndarray]:
    """Weights c_k = sum_n q_n q_{n-k} so that phi * phi_- = sum_k c_k tent(t - k)."""
    support, weights = compound_poisson_pmf(which)
    lo = int(support.min())
    dense = np.zeros(int(support.max()) - lo + 1)
    dense[(support - lo).astype(int)] = weights
    corr = np.correlate(dense, dense, mode="full")
    lags = np.arange(-(len(dense) - 1), len(dense))
    return lags.astype(float), corr


def _base_g_hat(spec: KernelSpec) -> RadialProfile:
    fam, d = spec.family, spec.dimension
    if fam is Family.SINE:
        return RadialProfile(1, lambda t: np.maximum(0.0, 1.0 - np.abs(t)), "tent", support=1.0)
    if fam is Family.BALL:
        radius = _ball_radius(d)
        return RadialProfile(d, lambda t: _lens_volume(t, radius, d), f"lens{d}", support=2.0 * radius)
    if fam is Family.GAUSS:
        return RadialProfile(
            d, lambda t: 2.0 ** (-d / 2.0) * np.exp(-np.pi * np.asarray(t) ** 2 / 2.0), f"gauss{d}^",
            cutoff=8.0, scale=0.5,
        )
    if fam is Family.EXP:
        a = spec.alpha
        return RadialProfile(
            1, lambda t: a / (1.0 + (np.pi * a * np.asarray(t)) ** 2), "lorentz",
            cutoff=400.0 / a, scale=1.0 / a, tail=lambda u: 1.0 / (np.pi**2 * a * u),
        )
    if fam in (Family.CPA, Family.CPB):
        lags, corr = _lattice_autocorrelation("A" if fam is Family.CPA else "B")

        def tents(t):
            t = np.abs(np.asarray(t, dtype=float))
            out = np.zeros_like(t)
            for k, c in zip(lags, corr):
                out = out + c * np.maximum(0.0, 1.0 - np.abs(t - k))
            return out

        return RadialProfile(1, tents, f"{fam.value}^", support=float(lags.max()) + 1.0)
    return RadialProfile(2, lambda t: np.exp(-np.pi * np.asarray(t) ** 2), "ginibre^", cutoff=5.0, scale=0.25)


def g_hat_profile(spec: KernelSpec) -> RadialProfile:
    """Closed-form Fourier transform of ``g_p``: ``p g^(t p^(1/d))``."""
    base = _base_g_hat(spec)
    return base.scaled(1.0 / spec.scale, amplitude=spec.thinning_p, label=f"g^[{spec.label}]")


def integral_of_g(spec: KernelSpec, quad: QuadratureSpec | None = None) -> float:
    """``int_{R^d} g`` by radial quadrature."""
    return radial_fourier(g_profile(spec), 0.0, quad or DEFAULT_QUADRATURE)


@dataclass(frozen=True)
class SelfReproducingReport:
    self_reproducing: bool
    g_hat_at_zero: float
    diagnostic: str = field(default="")

    def __bool__(self):
        return bool(self.self_reproducing)


def is_self_reproducing(spec: KernelSpec, tol: float = 1e-6) -> SelfReproducingReport:
    """Projection-kernel test: ``int g = g^(0) = 1``."""
    value = integral_of_g(spec)
    ok = bool(abs(value - 1.0) <= tol)
    return SelfReproducingReport(ok, value, f"g^(0) = {value:.10f}")
