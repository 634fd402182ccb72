"""Special functions, half-line quadrature and the radial Fourier transform.

The Fourier convention throughout the package is
``f^(y) = int f(x) exp(-2 pi i x.y) dx``, so that a radial profile ``g`` on
R^d has the radial transform

    d = 1:  2 int_0^inf g(r) cos(2 pi r s) dr
    d = 2:  2 pi int_0^inf r g(r) J0(2 pi r s) dr
    d = 3:  (2 / s) int_0^inf r g(r) sin(2 pi r s) dr

which are the order ``d/2 - 1`` Hankel transforms with weight ``r^(d/2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .measures import RadialProfile

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "DEFAULT_QUADRATURE",
    "bessel_j",
    "riemann_zeta",
    "gamma_fn",
    "integrate_halfline",
    "radial_fourier",
    "sphere_area",
    "ball_volume",
]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance.

    ``estimate`` and ``error`` carry the partial result.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    tail_cutoff: float = 60.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.tail_cutoff > 0:
            raise ValueError("tail_cutoff must be positive")


DEFAULT_QUADRATURE = QuadratureSpec()


def _half_integer_order(order) -> float:
    twice = 2.0 * float(order)
    if not (twice >= 0 and twice == math.floor(twice)):
        raise ValueError(f"Bessel order must be a non-negative half-integer, got {order!r}")
    return twice / 2.0


def bessel_j(order, z):
    """Bessel function of the first kind ``J_order(z)`` for half-integer orders.

    Integer orders go through the Cephes routines in scipy; orders ``n + 1/2``
    use the spherical Bessel identity ``J_{n+1/2}(z) = sqrt(2z/pi) j_n(z)``.
    Accepts scalars or arrays of ``z >= 0``.
    """
    nu = _half_integer_order(order)
    z_arr = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(z_arr)) or np.any(z_arr < 0):
        raise ValueError("bessel_j requires finite z >= 0")
    if nu == math.floor(nu):
        n = int(nu)
        if n == 0:
            out = special.j0(z_arr)
        elif n == 1:
            out = special.j1(z_arr)
        else:
            out = special.jv(n, z_arr)
    else:
        n = int(nu - 0.5)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.sqrt(2.0 * z_arr / np.pi) * special.spherical_jn(n, z_arr)
        # J_{1/2}(0) = 0 and higher orders vanish at the origin as well
        out = np.where(z_arr == 0.0, 0.0, out)
    return float(out) if np.ndim(out) == 0 else out


def riemann_zeta(s: float) -> float:
    """Riemann zeta function for real ``s > 1``."""
    s = float(s)
    if not s > 1.0:
        raise ValueError("riemann_zeta is only defined here for s > 1")
    return float(special.zeta(s, 1.0))


def gamma_fn(x: float) -> float:
    """Gamma function for real ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise ValueError("gamma_fn requires x > 0")
    return float(special.gamma(x))


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d (2 for d = 1)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def integrate_halfline(
    f: Callable[[float], float],
    spec: QuadratureSpec | None = None,
    points=None,
) -> float:
    """Integrate ``f`` over ``[0, spec.tail_cutoff]``.

    The caller is responsible for the mass beyond ``tail_cutoff`` being
    negligible. Raises :class:`QuadratureError` when the adaptive scheme
    runs out of subdivisions.
    """
    spec = spec or DEFAULT_QUADRATURE
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(
                f,
                0.0,
                spec.tail_cutoff,
                epsabs=spec.abs_tol,
                epsrel=spec.rel_tol,
                limit=spec.max_subdivisions,
                points=points,
            )
        except integrate.IntegrationWarning as exc:
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            value, err = integrate.quad(
                f,
                0.0,
                spec.tail_cutoff,
                epsabs=spec.abs_tol,
                epsrel=spec.rel_tol,
                limit=spec.max_subdivisions,
                points=points,
            )
            raise QuadratureError(str(exc).splitlines()[0], value, err) from None
    if err > max(spec.abs_tol, spec.rel_tol * abs(value)) * 10:
        raise QuadratureError("quadrature error estimate above tolerance", value, err)
    return value


def _wynn_epsilon(partial_sums: np.ndarray) -> float:
    """Wynn's epsilon extrapolation of a sequence of partial sums."""
    seq = [float(x) for x in partial_sums]
    n = len(seq)
    if n < 3:
        return seq[-1]
    prev = [0.0] * (n + 1)
    cur = list(seq)
    best = seq[-1]
    for k in range(1, n):
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0.0:
                # converged column; keep the last even-column value
                return cur[i + 1] if k % 2 == 1 else best
            nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        if k % 2 == 0 and cur:
            best = cur[-1]
        if len(cur) < 2:
            break
    return best


def _kernel(d: int, s: float):
    """Oscillatory factor of the radial transform (weight included)."""
    w = 2.0 * math.pi * s
    if d == 1:
        return lambda r: 2.0 * np.cos(w * r)
    if d == 2:
        return lambda r: 2.0 * math.pi * r * special.j0(w * r)
    return lambda r: (2.0 / s) * r * np.sin(w * r)


def _kernel_zeros(d: int, s: float, r_end: float) -> np.ndarray:
    if d == 2:
        w = 2.0 * math.pi * s
        # consecutive zeros of J0 are roughly pi apart
        zeros = special.jn_zeros(0, int(w * r_end / math.pi) + 2) / w
    else:
        offset = 0.5 if d == 1 else 0.0
        count = int(2.0 * s * r_end + offset) + 2
        zeros = (np.arange(1, count + 1) - offset) / (2.0 * s)
    return zeros[zeros < r_end]


def _chunk_edges(zeros: np.ndarray, r_end: float, max_chunk: float) -> np.ndarray:
    edges = np.concatenate(([0.0], zeros, [r_end]))
    out = [edges[0]]
    for a, b in zip(edges[:-1], edges[1:]):
        pieces = max(1, int(math.ceil((b - a) / max_chunk)))
        out.extend(np.linspace(a, b, pieces + 1)[1:])
    return np.asarray(out)


def radial_fourier(
    g: RadialProfile, s: float, spec: QuadratureSpec | None = None
) -> float:
    """d-dimensional Fourier transform of a radial profile, evaluated at radius ``s``.

    The integral is split at the zeros of the oscillatory factor and the
    resulting partial sums are accelerated with Wynn's epsilon algorithm
    when the profile has no compact support.
    """
    spec = spec or DEFAULT_QUADRATURE
    d = g.dimension
    if d not in (1, 2, 3):
        raise ValueError(f"radial_fourier supports d in {{1, 2, 3}}, got {d}")
    s = float(s)
    if s < 0:
        raise ValueError("radial_fourier requires s >= 0")
    compact = g.support is not None
    r_end = g.support if compact else (g.cutoff or spec.tail_cutoff)
    max_chunk = max(r_end / 64.0, 1e-3) if g.scale is None else g.scale

    if s == 0.0:
        edges = np.linspace(0.0, r_end, max(2, int(math.ceil(r_end / max_chunk))) + 1)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            total += _quad(lambda r: r ** (d - 1) * g(r), a, b, spec)
        if not compact and g.tail is not None:
            total += g.tail(r_end)
        return sphere_area(d) * total

    kernel = _kernel(d, s)
    zeros = _kernel_zeros(d, s, r_end)
    edges = _chunk_edges(zeros, r_end, max_chunk)

    def integrand(r):
        return g(r) * kernel(r)

    pieces = np.array([_quad(integrand, a, b, spec) for a, b in zip(edges[:-1], edges[1:])])
    partial = np.cumsum(pieces)
    if compact or len(zeros) < 8:
        return float(partial[-1])
    # extrapolate on the partial sums taken at the kernel zeros only
    seq = partial[np.isin(edges[1:], zeros)]
    tail_sums = seq[-min(len(seq), 24):]
    if abs(tail_sums[-1] - tail_sums[-2]) < spec.abs_tol:
        return float(partial[-1])
    return float(_wynn_epsilon(tail_sums))


def _quad(f, a: float, b: float, spec: QuadratureSpec) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(
            f, a, b, epsabs=spec.abs_tol * 1e-2, epsrel=spec.rel_tol, limit=spec.max_subdivisions
        )
    if err > max(spec.abs_tol, spec.rel_tol * abs(value)) * 100:
        raise QuadratureError(f"chunk [{a:g}, {b:g}] failed to converge", value, err)
    return value
