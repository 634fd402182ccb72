"""Zeros of the truncated planar Gaussian analytic function."""

from __future__ import annotations

import math

import numpy as np
from scipy import linalg, special

from .rng import make_rng
from .simple import SamplerError
from .window import PointConfiguration, Shape, Window

__all__ = ["GafTruncationError", "RootFindingError", "sample_gaf_zeros", "gaf_coefficients"]

MAX_DEGREE = 512
TRUNCATION_SAFETY = 0.5
NEWTON_STEPS = 5
NEWTON_TOL = 1e-10
DENSITY_ALARM = 3.0
BUFFER = 1.0


class GafTruncationError(SamplerError):
    """The truncated series is not accurate on the window."""


class RootFindingError(ArithmeticError):
    pass


def gaf_coefficients(a: np.ndarray, rho: float) -> np.ndarray:
    """Coefficients of ``sum a_n sqrt(pi^n / n!) z^n`` in the variable ``w = z / rho``.

    Computed in log scale and normalized by the largest modulus, which leaves
    the zeros unchanged.
    """
    n = np.arange(a.size)
    logc = 0.5 * n * math.log(math.pi) - 0.5 * special.gammaln(n + 1) + n * math.log(rho)
    return a * np.exp(logc - logc.max())


def _trim(c: np.ndarray, reach: float, tol: float = 1e-17) -> np.ndarray:
    """Drop the tail of ``c`` whose modulus sum on ``|w| <= reach`` is below ``tol`` of the peak term."""
    n = np.arange(c.size)
    with np.errstate(divide="ignore"):
        logt = np.log(np.abs(c)) + n * math.log(reach)
    terms = np.exp(logt - logt.max())
    tail = np.cumsum(terms[::-1])[::-1]
    keep = np.nonzero(tail >= tol)[0]
    return c[: keep[-1] + 1]


def _horner(c: np.ndarray, w: np.ndarray):
    """Value, derivative and modulus bound ``sum |c_n| |w|^n``."""
    f = np.zeros_like(w)
    df = np.zeros_like(w)
    bound = np.zeros(w.shape)
    aw = np.abs(w)
    for cn in c[::-1]:
        df = df * w + f
        f = f * w + cn
        bound = bound * aw + abs(cn)
    return f, df, bound


def sample_gaf_zeros(window: Window, truncation_N: int, seed: int, force_a0_zero: bool = False) -> PointConfiguration:
    """Zeros of ``sum_{n<=N} a_n sqrt(pi^n / n!) z^n`` inside a disk window.

    Roots are the eigenvalues of the (balanced) companion matrix of the
    polynomial in ``w = z / rho`` with ``rho = (R + 1) / 2``; roots within
    ``R + 1`` of the window centre are polished by at most five Newton steps
    and those in the window are kept. With this scaling the coefficient
    moduli peak at low degree, and the balanced eigensolve resolves the roots
    near the window; at the natural scale ``sqrt(N / pi)`` the low-order
    coefficients fall below its backward error. High-order terms whose total
    modulus on the generation disk is below ``1e-17`` of the largest term are
    dropped; they do not move the roots near the window at double precision.

    Parameters
    ----------
    window : Window
        Disk of radius ``R`` with ``pi R^2 <= N / 2``. The zero process is
        stationary, so the series is expanded about the window centre.
    truncation_N : int
        Polynomial degree, at most 512.
    seed : int
    force_a0_zero : bool
        Diagnostic: set the constant coefficient to zero so that the centre
        is a root.
    """
    if window.shape is not Shape.DISK:
        raise SamplerError("GAF zeros are sampled in a disk window")
    cx, cy, radius = window.params
    N = int(truncation_N)
    if not 1 <= N <= MAX_DEGREE:
        raise SamplerError(f"truncation_N must lie in [1, {MAX_DEGREE}]")
    if math.pi * radius**2 > TRUNCATION_SAFETY * N:
        raise GafTruncationError(
            f"window radius {radius:g} needs truncation_N >= {math.ceil(math.pi * radius**2 / TRUNCATION_SAFETY)}"
        )
    rng = make_rng(seed)
    # drawn as (re, im) pairs so that a_0..a_N do not depend on N
    pairs = rng.standard_normal((N + 1, 2))
    a = (pairs[:, 0] + 1j * pairs[:, 1]) / math.sqrt(2.0)
    if force_a0_zero:
        a[0] = 0.0
    rho = 0.5 * (radius + BUFFER)
    c = gaf_coefficients(a, rho)
    c = _trim(c, (radius + BUFFER) / rho)
    # companion matrix of the monic polynomial, highest degree first
    try:
        comp = linalg.companion(c[::-1])
        w = linalg.eigvals(comp, check_finite=False)
    except (linalg.LinAlgError, ValueError) as exc:
        raise RootFindingError(f"companion eigensolve failed: {exc}") from exc
    w = w[np.abs(w) * rho <= radius + BUFFER]
    for _ in range(NEWTON_STEPS):
        f, df, bound = _horner(c, w)
        done = np.abs(f) <= NEWTON_TOL * bound
        if np.all(done):
            break
        step = np.where(done | (df == 0), 0.0, f / np.where(df == 0, 1.0, df))
        w = w - step
    f, _, bound = _horner(c, w)
    z = w * rho
    inside = np.abs(z) <= radius
    if np.any(np.abs(f[inside]) > NEWTON_TOL * bound[inside]):
        raise RootFindingError("Newton polishing did not reach the residual tolerance")
    z = z[inside]
    expected = math.pi * radius**2
    if radius > 0 and z.size > DENSITY_ALARM * max(expected, 1.0) + 10:
        raise GafTruncationError(f"{z.size} zeros in the window, expected about {expected:.1f}")
    pts = np.column_stack([z.real + cx, z.imag + cy])
    return PointConfiguration(2, window, pts, seed, f"gaf(N={N})")
