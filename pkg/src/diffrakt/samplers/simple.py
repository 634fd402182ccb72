"""Poisson, renewal and Cox-cosine samplers."""

from __future__ import annotations

import math

import numpy as np

from .rng import make_rng
from .window import PointConfiguration, Shape, Window

__all__ = [
    "SamplerError",
    "BudgetError",
    "sample_poisson",
    "renewal_rates",
    "renewal_increment_pdf",
    "renewal_increment_cdf",
    "sample_renewal_increments",
    "sample_renewal_dpp",
    "sample_cox_cosine",
]

POISSON_BUDGET = 1e8
RENEWAL_BURN_IN = 50


class SamplerError(ValueError):
    """Invalid sampler input (window, parameters)."""


class BudgetError(SamplerError):
    """The requested sample would exceed the point budget."""


def require_volume(window: Window) -> None:
    if not window.volume > 0:
        raise SamplerError(f"window {window.describe()} has zero volume")


def sample_poisson(window: Window, intensity: float, seed: int) -> PointConfiguration:
    """Homogeneous Poisson process: Poisson count, then i.i.d. uniform points."""
    require_volume(window)
    if not intensity > 0 or not math.isfinite(intensity):
        raise SamplerError("intensity must be positive and finite")
    mean = intensity * window.volume
    if mean >= POISSON_BUDGET:
        raise BudgetError(f"expected count {mean:.3g} exceeds the budget {POISSON_BUDGET:.0e}")
    rng = make_rng(seed)
    n = int(rng.poisson(mean))
    return PointConfiguration(
        window.dimension, window, window.uniform(n, rng), seed, f"poisson(intensity={intensity:g})"
    )


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 0.5:
        raise SamplerError(f"renewal parameter alpha must lie in (0, 1/2], got {alpha}")


def renewal_rates(alpha: float) -> tuple[float, float]:
    """Rates ``(1 -+ sqrt(1 - 2 alpha)) / alpha`` of the two exponential phases."""
    _check_alpha(alpha)
    root = math.sqrt(1.0 - 2.0 * alpha)
    # 1 - root written without cancellation
    lam1 = (2.0 * alpha / (1.0 + root)) / alpha
    lam2 = (1.0 + root) / alpha
    return lam1, lam2


def renewal_increment_pdf(x, alpha: float):
    """``f(x) = 2 / sqrt(1 - 2a) e^(-x/a) sinh(sqrt(1 - 2a) x / a)`` on x > 0.

    At ``a = 1/2`` this is the Gamma(2, 2) density ``4 x e^(-2x)``.
    """
    _check_alpha(alpha)
    x = np.asarray(x, dtype=float)
    xp = np.maximum(x, 0.0)
    root = math.sqrt(1.0 - 2.0 * alpha)
    if root < 1e-8:
        out = 4.0 * xp * np.exp(-2.0 * xp)
    else:
        # e^(-x/a) sinh(c x / a) = (e^(-l1 x) - e^(-l2 x)) / 2
        lam1, lam2 = renewal_rates(alpha)
        out = (np.exp(-lam1 * xp) - np.exp(-lam2 * xp)) / root
    return np.where(x > 0, out, 0.0)


def renewal_increment_cdf(x, alpha: float):
    lam1, lam2 = renewal_rates(alpha)
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    if lam2 - lam1 < 1e-8:
        out = 1.0 - (1.0 + lam1 * x) * np.exp(-lam1 * x)
    else:
        out = 1.0 - (lam2 * np.exp(-lam1 * x) - lam1 * np.exp(-lam2 * x)) / (lam2 - lam1)
    return out


def sample_renewal_increments(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Sum of independent Exp(l1) and Exp(l2) variables (mean one)."""
    lam1, lam2 = renewal_rates(alpha)
    return rng.exponential(1.0 / lam1, size) + rng.exponential(1.0 / lam2, size)


def sample_renewal_dpp(alpha: float, window: Window, seed: int) -> PointConfiguration:
    """Renewal process with increment density ``f_alpha`` on an interval.

    The chain starts ``RENEWAL_BURN_IN`` increments to the left of the window.
    """
    _check_alpha(alpha)
    if window.shape is not Shape.INTERVAL:
        raise SamplerError("the renewal sampler needs an interval window")
    require_volume(window)
    a, b = window.params
    rng = make_rng(seed)
    start = a - float(np.sum(sample_renewal_increments(alpha, RENEWAL_BURN_IN, rng)))
    chunks, pos = [], start
    batch = int(b - start) + 64
    while pos <= b:
        steps = pos + np.cumsum(sample_renewal_increments(alpha, batch, rng))
        chunks.append(steps)
        pos = steps[-1]
    pts = np.concatenate(chunks)
    pts = pts[(pts >= a) & (pts <= b)]
    return PointConfiguration(1, window, pts, seed, f"renewal(alpha={alpha:g})")


def sample_cox_cosine(window: Window, seed: int) -> PointConfiguration:
    """Cox process directed by ``1 + cos(2 pi (t + U))``, ``U ~ U[0, 1]``.

    Rate-2 Poisson points are kept with probability ``(1 + cos) / 2``.
    """
    if window.shape is not Shape.INTERVAL:
        raise SamplerError("the Cox cosine sampler needs an interval window")
    require_volume(window)
    rng = make_rng(seed)
    u = rng.random()
    a, b = window.params
    n = int(rng.poisson(2.0 * (b - a)))
    x = a + (b - a) * rng.random(n)
    keep = rng.random(n) < 0.5 * (1.0 + np.cos(2.0 * np.pi * (x + u)))
    return PointConfiguration(1, window, np.sort(x[keep]), seed, "cox_cosine")
