"""Zeros of the planar Gaussian analytic function ``sum a_n sqrt(L^n / n!) z^n``.

With ``L = pi`` the zero set has mean density one, two-point function
``1 - g(r)`` with ``g(r) = phi(pi r^2)``, and the diffraction density is
``1 - h(s)`` where ``h`` is the radial Fourier transform of ``g``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import special

from ..numerics import gamma_fn, riemann_zeta
from .correlations import permanent

__all__ = [
    "gaf_phi",
    "gaf_g",
    "gaf_I",
    "gaf_h",
    "gaf_matrices",
    "gaf_kpoint",
    "gaf_tail_cutoff",
    "GafDomainError",
    "GafConditioningError",
]

# Taylor coefficients of phi at 0; the series converges for |u| < 2 pi.
_PHI_SERIES = [
    Fraction(1), Fraction(-1, 2), Fraction(0), Fraction(1, 36), Fraction(0), Fraction(-1, 720),
    Fraction(0), Fraction(1, 16800), Fraction(0), Fraction(-1, 435456), Fraction(0),
    Fraction(691, 8382528000), Fraction(0), Fraction(-1, 355829760), Fraction(0),
    Fraction(3617, 39230231040000),
]
_PHI_COEFFS = np.array([float(c) for c in _PHI_SERIES])
U_SWITCH = 0.5
H_MAX_S = 50.0


class GafDomainError(ValueError):
    pass


class GafConditioningError(ArithmeticError):
    pass


def gaf_phi(u):
    """``[e^-u (-2 + 4u - u^2) + e^-2u (4 - 4u - u^2) - 2 e^-3u] / (1 - e^-u)^3``, with phi(0) = 1.

    Below ``U_SWITCH`` the Taylor series replaces the closed form, whose
    numerator cancels to third order.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("gaf_phi requires u >= 0")
    small = u < U_SWITCH
    us = np.where(small, 1.0, u)
    series = np.polynomial.polynomial.polyval(np.where(small, u, 0.0), _PHI_COEFFS)
    e1 = np.exp(-us)
    num = e1 * (-2.0 + 4.0 * us - us * us) + e1 * e1 * (4.0 - 4.0 * us - us * us) - 2.0 * e1**3
    den = (-np.expm1(-us)) ** 3
    out = np.where(small, series, num / den)
    return float(out) if out.ndim == 0 else out


def gaf_g(r):
    """Deficit ``g(r) = phi(pi r^2)`` of the two-point function of the zeros."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("gaf_g requires r >= 0")
    return gaf_phi(np.pi * r * r)


def gaf_tail_cutoff(alpha: float = 0.0, abs_tol: float = 1e-12, bound: float = 4.0) -> float:
    """Smallest ``U`` with ``bound * exp(-U/2) * U^(alpha+1) < abs_tol``.

    ``bound`` dominates ``|phi(u)| e^(u/2)`` (its maximum is below 2.2).
    """
    u = 1.0
    while bound * math.exp(-u / 2.0) * u ** (alpha + 1.0) >= abs_tol:
        u *= 1.1
    return u


def gaf_I(alpha: float) -> float:
    """Moment ``int_0^inf u^alpha phi(u) du = alpha (1 - alpha) Gamma(alpha+1) zeta(alpha+1)``."""
    alpha = float(alpha)
    if alpha < 0:
        raise ValueError("gaf_I requires alpha >= 0")
    if alpha == 0.0:
        return 1.0
    if alpha > 1e-8:
        return alpha * (1.0 - alpha) * gamma_fn(alpha + 1.0) * riemann_zeta(alpha + 1.0)
    # alpha * zeta(1 + alpha) = 1 + euler_gamma * alpha + O(alpha^2)
    return (1.0 - alpha) * gamma_fn(alpha + 1.0) * (1.0 + np.euler_gamma * alpha)


def _h_direct(x: float) -> float:
    total, k = 1.0, 2
    term_mag = x * x  # x^k / (k-2)!
    while True:
        term = (-1) ** (k + 1) * term_mag * riemann_zeta(k + 1)
        total += term
        if abs(term) < 1e-16 * max(1.0, abs(total)) and k > x:
            return total
        term_mag *= x / (k - 1)
        k += 1


def _h_split(x: float) -> float:
    # zeta(k+1) = sum_{n<=M} n^-(k+1) + zeta(k+1, M+1); the finite part sums in
    # closed form to -x^2/n^3 exp(-x/n), the Hurwitz remainder decays like (x/M)^k.
    m = int(math.ceil(2.0 * x))
    n = np.arange(1, m + 1, dtype=float)
    total = 1.0 - float(np.sum(x * x / n**3 * np.exp(-x / n)))
    k = 2
    term_mag = x * x
    while True:
        term = (-1) ** (k + 1) * term_mag * float(special.zeta(k + 1, m + 1))
        total += term
        if abs(term) < 1e-17:
            return total
        term_mag *= x / (k - 1)
        k += 1


def gaf_h(s):
    """``1 + sum_{k>=2} (-1)^(k+1) pi^k s^(2k) zeta(k+1) / (k-2)!``.

    The alternating series is summed directly while ``pi s^2 <= 8``; beyond
    that the Dirichlet series of zeta is split so no large intermediate
    terms appear. ``s > 50`` is rejected.
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise ValueError("gaf_h requires s >= 0")
    if np.any(s_arr > H_MAX_S):
        raise GafDomainError(f"gaf_h is only evaluated for s <= {H_MAX_S:g}")
    flat = [
        _h_direct(np.pi * v * v) if np.pi * v * v <= 8.0 else _h_split(np.pi * v * v)
        for v in s_arr.ravel()
    ]
    out = np.asarray(flat).reshape(s_arr.shape)
    return float(out) if out.ndim == 0 else out


def gaf_matrices(points, L: float = np.pi, normalize: bool = False):
    """Covariances ``A = E f(z_i) conj f(z_j)``, ``B = E f'(z_i) conj f(z_j)``,
    ``C = E f'(z_i) conj f'(z_j)``.

    With ``normalize`` every matrix is conjugated by
    ``diag(exp(-L |z_i|^2 / 2))``, which keeps the entries bounded for
    spread-out points and leaves ``per(C - B A^-1 B^*) / det(A)`` unchanged.
    """
    z = np.asarray(points, dtype=complex).ravel()
    zw = np.outer(z, np.conj(z))
    expo = L * zw
    if normalize:
        sq = np.abs(z) ** 2
        expo = expo - 0.5 * L * (sq[:, None] + sq[None, :])
    e = np.exp(expo)
    A = e
    B = L * np.conj(z)[None, :] * e
    C = (L * L * zw + L) * e
    return A, B, C


def gaf_kpoint(points, L: float = np.pi, imag_tol: float = 1e-9) -> float:
    """k-point correlation ``per(C - B A^-1 B^*) / det(pi A)`` of the zero set.

    Points are recentred at their mean and the covariances normalized, so
    the matrices stay well conditioned unless two points nearly coincide.
    """
    z = np.asarray(points, dtype=complex).ravel()
    if z.size == 0:
        return 1.0
    if z.size > 6:
        raise ValueError("gaf_kpoint supports at most 6 points")
    z = z - z.mean()
    A, B, C = gaf_matrices(z, L, normalize=True)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e12:
        raise GafConditioningError(f"covariance matrix is singular (cond={cond:.3g}); points too close")
    schur = C - B @ np.linalg.solve(A, np.conj(B).T)
    value = permanent(schur) / np.linalg.det(np.pi * A)
    scale = max(1.0, abs(value))
    if abs(value.imag) > imag_tol * scale:
        raise GafConditioningError(f"imaginary residue {value.imag:.3g} exceeds tolerance")
    return float(value.real)
