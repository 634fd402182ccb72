"""Spectral sampler for translation-invariant determinantal processes.

Two discretizations of the kernel operator are offered.

``"periodic"`` (default) replaces ``K`` on the bounding box of the window by
a periodic kernel whose eigenfunctions are the Fourier modes ``e^(2 pi i k.x / L)``,
with eigenvalues the averages of ``phi_p`` over the dual cells around
``k / L``. The projection step is then exact.

``"nystrom"`` discretizes ``K`` on a tensor grid with trapezoid weights and
extends the eigenvectors to the continuum by the Nystrom formula.

Both select eigenfunctions by independent Bernoulli draws and sample the
resulting projection process by the chain rule, keeping an orthonormal basis
of the orthogonal complement of the feature vectors of the points drawn so
far.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate

from ..kernels import Family, KernelSpec, kernel_function, spectral_density, validate_dpp
from ..numerics import sphere_area
from .rng import make_rng
from .simple import SamplerError, require_volume
from .window import PointConfiguration, Window

__all__ = [
    "DiscretizationError",
    "FrequencyTruncationError",
    "sample_dpp_spectral",
    "periodic_modes",
]

MAX_NODES = 4096
MAX_MODES = 2_000_000
EIGEN_SLACK = 1e-6
CLAMP_RESIDUE = 1e-8
REORTHO_EVERY = 64
CELL_NODES = 8


class DiscretizationError(ArithmeticError):
    """Discrete spectrum outside [0, 1]: the grid is too coarse."""


class FrequencyTruncationError(SamplerError):
    """The frequency grid needed to capture the spectral mass is too large."""


def _frequency_reach(spec: KernelSpec, mass_tol: float) -> float:
    """Radius ``T`` with ``int_{|t| > T} phi_p <= mass_tol``."""
    d = spec.dimension
    if spec.family in (Family.SINE, Family.BALL, Family.CPB):
        # compactly supported (cpB: after the pmf truncation)
        probe = np.linspace(0.0, 200.0, 400_001)
        pts = np.zeros((probe.size, d))
        pts[:, 0] = probe
        vals = spectral_density(spec, pts)
        if spec.family is Family.CPB:
            vals = np.maximum(vals, spectral_density(spec, -probe[:, None]))
        nz = np.nonzero(vals > 0)[0]
        return float(probe[nz[-1]]) + 1e-9

    def radial(s):
        t = np.zeros(d)
        t[0] = s
        return float(spectral_density(spec, t[None, :])[0]) * sphere_area(d) * s ** (d - 1)

    reach = 1.0
    while True:
        with warnings.catch_warnings():
            # only decides the truncation radius; a rough tail estimate is enough
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            tail, _ = integrate.quad(radial, reach, np.inf, epsabs=max(mass_tol * 1e-3, 1e-15), limit=400)
        if tail <= mass_tol:
            return reach
        reach *= 1.25
        if reach > 1e7:
            raise FrequencyTruncationError("spectral density decays too slowly to truncate")


def _cell_average(spec: KernelSpec, freqs: np.ndarray, sides: np.ndarray) -> np.ndarray:
    """Mean of ``phi_p`` over the dual cell ``k / L + [-1/2, 1/2]^d / L`` (Gauss-Legendre)."""
    d = len(sides)
    nodes, weights = np.polynomial.legendre.leggauss(CELL_NODES)
    grids = np.meshgrid(*([nodes] * d), indexing="ij")
    offsets = np.stack([g.ravel() for g in grids], axis=-1) * (0.5 / sides)  # (Q^d, d)
    w = np.prod(np.meshgrid(*([weights] * d), indexing="ij"), axis=0).ravel() / 2.0**d
    out = np.empty(len(freqs))
    chunk = max(1, 200_000 // len(w))
    for i in range(0, len(freqs), chunk):
        block = freqs[i : i + chunk, None, :] + offsets[None, :, :]
        vals = np.asarray(spectral_density(spec, block.reshape(-1, d)), dtype=float).reshape(len(block), -1)
        out[i : i + chunk] = vals @ w
    return out


def periodic_modes(spec: KernelSpec, sides, mass_tol: float = 1e-6):
    """Integer mode vectors ``k`` with ``|k / L| <= T`` and their eigenvalues.

    The eigenvalue of mode ``k`` is the mean of ``phi_p`` over the cell of
    the dual lattice centred at ``k / L``. The eigenvalues then sum to
    ``L^d int phi_p`` (the mean count equals the box volume up to the
    truncated mass) and stay in [0, 1]; at a jump of ``phi`` in d = 1 this
    gives the midpoint value.
    """
    sides = np.asarray(sides, dtype=float)
    reach = _frequency_reach(spec, mass_tol)
    kmax = np.floor(reach * sides + 0.5).astype(int)
    count = int(np.prod(2 * kmax + 1))
    if count > MAX_MODES:
        raise FrequencyTruncationError(
            f"{count} Fourier modes needed to capture 1 - {mass_tol:g} of the spectral mass (limit {MAX_MODES})"
        )
    axes = [np.arange(-k, k + 1) for k in kmax]
    ks = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(sides))
    freqs = ks / sides
    if spec.dimension > 1:
        # keep every cell that meets the ball of radius reach
        half_diag = 0.5 * float(np.sqrt(np.sum(1.0 / sides**2)))
        inside = np.sqrt(np.sum(freqs**2, axis=1)) <= reach + half_diag
        ks, freqs = ks[inside], freqs[inside]
    eig = np.clip(_cell_average(spec, freqs, sides), 0.0, 1.0)
    keep = eig > 0
    return ks[keep], eig[keep]


class _ProjectionChain:
    """Chain-rule sampler for the projection kernel ``K(x, y) = Phi(y)^* Phi(x)``.

    ``features(x)`` returns Phi for a batch of points, shape (B, n);
    ``bound`` dominates ``||Phi(x)||^2`` on the proposal box.
    """

    def __init__(self, features, n: int, bound: float, lower, sides, window: Window, rng):
        self.features = features
        self.n = n
        self.bound = bound
        self.lower = np.asarray(lower, dtype=float)
        self.sides = np.asarray(sides, dtype=float)
        self.window = window
        self.rng = rng

    def run(self) -> np.ndarray:
        n, d = self.n, len(self.sides)
        # conjugate of an orthonormal basis of the complement, shape (n, m)
        cbasis = np.eye(n, dtype=complex)
        points = np.empty((n, d))
        for i in range(n):
            m = n - i
            while True:
                batch = min(4096, int(math.ceil(1.3 * n / m)) + 2)
                cand = self.lower + self.sides * self.rng.random((batch, d))
                proj = self.features(cand) @ cbasis  # (B, m)
                dens = np.einsum("ij,ij->i", proj.real, proj.real) + np.einsum("ij,ij->i", proj.imag, proj.imag)
                if np.any(dens > self.bound * (1.0 + 1e-9)):
                    raise DiscretizationError("conditional density exceeds the rejection bound")
                accepted = np.nonzero(self.rng.random(batch) * self.bound < dens)[0]
                if accepted.size:
                    j = accepted[0]
                    break
            points[i] = cand[j]
            if m > 1:
                cbasis = _drop_direction(cbasis, proj[j].conj())
                if i % REORTHO_EVERY == REORTHO_EVERY - 1:
                    cbasis, _ = np.linalg.qr(cbasis)
        return points


def _drop_direction(basis: np.ndarray, coeff: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``span(basis)`` minus the direction ``basis @ coeff``.

    A Householder reflection maps ``coeff`` onto the first axis; the remaining
    columns span the complement. The reflection is unitary, so the basis
    stays orthonormal to working precision; callers reorthogonalize
    periodically as a safeguard.
    """
    v = coeff / np.linalg.norm(coeff)
    phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
    u = v.copy()
    u[0] += phase
    u /= np.linalg.norm(u)
    # H = I - 2 u u^*, H v = -phase e_1
    reflected = basis - 2.0 * np.outer(basis @ u, u.conj())
    return reflected[:, 1:]


def _check_spec(spec: KernelSpec, window: Window) -> None:
    if not spec.translation_invariant:
        raise SamplerError("the spectral sampler needs a translation-invariant kernel (use sample_ginibre)")
    if spec.family is Family.CPA:
        raise SamplerError("the complex cpA kernel is not sampled")
    if spec.dimension not in (1, 2):
        raise SamplerError("the spectral sampler supports d = 1 and d = 2")
    if window.dimension != spec.dimension:
        raise SamplerError("window dimension does not match the kernel")
    report = validate_dpp(spec)
    if not report.passed:
        raise SamplerError(f"{spec.label} does not define a determinantal process: {report.message}")
    require_volume(window)


def _sample_periodic(spec, window, rng, mass_tol):
    lower, sides = window.bounding_box
    ks, eig = periodic_modes(spec, sides, mass_tol)
    chosen = ks[rng.random(eig.size) < eig]
    n = len(chosen)
    if n == 0:
        return np.empty((0, spec.dimension))
    vol = float(np.prod(sides))
    omega = 2.0 * np.pi * chosen / sides  # (n, d)

    def features(x):
        return np.exp(1j * ((x - lower) @ omega.T)) / math.sqrt(vol)

    chain = _ProjectionChain(features, n, n / vol, lower, sides, window, rng)
    return chain.run()


def _sample_nystrom(spec, window, rng, grid_size):
    d = spec.dimension
    if grid_size is None:
        grid_size = MAX_NODES if d == 1 else int(math.isqrt(MAX_NODES))
    if grid_size < 2 or grid_size**d > MAX_NODES:
        raise SamplerError(f"grid_size^d must lie in [2^d, {MAX_NODES}]")
    lower, sides = window.bounding_box
    axes = [np.linspace(lower[i], lower[i] + sides[i], grid_size) for i in range(d)]
    wts = []
    for i in range(d):
        w = np.full(grid_size, sides[i] / (grid_size - 1))
        w[[0, -1]] *= 0.5
        wts.append(w)
    nodes = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    weights = np.prod(np.stack(np.meshgrid(*wts, indexing="ij"), axis=-1).reshape(-1, d), axis=1)
    inside = window.contains(nodes)
    nodes, weights = nodes[inside], weights[inside]
    kfun = kernel_function(spec)
    sw = np.sqrt(weights)
    mat = sw[:, None] * kfun(nodes[:, None, :] - nodes[None, :, :]) * sw[None, :]
    mat = 0.5 * (mat + mat.conj().T)
    lam, vec = np.linalg.eigh(mat)
    if lam.min() < -EIGEN_SLACK or lam.max() > 1.0 + EIGEN_SLACK:
        raise DiscretizationError(
            f"discrete spectrum [{lam.min():.3g}, {lam.max():.3g}] leaves [0, 1]; refine the grid"
        )
    clamped = np.clip(lam, 0.0, 1.0)
    residue = float(np.max(np.abs(clamped - lam)))
    if residue >= CLAMP_RESIDUE and residue > EIGEN_SLACK:
        raise DiscretizationError(f"clamping residue {residue:.3g}")
    pick = rng.random(lam.size) < clamped
    n = int(pick.sum())
    if n == 0:
        return np.empty((0, d))
    coef = (sw[:, None] * vec[:, pick]) / lam[pick][None, :]  # Nystrom extension

    def features(x):
        return kfun(x[:, None, :] - nodes[None, :, :]) @ coef

    nodes_inside = nodes
    bound = 1.2 * float(np.max(np.sum(np.abs(features(nodes_inside)) ** 2, axis=1)))
    chain = _ProjectionChain(features, n, bound, lower, sides, window, rng)
    return chain.run()


def sample_dpp_spectral(
    spec: KernelSpec,
    window: Window,
    grid_size: int | None = None,
    seed: int = 0,
    method: str = "periodic",
    mass_tol: float = 1e-6,
) -> PointConfiguration:
    """Draw a determinantal process with kernel ``K_p`` restricted to ``window``.

    Parameters
    ----------
    spec : KernelSpec
        Translation-invariant kernel with ``0 <= phi_p <= 1``.
    window : Window
        Interval, rectangle or disk; disks are sampled on their bounding square.
    grid_size : int, optional
        Nodes per axis for ``method="nystrom"`` (``grid_size^d <= 4096``).
    seed : int
    method : {"periodic", "nystrom"}
    mass_tol : float
        Spectral mass allowed outside the truncated frequency set (periodic).
    """
    _check_spec(spec, window)
    rng = make_rng(seed)
    if method == "periodic":
        pts = _sample_periodic(spec, window, rng, mass_tol)
    elif method == "nystrom":
        pts = _sample_nystrom(spec, window, rng, grid_size)
    else:
        raise SamplerError(f"unknown method {method!r}")
    pts = pts[window.contains(pts)] if len(pts) else pts
    if spec.dimension == 1:
        pts = np.sort(pts, axis=0)
    return PointConfiguration(spec.dimension, window, pts, seed, f"dpp:{spec.label}")
