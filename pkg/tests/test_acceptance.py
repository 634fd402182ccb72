"""End-to-end acceptance checks at their stated tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary.
Sample sets are drawn once per session.
"""

import functools
import math
import time

import numpy as np
import pytest
from scipy import special, stats

from diffrakt.analytic import (
    ProcessKind,
    ProcessSpec,
    determinantal,
    diffraction_pair,
    gaf_g,
    gaf_h,
    gaf_kpoint,
    gaf_phi,
    gaf_tail_cutoff,
    kpoint_determinantal,
    permanental,
)
from diffrakt.estimators import (
    compare,
    estimate_atom_mass,
    estimate_pair_correlation,
    estimate_scattering_intensity,
)
from diffrakt.kernels import (
    KernelSpec,
    g_hat_profile,
    g_profile,
    integral_of_g,
    is_self_reproducing,
    kernel_function,
)
from diffrakt.measures import RadialProfile
from diffrakt.numerics import QuadratureSpec, radial_fourier
from diffrakt.samplers import (
    Window,
    realization_seeds,
    renewal_increment_cdf,
    sample_cox_cosine,
    sample_dpp_spectral,
    sample_gaf_zeros,
    sample_ginibre,
    sample_permanental,
    sample_renewal_dpp,
    sample_renewal_increments,
    make_rng,
)
from diffrakt.verify import CATALOG

SEED = 42
LINE = Window.interval(0.0, 500.0)
T_GRID = np.linspace(0.05, 3.0, 60)
BANDWIDTH = 0.05  # 25 Fourier frequencies per point at L = 500


def record(log, number, passed, detail):
    log.append((number, bool(passed), detail))
    assert passed, detail


@functools.lru_cache(maxsize=None)
def timed_samples(kind, *args):
    start = time.perf_counter()
    if kind == "sine":
        p, = args
        spec = KernelSpec("sine", thinning_p=p)
        out = [sample_dpp_spectral(spec, LINE, seed=s) for s in realization_seeds(SEED, 200)]
    elif kind == "renewal":
        alpha, = args
        out = [sample_renewal_dpp(alpha, LINE, s) for s in realization_seeds(SEED, 200)]
    elif kind == "ginibre":
        out = [sample_ginibre(Window.disk(12.0), s, N=2048, precision="single") for s in realization_seeds(SEED, 100)]
    elif kind == "gaf":
        out = [sample_gaf_zeros(Window.disk(5.0), 256, s) for s in realization_seeds(SEED, 300)]
    elif kind == "permanental":
        spec = KernelSpec("gauss")
        out = [sample_permanental(spec, Window.interval(0.0, 200.0), None, s) for s in realization_seeds(SEED, 300)]
    elif kind == "cox":
        length, = args
        out = [sample_cox_cosine(Window.interval(0.0, length), s) for s in realization_seeds(SEED, 200)]
    else:
        raise ValueError(kind)
    return out, time.perf_counter() - start


def scattering_report(samples, spec):
    _, gamma_hat = diffraction_pair(spec)
    curve = estimate_scattering_intensity(samples, T_GRID, bandwidth=BANDWIDTH)
    return compare(curve, gamma_hat)


def test_criterion_01_sine_diffraction(acceptance_log):
    start = time.perf_counter()
    samples, _ = timed_samples("sine", 1.0)
    rep = scattering_report(samples, determinantal("sine"))
    elapsed = time.perf_counter() - start
    density = np.mean([s.count for s in samples]) / LINE.volume
    ok = rep.rms <= 0.03 and rep.coverage >= 0.9 and elapsed <= 300.0 and abs(density - 1.0) <= 0.05
    record(acceptance_log, 1, ok,
           f"sine: rms={rep.rms:.4f} (<=0.03), coverage={rep.coverage:.3f} (>=0.9), "
           f"runtime={elapsed:.0f}s (<=300), density={density:.4f}")


def test_criterion_02_thinning(acceptance_log):
    t = np.linspace(0.0, 6.0, 601)
    tent = g_hat_profile(KernelSpec("sine"))
    details, ok = [], True
    for p in (0.25, 0.5):
        _, gamma_hat = diffraction_pair(determinantal("sine", thinning_p=p))
        dev = float(np.max(np.abs(gamma_hat.ac_density(t) - (1.0 - p * tent(t * p)))))
        samples, _ = timed_samples("sine", p)
        rep = scattering_report(samples, determinantal("sine", thinning_p=p))
        ok &= dev <= 1e-10 and rep.rms <= 0.03 and rep.coverage >= 0.9
        details.append(f"p={p}: analytic dev={dev:.1e}, rms={rep.rms:.4f}, coverage={rep.coverage:.3f}")
    record(acceptance_log, 2, ok, "; ".join(details))


def test_criterion_03_ginibre(acceptance_log):
    gamma, gamma_hat = diffraction_pair(determinantal("ginibre"))
    r = np.linspace(0.0, 5.0, 1001)
    dual = float(np.max(np.abs(gamma.ac_density(r) - gamma_hat.ac_density(r))))
    samples, elapsed = timed_samples("ginibre")
    curve = estimate_pair_correlation(samples, 3.0, 60).restrict(0.1, 3.0)
    rep = compare(curve, gamma)
    ok = dual <= 1e-12 and rep.rms <= 0.02 and elapsed <= 900.0
    record(acceptance_log, 3, ok,
           f"ginibre: self-duality dev={dual:.1e}, rms={rep.rms:.4f} (<=0.02), runtime={elapsed:.0f}s (<=900)")


def test_criterion_04_renewal(acceptance_log):
    details, ok = [], True
    for alpha in (0.125, 0.25, 0.5):
        draws = sample_renewal_increments(alpha, 100_000, make_rng(SEED))
        ks = stats.kstest(draws, lambda x: renewal_increment_cdf(x, alpha)).statistic
        samples, _ = timed_samples("renewal", alpha)
        rep = scattering_report(samples, determinantal("exp", alpha=alpha))
        ok &= ks <= 0.02 and rep.rms <= 0.03
        details.append(f"alpha={alpha}: KS={ks:.4f}, rms={rep.rms:.4f}")
    record(acceptance_log, 4, ok, "; ".join(details))


def test_criterion_05_permanental(acceptance_log):
    samples, _ = timed_samples("permanental")
    gamma, _ = diffraction_pair(permanental("gauss"))
    curve = estimate_pair_correlation(samples, 2.0, 40).restrict(0.05, 2.0)
    rep = compare(curve, gamma)
    record(acceptance_log, 5, rep.rms <= 0.05, f"permanental gauss: rms={rep.rms:.4f} (<=0.05)")


def test_criterion_06_cox_bragg(acceptance_log):
    samples, _ = timed_samples("cox", 500.0)
    masses = [estimate_atom_mass(samples, t)[0] for t in (-1.0, 1.0)]
    level = estimate_scattering_intensity(samples, [0.7]).values[0]
    ok = all(0.2 <= m <= 0.3 for m in masses) and 0.9 <= level <= 1.1
    record(acceptance_log, 6, ok,
           f"cox: atom masses {masses[0]:.4f}, {masses[1]:.4f} (in [0.2, 0.3]); level at 0.7 = {level:.4f}")


def test_criterion_07_gaf_analytics(acceptance_log):
    g = RadialProfile(2, gaf_g, "gaf_g", cutoff=6.0, scale=0.25)
    s = np.linspace(0.0, 2.0, 21)
    a = max(abs(gaf_h(v) - radial_fourier(g, v)) for v in s)
    tight = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=400)
    b = 0.0
    for alpha in (0.0, 0.5, 1.0, 2.0, 3.0):
        prof = RadialProfile(1, lambda u, a=alpha: np.asarray(u) ** a * gaf_phi(u), "m",
                             cutoff=gaf_tail_cutoff(alpha, 1e-13), scale=0.5)
        # closed form evaluated with scipy/math, independent of the package helper
        target = 1.0 if alpha == 0.0 else alpha * (1.0 - alpha) * math.gamma(alpha + 1.0) * special.zeta(alpha + 1.0)
        b = max(b, abs(0.5 * radial_fourier(prof, 0.0, tight) - target))
    c = max(abs(gaf_kpoint([0.0, r]) - (1.0 - gaf_g(r))) for r in (0.25, 0.5, 1.0, 1.5))
    grid = np.linspace(0.0, 3.0, 301)
    dens = 1.0 - gaf_h(grid)
    peak_at = grid[np.argmax(dens)]
    d_ok = dens.max() > 1.0 and 0.8 <= peak_at <= 1.3
    ok = a <= 1e-6 and b <= 1e-8 and c <= 1e-8 and d_ok
    record(acceptance_log, 7, ok,
           f"gaf: (a) {a:.1e}, (b) {b:.1e}, (c) {c:.1e}, (d) max 1-h = {dens.max():.5f} at s={peak_at:.2f}")


def test_criterion_08_gaf_sampling(acceptance_log):
    samples, elapsed = timed_samples("gaf")
    mean = np.mean([s.count for s in samples])
    gamma, _ = diffraction_pair(ProcessSpec(ProcessKind.GAF))
    curve = estimate_pair_correlation(samples, 2.5, 48).restrict(0.1, 2.5)
    rep = compare(curve, gamma)
    target = 25.0 * np.pi
    ok = abs(mean - target) <= 0.02 * target and rep.rms <= 0.05 and elapsed <= 1200.0
    record(acceptance_log, 8, ok,
           f"gaf zeros: mean count {mean:.2f} vs {target:.2f} (2%), rms={rep.rms:.4f} (<=0.05), runtime={elapsed:.0f}s")


# golden values of rho_3(0, 1/3, 1/2), first computed with an independent
# mpmath evaluation of the two 3x3 determinants (see test_analytic.py)
RHO3_CPA = 0.6201039764865661
RHO3_CPB = 0.6414772916373452


def test_criterion_09_non_uniqueness(acceptance_log):
    x = np.linspace(-5.0, 5.0, 1000)[:, None]
    ka, kb = kernel_function(KernelSpec("cpA")), kernel_function(KernelSpec("cpB"))
    dev = float(np.max(np.abs(np.abs(ka(x)) ** 2 - np.abs(kb(x)) ** 2)))
    pts = [0.0, 1.0 / 3.0, 0.5]
    ra = kpoint_determinantal(KernelSpec("cpA"), pts)
    rb = kpoint_determinantal(KernelSpec("cpB"), pts)
    ok = dev <= 1e-12 and abs(ra - rb) > 1e-6 and abs(ra - RHO3_CPA) <= 1e-12 and abs(rb - RHO3_CPB) <= 1e-12
    record(acceptance_log, 9, ok, f"|K1|^2 vs |K2|^2 dev={dev:.1e}; rho3: {ra:.10f} vs {rb:.10f}")


def test_criterion_10_invariants(acceptance_log):
    worst_int = max(integral_of_g(k) for k in CATALOG)
    t = np.linspace(0.0, 6.0, 601)
    det_ok = perm_ok = True
    for k in CATALOG:
        gh = g_hat_profile(k)(t)
        det_ok &= bool(np.all(1.0 - gh >= -1e-12) and np.all(1.0 - gh <= 1.0 + 1e-12))
        perm_ok &= bool(np.all(1.0 + gh >= 1.0 - 1e-12))
    classes = {
        "sine": bool(is_self_reproducing(KernelSpec("sine"))),
        "ball": bool(is_self_reproducing(KernelSpec("ball", dimension=2))),
        "gauss": bool(is_self_reproducing(KernelSpec("gauss"))),
        "exp": bool(is_self_reproducing(KernelSpec("exp"))),
    }
    cls_ok = classes == {"sine": True, "ball": True, "gauss": False, "exp": False}
    worst_inv = 0.0
    for spec, radii, freqs in (
        (KernelSpec("sine"), [0.3, 0.7, 1.3, 2.2], [0.2, 0.5, 0.8, 1.5]),
        (KernelSpec("ball", dimension=2), [0.3, 0.9, 1.7], [0.2, 0.6, 0.9]),
        (KernelSpec("gauss", dimension=2), [0.2, 0.6, 1.1], [0.3, 0.8, 1.4]),
        (KernelSpec("exp", alpha=0.5), [0.2, 0.6, 1.1], [0.3, 0.8, 1.4]),
    ):
        g, gh = g_profile(spec), g_hat_profile(spec)
        worst_inv = max(worst_inv, max(abs(radial_fourier(gh, r) - float(g(r))) for r in radii))
        worst_inv = max(worst_inv, max(abs(radial_fourier(g, s) - float(gh(s))) for s in freqs))
    ok = worst_int <= 1.0 + 1e-8 and det_ok and perm_ok and cls_ok and worst_inv <= 1e-6
    record(acceptance_log, 10, ok,
           f"max int g = {worst_int:.10f}, density bounds {det_ok and perm_ok}, classes {classes}, "
           f"inversion dev {worst_inv:.1e}")
