"""Command-line entry point: ``diffrakt {analytic,sample,estimate,verify}``."""

from __future__ import annotations

import argparse
import json
import math
import subprocess
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import InvalidProcessError, ProcessKind, ProcessSpec, diffraction_pair
from .estimators import (
    EstimatorError,
    estimate_pair_correlation,
    estimate_scattering_intensity,
    write_curve_csv,
)
from .kernels import Family, KernelSpec, parse_family
from .measures import atoms_csv, density_csv
from .numerics import QuadratureError
from .parallel import map_ordered, worker_count
from .samplers import (
    SamplerError,
    Window,
    realization_seeds,
    sample_cox_cosine,
    sample_dpp_spectral,
    sample_gaf_zeros,
    sample_ginibre,
    sample_permanental,
    sample_poisson,
    sample_renewal_dpp,
    write_points_csv,
)
from .verify import MUTATIONS, run_invariants

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4

# flag name -> (type, default)
OPTIONS = {
    "process": (str, "sine"),
    "p": (float, 1.0),
    "alpha": (float, 0.5),
    "d": (int, None),
    "N": (int, None),
    "window": (str, None),
    "seed": (int, 42),
    "realizations": (int, 1),
    "bins": (int, 64),
    "rmax": (float, None),
    "tgrid": (str, "0:3:301"),
    "bandwidth": (float, 0.0),
    "out": (str, "."),
}

SPECIAL_PROCESSES = ("gaf", "cox_cosine", "poisson", "renewal")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


@dataclass(frozen=True)
class RunConfig:
    process: str
    p: float
    alpha: float
    d: int | None
    N: int | None
    window: str | None
    seed: int
    realizations: int
    bins: int
    rmax: float | None
    tgrid: str
    bandwidth: float
    out: str

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in OPTIONS}


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` or a comma-separated list."""
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            grid = np.linspace(float(start), float(stop), int(count))
        else:
            grid = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise ConfigError(f"malformed grid {text!r}") from exc
    if grid.size == 0:
        raise ConfigError("grid is empty")
    return grid


def _process_parts(name: str) -> tuple[str, str | None]:
    """(kind, family) from ``sine``, ``perm:gauss``, ``gaf`` ..."""
    name = name.strip()
    if name in SPECIAL_PROCESSES:
        return name, None
    if name.startswith("perm:"):
        return "permanental", parse_family(name[5:]).value
    return "determinantal", parse_family(name).value


def kernel_spec(cfg: RunConfig) -> KernelSpec | None:
    kind, family = _process_parts(cfg.process)
    if kind == "renewal":
        return KernelSpec(Family.EXP, thinning_p=cfg.p, alpha=cfg.alpha)
    if family is None:
        return None
    fam = parse_family(family)
    d = cfg.d if cfg.d is not None else (2 if fam is Family.GINIBRE else 1)
    return KernelSpec(fam, thinning_p=cfg.p, dimension=d, alpha=cfg.alpha)


def process_spec(cfg: RunConfig) -> ProcessSpec:
    kind, _ = _process_parts(cfg.process)
    kernel = kernel_spec(cfg)
    if kind in ("determinantal", "renewal"):
        return ProcessSpec(ProcessKind.DETERMINANTAL, kernel)
    if kind == "permanental":
        return ProcessSpec(ProcessKind.PERMANENTAL, kernel)
    if kind == "poisson":
        return ProcessSpec(ProcessKind.POISSON, dimension=cfg.d or 1)
    return ProcessSpec(ProcessKind(kind))


def default_window(cfg: RunConfig, dimension: int) -> Window:
    if cfg.window:
        try:
            return Window.parse(cfg.window)
        except ValueError as exc:
            raise ConfigError(f"malformed window {cfg.window!r}: {exc}") from exc
    kind, _ = _process_parts(cfg.process)
    if kind == "gaf":
        return Window.disk(5.0)
    if dimension == 1:
        return Window.interval(0.0, 500.0)
    return Window.disk(10.0)


def make_sampler(cfg: RunConfig):
    """``seed -> PointConfiguration`` for the configured process."""
    spec = process_spec(cfg)
    kind, _ = _process_parts(cfg.process)
    window = default_window(cfg, spec.dimension)
    if window.dimension != spec.dimension:
        raise ConfigError(f"window {window.describe()} does not match dimension {spec.dimension}")
    kernel = spec.kernel
    if kind == "renewal":
        if cfg.p != 1.0:
            raise ConfigError("the renewal sampler has no thinning parameter")
        return lambda s: sample_renewal_dpp(cfg.alpha, window, s)
    if kind == "gaf":
        n = cfg.N if cfg.N is not None else 256
        return lambda s: sample_gaf_zeros(window, n, s)
    if kind == "cox_cosine":
        return lambda s: sample_cox_cosine(window, s)
    if kind == "poisson":
        return lambda s: sample_poisson(window, 1.0, s)
    if kind == "permanental":
        return lambda s: sample_permanental(kernel, window, None, s)
    if kernel.family is Family.GINIBRE:
        if cfg.p != 1.0:
            raise ConfigError("the Ginibre matrix model is sampled at p = 1 only")
        return lambda s: sample_ginibre(window, s, N=cfg.N)
    # --N selects the Nystrom discretization with that many nodes per axis
    method = "periodic" if cfg.N is None else "nystrom"
    return lambda s: sample_dpp_spectral(kernel, window, cfg.N, s, method=method)


def _version() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            capture_output=True, text=True, timeout=5, cwd=Path(__file__).parent,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _write_manifest(out: Path, command: str, cfg: RunConfig, files: list[str], started: float) -> None:
    manifest = {
        "command": command,
        "config": cfg.as_dict(),
        "version": _version(),
        "files": files,
        "wall_time_s": round(time.time() - started, 3),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def cmd_analytic(cfg: RunConfig) -> list[str]:
    spec = process_spec(cfg)
    gamma, gamma_hat = diffraction_pair(spec)
    grid = parse_grid(cfg.tgrid)
    if np.any(grid < 0):
        raise ConfigError("the curve grid must be non-negative")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "gamma_density.csv").write_text(density_csv(gamma, grid))
    (out / "diffraction_density.csv").write_text(density_csv(gamma_hat, grid))
    (out / "atoms.csv").write_text(atoms_csv(gamma_hat))
    return ["gamma_density.csv", "diffraction_density.csv", "atoms.csv"]


def _draw(cfg: RunConfig):
    if cfg.realizations < 1:
        raise ConfigError("realizations must be at least 1")
    sampler = make_sampler(cfg)
    seeds = realization_seeds(cfg.seed, cfg.realizations)
    return map_ordered(sampler, seeds, worker_count())


def cmd_sample(cfg: RunConfig) -> list[str]:
    samples = _draw(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(len(samples) - 1)))
    files = []
    for i, config in enumerate(samples):
        name = f"points_{i:0{width}d}.csv"
        write_points_csv(config, out / name)
        files.append(name)
    return files


def cmd_estimate(cfg: RunConfig) -> list[str]:
    samples = _draw(cfg)
    window = samples[0].window
    rmax = cfg.rmax if cfg.rmax is not None else min(3.0, 0.5 * window.inradius)
    pair = estimate_pair_correlation(samples, rmax, cfg.bins, worker_count())
    t = parse_grid(cfg.tgrid)
    t = t[t >= 2.0 / window.diameter]
    if t.size == 0:
        raise ConfigError("no wavenumber of the grid clears 2/diam(W)")
    scat = estimate_scattering_intensity(samples, t, cfg.bandwidth, worker_count())
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_curve_csv(pair, out / "pair_correlation.csv")
    write_curve_csv(scat, out / "scattering.csv")
    return ["pair_correlation.csv", "scattering.csv"]


def cmd_verify(mutate: str | None) -> int:
    results = run_invariants(mutate)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} invariants passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diffrakt", description="Autocorrelation and diffraction of point processes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in (
        ("analytic", "write closed-form autocorrelation/diffraction densities and atoms"),
        ("sample", "write one point CSV per realization"),
        ("estimate", "write empirical pair correlation and scattering intensity"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="JSON file with any of the flags below; explicit flags win")
        p.add_argument("--process", help="sine|ball|gauss|exp|cpA|cpB|ginibre, perm:<family>, renewal, gaf, cox_cosine, poisson")
        p.add_argument("--p", type=float, help="thinning parameter")
        p.add_argument("--alpha", type=float, help="exp/renewal parameter")
        p.add_argument("--d", type=int, help="dimension for ball/gauss/poisson")
        p.add_argument("--N", type=int, help="Ginibre matrix size, GAF truncation degree or Nystrom grid size")
        p.add_argument("--window", help="interval:a,b | rect:ax,bx,ay,by | disk:r[,cx,cy]")
        p.add_argument("--seed", type=int)
        p.add_argument("--realizations", type=int)
        p.add_argument("--bins", type=int)
        p.add_argument("--rmax", type=float)
        p.add_argument("--tgrid", help="start:stop:count or comma list")
        p.add_argument("--bandwidth", type=float, help="smoothing band of the scattering estimate")
        p.add_argument("--out", help="output directory")
    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--mutate", choices=sorted(MUTATIONS), help="inject a deliberate fault")
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values = {k: default for k, (_, default) in OPTIONS.items()}
    if ns.config:
        try:
            loaded = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from exc
        unknown = set(loaded) - set(OPTIONS)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        for k, v in loaded.items():
            typ = OPTIONS[k][0]
            values[k] = None if v is None else typ(v)
    for k in OPTIONS:
        v = getattr(ns, k, None)
        if v is not None:
            values[k] = v
    return RunConfig(**values)


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None) -> int:
    started = time.time()
    try:
        ns = build_parser().parse_args(argv)
        if ns.command == "verify":
            return cmd_verify(ns.mutate)
        cfg = resolve_config(ns)
        command = {"analytic": cmd_analytic, "sample": cmd_sample, "estimate": cmd_estimate}[ns.command]
        files = command(cfg)
        _write_manifest(Path(cfg.out), ns.command, cfg, files, started)
        return EXIT_OK
    except (ConfigError, InvalidProcessError, SamplerError, EstimatorError, ValueError) as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, str(exc))
    except (QuadratureError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERIC, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
