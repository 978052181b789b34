"""Batch command-line front end.

Usage::

    sp-soliton [CONFIG] [--key value ...]

CONFIG is a flat ``key = value`` file (``#`` starts a comment). Flags use
the same key names and override the file. Exit codes: 0 success, 2 no
solitary wave exists for the parameters, 1 any other failure.
"""
from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass
import json
import math
import os
from pathlib import Path
import sys

import numpy as np

from .diagnostics import DEFAULT_SEED, decay_fit, diagnose, origin_expansion, v_bounds
from .energy_functional import multiplier_residual, virial_residual
from .errors import NoSolitaryWaveError, SolitonError
from .poisson_radial import electric_potential
from .radial_eigensolver import build_effective_potential
from .radial_grid import ProblemSpec, build_grid
from .scf_solver import (DEFAULT_H, DEFAULT_R_MAX, ScfConfig, SolitonState,
                         default_grid, gradient_flow_ground_state,
                         hydrogenic_guess, solve, spectrum_sweep)

MODES = ("solve", "spectrum", "zero-potential", "verify", "convergence-study")
EXIT_OK, EXIT_FAIL, EXIT_NO_WAVE = 0, 1, 2
MIN_STUDY_N = 64
R_MAX_FACTOR = 1.5

_KEYS = {
    "z": float,
    "n_charge": float,
    "k_index": int,
    "grid.n": int,
    "grid.r_max": float,
    "scf.mixing": float,
    "scf.tol_omega": float,
    "scf.tol_u": float,
    "scf.max_iter": int,
    "scf.backend": str,
    "mode": str,
    "output_dir": str,
    "seed": int,
}

_DEFAULTS = {
    "z": 1.0,
    "n_charge": 1.0,
    "k_index": 1,
    "grid.n": None,
    "grid.r_max": DEFAULT_R_MAX,
    "scf.mixing": 0.5,
    "scf.tol_omega": 1e-9,
    "scf.tol_u": 1e-7,
    "scf.max_iter": 200,
    "scf.backend": "matrix",
    "mode": "solve",
    "output_dir": ".",
    "seed": DEFAULT_SEED,
}


class ConfigError(SolitonError):
    """Malformed configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs.

    ``grid`` is the k = 1 base grid; branch k runs on n k^2 nodes over
    r_max k^2.
    """

    problem: ProblemSpec
    scf: ScfConfig
    grid: tuple[int, float]
    mode: str
    output_dir: Path
    seed: int


def _convert(key: str, raw: str, where: str):
    try:
        return _KEYS[key](raw)
    except ValueError:
        raise ConfigError(f"{where}: bad value {raw!r} for {key}") from None


def parse_config_text(text: str, name: str = "config") -> dict:
    """Parse ``key = value`` lines; errors name the offending line."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        where = f"{name}:{lineno}"
        if "=" not in body:
            raise ConfigError(f"{where}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if not raw:
            raise ConfigError(f"{where}: missing value for {key}")
        values[key] = _convert(key, raw, where)
    return values


def build_run_config(values: dict) -> RunConfig:
    v = dict(_DEFAULTS)
    v.update(values)
    if v["mode"] not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {v['mode']!r}")
    r_max = float(v["grid.r_max"])
    n = v["grid.n"] if v["grid.n"] is not None else int(round(r_max / DEFAULT_H))
    problem = ProblemSpec(v["z"], v["n_charge"], v["k_index"])
    scf = ScfConfig(v["scf.mixing"], v["scf.tol_omega"], v["scf.tol_u"],
                    v["scf.max_iter"], v["scf.backend"])
    return RunConfig(problem, scf, (int(n), r_max), v["mode"],
                     Path(v["output_dir"]), int(v["seed"]))


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sp-soliton",
        description="Radial solitary waves of the Schrodinger-Poisson system "
                    "with a Coulomb nucleus.")
    p.add_argument("config", nargs="?", help="flat key = value configuration file")
    for key, kind in _KEYS.items():
        extra = {"choices": MODES} if key == "mode" else {}
        p.add_argument(f"--{key}", dest=key, type=kind, default=None, **extra)
    return p


def threads() -> int:
    """Worker pool size from SP_SOLITON_THREADS (default 1)."""
    raw = os.environ.get("SP_SOLITON_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _grid_for(cfg: RunConfig, k: int):
    n, r_max = cfg.grid
    return default_grid(k, n, r_max)


def _scalar(x):
    return None if x is None or not math.isfinite(x) else float(x)


def result_record(state: SolitonState) -> dict:
    """Scalars written to result.json, in schema order."""
    a1, b1, _ = origin_expansion(state)
    try:
        slope, expected = decay_fit(state)
    except SolitonError:
        slope, expected = None, (-math.sqrt(-2.0 * state.omega)
                                 if state.omega < 0 else None)
    _, _, charge = v_bounds(state)
    e = state.energy
    spec = state.spec
    return {
        "omega": state.omega,
        "J": e.total_j,
        "kinetic": e.kinetic,
        "hartree": e.hartree,
        "coulomb": e.coulomb,
        "virial_residual": virial_residual(state),
        "multiplier_residual": multiplier_residual(state),
        "decay_slope": _scalar(slope),
        "decay_slope_expected": _scalar(expected),
        "a1": a1,
        "b1": b1,
        "far_charge": charge,
        "iterations": state.iterations,
        "converged": state.converged,
        "k_index": state.k_index,
        "z": spec.z,
        "n_charge": spec.n_charge,
        "grid": {"n": state.grid.n, "r_max": state.grid.r_max},
    }


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n")


def write_solution(out: Path, state: SolitonState) -> None:
    """solution.csv (one row per node) and result.json."""
    out.mkdir(parents=True, exist_ok=True)
    r = state.grid.nodes
    q = -state.phi.values - state.spec.z / r
    table = np.column_stack((r, state.u.values, state.phi.values,
                             state.U.values, state.Vred.values, q))
    np.savetxt(out / "solution.csv", table, fmt="%.17g", delimiter=",",
               header="r,u,phi,U,V,Q", comments="")
    _write_json(out / "result.json", result_record(state))


def load_solution(out: Path) -> SolitonState:
    """Rebuild a state from solution.csv and result.json."""
    out = Path(out)
    meta = json.loads((out / "result.json").read_text())
    data = np.loadtxt(out / "solution.csv", delimiter=",", skiprows=1, ndmin=2)
    grid = build_grid(meta["grid"]["n"], meta["grid"]["r_max"])
    spec = ProblemSpec(meta["z"], meta["n_charge"], meta["k_index"])
    return SolitonState.from_field(grid.field(data[:, 1]), meta["omega"], spec,
                                   meta["iterations"], meta["converged"])


def _solve_mode(cfg: RunConfig) -> int:
    state = solve(cfg.problem, cfg.scf, _grid_for(cfg, cfg.problem.k_index))
    write_solution(cfg.output_dir, state)
    print(f"omega = {state.omega:.12g} after {state.iterations} iterations")
    return EXIT_OK


def _spectrum_mode(cfg: RunConfig) -> int:
    n, r_max = cfg.grid
    states = spectrum_sweep(cfg.problem, cfg.scf, cfg.problem.k_index, n, r_max,
                            workers=threads())
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    with open(cfg.output_dir / "spectrum.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "omega", "J", "virial_residual"])
        for s in states:
            w.writerow([s.k_index, repr(s.omega), repr(s.energy.total_j),
                        repr(virial_residual(s))])
    omegas = [s.omega for s in states]
    print("omega_k = " + ", ".join(f"{o:.10g}" for o in omegas))
    ok = all(o < 0 for o in omegas) and all(a < b for a, b in zip(omegas, omegas[1:]))
    return EXIT_OK if ok else EXIT_FAIL


def _zero_potential_mode(cfg: RunConfig) -> int:
    grid = _grid_for(cfg, cfg.problem.k_index)
    phi = electric_potential(hydrogenic_guess(grid, cfg.problem))
    q = build_effective_potential(phi, cfg.problem)
    print(f"min effective potential = {float(np.min(q.q.values)):.6g}")
    return _solve_mode(cfg)


def _verify_mode(cfg: RunConfig) -> int:
    state = solve(cfg.problem, cfg.scf, _grid_for(cfg, cfg.problem.k_index))
    write_solution(cfg.output_dir, state)
    report = diagnose(state, isolation=state.k_index == 1, cfg=cfg.scf, seed=cfg.seed)
    checks = {
        "omega_negative": state.omega < 0,
        "virial_residual": virial_residual(state) <= 1e-5,
        "multiplier_residual": multiplier_residual(state) <= 1e-6,
        "decay_slope": abs(report.decay_slope / report.decay_slope_expected - 1) <= 0.02,
        "far_charge": abs(report.far_charge - cfg.problem.n_charge) <= 1e-3,
        "origin": report.u2pp_check <= 1e-2,
        "vprime_nonnegative": report.vprime_min >= -1e-12,
    }
    if report.schwartz_exponents:
        checks["schwartz"] = all(e < 0 for e in report.schwartz_exponents)
    if report.isolation is not None and report.isolation.passed is not None:
        checks["isolation"] = report.isolation.passed
    if state.k_index == 1:
        flow = gradient_flow_ground_state(cfg.problem, grid=state.grid)
        checks["gradient_flow_agrees"] = abs(flow.omega - state.omega) <= 1e-5
    data = {
        "checks": {k: bool(v) for k, v in checks.items()},
        "u2pp_check": report.u2pp_check,
        "vprime_min": report.vprime_min,
        "vprime_r2_max": report.vprime_r2_max,
        "schwartz_exponents": report.schwartz_exponents,
        "isolation": None if report.isolation is None else {
            "du": report.isolation.du, "d_omega": report.isolation.d_omega,
            "noise_rel": report.isolation.noise_rel, "seed": report.isolation.seed},
    }
    _write_json(cfg.output_dir / "verify.json", data)
    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


def richardson_order(omegas) -> float | None:
    """Observed order from three solves at spacings h, h/2, h/4."""
    a, b, c = omegas
    if b == c or a == b or (a - b) / (b - c) <= 0:
        return None
    return math.log2((a - b) / (b - c))


def convergence_study(cfg: RunConfig, workers: int = 1) -> list[dict]:
    """Solve at n/4, n/2, n for r_max and 1.5 r_max (same spacings).

    Returns one row per solve with the group's observed order attached.
    """
    n, r_max = cfg.grid
    if n < MIN_STUDY_N:
        raise ConfigError(f"convergence study needs grid.n >= {MIN_STUDY_N}, got {n}")
    k = cfg.problem.k_index
    jobs = []
    for factor in (1.0, R_MAX_FACTOR):
        for div in (4, 2, 1):
            jobs.append((int(round(n * factor / div)), r_max * factor))

    def one(job):
        nn, rr = job
        return solve(cfg.problem, cfg.scf, default_grid(k, nn, rr)).omega

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            omegas = list(pool.map(one, jobs))
    else:
        omegas = [one(j) for j in jobs]
    rows = []
    for g in range(2):
        group = omegas[3 * g:3 * g + 3]
        order = richardson_order(group)
        for (nn, rr), om in zip(jobs[3 * g:3 * g + 3], group):
            rows.append({"n": nn, "r_max": rr, "omega": om, "richardson_order": order})
    return rows


def _convergence_mode(cfg: RunConfig) -> int:
    rows = convergence_study(cfg, threads())
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    with open(cfg.output_dir / "convergence.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "r_max", "omega", "richardson_order"])
        for row in rows:
            order = row["richardson_order"]
            w.writerow([row["n"], repr(row["r_max"]), repr(row["omega"]),
                        "" if order is None else repr(order)])
    for row in rows:
        print(f"n={row['n']} r_max={row['r_max']:g} omega={row['omega']:.12g}")
    return EXIT_OK


_DISPATCH = {
    "solve": _solve_mode,
    "spectrum": _spectrum_mode,
    "zero-potential": _zero_potential_mode,
    "verify": _verify_mode,
    "convergence-study": _convergence_mode,
}


def run(cfg: RunConfig) -> int:
    """Execute one configured run and return its exit code."""
    try:
        return _DISPATCH[cfg.mode](cfg)
    except NoSolitaryWaveError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NO_WAVE
    except (SolitonError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        values = {}
        if args.config:
            path = Path(args.config)
            values = parse_config_text(path.read_text(), str(path))
        for key in _KEYS:
            flag = getattr(args, key)
            if flag is not None:
                values[key] = flag
        cfg = build_run_config(values)
    except (SolitonError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
