"""Command-line interface: convergence studies and full solves.

Two subcommands:

* ``study`` runs a built-in problem through one solver stage over lists of
  orders and mesh sizes, printing a convergence table (error and observed
  rate per refinement) and optionally writing it as CSV with columns
  M,h,tau,error,rate.
* ``solve`` runs the full solver on a built-in problem and writes the
  fields on a sub-lattice as CSV with columns
  i,j,k,x,y,z,u1,u2,u3,P,dPx,dPy,dPz.

Options may come from a config file of key=value lines (``--config``);
explicit flags win over the file.  Output is deterministic: identical
inputs produce byte-identical files.

Exit codes: 0 on success, 2 for command-line usage errors, 3 for invalid
configuration (unknown problem, inconsistent lists, malformed config file),
4 for runtime failures inside the solver.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .grid import SeparatedFunction3, TimeGrid, UniformGrid3, separated_divergence, time_margin
from .harmonic import HarmonicRule, grad_pressure_grid_separated, pressure_grid_separated
from .heat import SpaceTimeDensity, heat_grid_separated
from .poisson import CubatureParams, poisson_grid_separated
from .problems import PROBLEMS
from .quadrature import DEParams, de_halfline_rule, mori_finite_rule
from .stokes import StokesProblem, solve

__all__ = ["main"]

STAGES = ("propagator", "pressure", "gradient", "heat", "full")


class ConfigError(Exception):
    pass


def _parse_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, val = line.split("=", 1)
                out[key.strip()] = val.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return out


def _merged(args: argparse.Namespace, config: dict[str, str], key: str, default=None):
    val = getattr(args, key.replace("-", "_"), None)
    if val is not None:
        return val
    if key in config:
        return config[key]
    return default


def _int_list(text, what: str) -> list[int]:
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).split(",") if v != ""]
    except ValueError as exc:
        raise ConfigError(f"{what} must be a comma-separated integer list, got {text!r}") from exc


def _float_triplet(text, what: str) -> np.ndarray:
    try:
        parts = [float(v) for v in str(text).split(",")]
    except ValueError:
        parts = []
    if len(parts) != 3:
        raise ConfigError(f"{what} must be three comma-separated reals, got {text!r}")
    return np.array(parts)


def _fmt_err(v: float) -> str:
    return f"{v:.3g}"


def _grid_for(hinv: int, radius: float) -> UniformGrid3:
    return UniformGrid3.for_support(1.0 / hinv, radius)


def _point_indices(grid: UniformGrid3, x: np.ndarray):
    k = [grid.index_of(float(v)) for v in x]
    return ([k[0]], [k[1]], [k[2]])


def _study_rows(args, config):
    problem_name = _merged(args, config, "problem")
    if problem_name is None:
        raise ConfigError("study needs a problem (--problem or config)")
    if problem_name not in PROBLEMS:
        raise ConfigError(
            f"unknown problem {problem_name!r}; available: {', '.join(sorted(PROBLEMS))}")
    prob = PROBLEMS[problem_name]

    stage = _merged(args, config, "stage", prob.stages[0])
    if stage not in STAGES:
        raise ConfigError(f"unknown stage {stage!r}; available: {', '.join(STAGES)}")
    if stage not in prob.stages:
        raise ConfigError(
            f"problem {problem_name!r} supports stages {', '.join(prob.stages)}, not {stage!r}")

    orders = _int_list(_merged(args, config, "orders", "1,2,3,4"), "orders")
    hinvs = _int_list(_merged(args, config, "hinv", "10,20,40"), "hinv")
    tauinvs = _int_list(_merged(args, config, "tauinv", ""), "tauinv")
    t_eval = float(_merged(args, config, "time", 1.0))
    radius = float(_merged(args, config, "radius", 6.5))
    d = float(_merged(args, config, "d", prob.defaults.get("d", 4.0)))
    d0 = float(_merged(args, config, "d0", prob.defaults.get("d0", d)))
    nu = float(_merged(args, config, "nu", prob.defaults.get("nu", 1.0)))
    component = int(_merged(args, config, "component", prob.defaults.get("component", 1)))
    axis = int(_merged(args, config, "axis", prob.defaults.get("axis", 2)))
    point = _float_triplet(_merged(args, config, "point", "1.2,1.2,1.2"), "point")

    needs_tau = stage in ("heat", "full")
    if needs_tau:
        if not tauinvs:
            raise ConfigError(f"stage {stage!r} needs --tauinv")
        if len(tauinvs) != len(hinvs):
            raise ConfigError("hinv and tauinv lists must have equal length")
    if not (1 <= component <= 3) or not (1 <= axis <= 3):
        raise ConfigError("component and axis must be 1, 2 or 3")

    de_kappa = _merged(args, config, "de-kappa")
    de_n = _merged(args, config, "de-n")
    mori_kappa = float(_merged(args, config, "mori-kappa", 0.002))
    mori_n = int(_merged(args, config, "mori-n", 3800))
    if de_kappa is not None or de_n is not None:
        de_params = DEParams(kappa=float(de_kappa or 0.0009), n=int(de_n or 2200))
    else:
        de_params = DEParams()

    rows = []
    for m in orders:
        prev_err = None
        prev_h = None
        for idx, hinv in enumerate(hinvs):
            tauinv = tauinvs[idx] if needs_tau else None
            params = CubatureParams(m=m, d=d, nu=nu, d0=d0)
            grid = _grid_for(hinv, radius)
            err = _stage_error(prob, stage, params, grid, tauinv, t_eval, point,
                               component, axis, de_params, mori_kappa, mori_n)
            h = 1.0 / hinv
            if prev_err is not None and err > 0 and prev_err > 0:
                rate = float(np.log(prev_err / err) / np.log(prev_h / h))
            else:
                rate = None
            rows.append({"M": m, "h": h,
                         "tau": (1.0 / tauinv) if tauinv else None,
                         "error": err, "rate": rate})
            prev_err, prev_h = err, h
    return rows


def _stage_error(prob, stage, params, grid, tauinv, t_eval, point, component,
                 axis, de_params, mori_kappa, mori_n) -> float:
    h = grid.h
    if stage == "propagator":
        out = _point_indices(grid, point)
        g = prob.g[component - 1]
        val = poisson_grid_separated(g, params, grid, t_eval, out_indices=out)[0, 0, 0]
        exact = prob.exact_velocity(point, t_eval, nu=params.nu)[component - 1]
        return abs(val - exact)

    if stage in ("pressure", "gradient"):
        out = _point_indices(grid, point)
        f_density = separated_divergence(prob.f)
        hrule = HarmonicRule(params, h, rule=de_halfline_rule(de_params))
        if stage == "pressure":
            val = pressure_grid_separated(f_density, hrule, grid, t_eval, out_indices=out)[0, 0, 0]
            exact = prob.exact_pressure(point, t_eval)
        else:
            val = grad_pressure_grid_separated(
                f_density, hrule, grid, t_eval, out_indices=out)[axis - 1, 0, 0, 0]
            exact = prob.exact_grad_pressure(point, t_eval)[axis - 1]
        return abs(val - exact)

    if stage == "heat":
        out = _point_indices(grid, point)
        tau = 1.0 / tauinv
        margin = time_margin(params.d0_effective)
        tgrid = TimeGrid(tau=tau, i_min=-margin,
                         i_max=int(round(t_eval / tau)) + margin)
        phi_c = prob.phi[component - 1]
        if phi_c is None:
            return 0.0
        phi = SpaceTimeDensity.from_separated(grid, tgrid, phi_c)
        rule = mori_finite_rule(t_eval, kappa=mori_kappa, n=mori_n)
        val = heat_grid_separated(phi, params, grid, t_eval, out_indices=out, rule=rule)[0, 0, 0]
        exact = prob.exact_heat(point, t_eval)[component - 1]
        return abs(val - exact)

    # full: sup norm of the velocity error over a probe sub-lattice
    tau = 1.0 / tauinv
    margin = time_margin(params.d0_effective)
    tgrid = TimeGrid(tau=tau, i_min=-margin, i_max=int(round(t_eval / tau)) + margin)
    box, step_len = 2.0, 0.4
    step = step_len / h
    if abs(step - round(step)) > 1e-9:
        raise ConfigError(f"probe step {step_len} is not a multiple of h = {h}")
    probe = np.arange(-int(round(box / h)), int(round(box / h)) + 1, int(round(step)))
    sp = StokesProblem(params=params, g=prob.g, f=prob.f)
    sol = solve(sp, grid, tgrid, [t_eval], out_indices=(probe, probe, probe),
                halfline_rule=de_halfline_rule(de_params),
                mori_kappa=mori_kappa, mori_n=mori_n)
    c = h * probe
    x = np.stack(np.meshgrid(c, c, c, indexing="ij"))
    exact = np.stack(prob.exact_velocity(x, t_eval, nu=params.nu))
    return float(np.abs(sol.u[0] - exact).max())


def _print_study(rows, csv_path: str | None):
    header = f"{'M':>2s}  {'h':>10s}  {'tau':>10s}  {'error':>10s}  {'rate':>6s}"
    print(header)
    print("-" * len(header))
    for row in rows:
        tau_s = f"{row['tau']:.6g}" if row["tau"] is not None else "-"
        rate_s = f"{row['rate']:.3g}" if row["rate"] is not None else "-"
        print(f"{row['M']:>2d}  {row['h']:>10.6g}  {tau_s:>10s}  "
              f"{_fmt_err(row['error']):>10s}  {rate_s:>6s}")
    if csv_path:
        lines = ["M,h,tau,error,rate"]
        for row in rows:
            tau_s = f"{row['tau']:.12g}" if row["tau"] is not None else ""
            rate_s = f"{row['rate']:.6f}" if row["rate"] is not None else ""
            lines.append(f"{row['M']},{row['h']:.12g},{tau_s},{row['error']:.12e},{rate_s}")
        with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {csv_path}")


def _run_solve(args, config) -> int:
    problem_name = _merged(args, config, "problem")
    if problem_name is None:
        raise ConfigError("solve needs a problem (--problem or config)")
    if problem_name not in PROBLEMS:
        raise ConfigError(
            f"unknown problem {problem_name!r}; available: {', '.join(sorted(PROBLEMS))}")
    prob = PROBLEMS[problem_name]
    if prob.g is None and prob.f is None:
        raise ConfigError(f"problem {problem_name!r} has no solver data (stages: "
                          f"{', '.join(prob.stages)})")

    hinv = int(_merged(args, config, "hinv", 10))
    tauinv = int(_merged(args, config, "tauinv", 40))
    t_eval = float(_merged(args, config, "time", 1.0))
    order = int(_merged(args, config, "order", 2))
    radius = float(_merged(args, config, "radius", 6.5))
    box = float(_merged(args, config, "box", 2.0))
    d = float(_merged(args, config, "d", prob.defaults.get("d", 4.0)))
    d0 = float(_merged(args, config, "d0", prob.defaults.get("d0", d)))
    nu = float(_merged(args, config, "nu", prob.defaults.get("nu", 1.0)))
    csv_path = _merged(args, config, "csv")
    if csv_path is None:
        raise ConfigError("solve needs --csv PATH for the field output")

    params = CubatureParams(m=order, d=d, nu=nu, d0=d0)
    grid = _grid_for(hinv, radius)
    h = grid.h
    tau = 1.0 / tauinv
    margin = time_margin(params.d0_effective)
    tgrid = TimeGrid(tau=tau, i_min=-margin, i_max=int(round(t_eval / tau)) + margin)
    k_box = min(int(round(box / h)), grid.half_extent)
    probe = np.arange(-k_box, k_box + 1)
    sp = StokesProblem(params=params, g=prob.g, f=prob.f)
    sol = solve(sp, grid, tgrid, [t_eval], out_indices=(probe, probe, probe))

    lines = ["i,j,k,x,y,z,u1,u2,u3,P,dPx,dPy,dPz"]
    for a, i in enumerate(probe):
        for b, j in enumerate(probe):
            for c, k in enumerate(probe):
                vals = [sol.u[0, 0, a, b, c], sol.u[0, 1, a, b, c], sol.u[0, 2, a, b, c],
                        sol.p[0, a, b, c], sol.grad_p[0, 0, a, b, c],
                        sol.grad_p[0, 1, a, b, c], sol.grad_p[0, 2, a, b, c]]
                nums = ",".join(f"{v:.12e}" for v in vals)
                lines.append(f"{i},{j},{k},{i*h:.12g},{j*h:.12g},{k*h:.12g},{nums}")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {csv_path} ({len(lines) - 1} points, t = {t_eval:g})")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stokescube",
        description="high-order cubature solver for the unsteady Stokes system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    st = sub.add_parser("study", help="convergence study for one solver stage")
    st.add_argument("--problem", help="built-in problem name")
    st.add_argument("--stage", help=f"solver stage ({', '.join(STAGES)})")
    st.add_argument("--orders", help="comma-separated order indices, e.g. 1,2,3,4")
    st.add_argument("--hinv", help="comma-separated reciprocal mesh sizes, e.g. 10,20,40")
    st.add_argument("--tauinv", help="comma-separated reciprocal time steps (heat/full)")
    st.add_argument("--time", help="evaluation time (default 1.0)")
    st.add_argument("--point", help="evaluation point x,y,z (default 1.2,1.2,1.2)")
    st.add_argument("--component", help="velocity component for propagator/heat stages")
    st.add_argument("--axis", help="gradient component for the gradient stage")
    st.add_argument("--d", help="spatial shape parameter")
    st.add_argument("--d0", help="temporal shape parameter")
    st.add_argument("--nu", help="viscosity")
    st.add_argument("--radius", help="grid support radius (default 6.5)")
    st.add_argument("--de-kappa", help="half-line rule step")
    st.add_argument("--de-n", help="half-line rule node count")
    st.add_argument("--mori-kappa", help="time rule step")
    st.add_argument("--mori-n", help="time rule node count")
    st.add_argument("--csv", help="write the table to this CSV file")
    st.add_argument("--config", help="key=value config file; flags override")

    sv = sub.add_parser("solve", help="full solve, fields written as CSV")
    sv.add_argument("--problem", help="built-in problem name")
    sv.add_argument("--order", help="order index M (default 2)")
    sv.add_argument("--hinv", help="reciprocal mesh size (default 10)")
    sv.add_argument("--tauinv", help="reciprocal time step (default 40)")
    sv.add_argument("--time", help="output time (default 1.0)")
    sv.add_argument("--box", help="output sub-lattice half-width (default 2.0)")
    sv.add_argument("--d", help="spatial shape parameter")
    sv.add_argument("--d0", help="temporal shape parameter")
    sv.add_argument("--nu", help="viscosity")
    sv.add_argument("--radius", help="grid support radius (default 6.5)")
    sv.add_argument("--csv", help="output CSV path (required)")
    sv.add_argument("--config", help="key=value config file; flags override")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _parse_config_file(args.config) if args.config else {}
        if args.command == "study":
            rows = _study_rows(args, config)
            _print_study(rows, _merged(args, config, "csv"))
            return 0
        return _run_solve(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # solver failures
        print(f"runtime error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
