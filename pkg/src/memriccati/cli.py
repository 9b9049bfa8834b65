"""Command-line front end: solve, study and verify modes.

Every mode writes delimited output (CSV, 17 significant digits) and, unless
disabled, renders matching figures next to it.

Exit codes: 0 success, 2 usage/configuration error, 3 solver failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import figures
from .convergence import ConvergenceReport, LogBase, RefinementSchedule, run_study
from .errors import NonConvergenceError, OrderBoundError, SingularJacobianError
from .newton import LinearBackend, NewtonSettings, solve
from .oracle import rk4_classic
from .orders import LagSampling, OrderKind
from .presets import PRESETS, ExperimentPreset
from .problem import SolutionSeries

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_IO = 4

OUT_DIR_ENV = "MEMRICCATI_OUT"

#: Flags a named preset refuses to override.
_PRESET_LOCKED = ("order_const", "delta", "theta", "mu", "a", "b", "c")


class UsageError(Exception):
    """Invalid flags or configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    mode: str
    preset: str = "example1"
    variant: str = "both"
    nodes: int | None = None
    horizon: float | None = None
    u0: float | None = None
    eps: float = 1e-4
    max_iterations: int = 100
    backend: LinearBackend = LinearBackend.TRIANGULAR
    sampling: LagSampling = LagSampling.NODE_TIME
    literal_step_argument: bool = False
    log_base: LogBase = LogBase.TWO
    aligned_error: bool = False
    out_dir: Path = Path(".")
    figures: bool = True
    levels: tuple[int, ...] | None = None
    order_const: float | None = None
    delta: float | None = None
    theta: float | None = None
    mu: float | None = None
    a: float | None = None
    b: float | None = None
    c: float | None = None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memriccati",
        description="Variable-order memory Riccati solver: solve a single "
                    "problem, run a grid-refinement study, or verify the "
                    "near-classical regime against a Runge-Kutta reference.",
    )
    sub = parser.add_subparsers(dest="mode", required=True,
                                metavar="{solve,study,verify}")

    def add_common(p: argparse.ArgumentParser, with_preset: bool = True) -> None:
        if with_preset:
            p.add_argument("--preset",
                           choices=sorted(PRESETS) + ["custom"], default=None)
        p.add_argument("--T", dest="horizon", type=float, default=None,
                       help="time horizon")
        p.add_argument("--N", dest="nodes", type=int, default=None,
                       help="grid node count")
        p.add_argument("--u0", type=float, default=None, help="initial value")
        p.add_argument("--variant", choices=["alpha", "gamma", "both"],
                       default=None, help="operator variant(s) to run")
        p.add_argument("--eps", type=float, default=None,
                       help="Newton step tolerance")
        p.add_argument("--max-iterations", dest="max_iterations", type=int,
                       default=None)
        p.add_argument("--backend", choices=[b.value for b in LinearBackend],
                       default=None, help="linear solve backend")
        p.add_argument("--order-sampling", dest="order_sampling",
                       choices=[s.value for s in LagSampling], default=None,
                       help="argument fed to a lagged order per weight")
        p.add_argument("--literal-step-argument", dest="literal_step_argument",
                       action="store_true", default=None,
                       help="scale the periodic order's frequency by the grid "
                            "step (sensitivity check)")
        p.add_argument("--out-dir", dest="out_dir", type=str, default=None,
                       help=f"output directory (falls back to ${OUT_DIR_ENV})")
        p.add_argument("--no-figures", dest="figures", action="store_false",
                       default=None, help="skip figure rendering")
        p.add_argument("--config", type=str, default=None,
                       help="JSON file of defaults; flags override it")
        # custom-preset parameters
        p.add_argument("--order-const", dest="order_const", type=float,
                       default=None, help="custom: constant order in (0, 1)")
        p.add_argument("--delta", type=float, default=None,
                       help="custom: periodic order shift")
        p.add_argument("--theta", type=float, default=None,
                       help="custom: periodic order amplitude")
        p.add_argument("--mu", type=float, default=None,
                       help="custom: periodic order frequency")
        p.add_argument("--a", type=float, default=None,
                       help="custom: constant quadratic coefficient")
        p.add_argument("--b", type=float, default=None,
                       help="custom: constant linear coefficient")
        p.add_argument("--c", type=float, default=None,
                       help="custom: constant free coefficient")

    p_solve = sub.add_parser("solve", help="solve one problem, write t,u CSV")
    add_common(p_solve)

    p_study = sub.add_parser("study", help="grid-refinement convergence study")
    add_common(p_study)
    p_study.add_argument("--levels", type=str, default=None,
                         help="comma-separated grid sizes following N -> 2N+1 "
                              "(default 129,259,519,1039,2079)")
    p_study.add_argument("--log-base", dest="log_base",
                         choices=[b.value for b in LogBase], default=None,
                         help="base of the observed-order logarithm")
    p_study.add_argument("--aligned-error", dest="aligned_error",
                         action="store_true", default=None,
                         help="interpolate refined solutions to coarse node "
                              "times before differencing")

    p_verify = sub.add_parser(
        "verify", help="constant-coefficient run under both operator variants "
                       "plus the classical Runge-Kutta reference")
    add_common(p_verify, with_preset=False)

    return parser


_CONFIG_KEYS = {
    "preset": ("preset", str),
    "variant": ("variant", str),
    "T": ("horizon", float),
    "N": ("nodes", int),
    "u0": ("u0", float),
    "eps": ("eps", float),
    "max_iterations": ("max_iterations", int),
    "backend": ("backend", str),
    "order_sampling": ("order_sampling", str),
    "literal_step_argument": ("literal_step_argument", bool),
    "log_base": ("log_base", str),
    "aligned_error": ("aligned_error", bool),
    "out_dir": ("out_dir", str),
    "figures": ("figures", bool),
    "levels": ("levels", str),
    "order_const": ("order_const", float),
    "delta": ("delta", float),
    "theta": ("theta", float),
    "mu": ("mu", float),
    "a": ("a", float),
    "b": ("b", float),
    "c": ("c", float),
}


def _load_config_file(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    merged = {}
    for key, value in raw.items():
        if key not in _CONFIG_KEYS:
            raise UsageError(f"config file {path}: unknown key {key!r}")
        dest, caster = _CONFIG_KEYS[key]
        if caster is bool:
            if not isinstance(value, bool):
                raise UsageError(
                    f"config file {path}: {key!r} must be true or false"
                )
            merged[dest] = value
            continue
        try:
            merged[dest] = caster(value)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"config file {path}: bad value for {key!r}: {exc}")
    return merged


def _merge(namespace: argparse.Namespace) -> RunConfig:
    values = dict(vars(namespace))
    config_path = values.pop("config", None)
    file_values = _load_config_file(config_path) if config_path else {}
    # Flags beat file values; file values beat dataclass defaults.
    merged = dict(file_values)
    for key, value in values.items():
        if value is not None:
            merged[key] = value

    config = RunConfig(mode=merged.pop("mode"))
    enum_fields = {
        "backend": (LinearBackend, "backend"),
        "order_sampling": (LagSampling, "sampling"),
        "log_base": (LogBase, "log_base"),
    }
    for key, value in merged.items():
        if key in enum_fields:
            enum_type, attr = enum_fields[key]
            try:
                setattr(config, attr, enum_type(value))
            except ValueError:
                raise UsageError(f"invalid value {value!r} for --{key.replace('_', '-')}")
        elif key == "levels":
            config.levels = _parse_levels(value)
        elif key == "out_dir":
            config.out_dir = Path(value)
        else:
            setattr(config, key, value)
    if "out_dir" not in merged:
        env = os.environ.get(OUT_DIR_ENV)
        config.out_dir = Path(env) if env else Path(".")
    return config


def _parse_levels(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in str(raw).split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"bad --levels value {raw!r}: {exc}") from exc


def _validate(config: RunConfig) -> None:
    if config.mode == "verify":
        config.preset = "verification"
    if config.preset is None:
        config.preset = "example1"
    if config.preset != "custom" and config.preset not in PRESETS:
        raise UsageError(f"unknown preset {config.preset!r}")

    if config.preset != "custom":
        for name in _PRESET_LOCKED:
            if getattr(config, name) is not None:
                raise UsageError(
                    f"preset {config.preset!r} does not accept --{name.replace('_', '-')}; "
                    f"only --T, --N, --u0 and solver/output options may be overridden"
                )
    else:
        if config.horizon is None or config.nodes is None:
            raise UsageError("custom preset requires --T and --N")
        periodic = [config.delta, config.theta, config.mu]
        has_periodic = any(v is not None for v in periodic)
        if config.order_const is None and not has_periodic:
            raise UsageError(
                "custom preset requires --order-const or --delta/--theta/--mu"
            )
        if config.order_const is not None and has_periodic:
            raise UsageError(
                "custom preset takes either --order-const or the periodic "
                "parameters, not both"
            )
        if has_periodic and any(v is None for v in periodic):
            raise UsageError("periodic order needs all of --delta, --theta, --mu")
        coeffs = [config.a, config.b, config.c]
        if any(v is not None for v in coeffs) and any(v is None for v in coeffs):
            raise UsageError("custom coefficients need all of --a, --b, --c")

    if config.eps <= 0:
        raise UsageError("--eps must be positive")
    if config.max_iterations < 1:
        raise UsageError("--max-iterations must be at least 1")
    if config.nodes is not None and config.nodes < 1:
        raise UsageError("--N must be at least 1")
    if config.horizon is not None and (
            not math.isfinite(config.horizon) or config.horizon <= 0):
        raise UsageError("--T must be positive")


def parse_config(argv: list[str]) -> RunConfig:
    """Parse flags (and an optional JSON config file) into a RunConfig."""
    namespace = _build_parser().parse_args(argv)
    config = _merge(namespace)
    _validate(config)
    return config


def _preset_for(config: RunConfig) -> ExperimentPreset:
    if config.preset != "custom":
        return PRESETS[config.preset]
    if config.order_const is not None:
        form = ("constant", config.order_const)
    else:
        form = ("periodic", config.delta, config.theta, config.mu)
    if config.a is not None:
        ramp, const_coeffs = False, (config.a, config.b, config.c)
    else:
        ramp, const_coeffs = True, None
    return ExperimentPreset(
        name="custom",
        form_parameters=form,
        ramp=ramp,
        const_coeffs=const_coeffs,
        u0=config.u0 if config.u0 is not None else 0.0,
        horizon=config.horizon,
        solve_nodes=config.nodes,
        clamp=False,
    )


def _kinds(config: RunConfig) -> tuple[OrderKind, ...]:
    return {
        "alpha": (OrderKind.CURRENT_TIME,),
        "gamma": (OrderKind.LAG_TIME,),
        "both": (OrderKind.CURRENT_TIME, OrderKind.LAG_TIME),
    }[config.variant]


def _settings(config: RunConfig) -> NewtonSettings:
    return NewtonSettings(
        eps=config.eps,
        max_iterations=config.max_iterations,
        linear_backend=config.backend,
    )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_solution_csv(path: Path, series: SolutionSeries) -> None:
    lines = ["t,u"]
    lines.extend(f"{_fmt(t)},{_fmt(u)}"
                 for t, u in zip(series.times, series.values))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_study_csv(path: Path, report: ConvergenceReport) -> None:
    lines = ["N,h,eps_alpha,p_alpha,eps_gamma,p_gamma"]
    for row in report.rows:
        cells = [str(row.nodes), _fmt(row.step)]
        for value in (row.eps_alpha, row.p_alpha, row.eps_gamma, row.p_gamma):
            cells.append("" if value is None else _fmt(value))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _run_solve(config: RunConfig) -> int:
    preset = _preset_for(config)
    settings = _settings(config)
    curves: dict[str, SolutionSeries] = {}
    for kind in _kinds(config):
        problem = preset.problem(
            kind, nodes=config.nodes, horizon=config.horizon, u0=config.u0,
            sampling=config.sampling,
            literal_step_argument=config.literal_step_argument,
        )
        curves[kind.value] = solve(problem, settings).solution

    config.out_dir.mkdir(parents=True, exist_ok=True)
    for name, series in curves.items():
        path = config.out_dir / f"{preset.name}_{name}_solution.csv"
        _write_solution_csv(path, series)
        print(f"wrote {path}")
    if config.figures:
        path = config.out_dir / f"{preset.name}_solution.png"
        figures.save_solution_figure(path, curves, title=preset.name)
        print(f"wrote {path}")
    return EXIT_OK


def _run_study(config: RunConfig) -> int:
    preset = _preset_for(config)
    schedule = (RefinementSchedule(config.levels) if config.levels
                else RefinementSchedule.default())

    def make_problem(kind: OrderKind, nodes: int):
        return preset.problem(
            kind, nodes=nodes, horizon=config.horizon, u0=config.u0,
            sampling=config.sampling,
            literal_step_argument=config.literal_step_argument,
        )

    report = run_study(
        make_problem, schedule, kinds=_kinds(config),
        settings=_settings(config), log_base=config.log_base,
        aligned=config.aligned_error,
    )

    config.out_dir.mkdir(parents=True, exist_ok=True)
    path = config.out_dir / f"{preset.name}_study.csv"
    _write_study_csv(path, report)
    print(f"wrote {path}")
    if config.figures:
        fig_path = config.out_dir / f"{preset.name}_study.png"
        figures.save_convergence_figure(fig_path, report, title=preset.name)
        print(f"wrote {fig_path}")
    return EXIT_OK


def _run_verify(config: RunConfig) -> int:
    preset = PRESETS["verification"]
    settings = _settings(config)
    nodes = config.nodes if config.nodes is not None else preset.solve_nodes

    series: dict[str, SolutionSeries] = {}
    for kind in (OrderKind.CURRENT_TIME, OrderKind.LAG_TIME):
        problem = preset.problem(
            kind, nodes=nodes, horizon=config.horizon, u0=config.u0,
            sampling=config.sampling,
        )
        series[kind.value] = solve(problem, settings).solution

    horizon = config.horizon if config.horizon is not None else preset.horizon
    u0 = config.u0 if config.u0 is not None else preset.u0
    a, b, c = preset.classic_coefficients()
    classic = rk4_classic(a, b, c, u0, horizon, steps=10 * nodes)
    series["classic"] = classic

    variant_gap = float(np.max(np.abs(
        series["alpha"].values - series["gamma"].values)))
    classic_at_nodes = classic.values[9::10]
    classic_gap = float(np.max(np.abs(
        series["alpha"].values - classic_at_nodes)))

    config.out_dir.mkdir(parents=True, exist_ok=True)
    for name, s in series.items():
        path = config.out_dir / f"verify_{name}.csv"
        _write_solution_csv(path, s)
        print(f"wrote {path}")
    if config.figures:
        fig_path = config.out_dir / "verify.png"
        figures.save_solution_figure(fig_path, series, title="verification")
        print(f"wrote {fig_path}")
    print(f"max |alpha - gamma| = {variant_gap:.3e}")
    print(f"max |alpha - classic| = {classic_gap:.3e}")
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Execute one configured run; returns the exit code."""
    if config.mode == "solve":
        return _run_solve(config)
    if config.mode == "study":
        return _run_study(config)
    if config.mode == "verify":
        return _run_verify(config)
    raise UsageError(f"unknown mode {config.mode!r}")


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_config(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OrderBoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularJacobianError, NonConvergenceError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
