"""Command-line entry point: ``nrflow run | compare | sweep-alpha``.

Every flag can also be given in a YAML config file (``--config`` or the
``NRFLOW_CONFIG`` environment variable) using the flag name with dashes
or underscores as the key.  Nested ``gains:`` and ``params:`` mappings
override baseline gains and vehicle parameters.  Flags win over the file.

Exit codes: 0 success, 1 configuration error, 2 simulation fault.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields
from pathlib import Path

import yaml

from nrflow.baseline_pid import PidGains
from nrflow.harness import CONTROLLERS, SimConfig, SimulationFault, run_scenario, run_suite, sweep_alpha, write_csv
from nrflow.icbf import IcbfConfig
from nrflow.nr_controller import NrConfig
from nrflow.quad_model import QuadParams
from nrflow.trajectories import KINDS, benchmark_suite, default_spec

EXIT_OK, EXIT_CONFIG, EXIT_FAULT = 0, 1, 2

# flag dest -> default; None means "derive from the scenario"
SCALAR_OPTIONS = {
    "trajectory": "horizontal-circle",
    "controller": "newton-raphson",
    "alpha": 30.0,
    "horizon": 0.8,
    "gamma": 1.0,
    "rate_limit": 0.8,
    "period": None,
    "duration": None,
    "transient_skip": None,
    "dt_ctrl": 0.01,
    "dt_plant": 0.001,
    "icbf": True,
}


class ConfigError(ValueError):
    pass


def _add_common(p: argparse.ArgumentParser, with_trajectory: bool = True) -> None:
    if with_trajectory:
        p.add_argument("--trajectory", help=f"one of: {', '.join(KINDS)}")
        p.add_argument("--period", type=float, help="override the trajectory period [s]")
    p.add_argument("--alpha", type=float, help="Newton-Raphson speedup")
    p.add_argument("--horizon", type=float, help="prediction horizon T [s]")
    p.add_argument("--gamma", type=float, help="barrier gain [1/s]")
    p.add_argument("--rate-limit", type=float, help="symmetric angular-rate limit [rad/s]")
    p.add_argument("--no-icbf", dest="icbf", action="store_const", const=False, help="disable the rate barrier")
    p.add_argument("--duration", type=float, help="simulated time [s] (default: 10 periods)")
    p.add_argument("--transient-skip", type=float, help="metrics ignore t < skip (default: 2 periods)")
    p.add_argument("--dt-ctrl", type=float, help="control period [s]")
    p.add_argument("--dt-plant", type=float, help="plant integration step [s]")
    p.add_argument("--config", help="YAML config file (default: $NRFLOW_CONFIG)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nrflow", description="Newton-Raphson flow quadrotor tracking benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario")
    _add_common(run)
    run.add_argument("--controller", help=f"one of: {', '.join(CONTROLLERS)}")
    run.add_argument("--out", help="write the trajectory log as CSV")

    cmp_ = sub.add_parser("compare", help="both controllers over the benchmark suite")
    _add_common(cmp_, with_trajectory=False)
    cmp_.add_argument("--out-dir", help="directory for per-run CSVs (default: compare_out)")

    sw = sub.add_parser("sweep-alpha", help="tail error versus speedup on one trajectory")
    _add_common(sw)
    sw.add_argument("--alphas", help="comma-separated speedup values (default: 10,20,30,60)")
    return parser


def load_config_file(path: str | None) -> dict:
    path = path or os.environ.get("NRFLOW_CONFIG")
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def resolve_options(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < command-line flags."""
    file_opts = load_config_file(getattr(args, "config", None))
    known = set(SCALAR_OPTIONS) | {"gains", "params", "out", "out_dir", "alphas"}
    unknown = set(file_opts) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    opts = dict(SCALAR_OPTIONS)
    opts.update({k: None for k in ("out", "out_dir", "alphas")})
    opts["gains"], opts["params"] = {}, {}
    opts.update(file_opts)
    for k, v in vars(args).items():
        if k in opts and v is not None:
            opts[k] = v
    return opts


def _sub_dataclass(cls, values: dict, what: str):
    valid = {f.name for f in fields(cls)}
    bad = set(values or {}) - valid
    if bad:
        raise ConfigError(f"unknown {what} keys {sorted(bad)}; valid: {', '.join(sorted(valid))}")
    return cls(**(values or {}))


def build_config(opts: dict) -> SimConfig:
    """Turn merged options into a validated :class:`SimConfig`.

    Raises:
        ConfigError: on unknown names or invalid values.
    """
    try:
        name = opts["trajectory"]
        if name not in KINDS:
            raise ConfigError(f"unknown trajectory {name!r}; valid: {', '.join(KINDS)}")
        if opts["controller"] not in CONTROLLERS:
            raise ConfigError(f"unknown controller {opts['controller']!r}; valid: {', '.join(CONTROLLERS)}")
        lim = float(opts["rate_limit"])
        return SimConfig(
            trajectory=default_spec(name, opts["period"]),
            controller=opts["controller"],
            nr=NrConfig(alpha=float(opts["alpha"]), T=float(opts["horizon"]), dt_ctrl=float(opts["dt_ctrl"])),
            icbf=IcbfConfig(rate_min=-lim, rate_max=lim, gamma=float(opts["gamma"]), enabled=bool(opts["icbf"])),
            gains=_sub_dataclass(PidGains, opts["gains"], "gains"),
            params=_sub_dataclass(QuadParams, opts["params"], "params"),
            dt_plant=float(opts["dt_plant"]),
            duration=opts["duration"],
            transient_skip=opts["transient_skip"],
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _cmd_run(opts: dict, cfg: SimConfig) -> None:
    res = run_scenario(cfg)
    m = res.metrics
    print(f"trajectory      {cfg.trajectory.kind} (period {cfg.trajectory.period:g} s)")
    print(f"controller      {cfg.controller}")
    print(f"rmse            {m.rmse:.5f} m")
    print(f"yaw rmse        {m.yaw_rmse:.5f} rad")
    print(f"tail sup error  {m.tail_sup_error:.5f} m")
    print(f"nu1_hat         {m.nu1_hat:.5f} m")
    print(f"nu2             {m.nu2:.5f} m/s")
    print(f"max |rate|      {m.max_abs_rate:.4f} rad/s")
    print(f"step time       mean {m.mean_step_time * 1e6:.1f} us, max {m.max_step_time * 1e6:.1f} us")
    if opts["out"]:
        write_csv(res.log, opts["out"])
        print(f"wrote {opts['out']}")


def _cmd_compare(opts: dict, cfg: SimConfig) -> None:
    out_dir = Path(opts["out_dir"] or "compare_out")
    out_dir.mkdir(parents=True, exist_ok=True)
    results = run_suite(cfg, benchmark_suite())
    by_name: dict[str, dict[str, float]] = {}
    for res in results:
        write_csv(res.log, out_dir / f"{res.name}__{res.cfg.controller}.csv")
        by_name.setdefault(res.name, {})[res.cfg.controller] = res.metrics.rmse
    width = max(len(n) for n in by_name)
    print(f"{'trajectory':<{width}}  {'newton-raphson':>14}  {'baseline':>10}")
    for name, row in by_name.items():
        print(f"{name:<{width}}  {row['newton-raphson']:>14.5f}  {row['baseline']:>10.5f}")
    nr_rates = [r.metrics.max_abs_rate for r in results if r.cfg.controller == "newton-raphson"]
    print(f"max |rate| (newton-raphson, all runs): {max(nr_rates):.4f} rad/s")
    print(f"per-run CSVs in {out_dir}")


def _cmd_sweep(opts: dict, cfg: SimConfig) -> None:
    try:
        alphas = [float(a) for a in str(opts["alphas"] or "10,20,30,60").split(",")]
        for a in alphas:
            NrConfig(alpha=a, T=cfg.nr.T, dt_ctrl=cfg.nr.dt_ctrl)
    except ValueError as exc:
        raise ConfigError(f"bad --alphas: {exc}") from exc
    print(f"{'alpha':>6}  {'rmse':>8}  {'tail_sup':>8}  {'nu1_hat':>8}  {'nu2/alpha':>9}  {'bound':>8}")
    for res in sweep_alpha(cfg, alphas):
        m, a = res.metrics, res.cfg.nr.alpha
        print(
            f"{a:>6g}  {m.rmse:>8.5f}  {m.tail_sup_error:>8.5f}  {m.nu1_hat:>8.5f}  "
            f"{m.nu2 / a:>9.5f}  {m.nu1_hat + m.nu2 / a:>8.5f}"
        )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve_options(args)
        cfg = build_config(opts)
    except ConfigError as exc:
        print(f"nrflow: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    handler = {"run": _cmd_run, "compare": _cmd_compare, "sweep-alpha": _cmd_sweep}[args.command]
    try:
        handler(opts, cfg)
    except ConfigError as exc:
        print(f"nrflow: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationFault as exc:
        print(f"nrflow: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except OSError as exc:
        print(f"nrflow: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
