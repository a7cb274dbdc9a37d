"""Command-line interface.

Subcommands: run, steady, sweep, classify, plot.  Exit codes: 0 success,
2 configuration or validation problems, 3 runtime failures, 4 physicality
loss during integration.  Failures print a one-line JSON object to stderr
so callers can parse them.
"""

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import _backends, svg
from .baths import WEAK_COUPLING_WARN, born_markov_margin, rate_table
from .config import PROPAGATORS, load_config
from .dynamics import (
    integrate_rk4,
    propagate_expm,
    propagate_expm_dense,
    steady_temperatures,
)
from .errors import ConfigError, InvalidSpecError, PhysicalityLostError, QhtError
from .lindblad import decompose
from .metrics import capacity, gradients, sweep

PLOT_COLORS = {"dTp": "red", "dTs": "black"}


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(path, traj) -> None:
    dtp, dts = gradients(traj)
    cols = [traj.times]
    cols += [traj.temperatures[:, j] for j in range(traj.n_qubits)]
    cols += [dtp, dts, dtp - dts]
    header = (
        "t," + ",".join(f"T{j + 1}" for j in range(traj.n_qubits)) + ",dTp,dTs,diff"
    )
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_trajectory_csv(path):
    with open(path) as fh:
        names = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != len(names):
        raise QhtError(f"{path}: header names {len(names)} columns, rows have {data.shape[1]}")
    return {name: data[:, i] for i, name in enumerate(names)}


def render_gradient_svg(columns) -> str:
    for need in ("t", "dTp", "dTs"):
        if need not in columns:
            raise QhtError(f"trajectory CSV lacks required column {need!r}")
    t = columns["t"]
    return svg.line_chart(
        [
            ("dTp", PLOT_COLORS["dTp"], t, columns["dTp"]),
            ("dTs", PLOT_COLORS["dTs"], t, columns["dTs"]),
        ],
        x_label="t",
        y_label="junction temperature difference",
    )


def _check_writable(*paths) -> None:
    for p in paths:
        if p is None:
            continue
        parent = Path(p).resolve().parent
        if not parent.is_dir():
            raise ConfigError(f"output directory does not exist: {parent}")
        if not os.access(parent, os.W_OK):
            raise ConfigError(f"output directory is not writable: {parent}")


def _weak_coupling_check(spec):
    dec = decompose(spec)
    margin = born_markov_margin(spec, rate_table(spec, dec.frequencies))
    if margin >= WEAK_COUPLING_WARN:
        print(
            f"warning: weak-coupling margin {margin:.3g} reaches {WEAK_COUPLING_WARN:g}; "
            "rates are not far below the system frequencies",
            file=sys.stderr,
        )
    return margin


def _steady_summary(spec):
    pops, temps, unique = steady_temperatures(spec)
    p0, p1 = spec.primary
    s0, s1 = spec.secondary
    dtp = abs(temps[p0] - temps[p1])
    dts = abs(temps[s0] - temps[s1])
    return {
        "populations": [float(p) for p in pops],
        "temperatures": [float(t) for t in temps],
        "delta_t_primary": float(dtp),
        "delta_t_secondary": float(dts),
        "capacity": float(dtp - dts),
        "unique": bool(unique),
    }


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    spec = cfg.system
    t_final = args.t_final if args.t_final is not None else cfg.run.t_final
    dt = args.dt if args.dt is not None else cfg.run.dt
    samples = args.samples if args.samples is not None else cfg.run.samples
    propagator = args.propagator or cfg.run.propagator

    stem = cfg.name or "qht"
    if args.out:
        csv_path = args.out + ".trajectory.csv"
        json_path = args.out + ".metrics.json"
        svg_path = args.out + ".svg" if cfg.outputs.plot_svg else None
    else:
        csv_path = cfg.outputs.trajectory_csv or f"{stem}.trajectory.csv"
        json_path = cfg.outputs.metrics_json or f"{stem}.metrics.json"
        svg_path = cfg.outputs.plot_svg
    _check_writable(csv_path, json_path, svg_path)

    margin = _weak_coupling_check(spec)

    traj = None
    traj_rk4 = None
    if propagator in ("expm", "both"):
        traj = propagate_expm(spec, t_final, samples)
    if propagator in ("rk4", "both"):
        sample_every = max(1, round(t_final / dt / samples))
        traj_rk4 = integrate_rk4(spec, t_final, dt, sample_every)
    primary = traj if traj is not None else traj_rk4

    delta = None
    if traj is not None and traj_rk4 is not None:
        interp = np.stack(
            [
                np.interp(traj.times, traj_rk4.times, traj_rk4.populations[:, j])
                for j in range(traj.n_qubits)
            ],
            axis=1,
        )
        delta = float(np.max(np.abs(interp - traj.populations)))

    write_trajectory_csv(csv_path, primary)
    report = capacity(primary)
    payload = {
        "config": cfg.name,
        "propagator": primary.propagator,
        "backend": _backends.BACKEND,
        "born_markov_margin": margin,
        "metrics": report.to_dict(),
    }
    if delta is not None:
        payload["propagator_max_population_delta"] = delta
    with open(json_path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")

    if svg_path:
        with open(svg_path, "w") as fh:
            fh.write(render_gradient_svg(read_trajectory_csv(csv_path)))

    print(
        f"wrote {csv_path} ({primary.times.size} samples); "
        f"capacity={report.capacity:.6g} mode={report.mode.value}"
    )
    return 0


def cmd_steady(args) -> int:
    cfg = load_config(args.config)
    _weak_coupling_check(cfg.system)
    summary = _steady_summary(cfg.system)
    text = json.dumps(summary, indent=2) + "\n"
    if args.out:
        _check_writable(args.out)
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    settings = cfg.sweep
    param = args.param or (settings.param if settings else None)
    start = args.start if args.start is not None else (settings.start if settings else None)
    stop = args.stop if args.stop is not None else (settings.stop if settings else None)
    steps = args.steps if args.steps is not None else (settings.steps if settings else None)
    if param is None or start is None or stop is None or steps is None:
        raise ConfigError(
            "sweep needs --param/--from/--to/--steps (or a sweep block in the config)"
        )
    t_final = args.t_final if args.t_final is not None else cfg.run.t_final
    samples = args.samples if args.samples is not None else cfg.run.samples

    out_path = args.out or f"{cfg.name or 'qht'}.sweep.csv"
    _check_writable(out_path)

    values = np.linspace(start, stop, steps)
    rows = sweep(cfg.system, param, values, t_final, samples)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["value", "capacity", "steady_capacity", "mode", "window_t_end", "error"])
        for row in rows:
            writer.writerow(
                [
                    _fmt(row.value),
                    "" if row.capacity is None else _fmt(row.capacity),
                    "" if row.steady_capacity is None else _fmt(row.steady_capacity),
                    "" if row.mode is None else row.mode.value,
                    "" if row.window_t_end is None else _fmt(row.window_t_end),
                    row.error or "",
                ]
            )
    failed = sum(1 for r in rows if r.error)
    print(f"wrote {out_path} ({len(rows)} rows, {failed} failed)")
    return 0


def cmd_classify(args) -> int:
    cfg = load_config(args.config)
    spec = cfg.system
    t_final = args.t_final if args.t_final is not None else cfg.run.t_final
    samples = args.samples if args.samples is not None else cfg.run.samples
    traj = propagate_expm_dense(spec, t_final, samples, dense_dt=cfg.run.dt)
    report = capacity(traj, margin=args.margin)
    summary = _steady_summary(spec)
    window = report.transient_window
    payload = {
        "mode": report.mode.value,
        "capacity": report.capacity,
        "steady_capacity": summary["capacity"],
        "transient_window": None
        if window is None
        else {"t_start": window.t_start, "t_end": window.t_end, "min_margin": window.min_margin},
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_plot(args) -> int:
    _check_writable(args.out)
    with open(args.out, "w") as fh:
        fh.write(render_gradient_svg(read_trajectory_csv(args.csv)))
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qht",
        description="Simulate small qubit networks that transform thermal gradients",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="config file path or bundled name")
        p.add_argument("--t-final", type=float, default=None, help="evolution horizon")
        p.add_argument("--samples", type=int, default=None, help="recorded samples")

    run_p = sub.add_parser("run", help="evolve a network; write trajectory CSV and metrics JSON")
    common(run_p)
    run_p.add_argument("--dt", type=float, default=None, help="RK4 step")
    run_p.add_argument("--propagator", choices=list(PROPAGATORS), default=None)
    run_p.add_argument("--out", default=None, help="output path prefix")
    run_p.set_defaults(func=cmd_run)

    steady_p = sub.add_parser("steady", help="solve the stationary state directly")
    steady_p.add_argument("--config", required=True, help="config file path or bundled name")
    steady_p.add_argument("--out", default=None, help="also write the JSON summary here")
    steady_p.set_defaults(func=cmd_steady)

    sweep_p = sub.add_parser("sweep", help="repeat a run while varying one parameter")
    common(sweep_p)
    sweep_p.add_argument("--param", default=None, help='e.g. "qubits[3].bath.temperature"')
    sweep_p.add_argument("--from", dest="start", type=float, default=None)
    sweep_p.add_argument("--to", dest="stop", type=float, default=None)
    sweep_p.add_argument("--steps", type=int, default=None)
    sweep_p.add_argument("--out", default=None, help="sweep CSV path")
    sweep_p.set_defaults(func=cmd_sweep)

    classify_p = sub.add_parser(
        "classify", help="decide step-up/step-down and find any transient window"
    )
    common(classify_p)
    classify_p.add_argument("--margin", type=float, default=0.0)
    classify_p.set_defaults(func=cmd_classify)

    plot_p = sub.add_parser("plot", help="render a trajectory CSV to SVG")
    plot_p.add_argument("--csv", required=True)
    plot_p.add_argument("--out", required=True)
    plot_p.set_defaults(func=cmd_plot)

    return parser


def _fail(code: int, exc: Exception) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    field = getattr(exc, "field", None)
    if field:
        payload["field"] = field
    print(json.dumps(payload), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidSpecError) as exc:
        return _fail(2, exc)
    except PhysicalityLostError as exc:
        return _fail(4, exc)
    except (QhtError, OSError, ValueError) as exc:
        return _fail(3, exc)


if __name__ == "__main__":
    sys.exit(main())
