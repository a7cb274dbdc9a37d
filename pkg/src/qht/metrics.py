"""Thermometry and transformer figures of merit.

A qubit's local temperature is the bath temperature that would produce
its current level populations:

    T = energy / ln((1 - p) / p)        p = population of |0>

The machine is characterized by the temperature differences across its
two junctions, dT_primary and dT_secondary, and by the heat-transformer
capacity C = dT_primary - dT_secondary at the evaluation time.  C > 0 is
step-down operation (the machine dilutes a steep input gradient into a
shallower output one), C < 0 is step-up.  Some parameter points are
step-up only transiently: the gradient difference starts positive and
decays through zero, which transient_window detects and delimits.
"""

import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from .errors import (
    DegenerateQubitError,
    InfiniteTemperatureError,
    InsufficientSamplesError,
)
from .model import ENERGY_FLOOR, SystemSpec

if TYPE_CHECKING:  # pragma: no cover
    from .dynamics import Trajectory

MODE_TIE_TOL = 1e-9
POPULATION_BALANCE_TOL = 1e-12
DEFAULT_RATE_WINDOW = (0.0, 1e4)
DEFAULT_RATE_SMOOTH = 10.0
MIN_WINDOW_SAMPLES = 20
THREADS_ENV = "QHT_THREADS"


class Mode(str, Enum):
    STEP_DOWN = "step_down"
    STEP_UP = "step_up"
    NEUTRAL = "neutral"


def local_temperature(population: float, energy: float) -> float:
    """Invert the Gibbs populations of a two-level system.

    Negative return values are physical: they mean the level populations
    are inverted relative to the splitting's sign.  Exactly balanced
    populations have no finite temperature and degenerate qubits have no
    temperature at all; both raise.
    """
    if abs(energy) <= ENERGY_FLOOR:
        raise DegenerateQubitError(f"splitting {energy:g} carries no thermometric information")
    if not 0.0 < population < 1.0:
        raise ValueError(f"population must lie strictly inside (0, 1), got {population}")
    if abs(population - 0.5) <= POPULATION_BALANCE_TOL:
        raise InfiniteTemperatureError("balanced populations: temperature diverges")
    return energy / math.log((1.0 - population) / population)


def local_temperatures(populations, energies) -> np.ndarray:
    """Vectorized, total variant used on trajectories: balance maps to inf."""
    p = np.asarray(populations, dtype=float)
    with np.errstate(divide="ignore"):
        return np.asarray(energies, dtype=float) / np.log((1.0 - p) / p)


def is_population_inverted(population: float, energy: float) -> bool:
    return local_temperature(population, energy) < 0


@dataclass(frozen=True)
class TransientWindow:
    """Initial interval [t_start, t_end] on which C stays above min_margin."""

    t_start: float
    t_end: float
    min_margin: float


@dataclass
class MetricsReport:
    t_final: float
    delta_t_primary: float
    delta_t_secondary: float
    capacity: float
    mode: Mode
    transient_window: TransientWindow | None
    rate_ordering_satisfied: bool | None
    rate_window: tuple | None
    population_inverted: bool

    def to_dict(self) -> dict:
        window = None
        if self.transient_window is not None:
            window = {
                "t_start": self.transient_window.t_start,
                "t_end": self.transient_window.t_end,
                "min_margin": self.transient_window.min_margin,
            }
        return {
            "t_final": self.t_final,
            "delta_t_primary": self.delta_t_primary,
            "delta_t_secondary": self.delta_t_secondary,
            "capacity": self.capacity,
            "mode": self.mode.value,
            "transient_window": window,
            "rate_ordering_satisfied": self.rate_ordering_satisfied,
            "rate_window": list(self.rate_window) if self.rate_window else None,
            "population_inverted": self.population_inverted,
        }


def gradients(traj: "Trajectory"):
    """Junction temperature differences |T_a - T_b| along a trajectory."""
    temps = traj.temperatures
    p0, p1 = traj.spec.primary
    s0, s1 = traj.spec.secondary
    return np.abs(temps[:, p0] - temps[:, p1]), np.abs(temps[:, s0] - temps[:, s1])


def _mode_of(capacity: float) -> Mode:
    if capacity > MODE_TIE_TOL:
        return Mode.STEP_DOWN
    if capacity < -MODE_TIE_TOL:
        return Mode.STEP_UP
    return Mode.NEUTRAL


WINDOW_NOISE_FLOOR = 1e-12


def transient_window(traj: "Trajectory", margin: float = 0.0) -> TransientWindow | None:
    """Detect a transient step-down stretch of a steady step-up machine.

    Requires the trajectory to extend into the steady regime: the final
    sample stands in for the steady-state capacity.  Returns None when the
    steady capacity is nonnegative (nothing transient about the mode) or
    when the gradient difference never rises above `margin` before its
    final descent.  t_end interpolates the crossing linearly between the
    bracketing samples.

    Junctions that start with equal gradients leave diff(0) = 0 up to
    roundoff, so a sample only opens the excursion once it clears a small
    noise floor on top of the margin; the closing crossing is still taken
    against the margin itself.
    """
    dtp, dts = gradients(traj)
    diff = dtp - dts
    if diff[-1] >= 0:
        return None
    floor = max(margin, WINDOW_NOISE_FLOOR * max(1.0, float(np.max(np.abs(diff)))))
    above = np.nonzero(diff > floor)[0]
    if above.size == 0:
        return None
    first = above[0]
    after = np.nonzero(diff[first:] <= margin)[0]
    if after.size == 0:
        return None  # never crosses back inside the sampled horizon
    i = first + after[0]
    t0, t1 = traj.times[i - 1], traj.times[i]
    d0, d1 = diff[i - 1], diff[i]
    t_end = t0 + (t1 - t0) * (d0 - margin) / (d0 - d1)
    return TransientWindow(t_start=0.0, t_end=float(t_end), min_margin=margin)


def rate_ordering(
    traj: "Trajectory",
    window: tuple = DEFAULT_RATE_WINDOW,
    smooth: float = DEFAULT_RATE_SMOOTH,
    order: tuple = (0, 2, 1),
):
    """Window-averaged |dT/dt| per qubit and whether they rank as `order`.

    The temperature rates are central finite differences, smoothed by a
    moving average of `smooth` time units before taking magnitudes'
    averages.  The default order asks the first junction's far qubit to
    move slower than the third, and both slower than the middle one.
    """
    lo, hi = window
    sel = (traj.times >= lo) & (traj.times <= hi)
    if np.count_nonzero(sel) < MIN_WINDOW_SAMPLES:
        raise InsufficientSamplesError(
            f"window [{lo:g}, {hi:g}] holds {np.count_nonzero(sel)} samples,"
            f" need {MIN_WINDOW_SAMPLES}"
        )
    times = traj.times[sel]
    temps = traj.temperatures[sel]
    rates = np.gradient(temps, times, axis=0)
    gap = float(np.median(np.diff(times)))
    width = max(1, round(smooth / gap))
    if width >= times.size:
        raise InsufficientSamplesError(
            f"smoothing span {smooth:g} exceeds the window ({times.size} samples)"
        )
    kernel = np.ones(width) / width
    smoothed = np.stack(
        [np.convolve(np.abs(rates[:, j]), kernel, mode="valid") for j in range(temps.shape[1])],
        axis=1,
    )
    averages = smoothed.mean(axis=0)
    ranked = [averages[i] for i in order]
    satisfied = bool(all(a < b for a, b in zip(ranked, ranked[1:])))
    return satisfied, averages


def capacity(
    traj: "Trajectory",
    t_final: float = None,
    margin: float = 0.0,
    rate_window: tuple = None,
) -> MetricsReport:
    """Evaluate the transformer at t_final (default: the last sample).

    Junction gradients are interpolated linearly between samples.  The
    rate-ordering check runs over `rate_window` clipped to the trajectory
    (skipped, reported as None, when too few samples fall inside).
    """
    times = traj.times
    if t_final is None:
        t_final = float(times[-1])
    if not times[0] <= t_final <= times[-1]:
        raise ValueError(
            f"t_final={t_final:g} outside the sampled range [{times[0]:g}, {times[-1]:g}]"
        )
    dtp, dts = gradients(traj)
    dtp_f = float(np.interp(t_final, times, dtp))
    dts_f = float(np.interp(t_final, times, dts))
    cap = dtp_f - dts_f

    window = rate_window or DEFAULT_RATE_WINDOW
    window = (window[0], min(window[1], float(times[-1])))
    try:
        satisfied, _ = rate_ordering(traj, window=window)
    except InsufficientSamplesError:
        satisfied, window = None, None

    return MetricsReport(
        t_final=t_final,
        delta_t_primary=dtp_f,
        delta_t_secondary=dts_f,
        capacity=cap,
        mode=_mode_of(cap),
        transient_window=transient_window(traj, margin),
        rate_ordering_satisfied=satisfied,
        rate_window=window,
        population_inverted=bool(np.any(traj.temperatures < 0)),
    )


_PATH_RE = re.compile(r"qubits\[(\d+)\]\.(energy|bath\.(alpha|cutoff|temperature))")


def _parse_path(spec: SystemSpec, path: str):
    if path == "g":
        return "g", None
    m = _PATH_RE.fullmatch(path)
    if not m:
        raise ValueError(f"unknown parameter path: {path!r}")
    idx = int(m.group(1)) - 1
    if not 0 <= idx < len(spec.qubits):
        raise ValueError(f"qubit index out of range in path {path!r}")
    return m.group(3) or "energy", idx


def apply_param(spec: SystemSpec, path: str, value: float) -> SystemSpec:
    """Return a copy of `spec` with one scalar replaced.

    Paths use 1-based qubit numbering to match the file formats: "g",
    "qubits[3].bath.temperature", "qubits[1].energy", ...
    """
    field_name, idx = _parse_path(spec, path)
    if field_name == "g":
        return replace(spec, g=float(value))
    qubits = list(spec.qubits)
    q = qubits[idx]
    if field_name == "energy":
        qubits[idx] = replace(q, energy=float(value))
    else:
        qubits[idx] = replace(q, bath=replace(q.bath, **{field_name: float(value)}))
    return replace(spec, qubits=tuple(qubits))


@dataclass
class SweepRow:
    value: float
    capacity: float | None = None
    steady_capacity: float | None = None
    mode: Mode | None = None
    window_t_end: float | None = None
    error: str | None = None


def _sweep_one(spec, path, value, t_final, n_samples, margin) -> SweepRow:
    from . import dynamics  # deferred: metrics is imported by dynamics

    row = SweepRow(value=float(value))
    try:
        varied = apply_param(spec, path, value)
        traj = dynamics.propagate_expm(varied, t_final, n_samples)
        report = capacity(traj, margin=margin)
        _, steady_t, _ = dynamics.steady_temperatures(varied)
        p0, p1 = varied.primary
        s0, s1 = varied.secondary
        row.capacity = report.capacity
        row.steady_capacity = float(
            abs(steady_t[p0] - steady_t[p1]) - abs(steady_t[s0] - steady_t[s1])
        )
        row.mode = report.mode
        if report.transient_window is not None:
            row.window_t_end = report.transient_window.t_end
    except Exception as exc:  # noqa: BLE001 - a bad row must not kill the sweep
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def sweep(
    spec: SystemSpec,
    path: str,
    values,
    t_final: float,
    n_samples: int = 5000,
    margin: float = 0.0,
) -> list:
    """Independent runs over `values`, rows in input order.

    Rows that fail (for example a swept energy crossing the resonance
    constraint) carry the error text and leave the sweep running.  Worker
    count comes from QHT_THREADS; 1 forces fully serial execution.
    """
    _parse_path(spec, path)  # fail fast on a bad path
    values = [float(v) for v in values]
    workers_env = os.environ.get(THREADS_ENV)
    workers = int(workers_env) if workers_env else (os.cpu_count() or 1)
    workers = max(1, min(workers, len(values) or 1))
    if workers <= 1:
        return [_sweep_one(spec, path, v, t_final, n_samples, margin) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_sweep_one, spec, path, v, t_final, n_samples, margin)
            for v in values
        ]
        return [f.result() for f in futures]
