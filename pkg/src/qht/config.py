"""Run configuration files: JSON parsing, validation, canonical form.

A config names the network (interaction, coupling, qubits with their
baths), optional run settings, optional output paths, and an optional
sweep block.  Qubit indices in files are 1-based to match the T1..Tn
column naming of trajectory CSVs; the in-memory spec is 0-based.

Parsing is strict: unknown keys, wrong types, and model-constraint
violations (with their residuals) all raise ConfigError.  Re-serializing
a parsed config produces a canonical form that parses back to an equal
object.
"""

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .baths import BathSpec
from .errors import ConfigError
from .model import InteractionKind, QubitSpec, SystemSpec, validate

DEFAULT_T_FINAL = 5e4
DEFAULT_PROPAGATOR = "expm"
DEFAULT_DT = 0.01
DEFAULT_SAMPLES = 5000
PROPAGATORS = ("expm", "rk4", "both")

INTERACTION_NAMES = {kind.ket + "-" + kind.bra: kind for kind in InteractionKind}


@dataclass(frozen=True)
class RunSettings:
    t_final: float = DEFAULT_T_FINAL
    propagator: str = DEFAULT_PROPAGATOR
    dt: float = DEFAULT_DT
    samples: int = DEFAULT_SAMPLES


@dataclass(frozen=True)
class OutputPaths:
    trajectory_csv: str | None = None
    metrics_json: str | None = None
    plot_svg: str | None = None


@dataclass(frozen=True)
class SweepSettings:
    param: str
    start: float
    stop: float
    steps: int


@dataclass(frozen=True)
class RunConfig:
    name: str | None
    system: SystemSpec
    run: RunSettings
    outputs: OutputPaths
    sweep: SweepSettings | None


def _require(data: dict, field: str, kind, where: str):
    if field not in data:
        raise ConfigError(f"missing required field: {where}{field}", field=where + field)
    return _typed(data[field], field, kind, where)


def _typed(value, field: str, kind, where: str):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}{field} must be a number", field=where + field)
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}{field} must be an integer", field=where + field)
        return value
    if not isinstance(value, kind):
        raise ConfigError(
            f"{where}{field} must be {kind.__name__}", field=where + field
        )
    return value


def _reject_unknown(data: dict, allowed, where: str):
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown field: {where}{key}", field=where + key)


def _parse_pair(data: dict, field: str, n: int, where: str):
    if field not in data:
        return None
    pair = _typed(data[field], field, list, where)
    if len(pair) != 2 or not all(isinstance(i, int) and not isinstance(i, bool) for i in pair):
        raise ConfigError(f"{where}{field} must be a pair of qubit numbers", field=where + field)
    if not all(1 <= i <= n for i in pair):
        raise ConfigError(
            f"{where}{field} must use qubit numbers 1..{n}", field=where + field
        )
    return (pair[0] - 1, pair[1] - 1)


def _parse_system(data: dict) -> SystemSpec:
    where = "system."
    _reject_unknown(
        data,
        {"interaction", "g", "qubits", "primary", "secondary", "zero_frequency_terms"},
        where,
    )
    name = _require(data, "interaction", str, where)
    if name not in INTERACTION_NAMES:
        known = ", ".join(sorted(INTERACTION_NAMES))
        raise ConfigError(
            f"unknown interaction {name!r}; known: {known}", field=where + "interaction"
        )
    kind = INTERACTION_NAMES[name]
    g = _require(data, "g", float, where)
    raw_qubits = _require(data, "qubits", list, where)
    qubits = []
    for i, q in enumerate(raw_qubits):
        qw = f"{where}qubits[{i + 1}]."
        q = _typed(q, f"qubits[{i + 1}]", dict, where)
        _reject_unknown(q, {"energy", "bath"}, qw)
        energy = _require(q, "energy", float, qw)
        bath = _require(q, "bath", dict, qw)
        bw = qw + "bath."
        _reject_unknown(bath, {"alpha", "cutoff", "temperature"}, bw)
        qubits.append(
            QubitSpec(
                energy=energy,
                bath=BathSpec(
                    alpha=_require(bath, "alpha", float, bw),
                    cutoff=_require(bath, "cutoff", float, bw),
                    temperature=_require(bath, "temperature", float, bw),
                ),
            )
        )
    zero_terms = data.get("zero_frequency_terms", True)
    zero_terms = _typed(zero_terms, "zero_frequency_terms", bool, where)
    spec = SystemSpec(
        kind=kind,
        g=g,
        qubits=tuple(qubits),
        primary=_parse_pair(data, "primary", len(qubits), where),
        secondary=_parse_pair(data, "secondary", len(qubits), where),
        zero_frequency_terms=zero_terms,
    )
    report = validate(spec)
    if not report.ok:
        lines = "; ".join(
            f"{v.constraint} (residual {v.residual:g}): {v.message}" for v in report.violations
        )
        raise ConfigError(f"invalid system: {lines}", field="system")
    return spec


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", line=exc.lineno) from exc
    data = _typed(data, "config", dict, "")
    _reject_unknown(data, {"name", "system", "run", "outputs", "sweep"}, "")

    name = data.get("name")
    if name is not None:
        name = _typed(name, "name", str, "")

    system = _parse_system(_require(data, "system", dict, ""))

    run_data = _typed(data.get("run", {}), "run", dict, "")
    _reject_unknown(run_data, {"t_final", "propagator", "dt", "samples"}, "run.")
    propagator = run_data.get("propagator", DEFAULT_PROPAGATOR)
    propagator = _typed(propagator, "propagator", str, "run.")
    if propagator not in PROPAGATORS:
        raise ConfigError(
            f"run.propagator must be one of {', '.join(PROPAGATORS)}", field="run.propagator"
        )
    run = RunSettings(
        t_final=_typed(run_data.get("t_final", DEFAULT_T_FINAL), "t_final", float, "run."),
        propagator=propagator,
        dt=_typed(run_data.get("dt", DEFAULT_DT), "dt", float, "run."),
        samples=_typed(run_data.get("samples", DEFAULT_SAMPLES), "samples", int, "run."),
    )

    out_data = _typed(data.get("outputs", {}), "outputs", dict, "")
    _reject_unknown(out_data, {"trajectory_csv", "metrics_json", "plot_svg"}, "outputs.")
    outputs = OutputPaths(
        **{
            k: _typed(out_data[k], k, str, "outputs.")
            for k in ("trajectory_csv", "metrics_json", "plot_svg")
            if out_data.get(k) is not None
        }
    )

    sweep = None
    if "sweep" in data:
        sw = _typed(data["sweep"], "sweep", dict, "")
        _reject_unknown(sw, {"param", "start", "stop", "steps"}, "sweep.")
        sweep = SweepSettings(
            param=_require(sw, "param", str, "sweep."),
            start=_require(sw, "start", float, "sweep."),
            stop=_require(sw, "stop", float, "sweep."),
            steps=_require(sw, "steps", int, "sweep."),
        )
        if sweep.steps < 1:
            raise ConfigError("sweep.steps must be >= 1", field="sweep.steps")

    return RunConfig(name=name, system=system, run=run, outputs=outputs, sweep=sweep)


def config_to_dict(cfg: RunConfig) -> dict:
    """Canonical plain-dict form (stable field order, 1-based indices)."""
    spec = cfg.system
    data = {}
    if cfg.name is not None:
        data["name"] = cfg.name
    data["system"] = {
        "interaction": spec.kind.ket + "-" + spec.kind.bra,
        "g": spec.g,
        "qubits": [
            {
                "energy": q.energy,
                "bath": {
                    "alpha": q.bath.alpha,
                    "cutoff": q.bath.cutoff,
                    "temperature": q.bath.temperature,
                },
            }
            for q in spec.qubits
        ],
        "primary": [spec.primary[0] + 1, spec.primary[1] + 1],
        "secondary": [spec.secondary[0] + 1, spec.secondary[1] + 1],
        "zero_frequency_terms": spec.zero_frequency_terms,
    }
    data["run"] = {
        "t_final": cfg.run.t_final,
        "propagator": cfg.run.propagator,
        "dt": cfg.run.dt,
        "samples": cfg.run.samples,
    }
    outputs = {
        k: v
        for k, v in (
            ("trajectory_csv", cfg.outputs.trajectory_csv),
            ("metrics_json", cfg.outputs.metrics_json),
            ("plot_svg", cfg.outputs.plot_svg),
        )
        if v is not None
    }
    data["outputs"] = outputs
    if cfg.sweep is not None:
        data["sweep"] = {
            "param": cfg.sweep.param,
            "start": cfg.sweep.start,
            "stop": cfg.sweep.stop,
            "steps": cfg.sweep.steps,
        }
    return data


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"


def bundled_names() -> list:
    root = resources.files(__package__) / "configs"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_text(name: str) -> str:
    path = resources.files(__package__) / "configs" / f"{name}.json"
    if not path.is_file():
        known = ", ".join(bundled_names())
        raise ConfigError(f"no bundled config {name!r}; known: {known}")
    return path.read_text()


def load_config(ref: str) -> RunConfig:
    """Load a config from a file path or, failing that, by bundled name."""
    path = Path(ref)
    if path.is_file():
        try:
            cfg = parse_config(path.read_text())
        except ConfigError as exc:
            raise ConfigError(f"{ref}: {exc}", field=exc.field, line=exc.line) from exc
        if cfg.name is None:
            cfg = RunConfig(path.stem, cfg.system, cfg.run, cfg.outputs, cfg.sweep)
        return cfg
    return parse_config(bundled_text(ref))
