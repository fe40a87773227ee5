"""Scenario files: parsing, validation, execution and output.

A scenario is a flat INI document::

    [grid]      n, length, origin           (field solvers only)
    [physics]   h, g, K, x0
    [vortex]    q1, q2, omega_star
    [solver]    model, t0, t1, dt, t_initial
    [output]    csv, plots, stride

``model`` is one of ``soliton_ode``, ``kdv_unperturbed``, ``kdv_perturbed``
or ``boussinesq``.  Unknown sections or keys are errors, and every problem
found in a document is reported at once.
"""

from __future__ import annotations

import configparser
import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, VortexWaveError
from .grid import PhysicalParams, VortexState, make_grid
from .solvers import (
    CoupledState,
    boussinesq_initial,
    diagnostics,
    simulate,
    soliton_profile,
)
from .vortex import conservation_value, integrate_soliton_vortex

__all__ = [
    "SOLVER_MODELS",
    "GridSpec",
    "OutputSpec",
    "Scenario",
    "ScenarioError",
    "RunResult",
    "parse_scenario",
    "load_scenario",
    "serialize_scenario",
    "execute",
    "run",
    "sweep",
    "write_csv",
    "plot_trajectories",
    "SWEEP_AXES",
    "with_value",
]

SOLVER_MODELS = ("soliton_ode", "kdv_unperturbed", "kdv_perturbed", "boussinesq")
DEFAULT_DT = 0.05
FIELD_COLUMNS = ("mass_u", "mass_eta", "momentum", "max_u")


class ScenarioError(ConfigurationError):
    """All violations found in a scenario document."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class GridSpec:
    n: int
    length: float
    origin: float = 0.0

    def build(self):
        return make_grid(self.n, self.length, self.origin)


@dataclass(frozen=True)
class OutputSpec:
    csv: str = "trajectory.csv"
    plots: str | None = None
    stride: int = 1


@dataclass(frozen=True)
class Scenario:
    params: PhysicalParams
    vortex: VortexState
    model: str
    t0: float
    t1: float
    dt: float
    t_initial: float | None = None
    grid: GridSpec | None = None
    output: OutputSpec = field(default_factory=OutputSpec)

    @property
    def is_field_model(self) -> bool:
        return self.model != "soliton_ode"


# ---------------------------------------------------------------------------
# schema
# ---------------------------------------------------------------------------

_SCHEMA = {
    "grid": {"n": int, "length": float, "origin": float},
    "physics": {"h": float, "g": float, "K": float, "x0": float},
    "vortex": {"q1": float, "q2": float, "omega_star": float},
    "solver": {"model": str, "t0": float, "t1": float, "dt": float, "t_initial": float},
    "output": {"csv": str, "plots": str, "stride": int},
}
_DEFAULTS = {
    "physics": {"h": 10.0, "g": 9.81, "x0": 0.0},
    "vortex": {"q1": 0.0, "omega_star": 0.0},
    "grid": {"origin": 0.0},
    "output": {"csv": "trajectory.csv", "stride": 1},
}
_REQUIRED = {
    "physics": ("K",),
    "vortex": ("q2",),
    "solver": ("model", "t0", "t1"),
}

#: sweepable scalar keys and their section
SWEEP_AXES = {
    key: section
    for section, keys in _SCHEMA.items()
    for key, kind in keys.items()
    if kind is not str and section != "output"
}


def _convert(kind, raw: str):
    if kind is int:
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(value)
    if kind is float:
        value = float(raw)
        if not math.isfinite(value):
            raise ValueError(f"expected a finite number, got {raw!r}")
        return value
    return raw.strip()


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document; raise :class:`ScenarioError` on problems."""
    cp = configparser.ConfigParser(interpolation=None, empty_lines_in_values=False)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError([f"malformed scenario document: {exc.message}"]) from None

    errors: list[str] = []
    failed: set[tuple[str, str]] = set()
    values: dict[str, dict] = {s: dict(_DEFAULTS.get(s, {})) for s in _SCHEMA}
    for section in cp.sections():
        if section not in _SCHEMA:
            errors.append(f"unknown section [{section}]")
            continue
        for key, raw in cp.items(section):
            if key not in _SCHEMA[section]:
                errors.append(f"unknown key '{key}' in [{section}]")
                continue
            try:
                values[section][key] = _convert(_SCHEMA[section][key], raw)
            except ValueError as exc:
                errors.append(f"[{section}] {key}: {exc}")
                failed.add((section, key))

    for section, keys in _REQUIRED.items():
        for key in keys:
            if key not in values[section] and (section, key) not in failed:
                errors.append(f"missing required key '{key}' in [{section}]")
    if "dt" not in values["solver"] and ("solver", "dt") not in failed:
        errors.append(
            f"missing required key 'dt' in [solver]; suggested default: dt = {DEFAULT_DT}"
        )
    return _build(values, cp.has_section("grid"), errors)


def _build(values: dict, has_grid: bool, errors: list[str]) -> Scenario:
    """Check cross-field invariants on whatever values are present."""
    phys, vort, solv, out = (values[s] for s in ("physics", "vortex", "solver", "output"))

    params = None
    if {"h", "g", "K", "x0"} <= phys.keys():
        try:
            params = PhysicalParams(phys["h"], phys["g"], phys["K"], phys["x0"])
        except ConfigurationError as exc:
            errors.append(str(exc))
    h = phys.get("h")
    q2 = vort.get("q2")
    if h is not None and q2 is not None and not -h < q2 < 0:
        errors.append(f"vortex must satisfy -h < q2 < 0 (h={h:g}), got q2={q2:g}")

    model = solv.get("model")
    if model is not None and model not in SOLVER_MODELS:
        errors.append(f"unknown model '{model}'; choose from {', '.join(SOLVER_MODELS)}")
    if "dt" in solv and not solv["dt"] > 0:
        errors.append(f"dt must be positive, got {solv['dt']:g}")
    t0, t1 = solv.get("t0"), solv.get("t1")
    have_span = t0 is not None and t1 is not None
    t_initial = solv.get("t_initial")
    if have_span and t_initial is not None and not min(t0, t1) <= t_initial <= max(t0, t1):
        errors.append("t_initial must lie between t0 and t1")
    if "stride" in out and out["stride"] < 1:
        errors.append(f"output stride must be >= 1, got {out['stride']}")

    grid = built = None
    if has_grid:
        g = values["grid"]
        missing = [k for k in ("n", "length") if k not in g]
        errors.extend(f"missing required key '{k}' in [grid]" for k in missing)
        if not missing:
            grid = GridSpec(g["n"], g["length"], g["origin"])
            try:
                built = grid.build()
            except ConfigurationError as exc:
                errors.append(f"[grid] {exc}")
    if model in SOLVER_MODELS and model != "soliton_ode":
        if not has_grid:
            errors.append(f"model '{model}' needs a [grid] section")
        if have_span and t1 < t0:
            errors.append("field solvers integrate forwards only: need t1 >= t0")
        if t_initial is not None and t_initial != t0:
            errors.append("t_initial is only supported by the soliton_ode model")
        if built is not None and params is not None:
            if not built.contains(vort["q1"]):
                errors.append(f"vortex q1={vort['q1']:g} lies outside the grid domain")
            if have_span:
                try:
                    soliton_profile(built, t0, params)
                except VortexWaveError as exc:
                    errors.append(str(exc))
    if errors:
        raise ScenarioError(errors)

    return Scenario(
        params=params,
        vortex=VortexState(vort["q1"], q2, vort["omega_star"]),
        model=model,
        t0=t0,
        t1=t1,
        dt=solv["dt"],
        t_initial=t_initial,
        grid=grid,
        output=OutputSpec(out["csv"], out.get("plots") or None, out["stride"]),
    )


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text())


def serialize_scenario(sc: Scenario) -> str:
    """INI text that parses back to an equal :class:`Scenario`."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    if sc.grid is not None:
        cp["grid"] = {"n": str(sc.grid.n), "length": repr(sc.grid.length),
                      "origin": repr(sc.grid.origin)}
    p = sc.params
    cp["physics"] = {"h": repr(p.h), "g": repr(p.g), "K": repr(p.K), "x0": repr(p.x0)}
    v = sc.vortex
    cp["vortex"] = {"q1": repr(float(v.q1)), "q2": repr(float(v.q2)),
                    "omega_star": repr(float(v.omega_star))}
    solver = {"model": sc.model, "t0": repr(sc.t0), "t1": repr(sc.t1), "dt": repr(sc.dt)}
    if sc.t_initial is not None:
        solver["t_initial"] = repr(sc.t_initial)
    cp["solver"] = solver
    output = {"csv": sc.output.csv, "stride": str(sc.output.stride)}
    if sc.output.plots:
        output["plots"] = sc.output.plots
    cp["output"] = output
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def with_value(sc: Scenario, axis: str, value: float) -> Scenario:
    """Copy of ``sc`` with the scalar ``axis`` replaced, re-validated."""
    if axis not in SWEEP_AXES:
        raise ConfigurationError(
            f"invalid sweep axis '{axis}'; choose from {', '.join(sorted(SWEEP_AXES))}"
        )
    section = SWEEP_AXES[axis]
    text = serialize_scenario(sc)
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp.read_string(text)
    if not cp.has_section(section):
        raise ConfigurationError(f"scenario has no [{section}] section to sweep '{axis}'")
    kind = _SCHEMA[section][axis]
    cp[section][axis] = str(int(value)) if kind is int else repr(float(value))
    buf = io.StringIO()
    cp.write(buf)
    return parse_scenario(buf.getvalue())


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    """Sampled time series of a scenario run (one entry per CSV column)."""

    columns: dict[str, np.ndarray]
    csv_path: Path | None = None
    plot_paths: list[Path] = field(default_factory=list)

    @property
    def times(self):
        return self.columns["t"]

    @property
    def q1(self):
        return self.columns["q1"]

    @property
    def q2(self):
        return self.columns["q2"]

    def summary(self) -> dict:
        q2 = self.q2
        far = int(np.argmax(np.abs(q2 - q2[0])))
        return {
            "q1_excursion": float(self.q1[-1] - self.q1[0]),
            "q2_extremum": float(q2[far]),
            "q2_excursion": float(q2.max() - q2.min()),
        }


def _conserved(q1, t, params):
    if params.K == 0 or not params.long_wave_valid:
        return np.full(np.shape(q1), np.nan)
    return np.asarray(conservation_value(q1, t, params), dtype=float)


def execute(sc: Scenario) -> RunResult:
    """Run the scenario in memory.  Solver failures propagate as exceptions."""
    if sc.model == "soliton_ode":
        traj = integrate_soliton_vortex(sc.vortex, sc.t0, sc.t1, sc.dt, sc.params,
                                        t_initial=sc.t_initial)
        s = slice(None, None, sc.output.stride)
        idx = np.arange(len(traj))[s]
        if idx[-1] != len(traj) - 1:
            idx = np.append(idx, len(traj) - 1)
        return RunResult({
            "t": traj.times[idx], "q1": traj.q1[idx], "q2": traj.q2[idx],
            "conserved": _conserved(traj.q1[idx], traj.times[idx], sc.params),
        })

    grid = sc.grid.build()
    p = sc.params
    u0 = soliton_profile(grid, sc.t0, p)
    eta0 = boussinesq_initial(u0, p) if sc.model == "boussinesq" else None
    state = CoupledState(u0, sc.vortex, sc.t0, eta0)
    span = sc.t1 - sc.t0
    n = math.ceil(span / sc.dt - 1e-9) if span > 0 else 0
    if n:
        states = simulate(state, span / n, n, sc.model, p, sample_every=sc.output.stride)
    else:
        states = [state]
    t = np.array([s.time for s in states])
    q1 = np.array([s.vortex.q1 for s in states], dtype=float)
    cols = {
        "t": t,
        "q1": q1,
        "q2": np.array([s.vortex.q2 for s in states], dtype=float),
        "conserved": _conserved(q1, t, p),
    }
    diag = [diagnostics(s) for s in states]
    for name in FIELD_COLUMNS:
        cols[name] = np.array([d[name] for d in diag])
    return RunResult(cols)


def write_csv(result: RunResult, path) -> Path:
    """Header row plus one row per sample, every value to 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(result.columns)
    data = np.column_stack([result.columns[k] for k in names])
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in data:
            w.writerow(["%.17g" % v for v in row])
    result.csv_path = path
    return path


def plot_trajectories(curves, prefix) -> list[Path]:
    """Write ``<prefix>_q1.svg``, ``<prefix>_q2.svg`` and ``<prefix>_q1_q2.svg``.

    ``curves`` is a sequence of ``(label, RunResult)``.
    """
    import matplotlib
    from matplotlib.backends.backend_svg import FigureCanvasSVG
    from matplotlib.figure import Figure

    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    panels = [
        ("q1", "t (s)", "q1 (m)", lambda r: (r.times, r.q1)),
        ("q2", "t (s)", "q2 (m)", lambda r: (r.times, r.q2)),
        ("q1_q2", "q1 (m)", "q2 (m)", lambda r: (r.q1, r.q2)),
    ]
    paths = []
    with matplotlib.rc_context({"svg.hashsalt": "vortex-waves", "svg.fonttype": "none"}):
        for suffix, xlabel, ylabel, pick in panels:
            fig = Figure(figsize=(6, 4))
            FigureCanvasSVG(fig)
            ax = fig.add_subplot()
            for label, res in curves:
                ax.plot(*pick(res), label=label)
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
            if suffix == "q1_q2":
                ax.set_title("Vortex trajectories at different depths")
            if len(curves) > 1 or curves[0][0]:
                ax.legend()
            fig.tight_layout()
            path = prefix.parent / f"{prefix.name}_{suffix}.svg"
            fig.savefig(path, format="svg", metadata={"Date": None})
            paths.append(path)
    return paths


def run(sc: Scenario, out_dir=".") -> RunResult:
    """Execute ``sc`` and write its CSV (and plots, if requested) under ``out_dir``."""
    out_dir = Path(out_dir)
    result = execute(sc)
    write_csv(result, out_dir / sc.output.csv)
    if sc.output.plots:
        result.plot_paths = plot_trajectories([("", result)], out_dir / sc.output.plots)
    return result


def _run_one(args):
    sc, out_dir = args
    try:
        res = run(sc, out_dir)
    except VortexWaveError as exc:
        return None, f"{type(exc).__name__}: {exc}"
    return res, None


def _label(axis, value):
    return f"{axis}={value:g}"


def sweep(base: Scenario, axis: str, values, out_dir=".", workers: int = 1):
    """One independent run per value plus ``summary.csv`` in ``out_dir``.

    Each run writes into its own subdirectory ``<axis>=<value>``.  Combined
    plots are written when the base scenario requests plots.  Returns the
    list of ``(value, RunResult | None, error | None)``.
    """
    values = [float(v) for v in values]
    if not values:
        raise ConfigurationError("sweep needs at least one value")
    scenarios = [with_value(base, axis, v) for v in values]
    out_dir = Path(out_dir)
    jobs = [(sc, out_dir / _label(axis, v)) for sc, v in zip(scenarios, values)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs),
                                                 os.cpu_count() or 1)) as pool:
            outcomes = list(pool.map(_run_one, jobs))
    else:
        outcomes = [_run_one(j) for j in jobs]

    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "summary.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([axis, "q1_excursion", "q2_extremum", "q2_excursion", "status"])
        for v, (res, err) in zip(values, outcomes):
            if res is None:
                w.writerow(["%.17g" % v, "nan", "nan", "nan", err])
            else:
                s = res.summary()
                w.writerow(["%.17g" % v] + ["%.17g" % s[k] for k in
                           ("q1_excursion", "q2_extremum", "q2_excursion")] + ["ok"])
    done = [(_label(axis, v), r) for v, (r, _) in zip(values, outcomes) if r is not None]
    if base.output.plots and done:
        plot_trajectories(done, out_dir / base.output.plots)
    return [(v, r, e) for v, (r, e) in zip(values, outcomes)]


def replace_output(sc: Scenario, **kw) -> Scenario:
    return replace(sc, output=replace(sc.output, **kw))
