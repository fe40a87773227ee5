"""Self-checks reproducing the package's reference results.

Every check returns :class:`CheckResult` records; ``run_suite`` groups them.
Random test fields come from fixed-seed generators, so reports are
reproducible run to run.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .green import gamma_conformal, gamma_images, gamma_operator_strip
from .grid import PhysicalParams, SurfaceField, VortexState, make_grid
from .solvers import CoupledState, simulate, soliton_profile
from .spectral import Multiplier, apply_multiplier, dno_flat, dno_order1, dno_paper_exact
from .strength import omega_star_scale
from .vortex import asymptotic_range, integrate_soliton_vortex

__all__ = ["CheckResult", "SUITES", "run_suite", "format_report"]

FIGURE_DEPTHS = (-0.1, -6.0, -9.9)
FIGURE_K = (0.1, 0.05)
HORIZON = 2000.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    bound: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name},{self.measured:.6e},{self.bound:.6e},{status}"


def _below(name, measured, bound, detail=""):
    return CheckResult(name, float(measured), float(bound), bool(measured < bound), detail)


def _within(name, value, target, tol, detail=""):
    err = abs(value - target)
    return CheckResult(name, float(value), float(target), bool(err <= tol),
                       detail or f"target {target:g} +/- {tol:g}")


def _band_limited(grid, rng, jmax, scale=1.0):
    n = grid.n_points
    c = np.zeros(n // 2 + 1, dtype=complex)
    c[1:jmax + 1] = rng.normal(size=jmax) + 1j * rng.normal(size=jmax)
    return SurfaceField(grid, scale * grid.to_physical(c * n / np.sqrt(jmax)))


# ---------------------------------------------------------------------------
# operator identities
# ---------------------------------------------------------------------------

def check_flat_dno(n_fields: int = 20) -> list[CheckResult]:
    grid = make_grid(512, 100.0)
    params = PhysicalParams(h=10.0)
    rng = np.random.default_rng(20240501)
    zero = SurfaceField.zeros(grid)
    worst = {0: 0.0, 1: 0.0, 2: 0.0}
    for _ in range(n_fields):
        xi = _band_limited(grid, rng, 64)
        ref = dno_flat(xi, params).values
        for order in worst:
            got = dno_paper_exact(xi, zero, params, order).values
            worst[order] = max(worst[order], np.max(np.abs(got - ref)) / xi.max_abs())
    return [_below(f"flat_dno_order{k}", v, 1e-10) for k, v in worst.items()]


def check_craig_sulem(n_fields: int = 20) -> list[CheckResult]:
    grid = make_grid(512, 100.0)
    h = 10.0
    params = PhysicalParams(h=h)
    rng = np.random.default_rng(7)
    dx = Multiplier.derivative(1)
    g0 = Multiplier.d_tanh(h)
    worst = 0.0
    for _ in range(n_fields):
        xi = _band_limited(grid, rng, 60)
        eta = _band_limited(grid, rng, 60, scale=0.05)
        # G1 = D eta D - G0 eta G0 with D eta D = -d/dx eta d/dx, composed on
        # the full FFT without dealiasing
        d_eta_d = apply_multiplier(
            SurfaceField(grid, -eta.values * apply_multiplier(xi, dx).values), dx)
        g0_eta_g0 = apply_multiplier(
            SurfaceField(grid, eta.values * apply_multiplier(xi, g0).values), g0)
        ref = apply_multiplier(xi, g0).values + d_eta_d.values - g0_eta_g0.values
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            got = dno_order1(xi, eta, params).values
        worst = max(worst, np.max(np.abs(got - ref)) / np.max(np.abs(ref)))
    return [_below("craig_sulem_order1", worst, 1e-12)]


# ---------------------------------------------------------------------------
# Green functions
# ---------------------------------------------------------------------------

def _strip_lattice(h=1.0):
    grid = make_grid(1024, 40 * h, -20 * h)
    inside = np.flatnonzero(np.abs(grid.x) <= 5 * h)
    cols = inside[np.linspace(0, inside.size - 1, 50).round().astype(int)]
    zs = np.linspace(-h, 0, 22)[1:-1]
    return grid, cols, zs


def check_green_representations() -> list[CheckResult]:
    h = 1.0
    x0, z0 = 0.0, -0.5 * h
    grid, cols, zs = _strip_lattice(h)
    xs = grid.x[cols]
    X, Z = np.meshgrid(xs, zs)
    conf = gamma_conformal(X, Z, x0, z0, h)
    img = gamma_images(X, Z, x0, z0, h, n_terms=100)
    op = np.array([gamma_operator_strip(z, x0, z0, h, grid).values[cols] for z in zs])
    return [
        _below("green_images_vs_conformal", np.max(np.abs(conf - img)), 1e-8),
        _below("green_operator_vs_conformal", np.max(np.abs(conf - op)), 1e-6),
    ]


def _fd_laplacian_slope():
    h = 1.0
    x0, z0 = 0.0, -0.5
    pts = [(1.3, -0.2), (-0.7, -0.8), (2.0, -0.5), (0.4, -0.15)]
    steps = np.array([0.08, 0.04, 0.02, 0.01])
    errs = []
    for s in steps:
        worst = 0.0
        for x, z in pts:
            c = gamma_conformal(x, z, x0, z0, h)
            lap = (gamma_conformal(x + s, z, x0, z0, h) + gamma_conformal(x - s, z, x0, z0, h)
                   + gamma_conformal(x, z + s, x0, z0, h) + gamma_conformal(x, z - s, x0, z0, h)
                   - 4 * c) / s**2
            worst = max(worst, abs(lap))
        errs.append(worst)
    return float(np.polyfit(np.log(steps), np.log(errs), 1)[0])


def check_green_boundaries() -> list[CheckResult]:
    h = 1.0
    grid = make_grid(1024, 40 * h, -20 * h)
    top = gamma_operator_strip(0.0, 0.0, -0.5 * h, h, grid).max_abs()
    bottom = gamma_operator_strip(-h, 0.0, -0.5 * h, h, grid).max_abs()
    return [
        _below("green_operator_surface_zero", top, 1e-6),
        _below("green_operator_bottom_zero", bottom, 1e-6),
        _within("green_fd_laplacian_slope", _fd_laplacian_slope(), 2.0, 0.2),
    ]


# ---------------------------------------------------------------------------
# soliton-driven vortex
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def figure_trajectory(K: float, q20: float, dt: float = 0.05, horizon: float = HORIZON):
    """Trajectory through ``(0, q20)`` at ``t = 0`` over ``[-horizon, horizon]``."""
    params = PhysicalParams(h=10.0, g=9.81, K=K)
    return integrate_soliton_vortex(VortexState(0.0, q20), -horizon, horizon, dt, params,
                                    t_initial=0.0)


def check_conservation() -> list[CheckResult]:
    out = []
    for K in FIGURE_K:
        for q20 in FIGURE_DEPTHS:
            tr = figure_trajectory(K, q20)
            drift = float(np.max(np.abs(tr.conserved - tr.conserved[0])))
            out.append(_below(f"cl_drift_K{K:g}_q2{q20:g}", drift, 1e-8 * 10.0))
    return out


def check_range() -> list[CheckResult]:
    out = []
    for K in FIGURE_K:
        expected = asymptotic_range(PhysicalParams(h=10.0, K=K))
        for q20 in FIGURE_DEPTHS:
            exc = figure_trajectory(K, q20).excursion
            out.append(_below(f"range_rel_err_K{K:g}_q2{q20:g}",
                              abs(exc - expected) / expected, 1e-2,
                              f"excursion {exc:.6f} m vs {expected:.6f} m"))
    return out


def _extrema_count(q2, h):
    d = np.diff(q2)
    d = d[np.abs(d) > 1e-12 * h]
    return int(np.count_nonzero(np.sign(d[1:]) != np.sign(d[:-1])))


def check_figures() -> list[CheckResult]:
    out = []
    h = 10.0
    for K in FIGURE_K:
        excursions = []
        for q20 in FIGURE_DEPTHS:
            tr = figure_trajectory(K, q20)
            dec = max(0.0, float(-np.min(np.diff(tr.q1))))
            out.append(_below(f"q1_monotone_K{K:g}_q2{q20:g}", dec, 1e-12,
                              "largest decrease of q1 between samples"))
            n_ext = _extrema_count(tr.q2, h)
            out.append(CheckResult(f"q2_single_extremum_K{K:g}_q2{q20:g}", n_ext, 1,
                                   n_ext == 1, "number of q2 extrema"))
            excursions.append(float(tr.q2.max() - tr.q2.min()))
        # FIGURE_DEPTHS is ordered from shallow to deep, i.e. decreasing q2_0 + h
        steps = -np.diff(excursions)
        out.append(CheckResult(f"q2_excursion_ordered_K{K:g}", float(np.min(steps)), 0.0,
                               bool(np.all(steps > 0)),
                               "excursion must grow with q2_0 + h"))
    return out


# ---------------------------------------------------------------------------
# wave solvers
# ---------------------------------------------------------------------------

def _kdv_setup(x0=0.0):
    params = PhysicalParams(h=10.0, g=9.81, K=0.05, x0=x0)
    grid = make_grid(1024, 800.0, -400.0)
    return params, grid


def check_kdv_soliton(n_steps: int = 800) -> list[CheckResult]:
    params, grid = _kdv_setup()
    u0 = soliton_profile(grid, 0.0, params)
    T = grid.length / params.soliton_speed
    state = CoupledState(u0, VortexState(-300.0, -5.0), 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        end = simulate(state, T / n_steps, n_steps, "kdv_unperturbed", params,
                       sample_every=n_steps)[-1]
    exact = soliton_profile(grid, T, params)
    shape = np.max(np.abs(end.u.values - exact.values)) / end.u.max_abs()
    mass = abs(end.u.integral() - u0.integral()) / u0.integral()
    return [_below("kdv_shape_error", shape, 1e-3),
            _below("kdv_mass_drift", mass, 1e-10)]


def perturbation_sweep(factors=(1e-1, 1e-2, 1e-3), n_steps: int = 400):
    """Endpoint max-norm differences between perturbed and unperturbed runs.

    ``omega* = factor * h sqrt(gh) delta^2`` with ``delta = hK``; the vortex
    sits at mid-depth 200 m ahead of the soliton crest.
    """
    params, grid = _kdv_setup(x0=-200.0)
    u0 = soliton_profile(grid, 0.0, params)
    T = 400.0 / params.soliton_speed
    dt = T / n_steps
    scale = params.h * params.c * (params.h * params.K) ** 2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        base = simulate(CoupledState(u0, VortexState(0.0, -5.0)), dt, n_steps,
                        "kdv_unperturbed", params, sample_every=n_steps)[-1]
        omegas, diffs = [], []
        for f in factors:
            om = f * scale
            end = simulate(CoupledState(u0, VortexState(0.0, -5.0, om)), dt, n_steps,
                           "kdv_perturbed", params, sample_every=n_steps)[-1]
            omegas.append(om)
            diffs.append(float(np.max(np.abs(end.u.values - base.u.values))))
    return np.array(omegas), np.array(diffs)


def check_perturbation() -> list[CheckResult]:
    om, d = perturbation_sweep()
    slope = float(np.polyfit(np.log(om), np.log(d), 1)[0])
    return [_within("perturbation_slope", slope, 1.0, 0.1)]


# ---------------------------------------------------------------------------
# vortex-strength scalings
# ---------------------------------------------------------------------------

def scaling_slope(mu_of_delta) -> float:
    params = PhysicalParams(h=10.0)
    h = params.h
    deltas = np.geomspace(0.01, 0.1, 6)
    omegas = []
    for d in deltas:
        est = omega_star_scale(h * d**2, h / d, -mu_of_delta(d) * h, params)
        omegas.append(est.omega_star_bound / (h * math.sqrt(params.g * h)))
    return float(np.polyfit(np.log(deltas), np.log(omegas), 1)[0])


def check_scaling() -> list[CheckResult]:
    return [
        _within("scaling_depth_order_one", scaling_slope(lambda d: 0.5), 1.5, 0.05),
        _within("scaling_near_surface", scaling_slope(lambda d: d), 2.0, 0.05),
    ]


SUITES = {
    "dno": (check_flat_dno, check_craig_sulem),
    "greens": (check_green_representations, check_green_boundaries),
    "conservation": (check_conservation,),
    "range": (check_range,),
    "figures": (check_figures,),
    "kdv": (check_kdv_soliton,),
    "perturbation": (check_perturbation,),
    "scaling": (check_scaling,),
}


def run_suite(name: str = "all") -> list[CheckResult]:
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    results = []
    for n in names:
        for check in SUITES[n]:
            results.extend(check())
    return results


def format_report(results) -> str:
    return "\n".join(["criterion,measured,bound,status"] + [r.line() for r in results])
