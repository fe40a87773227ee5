"""Surface-wave solvers coupled to the point vortex.

Three models share one integrating-factor RK4 (Lawson) stepper:

``kdv_unperturbed``
    u_t + c u_x + (c h^2/6) u_xxx + (3/4)(u^2)_x = 0
``kdv_perturbed``
    the same with the Bernoulli bracket ``{1/4 [u + w* Gz]^2 + 1/2 u^2}_x`` and
    the two-kernel vortex source
``boussinesq``
    eta_t + h u_x + (h^3/3) u_xxx + (eta u)_x = 0,
    u_t + g eta_x + {1/2 [u + w* Gz]^2}_x + source = 0

where ``Gz = Gamma_z(x, 0; q)``.  In every model the vortex obeys
``dq1/dt = u(q1)``, ``dq2/dt = -(q2 + h) u_x(q1)`` and is advanced with the
same RK stages as the field.  The linear part is integrated exactly in
Fourier space; quadratic terms are 2/3-rule dealiased.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ResolutionError, SolverAbort
from .green import surface_kernels
from .grid import PeriodicGrid, PhysicalParams, SurfaceField, VortexState
from .vortex import vortex_rhs_general

__all__ = [
    "MODELS",
    "CoupledState",
    "soliton_profile",
    "kdv_rhs_unperturbed",
    "perturbed_kdv_rhs",
    "boussinesq_rhs",
    "step_coupled",
    "simulate",
    "diagnostics",
    "Stepper",
    "boussinesq_initial",
]

MODELS = ("kdv_unperturbed", "kdv_perturbed", "boussinesq")
STABILITY_FACTOR = 0.5
GROWTH_LIMIT = 10.0


@dataclass(frozen=True)
class CoupledState:
    """Surface velocity ``u`` (and elevation ``eta`` for Boussinesq), vortex and time."""

    u: SurfaceField
    vortex: VortexState
    time: float = 0.0
    eta: SurfaceField | None = None

    @property
    def grid(self) -> PeriodicGrid:
        return self.u.grid


def soliton_profile(grid: PeriodicGrid, t: float, params: PhysicalParams) -> SurfaceField:
    """KdV soliton ``4ch^2K^2/3 sech^2(K(x - x0 - V t))`` on the periodic box.

    The crest position is wrapped into the box and each node uses its
    nearest periodic image of the crest.
    """
    K = params.K
    if K == 0:
        return SurfaceField.zeros(grid)
    if 1.0 / (K * grid.dx) < 16:
        raise ResolutionError(
            f"soliton width 1/K = {1 / K:.4g} m spans fewer than 16 grid points "
            f"(dx = {grid.dx:.4g} m)"
        )
    if math.cosh(K * grid.length / 2) ** -2 >= 1e-10:
        raise ResolutionError(
            "soliton tails exceed 1e-10 of the amplitude at the box edge; "
            f"increase L (now {grid.length:g} m)"
        )
    crest = params.x0 + params.soliton_speed * t
    s = (grid.x - crest + grid.length / 2) % grid.length - grid.length / 2
    return SurfaceField(grid, params.soliton_amplitude / np.cosh(K * s) ** 2)


def _sample(grid, coeffs, q1):
    """``u(q1)`` and ``u_x(q1)`` from rfft coefficients."""
    return (grid.interpolate_spectral(coeffs, q1),
            grid.interpolate_spectral(grid.ik * coeffs, q1))


def kdv_rhs_unperturbed(u: SurfaceField, params: PhysicalParams,
                        frame: str = "lab") -> SurfaceField:
    """``-[c u_x + (c h^2/6) u_xxx + (3/4)(u^2)_x]``.

    ``frame="moving"`` drops the ``c u_x`` term (coordinates ``X = x - ct``).
    """
    grid = u.grid
    uh = grid.to_spectral(u.values)
    lin = _kdv_linear_symbol(grid, params, frame)
    flux = _kdv_flux(grid, u.values, u.values)
    return SurfaceField(grid, grid.to_physical(lin * uh - grid.ik * grid.to_spectral(flux)))


def _kdv_flux(grid, u, w):
    # 1/4 w^2 + 1/2 u^2 ; with w = u this is the (3/4) u^2 flux
    return 0.25 * grid.product(w, w) + 0.5 * grid.product(u, u)


def _kdv_linear_symbol(grid, params, frame="lab"):
    c, h = params.c, params.h
    ik = grid.ik
    sym = -(c * h * h / 6) * ik**3
    if frame == "lab":
        sym = sym - c * ik
    elif frame != "moving":
        raise ConfigurationError(f"unknown frame {frame!r}")
    return sym


def _vortex_terms(grid, q, params):
    """Kernel ``Gz`` and source kernels, or ``None`` when the vortex is passive."""
    if q.omega_star == 0:
        return None
    return surface_kernels(grid, q, params.h)


def _perturbed_nonlinear(grid, u, q, params, kernels, uq, uxq):
    """Nonlinear + vortex part of the perturbed KdV right-hand side (spectral)."""
    w = u if kernels is None else u + q.omega_star * kernels[0]
    out = -grid.ik * grid.to_spectral(_kdv_flux(grid, u, w))
    if kernels is not None:
        _, gzq1, gzq2 = kernels
        src = 0.5 * q.omega_star * (gzq1 * uq - (q.q2 + params.h) * gzq2 * uxq)
        out = out - grid.to_spectral(src)
    return out


def perturbed_kdv_rhs(state: CoupledState, params: PhysicalParams):
    """Right-hand side of the vortex-perturbed KdV system.

    Returns ``(du, (dq1, dq2))``.  With ``omega_star == 0`` the field part is
    bitwise identical to :func:`kdv_rhs_unperturbed`.
    """
    grid = state.grid
    q = state.vortex.validate(params.h)
    u = state.u
    dq = vortex_rhs_general(q, u, u.derivative(), params.h)
    uq = grid.interpolate(u.values, q.q1)
    uxq = -dq[1] / (q.q2 + params.h)
    uh = grid.to_spectral(u.values)
    kernels = _vortex_terms(grid, q, params)
    if kernels is None:
        return kdv_rhs_unperturbed(u, params), dq
    rhs = _kdv_linear_symbol(grid, params) * uh
    rhs = rhs + _perturbed_nonlinear(grid, u.values, q, params, kernels, uq, uxq)
    return SurfaceField(grid, grid.to_physical(rhs)), dq


def _boussinesq_nonlinear(grid, eta, u, q, params, kernels, uq, uxq):
    """Spectral nonlinear parts ``(N_eta, N_u)`` of the Boussinesq system."""
    ik = grid.ik
    n_eta = -ik * grid.to_spectral(grid.product(eta, u))
    w = u if kernels is None else u + q.omega_star * kernels[0]
    n_u = -ik * grid.to_spectral(0.5 * grid.product(w, w))
    if kernels is not None:
        _, gzq1, gzq2 = kernels
        src = q.omega_star * (gzq1 * uq - (q.q2 + params.h) * gzq2 * uxq)
        n_u = n_u - grid.to_spectral(src)
    return n_eta, n_u


def boussinesq_rhs(state: CoupledState, params: PhysicalParams):
    """Right-hand side ``(deta, du, (dq1, dq2))`` of the Boussinesq-vortex system."""
    if state.eta is None:
        raise ConfigurationError("Boussinesq state needs an elevation field")
    grid = state.grid
    h, g = params.h, params.g
    q = state.vortex.validate(h)
    state.eta.check_elevation(h, 0.9)
    u, eta = state.u, state.eta
    dq = vortex_rhs_general(q, u, u.derivative(), h)
    uq = grid.interpolate(u.values, q.q1)
    uxq = -dq[1] / (q.q2 + h)
    ik = grid.ik
    uh, eh = grid.to_spectral(u.values), grid.to_spectral(eta.values)
    kernels = _vortex_terms(grid, q, params)
    n_eta, n_u = _boussinesq_nonlinear(grid, eta.values, u.values, q, params,
                                       kernels, uq, uxq)
    d_eta = -(h * ik + h**3 / 3 * ik**3) * uh + n_eta
    d_u = -g * ik * eh + n_u
    return (SurfaceField(grid, grid.to_physical(d_eta)),
            SurfaceField(grid, grid.to_physical(d_u)), dq)


class Stepper:
    """Lawson RK4 for one of :data:`MODELS` with a fixed step ``dt``.

    Works on rfft coefficients; ``Y`` is ``u_hat`` for KdV and a ``(2, nk)``
    array ``(eta_hat, u_hat)`` for Boussinesq.
    """

    def __init__(self, grid: PeriodicGrid, params: PhysicalParams, model: str,
                 dt: float, frame: str = "lab"):
        if model not in MODELS:
            raise ConfigurationError(f"unknown model {model!r}; choose from {MODELS}")
        if not dt > 0:
            raise ConfigurationError("dt must be positive")
        self.grid, self.params, self.model, self.dt = grid, params, model, dt
        self.frame = frame
        if model == "boussinesq":
            self._setup_boussinesq()
        else:
            lin = _kdv_linear_symbol(grid, params, frame)
            self._lin = lin
            self._E_half = np.exp(lin * dt / 2)
            self._E = np.exp(lin * dt)

    def _setup_boussinesq(self):
        grid, p = self.grid, self.params
        h, g = p.h, p.g
        k = grid.kr
        disp = 1 - h * h * k * k / 3
        # ill-posed band (disp <= 0) and the 2/3-rule band are removed
        self._filter = (disp > 0) & grid.dealias_mask
        self._filter[-1] = False
        self._a = grid.ik * h * np.where(self._filter, disp, 0.0)
        self._b = grid.ik * g
        self._omega = np.sqrt(np.where(self._filter, g * h * k * k * disp, 0.0))
        self._E_half = self._boussinesq_propagator(self.dt / 2)
        self._E = self._boussinesq_propagator(self.dt)

    def _boussinesq_propagator(self, tau):
        om = self._omega
        cs = np.cos(om * tau)
        sn = tau * np.sinc(om * tau / np.pi)      # sin(om tau)/om, -> tau at om = 0
        f = self._filter
        return (cs * f, -self._a * sn * f, -self._b * sn * f, cs * f)

    def _propagate(self, Y, which):
        E = self._E_half if which == "half" else self._E
        if self.model != "boussinesq":
            return E * Y
        e11, e12, e21, e22 = E
        return np.stack([e11 * Y[0] + e12 * Y[1], e21 * Y[0] + e22 * Y[1]])

    def nonlinear(self, Y, q1, q2, omega):
        """Spectral nonlinear term and vortex rates at state ``(Y, q)``."""
        grid, p = self.grid, self.params
        h = p.h
        if not grid.contains(q1):
            raise SolverAbort(f"vortex q1={q1:.6g} m left the grid domain")
        if not (-h < q2 < 0):
            raise SolverAbort(f"vortex q2={q2:.6g} m violates -h < q2 < 0 (h={h:g})")
        uh = Y[1] if self.model == "boussinesq" else Y
        uq, uxq = _sample(grid, uh, q1)
        # in the comoving frame q1 is measured from a point moving at c
        drift = p.c if self.frame == "moving" else 0.0
        dq = (uq - drift, -(q2 + h) * uxq)
        q = VortexState(q1, q2, omega)
        kernels = _vortex_terms(grid, q, p)
        u = grid.to_physical(uh)
        if self.model == "boussinesq":
            eta = grid.to_physical(Y[0])
            n_eta, n_u = _boussinesq_nonlinear(grid, eta, u, q, p, kernels, uq, uxq)
            N = np.stack([n_eta, n_u]) * self._filter
        else:
            N = _perturbed_nonlinear(grid, u, q, p, kernels, uq, uxq)
        return N, dq

    def step(self, Y, q1, q2, omega):
        dt = self.dt
        om = omega if self.model != "kdv_unperturbed" else 0.0
        na, (a1, a2) = self.nonlinear(Y, q1, q2, om)
        Yh = self._propagate(Y, "half")
        nb, (b1, b2) = self.nonlinear(self._propagate(Y + dt / 2 * na, "half"),
                                      q1 + dt / 2 * a1, q2 + dt / 2 * a2, om)
        nc, (c1, c2) = self.nonlinear(Yh + dt / 2 * nb, q1 + dt / 2 * b1,
                                      q2 + dt / 2 * b2, om)
        nd, (d1, d2) = self.nonlinear(self._propagate(Yh + dt * nc, "half"),
                                      q1 + dt * c1, q2 + dt * c2, om)
        Ynew = (self._propagate(Y + dt / 6 * na, "full")
                + dt / 3 * self._propagate(nb + nc, "half") + dt / 6 * nd)
        q1n = q1 + dt / 6 * (a1 + 2 * b1 + 2 * c1 + d1)
        q2n = q2 + dt / 6 * (a2 + 2 * b2 + 2 * c2 + d2)
        return Ynew, q1n, q2n

    # conversions ----------------------------------------------------------
    def pack(self, state: CoupledState):
        g = self.grid
        if self.model == "boussinesq":
            if state.eta is None:
                raise ConfigurationError("Boussinesq state needs an elevation field")
            return np.stack([g.to_spectral(state.eta.values), g.to_spectral(state.u.values)])
        return g.to_spectral(state.u.values)

    def unpack(self, Y, q1, q2, omega, t) -> CoupledState:
        g = self.grid
        if self.model == "boussinesq":
            return CoupledState(SurfaceField(g, g.to_physical(Y[1])),
                                VortexState(q1, q2, omega), t,
                                SurfaceField(g, g.to_physical(Y[0])))
        return CoupledState(SurfaceField(g, g.to_physical(Y)), VortexState(q1, q2, omega), t)


def _check_step(grid, before, Y, model, params, t):
    u = grid.to_physical(Y[1] if model == "boussinesq" else Y)
    if not np.all(np.isfinite(u)):
        raise SolverAbort(f"non-finite surface velocity at t={t:.6g} s")
    m = float(np.max(np.abs(u)))
    if before > 0 and m > GROWTH_LIMIT * before:
        raise SolverAbort(
            f"instability detected at t={t:.6g} s: max|u| grew from {before:.4g} "
            f"to {m:.4g} m/s in one step"
        )
    if model == "boussinesq":
        eta = grid.to_physical(Y[0])
        if float(np.max(np.abs(eta))) >= 0.9 * params.h:
            raise SolverAbort(f"surface elevation reached 0.9 h at t={t:.6g} s")
    return m


def _warn_dt(grid, dt, umax):
    if umax > 0 and dt > STABILITY_FACTOR * grid.dx / umax:
        warnings.warn(
            f"dt={dt:g} s exceeds the explicit bound {STABILITY_FACTOR} dx/max|u| = "
            f"{STABILITY_FACTOR * grid.dx / umax:.4g} s",
            RuntimeWarning,
            stacklevel=3,
        )


def step_coupled(state: CoupledState, dt: float, model: str,
                 params: PhysicalParams) -> CoupledState:
    """Advance ``state`` by one step of ``dt`` seconds."""
    stepper = Stepper(state.grid, params, model, dt)
    state.vortex.validate(params.h)
    Y = stepper.pack(state)
    umax = state.u.max_abs()
    _warn_dt(state.grid, dt, umax)
    q = state.vortex
    Y, q1, q2 = stepper.step(Y, q.q1, q.q2, q.omega_star)
    t = state.time + dt
    _check_step(state.grid, umax, Y, model, params, t)
    if not (-params.h < q2 < 0):
        raise SolverAbort(f"vortex q2={q2:.6g} m violates -h < q2 < 0 at t={t:.6g} s")
    return stepper.unpack(Y, q1, q2, q.omega_star, t)


def simulate(state: CoupledState, dt: float, n_steps: int, model: str,
             params: PhysicalParams, sample_every: int = 1, frame: str = "lab"):
    """Run ``n_steps`` steps; return the list of sampled states (first and last included)."""
    if model == "boussinesq" and frame != "lab":
        raise ConfigurationError("Boussinesq model is only available in the lab frame")
    grid = state.grid
    stepper = Stepper(grid, params, model, dt, frame)
    state.vortex.validate(params.h)
    Y = stepper.pack(state)
    q1, q2, om = state.vortex.q1, state.vortex.q2, state.vortex.omega_star
    umax = state.u.max_abs()
    _warn_dt(grid, dt, umax)
    out = [state]
    for i in range(1, n_steps + 1):
        Y, q1, q2 = stepper.step(Y, q1, q2, om)
        t = state.time + i * dt
        umax = _check_step(grid, umax, Y, model, params, t)
        if not (-params.h < q2 < 0):
            raise SolverAbort(f"vortex q2={q2:.6g} m violates -h < q2 < 0 at t={t:.6g} s")
        if i % sample_every == 0 or i == n_steps:
            out.append(stepper.unpack(Y, q1, q2, om, t))
    return out


def diagnostics(state: CoupledState) -> dict:
    """Mass ``int u dx``, ``int eta dx``, momentum ``int u^2 dx`` and ``max|u|``."""
    u = state.u
    return {
        "mass_u": u.integral(),
        "mass_eta": state.eta.integral() if state.eta is not None else 0.0,
        "momentum": u.grid.integrate(u.values**2),
        "max_u": u.max_abs(),
    }


def boussinesq_initial(u: SurfaceField, params: PhysicalParams) -> SurfaceField:
    """Right-going elevation ``eta = (h/c) u`` matching a surface velocity."""
    return SurfaceField(u.grid, params.h / params.c * u.values)
