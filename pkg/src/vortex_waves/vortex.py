"""Point-vortex motion in the small-amplitude long-wave regime.

The vortex is carried by the surface velocity ``u`` (= xi_x):

    dq1/dt = u(q1),        dq2/dt = -(q2 + h) u_x(q1)

When ``u`` is the KdV soliton the right-hand side is closed form and the
first equation has the exact first integral :func:`conservation_value`.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeError, SolverAbort
from .grid import PhysicalParams, SurfaceField, VortexState

__all__ = [
    "VortexTrajectory",
    "vortex_rhs_general",
    "vortex_rhs_soliton",
    "soliton_rhs",
    "integrate_vortex",
    "integrate_soliton_vortex",
    "default_max_step",
    "conservation_value",
    "asymptotic_range",
]

Rhs = Callable[[float, float, float], tuple[float, float]]


@dataclass(frozen=True)
class VortexTrajectory:
    times: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    conserved: np.ndarray

    def __len__(self):
        return self.times.size

    @property
    def excursion(self) -> float:
        """Net horizontal displacement ``q1(end) - q1(start)``."""
        return float(self.q1[-1] - self.q1[0])

    def concat(self, other: VortexTrajectory) -> VortexTrajectory:
        """Join two trajectories, dropping a duplicated junction sample."""
        a, b = self, other
        if a.times.size and b.times.size and a.times[-1] == b.times[0]:
            b = VortexTrajectory(b.times[1:], b.q1[1:], b.q2[1:], b.conserved[1:])
        return VortexTrajectory(
            np.concatenate([a.times, b.times]),
            np.concatenate([a.q1, b.q1]),
            np.concatenate([a.q2, b.q2]),
            np.concatenate([a.conserved, b.conserved]),
        )

    def reversed(self) -> VortexTrajectory:
        return VortexTrajectory(self.times[::-1], self.q1[::-1], self.q2[::-1],
                                self.conserved[::-1])


def vortex_rhs_general(q: VortexState, u: SurfaceField, u_x: SurfaceField | None,
                       h: float) -> tuple[float, float]:
    """Vortex velocity from an arbitrary surface field, sampled spectrally at ``q1``."""
    grid = u.grid
    if not grid.contains(q.q1):
        raise DomainError(f"q1={q.q1:g} lies outside the grid domain")
    if u_x is None:
        u_x = u.derivative()
    uq = grid.interpolate(u.values, q.q1)
    uxq = grid.interpolate(u_x.values, q.q1)
    return uq, -(q.q2 + h) * uxq


def soliton_rhs(params: PhysicalParams) -> Rhs:
    """Closed-form vortex velocity ``(t, q1, q2) -> (dq1, dq2)`` under the soliton."""
    c, h, K = params.c, params.h, params.K
    A = 4 * c * h * h * K * K / 3
    V = params.soliton_speed
    x0 = params.x0
    cosh, sinh = math.cosh, math.sinh

    def rhs(t, q1, q2):
        th = K * (q1 - x0 - V * t)
        if abs(th) > 350.0:
            return 0.0, 0.0
        ch = cosh(th)
        return A / (ch * ch), (q2 + h) * 2 * K * A * sinh(th) / (ch * ch * ch)

    return rhs


def vortex_rhs_soliton(q: VortexState, t: float,
                       params: PhysicalParams) -> tuple[float, float]:
    """Vortex velocity under the exact KdV soliton at time ``t``."""
    return soliton_rhs(params)(t, q.q1, q.q2)


def conservation_value(q1, t, params: PhysicalParams):
    """First integral of ``dq1/dt`` under the soliton (metres).

    ``q1 + 2h/s * arctan(2hK tanh(K(q1 - x0 - Vt)) / s)`` with ``s = sqrt(3 - 2h^2K^2)``.
    """
    h, K = params.h, params.K
    disc = 3 - 2 * h * h * K * K
    if disc <= 0:
        raise RegimeError(f"3 - 2 h^2 K^2 = {disc:g} <= 0; long-wave regime violated")
    s = math.sqrt(disc)
    th = K * (np.asarray(q1, dtype=float) - params.x0 - params.soliton_speed * np.asarray(t))
    out = np.asarray(q1, dtype=float) + 2 * h / s * np.arctan(2 * h * K * np.tanh(th) / s)
    return float(out) if out.ndim == 0 else out


def asymptotic_range(params: PhysicalParams) -> float:
    """``q1(+inf) - q1(-inf) = 4h/s * arctan(2hK/s)``, ``s = sqrt(3 - 2h^2K^2)``."""
    h, K = params.h, params.K
    disc = 3 - 2 * h * h * K * K
    if disc <= 0:
        raise RegimeError(f"3 - 2 h^2 K^2 = {disc:g} <= 0; long-wave regime violated")
    s = math.sqrt(disc)
    return 4 * h / s * math.atan(2 * h * K / s)


def integrate_vortex(q0: VortexState, t0: float, t1: float, dt: float, rhs: Rhs,
                     *, depth: float,
                     invariant: Callable[[float, float], float] | None = None,
                     substeps: int = 1,
                     ) -> VortexTrajectory:
    """Classical RK4 from ``t0`` to ``t1``, sampled every ``dt`` (backwards if ``t1 < t0``).

    Each sample interval is covered by ``substeps`` equal RK4 steps.  The
    interval is shrunk slightly, if needed, so that an integer number of
    samples lands exactly on ``t1``.  Raises :class:`SolverAbort` as soon as
    ``q2`` leaves ``(-depth, 0)``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if substeps < 1:
        raise ValueError("substeps must be >= 1")
    q0.validate(depth)
    span = t1 - t0
    n = int(round(abs(span) / dt))
    if abs(n * dt - abs(span)) > 1e-9 * max(abs(span), dt):
        n = int(math.ceil(abs(span) / dt))
    step = span / n if n else 0.0

    times = t0 + step * np.arange(n + 1)
    if n:
        times[-1] = t1
    q1s = np.empty(n + 1)
    q2s = np.empty(n + 1)
    a, b = float(q0.q1), float(q0.q2)
    q1s[0], q2s[0] = a, b
    sub = step / substeps
    h2 = 0.5 * sub
    for i in range(n):
        for j in range(substeps):
            t = times[i] + j * sub
            k1a, k1b = rhs(t, a, b)
            k2a, k2b = rhs(t + h2, a + h2 * k1a, b + h2 * k1b)
            k3a, k3b = rhs(t + h2, a + h2 * k2a, b + h2 * k2b)
            k4a, k4b = rhs(t + sub, a + sub * k3a, b + sub * k3b)
            a += sub / 6 * (k1a + 2 * k2a + 2 * k3a + k4a)
            b += sub / 6 * (k1b + 2 * k2b + 2 * k3b + k4b)
        if not (-depth < b < 0) or not math.isfinite(a):
            raise SolverAbort(
                f"vortex left the fluid at t={times[i + 1]:.6g} s: q2={b:.6g} m "
                f"violates -h < q2 < 0 (h={depth:g})"
            )
        q1s[i + 1], q2s[i + 1] = a, b
    if invariant is None:
        conserved = np.full(n + 1, np.nan)
    else:
        conserved = np.asarray(invariant(q1s, times), dtype=float)
    return VortexTrajectory(times, q1s, q2s, conserved)


def default_max_step(params: PhysicalParams) -> float:
    """Largest RK4 step for soliton driving, ``0.02 / (K V)`` (inf when K = 0)."""
    if params.K == 0:
        return math.inf
    return 0.02 / (params.K * params.soliton_speed)


def integrate_soliton_vortex(q0: VortexState, t0: float, t1: float, dt: float,
                             params: PhysicalParams, t_initial: float | None = None,
                             max_step: float | None = None) -> VortexTrajectory:
    """Soliton-driven trajectory over ``[t0, t1]`` from ``q0`` given at ``t_initial``.

    Samples are spaced ``dt``; the RK4 step itself never exceeds ``max_step``,
    which defaults to ``0.02 / (K V)`` (about 50 steps per soliton passage
    time ``1/(K V)``).  With ``t_initial`` inside the span the run is
    integrated backwards to ``t0`` and forwards to ``t1`` and stitched.
    """
    rhs = soliton_rhs(params)
    if max_step is None:
        max_step = default_max_step(params)
    substeps = max(1, math.ceil(dt / max_step - 1e-12)) if max_step else 1
    inv = None
    if params.long_wave_valid:
        def inv(q1, t):
            return conservation_value(q1, t, params)
    ti = t0 if t_initial is None else t_initial
    if not (min(t0, t1) <= ti <= max(t0, t1)):
        raise ValueError("t_initial must lie inside [t0, t1]")
    back = integrate_vortex(q0, ti, t0, dt, rhs, depth=params.h, invariant=inv,
                            substeps=substeps)
    fwd = integrate_vortex(q0, ti, t1, dt, rhs, depth=params.h, invariant=inv,
                           substeps=substeps)
    return back.reversed().concat(fwd)
