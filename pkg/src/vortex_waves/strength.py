"""Order-of-magnitude estimates for the vortex strength.

The vortex can only be treated as a perturbation of the wave if the kinetic
energy it induces at the surface is comparable to the wave's potential
energy.  Balancing the two gives

    omega*^2 ~ 2 pi lambda g a^2 |q2| / h

which, with ``a/h = eps ~ delta^2`` and ``lambda = h/delta``, scales as
``delta^(3/2)`` for a deep vortex and ``delta^2`` for one near the surface.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, SingularityError
from .grid import PhysicalParams, SurfaceField

__all__ = [
    "RegimeOrder",
    "RegimeEstimate",
    "average_wave_energies",
    "vortex_surface_energy",
    "omega_star_scale",
    "omega_star_from_energy_balance",
]


class RegimeOrder(enum.Enum):
    DEPTH_ORDER_ONE = "depth_order_one"
    NEAR_SURFACE = "near_surface"

    @property
    def exponent(self) -> float:
        """Power of ``delta`` in ``omega* / (h sqrt(gh))``."""
        return 1.5 if self is RegimeOrder.DEPTH_ORDER_ONE else 2.0


@dataclass(frozen=True)
class RegimeEstimate:
    epsilon: float
    delta: float
    mu: float
    omega_star_bound: float
    regime_order: RegimeOrder

    def __post_init__(self):
        if not 0 < self.mu < 1:
            raise DomainError(f"mu = |q2|/h must lie in (0, 1), got {self.mu:g}")
        if not (self.epsilon > 0 and self.delta > 0):
            raise DomainError("epsilon and delta must be positive")


def average_wave_energies(u: SurfaceField, eta: SurfaceField, lam: float,
                          params: PhysicalParams) -> tuple[float, float]:
    """Wavelength averages ``E1 = <u^2>/2`` and ``E2 = <g eta^2 / h>/2`` over ``[0, lam]``.

    The integrals are exact for the band-limited interpolant, so ``lam`` need
    not be a multiple of the grid spacing.
    """
    grid = u.grid
    if not 0 < lam <= grid.length:
        raise DomainError(f"lambda = {lam:g} m must lie in (0, L = {grid.length:g} m]")
    e1 = grid.definite_integral(u.values**2, 0.0, lam) / (2 * lam)
    e2 = params.g / params.h * grid.definite_integral(eta.values**2, 0.0, lam) / (2 * lam)
    # the interpolant of a square can dip below zero by round-off
    return max(e1, 0.0), max(e2, 0.0)


def vortex_surface_energy(omega_star: float, lam: float, q2: float) -> float:
    """Surface kinetic energy ``omega*^2 / (8 pi lam |q2|)`` of a free-space vortex."""
    if q2 == 0:
        raise SingularityError("vortex at the surface (q2 = 0): energy is unbounded")
    if q2 > 0:
        raise DomainError(f"vortex must lie below the surface, got q2 = {q2:g}")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam:g}")
    return omega_star**2 / (8 * math.pi * lam * abs(q2))


def omega_star_from_energy_balance(a: float, lam: float, q2: float,
                                   params: PhysicalParams) -> float:
    """``omega*`` for which the vortex surface energy equals ``g a^2 / (4h)``."""
    return math.sqrt(8 * math.pi * lam * abs(q2) * params.g * a * a / (4 * params.h))


def omega_star_scale(a: float, lam: float, q2: float, params: PhysicalParams,
                     constant: float = 1.0) -> RegimeEstimate:
    """Vortex-strength bound ``constant * sqrt(2 pi lam g a^2 |q2| / h)`` and its regime.

    The vortex counts as near the surface when ``mu < sqrt(delta)``, i.e.
    when ``mu`` is closer to ``delta`` than to 1 on a log scale.
    """
    h = params.h
    if not (a > 0 and lam > 0):
        raise DomainError("amplitude and wavelength must be positive")
    if not -h < q2 < 0:
        raise DomainError(f"vortex must satisfy -h < q2 < 0 (h={h:g}), got q2={q2:g}")
    delta = h / lam
    mu = abs(q2) / h
    bound = constant * math.sqrt(2 * math.pi * lam * params.g * a * a * abs(q2) / h)
    order = RegimeOrder.NEAR_SURFACE if mu < math.sqrt(delta) else RegimeOrder.DEPTH_ORDER_ONE
    return RegimeEstimate(a / h, delta, mu, bound, order)
