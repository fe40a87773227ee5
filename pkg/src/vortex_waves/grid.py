"""Periodic grids, surface fields and the physical parameter containers.

The infinite line of the water-wave problem is represented by a periodic box
of length ``L`` which must be long enough for every field to decay to round-off
at its edges.  Fields live in physical space; spectral coefficients are
computed on demand with the real FFT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = [
    "PeriodicGrid",
    "SurfaceField",
    "PhysicalParams",
    "VortexState",
    "make_grid",
]


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid of ``n_points`` nodes on ``[origin, origin + length)``.

    Wavenumbers follow the standard FFT ordering ``k_j = 2 pi j / L`` for
    ``j`` in ``[-n/2, n/2)``.
    """

    n_points: int
    length: float
    origin: float = 0.0

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise ConfigurationError(
                f"n_points must be a power of two >= 8, got {n!r}"
            )
        if not (math.isfinite(self.length) and self.length > 0):
            raise ConfigurationError(f"length must be positive, got {self.length!r}")
        if not math.isfinite(self.origin):
            raise ConfigurationError("origin must be finite")

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        return self.origin + self.dx * np.arange(self.n_points)

    @cached_property
    def k(self) -> np.ndarray:
        """Full FFT wavenumbers in standard ordering (1/m)."""
        return 2 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    @cached_property
    def kr(self) -> np.ndarray:
        """Non-negative wavenumbers matching ``np.fft.rfft`` output."""
        return 2 * np.pi * np.fft.rfftfreq(self.n_points, d=self.dx)

    @property
    def k_max(self) -> float:
        return math.pi * self.n_points / self.length

    @cached_property
    def ik(self) -> np.ndarray:
        """First-derivative multiplier on the rfft half spectrum, Nyquist zeroed."""
        m = 1j * self.kr
        m[-1] = 0.0
        return m

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask on the rfft half spectrum."""
        j = np.arange(self.kr.size)
        return j <= self.n_points // 3

    # spectral transforms -------------------------------------------------
    def to_spectral(self, values) -> np.ndarray:
        return np.fft.rfft(np.asarray(values, dtype=float))

    def to_physical(self, coeffs) -> np.ndarray:
        return np.fft.irfft(coeffs, n=self.n_points)

    def derivative(self, values, order: int = 1) -> np.ndarray:
        """Spectral derivative ``d^order/dx^order``.

        Odd orders use the Nyquist-zeroed multiplier; even orders use
        ``(ik)^order`` directly.
        """
        if order == 0:
            return np.asarray(values, dtype=float).copy()
        mult = self.ik**order if order % 2 else (1j * self.kr) ** order
        return self.to_physical(mult * self.to_spectral(values))

    def dealias(self, values) -> np.ndarray:
        return self.to_physical(self.dealias_mask * self.to_spectral(values))

    def product(self, *factors) -> np.ndarray:
        """Pointwise product of physical fields with 2/3-rule dealiasing.

        Every factor is truncated to the retained band and so is the result,
        which removes all aliasing from a quadratic product.
        """
        mask = self.dealias_mask
        out = None
        for f in factors:
            fc = self.to_physical(mask * self.to_spectral(f))
            out = fc if out is None else out * fc
        return self.to_physical(mask * self.to_spectral(out))

    # quadrature and interpolation ----------------------------------------
    def integrate(self, values) -> float:
        """Periodic trapezoid rule, equal to ``mean * L``."""
        return float(np.sum(values) * self.dx)

    def contains(self, x: float) -> bool:
        return self.origin <= x < self.origin + self.length

    def interpolate(self, values, x) -> np.ndarray | float:
        """Band-limited (trigonometric) interpolation at arbitrary ``x``."""
        coeffs = self.to_spectral(values)
        return self.interpolate_spectral(coeffs, x)

    def interpolate_spectral(self, coeffs, x) -> np.ndarray | float:
        n = self.n_points
        c = np.array(coeffs, dtype=complex)
        c[1:] *= 2.0
        if n % 2 == 0:
            c[-1] *= 0.5
        s = np.asarray(x, dtype=float) - self.origin
        phase = np.exp(1j * np.multiply.outer(s, self.kr))
        out = (phase @ c).real / n
        return float(out) if np.ndim(out) == 0 else out

    def definite_integral(self, values, a: float, b: float) -> float:
        """Exact integral of the trigonometric interpolant over ``[a, b]``."""
        n = self.n_points
        c = self.to_spectral(values) / n
        c[1:] *= 2.0
        c[-1] *= 0.5
        sa, sb = a - self.origin, b - self.origin
        total = c[0].real * (b - a)
        kk = self.kr[1:]
        total += np.sum(
            (c[1:] * (np.exp(1j * kk * sb) - np.exp(1j * kk * sa)) / (1j * kk)).real
        )
        return float(total)


def make_grid(n_points: int, L: float, origin: float = 0.0) -> PeriodicGrid:
    """Build a :class:`PeriodicGrid`, raising ``ConfigurationError`` if invalid."""
    return PeriodicGrid(int(n_points) if float(n_points).is_integer() else n_points,
                        float(L), float(origin))


@dataclass(frozen=True, eq=False)
class SurfaceField:
    """Real field sampled on a :class:`PeriodicGrid`.

    Units depend on the role: elevation in m, potential trace in m^2/s,
    long-wave velocity in m/s.
    """

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_points,):
            raise ConfigurationError(
                f"field has shape {v.shape}, grid expects ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("field contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: PeriodicGrid, func) -> SurfaceField:
        return cls(grid, func(grid.x))

    @classmethod
    def zeros(cls, grid: PeriodicGrid) -> SurfaceField:
        return cls(grid, np.zeros(grid.n_points))

    def spectral(self) -> np.ndarray:
        return self.grid.to_spectral(self.values)

    def derivative(self, order: int = 1) -> SurfaceField:
        return SurfaceField(self.grid, self.grid.derivative(self.values, order))

    def at(self, x):
        return self.grid.interpolate(self.values, x)

    def integral(self) -> float:
        return self.grid.integrate(self.values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def check_elevation(self, h: float, fraction: float = 1.0) -> None:
        """Raise ``DomainError`` unless ``max|eta| < fraction * h``."""
        if self.max_abs() >= fraction * h:
            raise DomainError(
                f"surface elevation max|eta| = {self.max_abs():.6g} m reaches "
                f"{fraction:g} * depth ({fraction * h:.6g} m)"
            )

    def __repr__(self):
        return f"SurfaceField(n={self.grid.n_points}, max|f|={self.max_abs():.4g})"


@dataclass(frozen=True)
class PhysicalParams:
    """Depth ``h`` (m), gravity ``g`` (m/s^2) and soliton parameters ``K``, ``x0``."""

    h: float = 10.0
    g: float = 9.81
    K: float = 0.0
    x0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise ConfigurationError(f"depth h must be positive, got {self.h!r}")
        if not (math.isfinite(self.g) and self.g > 0):
            raise ConfigurationError(f"gravity g must be positive, got {self.g!r}")
        if not (math.isfinite(self.K) and self.K >= 0):
            raise ConfigurationError(f"soliton parameter K must be >= 0, got {self.K!r}")
        if not math.isfinite(self.x0):
            raise ConfigurationError("soliton offset x0 must be finite")

    @property
    def c(self) -> float:
        """Linear long-wave speed sqrt(g h)."""
        return math.sqrt(self.g * self.h)

    @property
    def long_wave_valid(self) -> bool:
        return 2 * self.h**2 * self.K**2 < 3

    @property
    def soliton_speed(self) -> float:
        return (1 + 2 * self.h**2 * self.K**2 / 3) * self.c

    @property
    def soliton_amplitude(self) -> float:
        return 4 * self.c * self.h**2 * self.K**2 / 3


@dataclass(frozen=True)
class VortexState:
    """Point-vortex position ``(q1, q2)`` in m and strength ``omega_star`` in m^2/s."""

    q1: float
    q2: float
    omega_star: float = 0.0

    def validate(self, h: float) -> VortexState:
        if not (math.isfinite(self.q1) and math.isfinite(self.q2)):
            raise DomainError("vortex position must be finite")
        if not (-h < self.q2 < 0):
            raise DomainError(
                f"vortex must satisfy -h < q2 < 0 (h={h:g}), got q2={self.q2:g}"
            )
        return self

    def moved(self, q1: float, q2: float) -> VortexState:
        return VortexState(q1, q2, self.omega_star)
