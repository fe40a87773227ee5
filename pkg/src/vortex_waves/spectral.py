"""Fourier multipliers and the Dirichlet-Neumann operator.

``D = -i d/dx`` acts on ``exp(ikx)`` as multiplication by ``k``, so any
function of ``D`` is a Fourier multiplier.  Four forms of the DNO are given:

* :func:`dno_flat`         ``D tanh(hD)``
* :func:`dno_order1`       ``G0 + G1`` (first-order Taylor term in eta)
* :func:`dno_paper_exact`  the normal-ordered sinh/cosh formula truncated
  at order 0, 1 or 2 in eta
* :func:`dno_longwave`     ``-h xi_xx - h^3/3 xi_xxxx - (eta xi_x)_x``

Every pointwise product of physical fields goes through
:meth:`PeriodicGrid.product` (2/3-rule dealiasing).
"""

from __future__ import annotations

import warnings
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, UnsupportedOrderError
from .grid import PhysicalParams, SurfaceField

__all__ = [
    "Multiplier",
    "apply_multiplier",
    "dno_flat",
    "dno_order1",
    "dno_paper_exact",
    "dno_longwave",
    "sinh_ratio",
    "k_tanh",
    "k_coth",
    "k_cosh_over_sinh",
]


# ---------------------------------------------------------------------------
# numerically stable symbols (all even in k; evaluated on |k|)
# ---------------------------------------------------------------------------

def k_tanh(k, h):
    """Symbol of ``D tanh(hD)``."""
    k = np.abs(np.asarray(k, dtype=float))
    return k * np.tanh(h * k)


def k_coth(k, h):
    """Symbol of ``D coth(hD)``; its k -> 0 limit is ``1/h``."""
    k = np.abs(np.asarray(k, dtype=float))
    out = np.full(k.shape, 1.0 / h)
    nz = k > 0
    out[nz] = k[nz] / np.tanh(h * k[nz])
    return out


def sinh_ratio(k, a, h):
    """Symbol of ``sinh(aD) / sinh(hD)``; k -> 0 limit ``a/h``.

    Written with decaying exponentials so that large ``h|k|`` does not
    overflow when ``|a| <= h``.  Slightly larger ``|a|`` (slices above the
    still-water level) is allowed and grows like ``exp((|a| - h)|k|)``.
    """
    k = np.abs(np.asarray(k, dtype=float))
    out = np.full(k.shape, a / h)
    nz = k > 0
    kk = k[nz]
    aa = abs(a)
    val = np.exp(-(h - aa) * kk) * np.expm1(-2 * aa * kk) / np.expm1(-2 * h * kk)
    out[nz] = np.sign(a) * val
    return out


def k_cosh_over_sinh(k, z, h):
    """Symbol of ``D cosh(zD) / sinh(hD)`` for ``|z| <= h``; k -> 0 limit ``1/h``."""
    k = np.abs(np.asarray(k, dtype=float))
    out = np.full(k.shape, 1.0 / h)
    nz = k > 0
    kk = k[nz]
    az = abs(z)
    out[nz] = (
        kk * np.exp(-(h - az) * kk) * (1 + np.exp(-2 * az * kk))
        / -np.expm1(-2 * h * kk)
    )
    return out


@dataclass(frozen=True)
class Multiplier:
    """Fourier multiplier with symbol ``m(k)`` evaluated elementwise.

    Compose with ``*``: ``(m1 * m2)(k) = m1(k) m2(k)``.
    """

    symbol: Callable[[np.ndarray], np.ndarray]
    name: str = "m"

    def __call__(self, k):
        return np.asarray(self.symbol(np.asarray(k, dtype=float)))

    def __mul__(self, other: Multiplier) -> Multiplier:
        return Multiplier(lambda k: self(k) * other(k), f"{self.name}*{other.name}")

    @classmethod
    def identity(cls) -> Multiplier:
        return cls(lambda k: np.ones_like(k), "1")

    @classmethod
    def D(cls) -> Multiplier:
        return cls(lambda k: k, "D")

    @classmethod
    def derivative(cls, order: int = 1) -> Multiplier:
        return cls(lambda k: (1j * k) ** order, f"d^{order}")

    @classmethod
    def d_tanh(cls, h: float) -> Multiplier:
        return cls(lambda k: k_tanh(k, h), f"D tanh({h:g}D)")

    @classmethod
    def tanh(cls, h: float) -> Multiplier:
        """``tanh(h|D|)``; the even symbol keeps real fields real."""
        return cls(lambda k: np.tanh(h * np.abs(k)), f"tanh({h:g}|D|)")


def apply_multiplier(f: SurfaceField, m) -> SurfaceField:
    """Inverse transform of ``m(k) * fhat(k)``.

    ``m`` may be a :class:`Multiplier`, any callable of the wavenumber array,
    or an array matching the full FFT wavenumbers.  The symbol must map real
    fields to real fields (``m(-k) = conj(m(k))``).
    """
    grid = f.grid
    sym = m(grid.k) if callable(m) else np.asarray(m)
    sym = np.broadcast_to(sym, grid.k.shape).astype(complex)
    if not np.all(np.isfinite(sym)):
        raise NumericError("multiplier symbol is not finite on the grid")
    out = np.fft.ifft(sym * np.fft.fft(f.values))
    scale = max(np.max(np.abs(out.real)), np.finfo(float).tiny)
    if np.max(np.abs(out.imag)) > 1e-10 * scale + 1e-300:
        raise ValueError("multiplier does not map real fields to real fields")
    return SurfaceField(grid, out.real)


def _apply_even(grid, values, symbol_half):
    return grid.to_physical(symbol_half * grid.to_spectral(values))


def dno_flat(xi: SurfaceField, params: PhysicalParams) -> SurfaceField:
    """Flat-surface DNO ``G0 xi = D tanh(hD) xi``."""
    g = xi.grid
    return SurfaceField(g, _apply_even(g, xi.values, k_tanh(g.kr, params.h)))


def dno_order1(
    xi: SurfaceField, eta: SurfaceField, params: PhysicalParams
) -> SurfaceField:
    """``G0 xi + G1 xi`` with ``G1 = D eta D - D tanh(hD) eta D tanh(hD)``."""
    g = xi.grid
    h = params.h
    if eta.max_abs() > 0.2 * h:
        warnings.warn(
            f"max|eta| = {eta.max_abs():.3g} exceeds 0.2 h; first-order DNO "
            "truncation is unreliable",
            RuntimeWarning,
            stacklevel=2,
        )
    t = k_tanh(g.kr, h)
    g0 = _apply_even(g, xi.values, t)
    # D eta D xi = -(eta xi_x)_x
    d_eta_d = -g.derivative(g.product(eta.values, g.derivative(xi.values)))
    t_eta_t = _apply_even(g, g.product(eta.values, g0), t)
    return SurfaceField(g, g0 + d_eta_d - t_eta_t)


def dno_paper_exact(
    xi: SurfaceField, eta: SurfaceField, params: PhysicalParams, order: int = 1
) -> SurfaceField:
    """DNO from the normal-ordered formula, truncated at ``order`` powers of eta.

    ``G xi = -eta_x xi_x + (1 + eta_x^2) :sinh((eta+h)D): D [:cosh((eta+h)D):]^-1 xi``

    The normal-ordered operators are Taylor expanded in eta (coefficients to
    the left of the D-powers) and the inverse of ``:cosh:`` is expanded as a
    Neumann series around ``cosh(hD)``.  The ``cosh(hD)^-1`` factor is folded
    into the sinh legs analytically, leaving polynomially bounded symbols.
    """
    if order not in (0, 1, 2):
        raise UnsupportedOrderError(f"truncation order {order} not in {{0, 1, 2}}")
    g = xi.grid
    h = params.h
    e = eta.values
    kr = g.kr

    def ap(values, sym):
        return g.to_physical(sym * g.to_spectral(values))

    t1 = k_tanh(kr, h)        # D tanh(hD): from :cosh:^-1 first-order leg
    m0 = t1                   # sinh(hD) D / cosh(hD)
    m1 = kr**2                # D cosh(hD) D / cosh(hD) = D^2
    x = xi.values

    b0 = x
    out = ap(b0, m0)
    if order == 0:
        return SurfaceField(g, out)

    b1 = -g.product(e, ap(x, t1))
    p1 = ap(b1, m0) + g.product(e, ap(b0, m1))
    ex = g.derivative(e)
    out = out + p1 - g.product(ex, g.derivative(x))
    if order == 1:
        return SurfaceField(g, out)

    t2 = 0.5 * kr**2          # (D^2/2) cosh(hD) / cosh(hD)
    m2 = 0.5 * kr**3 * np.tanh(h * kr)   # (D^2/2) sinh(hD) D / cosh(hD)
    b2 = -g.product(e, e, ap(x, t2)) + g.product(e, ap(g.product(e, ap(x, t1)), t1))
    p2 = ap(b2, m0) + g.product(e, ap(b1, m1)) + g.product(e, e, ap(b0, m2))
    out = out + p2 + g.product(ex, ex, ap(b0, m0))
    return SurfaceField(g, out)


def dno_longwave(
    xi: SurfaceField, eta: SurfaceField, params: PhysicalParams
) -> SurfaceField:
    """Long-wave DNO ``-h xi_xx - (h^3/3) xi_xxxx - (eta xi_x)_x``."""
    g = xi.grid
    h = params.h
    lin = _apply_even(g, xi.values, h * g.kr**2 - h**3 * g.kr**4 / 3)
    nl = -g.derivative(g.product(eta.values, g.derivative(xi.values)))
    return SurfaceField(g, lin + nl)
