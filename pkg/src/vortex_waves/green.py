"""Dirichlet Green functions of the Laplacian on the strip ``-h < z < 0``.

Representations:

* :func:`gamma_free`           free-space ``(1/4pi) ln r^2``
* :func:`gamma_conformal`      closed form from the conformal map
* :func:`gamma_images`         symmetric partial product of image charges
* :func:`gamma_operator_strip` operator form with ``sinh(.D)/sinh(hD)`` legs
* :func:`gamma_wavy`           operator form for a wavy surface, order 0 or 1

plus the surface-evaluated derivatives that drive the long-wave vortex
equations.  Logarithms of dimensional squared distances are used verbatim.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.special import zeta

from .errors import DomainError, SingularityError, UnsupportedOrderError
from .grid import PeriodicGrid, SurfaceField, VortexState
from .spectral import k_coth, k_cosh_over_sinh, sinh_ratio

__all__ = [
    "gamma_free",
    "gamma_conformal",
    "gamma_images",
    "gamma_operator_strip",
    "gamma_wavy",
    "gamma_wavy_slice",
    "grad_gamma_strip",
    "gamma_z_surface",
    "second_derivs_surface",
    "surface_kernels",
]

FOUR_PI = 4 * math.pi


def _coincident(x, z, x0, z0):
    return np.any((np.asarray(x) == x0) & (np.asarray(z) == z0))


def _check_source(z0, h):
    if not (-h < z0 < 0):
        raise DomainError(f"source must lie strictly inside the strip, got z0={z0:g}")


def _near_boundary_warning(q2, h):
    if abs(q2) < 0.01 * h or abs(q2 + h) < 0.01 * h:
        warnings.warn(
            f"vortex at q2={q2:g} lies within 0.01 h of a boundary; surface "
            "kernels develop steep gradients",
            RuntimeWarning,
            stacklevel=3,
        )


def _sech(u):
    a = np.exp(-np.abs(u))
    return 2 * a / (1 + a * a)


def gamma_free(x, z, x0, z0):
    """Free-space Green function ``(1/4pi) ln((x-x0)^2 + (z-z0)^2)``."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    r2 = (x - x0) ** 2 + (z - z0) ** 2
    if np.any(r2 == 0):
        raise SingularityError("field point coincides with the source")
    out = np.log(r2) / FOUR_PI
    return float(out) if out.ndim == 0 else out


def gamma_conformal(x, z, x0, z0, h):
    """Strip Green function from the conformal map.

    Evaluated as ``(1/4pi) log1p(-2 sin(pi z/h) sin(pi z0/h) / (C - cos(pi(z+z0)/h)))``
    with ``C = cosh(pi(x-x0)/h)``; the identity is exact and keeps the far
    field accurate without overflowing ``cosh``.  Returns exactly 0 on
    ``z = 0`` and ``z = -h``.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    _check_source(z0, h)
    if np.any((z > 0) | (z < -h)):
        raise DomainError("field point outside the strip")
    if _coincident(x, z, x0, z0):
        raise SingularityError("field point coincides with the source")
    u = math.pi * (x - x0) / h
    sech = _sech(u)
    num = -2 * np.sin(math.pi * z / h) * math.sin(math.pi * z0 / h) * sech
    den = 1 - np.cos(math.pi * (z + z0) / h) * sech
    out = np.log1p(num / den) / FOUR_PI
    out = np.where((z == 0) | (z == -h), 0.0, out)
    return float(out) if out.ndim == 0 else out


def _log_series_coeffs(a, b):
    """Coefficients of ``ln(1 + a t + b t^2)`` in powers ``t..t^4``."""
    return (
        a,
        b - a * a / 2,
        -a * b + a**3 / 3,
        -b * b / 2 + a * a * b - a**4 / 4,
    )


def gamma_images(x, z, x0, z0, h, n_terms: int = 100, tail_correction: bool = True):
    """Method-of-images product over ``n`` in ``[-n_terms, n_terms]``.

    The symmetric partial product converges like ``1/n_terms``.  With
    ``tail_correction`` the remainder ``sum_{|n| > n_terms}`` is added from
    its large-``n`` expansion through ``n^-8`` (Hurwitz zeta sums), which
    leaves an error of order ``n_terms^-9``.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be non-negative")
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    _check_source(z0, h)
    if _coincident(x, z, x0, z0):
        raise SingularityError("field point coincides with the source")
    X2 = (x - x0) ** 2
    Z = z - z0
    W = z + z0
    total = np.zeros(np.broadcast(x, z).shape)
    for n in range(-n_terms, n_terms + 1):
        total += np.log(X2 + (Z - 2 * n * h) ** 2) - np.log(X2 + (W + 2 * n * h) ** 2)
    if tail_correction and n_terms >= 1:
        # pair n with -n: ln[(R + u)^2 - 4 u Z^2] with u = 4 n^2 h^2, R = X^2 + Z^2,
        # = ln u^2 + ln(1 + (2R - 4Z^2)/u + R^2/u^2); the ln u^2 parts cancel.
        RZ, RW = X2 + Z**2, X2 + W**2
        cz = _log_series_coeffs(2 * RZ - 4 * Z**2, RZ**2)
        cw = _log_series_coeffs(2 * RW - 4 * W**2, RW**2)
        for m, (a, b) in enumerate(zip(cz, cw), start=1):
            total += (a - b) * zeta(2 * m, n_terms + 1) / (4 * h * h) ** m
    out = total / FOUR_PI
    return float(out) if out.ndim == 0 else out


def _boundary_logs(grid, x0, z0, h):
    xs = grid.x
    top = np.log((xs - x0) ** 2 + z0**2)
    bot = np.log((xs - x0) ** 2 + (h + z0) ** 2)
    return top, bot


def gamma_operator_strip(z: float, x0: float, z0: float, h: float,
                         grid: PeriodicGrid) -> SurfaceField:
    """Operator form of the strip Green function on the slice ``z``.

    ``(1/4pi){ln r^2 - sinh((z+h)D)/sinh(hD) ln a^2 + sinh(zD)/sinh(hD) ln b^2}``
    with ``a^2 = (x-x0)^2 + z0^2`` and ``b^2 = (x-x0)^2 + (h+z0)^2``.

    The zero mode of ``sinh(hD)^-1`` is handled by splitting off the spatial
    means of both boundary logs and restoring the affine-in-``z`` harmonic
    function that takes those means on ``z = 0`` and ``z = -h``.
    """
    if not (-h <= z <= 0):
        raise DomainError(f"slice z={z:g} lies outside the strip [-h, 0]")
    _check_source(z0, h)
    return SurfaceField(grid, _operator_strip_values(z, x0, z0, h, grid))


def _operator_strip_values(z, x0, z0, h, grid):
    xs = grid.x
    r2 = (xs - x0) ** 2 + (z - z0) ** 2
    if np.any(r2 == 0):
        raise SingularityError("grid point coincides with the source on this slice")
    top, bot = _boundary_logs(grid, x0, z0, h)
    top_mean, bot_mean = top.mean(), bot.mean()
    kr = grid.kr
    ra = sinh_ratio(kr, z + h, h)
    rb = sinh_ratio(kr, z, h)
    ra[0] = rb[0] = 0.0
    harm = grid.to_physical(ra * grid.to_spectral(top - top_mean)
                            - rb * grid.to_spectral(bot - bot_mean))
    affine = top_mean * (z + h) / h - bot_mean * z / h
    return (np.log(r2) - harm - affine) / FOUR_PI


def gamma_wavy_slice(z: float, x0: float, z0: float, eta: SurfaceField, h: float,
                     order: int = 1) -> SurfaceField:
    """Wavy-domain Green function on the slice ``z``, truncated in eta.

    Order 1 uses ``[:sinh((eta+h)D):]^-1 ~ sinh(hD)^-1 (1 - eta D coth(hD))``,
    ``:sinh((z-eta)D): ~ sinh(zD) - eta D cosh(zD)`` and
    ``Gamma0(x, eta) ~ Gamma0(x, 0) + eta dGamma0/dz(x, 0)``, dropping every
    product of two or more eta factors.
    """
    if order not in (0, 1):
        raise UnsupportedOrderError(f"wavy Green function order {order} not in {{0, 1}}")
    grid = eta.grid
    _check_source(z0, h)
    if not (-h <= z <= max(0.0, float(np.max(eta.values)))):
        raise DomainError(f"slice z={z:g} lies outside the fluid")
    base = _operator_strip_values(z, x0, z0, h, grid)
    if order == 0:
        return SurfaceField(grid, base)
    xs = grid.x
    e = eta.values
    top, bot = _boundary_logs(grid, x0, z0, h)
    g0_top = top / FOUR_PI                                   # Gamma0(x, 0)
    g0z_top = -2 * z0 / ((xs - x0) ** 2 + z0**2) / FOUR_PI    # dGamma0/dz at z = 0
    g0_bot = bot / FOUR_PI                                   # Gamma0(x, -h)
    kr = grid.kr
    ra = sinh_ratio(kr, z + h, h)
    cth = k_coth(kr, h)
    pcs = k_cosh_over_sinh(kr, z, h)

    def ap(values, sym):
        return grid.to_physical(sym * grid.to_spectral(values))

    # -sinh((z+h)D) S^-1 [ (1 - eta D coth) (G0top + eta G0z) ]  -> first-order part
    first = -ap(grid.product(e, g0z_top) - grid.product(e, ap(g0_top, cth)), ra)
    # +:sinh((z-eta)D): S^-1 (1 - eta D coth) G0bot -> first-order part
    rb = sinh_ratio(kr, z, h)
    second = -ap(grid.product(e, ap(g0_bot, cth)), rb) - grid.product(e, ap(g0_bot, pcs))
    return SurfaceField(grid, base + first + second)


def gamma_wavy(x: float, z: float, x0: float, z0: float, eta: SurfaceField, h: float,
               order: int = 1) -> float:
    """Point value of :func:`gamma_wavy_slice` (band-limited in ``x``)."""
    if z0 >= float(np.min(eta.values)):
        raise DomainError("source must lie below the free surface")
    field = gamma_wavy_slice(z, x0, z0, eta, h, order)
    return float(field.at(x))


def grad_gamma_strip(x, z, q: VortexState, h: float):
    """``(Gamma_x, Gamma_z)`` of the conformal strip Green function at ``(x, z)``."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    q1, q2 = q.q1, q.q2
    _check_source(q2, h)
    if _coincident(x, z, q1, q2):
        raise SingularityError("gradient requested at the vortex position")
    u = math.pi * (x - q1) / h
    C = np.cosh(u)
    A = C - np.cos(math.pi * (z - q2) / h)
    B = C - np.cos(math.pi * (z + q2) / h)
    s2 = math.sin(math.pi * q2 / h)
    gx = np.sin(math.pi * z / h) * s2 * np.sinh(u) / (2 * h * A * B)
    gz = s2 * (math.cos(math.pi * q2 / h) - C * np.cos(math.pi * z / h)) / (2 * h * A * B)
    if gx.ndim == 0:
        return float(gx), float(gz)
    return gx, gz


def _check_vortex_depth(q2, h):
    if not (-h < q2 < 0):
        raise DomainError(f"vortex must satisfy -h < q2 < 0, got q2={q2:g}")


def gamma_z_surface(x, q: VortexState, h: float):
    """``Gamma_z(x, 0; q) = -sin(pi q2/h) / (2h (cosh(pi(x-q1)/h) - cos(pi q2/h)))``."""
    _check_vortex_depth(q.q2, h)
    u = math.pi * (np.asarray(x, dtype=float) - q.q1) / h
    # divide through by cosh to stay finite far from the vortex
    sech = _sech(u)
    cq = math.cos(math.pi * q.q2 / h)
    out = -math.sin(math.pi * q.q2 / h) * sech / (2 * h * (1 - cq * sech))
    return float(out) if out.ndim == 0 else out


def second_derivs_surface(x, q: VortexState, h: float):
    """Leading-order ``(Gamma_zq1, Gamma_zq2)`` on the surface.

    ``Gamma_xq1`` and ``Gamma_xq2`` are O(eps) there and are not returned.
    """
    _check_vortex_depth(q.q2, h)
    u = math.pi * (np.asarray(x, dtype=float) - q.q1) / h
    sech = _sech(u)
    tanh = np.tanh(u)
    sq = math.sin(math.pi * q.q2 / h)
    cq = math.cos(math.pi * q.q2 / h)
    den = (1 - cq * sech) ** 2
    pref = math.pi / (2 * h * h)
    # numerators and denominator both divided by cosh^2
    gzq1 = -pref * sq * tanh * sech / den
    gzq2 = pref * (sech * sech - cq * sech) / den
    if gzq1.ndim == 0:
        return float(gzq1), float(gzq2)
    return gzq1, gzq2


def surface_kernels(grid: PeriodicGrid, q: VortexState, h: float):
    """``Gamma_z(x,0)``, ``Gamma_zq1`` and ``Gamma_zq2`` sampled on ``grid``."""
    _near_boundary_warning(q.q2, h)
    gz = gamma_z_surface(grid.x, q, h)
    gzq1, gzq2 = second_derivs_surface(grid.x, q, h)
    return gz, gzq1, gzq2
