"""Order-of-magnitude vortex strengths compatible with long-wave scaling.

Balancing the vortex-induced surface energy against the wave's potential
energy bounds the circulation.  Its size relative to h sqrt(gh) scales as
delta^(3/2) for a deep vortex and delta^2 for one close to the surface.

    python demos/vortex_strength.py
"""

import math

import numpy as np

from vortex_waves import PhysicalParams
from vortex_waves.strength import omega_star_scale, vortex_surface_energy


def main():
    p = PhysicalParams(h=10.0, g=9.81)
    est = omega_star_scale(0.5, 100.0, -5.0, p)
    print(f"a = 0.5 m, lambda = 100 m, q2 = -5 m: omega* ~ {est.omega_star_bound:.3f} m^2/s "
          f"({est.regime_order.value})")
    print(f"  vortex surface energy {vortex_surface_energy(est.omega_star_bound, 100, -5):.4f}"
          f" vs g a^2/(4h) = {p.g * 0.25 / (4 * p.h):.4f} m^2/s^2")

    print("\n  delta   mu=0.5 bound   mu=delta bound   (in units of h sqrt(gh))")
    unit = p.h * math.sqrt(p.g * p.h)
    for d in np.geomspace(0.01, 0.1, 5):
        a, lam = p.h * d * d, p.h / d
        deep = omega_star_scale(a, lam, -0.5 * p.h, p)
        shallow = omega_star_scale(a, lam, -d * p.h, p)
        print(f"  {d:.4f}  {deep.omega_star_bound / unit:.3e}      "
              f"{shallow.omega_star_bound / unit:.3e}")


if __name__ == "__main__":
    main()
