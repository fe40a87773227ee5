"""Point-vortex dynamics beneath long water waves.

Spectral tools for the Dirichlet-Neumann operator, Green functions of the
strip, soliton-driven vortex trajectories, KdV and Boussinesq solvers coupled
to a point vortex, and vortex-strength scaling estimates.
"""

from .errors import (
    ConfigurationError,
    DomainError,
    NumericError,
    RegimeError,
    ResolutionError,
    SingularityError,
    SolverAbort,
    UnsupportedOrderError,
    VortexWaveError,
)
from .green import (
    gamma_conformal,
    gamma_free,
    gamma_images,
    gamma_operator_strip,
    gamma_wavy,
    gamma_wavy_slice,
    gamma_z_surface,
    grad_gamma_strip,
    second_derivs_surface,
    surface_kernels,
)
from .grid import PeriodicGrid, PhysicalParams, SurfaceField, VortexState, make_grid
from .scenario import Scenario, parse_scenario, serialize_scenario
from .solvers import (
    CoupledState,
    boussinesq_rhs,
    diagnostics,
    kdv_rhs_unperturbed,
    perturbed_kdv_rhs,
    simulate,
    soliton_profile,
    step_coupled,
)
from .spectral import (
    Multiplier,
    apply_multiplier,
    dno_flat,
    dno_longwave,
    dno_order1,
    dno_paper_exact,
)
from .strength import (
    RegimeEstimate,
    RegimeOrder,
    average_wave_energies,
    omega_star_scale,
    vortex_surface_energy,
)
from .vortex import (
    VortexTrajectory,
    asymptotic_range,
    conservation_value,
    integrate_soliton_vortex,
    integrate_vortex,
    vortex_rhs_general,
    vortex_rhs_soliton,
)

__version__ = "0.1.0"
