"""Numerical laboratory for elliptic spin-pole solutions of the periodic
non-chiral intermediate Heisenberg ferromagnet equation."""

from .elliptic import (
    EllipticError,
    EllipticParams,
    JacobiParams,
    PoleProximityError,
    ellip_K,
    ellip_Kprime,
    f2,
    f2_prime,
    jacobi_cn,
    jacobi_dn,
    jacobi_sn,
    wp1,
    wp2,
    wp2_prime,
    zeta1,
    zeta2,
)
from .spincm import (
    ConstraintReport,
    SpinCMState,
    accel,
    backlund_velocity,
    conserved_quantities,
    constraint_residuals,
    phi_rhs,
    rotate_frame,
    spin_rhs,
)
from .integrator import (
    IntegratorConfig,
    Trajectory,
    backlund_consistency,
    conservation_drift,
    integrate,
)
from .initialdata import (
    JacobiConfig,
    TravelingWaveConfig,
    jacobi_state,
    null_spin,
    sphere_map,
    traveling_wave_state,
)
from .ansatz import (
    FieldSample,
    energy_density,
    eval_field,
    eval_space_derivative,
    eval_time_derivative,
    hamiltonian,
    uniform_grid,
)
from .pde_oracle import OperatorEvaluator, pde_residual

__version__ = "0.1.0"
