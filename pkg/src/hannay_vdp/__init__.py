"""Dual-Hamiltonian van der Pol oscillator toolkit.

Perturbative series and limit-cycle measurement for the van der Pol
oscillator, the analytic Hannay angle of its limit-cycle phase under
adiabatic parameter loops, and the numerically measured geometric phase,
built on the four-dimensional dual-Hamiltonian embedding.  The same
machinery applies to other Lienard-type systems once their connection
one-form is supplied.
"""

__version__ = "0.1.0"

from .dual_dynamics import (
    AlphaBeta,
    CartState,
    DegenerateAmplitudeError,
    Params,
    PhysState,
    ReducedCoords,
    RotatedState,
    alphabeta_rhs,
    alphabeta_to_rotated,
    augment,
    cart_to_phys,
    cart_to_rotated,
    dual_rhs,
    hamilton_rhs,
    hamiltonian,
    phys_to_cart,
    rotated_hamiltonian,
    rotated_to_alphabeta,
    rotated_to_cart,
    vdp_rhs,
)
from .lie_series import (
    Connection,
    action_fixed_point,
    action_rate,
    beta1_rate,
    connection,
    fixed_point_alpha,
    limit_cycle_frequency,
    phi1_rate,
    reduced_alpha_rate,
    reduced_beta_rate,
    solution_amplitude,
    solution_x,
)
from .ode import (
    IntegrationError,
    IntegratorConfig,
    NonFiniteStateError,
    StepUnderflowError,
    Trajectory,
    find_crossings,
    integrate,
)
from .geophase import (
    AdiabaticityError,
    FrozenGrid,
    PhaseResult,
    convergence_study,
    frozen_grid,
    sweep,
)
from .hannay import (
    LoopIntegralResult,
    NonSimpleLoopError,
    green_theorem_oracle,
    hannay_angle,
    square_loop_closed_form,
    vdp_connection,
    vdp_curl,
)
from .limit_cycle import (
    ConsistencyError,
    LimitCycleData,
    NonConvergenceError,
    PositivityError,
    angular_velocity,
    measure,
    polar_coords,
    psi_of_theta,
    settle,
)
from .loops import (
    InvalidLoopError,
    ParamLoop,
    loop_from_spec,
    make_ellipse_loop,
    make_parametric_loop,
    make_polyline_loop,
    make_square_loop,
    reference_ellipse_loop,
    reference_square_loop,
)
from .resonance import (
    CompareReport,
    CoupledParams,
    ResonanceError,
    averaged_rhs,
    compare,
    coupled_hamiltonian,
    coupled_rhs,
    is_resonant,
    nonresonant_prediction,
)
