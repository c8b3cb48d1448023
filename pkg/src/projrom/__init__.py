"""Projection-based reduced-order models (Galerkin and LSPG) with POD bases
and collocation hyper-reduction, plus a finite-volume Burgers test problem."""

from .burgers import BurgersFom, BurgersParams, BurgersSampleMesh
from .decoder import LinearDecoder, project_initial_condition, reconstruct
from .errors import (
    ConfigError,
    ContractViolation,
    DivergenceError,
    InsufficientRankError,
    RankDeficiencyError,
    RomError,
    StepFailure,
    TopologyError,
)
from .fom import SteadyView, check_jacobian_action
from .galerkin import GalerkinProblem, galerkin_rhs, run_galerkin
from .hyper import (
    Collocation,
    Diagonal,
    Identity,
    ScaledCollocation,
    apply_weighting,
    apply_weighting_matrix,
    build_stencil_closure,
    control_volume_weights,
    select_sample_indices,
)
from .lspg import LspgProblem, advance_lspg, lspg_jacobian, lspg_residual, lspg_steady_solve
from .pod import SnapshotCollector, compute_pod_basis, pod_energy_report
from .solvers import GaussNewtonReport, GaussNewtonSettings, gauss_newton_solve
from .steppers import (
    MultistepCoefficients,
    StepHistory,
    backward_euler_coefficients,
    bdf2_coefficients,
    discrete_jacobian_action,
    discrete_residual,
    forward_euler_step,
    integrate_explicit,
    integrate_implicit,
    rk4_step,
)

__version__ = "0.1.0"
