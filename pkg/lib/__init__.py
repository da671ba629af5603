from .HorizontalGrid import HorizontalGrid
from .GridHierarchy import GridHierarchy, build_icosahedral_hierarchy, grid_summary
from .VerticalGrid import VerticalGrid, build_vertical_grid
from .PhysicalConstants import PhysicalConstants, OperatorParameters
from .CoefficientField import CoefficientField
from .ProfileSet import (
    ProfileSet,
    FactorizedProfileSet,
    MixedProfileSet,
    make_profile_set,
    constant_profiles
)
from .profiles import (
    balanced_flow_profiles,
    factorize_balanced_flow,
    build_partial_factorization,
    scale_profile,
    restrict_profiles,
    level_statistics
)
from .balanced_flow import jet_velocity, jet_function, exner_factorization_error
from .profile_io import save_profiles, load_profiles
from .HattedCoefficients import HattedCoefficients, assemble_hatted
from .Field import Field
from .stencil import apply_operator, residual, dense_assemble, dump_coordinate
from .SmootherConfig import SmootherConfig
from .relaxation import thomas_solve, smooth
from .MultigridHierarchy import (
    MultigridHierarchy,
    build_hierarchy_coefficients,
    measure_cycle_rate
)
from .SolverConfig import SolverConfig
from .ConvergenceHistory import ConvergenceHistory
from .SystemOperator import SystemOperator
from .Preconditioner import Preconditioner
from .krylov import (
    make_preconditioner,
    richardson_solve,
    bicgstab_solve,
    unpreconditioned_residual_norm,
    solve
)
from .TimingModel import TimingModel
from .RunConfig import RunConfig
from . import theory
