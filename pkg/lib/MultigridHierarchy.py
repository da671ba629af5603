import logging

import numpy as np
from scipy.sparse.linalg import splu

from .Field import Field
from .SmootherConfig import SmootherConfig
from .HattedCoefficients import assemble_hatted
from .profiles import restrict_profiles
from .relaxation import smooth
from .stencil import residual, dense_assemble
from .transfer import prolongation_matrix, sum_children
from .errors import ConfigurationError, LevelMismatchError
from .config import (
    NU_PRE,
    NU_POST,
    COARSE_SWEEPS,
    COARSE_SOLVERS,
    COARSE_SOLVER,
    COARSE_RATIO_LIMIT,
    RESTRICTIONS,
    TRANSFERS
)


class MultigridHierarchy:

    """
    Tensor-product multigrid on the icosahedral levels 0 (coarsest) to L.

    Only the horizontal grid is coarsened, every level carries the full
    vertical grid. Coarse operators are rediscretisations of the restricted
    profiles.

    Attributes
    ----------
    grids : GridHierarchy
    levels : list of HattedCoefficients
        Operator on every level, coarsest first.
    smoother : SmootherConfig
    nu_pre, nu_post : int
        Smoothing steps on the levels l > 0.
    coarse_solver : str
        "direct" (sparse LU of the coarsest operator) or "smoother".
    coarse_sweeps : int
        Smoother sweeps solving the coarsest problem with "smoother".
    transfer : str
        Prolongation, "linear" or "constant".
    restriction : str
        "sum" (over the children) or "transpose" (of the prolongation).

    Methods
    -------
    v_cycle(level, f, u=None)
        One V-cycle on level.
    apply(f, mu=1)
        mu V-cycles from a zero initial guess on the finest level.
    restrict(field, level)
        Transfer a field on level + 1 to level.
    prolongate(field, level)
        Transfer a field on level to level + 1.
    conditioning_ratios()
        Coarse conditioning ratio of every level.

    """

    def __init__(
        self,
        grids,
        levels,
        smoother=None,
        nu_pre=NU_PRE,
        nu_post=NU_POST,
        coarse_sweeps=COARSE_SWEEPS,
        coarse_solver=COARSE_SOLVER,
        transfer="linear",
        restriction="sum"
    ):

        """
        Parameters
        ----------
        grids : GridHierarchy
            Grids of all levels.
        levels : list of HattedCoefficients
            One operator per grid level, coarsest first.
        smoother : SmootherConfig, optional
            Defaults to block SOR with rho_relax = 1.
        nu_pre, nu_post, coarse_sweeps : int
            Smoothing steps.
        coarse_solver : str
            "direct" or "smoother".
        transfer : str
            "linear" or "constant" prolongation.
        restriction : str
            "sum" or "transpose".

        """

        if len(levels) != grids.n_levels:
            raise LevelMismatchError("One operator per grid level is required")
        if len({hatted.n_r for hatted in levels}) != 1:
            raise LevelMismatchError("All levels must share the vertical grid")
        if min(nu_pre, nu_post) < 0 or coarse_sweeps < 1:
            raise ConfigurationError("Invalid number of smoothing steps")
        if coarse_solver not in COARSE_SOLVERS:
            raise ConfigurationError(f"Unknown coarse solver '{coarse_solver}'")
        if transfer not in TRANSFERS:
            raise ConfigurationError(f"Unknown prolongation '{transfer}'")
        if restriction not in RESTRICTIONS:
            raise ConfigurationError(f"Unknown restriction '{restriction}'")
        self.grids = grids
        self.levels = levels
        self.smoother = smoother or SmootherConfig()
        self.nu_pre = nu_pre
        self.nu_post = nu_post
        self.coarse_sweeps = coarse_sweeps
        self.coarse_solver = coarse_solver
        self.transfer = transfer
        self.restriction = restriction
        self._prolongations = [
            prolongation_matrix(grid, transfer) for grid in grids.grids[:-1]
        ]
        self._coarse_factor = None
        self._prepare_coarse_solve()


    def _prepare_coarse_solve(self):

        coarsest = self.levels[0]
        ratio = coarsest.coarse_conditioning_ratio()
        logging.info(
            f"COARSE SOLVE -> {self.coarse_solver} on {coarsest.n_cells} cells, "
            f"conditioning ratio {ratio:.3e}"
        )
        if self.coarse_solver == "direct":
            self._coarse_factor = splu(dense_assemble(coarsest).tocsc())
        elif ratio > COARSE_RATIO_LIMIT:
            logging.warning(
                f"COARSEST LEVEL NOT MASS-DOMINATED -> ratio {ratio:.3e} > "
                f"{COARSE_RATIO_LIMIT}, {self.coarse_sweeps} sweep(s) will not "
                "solve it"
            )


    def coarse_solve(self, f, u=None):

        """Solve (direct) or relax (smoother) the coarsest problem A_0 u = f."""

        hatted = self.levels[0]
        if self._coarse_factor is None:
            if u is None:
                u = Field.zeros(hatted.shape, 0)
            return smooth(hatted, u, f, self.smoother, self.coarse_sweeps)
        values = self._coarse_factor.solve(np.ravel(f.values))
        return Field(values.reshape(hatted.shape), 0)


    @property
    def finest_level(self):

        return len(self.levels) - 1


    @property
    def finest(self):

        return self.levels[-1]


    @property
    def n_r(self):

        return self.levels[0].n_r


    def restrict(self, field, level):

        if self.restriction == "transpose":
            values = self._prolongations[level].T @ field.values
        else:
            values = sum_children(field.values)
        return Field(values, level)


    def prolongate(self, field, level):

        return Field(self._prolongations[level] @ field.values, level + 1)


    def v_cycle(self, level, f, u=None):

        """
        One V-cycle for A_level u = f.

        Parameters
        ----------
        level : int
            Level to start on.
        f : Field
            Right-hand side on level.
        u : Field, optional
            Initial guess, zero if omitted.

        Returns (Field)
        ---------------
        The improved iterate.

        """

        if level == 0:
            return self.coarse_solve(f, u)

        hatted = self.levels[level]
        if u is None:
            u = Field.zeros(hatted.shape, level)
        u = smooth(hatted, u, f, self.smoother, self.nu_pre)
        coarse_rhs = self.restrict(residual(hatted, u, f), level - 1)
        correction = self.v_cycle(level - 1, coarse_rhs)
        u = Field(u.values + self.prolongate(correction, level - 1).values, level)
        return smooth(hatted, u, f, self.smoother, self.nu_post)


    def apply(self, f, mu=1):

        """
        Preconditioner action: mu V-cycles on the finest level starting from
        zero. The result is linear in f.

        """

        u = None
        for _ in range(mu):
            u = self.v_cycle(self.finest_level, f, u)
        return u


    def conditioning_ratios(self):

        return [hatted.coarse_conditioning_ratio() for hatted in self.levels]


    def storage_size(self):

        return sum(hatted.storage_size() for hatted in self.levels)


def build_hierarchy_coefficients(
    profiles,
    grids,
    vertical,
    omega,
    smoother=None,
    nu_pre=NU_PRE,
    nu_post=NU_POST,
    coarse_sweeps=COARSE_SWEEPS,
    coarse_solver=COARSE_SOLVER,
    transfer="linear",
    restriction="sum"
):

    """
    Build the operators of all levels from the profiles on the finest one.

    Parameters
    ----------
    profiles : ProfileSet
        Profiles on the finest level of `grids`.
    grids : GridHierarchy
    vertical : VerticalGrid
    omega : float
    smoother, nu_pre, nu_post, coarse_sweeps, coarse_solver, transfer, restriction
        Passed on to MultigridHierarchy.

    Returns (MultigridHierarchy)
    ----------------------------
    Factorized profiles yield factorized operators on every level.

    """

    level_profiles = [profiles]
    for level in range(grids.n_levels - 2, -1, -1):
        level_profiles.insert(0, restrict_profiles(level_profiles[0], grids, level))

    levels = []
    for grid, level_set in zip(grids.grids, level_profiles):
        hatted = assemble_hatted(level_set, grid, vertical, omega)
        levels.append(hatted)
        logging.debug(
            f"MULTIGRID LEVEL {grid.level_index} -> {grid.n_cells} cells, "
            f"{hatted.kind} coefficients, "
            f"conditioning ratio {hatted.coarse_conditioning_ratio():.3e}"
        )
    return MultigridHierarchy(
        grids,
        levels,
        smoother=smoother,
        nu_pre=nu_pre,
        nu_post=nu_post,
        coarse_sweeps=coarse_sweeps,
        coarse_solver=coarse_solver,
        transfer=transfer,
        restriction=restriction
    )


def measure_cycle_rate(hierarchy, f, n_cycles, roundoff=1e-13):

    """
    Geometric mean residual reduction per V-cycle, skipping the first cycle.

    Parameters
    ----------
    hierarchy : MultigridHierarchy
    f : Field
        Right-hand side on the finest level.
    n_cycles : int
        At least 2.
    roundoff : float
        Relative residual after the first cycle below which the problem is
        solved already and the rate is reported as zero.

    Returns (float)
    ---------------
    (||r_n|| / ||r_1||)^(1 / (n - 1)) in the Euclidean norm.

    """

    if n_cycles < 2:
        raise ConfigurationError("At least two cycles are needed for a rate")
    finest = hierarchy.finest
    u = None
    norms = []
    for _ in range(n_cycles):
        u = hierarchy.v_cycle(hierarchy.finest_level, f, u)
        norms.append(residual(finest, u, f).norm())
    if norms[0] <= roundoff * f.norm() or norms[0] == 0.0:
        return 0.0
    rate = (norms[-1] / norms[0])**(1.0 / (n_cycles - 1))
    logging.info(f"CYCLE RATE -> {rate:.4f} over {n_cycles} cycles")
    return float(rate)
