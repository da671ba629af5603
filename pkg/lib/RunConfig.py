import os

from .SolverConfig import SolverConfig
from .SmootherConfig import SmootherConfig
from .errors import ConfigurationError
from .config import (
    MAX_LEVELS,
    DEFAULT_LEVELS,
    DEFAULT_NR,
    ATMOSPHERE_DEPTH,
    GRADINGS,
    COURANT,
    NU_PRE,
    NU_POST,
    COARSE_SWEEPS,
    COARSE_SOLVERS,
    COARSE_SOLVER,
    RHO_RELAX,
    MU_CYCLES,
    TOL,
    MAX_ITER,
    TRANSFERS,
    RESTRICTIONS,
    RESULTS_DIR,
    CACHE_DIR
)

TEST_CASES = ["balanced_flow", "external_profiles"]


class RunConfig:

    """
    Complete configuration of one experiment, validated on construction.

    Attributes
    ----------
    levels : int
        Finest icosahedral level L.
    n_r : int
        Number of vertical cells.
    N : float or None
        Buoyancy frequency, None for the separable value N*.
    test_case : str
        "balanced_flow" or "external_profiles".
    profiles : str or None
        Profile file of the external test case.
    prec_profiles : str or None
        Profile file of the preconditioner (external test case only). A
        factorized file feeds TPMG(factorized) and TPMG(partial).
    solver, prec, mu_cycles, tol, max_iter
        Outer solver settings, see SolverConfig.
    smoother, relax, sweep_order, nu_pre, nu_post, coarse_sweeps
        Smoother settings, see SmootherConfig.
    coarse_solver : str
        "direct" or "smoother" on the coarsest level.
    transfer, restriction : str
        Intergrid transfer pair.
    omega : float or None
        Explicit omega; when None omega = courant * h_L.
    courant : float
    depth : float
        Shell depth in metres.
    grading, ratio
        Vertical grid spacing.
    perturb_alpha_r : float
        Factor applied to alpha_r of the preconditioner profiles.
    seed : int
        Seed of the random right-hand side.
    threads : int
        Width of the parallel kernels.
    out : str
        Output directory.
    cache_dir : str or None
        Directory of the grid cache, None disables caching.

    Methods
    -------
    solver_config()
        The SolverConfig of the run.
    smoother_config()
        The SmootherConfig of the run.
    to_dict()
        Configuration echo written into every artifact.

    """

    def __init__(
        self,
        levels=DEFAULT_LEVELS,
        n_r=DEFAULT_NR,
        N=None,
        test_case="balanced_flow",
        profiles=None,
        prec_profiles=None,
        solver="richardson",
        prec="tpmg_full",
        mu_cycles=MU_CYCLES,
        tol=TOL,
        max_iter=MAX_ITER,
        smoother="block_sor",
        relax=RHO_RELAX,
        sweep_order="natural",
        nu_pre=NU_PRE,
        nu_post=NU_POST,
        coarse_sweeps=COARSE_SWEEPS,
        coarse_solver=COARSE_SOLVER,
        transfer="linear",
        restriction="sum",
        omega=None,
        courant=COURANT,
        depth=ATMOSPHERE_DEPTH,
        grading="uniform",
        ratio=1.0,
        perturb_alpha_r=1.0,
        seed=0,
        threads=1,
        out=RESULTS_DIR,
        cache_dir=CACHE_DIR
    ):

        self.levels = levels
        self.n_r = n_r
        self.N = N
        self.test_case = test_case.replace("-", "_")
        self.profiles = profiles
        self.prec_profiles = prec_profiles
        self.solver = solver
        self.prec = prec
        self.mu_cycles = mu_cycles
        self.tol = tol
        self.max_iter = max_iter
        self.smoother = smoother
        self.relax = relax
        self.sweep_order = sweep_order
        self.nu_pre = nu_pre
        self.nu_post = nu_post
        self.coarse_sweeps = coarse_sweeps
        self.coarse_solver = coarse_solver
        self.transfer = transfer
        self.restriction = restriction
        self.omega = omega
        self.courant = courant
        self.depth = depth
        self.grading = grading
        self.ratio = ratio
        self.perturb_alpha_r = perturb_alpha_r
        self.seed = seed
        self.threads = threads
        self.out = out
        self.cache_dir = cache_dir
        self.validate()


    def validate(self):

        if int(self.levels) != self.levels or not 0 <= self.levels <= MAX_LEVELS:
            raise ConfigurationError(
                f"levels must be an integer in [0, {MAX_LEVELS}], got {self.levels}"
            )
        if int(self.n_r) != self.n_r or self.n_r < 1:
            raise ConfigurationError(f"n_r must be a positive integer, got {self.n_r}")
        if self.N is not None and not self.N > 0.0:
            raise ConfigurationError(f"N must be positive, got {self.N}")
        if self.test_case not in TEST_CASES:
            raise ConfigurationError(f"Unknown test case '{self.test_case}'")
        if self.test_case == "external_profiles":
            if not self.profiles or not os.path.isfile(self.profiles):
                raise ConfigurationError(f"Profile file '{self.profiles}' not found")
        if self.prec_profiles is not None:
            if self.test_case != "external_profiles":
                raise ConfigurationError(
                    "Preconditioner profiles need the external-profiles test case"
                )
            if not os.path.isfile(self.prec_profiles):
                raise ConfigurationError(
                    f"Profile file '{self.prec_profiles}' not found"
                )
        # Both raise ConfigurationError on invalid values
        self.solver_config()
        self.smoother_config()
        if min(self.nu_pre, self.nu_post) < 0 or self.coarse_sweeps < 1:
            raise ConfigurationError("Invalid number of smoothing steps")
        if self.coarse_solver not in COARSE_SOLVERS:
            raise ConfigurationError(f"Unknown coarse solver '{self.coarse_solver}'")
        if self.transfer not in TRANSFERS:
            raise ConfigurationError(f"Unknown prolongation '{self.transfer}'")
        if self.restriction not in RESTRICTIONS:
            raise ConfigurationError(f"Unknown restriction '{self.restriction}'")
        if self.omega is not None and not self.omega > 0.0:
            raise ConfigurationError(f"omega must be positive, got {self.omega}")
        if not self.courant > 0.0:
            raise ConfigurationError(f"Courant number must be positive, got {self.courant}")
        if not self.depth > 0.0:
            raise ConfigurationError(f"Depth must be positive, got {self.depth}")
        if self.grading not in GRADINGS:
            raise ConfigurationError(f"Unknown vertical grading '{self.grading}'")
        if not self.ratio > 0.0:
            raise ConfigurationError(f"Grading ratio must be positive, got {self.ratio}")
        if not self.perturb_alpha_r > 0.0:
            raise ConfigurationError("alpha_r perturbation factor must be positive")
        if int(self.threads) != self.threads or self.threads < 1:
            raise ConfigurationError(f"threads must be a positive integer, got {self.threads}")


    def solver_config(self):

        return SolverConfig(
            solver=self.solver,
            preconditioner=self.prec,
            mu=self.mu_cycles,
            tol=self.tol,
            max_iter=self.max_iter
        )


    def smoother_config(self):

        return SmootherConfig(
            kind=self.smoother, rho_relax=self.relax, order=self.sweep_order
        )


    def multigrid_options(self):

        return {
            "smoother": self.smoother_config(),
            "nu_pre": self.nu_pre,
            "nu_post": self.nu_post,
            "coarse_sweeps": self.coarse_sweeps,
            "coarse_solver": self.coarse_solver,
            "transfer": self.transfer,
            "restriction": self.restriction
        }


    def with_changes(self, **changes):

        values = self.to_dict()
        values.update(changes)
        return RunConfig(**values)


    def to_dict(self):

        return {
            "levels": self.levels,
            "n_r": self.n_r,
            "N": self.N,
            "test_case": self.test_case,
            "profiles": self.profiles,
            "prec_profiles": self.prec_profiles,
            "solver": self.solver,
            "prec": self.prec,
            "mu_cycles": self.mu_cycles,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "smoother": self.smoother,
            "relax": self.relax,
            "sweep_order": self.sweep_order,
            "nu_pre": self.nu_pre,
            "nu_post": self.nu_post,
            "coarse_sweeps": self.coarse_sweeps,
            "coarse_solver": self.coarse_solver,
            "transfer": self.transfer,
            "restriction": self.restriction,
            "omega": self.omega,
            "courant": self.courant,
            "depth": self.depth,
            "grading": self.grading,
            "ratio": self.ratio,
            "perturb_alpha_r": self.perturb_alpha_r,
            "seed": self.seed,
            "threads": self.threads,
            "out": self.out,
            "cache_dir": self.cache_dir
        }
