from .errors import ConfigurationError
from .config import SOLVERS, PRECONDITIONERS, PREC_ALIASES, TOL, MU_CYCLES, MAX_ITER


class SolverConfig:

    """
    Outer solver settings.

    Attributes
    ----------
    solver : str
        "richardson" or "bicgstab".
    preconditioner : str
        "tpmg_full", "tpmg_factorized", "tpmg_partial" or "none".
    mu : int
        V-cycles per preconditioner application.
    tol : float
        Target relative residual.
    max_iter : int

    """

    def __init__(
        self,
        solver="richardson",
        preconditioner="tpmg_full",
        mu=MU_CYCLES,
        tol=TOL,
        max_iter=MAX_ITER
    ):

        preconditioner = PREC_ALIASES.get(preconditioner, preconditioner)
        if solver not in SOLVERS:
            raise ConfigurationError(f"Unknown solver '{solver}'")
        if preconditioner not in PRECONDITIONERS:
            raise ConfigurationError(f"Unknown preconditioner '{preconditioner}'")
        if int(mu) != mu or mu < 1:
            raise ConfigurationError(f"mu must be a positive integer, got {mu}")
        if not tol > 0.0:
            raise ConfigurationError(f"Tolerance must be positive, got {tol}")
        if int(max_iter) != max_iter or max_iter < 0:
            raise ConfigurationError(f"Invalid iteration limit {max_iter}")
        self.solver = solver
        self.preconditioner = preconditioner
        self.mu = int(mu)
        self.tol = float(tol)
        self.max_iter = int(max_iter)


    def to_dict(self):

        return {
            "solver": self.solver,
            "preconditioner": self.preconditioner,
            "mu": self.mu,
            "tol": self.tol,
            "max_iter": self.max_iter
        }
