import math

from .config import PERTURBATION_SLACK


class PerturbationReport:

    """
    Convergence of a factorized preconditioner applied to a non-separable
    system.

    The Richardson rate with mu cycles of the factorized preconditioner is
    bounded by delta + (1 + delta) rho_factorized^mu.

    Attributes
    ----------
    delta : float
        Energy norm of A_fac^{-1} dA in the A_fac norm.
    rho_factorized : float
        A_fac-norm of the factorized V-cycle iteration matrix.
    rho_full : float
        Spectral radius of the Richardson iteration matrix on the full system.
    mu : int
        Cycles per preconditioner application.
    bound : float
    min_cycles : int or None
        Smallest mu for which the bound is below one, None if no mu is.
    single_cycle_admissible : bool
        Whether one cycle is guaranteed to converge.
    status : str
        "pass", "fail" or "out_of_theory" (delta >= 1).

    """

    def __init__(self, delta, rho_factorized, rho_full, mu=1, slack=PERTURBATION_SLACK):

        self.delta = float(delta)
        self.rho_factorized = float(rho_factorized)
        self.rho_full = float(rho_full)
        self.mu = mu
        self.slack = slack
        self.bound = self.delta + (1.0 + self.delta) * self.rho_factorized**mu
        self.min_cycles = self._min_cycles()
        self.single_cycle_admissible = bool(
            self.delta < (1.0 - self.rho_factorized) / (1.0 + self.rho_factorized)
        )
        if self.delta >= 1.0:
            self.status = "out_of_theory"
        elif self.rho_full <= self.bound + slack:
            self.status = "pass"
        else:
            self.status = "fail"


    def _min_cycles(self):

        if self.delta >= 1.0 or self.rho_factorized >= 1.0:
            return None
        if self.rho_factorized == 0.0:
            return 1
        target = (1.0 - self.delta) / (1.0 + self.delta)
        exponent = math.log(target) / math.log(self.rho_factorized)
        return max(1, math.floor(exponent) + 1)


    @property
    def passed(self):

        return self.status == "pass"


    def to_dict(self):

        return {
            "delta": self.delta,
            "rho_factorized": self.rho_factorized,
            "rho_full": self.rho_full,
            "mu": self.mu,
            "bound": self.bound,
            "min_cycles": self.min_cycles,
            "single_cycle_admissible": self.single_cycle_admissible,
            "status": self.status,
            "pass": self.passed
        }
