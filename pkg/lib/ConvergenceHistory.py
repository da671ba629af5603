import csv
import json
import time

from .config import HISTORY_HEADER, FORMAT_VERSION


class ConvergenceHistory:

    """
    Residual norms and wall times of an iterative solve.

    Attributes
    ----------
    iterations : list of int
    res_norms : list of float
        Euclidean residual norm after every iteration (entry 0 is r_0).
    rel_res : list of float
        res_norms relative to the initial residual.
    seconds : list of float
        Wall time since the start of the solve.
    status : str
        "converged", "max_iter", "breakdown", "diverged" or "running".
    true_res_norm : float or None
        ||f - A u|| recomputed from scratch at the end.
    operator_applications, preconditioner_applications : int
        Counted during the iterations.

    Methods
    -------
    record(iteration, res_norm)
        Append one entry.
    rate()
        Geometric mean reduction per iteration.
    to_dict()
        JSON serialisable summary.
    save_csv(path)
        Write `iter,res_norm,rel_res,seconds`.
    save_json(path, config)
        Write the summary with a configuration echo.

    """

    def __init__(self):

        self.iterations = []
        self.res_norms = []
        self.rel_res = []
        self.seconds = []
        self.status = "running"
        self.true_res_norm = None
        self.operator_applications = 0
        self.preconditioner_applications = 0
        self._start = time.perf_counter()


    @property
    def initial_norm(self):

        return self.res_norms[0]


    @property
    def n_iterations(self):

        return self.iterations[-1] if self.iterations else 0


    @property
    def final_rel_res(self):

        return self.rel_res[-1]


    def record(self, iteration, res_norm):

        initial = self.res_norms[0] if self.res_norms else res_norm
        self.iterations.append(iteration)
        self.res_norms.append(float(res_norm))
        self.rel_res.append(float(res_norm / initial) if initial > 0.0 else 0.0)
        # Monotone clock
        self.seconds.append(time.perf_counter() - self._start)
        return self.rel_res[-1]


    def rate(self):

        """(||r_n|| / ||r_0||)^(1/n), zero if no iteration was needed."""

        n = self.n_iterations
        if n == 0 or self.res_norms[0] == 0.0:
            return 0.0
        return float((self.res_norms[-1] / self.res_norms[0])**(1.0 / n))


    def time_per_iteration(self):

        n = self.n_iterations
        return self.seconds[-1] / n if n else 0.0


    def to_dict(self):

        return {
            "status": self.status,
            "iterations": self.n_iterations,
            "final_rel_res": self.rel_res[-1] if self.rel_res else None,
            "true_res_norm": self.true_res_norm,
            "rate": self.rate(),
            "time_per_iteration": self.time_per_iteration(),
            "operator_applications": self.operator_applications,
            "preconditioner_applications": self.preconditioner_applications,
            "history": [
                dict(zip(HISTORY_HEADER, row))
                for row in zip(
                    self.iterations, self.res_norms, self.rel_res, self.seconds
                )
            ]
        }


    def save_csv(self, path):

        with open(path, "w", newline="") as history_file:
            writer = csv.writer(history_file)
            writer.writerow(HISTORY_HEADER)
            for row in zip(self.iterations, self.res_norms, self.rel_res, self.seconds):
                writer.writerow([row[0]] + [repr(value) for value in row[1:]])


    def save_json(self, path, config=None):

        document = {"format_version": FORMAT_VERSION, "config": config}
        document.update(self.to_dict())
        with open(path, "w") as history_file:
            history_file.write(json.dumps(document))
