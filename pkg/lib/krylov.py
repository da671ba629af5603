# ===============================================
#                    krylov.py
# -----------------------------------------------
# Preconditioned Richardson and BiCGStab.
# ===============================================

import logging

import numpy as np

from .Field import Field
from .Preconditioner import Preconditioner
from .ConvergenceHistory import ConvergenceHistory
from .MultigridHierarchy import build_hierarchy_coefficients
from .profiles import build_partial_factorization
from .stencil import residual
from .errors import ConfigurationError
from .config import DIVERGENCE_FACTOR, BREAKDOWN_EPS, PREC_ALIASES


def make_preconditioner(
    kind,
    full=None,
    factorized=None,
    grids=None,
    vertical=None,
    omega=None,
    mu=1,
    **multigrid_options
):

    """
    Build one of the preconditioners TPMG(full), TPMG(factorized),
    TPMG(partial) or the identity.

    Parameters
    ----------
    kind : str
        "tpmg_full", "tpmg_factorized", "tpmg_partial" or "none" (short
        names "full", "factorized", "partial" accepted).
    full : ProfileSet
        Non-separable profiles on the finest level.
    factorized : FactorizedProfileSet
        Separable profiles on the finest level.
    grids : GridHierarchy
    vertical : VerticalGrid
    omega : float
    mu : int
        V-cycles per application.
    **multigrid_options
        Passed on to build_hierarchy_coefficients.

    Returns (Preconditioner)
    ------------------------

    """

    kind = PREC_ALIASES.get(kind, kind)
    if kind == "none":
        return Preconditioner(None, mu, kind)
    if kind == "tpmg_full":
        profiles = full
    elif kind == "tpmg_factorized":
        profiles = factorized
    elif kind == "tpmg_partial":
        profiles = None
        if full is not None and factorized is not None:
            profiles = build_partial_factorization(full, factorized)
    else:
        raise ConfigurationError(f"Unknown preconditioner '{kind}'")
    if profiles is None:
        raise ConfigurationError(f"Preconditioner {kind} needs its profiles")
    hierarchy = build_hierarchy_coefficients(
        profiles, grids, vertical, omega, **multigrid_options
    )
    return Preconditioner(hierarchy, mu, kind)


def unpreconditioned_residual_norm(operator, u, f):

    """
    ||f - A u|| recomputed from scratch.

    Parameters
    ----------
    operator : SystemOperator or HattedCoefficients
    u, f : Field

    Returns (float)
    ---------------

    """

    hatted = getattr(operator, "hatted", operator)
    return residual(hatted, u, f).norm()


def _finish(history, operator, preconditioner, counts, u, f):

    history.operator_applications = operator.applications - counts[0]
    history.preconditioner_applications = preconditioner.applications - counts[1]
    history.true_res_norm = unpreconditioned_residual_norm(operator, u, f)
    logging.info(
        f"SOLVER FINISHED -> status = {history.status}, "
        f"iterations = {history.n_iterations}, "
        f"relative residual = {history.final_rel_res:.3e}"
    )
    return u, history


def _diverged(rel_res):

    return not np.isfinite(rel_res) or rel_res > DIVERGENCE_FACTOR


def richardson_solve(operator, preconditioner, f, config):

    """
    Preconditioned Richardson iteration u <- u + M^{-1} (f - A u) from u = 0.

    Parameters
    ----------
    operator : SystemOperator
    preconditioner : Preconditioner
    f : Field
    config : SolverConfig

    Returns (tuple)
    ---------------
    (u, ConvergenceHistory). One operator and one preconditioner
    application per iteration.

    """

    counts = (operator.applications, preconditioner.applications)
    history = ConvergenceHistory()
    u = Field.zeros(f.shape, f.level_index)
    r = f.copy()
    rel_res = history.record(0, r.norm())
    if rel_res <= config.tol:
        history.status = "converged"
        return _finish(history, operator, preconditioner, counts, u, f)

    history.status = "max_iter"
    for iteration in range(1, config.max_iter + 1):
        correction = preconditioner.apply(r)
        u = Field(u.values + correction.values, u.level_index)
        r = Field(f.values - operator.apply(u).values, u.level_index)
        rel_res = history.record(iteration, r.norm())
        logging.info(
            f"RICHARDSON ITERATION {iteration} -> "
            f"residual = {history.res_norms[-1]:.6e}, relative = {rel_res:.6e}"
        )
        if _diverged(rel_res):
            history.status = "diverged"
            break
        if rel_res <= config.tol:
            history.status = "converged"
            break
    return _finish(history, operator, preconditioner, counts, u, f)


def bicgstab_solve(operator, preconditioner, f, config):

    """
    Right-preconditioned BiCGStab, solving A M^{-1} y = f with u = M^{-1} y.

    Every iteration applies the preconditioner twice and the operator twice.
    The recorded residual is the recursively updated residual of the
    original system.

    Parameters
    ----------
    operator : SystemOperator
    preconditioner : Preconditioner
    f : Field
    config : SolverConfig

    Returns (tuple)
    ---------------
    (u, ConvergenceHistory)

    """

    counts = (operator.applications, preconditioner.applications)
    history = ConvergenceHistory()
    level = f.level_index
    x = np.zeros(f.shape)
    r = f.values.copy()
    r_hat = r.copy()
    initial = float(np.linalg.norm(r))
    rel_res = history.record(0, initial)
    if rel_res <= config.tol:
        history.status = "converged"
        return _finish(history, operator, preconditioner, counts, Field(x, level), f)

    threshold = BREAKDOWN_EPS * initial**2
    rho = alpha = omega = 1.0
    p = np.zeros(f.shape)
    v = np.zeros(f.shape)
    history.status = "max_iter"
    for iteration in range(1, config.max_iter + 1):
        rho_next = float(np.vdot(r_hat, r))
        if abs(rho_next) < threshold:
            history.status = "breakdown"
            break
        beta = (rho_next / rho) * (alpha / omega)
        p = r + beta * (p - omega * v)

        p_hat = preconditioner.apply(Field(p, level))
        v = operator.apply(p_hat).values
        denominator = float(np.vdot(r_hat, v))
        if abs(denominator) < threshold:
            history.status = "breakdown"
            break
        alpha = rho_next / denominator
        s = r - alpha * v

        s_hat = preconditioner.apply(Field(s, level))
        t = operator.apply(s_hat).values
        t_norm2 = float(np.vdot(t, t))
        omega = float(np.vdot(t, s)) / t_norm2 if t_norm2 > 0.0 else 0.0
        x = x + alpha * p_hat.values + omega * s_hat.values
        r = s - omega * t
        rho = rho_next

        rel_res = history.record(iteration, float(np.linalg.norm(r)))
        logging.info(
            f"BICGSTAB ITERATION {iteration} -> "
            f"residual = {history.res_norms[-1]:.6e}, relative = {rel_res:.6e}"
        )
        if _diverged(rel_res):
            history.status = "diverged"
            break
        if rel_res <= config.tol:
            history.status = "converged"
            break
        if abs(omega) < BREAKDOWN_EPS:
            history.status = "breakdown"
            break
    return _finish(history, operator, preconditioner, counts, Field(x, level), f)


def solve(operator, preconditioner, f, config):

    if config.solver == "bicgstab":
        return bicgstab_solve(operator, preconditioner, f, config)
    return richardson_solve(operator, preconditioner, f, config)
