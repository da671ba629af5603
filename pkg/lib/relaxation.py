# ===============================================
#                  relaxation.py
# -----------------------------------------------
# Thomas algorithm and vertical line smoothers.
# ===============================================

import numpy as np

from .Field import Field
from .stencil import check_field
from .kernels import thomas_batch, block_jacobi_sweep, block_sor_sweep
from .errors import SingularSystemError, ShapeMismatchError


def thomas_solve(a, b, c, rhs):

    """
    Solve tridiagonal systems without pivoting.

    Row k reads c[k] x[k-1] + a[k] x[k] + b[k] x[k+1] = rhs[k]; c[0] and
    b[-1] are ignored.

    Parameters
    ----------
    a, b, c, rhs : numpy.ndarray
        Shape (n_r,) for one system or (n, n_r) for a batch.

    Returns (numpy.ndarray)
    -----------------------
    Solutions with the shape of rhs.

    """

    arrays = [np.asarray(x, dtype=float) for x in (a, b, c, rhs)]
    shape = arrays[3].shape
    if any(x.shape != shape for x in arrays):
        raise ShapeMismatchError("Tridiagonal diagonals and rhs differ in shape")
    a, b, c, rhs = [np.ascontiguousarray(np.atleast_2d(x)) for x in arrays]
    x = np.empty_like(rhs)
    status = np.zeros(rhs.shape[0], dtype=np.int64)
    thomas_batch(a, b, c, rhs, x, status)
    failed = np.flatnonzero(status)
    if failed.size:
        raise SingularSystemError(int(failed[0]))
    return x.reshape(shape)


def _order(config, n_cells):

    order = np.arange(n_cells, dtype=np.int64)
    return order[::-1].copy() if config.order == "reversed" else order


def smooth(hatted, u, f, config, sweeps):

    """
    Apply block line relaxation u_T <- u_T + rho A_T^{-1} (f - A u)_T.

    Parameters
    ----------
    hatted : HattedCoefficients
    u : Field
        Initial iterate, left untouched.
    f : Field
        Right-hand side.
    config : SmootherConfig
    sweeps : int
        Number of sweeps over all columns.

    Returns (Field)
    ---------------
    The smoothed iterate.

    """

    check_field(hatted, u)
    check_field(hatted, f)
    arguments = hatted.kernel_arguments()
    current = u.values.copy()
    if config.kind == "block_jacobi":
        status = np.zeros(hatted.n_cells, dtype=np.int64)
        for _ in range(sweeps):
            updated = np.empty_like(current)
            block_jacobi_sweep(
                *arguments, current, f.values, config.rho_relax, updated, status
            )
            failed = np.flatnonzero(status)
            if failed.size:
                raise SingularSystemError(int(failed[0]))
            current = updated
    else:
        order = _order(config, hatted.n_cells)
        for _ in range(sweeps):
            failed = block_sor_sweep(
                *arguments, current, f.values, config.rho_relax, order
            )
            if failed >= 0:
                raise SingularSystemError(int(failed))
    return Field(current, u.level_index)
