"""
Compiled column kernels.

Every kernel works on whole vertical columns. Coefficients are passed as
(horizontal, vertical) pairs, see CoefficientField, and the stencil of a
column is rebuilt on the fly from them. Kernels marked parallel write
disjoint columns only, so their results do not depend on the thread count.

"""

import numba as nb
import numpy as np

_numba_setting = {"nogil": True, "cache": True}

_FNV_OFFSET = np.uint64(14695981039346656037)
_FNV_PRIME = np.uint64(1099511628211)


@nb.njit(**_numba_setting)
def fnv1a_64(data):

    value = _FNV_OFFSET
    for i in range(data.shape[0]):
        value = (value ^ np.uint64(data[i])) * _FNV_PRIME
    return value


@nb.njit(**_numba_setting)
def _coefficient(horizontal, vertical, i, k):

    if vertical.shape[0] == 1:
        return horizontal[i] * vertical[0, k]
    return horizontal[i] * vertical[i, k]


@nb.njit(**_numba_setting)
def _fill_column(t, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, a, b, c, d):

    # b couples k to k + 1 through face k + 1, c couples k to k - 1
    # through face k
    for k in range(a.shape[0]):
        up = -_coefficient(rh, rv, t, k + 1) - _coefficient(xh, xv, t, k + 1)
        down = -_coefficient(rh, rv, t, k) + _coefficient(xh, xv, t, k)
        neighbours = 0.0
        for j in range(3):
            d[j, k] = -_coefficient(sh, sv, cell_edges[t, j], k)
            neighbours += d[j, k]
        b[k] = up
        c[k] = down
        a[k] = _coefficient(bh, bv, t, k) - (up + down + neighbours)


@nb.njit(**_numba_setting)
def _column_product(t, neighbors, a, b, c, d, u, k):

    n_r = a.shape[0]
    value = a[k] * u[t, k]
    if k + 1 < n_r:
        value += b[k] * u[t, k + 1]
    if k > 0:
        value += c[k] * u[t, k - 1]
    for j in range(3):
        value += d[j, k] * u[neighbors[t, j], k]
    return value


@nb.njit(**_numba_setting)
def _thomas(a, b, c, rhs, x, scratch):

    n = a.shape[0]
    pivot = a[0]
    if not abs(pivot) > 0.0:
        return False
    scratch[0] = b[0] / pivot
    x[0] = rhs[0] / pivot
    for k in range(1, n):
        pivot = a[k] - c[k] * scratch[k - 1]
        if not abs(pivot) > 0.0:
            return False
        scratch[k] = b[k] / pivot
        x[k] = (rhs[k] - c[k] * x[k - 1]) / pivot
    for k in range(n - 2, -1, -1):
        x[k] -= scratch[k] * x[k + 1]
    return True


@nb.njit(parallel=True, **_numba_setting)
def thomas_batch(a, b, c, rhs, x, status):

    for i in nb.prange(a.shape[0]):
        scratch = np.empty(a.shape[1])
        status[i] = 0 if _thomas(a[i], b[i], c[i], rhs[i], x[i], scratch) else 1


@nb.njit(parallel=True, **_numba_setting)
def fill_columns(cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, a, b, c, d):

    for t in nb.prange(a.shape[0]):
        _fill_column(
            t, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, a[t], b[t], c[t], d[t]
        )


@nb.njit(parallel=True, **_numba_setting)
def apply_columns(neighbors, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, u, out):

    n_cells, n_r = u.shape
    for t in nb.prange(n_cells):
        a = np.empty(n_r)
        b = np.empty(n_r)
        c = np.empty(n_r)
        d = np.empty((3, n_r))
        _fill_column(t, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, a, b, c, d)
        for k in range(n_r):
            out[t, k] = _column_product(t, neighbors, a, b, c, d, u, k)


@nb.njit(parallel=True, **_numba_setting)
def residual_columns(
    neighbors, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, u, f, out
):

    n_cells, n_r = u.shape
    for t in nb.prange(n_cells):
        a = np.empty(n_r)
        b = np.empty(n_r)
        c = np.empty(n_r)
        d = np.empty((3, n_r))
        _fill_column(t, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, a, b, c, d)
        for k in range(n_r):
            out[t, k] = f[t, k] - _column_product(t, neighbors, a, b, c, d, u, k)


@nb.njit(parallel=True, **_numba_setting)
def block_jacobi_sweep(
    neighbors, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, u, f, rho, out,
    status
):

    n_cells, n_r = u.shape
    for t in nb.prange(n_cells):
        a = np.empty(n_r)
        b = np.empty(n_r)
        c = np.empty(n_r)
        d = np.empty((3, n_r))
        r = np.empty(n_r)
        x = np.empty(n_r)
        scratch = np.empty(n_r)
        _fill_column(t, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, a, b, c, d)
        for k in range(n_r):
            r[k] = f[t, k] - _column_product(t, neighbors, a, b, c, d, u, k)
        if _thomas(a, b, c, r, x, scratch):
            status[t] = 0
        else:
            status[t] = 1
            x[:] = 0.0
        for k in range(n_r):
            out[t, k] = u[t, k] + rho * x[k]


@nb.njit(**_numba_setting)
def block_sor_sweep(
    neighbors, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, u, f, rho, order
):

    # Updates u in place, returns the first singular column or -1
    n_r = u.shape[1]
    a = np.empty(n_r)
    b = np.empty(n_r)
    c = np.empty(n_r)
    d = np.empty((3, n_r))
    r = np.empty(n_r)
    x = np.empty(n_r)
    scratch = np.empty(n_r)
    for i in range(order.shape[0]):
        t = order[i]
        _fill_column(t, cell_edges, bh, bv, sh, sv, rh, rv, xh, xv, a, b, c, d)
        for k in range(n_r):
            r[k] = f[t, k] - _column_product(t, neighbors, a, b, c, d, u, k)
        if not _thomas(a, b, c, r, x, scratch):
            return t
        for k in range(n_r):
            u[t, k] += rho * x[k]
    return -1
