"""Numba kernels for line-sweep stencil application and shifted line solves.

Lattices are C-contiguous (M, M) float64 arrays indexed [j, i].  The x
direction is axis 1 (contiguous lines), y is axis 0.  Boundary handling:
bc_code 0 = Neumann (ghost reflection folded into the end rows), 1 =
Dirichlet (zero operator rows; shifted systems get identity end rows).

Kernels return a status int instead of raising: 0 = ok, 1 = zero pivot.
"""

import numpy as np
from numba import njit

NEUMANN = 0
DIRICHLET = 1


@njit(cache=True)
def stencil_x(field, inv_h2, bc_code, out):
    m = field.shape[0]
    for j in range(m):
        for i in range(1, m - 1):
            out[j, i] = inv_h2 * (field[j, i - 1] - 2.0 * field[j, i] + field[j, i + 1])
        if bc_code == DIRICHLET:
            out[j, 0] = 0.0
            out[j, m - 1] = 0.0
        else:
            out[j, 0] = inv_h2 * (-2.0 * field[j, 0] + 2.0 * field[j, 1])
            out[j, m - 1] = inv_h2 * (2.0 * field[j, m - 2] - 2.0 * field[j, m - 1])


@njit(cache=True)
def stencil_y(field, inv_h2, bc_code, out):
    m = field.shape[0]
    for j in range(1, m - 1):
        for i in range(m):
            out[j, i] = inv_h2 * (field[j - 1, i] - 2.0 * field[j, i] + field[j + 1, i])
    for i in range(m):
        if bc_code == DIRICHLET:
            out[0, i] = 0.0
            out[m - 1, i] = 0.0
        else:
            out[0, i] = inv_h2 * (-2.0 * field[0, i] + 2.0 * field[1, i])
            out[m - 1, i] = inv_h2 * (2.0 * field[m - 2, i] - 2.0 * field[m - 1, i])


@njit(cache=True)
def sweep_x(coef, dfield, rhs, inv_h2, bc_code, out, cp, dp):
    """Solve (I - coef * T_x * D(dfield)) w = rhs for every row; Thomas per line."""
    m = rhs.shape[0]
    a = coef * inv_h2
    for j in range(m):
        if bc_code == DIRICHLET:
            b0 = 1.0
            c0 = 0.0
        else:
            b0 = 1.0 + 2.0 * a * dfield[j, 0]
            c0 = -2.0 * a * dfield[j, 1]
        if b0 == 0.0:
            return 1
        cp[0] = c0 / b0
        dp[0] = rhs[j, 0] / b0
        for i in range(1, m - 1):
            lo = -a * dfield[j, i - 1]
            di = 1.0 + 2.0 * a * dfield[j, i]
            up = -a * dfield[j, i + 1]
            den = di - lo * cp[i - 1]
            if den == 0.0:
                return 1
            cp[i] = up / den
            dp[i] = (rhs[j, i] - lo * dp[i - 1]) / den
        if bc_code == DIRICHLET:
            lo = 0.0
            di = 1.0
        else:
            lo = -2.0 * a * dfield[j, m - 2]
            di = 1.0 + 2.0 * a * dfield[j, m - 1]
        den = di - lo * cp[m - 2]
        if den == 0.0:
            return 1
        dp[m - 1] = (rhs[j, m - 1] - lo * dp[m - 2]) / den
        out[j, m - 1] = dp[m - 1]
        for i in range(m - 2, -1, -1):
            out[j, i] = dp[i] - cp[i] * out[j, i + 1]
    return 0


@njit(cache=True)
def sweep_y(coef, dfield, rhs, inv_h2, bc_code, out, cp, dp):
    """Column-direction analog of sweep_x."""
    m = rhs.shape[0]
    a = coef * inv_h2
    for i in range(m):
        if bc_code == DIRICHLET:
            b0 = 1.0
            c0 = 0.0
        else:
            b0 = 1.0 + 2.0 * a * dfield[0, i]
            c0 = -2.0 * a * dfield[1, i]
        if b0 == 0.0:
            return 1
        cp[0] = c0 / b0
        dp[0] = rhs[0, i] / b0
        for j in range(1, m - 1):
            lo = -a * dfield[j - 1, i]
            di = 1.0 + 2.0 * a * dfield[j, i]
            up = -a * dfield[j + 1, i]
            den = di - lo * cp[j - 1]
            if den == 0.0:
                return 1
            cp[j] = up / den
            dp[j] = (rhs[j, i] - lo * dp[j - 1]) / den
        if bc_code == DIRICHLET:
            lo = 0.0
            di = 1.0
        else:
            lo = -2.0 * a * dfield[m - 2, i]
            di = 1.0 + 2.0 * a * dfield[m - 1, i]
        den = di - lo * cp[m - 2]
        if den == 0.0:
            return 1
        dp[m - 1] = (rhs[m - 1, i] - lo * dp[m - 2]) / den
        out[m - 1, i] = dp[m - 1]
        for j in range(m - 2, -1, -1):
            out[j, i] = dp[j] - cp[j] * out[j + 1, i]
    return 0
