"""Thomas-algorithm solves for the shifted line systems (I - c*T*D).

thomas_solve is the scalar reference used by tests and small systems;
solve_shifted_x / solve_shifted_y run the same elimination over all grid
lines through the compiled kernels.  Because D multiplies P and R on the
right, row i of a shifted line system carries the NEIGHBOR's diagonal
value on its off-diagonals:

    [-c*d[i-1]/h^2,  1 + 2*c*d[i]/h^2,  -c*d[i+1]/h^2]

with the Neumann end rows doubling the single off-diagonal entry and
Dirichlet end rows reducing to the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SingularSystem
from .model import Bc, GridSpec
from .operators import _bc_code, _check_lattice


@dataclass
class TridiagonalSystem:
    """General tridiagonal system: lower/upper have length n-1, diag and rhs length n."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        if len(self.rhs) != n or len(self.lower) != n - 1 or len(self.upper) != n - 1:
            raise ValueError("inconsistent tridiagonal system lengths")


def thomas_solve(sys: TridiagonalSystem) -> np.ndarray:
    """Solve the system in O(n) by forward elimination and back substitution."""
    n = len(sys.diag)
    cp = np.empty(n)
    dp = np.empty(n)
    if sys.diag[0] == 0.0:
        raise SingularSystem("zero pivot at row 0")
    cp[0] = sys.upper[0] / sys.diag[0] if n > 1 else 0.0
    dp[0] = sys.rhs[0] / sys.diag[0]
    for i in range(1, n):
        den = sys.diag[i] - sys.lower[i - 1] * cp[i - 1]
        if den == 0.0:
            raise SingularSystem(f"zero pivot at row {i}")
        cp[i] = sys.upper[i] / den if i < n - 1 else 0.0
        dp[i] = (sys.rhs[i] - sys.lower[i - 1] * dp[i - 1]) / den
    x = np.empty(n)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def shifted_line_system(grid: GridSpec, coef: float, dline: np.ndarray, rhs: np.ndarray) -> TridiagonalSystem:
    """Assemble one line's (I - coef*T*D(dline)) system explicitly."""
    m = grid.node_count
    a = coef / (grid.spacing ** 2)
    lower = -a * dline[:-1]
    diag = 1.0 + 2.0 * a * dline
    upper = -a * dline[1:]
    lower = lower.copy()
    upper = upper.copy()
    if grid.bc is Bc.DIRICHLET:
        diag = diag.copy()
        diag[0] = 1.0
        diag[-1] = 1.0
        upper[0] = 0.0
        lower[-1] = 0.0
    else:
        upper[0] = -2.0 * a * dline[1]
        lower[-1] = -2.0 * a * dline[-2]
    return TridiagonalSystem(lower=lower, diag=diag, upper=upper, rhs=np.asarray(rhs, dtype=np.float64))


def solve_shifted_x(grid: GridSpec, coef: float, diag_field: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (I - coef * P * D(diag_field)) w = rhs, one Thomas solve per x-line."""
    diag_field = _check_lattice(grid, diag_field)
    rhs = _check_lattice(grid, rhs)
    out = np.empty_like(rhs)
    m = grid.node_count
    cp = np.empty(m)
    dp = np.empty(m)
    op_inv_h2 = 1.0 / (grid.spacing ** 2)
    status = kernels.sweep_x(coef, diag_field, rhs, op_inv_h2, _bc_code(grid.bc), out, cp, dp)
    if status != 0:
        raise SingularSystem("zero pivot in x-line sweep")
    return out


def solve_shifted_y(grid: GridSpec, coef: float, diag_field: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (I - coef * R * D(diag_field)) w = rhs, one Thomas solve per y-line."""
    diag_field = _check_lattice(grid, diag_field)
    rhs = _check_lattice(grid, rhs)
    out = np.empty_like(rhs)
    m = grid.node_count
    cp = np.empty(m)
    dp = np.empty(m)
    op_inv_h2 = 1.0 / (grid.spacing ** 2)
    status = kernels.sweep_y(coef, diag_field, rhs, op_inv_h2, _bc_code(grid.bc), out, cp, dp)
    if status != 0:
        raise SingularSystem("zero pivot in y-line sweep")
    return out
