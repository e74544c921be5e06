"""Matrix-free application of the second-difference operators.

T is the M x M one-dimensional operator: interior rows (1/h^2)[1, -2, 1].
Under Neumann the end rows are (1/h^2)[-2, 2] and [2, -2] (ghost
reflection; constants lie in the null space).  Under Dirichlet the end
rows are zeroed so every shifted system (I - c*T*D) has exact identity
rows at the boundary and pinned values pass through solves unchanged.

P = I (x) T differences along x (the fast index), R = T (x) I along y.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import Bc, FieldPair, GridSpec, ModelParams


def _bc_code(bc: Bc) -> int:
    return kernels.DIRICHLET if bc is Bc.DIRICHLET else kernels.NEUMANN


@dataclass(frozen=True)
class LineOperator:
    """The 1D operator T for one grid direction."""

    size: int
    inv_h2: float
    bc: Bc

    @staticmethod
    def for_grid(grid: GridSpec) -> "LineOperator":
        h = grid.spacing
        return LineOperator(size=grid.node_count, inv_h2=1.0 / (h * h), bc=grid.bc)


def apply_line_operator(op: LineOperator, line: np.ndarray) -> np.ndarray:
    """Return T @ line."""
    line = np.asarray(line, dtype=np.float64)
    if line.shape != (op.size,):
        raise ValueError(f"line length {line.shape} does not match operator size {op.size}")
    out = np.empty_like(line)
    out[1:-1] = op.inv_h2 * (line[:-2] - 2.0 * line[1:-1] + line[2:])
    if op.bc is Bc.DIRICHLET:
        out[0] = 0.0
        out[-1] = 0.0
    else:
        out[0] = op.inv_h2 * (-2.0 * line[0] + 2.0 * line[1])
        out[-1] = op.inv_h2 * (2.0 * line[-2] - 2.0 * line[-1])
    return out


def _check_lattice(grid: GridSpec, field: np.ndarray) -> np.ndarray:
    field = np.ascontiguousarray(field, dtype=np.float64)
    m = grid.node_count
    if field.shape != (m, m):
        raise ValueError(f"lattice shape {field.shape} does not match grid ({m}, {m})")
    return field


def apply_P(grid: GridSpec, field: np.ndarray, diag: np.ndarray | None = None) -> np.ndarray:
    """Return P @ (D(diag) @ field), x-direction line sweeps."""
    field = _check_lattice(grid, field)
    if diag is not None:
        field = _check_lattice(grid, diag) * field
    out = np.empty_like(field)
    op = LineOperator.for_grid(grid)
    kernels.stencil_x(field, op.inv_h2, _bc_code(grid.bc), out)
    return out


def apply_R(grid: GridSpec, field: np.ndarray, diag: np.ndarray | None = None) -> np.ndarray:
    """Return R @ (D(diag) @ field), y-direction line sweeps."""
    field = _check_lattice(grid, field)
    if diag is not None:
        field = _check_lattice(grid, diag) * field
    out = np.empty_like(field)
    op = LineOperator.for_grid(grid)
    kernels.stencil_y(field, op.inv_h2, _bc_code(grid.bc), out)
    return out


def invertibility_guard(grid: GridSpec, params: ModelParams, fields: FieldPair, tau: float) -> bool:
    """True iff kappa*tau/h^2 < 1 / (2*max{1, max field value}).

    This is the step-size criterion guaranteeing every implicit factor of
    the splitting is nonsingular; False means the step must shrink.
    """
    h = grid.spacing
    bound = 1.0 / (2.0 * max(1.0, fields.max_value()))
    return params.kappa() * tau / (h * h) < bound
