"""Dense small-grid reference implementations.

Everything here assembles the full M^2 x M^2 operators explicitly and
solves with LAPACK, so it is only allowed on grids with node_count <= 12.
These routines exist to cross-check the line-sweep scheme: the coupled
trapezoidal system solved by fixed-point iteration is the accuracy
reference, and the explicit factored forms realize the product
factorizations the splitting is equivalent to through third order in the
step size.
"""

from __future__ import annotations

import numpy as np

from .errors import NonConvergence, SingularSystem
from .model import Bc, FieldPair, GridSpec, ModelParams, SolverState
from .splitting import _pin_ring, evaluate_reactions, euler_predict

MAX_DENSE_NODES = 12
PICARD_TOL = 1e-12
PICARD_MAX_ITER = 100


def _require_small(grid: GridSpec) -> None:
    if grid.node_count > MAX_DENSE_NODES:
        raise ValueError(
            f"dense oracle refuses node_count {grid.node_count} > {MAX_DENSE_NODES}"
        )


def line_matrix(grid: GridSpec) -> np.ndarray:
    """Dense M x M one-dimensional operator T for the grid's BC."""
    m = grid.node_count
    ih2 = 1.0 / grid.spacing ** 2
    t = np.zeros((m, m))
    for i in range(1, m - 1):
        t[i, i - 1] = ih2
        t[i, i] = -2.0 * ih2
        t[i, i + 1] = ih2
    if grid.bc is Bc.NEUMANN:
        t[0, 0] = -2.0 * ih2
        t[0, 1] = 2.0 * ih2
        t[-1, -1] = -2.0 * ih2
        t[-1, -2] = 2.0 * ih2
    return t


def dense_P(grid: GridSpec) -> np.ndarray:
    return np.kron(np.eye(grid.node_count), line_matrix(grid))


def dense_R(grid: GridSpec) -> np.ndarray:
    return np.kron(line_matrix(grid), np.eye(grid.node_count))


def assemble_dense(grid: GridSpec, params: ModelParams, fields: FieldPair):
    """Dense system matrices (P+R) D_u and (P+R) D_v of the semidiscrete system."""
    _require_small(grid)
    pr = dense_P(grid) + dense_R(grid)
    du = params.d1 + params.s1 * fields.u.ravel() + params.c12 * fields.v.ravel()
    dv = params.d2 + params.s2 * fields.v.ravel() + params.c21 * fields.u.ravel()
    return pr * du[np.newaxis, :], pr * dv[np.newaxis, :]


def _pinned_flat(grid: GridSpec, lattice: np.ndarray) -> np.ndarray:
    return _pin_ring(grid, lattice.copy()).ravel()


def picard_cn_solve(state: SolverState, grid: GridSpec, params: ModelParams, tau: float,
                    tol: float = PICARD_TOL, max_iter: int = PICARD_MAX_ITER):
    """Solve the coupled trapezoidal step; returns (FieldPair, iterations)."""
    _require_small(grid)
    m = grid.node_count
    n = m * m
    pr = dense_P(grid) + dense_R(grid)
    eye = np.eye(n)
    u = state.fields.u
    v = state.fields.v
    uf = u.ravel()
    vf = v.ravel()
    t = state.time
    f_k, g_k = evaluate_reactions(state.fields, grid, params.reaction, t)
    a_u, a_v = assemble_dense(grid, params, state.fields)
    rhs_u_base = uf + tau / 2.0 * (a_u @ uf)
    rhs_v_base = vf + tau / 2.0 * (a_v @ vf)
    pred = euler_predict(state, grid, params, tau)
    up, vp = pred.u, pred.v
    for it in range(1, max_iter + 1):
        f_1, g_1 = evaluate_reactions(FieldPair(up, vp), grid, params.reaction, t + tau)
        du = params.d1 + params.s1 * up.ravel() + params.c12 * vp.ravel()
        dv = params.d2 + params.s2 * vp.ravel() + params.c21 * up.ravel()
        lhs_u = eye - tau / 2.0 * (pr * du[np.newaxis, :])
        lhs_v = eye - tau / 2.0 * (pr * dv[np.newaxis, :])
        rhs_u = rhs_u_base + tau / 2.0 * _pinned_flat(grid, f_1 + f_k)
        rhs_v = rhs_v_base + tau / 2.0 * _pinned_flat(grid, g_1 + g_k)
        if grid.bc is Bc.DIRICHLET:
            rhs_u = _pin_ring(grid, rhs_u.reshape(m, m)).ravel()
            rhs_v = _pin_ring(grid, rhs_v.reshape(m, m)).ravel()
        un = np.linalg.solve(lhs_u, rhs_u).reshape(m, m)
        vn = np.linalg.solve(lhs_v, rhs_v).reshape(m, m)
        delta = max(np.abs(un - up).max(), np.abs(vn - vp).max())
        up, vp = un, vn
        if delta < tol:
            return FieldPair(up, vp), it
    raise NonConvergence(f"coupled trapezoidal iteration stalled after {max_iter} passes")


def dense_cn_step(state: SolverState, grid: GridSpec, params: ModelParams, tau: float) -> FieldPair:
    """Reference step: the coupled trapezoidal system, iterated to 1e-12."""
    fields, _ = picard_cn_solve(state, grid, params, tau)
    return fields


def _factor_solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc


def _factored_once(state, grid, params, tau, predicted):
    m = grid.node_count
    p = dense_P(grid)
    r = dense_R(grid)
    eye = np.eye(m * m)
    t2 = tau / 2.0
    uf = state.fields.u.ravel()
    vf = state.fields.v.ravel()
    f_k, g_k = evaluate_reactions(state.fields, grid, params.reaction, state.time)
    f_1, g_1 = evaluate_reactions(predicted, grid, params.reaction, state.time + tau)
    duk = state.fields.u.ravel()
    dvk = state.fields.v.ravel()
    dus = predicted.u.ravel()
    dvs = predicted.v.ravel()

    def one_species(qf, d, s, c, own_k, own_s, oth_k, oth_s, react_sum):
        minus = [
            eye - t2 * d * p,
            eye - t2 * d * r,
            eye - t2 * s * (p * own_s[np.newaxis, :]),
            eye - t2 * s * (r * own_s[np.newaxis, :]),
            eye - t2 * c * (p * oth_s[np.newaxis, :]),
            eye - t2 * c * (r * oth_s[np.newaxis, :]),
        ]
        plus = [
            eye + t2 * d * p,
            eye + t2 * d * r,
            eye + t2 * s * (p * own_k[np.newaxis, :]),
            eye + t2 * s * (r * own_k[np.newaxis, :]),
            eye + t2 * c * (p * oth_k[np.newaxis, :]),
            eye + t2 * c * (r * oth_k[np.newaxis, :]),
        ]
        b = qf.copy()
        for mat in reversed(plus):
            b = mat @ b
        b = b + t2 * react_sum
        if grid.bc is Bc.DIRICHLET:
            b = _pin_ring(grid, b.reshape(m, m)).ravel()
        for mat in minus:
            b = _factor_solve(mat, b)
        return b

    un = one_species(uf, params.d1, params.s1, params.c12, duk, dus, dvk, dvs,
                     _pinned_flat(grid, f_1 + f_k))
    vn = one_species(vf, params.d2, params.s2, params.c21, dvk, dvs, duk, dus,
                     _pinned_flat(grid, g_1 + g_k))
    return FieldPair(un.reshape(m, m), vn.reshape(m, m))


def factored_step(state: SolverState, grid: GridSpec, params: ModelParams, tau: float,
                  predicted: FieldPair | None = None,
                  tol: float = PICARD_TOL, max_iter: int = PICARD_MAX_ITER) -> FieldPair:
    """Step via the explicit six-factor (four-factor when s = 0) products.

    Applies the plus-factors to the current fields, adds the averaged
    reactions, and inverts the minus-factors left to right.  When no
    predicted fields are supplied the next-level diagonals are resolved
    by the same fixed-point iteration the splitting uses, seeded with a
    forward Euler step.
    """
    _require_small(grid)
    if predicted is not None:
        return _factored_once(state, grid, params, tau, predicted)
    pred = euler_predict(state, grid, params, tau)
    for _ in range(max_iter):
        result = _factored_once(state, grid, params, tau, pred)
        delta = max(np.abs(result.u - pred.u).max(), np.abs(result.v - pred.v).max())
        pred = result
        if delta < tol:
            return result
    raise NonConvergence(f"factored-step iteration stalled after {max_iter} passes")
