import numpy as np
import pytest

from crossdiff import (Bc, FieldPair, GridSpec, ModelParams, ReactionSpec,
                       SolverState, dense_cn_step, euler_predict,
                       evaluate_reactions, step_cross_only, step_full)
from crossdiff.oracle import dense_P, dense_R


def _state(grid, rng, scale=1.0, pin=False):
    m = grid.node_count
    u = scale * rng.random((m, m))
    v = scale * rng.random((m, m))
    if pin or grid.bc is Bc.DIRICHLET:
        for arr in (u, v):
            arr[0, :] = arr[-1, :] = arr[:, 0] = arr[:, -1] = 0.0
    return SolverState.initial(FieldPair(u, v), 1e-3)


def test_evaluate_reactions_zero():
    grid = GridSpec(1.0, 3, Bc.NEUMANN)
    fields = FieldPair(np.ones((5, 5)), np.ones((5, 5)))
    f, g = evaluate_reactions(fields, grid, ReactionSpec.zero(), 0.0)
    assert not f.any() and not g.any()


def test_evaluate_reactions_lotka_volterra_at_zero_fields():
    grid = GridSpec(1.0, 3, Bc.NEUMANN)
    z = np.zeros((5, 5))
    spec = ReactionSpec.lotka_volterra(1.0, 2.0, 0.2, 0.3, 1.0, 4.0)
    f, g = evaluate_reactions(FieldPair(z, z.copy()), grid, spec, 0.0)
    assert not f.any() and not g.any()


def test_evaluate_reactions_logistic_value():
    grid = GridSpec(1.0, 3, Bc.NEUMANN)
    ones = np.ones((5, 5))
    spec = ReactionSpec.logistic_blowup(3.0, 4.0, 3.0, 4.0)
    f, g = evaluate_reactions(FieldPair(ones, ones.copy()), grid, spec, 0.0)
    assert (f == 7.0).all() and (g == 7.0).all()


def test_euler_predict_zero_tau_is_identity():
    rng = np.random.default_rng(2)
    grid = GridSpec(1.0, 6, Bc.NEUMANN)
    state = _state(grid, rng)
    params = ModelParams(1, 1, 0.5, 0.5, 0.5, 0.5)
    out = euler_predict(state, grid, params, 0.0)
    assert np.array_equal(out.u, state.fields.u)
    assert np.array_equal(out.v, state.fields.v)


def test_euler_predict_constant_fixed_point():
    grid = GridSpec(1.0, 6, Bc.NEUMANN)
    m = grid.node_count
    fields = FieldPair(np.full((m, m), 0.4), np.full((m, m), 0.7))
    state = SolverState.initial(fields, 1e-3)
    params = ModelParams(1, 1, 0.3, 0.3, 0.2, 0.2)
    out = euler_predict(state, grid, params, 1e-3)
    assert np.array_equal(out.u, fields.u)
    assert np.array_equal(out.v, fields.v)


def test_euler_predict_matches_dense():
    rng = np.random.default_rng(4)
    grid = GridSpec(1.0, 4, Bc.NEUMANN)
    m = grid.node_count
    state = _state(grid, rng)
    params = ModelParams(0.6, 0.8, 0.2, 0.3, 0.4, 0.1,
                         ReactionSpec.lotka_volterra(1.0, 2.0, 0.2, 0.3, 1.0, 4.0))
    tau = 1e-3
    out = euler_predict(state, grid, params, tau)
    pr = dense_P(grid) + dense_R(grid)
    uf, vf = state.fields.u.ravel(), state.fields.v.ravel()
    f, g = evaluate_reactions(state.fields, grid, params.reaction, 0.0)
    want_u = uf + tau * (pr @ ((params.d1 + params.s1 * uf + params.c12 * vf) * uf)) \
        + tau * f.ravel()
    want_v = vf + tau * (pr @ ((params.d2 + params.s2 * vf + params.c21 * uf) * vf)) \
        + tau * g.ravel()
    assert np.abs(out.u.ravel() - want_u).max() <= 1e-13
    assert np.abs(out.v.ravel() - want_v).max() <= 1e-13


def test_constant_fields_are_bitwise_fixed_points():
    grid = GridSpec(1.0, 10, Bc.NEUMANN)
    m = grid.node_count
    fields = FieldPair(np.full((m, m), 0.8), np.full((m, m), 0.3))
    params = ModelParams(1, 1, 1, 1, 1, 1)
    state = SolverState.initial(fields, 1e-4)
    for _ in range(50):
        out = step_full(state, grid, params, 1e-4)
        assert np.array_equal(out.u, fields.u)
        assert np.array_equal(out.v, fields.v)
        state = state.advanced(1e-4, out)


def test_zero_fields_stay_zero():
    grid = GridSpec(1.0, 6, Bc.DIRICHLET)
    m = grid.node_count
    z = np.zeros((m, m))
    params = ModelParams(1, 1, 0, 0, 0.5, 0.5)
    state = SolverState.initial(FieldPair(z, z.copy()), 1e-4)
    out = step_cross_only(state, grid, params, 1e-4)
    assert not out.u.any() and not out.v.any()


def test_exchange_symmetry_bitwise():
    rng = np.random.default_rng(9)
    grid = GridSpec(1.0, 10, Bc.NEUMANN)
    m = grid.node_count
    w = rng.random((m, m))
    fields = FieldPair(w, w.copy())
    params = ModelParams(0.7, 0.7, 0.2, 0.2, 0.3, 0.3,
                         ReactionSpec.logistic_blowup(0.5, 0.25, 0.5, 0.25))
    state = SolverState.initial(fields, 2e-4)
    for _ in range(20):
        out = step_full(state, grid, params, 2e-4)
        assert np.array_equal(out.u, out.v)
        state = state.advanced(2e-4, out)


def test_dirichlet_ring_pinned_through_steps():
    rng = np.random.default_rng(13)
    grid = GridSpec(1.0, 8, Bc.DIRICHLET)
    state = _state(grid, rng)
    params = ModelParams(1, 1, 0.5, 0.5, 0.5, 0.5,
                         ReactionSpec.manufactured_dirichlet())
    tau = 2e-4
    for _ in range(10):
        out = step_full(state, grid, params, tau)
        out.validate_for_grid(grid)    # raises unless the ring is exactly zero
        state = state.advanced(tau, out)


def test_full_reduces_to_cross_only_bitwise():
    rng = np.random.default_rng(21)
    grid = GridSpec(1.0, 7, Bc.NEUMANN)
    state = _state(grid, rng)
    params = ModelParams(0.8, 0.6, 0.0, 0.0, 0.5, 0.3)
    tau = 5e-4
    a = step_full(state, grid, params, tau)
    b = step_cross_only(state, grid, params, tau)
    assert np.array_equal(a.u, b.u)
    assert np.array_equal(a.v, b.v)


def test_cross_only_requires_zero_self_terms():
    rng = np.random.default_rng(1)
    grid = GridSpec(1.0, 4, Bc.NEUMANN)
    state = _state(grid, rng)
    params = ModelParams(1, 1, 0.1, 0.0, 0.2, 0.2)
    with pytest.raises(ValueError):
        step_cross_only(state, grid, params, 1e-4)


@pytest.mark.parametrize("cross_only", [True, False])
def test_per_step_gap_to_reference_shrinks_cubically(cross_only):
    rng = np.random.default_rng(42)
    grid = GridSpec(2.0, 6, Bc.NEUMANN)
    state = _state(grid, rng)
    if cross_only:
        params = ModelParams(0.4, 0.25, 0.0, 0.0, 0.3, 0.1)
        stepper = step_cross_only
    else:
        params = ModelParams(0.4, 0.25, 0.15, 0.2, 0.3, 0.1)
        stepper = step_full
    gaps = []
    for tau in (1e-3, 5e-4, 2.5e-4):
        split = stepper(state, grid, params, tau)
        ref = dense_cn_step(state, grid, params, tau)
        gaps.append(max(np.abs(split.u - ref.u).max(), np.abs(split.v - ref.v).max()))
    for g0, g1 in zip(gaps, gaps[1:]):
        assert 6.5 <= g0 / g1 <= 9.5
