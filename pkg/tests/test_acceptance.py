"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`.  The heavy runs are
shared through module-scoped fixtures; the whole module takes a few
minutes on a desktop machine.
"""

import time
import warnings

import numpy as np
import pytest

from crossdiff import (Bc, FieldPair, GridSpec, ModelParams, ReactionSpec,
                       SolverState, Status, audit_cfl, dense_cn_step,
                       factored_step, step_cross_only, step_full)
from crossdiff.scenarios import (config_from_pairs, run_blowup,
                                 run_convergence_study, run_homogeneity,
                                 run_timing_study)

warnings.filterwarnings("ignore", message=".*negative.*")


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"\n[acceptance {num:2d}] {name}: {'PASS' if ok else 'FAIL'}  ({detail})")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


@pytest.fixture(scope="module")
def dirichlet_study():
    t0 = time.perf_counter()
    cfg = config_from_pairs({"scenario": "example1_dirichlet", "halvings": 2})
    result = run_convergence_study(cfg)
    return result, time.perf_counter() - t0, cfg


@pytest.fixture(scope="module")
def neumann_study():
    t0 = time.perf_counter()
    cfg = config_from_pairs({"scenario": "example1_neumann", "halvings": 1})
    result = run_convergence_study(cfg)
    return result, time.perf_counter() - t0, cfg


@pytest.fixture(scope="module")
def blowup_run():
    cfg = config_from_pairs({"scenario": "example3"})
    return run_blowup(cfg), cfg


@pytest.fixture(scope="module")
def homogeneity_runs():
    out = []
    for seed in (1, 2, 3):
        cfg = config_from_pairs({"scenario": "example2", "rng_seed": seed})
        out.append((run_homogeneity(cfg), cfg))
    return out


def test_criterion_1_dirichlet_order(dirichlet_study):
    result, elapsed, _ = dirichlet_study
    p = result.orders[0]
    ok = 1.85 <= p <= 2.15 and elapsed < 120.0
    _report(1, "Dirichlet temporal order, desk scale", ok,
            f"p={p:.4f} in [1.85, 2.15], runtime {elapsed:.0f}s < 120s")


def test_criterion_2_neumann_order(neumann_study):
    result, elapsed, _ = neumann_study
    p = result.orders[0]
    ok = 1.85 <= p <= 2.15
    _report(2, "Neumann temporal order, desk scale", ok,
            f"p={p:.4f} in [1.85, 2.15], runtime {elapsed:.0f}s")


def test_criterion_3_error_ratio(dirichlet_study):
    result, _, _ = dirichlet_study
    e = result.temporal_errors
    ratios = [e[0] / e[1], e[1] / e[2]]
    ok = all(3.5 <= r <= 4.5 for r in ratios)
    _report(3, "error ratio across two step halvings", ok,
            "ratios " + ", ".join(f"{r:.3f}" for r in ratios) + " in [3.5, 4.5]")


def test_criterion_4_factorization_theorems():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    grid = GridSpec(2.0, 6, Bc.NEUMANN)      # node_count 8
    m = grid.node_count
    fields = FieldPair(rng.random((m, m)), rng.random((m, m)))
    state = SolverState.initial(fields, 1e-3)
    taus = (1e-3, 5e-4, 2.5e-4)
    worst = {"split_cn": [], "fact_cn": [], "split_fact": []}
    for cross_only in (True, False):
        if cross_only:
            params = ModelParams(0.4, 0.25, 0.0, 0.0, 0.3, 0.1)
            stepper = step_cross_only
        else:
            params = ModelParams(0.4, 0.25, 0.15, 0.2, 0.3, 0.1)
            stepper = step_full
        # guard headroom: kappa*tau/h^2 = 0.4*1e-3/0.0816 << 1/(2*max)
        gaps = {k: [] for k in worst}
        for tau in taus:
            sp = stepper(state, grid, params, tau)
            cn = dense_cn_step(state, grid, params, tau)
            fa = factored_step(state, grid, params, tau)
            gaps["split_cn"].append(max(np.abs(sp.u - cn.u).max(), np.abs(sp.v - cn.v).max()))
            gaps["fact_cn"].append(max(np.abs(fa.u - cn.u).max(), np.abs(fa.v - cn.v).max()))
            gaps["split_fact"].append(max(np.abs(sp.u - fa.u).max(), np.abs(sp.v - fa.v).max()))
        for key, g in gaps.items():
            worst[key].extend([g[0] / g[1], g[1] / g[2]])
    elapsed = time.perf_counter() - t0
    all_ratios = [r for rs in worst.values() for r in rs]
    ok = all(6.5 <= r <= 9.5 for r in all_ratios) and elapsed < 30.0
    detail = "; ".join(f"{k}: " + ",".join(f"{r:.2f}" for r in rs) for k, rs in worst.items())
    _report(4, "per-step gaps shrink ~8x per halving", ok,
            f"{detail}; runtime {elapsed:.1f}s < 30s")


def test_criterion_5_exchange_symmetry():
    rng = np.random.default_rng(99)
    grid = GridSpec(1.0, 14, Bc.NEUMANN)
    m = grid.node_count
    w = rng.random((m, m))
    params = ModelParams(0.8, 0.8, 0.25, 0.25, 0.4, 0.4,
                         ReactionSpec.logistic_blowup(0.5, 0.2, 0.5, 0.2))
    state = SolverState.initial(FieldPair(w, w.copy()), 1e-4)
    ok = True
    for _ in range(100):
        fields = step_full(state, grid, params, 1e-4)
        if not (np.array_equal(fields.u, fields.v)):
            ok = False
            break
        state = state.advanced(1e-4, fields)
    _report(5, "u/v exchange symmetry bitwise over 100 steps", ok,
            f"final max {state.fields.max_value():.6f}")


def test_criterion_6_constant_fixed_point():
    grid = GridSpec(1.0, 14, Bc.NEUMANN)
    m = grid.node_count
    u0 = np.full((m, m), 0.6)
    v0 = np.full((m, m), 1.3)
    fields = FieldPair(u0, v0)
    params = ModelParams(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, ReactionSpec.zero())
    state = SolverState.initial(fields, 1e-4)
    ok = True
    for _ in range(1000):
        out = step_full(state, grid, params, 1e-4)
        if not (np.array_equal(out.u, u0) and np.array_equal(out.v, v0)):
            ok = False
            break
        state = state.advanced(1e-4, out)
    _report(6, "constant fields bitwise invariant for 1000 steps", ok,
            "Neumann, zero reaction, full scheme")


def test_criterion_7_blowup_reproduction(blowup_run):
    result, cfg = blowup_run
    rep = result.report
    info = rep.blowup
    ok = (
        rep.status is Status.BLOWUP_DETECTED
        and 0.6 <= rep.state.time <= 1.0
        and info is not None
        and info.max_field > 1e6
        and info.rejected_tau < 1e-10
        and info.dudt_estimate > 1e12
    )
    detail = (f"t={rep.state.time:.4f} in [0.6, 1.0], max={info.max_field:.3e} > 1e6, "
              f"tau={info.rejected_tau:.2e} < 1e-10, du/dt={info.dudt_estimate:.2e} > 1e12"
              if info else "no blow-up info")
    _report(7, "finite-time blow-up reproduction", ok, detail)


def test_criterion_8_homogenization(homogeneity_runs):
    details = []
    ok = True
    for result, cfg in homogeneity_runs:
        good = (result.final_spread_u < 1e-3 * abs(result.final_mean_u)
                and result.final_spread_v < 1e-3 * abs(result.final_mean_v)
                and result.report.state.time <= 200.0)
        ok = ok and good
        details.append(f"seed {cfg.rng_seed}: t={result.report.state.time:.2f} "
                       f"spread_u/mean={result.final_spread_u / result.final_mean_u:.1e}")
    _report(8, "homogenization for 3 seeds by T=200", ok, "; ".join(details))


def test_criterion_9_timing_scaling():
    result = run_timing_study(n_list=(32, 64, 128, 256), tau=1e-6, steps=1000)
    ok = result.slope is not None and 1.5 <= result.slope <= 2.3
    times = ", ".join(f"N={n}: {s:.2f}s" for n, s in zip(result.sizes, result.seconds))
    _report(9, "wall-clock scaling slope", ok,
            f"slope={result.slope:.3f} in [1.5, 2.3]; {times}")


def test_criterion_10_cfl_audit(dirichlet_study, neumann_study, blowup_run, homogeneity_runs):
    violations = 0
    audited = 0
    for study, _, cfg in (dirichlet_study, neumann_study):
        grid, params = cfg.grid(), cfg.params()
        for rep in study.reports:
            violations += audit_cfl(rep, grid, params)
            audited += len(rep.records)
    result, cfg = blowup_run
    violations += audit_cfl(result.report, cfg.grid(), cfg.params())
    audited += len(result.report.records)
    for result, cfg in homogeneity_runs:
        violations += audit_cfl(result.report, cfg.grid(), cfg.params())
        audited += len(result.report.records)
    ok = violations == 0 and audited > 0
    _report(10, "post-hoc step-size guard audit", ok,
            f"{audited} accepted steps audited, {violations} violations")
