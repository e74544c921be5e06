"""Variable-step driver enforcing the step-size guard.

The guard kappa*tau/h^2 < 1/(2*max{1, max field}) bounds every accepted
step; the controller proposes safety * (that bound), truncates the last
step to land on the final time, and declares blow-up when the admissible
step collapses below tau_min.  A fixed-step mode exists for convergence
studies; the guard is still asserted there.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CflViolation
from .model import FieldPair, GridSpec, ModelParams, SnapshotSink, SolverState, Status
from .operators import invertibility_guard
from .splitting import scheme_step

TIME_ATOL = 1e-14


class NegativeFieldWarning(UserWarning):
    """Fields developed negative entries; the schemes do not enforce positivity."""


@dataclass(frozen=True)
class StepControllerConfig:
    final_time: float
    tau_init: float
    tau_min: float = 1e-10
    tau_max: float = math.inf
    safety: float = 0.9
    fixed: bool = False

    def __post_init__(self):
        if not (0.0 < self.safety <= 1.0):
            raise ValueError("safety must lie in (0, 1]")
        if not (0.0 < self.tau_min <= self.tau_init <= self.tau_max):
            raise ValueError("require 0 < tau_min <= tau_init <= tau_max")
        if self.final_time < 0.0:
            raise ValueError("final_time must be >= 0")


@dataclass(frozen=True)
class StepRecord:
    index: int
    t_start: float
    tau: float
    prestep_max: float
    post_max_u: float
    post_max_v: float


@dataclass
class BlowupInfo:
    max_field: float
    dudt_estimate: float
    rejected_tau: float


@dataclass
class RunReport:
    state: SolverState
    records: list[StepRecord] = field(default_factory=list)
    negative_seen: bool = False
    blowup: BlowupInfo | None = None

    @property
    def status(self) -> Status:
        return self.state.status

    def accepted_tau_sum(self) -> float:
        return float(sum(r.tau for r in self.records))


def max_stable_tau(grid: GridSpec, params: ModelParams, fields: FieldPair,
                   cfg: StepControllerConfig) -> float:
    """Largest step the guard admits for these fields, scaled by safety, capped by tau_max."""
    peak = fields.max_value()
    if fields.min_value() < 0.0:
        warnings.warn("negative field entries; clamping to zero for the step bound",
                      NegativeFieldWarning, stacklevel=2)
    peak = max(1.0, peak)
    h2 = grid.spacing ** 2
    tau = cfg.safety * h2 / (2.0 * params.kappa() * peak)
    return min(tau, cfg.tau_max)


def audit_cfl(report: RunReport, grid: GridSpec, params: ModelParams) -> int:
    """Number of accepted steps that violated the guard (0 for a sound run)."""
    h2 = grid.spacing ** 2
    kap = params.kappa()
    violations = 0
    for rec in report.records:
        bound = 1.0 / (2.0 * max(1.0, rec.prestep_max))
        if not kap * rec.tau / h2 < bound:
            violations += 1
    return violations


def advance_to_time(state: SolverState, grid: GridSpec, params: ModelParams,
                    cfg: StepControllerConfig, sink: SnapshotSink | None = None,
                    stop_when=None) -> RunReport:
    """March from the given state until final_time or blow-up; returns the run report.

    stop_when, if given, is called with the state after each accepted step;
    returning True ends the run early with the state still marked Running.
    """
    state.fields.validate_for_grid(grid)
    report = RunReport(state=state)
    prev_max = state.fields.max_value()
    while True:
        remaining = cfg.final_time - state.time
        if remaining <= TIME_ATOL:
            state = SolverState(state.time, state.step, state.fields,
                                state.step_index, Status.REACHED_FINAL_TIME)
            break
        if cfg.fixed:
            tau = min(cfg.tau_init, remaining)
            if not invertibility_guard(grid, params, state.fields, tau):
                raise CflViolation(
                    f"fixed step tau={tau:g} violates the guard at t={state.time:g}"
                )
        else:
            tau = min(max_stable_tau(grid, params, state.fields, cfg), remaining)
            if tau < cfg.tau_min:
                peak = state.fields.max_value()
                dudt = (peak - prev_max) / state.step if state.step_index > 0 else math.inf
                report.blowup = BlowupInfo(max_field=peak, dudt_estimate=dudt, rejected_tau=tau)
                state = SolverState(state.time, state.step, state.fields,
                                    state.step_index, Status.BLOWUP_DETECTED)
                break
        prestep_max = state.fields.max_value()
        prev_max = prestep_max
        fields = scheme_step(state, grid, params, tau)
        if not report.negative_seen and fields.min_value() < 0.0:
            report.negative_seen = True
            warnings.warn("fields developed negative entries during the run",
                          NegativeFieldWarning, stacklevel=2)
        state = state.advanced(tau, fields)
        report.records.append(StepRecord(
            index=state.step_index, t_start=state.time - tau, tau=tau,
            prestep_max=prestep_max,
            post_max_u=float(fields.u.max()), post_max_v=float(fields.v.max()),
        ))
        if sink is not None:
            sink(state.step_index, state.time, fields)
        if stop_when is not None and stop_when(state):
            break
    report.state = state
    return report
