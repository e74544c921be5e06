"""Two-species reaction-diffusion solver with self- and cross-diffusion.

Nonlinear operator-splitting (ADI) schemes on a square grid, with a
dense trapezoidal oracle, guarded adaptive stepping, manufactured
solution verification, and a CLI for the bundled experiments.
"""

from .errors import (CflViolation, ConfigError, IndeterminateOrder,
                     NonConvergence, SingularSystem)
from .model import (Bc, FieldPair, GridSpec, ModelParams, ReactionKind,
                    ReactionSpec, SolverState, Status, kappa)
from .operators import (LineOperator, apply_line_operator, apply_P, apply_R,
                        invertibility_guard)
from .tridiag import (TridiagonalSystem, shifted_line_system, solve_shifted_x,
                      solve_shifted_y, thomas_solve)
from .splitting import (euler_predict, evaluate_reactions, scheme_step,
                        step_cross_only, step_full)
from .oracle import assemble_dense, dense_cn_step, factored_step, picard_cn_solve
from .stepping import (NegativeFieldWarning, RunReport, StepControllerConfig,
                       StepRecord, advance_to_time, audit_cfl, max_stable_tau)
from .verification import (abs_error_fields, estimate_order, exact_dirichlet,
                           exact_neumann, forcing_dirichlet, forcing_neumann,
                           max_abs_error, sample_exact)
from .scenarios import (ScenarioConfig, initial_fields, parse_config,
                        run_scenario, run_timing_study, write_snapshot)

__version__ = "0.1.0"

__all__ = [
    "Bc", "CflViolation", "ConfigError", "FieldPair", "GridSpec",
    "IndeterminateOrder", "LineOperator", "ModelParams", "NegativeFieldWarning",
    "NonConvergence", "ReactionKind", "ReactionSpec", "RunReport",
    "ScenarioConfig", "SingularSystem", "SolverState", "Status",
    "StepControllerConfig", "StepRecord", "TridiagonalSystem",
    "abs_error_fields", "advance_to_time", "apply_P", "apply_R",
    "apply_line_operator", "assemble_dense", "audit_cfl", "dense_cn_step",
    "estimate_order", "euler_predict", "evaluate_reactions", "exact_dirichlet",
    "exact_neumann", "factored_step", "forcing_dirichlet", "forcing_neumann",
    "initial_fields", "invertibility_guard", "kappa", "max_abs_error",
    "max_stable_tau", "parse_config", "picard_cn_solve", "run_scenario",
    "run_timing_study", "sample_exact", "scheme_step", "shifted_line_system",
    "solve_shifted_x", "solve_shifted_y", "step_cross_only", "step_full",
    "thomas_solve", "write_snapshot",
]
