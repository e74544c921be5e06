"""Command-line front end: run / convergence / timing / blowup.

Each subcommand takes --config <path> plus any number of --key=value
overrides using the same keys as the config file.  Runs are single
threaded and bit-reproducible for a fixed config; --threads is accepted
for interface compatibility and values above 1 currently behave as 1
(line sweeps execute serially), so determinism holds for every value.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError
from .model import Status
from .scenarios import (SCENARIOS, config_from_pairs, parse_pairs,
                        run_scenario, run_timing_study)
from .stepping import audit_cfl


def _collect_overrides(unknown: list[str]) -> dict:
    pairs = {}
    for tok in unknown:
        if not tok.startswith("--") or "=" not in tok:
            raise ConfigError(f"unrecognized argument {tok!r}; overrides look like --key=value")
        key, value = tok[2:].split("=", 1)
        pairs.update(parse_pairs(f"{key}={value}"))
    return pairs


def _load_config(args, unknown: list[str], default_scenario: str | None = None):
    pairs = {}
    if args.config:
        pairs.update(parse_pairs(Path(args.config).read_text()))
    pairs.update(_collect_overrides(unknown))
    if "scenario" not in pairs and default_scenario:
        pairs["scenario"] = default_scenario
    if getattr(args, "output_dir", None):
        pairs["output_dir"] = args.output_dir
    if getattr(args, "threads", None):
        pairs["threads"] = args.threads
    return config_from_pairs(pairs)


def _add_common(sub):
    sub.add_argument("--config", help="path to a key=value config file")
    sub.add_argument("--output-dir", help="artifact directory (default crossdiff_out)")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads; 1 (default) guarantees bitwise determinism")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="crossdiff",
        description="Two-species reaction-diffusion solver with self- and cross-diffusion.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("run", f"run a scenario ({', '.join(SCENARIOS)})"),
        ("convergence", "manufactured-solution convergence study (errors.csv, order.csv)"),
        ("timing", "wall-clock scaling study (timing.csv)"),
        ("blowup", "adaptive run until the step floor trips (blowup.csv)"),
    ):
        sub = subs.add_parser(name, help=helptext)
        _add_common(sub)

    args, unknown = parser.parse_known_args(argv)
    try:
        if args.command == "timing":
            pairs = {"scenario": "example1_dirichlet"}
            if args.config:
                pairs.update(parse_pairs(Path(args.config).read_text()))
            pairs.update(_collect_overrides(unknown))
            cfg = config_from_pairs(pairs)
            out = Path(args.output_dir or cfg.output_dir)
            result = run_timing_study(cfg.timing_n_list, cfg.timing_tau,
                                      cfg.timing_steps, out)
            for n, sec in zip(result.sizes, result.seconds):
                print(f"N={n:5d}  {sec:.3f} s")
            if result.slope is None:
                print("slope: indeterminate (single N)")
            else:
                print(f"log-log slope: {result.slope:.4f}")
            return 0

        default = {"convergence": "example1_dirichlet", "blowup": "example3"}.get(args.command)
        cfg = _load_config(args, unknown, default_scenario=default)
        if args.command == "convergence" and not cfg.scenario.startswith("example1"):
            raise ConfigError("convergence requires scenario=example1_dirichlet or example1_neumann")
        if args.command == "blowup" and cfg.scenario != "example3":
            raise ConfigError("blowup requires scenario=example3")
        result = run_scenario(cfg)
        _summarize(cfg, result)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # solver errors exit nonzero with a message
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _summarize(cfg, result) -> None:
    print(f"scenario: {cfg.scenario}  (artifacts in {cfg.output_dir})")
    if hasattr(result, "orders"):
        for tau, err in zip(result.taus, result.max_errors):
            print(f"  tau={tau:.6e}  max_err={err:.6e}")
        for p in result.orders:
            print(f"  estimated order p = {p:.6f}")
    elif hasattr(result, "homogenized"):
        rep = result.report
        print(f"  stopped at t={rep.state.time:.4f} after {len(rep.records)} steps")
        print(f"  spread_u={result.final_spread_u:.3e} mean_u={result.final_mean_u:.4f}")
        print(f"  spread_v={result.final_spread_v:.3e} mean_v={result.final_mean_v:.4f}")
        print(f"  homogenized: {result.homogenized}")
    elif hasattr(result, "history"):
        rep = result.report
        grid, params = cfg.grid(), cfg.params()
        print(f"  status: {rep.status.value} at t={rep.state.time:.6f} "
              f"({len(rep.records)} steps)")
        if rep.blowup is not None:
            print(f"  max field {rep.blowup.max_field:.4e}, "
                  f"d/dt estimate {rep.blowup.dudt_estimate:.4e}, "
                  f"rejected tau {rep.blowup.rejected_tau:.4e}")
        print(f"  guard violations in audit: {audit_cfl(rep, grid, params)}")
    else:
        rep = result
        status = rep.status.value if rep.status is not Status.RUNNING else "stopped early"
        print(f"  status: {status} at t={rep.state.time:.6f} ({len(rep.records)} steps)")


if __name__ == "__main__":
    sys.exit(main())
