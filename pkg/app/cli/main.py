"""STE binary-network simulator CLI

Usage:
    ste-sim <command> [--config PATH] [--set key=value]... [--out DIR] [--key value]...

Commands:
    sweep               phase-transition grid over (n, N/n); CSV + heatmap SVG
    train               one seeded run; per-iteration CSV, JSON record, line SVG
    recurrence          noisy run counting visits to and escapes from w*
    concentration       delta_emp versus N on a fixed instance
    check-expectation   Monte-Carlo check of the expectation identity
    check-symmetry      sign statistics of the noisy gradient at w*

Any config key can be given as a flag (``--sigma 1.0``, ``--N-list 512,1024``);
``--seed`` is an alias of ``master_seed``. Flags override the config file.
The default output directory comes from STE_OUTPUT_DIR (default ./results).

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np
from pydantic import ValidationError

from app.cli.config_parser import ExperimentConfig, parse_config, render_config
from app.cli.emitters import emit_csv, emit_json, emit_metadata, emit_summary
from app.cli.svg import emit_svg
from app.config import settings
from app.diagnostics.montecarlo import expectation_identity_check, gradient_symmetry_check
from app.exceptions import (
    BudgetExceededError,
    ConfigParseError,
    EmissionError,
    EmptyDataError,
    InvalidArgumentError,
)
from app.harness.experiments import (
    run_concentration_campaign,
    run_recurrence_experiment,
    run_training,
)
from app.harness.sweep import run_sweep, transition_threshold
from app.model.data import derive_seed, draw_instance, make_rng, random_hypercube

ALIASES = {"seed": "master_seed"}

# Applied below the config file, only for the named command
COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "sweep": {},
    "train": {},
    "recurrence": {"T": 2000, "sigma": 1.0},
    "concentration": {"n": 8, "m": 4},
    "check-expectation": {"n": 8},
    "check-symmetry": {"n": 8, "m": 4, "N": 64, "sigma": 1.0},
}


class Invocation:
    """Parsed command line: command, config path, overrides and output dir."""

    def __init__(self, command: str, config_path: Path | None, overrides: dict[str, str], out: Path):
        self.command = command
        self.config_path = config_path
        self.overrides = overrides
        self.out = out


def _flag_key(flag: str) -> str:
    key = flag[2:].replace("-", "_")
    return ALIASES.get(key, key)


def parse_args(argv: list[str]) -> Invocation:
    """Split argv into an Invocation.

    Raises:
        ConfigParseError: Unknown command, dangling flag or malformed --set
    """
    if not argv:
        raise ConfigParseError("missing command")
    command, rest = argv[0], argv[1:]
    if command not in COMMAND_DEFAULTS:
        raise ConfigParseError(f"unknown command '{command}'")

    config_path = None
    out = Path(settings.output_dir)
    overrides: dict[str, str] = {}
    i = 0
    while i < len(rest):
        token = rest[i]
        if not token.startswith("--") or len(token) == 2:
            raise ConfigParseError(f"unexpected argument '{token}'")
        if "=" in token and not token.startswith("--set"):
            flag, value = token.split("=", 1)
            i += 1
        else:
            flag = token.split("=", 1)[0]
            if "=" in token:
                value = token.split("=", 1)[1]
                i += 1
            else:
                if i + 1 >= len(rest):
                    raise ConfigParseError(f"flag '{flag}' needs a value")
                value = rest[i + 1]
                i += 2

        if flag == "--config":
            config_path = Path(value)
        elif flag == "--out":
            out = Path(value)
        elif flag == "--set":
            if "=" not in value:
                raise ConfigParseError(f"--set expects key=value, got '{value}'")
            key, item = (part.strip() for part in value.split("=", 1))
            overrides[ALIASES.get(key, key)] = item
        else:
            overrides[_flag_key(flag)] = value
    return Invocation(command, config_path, overrides, out)


def resolve_config(invocation: Invocation) -> ExperimentConfig:
    text = ""
    if invocation.config_path is not None:
        text = invocation.config_path.read_text(encoding="utf-8")
    return parse_config(text, invocation.overrides, base=COMMAND_DEFAULTS[invocation.command])


def build_metadata(command: str, config: ExperimentConfig) -> dict[str, Any]:
    """Everything needed to rerun ``command``: the resolved config and its seed."""
    return {
        "command": command,
        "master_seed": config.master_seed,
        "config": config.model_dump(),
        "config_text": render_config(config),
        "defaults": config.defaulted_keys(),
        "command_defaults": COMMAND_DEFAULTS[command],
    }


def cmd_sweep(config: ExperimentConfig, out: Path, metadata: dict[str, Any]) -> None:
    report = run_sweep(config.sweep_config(), workers=settings.workers)
    for path in (emit_csv(report, out / "sweep.csv"), emit_svg(report, "heatmap", out / "sweep.svg")):
        emit_metadata(path, metadata)
        print(f"[CLI] Wrote {path}")
    for n in config.dims:
        ergodic = transition_threshold(report, n, 0.5, "ergodic")
        last = transition_threshold(report, n, 0.5, "last_iterate")
        print(f"[CLI] n={n}: N for 50% ergodic={ergodic}, last-iterate={last}")


def _emit_run(result, out: Path, stem: str, metadata: dict[str, Any]) -> None:
    paths = [
        emit_csv(result.record, out / f"{stem}.csv"),
        emit_json(result.record, out / f"{stem}.json", metadata),
        emit_svg(result.record, "lines", out / f"{stem}.svg"),
        emit_summary(result.summary.model_dump(), out / f"{stem}.summary.json"),
    ]
    for path in paths:
        emit_metadata(path, metadata)
        print(f"[CLI] Wrote {path}")


def cmd_train(config: ExperimentConfig, out: Path, metadata: dict[str, Any]) -> None:
    result = run_training(
        config.m, config.n, config.N, config.noise_spec(), config.T, config.master_seed,
        schedule=config.schedule(), init=config.init_spec(),
        method=config.method, v_kind=config.v_kind,
    )
    _emit_run(result, out, "train", metadata)


def cmd_recurrence(config: ExperimentConfig, out: Path, metadata: dict[str, Any]) -> None:
    result = run_recurrence_experiment(
        m=config.m, n=config.n, N=config.N, sigma=config.noise_spec().effective_sigma, T=config.T,
        seed=config.master_seed, schedule=config.schedule(), init=config.init_spec(),
    )
    _emit_run(result, out, "recurrence", metadata)


def cmd_concentration(config: ExperimentConfig, out: Path, metadata: dict[str, Any]) -> None:
    table = run_concentration_campaign(
        config.n, config.m, config.v_kind, config.N_list, config.repeats, config.master_seed,
        sigma=config.noise_spec().effective_sigma, probe=config.probe_spec(),
    )
    path = emit_csv(table, out / "concentration.csv")
    emit_metadata(path, {**metadata, "slope": table.slope})
    print(f"[CLI] Wrote {path}")
    print(f"[CLI] log-log slope of median delta_emp: {table.slope}")


def cmd_check_expectation(config: ExperimentConfig, out: Path, metadata: dict[str, Any]) -> None:
    checks = []
    for r in range(config.repeats):
        rng = make_rng(config.master_seed, config.n, r)
        w = random_hypercube(config.n, rng)
        w_star = random_hypercube(config.n, rng)
        check = expectation_identity_check(
            w, w_star, config.n, config.samples, derive_seed(config.master_seed, r)
        )
        checks.append(
            {
                "w": w.tolist(),
                "w_star": w_star.tolist(),
                "estimate": check.estimate.tolist(),
                "target": check.target.tolist(),
                "deviation": check.deviation,
            }
        )
    worst = max(c["deviation"] for c in checks)
    path = emit_summary({"samples": config.samples, "checks": checks, "max_deviation": worst},
                        out / "check-expectation.json")
    emit_metadata(path, metadata)
    print(f"[CLI] Max deviation over {config.repeats} pairs: {worst:.3g}")


def cmd_check_symmetry(config: ExperimentConfig, out: Path, metadata: dict[str, Any]) -> None:
    spec = draw_instance(config.m, config.n, config.master_seed, config.v_kind)
    check = gradient_symmetry_check(spec, config.noise_spec(), config.N, config.trials, config.master_seed)
    summary = {
        "trials": check.trials,
        "positive_frequency": check.positive_frequency.tolist(),
        "zero_frequency": check.zero_frequency.tolist(),
        "any_zero": check.any_zero,
        "max_abs_bias": float(np.abs(check.positive_frequency - 0.5).max()),
    }
    path = emit_summary(summary, out / "check-symmetry.json")
    emit_metadata(path, metadata)
    print(f"[CLI] Positive frequency per coordinate: {np.round(check.positive_frequency, 3).tolist()}")


COMMANDS: dict[str, Callable[[ExperimentConfig, Path, dict[str, Any]], None]] = {
    "sweep": cmd_sweep,
    "train": cmd_train,
    "recurrence": cmd_recurrence,
    "concentration": cmd_concentration,
    "check-expectation": cmd_check_expectation,
    "check-symmetry": cmd_check_symmetry,
}


def main(argv: list[str] | None = None) -> int:
    """CLI entry point."""
    argv = sys.argv[1:] if argv is None else argv
    if not argv or argv[0] in ("-h", "--help"):
        print(__doc__)
        return 0 if argv else 1

    try:
        invocation = parse_args(argv)
        config = resolve_config(invocation)
        metadata = build_metadata(invocation.command, config)
        print(f"[CLI] {invocation.command}: output in {invocation.out}")
        COMMANDS[invocation.command](config, invocation.out, metadata)
    except (ConfigParseError, InvalidArgumentError, BudgetExceededError, EmptyDataError, ValidationError) as e:
        print(f"[CLI] Error: {e}")
        return 1
    except (EmissionError, OSError) as e:
        print(f"[CLI] I/O error: {e}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
