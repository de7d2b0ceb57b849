"""Experiment runner: JSON configs in, JSON-lines epoch reports and CSV tables out.

Every output embeds the effective config in its header and depends only on the
configured seeds, so re-running a config reproduces the files byte for byte.
Decode failures are scenario data, not process errors: the exit code is 0 for
a completed run, 2 for a config problem, 3 for infeasible strict scenarios.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import jsonschema

from .adversary import AdversaryConfig
from .field_poly import PrimeField, DEFAULT_MODULUS
from .lcc import EncodingParams
from .polyshard_sim import Simulation, history_power_check, run_epoch
from .threshold_analysis import (
    SWEEP_CSV_HEADER,
    empirical_threshold,
    known_behavior_upper_bound,
    recovery_threshold,
    sweep_to_csv,
)

SCENARIOS = (
    "honest_epoch",
    "garbage_attack",
    "discrepancy_attack",
    "threshold_sweep",
    "bound_table",
)

_INT_OR_LIST = {
    "anyOf": [
        {"type": "integer"},
        {"type": "array", "items": {"type": "integer"}, "minItems": 1},
    ]
}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["scenario"],
    "properties": {
        "scenario": {"enum": list(SCENARIOS)},
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "N": _INT_OR_LIST,
                "K": _INT_OR_LIST,
                "d": _INT_OR_LIST,
                "beta": _INT_OR_LIST,
                "beta_prime": _INT_OR_LIST,
                "v": _INT_OR_LIST,
                "gamma": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "p": {"type": "integer", "minimum": 2},
                "N_range": {
                    "type": "array",
                    "items": {"type": "integer"},
                    "minItems": 2,
                    "maxItems": 2,
                },
            },
        },
        "seeds": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "epochs": {"type": "integer", "minimum": 1},
        "out_dir": {"type": "string"},
        "strict": {"type": "boolean"},
    },
}


class ConfigError(ValueError):
    """The configuration cannot be used to run a scenario."""


def shard_capture(beta: int, gamma, N: int, K: int) -> int:
    """Shards an adversary of beta nodes can capture when a gamma fraction of a
    shard's N/K members suffices: floor(beta*K/(gamma*N)), capped at K."""
    g = Fraction(str(gamma)) if isinstance(gamma, float) else Fraction(gamma)
    if not 0 < g <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    return min(K, int(Fraction(beta * K) / (g * N)))


def load_config(path: str | Path) -> dict:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        config = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    validate_config(config)
    return config


def validate_config(config: dict) -> None:
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config rejected: {exc.message}") from exc


def _scalar(params: dict, key: int, default=None):
    value = params.get(key, default)
    if isinstance(value, list):
        raise ConfigError(f"param {key!r} must be a single integer for this scenario")
    if value is None:
        raise ConfigError(f"param {key!r} is required for this scenario")
    return value


def _grid(params: dict, key: str, default) -> list[int]:
    value = params.get(key, default)
    return list(value) if isinstance(value, list) else [value]


def _simulation_scenario(config: dict, scenario: str, out_path: Path) -> None:
    params = config.get("params", {})
    field = PrimeField(_scalar(params, "p", DEFAULT_MODULUS))
    N = _scalar(params, "N")
    K = _scalar(params, "K")
    d = _scalar(params, "d")
    beta = _scalar(params, "beta", 0)
    enc = EncodingParams.default(K, N, d, field)
    epochs = config.get("epochs", 1)
    seeds = config.get("seeds", [0])

    adversary = None
    if scenario == "garbage_attack":
        if beta < 1:
            raise ConfigError("garbage_attack needs beta >= 1")
        adversary = AdversaryConfig(
            adversarial_nodes=frozenset(range(N - beta + 1, N + 1)),
            broadcast_strategy="garbage",
        )
    elif scenario == "discrepancy_attack":
        v = _scalar(params, "v", 2)
        gamma = params.get("gamma")
        beta_prime = (
            _scalar(params, "beta_prime", None)
            if "beta_prime" in params
            else (shard_capture(beta, gamma, N, K) if gamma is not None else 1)
        )
        if beta_prime < 1:
            raise ConfigError("discrepancy_attack captures no shard; raise beta or beta_prime")
        if beta < beta_prime:
            raise ConfigError("beta must be at least beta_prime")
        adversary = AdversaryConfig(
            adversarial_nodes=frozenset(range(N - beta + 1, N + 1)),
            adversarial_producers=tuple(range(1, beta_prime + 1)),
            v=v,
            assignment_strategy="balanced",
            broadcast_strategy="garbage",
        )

    with out_path.open("w") as out:
        out.write(json.dumps({"config": config}, sort_keys=True) + "\n")
        for seed in seeds:
            sim = Simulation(enc, history_power_check(d, field(3)))
            for _ in range(epochs):
                report = run_epoch(sim, adversary, rng=seed * 1_000_003 + sim.epoch)
                line = {"seed": seed, **report.to_json_dict()}
                out.write(json.dumps(line, sort_keys=True) + "\n")


def _threshold_sweep(config: dict, out_path: Path, strict: bool) -> bool:
    params = config.get("params", {})
    field = PrimeField(_scalar(params, "p", DEFAULT_MODULUS))
    lo, hi = params.get("N_range", [1, 1])
    rows = empirical_threshold(
        v=_scalar(params, "v", 2),
        beta_prime=_scalar(params, "beta_prime", 1),
        d=_scalar(params, "d"),
        K=_scalar(params, "K"),
        beta=_scalar(params, "beta", 0),
        N_range=range(lo, hi + 1),
        field=field,
    )
    with out_path.open("w") as out:
        out.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        sweep_to_csv(rows, out)
    return strict and any(row.unique_Z is None for row in rows)


def _bound_table(config: dict, out_path: Path) -> None:
    params = config.get("params", {})
    with out_path.open("w") as out:
        out.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        out.write("v,beta_prime,d,K,beta,recovery_threshold,known_behavior_upper_bound\n")
        for v in _grid(params, "v", 1):
            for beta_prime in _grid(params, "beta_prime", 1):
                for d in _grid(params, "d", 1):
                    for K in _grid(params, "K", 2):
                        for beta in _grid(params, "beta", 0):
                            out.write(
                                f"{v},{beta_prime},{d},{K},{beta},"
                                f"{recovery_threshold(v, beta_prime, d, K, beta)},"
                                f"{known_behavior_upper_bound(v, beta_prime, d, K, beta)}\n"
                            )


def run(config: dict | str | Path, out_dir: str | None = None) -> int:
    """Execute a scenario; returns the process exit code."""
    try:
        if not isinstance(config, dict):
            config = load_config(config)
        else:
            validate_config(config)
        scenario = config["scenario"]
        directory = Path(out_dir or config.get("out_dir", "."))
        directory.mkdir(parents=True, exist_ok=True)
        if scenario in ("honest_epoch", "garbage_attack", "discrepancy_attack"):
            out_path = directory / f"{scenario}.jsonl"
            _simulation_scenario(config, scenario, out_path)
        elif scenario == "threshold_sweep":
            out_path = directory / "threshold_sweep.csv"
            infeasible = _threshold_sweep(config, out_path, config.get("strict", False))
            if infeasible:
                print(f"wrote {out_path}", file=sys.stderr)
                print("strict sweep hit infeasible partitions", file=sys.stderr)
                return 3
        else:
            out_path = directory / "bound_table.csv"
            _bound_table(config, out_path)
        print(f"wrote {out_path}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="shardlab",
        description="Run coded-sharding experiments from a JSON config.",
    )
    parser.add_argument("--config", required=True, help="path to a JSON config file")
    parser.add_argument("--seed", type=int, help="override the config's seed list")
    parser.add_argument("--out", help="override the output directory")
    parser.add_argument("--scenario", choices=SCENARIOS, help="override the scenario")
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        config["seeds"] = [args.seed]
    if args.scenario is not None:
        config["scenario"] = args.scenario
    return run(config, out_dir=args.out)


if __name__ == "__main__":
    sys.exit(main())
