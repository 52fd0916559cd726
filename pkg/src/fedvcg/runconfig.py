"""Run configuration: strict JSON schema shared by every CLI command.

Layout::

    {
      "economy":  {"n": 10, "alpha": 3.16, "prior_q": [0, 5], "prior_gamma": [0, 1]},
      "training": {"lambda1": 0.4, "lambda2": 0.3, "lambda3": 0.3, "T": 100,
                   "a": 0.001, "b": 1.0, "iterations": 200, "seed": 7,
                   "h_hidden": [10, 10, 10], "g_hidden": 50},
      "scenarios": [{"name": "...", "q": [...], "gamma": [...]}],
      "check":    {"instances": 1000, "dic_instances": 500, "dic_deviations": 10,
                   "net_draws": 20, "grid_points": 1000, "seed": 0}
    }

Only "economy" is required; commands refuse to run when a section they
need is missing.  Unknown keys are rejected everywhere so typos cannot
silently fall back to defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .economy import EconomicSpec, standard_economy
from .errors import ConfigError
from .training import TrainingConfig


@dataclass(frozen=True)
class CheckOptions:
    instances: int = 1000
    dic_instances: int = 500
    dic_deviations: int = 10
    net_draws: int = 20
    grid_points: int = 1000
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    n: int
    spec: EconomicSpec
    training: Optional[TrainingConfig] = None
    scenarios: Dict[str, tuple] = field(default_factory=dict)
    check: CheckOptions = field(default_factory=CheckOptions)


def _require_mapping(obj, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    return obj


def _take(obj: dict, where: str, required: tuple, optional: tuple = ()) -> dict:
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"{where} has unknown keys: {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ConfigError(f"{where} is missing keys: {missing}")
    return obj


def _number(obj, where: str) -> float:
    if not isinstance(obj, (int, float)) or isinstance(obj, bool):
        raise ConfigError(f"{where} must be a number")
    return float(obj)


def _integer(obj, where: str) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise ConfigError(f"{where} must be an integer")
    return obj


def _pair(obj, where: str) -> tuple:
    if not isinstance(obj, list) or len(obj) != 2:
        raise ConfigError(f"{where} must be a [lo, hi] pair")
    return (_number(obj[0], where), _number(obj[1], where))


def _vector(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ConfigError(f"{where} must be a non-empty list of numbers")
    return np.array([_number(v, where) for v in obj])


def _parse_economy(obj) -> tuple:
    obj = _take(_require_mapping(obj, "economy"), "economy",
                ("n", "alpha", "prior_q", "prior_gamma"))
    n = _integer(obj["n"], "economy.n")
    if n < 1:
        raise ConfigError("economy.n must be at least 1")
    try:
        spec = standard_economy(
            alpha=_number(obj["alpha"], "economy.alpha"),
            prior_quality=_pair(obj["prior_q"], "economy.prior_q"),
            prior_cost_type=_pair(obj["prior_gamma"], "economy.prior_gamma"),
        )
    except ValueError as exc:
        raise ConfigError(f"economy: {exc}") from exc
    return n, spec


def _parse_training(obj) -> TrainingConfig:
    obj = _take(_require_mapping(obj, "training"), "training",
                ("lambda1", "lambda2", "lambda3", "T", "a", "b", "iterations", "seed"),
                ("h_hidden", "g_hidden"))
    kwargs = dict(
        lambda1=_number(obj["lambda1"], "training.lambda1"),
        lambda2=_number(obj["lambda2"], "training.lambda2"),
        lambda3=_number(obj["lambda3"], "training.lambda3"),
        batch_size=_integer(obj["T"], "training.T"),
        learning_rate=_number(obj["a"], "training.a"),
        bias_bump=_number(obj["b"], "training.b"),
        iterations=_integer(obj["iterations"], "training.iterations"),
        seed=_integer(obj["seed"], "training.seed"),
    )
    if "h_hidden" in obj:
        dims = obj["h_hidden"]
        if not isinstance(dims, list) or not dims:
            raise ConfigError("training.h_hidden must be a non-empty list")
        kwargs["h_hidden"] = tuple(_integer(d, "training.h_hidden") for d in dims)
    if "g_hidden" in obj:
        kwargs["g_hidden"] = _integer(obj["g_hidden"], "training.g_hidden")
    try:
        return TrainingConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"training: {exc}") from exc


def _parse_scenarios(obj, n: int) -> Dict[str, tuple]:
    if not isinstance(obj, list):
        raise ConfigError("scenarios must be a list")
    scenarios = {}
    for k, entry in enumerate(obj):
        entry = _take(_require_mapping(entry, f"scenarios[{k}]"), f"scenarios[{k}]",
                      ("name", "q", "gamma"))
        name = entry["name"]
        if not isinstance(name, str) or not name:
            raise ConfigError(f"scenarios[{k}].name must be a non-empty string")
        if name in scenarios:
            raise ConfigError(f"duplicate scenario name {name!r}")
        q = _vector(entry["q"], f"scenarios[{k}].q")
        gamma = _vector(entry["gamma"], f"scenarios[{k}].gamma")
        if q.size != n or gamma.size != n:
            raise ConfigError(f"scenarios[{k}] vectors must have length n={n}")
        scenarios[name] = (q, gamma)
    return scenarios


def _parse_check(obj) -> CheckOptions:
    obj = _take(_require_mapping(obj, "check"), "check", (),
                ("instances", "dic_instances", "dic_deviations", "net_draws",
                 "grid_points", "seed"))
    return CheckOptions(**{k: _integer(v, f"check.{k}") for k, v in obj.items()})


def parse_config(text: str) -> RunConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    obj = _take(_require_mapping(obj, "config"), "config",
                ("economy",), ("training", "scenarios", "check"))
    n, spec = _parse_economy(obj["economy"])
    training = _parse_training(obj["training"]) if "training" in obj else None
    scenarios = _parse_scenarios(obj.get("scenarios", []), n)
    check = _parse_check(obj["check"]) if "check" in obj else CheckOptions()
    return RunConfig(n=n, spec=spec, training=training, scenarios=scenarios, check=check)


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
