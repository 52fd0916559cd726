"""Command line interface.

Subcommands::

    solve      acceptance and VCG payments for a named scenario (no model)
    train      train the adjustment networks, write model + loss curve
    evaluate   full payment table for a scenario under a trained model
    surface    owner-0 payment grid over (quality, cost type)
    check      run the sampled property suites
    reproduce  emit table1.csv, table2.csv, loss_curve.csv, surface.csv

Exit codes: 0 success, 1 property failure, 2 configuration or I/O error,
3 numerical abort.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import backend
from .checks import run_suites
from .economy import spec_hash
from .errors import ConfigError, EconomyError, NumericalError
from .harness import (
    evaluate_scenario,
    loss_curve_csv,
    payment_surface_csv,
    reference_cost_scenarios,
    reference_quality_scenarios,
    scenario_csv,
)
from .runconfig import RunConfig, load_config
from .training import TrainingConfig, load_model, save_model, train

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _with_seed(training: TrainingConfig, seed) -> TrainingConfig:
    if seed is None:
        return training
    return TrainingConfig(
        lambda1=training.lambda1, lambda2=training.lambda2, lambda3=training.lambda3,
        batch_size=training.batch_size, learning_rate=training.learning_rate,
        bias_bump=training.bias_bump, iterations=training.iterations,
        seed=seed, h_hidden=training.h_hidden, g_hidden=training.g_hidden,
    )


def _require_training(config: RunConfig) -> TrainingConfig:
    if config.training is None:
        raise ConfigError("this command needs a \"training\" section in the config")
    return config.training


def _load_nets(config: RunConfig, path):
    if path is None:
        raise ConfigError("this command needs --model")
    fingerprint, n, h_net, g_net = load_model(path)
    if n != config.n:
        raise ConfigError(f"model was trained for n={n}, config has n={config.n}")
    if fingerprint != spec_hash(config.spec):
        raise ConfigError("model economy fingerprint does not match the config")
    return h_net, g_net


def _write(out_dir, name: str, text: str, stdout: bool):
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}", file=sys.stderr)
    if stdout:
        sys.stdout.write(text)


def _scenario_vectors(config: RunConfig, name: str):
    if name not in config.scenarios:
        known = ", ".join(sorted(config.scenarios)) or "(none)"
        raise ConfigError(f"unknown scenario {name!r}; config defines: {known}")
    return config.scenarios[name]


def cmd_solve(args) -> int:
    config = load_config(args.config)
    q, gamma = _scenario_vectors(config, args.scenario)
    result = evaluate_scenario(config.spec, args.scenario, q, gamma,
                               training=config.training)
    _write(args.out, f"{args.scenario}.csv", scenario_csv([result]), stdout=args.out is None)
    return EXIT_OK


def cmd_train(args) -> int:
    config = load_config(args.config)
    training = _with_seed(_require_training(config), args.seed)
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    curve_path = os.path.join(out_dir, "loss_curve.csv")
    model_path = os.path.join(out_dir, "model.json")

    rows = []

    def progress(iteration, report):
        row = (f"{iteration},{report.loss1:.17g},{report.loss2:.17g},"
               f"{report.loss3:.17g},{report.total:.17g}")
        rows.append(report)
        print(row)

    print("iteration,loss1,loss2,loss3,total")
    try:
        result = train(config.spec, config.n, training, progress=progress)
    except NumericalError as exc:
        with open(curve_path, "w") as fh:
            fh.write(loss_curve_csv(rows))
        print(f"training aborted: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    with open(curve_path, "w") as fh:
        fh.write(loss_curve_csv(result.curve))
    save_model(model_path, config.spec, config.n, result.h_net, result.g_net)
    print(f"wrote {model_path} and {curve_path}", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    config = load_config(args.config)
    h_net, g_net = _load_nets(config, args.model)
    q, gamma = _scenario_vectors(config, args.scenario)
    result = evaluate_scenario(config.spec, args.scenario, q, gamma,
                               h_net=h_net, g_net=g_net, training=config.training)
    _write(args.out, f"{args.scenario}.csv", scenario_csv([result]), stdout=args.out is None)
    return EXIT_OK


def cmd_surface(args) -> int:
    config = load_config(args.config)
    h_net, g_net = _load_nets(config, args.model)
    text = payment_surface_csv(config.spec, config.n, h_net, g_net, grid=args.grid)
    _write(args.out, "surface.csv", text, stdout=args.out is None)
    return EXIT_OK


def cmd_check(args) -> int:
    config = load_config(args.config)
    h_net = g_net = None
    if args.model is not None:
        h_net, g_net = _load_nets(config, args.model)
    seed = args.seed if args.seed is not None else config.check.seed
    rng = np.random.default_rng(seed)
    results = run_suites(
        config.spec, config.n, rng, h_net=h_net, g_net=g_net,
        instances=config.check.instances, dic_instances=config.check.dic_instances,
        dic_deviations=config.check.dic_deviations, net_draws=config.check.net_draws,
        grid_points=config.check.grid_points,
    )
    failed = False
    for res in results:
        print(res.line())
        for violation in res.violations[:5]:
            print(f"       {violation}")
        failed = failed or (not res.passed and not res.skipped)
    return EXIT_PROPERTY if failed else EXIT_OK


def cmd_reproduce(args) -> int:
    config = load_config(args.config)
    training = _with_seed(_require_training(config), args.seed)
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    try:
        result = train(config.spec, config.n, training)
    except NumericalError as exc:
        print(f"training aborted: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    save_model(os.path.join(out_dir, "model.json"), config.spec, config.n,
               result.h_net, result.g_net)
    _write(out_dir, "loss_curve.csv", loss_curve_csv(result.curve), stdout=False)
    for filename, scenarios in (
        ("table1.csv", reference_quality_scenarios(config.n)),
        ("table2.csv", reference_cost_scenarios(config.n)),
    ):
        evaluated = [
            evaluate_scenario(config.spec, name, q, gamma, h_net=result.h_net,
                              g_net=result.g_net, training=training)
            for name, q, gamma in scenarios
        ]
        _write(out_dir, filename, scenario_csv(evaluated), stdout=False)
    _write(out_dir, "surface.csv",
           payment_surface_csv(config.spec, config.n, result.h_net, result.g_net),
           stdout=False)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedvcg",
        description="VCG payments with trained fair adjustments for data federations "
                    f"(kernel backend: {backend.BACKEND})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=False, scenario=False, seed=False, out_required=False):
        p.add_argument("--config", required=True, help="run configuration JSON")
        if model:
            p.add_argument("--model", help="model file from `fedvcg train`")
        if scenario:
            p.add_argument("--scenario", required=True, help="scenario name from the config")
        if seed:
            p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--out", required=out_required,
                       help="output directory" + ("" if out_required else " (default: stdout)"))

    common(sub.add_parser("solve", help="acceptance + VCG payments, no model"), scenario=True)
    common(sub.add_parser("train", help="train the adjustment networks"), seed=True)
    common(sub.add_parser("evaluate", help="payments under a trained model"),
           model=True, scenario=True)
    surface = sub.add_parser("surface", help="owner-0 payment grid")
    common(surface, model=True)
    surface.add_argument("--grid", type=int, default=51, help="grid points per axis")
    common(sub.add_parser("check", help="run the property suites"), model=True, seed=True)
    common(sub.add_parser("reproduce", help="emit the reference tables, curve and surface"),
           seed=True, out_required=True)
    return parser


_COMMANDS = {
    "solve": cmd_solve,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "surface": cmd_surface,
    "check": cmd_check,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
