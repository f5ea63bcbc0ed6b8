"""``netavg`` command line: sample, learn, avgnet, experiment.

Exit codes: 0 success, 1 usage or configuration error, 2 data error (unreadable
or malformed input), 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .averaging import ReplicateError, assign_directions, edge_confidence, noise_floor_threshold
from .data import DataError
from .evaluation import (
    DEFAULT_ADHOC,
    format_tsv,
    method_label,
    parse_method,
    run_experiment,
    threshold_delta_table,
)
from .learning import ALGORITHMS, CI_TESTS, LearnerConfig, learn
from .model import NetworkError, forward_sample
from .netio import (
    FIXTURES,
    dag_to_dict,
    dumps,
    format_csv,
    levels_of,
    load_network,
    parse_csv,
    profile_from_dict,
    profile_to_dict,
    report_to_dict,
)
from .threshold import estimate_threshold, select_with_adhoc_threshold

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
SEED_ENV = "NETAVG_SEED"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for data errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolve_seed(value: int | None) -> int:
    if value is None:
        raw = os.environ.get(SEED_ENV)
        if raw is None:
            return 0
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError("seed must be a nonnegative integer")
    return value


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"{out}: {exc.strerror or exc}") from None


def _network(source: str):
    try:
        return load_network(source)
    except OSError as exc:
        raise InputError(f"{source}: {exc.strerror or exc}") from None


def _dataset(path: str, network: str | None):
    levels = levels_of(_network(network)) if network else None
    try:
        data = parse_csv(_read_text(path), levels)
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None
    if len(data.variables) < 2:
        raise UsageError(f"{path}: need at least 2 columns, got {len(data.variables)}")
    return data


def _learner_from_args(args) -> LearnerConfig:
    try:
        return LearnerConfig(
            algorithm=args.algorithm, alpha=args.alpha, ess=args.ess, test=args.test,
            restarts=args.restarts, perturb=args.perturb, max_parents=args.max_parents,
            max_cond=args.max_cond, seed=args.learner_seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _add_learner_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("structure learner")
    g.add_argument("--algorithm", choices=ALGORITHMS, default="hc")
    g.add_argument("--alpha", type=float, default=0.05, help="CI test level (iamb, mmhc)")
    g.add_argument("--ess", type=float, default=10.0, help="BDeu equivalent sample size")
    g.add_argument("--test", choices=CI_TESTS, default="mi-sh")
    g.add_argument("--restarts", type=int, default=0, help="hill-climbing random restarts")
    g.add_argument("--perturb", type=int, default=1, help="random moves per restart")
    g.add_argument("--max-parents", type=int, default=None)
    g.add_argument("--max-cond", type=int, default=None, help="cap on conditioning-set size")
    g.add_argument("--learner-seed", type=int, default=0, help="seed for restart perturbations")


# -- commands ----------------------------------------------------------------


def cmd_sample(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    net = _network(args.network)
    data = forward_sample(net, args.n, _resolve_seed(args.seed))
    _emit(format_csv(data), args.out)
    return EXIT_OK


def cmd_learn(args) -> int:
    config = _learner_from_args(args)
    data = _dataset(args.data, args.network)
    res = learn(data, config)
    doc = dag_to_dict(res.dag)
    doc.update(algorithm=config.algorithm, config=config.to_dict(), diagnostics=res.diagnostics)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_avgnet(args) -> int:
    try:
        kind, t = parse_method(args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    if (args.data is None) == (args.confidences_file is None):
        raise UsageError("give exactly one of DATA or --confidences-file")
    seed = _resolve_seed(args.seed)
    config = _learner_from_args(args)
    if args.confidences_file:
        if kind == "noisefloor":
            raise UsageError("the noise floor needs data; it cannot use --confidences-file")
        try:
            profile = profile_from_dict(json.loads(_read_text(args.confidences_file)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DataError(f"{args.confidences_file}: bad confidence file ({exc})") from None
        data = None
    else:
        data = _dataset(args.data, args.network)
        profile = edge_confidence(data, config, args.m, seed, args.jobs)
    if kind == "l1":
        report = estimate_threshold(profile)
    elif kind == "adhoc":
        report = select_with_adhoc_threshold(profile, t)
    else:
        report = noise_floor_threshold(data, config, args.m, seed, args.jobs, profile)
    averaged = assign_directions(profile, report.selected)
    names = profile.nodes.names
    doc: dict[str, Any] = {
        "method": method_label(args.method),
        "seed": seed,
        "learner": config.to_dict() if data is not None else None,
        "profile": profile_to_dict(profile),
        "report": report_to_dict(report, profile.nodes),
        "network": dag_to_dict(averaged.dag),
        "flipped": [[names[u], names[v]] for u, v in averaged.flipped],
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK


EXPERIMENT_KEYS = {"network", "grid", "m", "repeats", "seed", "methods", "learner"}


def validate_experiment(doc: Any, base: Path) -> tuple[dict, list[str]]:
    """Check an experiment config and return (settings, every problem found)."""
    errors: list[str] = []
    if not isinstance(doc, dict):
        return {}, ["config must be a JSON object"]
    unknown = sorted(set(doc) - EXPERIMENT_KEYS)
    if unknown:
        errors.append(f"unknown keys: {', '.join(unknown)}")
    out: dict[str, Any] = {}

    net = doc.get("network")
    if not isinstance(net, str) or not net:
        errors.append("network: required, a fixture name or a path to a network JSON file")
    else:
        path = base / net
        out["network"] = str(path) if path.exists() else net
        if not path.exists() and net not in FIXTURES:
            errors.append(f"network: {net!r} is neither a file nor a bundled fixture")

    grid = doc.get("grid")
    if not isinstance(grid, list) or not grid or not all(
        isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in grid
    ):
        errors.append("grid: required, a non-empty list of positive integers")
    else:
        out["grid"] = grid

    for key, default in (("m", 200), ("repeats", 10)):
        val = doc.get(key, default)
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            errors.append(f"{key}: must be a positive integer")
        else:
            out[key] = val

    seed = doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
        errors.append("seed: must be a nonnegative integer")
    out["seed"] = seed

    methods = doc.get("methods", ["l1"] + [f"adhoc:{t}" for t in DEFAULT_ADHOC])
    if not isinstance(methods, list) or not methods:
        errors.append("methods: must be a non-empty list")
    else:
        labels = []
        for mth in methods:
            try:
                labels.append(method_label(str(mth)))
            except ValueError as exc:
                errors.append(f"methods: {exc}")
        if len(set(labels)) != len(labels):
            errors.append("methods: duplicates")
        out["methods"] = [str(m) for m in methods]

    learner = doc.get("learner", {})
    if not isinstance(learner, dict):
        errors.append("learner: must be an object of learner settings")
    else:
        try:
            out["learner"] = LearnerConfig(**learner)
        except TypeError as exc:
            errors.append(f"learner: {exc}")
        except ValueError as exc:
            errors.extend(f"learner: {e}" for e in str(exc).split("; "))
    return out, errors


def cmd_experiment(args) -> int:
    text = _read_text(args.config)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.config}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    cfg, errors = validate_experiment(doc, Path(args.config).resolve().parent)
    if errors:
        raise UsageError("invalid experiment config:\n  " + "\n  ".join(errors))
    seed = _resolve_seed(args.seed if args.seed is not None else cfg["seed"])
    net = _network(cfg["network"])
    result = run_experiment(
        net, cfg["grid"], cfg["learner"], cfg["m"], cfg["repeats"], seed, cfg["methods"], args.jobs
    )
    rows = result.summary()
    if len(cfg["methods"]) > 1 and "l1" in {method_label(m) for m in cfg["methods"]}:
        rows += threshold_delta_table(result)
    _emit(format_tsv(rows), args.out)
    return EXIT_OK


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netavg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="draw a dataset from a network")
    p.add_argument("--network", required=True, help="network JSON file or fixture name")
    p.add_argument("--n", type=int, required=True, help="number of rows")
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 0)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("learn", help="learn one network from a CSV file")
    p.add_argument("data", help="CSV file")
    p.add_argument("--network", help="network whose level lists fix the CSV levels")
    p.add_argument("--out", help="JSON path (default stdout)")
    _add_learner_flags(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("avgnet", help="bootstrap averaged network with a significance threshold")
    p.add_argument("data", nargs="?", help="CSV file")
    p.add_argument("--network", help="network whose level lists fix the CSV levels")
    p.add_argument("--confidences-file", help="JSON confidences to threshold instead of DATA")
    p.add_argument("--method", default="l1", help="l1, adhoc:<t> or noisefloor (default l1)")
    p.add_argument("--m", type=int, default=200, help="bootstrap replicates")
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 0)")
    p.add_argument("--jobs", type=int, default=0, help="worker processes (0 = all cores)")
    p.add_argument("--out", help="JSON path (default stdout)")
    _add_learner_flags(p)
    p.set_defaults(func=cmd_avgnet)

    p = sub.add_parser("experiment", help="run a sample-size study from a JSON config")
    p.add_argument("config", help="experiment JSON file")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--jobs", type=int, default=0, help="worker processes (0 = all cores)")
    p.add_argument("--out", help="TSV path (default stdout)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, --version, bad flags
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"netavg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, DataError, NetworkError) as exc:
        print(f"netavg: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ReplicateError as exc:
        cause = exc.__cause__
        if isinstance(cause, (DataError, NetworkError)):
            print(f"netavg: data error: {exc}", file=sys.stderr)
            return EXIT_DATA
        print(f"netavg: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"netavg: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
