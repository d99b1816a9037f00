"""Command-line interface: ``mmnoma {allocate,sweep,bench,validate}``.

Options may also come from a flat ``key=value`` file given with ``--config``;
keys are the long flag names with dashes replaced by underscores (``pmax``,
``gain_weak_db`` ...). Flags on the command line win over the file.

Exit status is 0 on success, 1 on a runtime failure (including an
unreachable minimum rate) and 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys

from . import bench, validate
from .channel import SystemConfig
from .optimizer import AllocationProblem, EvaluatorFailure, InfeasibleRate, bisect_allocate

DEFAULTS = {
    "n": 16,
    "gain_weak_db": 5.0,
    "gain_strong_db": 20.0,
    "pmax": 4.0,
    "r0": 2.0,
    "epsilon": 1e-3,
    "trials": 10,
    "method": "asym",
    "seed": 0,
    "out": None,
    "axis": "p_max",
    "values": None,
    "sizes": [8, 16, 32, 64, 128, 256, 512],
    "reps": 3,
}

_METHODS = ("mc", "asym", "both")


class ConfigError(ValueError):
    pass


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return value


def _method(text: str) -> str:
    if text not in _METHODS:
        raise ValueError(f"expected one of {', '.join(_METHODS)}")
    return text


CONVERTERS = {
    "ns": int, "n1": int, "n2": int, "n": int,
    "gain_weak_db": float, "gain_strong_db": float,
    "pmax": float, "r0": float, "epsilon": float,
    "trials": int, "method": _method, "seed": _seed, "out": str,
    "axis": str, "values": _float_list, "sizes": _int_list, "reps": int,
}


def read_config(path: str) -> dict:
    """Parse a ``key=value`` file; blank lines and ``#`` comments are skipped."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, text = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _convert(key, text)
    return values


def _convert(key: str, text: str):
    try:
        return CONVERTERS[key](text)
    except ValueError as exc:
        raise ConfigError(f"invalid value {text!r} for {key}: {exc}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file with option defaults")
    for flag in ("ns", "n1", "n2", "n", "trials", "reps"):
        common.add_argument(f"--{flag}", type=str, default=None)
    for flag in ("gain-weak-db", "gain-strong-db", "pmax", "r0", "epsilon", "seed", "out",
                 "axis", "values", "sizes"):
        common.add_argument(f"--{flag}", type=str, default=None)
    common.add_argument("--method", default=None, help="mc, asym or both")

    parser = _Parser(prog="mmnoma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("allocate", parents=[common], help="solve one allocation problem")
    sub.add_parser("sweep", parents=[common], help="solve along one parameter axis")
    sub.add_parser("bench", parents=[common], help="time the allocators across array sizes")
    sub.add_parser("validate", parents=[common], help="run the numerical self-checks")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if args.config:
        opts.update(read_config(args.config))
    for key in CONVERTERS:
        text = getattr(args, key, None)
        if text is not None:
            opts[key] = _convert(key, text)
    return opts


def _config(opts: dict) -> SystemConfig:
    n = opts["n"]
    return SystemConfig(
        opts.get("ns", n), opts.get("n1", n), opts.get("n2", n),
        bench.db_to_linear(opts["gain_weak_db"]), bench.db_to_linear(opts["gain_strong_db"]),
    )


def _problem(opts: dict, evaluator: str = "asym") -> AllocationProblem:
    try:
        return AllocationProblem(_config(opts), opts["pmax"], opts["r0"], opts["epsilon"],
                                 evaluator, opts["trials"], opts["seed"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _evaluators(opts: dict) -> list[str]:
    return ["mc", "asym"] if opts["method"] == "both" else [opts["method"]]


def _fmt(x: float) -> str:
    return format(x, ".10g")


def cmd_allocate(opts: dict, out) -> int:
    for evaluator in _evaluators(opts):
        problem = _problem(opts, evaluator)
        res = bisect_allocate(problem)
        print(f"method={problem.evaluator} p_1={_fmt(res.p_1)} p_2={_fmt(res.p_2)} "
              f"c_1={_fmt(res.c_1)} c_2={_fmt(res.c_2)} sum={_fmt(res.sum)} "
              f"iterations={res.iterations} sic_ok={str(res.sic_ok).lower()}", file=out)
    return 0


def _emit(rows, opts: dict, out) -> None:
    if opts["out"]:
        bench.write_table(rows, opts["out"])
    else:
        bench.write_table(rows, out)


def cmd_sweep(opts: dict, out) -> int:
    axis = opts["axis"]
    if axis not in bench.AXES:
        raise ConfigError(f"invalid value {axis!r} for axis: expected one of {', '.join(bench.AXES)}")
    values = opts["values"] or bench.DEFAULT_VALUES[axis]
    try:
        spec = bench.SweepSpec(_problem(opts), axis, values, _evaluators(opts))
    except ValueError as exc:
        raise ConfigError(f"invalid sweep: {exc}") from None
    _emit(bench.run_sweep(spec), opts, out)
    return 0


def cmd_bench(opts: dict, out) -> int:
    if opts["reps"] < 3:
        raise ConfigError("invalid value for reps: at least 3 repetitions are required")
    methods = _evaluators(opts) if opts["method"] != "asym" else ["mc", "asym"]
    template = _problem(opts)
    rows = bench.time_methods(opts["sizes"], opts["reps"], template, methods)
    _emit(rows, opts, out)
    return 0


def cmd_validate(opts: dict, out) -> int:
    results = validate.run_all(seed=opts["seed"])
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}", file=out)
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "allocate": cmd_allocate,
    "sweep": cmd_sweep,
    "bench": cmd_bench,
    "validate": cmd_validate,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        opts = resolve(args)
        return COMMANDS[args.command](opts, out)
    except ConfigError as exc:
        print(f"mmnoma: error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleRate as exc:
        print(f"mmnoma: infeasible: {exc}", file=sys.stderr)
        return 1
    except (EvaluatorFailure, bench.SweepError, OSError) as exc:
        print(f"mmnoma: {exc}", file=sys.stderr)
        return 1


def main_exit() -> None:
    sys.exit(main())
