"""Command-line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
failure, 3 a ``check`` assertion failed.
"""

from __future__ import annotations

import json
import logging
import sys
import time
from typing import Sequence

from .errors import ConfigError, ConvergenceError, InvalidStateError, NotHermitianError
from .features import DEFAULT_PROMINENCE, run_feature_checks
from .spin import ModelParams
from .sweep import (
    PRESETS,
    SweepConfig,
    SweepPointError,
    _Parser,
    add_sweep_arguments,
    config_from_namespace,
    emit,
    join_negative_values,
    parse_real,
    run_sweep,
)
from .thermal import thermal_negativity

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_CHECK = 3

log = logging.getLogger("qutrit_negativity")


def build_parser() -> _Parser:
    parser = _Parser(prog="qutrit-negativity", description="Thermal negativity of two XY-coupled spin-1 particles.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("point", help="evaluate one (B, theta, T) point")
    p.add_argument("--b", default="0", help="field amplitude B (units of J)")
    p.add_argument("--theta", default="pi/4", help="polar angle; accepts forms like 3pi/4")
    p.add_argument("--temperature", default="0.05")
    p.add_argument("--j", default="1", dest="j_coupling")
    p.add_argument("--format", choices=("text", "json"), default="text")

    for name, help_text in (
        ("sweep", "grid sweep written to CSV/JSON"),
        ("fig1", "B-theta contour data at the four reference temperatures"),
        ("fig2", "N(B) at theta = pi/4 and 3pi/4 at the four reference temperatures"),
    ):
        s = sub.add_parser(name, help=help_text)
        add_sweep_arguments(s)
        s.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("check", help="verify the qualitative figure features")
    c.add_argument("--prominence", default=str(DEFAULT_PROMINENCE))
    return parser


def _cmd_point(ns) -> int:
    p = ModelParams(parse_real(ns.b), parse_real(ns.theta), parse_real(ns.j_coupling))
    t = parse_real(ns.temperature)
    if not t > 0:
        raise ConfigError(f"temperature must be positive, got {ns.temperature!r}")
    state, res = thermal_negativity(p, t)
    payload = {
        "b": p.b_field,
        "theta": p.theta,
        "temperature": t,
        "negativity": res.negativity,
        "negative_eigenvalues": list(res.negative_eigenvalues),
        "trace_norm": res.trace_norm_value,
        "negativity_via_trace_norm": res.negativity_via_trace_norm,
        "partition_function": state.z,
    }
    if ns.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for k, v in payload.items():
            print(f"{k} = {v}")
    return EXIT_OK


def _cmd_sweep(ns, base: SweepConfig) -> int:
    cfg = config_from_namespace(ns, base)
    if ns.workers < 1:
        raise ConfigError("--workers must be at least 1")
    start = time.perf_counter()
    records = run_sweep(cfg, workers=ns.workers)
    path = emit(records, cfg)
    log.info("%d points in %.2f s", len(records), time.perf_counter() - start)
    print(f"wrote {len(records)} records to {path}")
    return EXIT_OK


def _cmd_check(ns) -> int:
    prominence = parse_real(ns.prominence)
    if not prominence > 0:
        raise ConfigError("--prominence must be positive")
    results = run_feature_checks(prominence)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_CHECK if failed else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = build_parser().parse_args(join_negative_values(argv))
        logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        if ns.command is None:
            raise ConfigError("a subcommand is required (point, sweep, fig1, fig2, check)")
        if ns.command == "point":
            return _cmd_point(ns)
        if ns.command == "check":
            return _cmd_check(ns)
        base = PRESETS.get(ns.command, SweepConfig())
        return _cmd_sweep(ns, base)
    except (ConvergenceError, InvalidStateError, NotHermitianError, SweepPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        # ConfigError is a ValueError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
