"""Parameter sweeps over ``(B, theta, T)`` and their CSV/JSON output."""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .linalg import eigh_batch
from .spin import ModelParams, xy_field_hamiltonians
from .thermal import gibbs_stack, negativity_stack, thermal_negativity

log = logging.getLogger(__name__)

REFERENCE_TEMPERATURES = (0.05, 0.2, 0.6, 1.2)
CSV_HEADER = "b,theta,temperature,negativity"
FIELDS = ("b", "theta", "temperature", "negativity")
DEFAULT_CHUNK = 8192


@dataclass(frozen=True)
class SweepConfig:
    """Grid specification.

    The field grid is closed, ``b_steps`` points from ``b_min`` to ``b_max``.
    The angle grid is half-open, ``theta_min + k (theta_max - theta_min) / theta_steps``
    for ``k < theta_steps``, so a ``[0, 2 pi)`` sweep does not repeat its first column.
    """

    b_min: float = -6.0
    b_max: float = 6.0
    b_steps: int = 241
    theta_min: float = 0.0
    theta_max: float = 2 * math.pi
    theta_steps: int = 241
    temperatures: tuple[float, ...] = REFERENCE_TEMPERATURES
    j_coupling: float = 1.0
    output_path: str = "negativity.csv"
    output_format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "temperatures", tuple(float(t) for t in self.temperatures))
        for name in ("b_min", "b_max", "theta_min", "theta_max", "j_coupling"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.b_min > self.b_max:
            raise ConfigError(f"b range min {self.b_min} exceeds max {self.b_max}")
        if self.theta_min > self.theta_max:
            raise ConfigError(f"theta range min {self.theta_min} exceeds max {self.theta_max}")
        for name in ("b_steps", "theta_steps"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if not self.temperatures:
            raise ConfigError("at least one temperature is required")
        for t in self.temperatures:
            if not (t > 0 and math.isfinite(t)):
                raise ConfigError(f"temperature must be positive, got {t}")
        if self.j_coupling <= 0:
            raise ConfigError("j_coupling must be positive")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")

    def b_values(self) -> np.ndarray:
        if self.b_steps == 1:
            return np.array([self.b_min])
        return np.linspace(self.b_min, self.b_max, self.b_steps)

    def theta_values(self) -> np.ndarray:
        k = np.arange(self.theta_steps)
        return self.theta_min + (self.theta_max - self.theta_min) * k / self.theta_steps

    @property
    def n_points(self) -> int:
        return self.b_steps * self.theta_steps * len(self.temperatures)


FIG1 = SweepConfig(output_path="fig1.csv")
# theta in {pi/4, 3pi/4}: parallel and antiparallel fields, 0.01 field spacing
FIG2 = SweepConfig(
    b_min=-3.0,
    b_max=3.0,
    b_steps=601,
    theta_min=math.pi / 4,
    theta_max=5 * math.pi / 4,
    theta_steps=2,
    output_path="fig2.csv",
)
PRESETS = {"fig1": FIG1, "fig2": FIG2}


@dataclass(frozen=True, slots=True)
class SweepRecord:
    b_field: float
    theta: float
    t_temp: float
    negativity: float


class SweepPointError(RuntimeError):
    """A single grid point failed; carries its coordinates."""

    def __init__(self, b_field: float, theta: float, t_temp: float, cause: Exception):
        self.b_field = b_field
        self.theta = theta
        self.t_temp = t_temp
        self.cause = cause
        super().__init__(f"evaluation failed at B={b_field!r}, theta={theta!r}, T={t_temp!r}: {cause}")


# ---------------------------------------------------------------- parsing

_PI_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\*?pi(?:/((?:\d+\.?\d*|\.\d+)))?$")


def parse_real(token: str) -> float:
    """Parse a float, also accepting multiples of pi such as ``pi/4``, ``3pi/4``, ``-0.5*pi``."""
    s = token.strip().lower()
    try:
        value = float(s)
    except ValueError:
        neg = s.startswith("-")
        body = s[1:] if neg else s
        m = _PI_RE.match(body)
        if not m:
            raise ConfigError(f"malformed number: {token!r}") from None
        coef = float(m.group(1)) if m.group(1) else 1.0
        div = float(m.group(2)) if m.group(2) else 1.0
        if div == 0:
            raise ConfigError(f"malformed number: {token!r}") from None
        value = (-1.0 if neg else 1.0) * coef * math.pi / div
    if not math.isfinite(value):
        raise ConfigError(f"non-finite number: {token!r}")
    return value


def parse_range(token: str) -> tuple[float, float, int]:
    """``min:max:steps``."""
    parts = token.split(":")
    if len(parts) != 3:
        raise ConfigError(f"expected min:max:steps, got {token!r}")
    lo, hi = parse_real(parts[0]), parse_real(parts[1])
    try:
        steps = int(parts[2])
    except ValueError:
        raise ConfigError(f"malformed step count in {token!r}") from None
    return lo, hi, steps


def parse_temperatures(token: str) -> tuple[float, ...]:
    items = [t for t in token.split(",") if t.strip()]
    if not items:
        raise ConfigError(f"no temperatures in {token!r}")
    return tuple(parse_real(t) for t in items)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# flags whose values may start with '-' (negative range minimum)
_VALUE_FLAGS = ("--b-range", "--theta-range", "--temperatures", "--theta", "--temperature", "--b")


def join_negative_values(args: Sequence[str]) -> list[str]:
    """Rewrite ``--flag -3:3:5`` as ``--flag=-3:3:5`` so argparse accepts it."""
    out: list[str] = []
    args = list(args)
    i = 0
    while i < len(args):
        a = args[i]
        if a in _VALUE_FLAGS and i + 1 < len(args) and args[i + 1].startswith("-"):
            out.append(f"{a}={args[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def add_sweep_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="JSON file with SweepConfig keys")
    parser.add_argument("--b-range", metavar="MIN:MAX:STEPS")
    parser.add_argument("--theta-range", metavar="MIN:MAX:STEPS")
    parser.add_argument("--temperatures", metavar="T1,T2,...")
    parser.add_argument("--j", dest="j_coupling", metavar="J")
    parser.add_argument("--output", metavar="PATH")
    parser.add_argument("--format", choices=("csv", "json"))


def _load_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    allowed = set(SweepConfig.__dataclass_fields__)
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown config key {unknown[0]!r}")
    if "temperatures" in data:
        temps = data["temperatures"]
        data["temperatures"] = tuple(temps) if isinstance(temps, (list, tuple)) else (temps,)
    for key in ("b_steps", "theta_steps"):
        if key in data and not isinstance(data[key], int):
            raise ConfigError(f"{path}: {key} must be an integer, got {data[key]!r}")
    for key, v in data.items():
        if key in ("output_path", "output_format") and not isinstance(v, str):
            raise ConfigError(f"{path}: {key} must be a string")
        if key not in ("output_path", "output_format", "b_steps", "theta_steps", "temperatures"):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"{path}: {key} must be a number, got {v!r}")
    return data


def config_from_namespace(ns: argparse.Namespace, base: SweepConfig) -> SweepConfig:
    """Apply file values, then flags, on top of ``base``."""
    values: dict = {}
    if getattr(ns, "config", None):
        values.update(_load_file(ns.config))
    if ns.b_range is not None:
        values["b_min"], values["b_max"], values["b_steps"] = parse_range(ns.b_range)
    if ns.theta_range is not None:
        values["theta_min"], values["theta_max"], values["theta_steps"] = parse_range(ns.theta_range)
    if ns.temperatures is not None:
        values["temperatures"] = parse_temperatures(ns.temperatures)
    if ns.j_coupling is not None:
        values["j_coupling"] = parse_real(ns.j_coupling)
    if ns.output is not None:
        values["output_path"] = ns.output
    if ns.format is not None:
        values["output_format"] = ns.format
    try:
        return replace(base, **values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(args: Sequence[str] = (), file=None, base: SweepConfig | None = None) -> SweepConfig:
    """Build a :class:`SweepConfig` from flags, an optional JSON file and defaults.

    Flags override file values, which override ``base`` (the defaults).
    """
    parser = _Parser(prog="sweep", add_help=False)
    add_sweep_arguments(parser)
    ns = parser.parse_args(join_negative_values(args))
    if file is not None and ns.config is None:
        ns.config = file
    return config_from_namespace(ns, base or SweepConfig())


# ---------------------------------------------------------------- evaluation


def _eval_chunk(job):
    b, th, temps, j = job
    values, vectors = eigh_batch(xy_field_hamiltonians(b, th, j))
    out = np.empty((len(temps), b.size))
    for k, t in enumerate(temps):
        out[k], _ = negativity_stack(gibbs_stack(values, vectors, t))
    return out


def _locate_failure(b, th, temps, j, cause):
    for bi, ti in zip(b, th):
        for t in temps:
            try:
                thermal_negativity(ModelParams(float(bi), float(ti), j), t, validate=False)
            except Exception as exc:  # noqa: BLE001 - re-raised with coordinates
                raise SweepPointError(float(bi), float(ti), t, exc) from exc
    raise SweepPointError(float(b[0]), float(th[0]), temps[0], cause) from cause


def negativity_surface(cfg: SweepConfig, workers: int = 1, chunk_size: int = DEFAULT_CHUNK) -> np.ndarray:
    """Negativity on the config grid as an array ``(n_T, n_theta, n_B)``.

    Each ``(B, theta)`` Hamiltonian is diagonalised once and reused for every
    temperature.  Chunks are identical for serial and parallel runs and are
    merged in input order.
    """
    bv = cfg.b_values()
    tv = cfg.theta_values()
    th_grid, b_grid = np.meshgrid(tv, bv, indexing="ij")
    b_flat = b_grid.ravel()
    th_flat = th_grid.ravel()
    temps = cfg.temperatures
    jobs = [
        (b_flat[i : i + chunk_size], th_flat[i : i + chunk_size], temps, cfg.j_coupling)
        for i in range(0, b_flat.size, chunk_size)
    ]
    results = []
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_eval_chunk, job) for job in jobs]
            for job, fut in zip(jobs, futures):
                try:
                    results.append(fut.result())
                except Exception as exc:  # noqa: BLE001
                    _locate_failure(*job, exc)
    else:
        for job in jobs:
            try:
                results.append(_eval_chunk(job))
            except Exception as exc:  # noqa: BLE001
                _locate_failure(*job, exc)
    n = np.concatenate(results, axis=1)
    return n.reshape(len(temps), tv.size, bv.size)


def run_sweep(cfg: SweepConfig, workers: int = 1, chunk_size: int = DEFAULT_CHUNK) -> list[SweepRecord]:
    """All grid points, ordered by temperature, then theta, then B."""
    surf = negativity_surface(cfg, workers=workers, chunk_size=chunk_size)
    bv = cfg.b_values().tolist()
    tv = cfg.theta_values().tolist()
    records = []
    for k, t in enumerate(cfg.temperatures):
        for i, th in enumerate(tv):
            row = surf[k, i].tolist()
            records.extend(SweepRecord(b, th, t, n) for b, n in zip(bv, row))
    return records


# ---------------------------------------------------------------- output


def format_number(x: float) -> str:
    """Scientific notation, 12 mantissa decimals, bare exponent: ``9.571000000000e-1``."""
    x = float(x) + 0.0
    if x == 0.0:
        x = 0.0
    mant, exp = f"{x:.12e}".split("e")
    return f"{mant}e{int(exp)}"


def _row(r: SweepRecord) -> tuple[str, str, str, str]:
    return (format_number(r.b_field), format_number(r.theta), format_number(r.t_temp), format_number(r.negativity))


def emit(records: Sequence[SweepRecord], cfg: SweepConfig, path=None) -> Path:
    """Write records to ``path`` (default ``cfg.output_path``) in ``cfg.output_format``."""
    if not records:
        raise ValueError("no records to emit")
    out = Path(path if path is not None else cfg.output_path)
    if cfg.output_format == "csv":
        lines = [CSV_HEADER]
        lines.extend(",".join(_row(r)) for r in records)
        text = "\n".join(lines) + "\n"
    else:
        rows = [dict(zip(FIELDS, (float(v) for v in _row(r)))) for r in records]
        text = json.dumps(rows, indent=1) + "\n"
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror or exc}") from exc
    log.info("wrote %d records to %s", len(records), out)
    return out


def read_records(path, output_format: str | None = None) -> list[SweepRecord]:
    """Inverse of :func:`emit`."""
    p = Path(path)
    fmt = output_format or ("json" if p.suffix.lower() == ".json" else "csv")
    text = p.read_text(encoding="utf-8")
    if fmt == "json":
        return [SweepRecord(float(d["b"]), float(d["theta"]), float(d["temperature"]), float(d["negativity"])) for d in json.loads(text)]
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{p}: missing header {CSV_HEADER!r}")
    out = []
    for line in lines[1:]:
        b, th, t, n = (float(x) for x in line.split(","))
        out.append(SweepRecord(b, th, t, n))
    return out
