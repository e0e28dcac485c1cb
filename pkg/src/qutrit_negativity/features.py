"""Peak detection on negativity curves and the qualitative figure checks."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .spin import ModelParams
from .thermal import thermal_negativity, thermal_negativity_batch

log = logging.getLogger(__name__)

PARALLEL = math.pi / 4
ANTIPARALLEL = 3 * math.pi / 4
DEFAULT_PROMINENCE = 0.01
TIE_TOL = 1e-12


@dataclass(frozen=True)
class PeakReport:
    curve_id: str
    peak_locations: tuple[float, ...]
    peak_heights: tuple[float, ...]
    prominences: tuple[float, ...] = ()

    @property
    def count(self) -> int:
        return len(self.peak_locations)


def detect_peaks(curve, min_prominence: float = DEFAULT_PROMINENCE, curve_id: str = "", tie_tol: float = TIE_TOL) -> PeakReport:
    """Interior local maxima of ``n(b)`` whose prominence exceeds ``min_prominence``.

    ``curve`` is a sequence of ``(b, n)`` pairs sorted by ``b``, or a
    ``(2, k)`` array.  A flat top (neighbours equal within ``tie_tol``) counts
    as one peak located at its midpoint.  Prominence is the height above the
    higher of the two flanking minima, where each flank extends until a
    sample at least as high as the peak or the end of the curve.
    """
    arr = np.asarray(curve, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 2 and arr.shape[0] != 2:
        b, y = arr[:, 0], arr[:, 1]
    elif arr.ndim == 2 and arr.shape[0] == 2:
        b, y = arr[0], arr[1]
    else:
        raise ValueError("curve must be (b, n) pairs")
    if b.size < 3:
        raise ValueError("need at least 3 samples")
    if not min_prominence > 0:
        raise ValueError("min_prominence must be positive")
    if np.any(np.diff(b) <= 0):
        raise ValueError("curve must be sorted by strictly increasing b")

    locs, heights, proms = [], [], []
    n = y.size
    i = 1
    while i < n - 1:
        # extend over a flat run starting at i
        j = i
        while j + 1 < n and abs(y[j + 1] - y[i]) <= tie_tol:
            j += 1
        h = y[i]
        if j < n - 1 and y[i - 1] < h - tie_tol and y[j + 1] < h - tie_tol:
            k = i - 1
            left_min = h
            while k >= 0 and y[k] < h - tie_tol:
                left_min = min(left_min, y[k])
                k -= 1
            k = j + 1
            right_min = h
            while k < n and y[k] < h - tie_tol:
                right_min = min(right_min, y[k])
                k += 1
            prom = h - max(left_min, right_min)
            if prom > min_prominence:
                mid = (i + j) / 2
                loc = b[int(mid)] if mid == int(mid) else 0.5 * (b[int(mid)] + b[int(mid) + 1])
                locs.append(float(loc))
                heights.append(float(h))
                proms.append(float(prom))
        i = j + 1
    return PeakReport(curve_id, tuple(locs), tuple(heights), tuple(proms))


def symmetric_grid(b_max: float, step: float) -> np.ndarray:
    """Field grid on ``[-b_max, b_max]`` that is exactly mirror-symmetric and contains 0."""
    k = int(round(b_max / step))
    half = np.arange(k + 1) * step
    return np.concatenate([-half[:0:-1], half])


def negativity_curve(theta: float, t_temp: float, b_max: float = 3.0, step: float = 0.01, j_coupling: float = 1.0):
    """``(b, N(b))`` at fixed angle and temperature on :func:`symmetric_grid`."""
    b = symmetric_grid(b_max, step)
    n, _ = thermal_negativity_batch(b, theta, t_temp, j_coupling)
    return b, n


def compare_field_directions(b: float, t_temp: float, j_coupling: float = 1.0) -> tuple[float, float]:
    """Negativity for the parallel (theta = pi/4) and antiparallel (theta = 3pi/4) field."""
    if not math.isfinite(b):
        raise ValueError("b must be finite")
    n_par = thermal_negativity(ModelParams(b, PARALLEL, j_coupling), t_temp, validate=False)[1].negativity
    n_anti = thermal_negativity(ModelParams(b, ANTIPARALLEL, j_coupling), t_temp, validate=False)[1].negativity
    return n_par, n_anti


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    measured: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _peaks(theta, t, prominence, b_max=3.0, step=0.01, tag=""):
    b, n = negativity_curve(theta, t, b_max, step)
    return b, n, detect_peaks(np.column_stack([b, n]), prominence, curve_id=tag)


def _fmt(xs) -> str:
    return "[" + ", ".join(f"{x:.3f}" for x in xs) + "]"


def check_parallel_features(prominence: float = DEFAULT_PROMINENCE, step: float = 0.01) -> list[CheckResult]:
    out = []
    b, n, rep = _peaks(PARALLEL, 0.05, prominence, step=step, tag="parallel T=0.05")
    mid_ok = rep.count == 3 and abs(rep.peak_locations[1]) <= step / 2
    out.append(CheckResult("parallel T=0.05 three peaks, middle at B=0", mid_ok, f"peaks at {_fmt(rep.peak_locations)}"))
    _, _, rep = _peaks(PARALLEL, 0.6, prominence, step=step, tag="parallel T=0.6")
    out.append(CheckResult("parallel T=0.6 single peak", rep.count == 1, f"peaks at {_fmt(rep.peak_locations)}"))
    n0 = thermal_negativity(ModelParams(0.0, PARALLEL), 1.2)[1].negativity
    out.append(CheckResult("parallel T=1.2 N(B=0) < 0.05", n0 < 0.05, f"N(0) = {n0:.3e}", {"n0": n0}))
    return out


def check_antiparallel_features(prominence: float = DEFAULT_PROMINENCE, step: float = 0.01) -> list[CheckResult]:
    out = []
    _, _, rep = _peaks(ANTIPARALLEL, 0.05, prominence, step=step, tag="antiparallel T=0.05")
    ok = rep.count == 1 and abs(rep.peak_locations[0]) <= step / 2
    out.append(CheckResult("antiparallel T=0.05 single peak at B=0", ok, f"peaks at {_fmt(rep.peak_locations)}"))

    b, n, rep = _peaks(ANTIPARALLEL, 0.6, prominence, step=step, tag="antiparallel T=0.6")
    c = b.size // 2
    local_min = n[c] < n[c - 1] and n[c] < n[c + 1]
    ok = (
        rep.count == 2
        and abs(rep.peak_locations[0] + rep.peak_locations[1]) <= step
        and abs(rep.peak_heights[0] - rep.peak_heights[1]) <= 1e-10
        and local_min
    )
    out.append(
        CheckResult(
            "antiparallel T=0.6 two symmetric peaks, minimum at B=0",
            ok,
            f"peaks at {_fmt(rep.peak_locations)}, N(0) = {n[c]:.4f}",
        )
    )

    # the high-temperature maximum sits near |B| = 6, outside the [-3, 3] window
    b, n, rep = _peaks(ANTIPARALLEL, 1.2, prominence, b_max=10.0, step=step, tag="antiparallel T=1.2")
    c = b.size // 2
    interior = [
        (loc, h) for loc, h in zip(rep.peak_locations, rep.peak_heights) if abs(loc) > step and h > 0
    ]
    decreasing = bool(interior) and n[-1] < max(h for _, h in interior) and n[0] < max(h for _, h in interior)
    ok = n[c] < 0.05 and bool(interior) and decreasing
    out.append(
        CheckResult(
            "antiparallel T=1.2 N(0) < 0.05 with interior maximum at |B| > 0",
            ok,
            f"N(0) = {n[c]:.3e}, peaks at {_fmt(rep.peak_locations)} heights {_fmt(rep.peak_heights)}",
        )
    )
    return out


def parallel_vs_antiparallel(step: float = 0.01) -> list[CheckResult]:
    out = []
    n_par, n_anti = compare_field_directions(2.0, 0.05)
    out.append(
        CheckResult(
            "B=2 T=0.05 antiparallel exceeds parallel",
            n_anti > n_par,
            f"N_par = {n_par:.4e}, N_anti = {n_anti:.4e}",
            {"n_par": n_par, "n_anti": n_anti},
        )
    )
    b, n_anti_curve = negativity_curve(ANTIPARALLEL, 0.6, 3.0, step)
    k = int(np.argmax(n_anti_curve))
    n_par_at = thermal_negativity(ModelParams(float(b[k]), PARALLEL), 0.6, validate=False)[1].negativity
    ratio = n_anti_curve[k] / n_par_at if n_par_at > 0 else math.inf
    log.info("T=0.6 antiparallel max %.6f at B=%.2f; parallel there %.6f; ratio %.3f", n_anti_curve[k], b[k], n_par_at, ratio)
    out.append(
        CheckResult(
            "T=0.6 antiparallel maximum at least twice parallel at same B",
            ratio >= 2.0,
            f"B = {b[k]:.2f}, N_anti = {n_anti_curve[k]:.4f}, N_par = {n_par_at:.4e}, ratio = {ratio:.2f}",
            {"b": float(b[k]), "ratio": float(ratio)},
        )
    )
    return out


def symmetry_checks(n_points: int = 200, seed: int = 0, tol: float = 1e-10) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    b = rng.uniform(-6, 6, n_points)
    th = rng.uniform(0, 2 * math.pi, n_points)
    t = rng.uniform(0.05, 1.5, n_points)
    base, _ = thermal_negativity_batch(b, th, t)
    results = []
    for name, (bb, tt) in {
        "N(B) = N(-B)": (-b, th),
        "N(theta) = N(pi/2 - theta)": (b, math.pi / 2 - th),
        "N(theta) = N(theta + pi)": (b, th + math.pi),
    }.items():
        other, _ = thermal_negativity_batch(bb, tt, t)
        dev = float(np.max(np.abs(base - other)))
        results.append(CheckResult(name, dev <= tol, f"max deviation {dev:.2e} over {n_points} points", {"dev": dev}))
    return results


def run_feature_checks(prominence: float = DEFAULT_PROMINENCE) -> list[CheckResult]:
    return (
        check_parallel_features(prominence)
        + check_antiparallel_features(prominence)
        + parallel_vs_antiparallel()
        + symmetry_checks()
    )
