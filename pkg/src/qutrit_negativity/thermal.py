"""Gibbs states, partial transpose and negativity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError
from .linalg import as_matrix, eigh_batch, eigvalsh_batch, hermitian_gate
from .spin import ModelParams, build_xy_field_hamiltonian, xy_field_hamiltonians

# eigenvalues of rho^T1 in (-NEG_EIG_CUTOFF, 0) count as zero
NEG_EIG_CUTOFF = 1e-12
STATE_TOL = 1e-10


@dataclass(frozen=True)
class ThermalState:
    """Equilibrium state ``exp(-H/T) / Z`` (``k_B = 1``).

    ``z`` is unshifted and may overflow to ``inf`` at very low temperature;
    ``log_z`` is always finite.
    """

    params: ModelParams | None
    t_temp: float
    beta: float
    rho: np.ndarray
    z: float
    log_z: float
    energies: np.ndarray


@dataclass(frozen=True)
class NegativityResult:
    negativity: float
    negative_eigenvalues: tuple[float, ...]
    trace_norm_value: float
    negativity_via_trace_norm: float

    @property
    def entangled(self) -> bool:
        return self.negativity > 0


def _beta(t_temp: float) -> float:
    if not (t_temp > 0 and math.isfinite(t_temp)):
        raise ValueError(f"temperature must be positive and finite, got {t_temp}")
    return 1.0 / t_temp


def boltzmann_weights(energies: np.ndarray, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Normalised weights and ``log Z`` along the last axis, shifted by the ground energy."""
    e = np.asarray(energies, dtype=np.float64)
    e0 = e.min(axis=-1, keepdims=True)
    w = np.exp(-beta * (e - e0))
    s = w.sum(axis=-1, keepdims=True)
    log_z = (-beta * e0 + np.log(s))[..., 0]
    return w / s, log_z


def gibbs_state(h, t_temp: float, params: ModelParams | None = None) -> ThermalState:
    beta = _beta(t_temp)
    m = as_matrix(h)
    values, vectors = eigh_batch(m[None])
    w, log_z = boltzmann_weights(values[0], beta)
    v = vectors[0]
    rho = (v * w) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    lz = float(log_z)
    with np.errstate(over="ignore"):
        z = float(np.exp(lz))
    return ThermalState(
        params=params, t_temp=t_temp, beta=beta, rho=rho, z=z, log_z=lz, energies=values[0]
    )


def partial_transpose_first(rho, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the first tensor factor: ``out[(i,j),(k,l)] = rho[(k,j),(i,l)]``.

    Accepts a single matrix or a stack ``(..., n, n)``.
    """
    rho = np.asarray(rho)
    n = dim_a * dim_b
    if rho.shape[-2:] != (n, n):
        raise ValueError(f"matrix shape {rho.shape[-2:]} does not match {dim_a}x{dim_b} composite")
    lead = rho.shape[:-2]
    r = rho.reshape(lead + (dim_a, dim_b, dim_a, dim_b))
    k = len(lead)
    axes = tuple(range(k)) + (k + 2, k + 1, k, k + 3)
    return r.transpose(axes).reshape(lead + (n, n))


def validate_state(rho: np.ndarray, tol: float = STATE_TOL) -> None:
    """Raise :class:`InvalidStateError` unless ``rho`` has unit trace and no eigenvalue below ``-tol``."""
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"trace is {tr!r}, expected 1")
    lowest = eigvalsh_batch(rho[None])[0, 0]
    if lowest < -tol:
        raise InvalidStateError(f"density matrix has eigenvalue {lowest:.3e}")


def negativity_from_pt_spectrum(pt_eigenvalues: np.ndarray):
    """``(N, N_trace_norm, spectrum with noise zeroed)`` along the last axis."""
    ev = np.asarray(pt_eigenvalues)
    neg = np.where(ev <= -NEG_EIG_CUTOFF, ev, 0.0)
    n = -neg.sum(axis=-1) + 0.0
    tn = np.abs(ev).sum(axis=-1)
    return n, 0.5 * (tn - 1.0), tn


def negativity(rho, dim_a: int = 3, dim_b: int = 3, validate: bool = True) -> NegativityResult:
    """Negativity of a bipartite state by the negative-eigenvalue sum and by the trace norm."""
    m = hermitian_gate(as_matrix(rho))
    if m.shape[0] != dim_a * dim_b:
        raise ValueError(f"state dimension {m.shape[0]} != {dim_a}*{dim_b}")
    if validate:
        validate_state(m)
    pt = partial_transpose_first(m, dim_a, dim_b)
    ev = eigvalsh_batch(pt[None])[0]
    n, n_tn, tn = negativity_from_pt_spectrum(ev)
    return NegativityResult(
        negativity=float(n),
        negative_eigenvalues=tuple(float(x) for x in ev if x <= -NEG_EIG_CUTOFF),
        trace_norm_value=float(tn),
        negativity_via_trace_norm=float(n_tn),
    )


def thermal_negativity(p: ModelParams, t_temp: float, validate: bool = True):
    """Gibbs state of the XY-field model and its negativity."""
    state = gibbs_state(build_xy_field_hamiltonian(p), t_temp, params=p)
    return state, negativity(state.rho, 3, 3, validate=validate)


def gibbs_stack(values: np.ndarray, vectors: np.ndarray, t_temp) -> np.ndarray:
    """Density matrices for a stack of eigendecompositions.

    ``t_temp`` is a scalar or one temperature per matrix.
    """
    t = np.asarray(t_temp, dtype=np.float64)
    if np.any(~(t > 0)) or np.any(~np.isfinite(t)):
        raise ValueError("temperatures must be positive and finite")
    beta = (1.0 / t).reshape(-1, 1) if t.ndim else 1.0 / t
    w, _ = boltzmann_weights(values, beta)
    vh = np.conj(np.swapaxes(vectors, 1, 2)) if np.iscomplexobj(vectors) else np.swapaxes(vectors, 1, 2)
    rho = np.matmul(vectors * w[:, None, :], vh)
    return 0.5 * (rho + np.conj(np.swapaxes(rho, 1, 2)))


def negativity_stack(rho: np.ndarray, dim_a: int = 3, dim_b: int = 3):
    """Both negativity routes for a stack of states; no state validation."""
    pt = partial_transpose_first(rho, dim_a, dim_b)
    ev = eigvalsh_batch(pt)
    n, n_tn, _ = negativity_from_pt_spectrum(ev)
    return n, n_tn


def thermal_negativity_batch(b_field, theta, t_temp, j_coupling: float = 1.0):
    """Negativity over broadcastable arrays of ``(B, theta, T)``.

    Returns flat ``(N, N_trace_norm)`` arrays.  Points sharing ``(B, theta)``
    are diagonalised once per occurrence; :mod:`qutrit_negativity.sweep`
    reuses the spectrum across temperatures instead.
    """
    b, th, t = np.broadcast_arrays(
        np.atleast_1d(np.asarray(b_field, float)),
        np.atleast_1d(np.asarray(theta, float)),
        np.atleast_1d(np.asarray(t_temp, float)),
    )
    values, vectors = eigh_batch(xy_field_hamiltonians(b.ravel(), th.ravel(), j_coupling))
    return negativity_stack(gibbs_stack(values, vectors, t.ravel()))
