"""Dense Hermitian linear algebra on small complex matrices.

Matrices are plain numpy arrays of shape ``(n, n)``; the ``*_batch``
routines accept stacks of shape ``(k, n, n)`` and treat every matrix
independently, so the result for one matrix never depends on what else is
in the stack.

The eigensolver is a cyclic Jacobi method with complex (phase-adjusted)
Givens rotations.  It is intended for the dimensions used in this package
(at most a few tens) and is vectorised across the stack axis rather than
within a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NotHermitianError

DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 100
HERMITIAN_ATOL = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors as columns.

    ``vectors[:, k]`` is paired with ``values[k]``.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.values) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    """Validate a square, finite matrix and return it as ``complex128``."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product, first factor major: block ``(i, j)`` is ``a[i, j] * b``."""
    a = np.asarray(a)
    b = np.asarray(b)
    m, n = a.shape
    p, q = b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(m * p, n * q)


def hermitian_asymmetry(a: np.ndarray) -> np.ndarray:
    """Largest ``|a[i, j] - conj(a[j, i])|`` for each matrix of a stack."""
    d = np.abs(a - np.conj(np.swapaxes(a, -1, -2)))
    return d.max(axis=(-1, -2))


def hermitian_gate(a: np.ndarray, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Symmetrise ``a`` as ``(a + a^H)/2`` if it is Hermitian within ``atol``.

    Works on single matrices and stacks.  Larger asymmetry raises
    :class:`NotHermitianError`; it is never silently repaired.
    """
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    asym = float(np.max(hermitian_asymmetry(a))) if a.size else 0.0
    if asym > atol:
        raise NotHermitianError(asym)
    if np.iscomplexobj(a):
        return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def _off_norm(a: np.ndarray, offmask: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(a * offmask) ** 2, axis=(1, 2)))


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int, want_vectors: bool):
    """Cyclic Jacobi on a stack ``(k, n, n)`` of Hermitian matrices.

    Returns the diagonalised stack and the accumulated rotations (or None).
    An element smaller than ``tol * ||A||_F / n`` is not rotated away, so a
    converged matrix passes through further sweeps unchanged.
    """
    a = a.copy()
    k, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=a.dtype), (k, n, n)).copy() if want_vectors else None
    fro = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    target = tol * fro
    thresh = target / n
    offmask = ~np.eye(n, dtype=bool)
    is_complex = np.iscomplexobj(a)

    for sweep in range(max_sweeps + 1):
        off = _off_norm(a, offmask)
        if np.all(off <= target):
            break
        if sweep == max_sweeps:
            ratio = np.where(fro > 0, off / np.where(fro > 0, fro, 1.0), off)
            raise ConvergenceError(float(ratio.max()), max_sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q].copy()
                r = np.abs(apq)
                active = r > thresh
                if not active.any():
                    continue
                app = a[:, p, p].real.copy()
                aqq = a[:, q, q].real.copy()
                safe_r = np.where(active, r, 1.0)
                tau = (aqq - app) / (2.0 * safe_r)
                big = np.abs(tau) > 1e150
                tau_c = np.where(big, 0.0, tau)
                t = np.where(
                    big,
                    0.5 / np.where(big, tau, 1.0),
                    np.where(tau_c >= 0, 1.0, -1.0) / (np.abs(tau_c) + np.sqrt(1.0 + tau_c * tau_c)),
                )
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phase = np.where(active, apq / safe_r, 1.0)
                phase_c = np.conj(phase) if is_complex else phase
                c_ = c[:, None]
                sp = (s * phase)[:, None]
                spc = (s * phase_c)[:, None]

                # A <- G^H A G with G = [[c, s e], [-s e*, c]] on the (p, q) plane
                col_p = a[:, :, p].copy()
                col_q = a[:, :, q]
                a[:, :, p] = c_ * col_p - spc * col_q
                a[:, :, q] = sp * col_p + c_ * col_q
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :]
                a[:, p, :] = c_ * row_p - sp * row_q
                a[:, q, :] = spc * row_p + c_ * row_q

                a[:, p, p] = np.where(active, app - t * r, a[:, p, p])
                a[:, q, q] = np.where(active, aqq + t * r, a[:, q, q])
                a[:, p, q] = np.where(active, 0.0, a[:, p, q])
                a[:, q, p] = np.where(active, 0.0, a[:, q, p])

                if want_vectors:
                    vp = v[:, :, p].copy()
                    vq = v[:, :, q]
                    v[:, :, p] = c_ * vp - spc * vq
                    v[:, :, q] = sp * vp + c_ * vq
    return a, v


def _tie_break_order(values: np.ndarray, vectors: np.ndarray, fro: np.ndarray) -> np.ndarray:
    # ascending by value; near-equal values ordered by the index of the
    # largest-magnitude vector component
    k, n = values.shape
    order = np.argsort(values, axis=1, kind="stable")
    vals = np.take_along_axis(values, order, axis=1)
    tie = 1e-10 * np.maximum(fro, 1e-300)
    new_cluster = np.diff(vals, axis=1) > tie[:, None]
    cluster = np.concatenate([np.zeros((k, 1), dtype=np.int64), np.cumsum(new_cluster, axis=1)], axis=1)
    lead = np.argmax(np.abs(vectors), axis=1)
    lead_sorted = np.take_along_axis(lead, order, axis=1)
    key = cluster * n + lead_sorted
    sub = np.argsort(key, axis=1, kind="stable")
    return np.take_along_axis(order, sub, axis=1)


def eigh_batch(a, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS):
    """Eigen-decompose a stack of Hermitian matrices.

    Parameters
    ----------
    a : array_like, shape (k, n, n)
        Hermitian matrices.  Real input stays real throughout.
    tol : float
        Convergence when the off-diagonal Frobenius norm drops below
        ``tol * ||A||_F``.
    max_sweeps : int
        Sweep cap; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    values : ndarray, shape (k, n)
        Ascending eigenvalues.
    vectors : ndarray, shape (k, n, n)
        ``vectors[i, :, j]`` is the eigenvector for ``values[i, j]``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = hermitian_gate(np.asarray(a))
    if a.ndim != 3:
        raise ValueError(f"expected a stack of shape (k, n, n), got {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(np.float64)
    fro = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    d, v = _jacobi(a, tol, max_sweeps, want_vectors=True)
    values = np.diagonal(d, axis1=1, axis2=2).real.copy()
    order = _tie_break_order(values, v, fro)
    values = np.take_along_axis(values, order, axis=1)
    vectors = np.take_along_axis(v, order[:, None, :], axis=2)
    return values, vectors


def eigvalsh_batch(a, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS) -> np.ndarray:
    """Ascending eigenvalues of a stack of Hermitian matrices (no vectors)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = hermitian_gate(np.asarray(a))
    if a.ndim != 3:
        raise ValueError(f"expected a stack of shape (k, n, n), got {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(np.float64)
    d, _ = _jacobi(a, tol, max_sweeps, want_vectors=False)
    return np.sort(np.diagonal(d, axis1=1, axis2=2).real, axis=1)


def _real_if_exact(m: np.ndarray) -> np.ndarray:
    return m.real.copy() if not np.any(m.imag) else m


def hermitian_eig(a, tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS) -> EigenDecomposition:
    """Full eigendecomposition of one Hermitian matrix.

    Matrices with an identically zero imaginary part are rotated in real
    arithmetic, matching :func:`eigh_batch` on the same real input.

    Raises :class:`NotHermitianError` for asymmetric input and
    :class:`ConvergenceError` if the sweep cap is reached.
    """
    m = _real_if_exact(as_matrix(a))
    values, vectors = eigh_batch(m[None], tol=tol, max_sweeps=max_sweeps)
    return EigenDecomposition(values=values[0], vectors=vectors[0].astype(np.complex128))


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    m = _real_if_exact(as_matrix(a))
    return float(np.sum(np.abs(eigvalsh_batch(m[None])[0])))
