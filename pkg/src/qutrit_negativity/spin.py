"""Spin-1 operators and two-site Hamiltonians.

Product basis ``|m1, m2>`` with ``m`` descending (+1, 0, -1), first spin
major::

    0:(1,1) 1:(1,0) 2:(1,-1) 3:(0,1) 4:(0,0) 5:(0,-1) 6:(-1,1) 7:(-1,0) 8:(-1,-1)

Energies are in units of the exchange coupling ``J``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import kron

SPIN_DIM = 3
M_VALUES = (1, 0, -1)
BASIS_LABELS = tuple((m1, m2) for m1 in M_VALUES for m2 in M_VALUES)


def basis_index(m1: int, m2: int) -> int:
    """Position of ``|m1, m2>`` in the product basis."""
    return BASIS_LABELS.index((m1, m2))


@dataclass(frozen=True)
class SpinOperators:
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


@dataclass(frozen=True)
class ModelParams:
    """XY coupling ``j_coupling``, field amplitude ``b_field`` and polar angle ``theta``.

    Spin 1 sees ``B cos(theta)``, spin 2 sees ``B sin(theta)``.
    """

    b_field: float = 0.0
    theta: float = 0.0
    j_coupling: float = 1.0

    def __post_init__(self):
        for name in ("b_field", "theta", "j_coupling"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.j_coupling <= 0:
            raise ValueError("j_coupling must be positive")


@dataclass(frozen=True)
class BilinearBiquadraticParams:
    """Couplings of ``eps + j (S1.S2) + k (S1.S2)^2``; ``eps`` multiplies the identity."""

    j: float = 1.0
    k: float = 0.0
    eps: float = 0.0

    def __post_init__(self):
        for name in ("j", "k", "eps"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@lru_cache(maxsize=None)
def _spin1_arrays():
    r = 1.0 / math.sqrt(2.0)
    sx = np.array([[0, r, 0], [r, 0, r], [0, r, 0]], dtype=np.complex128)
    sy = np.array([[0, -1j * r, 0], [1j * r, 0, -1j * r], [0, 1j * r, 0]], dtype=np.complex128)
    sz = np.diag([1.0, 0.0, -1.0]).astype(np.complex128)
    for m in (sx, sy, sz):
        m.setflags(write=False)
    return sx, sy, sz


def spin1_operators() -> SpinOperators:
    """The three spin-1 matrices in the ``m = +1, 0, -1`` basis."""
    sx, sy, sz = _spin1_arrays()
    return SpinOperators(sx=sx, sy=sy, sz=sz)


def _site_ops(ops: SpinOperators):
    eye = np.eye(SPIN_DIM, dtype=np.complex128)
    first = [kron(s, eye) for s in (ops.sx, ops.sy, ops.sz)]
    second = [kron(eye, s) for s in (ops.sx, ops.sy, ops.sz)]
    return first, second


def total_sz(ops: SpinOperators | None = None) -> np.ndarray:
    """``S1z + S2z`` on the two-site space."""
    ops = ops or spin1_operators()
    eye = np.eye(SPIN_DIM, dtype=np.complex128)
    return kron(ops.sz, eye) + kron(eye, ops.sz)


def xy_coupling(ops: SpinOperators | None = None) -> np.ndarray:
    """``S1x S2x + S1y S2y``."""
    ops = ops or spin1_operators()
    return kron(ops.sx, ops.sx) + kron(ops.sy, ops.sy)


def heisenberg_coupling(ops: SpinOperators | None = None) -> np.ndarray:
    """``S1 . S2``."""
    ops = ops or spin1_operators()
    return xy_coupling(ops) + kron(ops.sz, ops.sz)


def build_xy_field_hamiltonian(p: ModelParams) -> np.ndarray:
    """``J (S1x S2x + S1y S2y) + B cos(theta) S1z + B sin(theta) S2z`` as a 9x9 matrix."""
    ops = spin1_operators()
    (_, _, s1z), (_, _, s2z) = _site_ops(ops)
    b1 = p.b_field * math.cos(p.theta)
    b2 = p.b_field * math.sin(p.theta)
    return p.j_coupling * xy_coupling(ops) + b1 * s1z + b2 * s2z


def build_bilinear_biquadratic(p: BilinearBiquadraticParams) -> np.ndarray:
    """``eps I + j (S1.S2) + k (S1.S2)^2``."""
    x = heisenberg_coupling()
    return p.eps * np.eye(SPIN_DIM**2, dtype=np.complex128) + p.j * x + p.k * (x @ x)


def xy_field_hamiltonians(b_field, theta, j_coupling: float = 1.0) -> np.ndarray:
    """Real stack of XY-field Hamiltonians for flat arrays of ``(B, theta)``.

    Entry-for-entry equal to :func:`build_xy_field_hamiltonian` (whose
    imaginary parts vanish identically).
    """
    b = np.atleast_1d(np.asarray(b_field, dtype=np.float64))
    th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    b, th = np.broadcast_arrays(b, th)
    b = b.ravel()
    th = th.ravel()
    coupling = j_coupling * xy_coupling().real
    m1 = np.array([m for m, _ in BASIS_LABELS], dtype=np.float64)
    m2 = np.array([m for _, m in BASIS_LABELS], dtype=np.float64)
    h = np.broadcast_to(coupling, (b.size, 9, 9)).copy()
    diag = (b * np.cos(th))[:, None] * m1 + (b * np.sin(th))[:, None] * m2
    idx = np.arange(9)
    h[:, idx, idx] += diag
    return h


def swap_operator(dim: int = SPIN_DIM) -> np.ndarray:
    """Permutation exchanging the two tensor factors of a ``dim x dim`` product space."""
    n = dim * dim
    s = np.zeros((n, n), dtype=np.complex128)
    for i in range(dim):
        for j in range(dim):
            s[j * dim + i, i * dim + j] = 1.0
    return s
