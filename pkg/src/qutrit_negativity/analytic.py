"""Closed-form spectrum, partition function and partially transposed Gibbs state.

This is the analytic path, kept independent of the numerical eigensolver so
the two can be checked against each other.

Shorthands used throughout (``B+`` and ``B-`` are the sum and difference of
the fields on the two sites)::

    B+ = B cos(theta) + B sin(theta)      B- = B cos(theta) - B sin(theta)
    xi = sqrt(2 + B-^2)                   zeta = sqrt(4 + B-^2)
    m+- = (B+ +- zeta) / 2
    R+- = +-B- + xi                       S+- = (B- +- zeta) / 2

Partially transposed coefficients, with ``b = 1/T``::

    M    = cosh(b zeta/2) - sinh(b zeta/2) B- / zeta
    q+-  = -(1/zeta) exp(-b (zeta +- B+) / 2) (exp(b zeta) - 1)
    u+-  = (+-B- (1 - cosh(b xi)) - xi sinh(b xi)) / xi^2
    W+-  = (1 + cosh(b xi) (1 + B-^2) +- xi B- sinh(b xi)) / xi^2
    Q+-  = exp(b (zeta +- B+)/2) (1 + B-/zeta) / 2
           + 2 exp(+-b (-+zeta + B+)/2) / (4 + B- (B- + zeta))

Placing the ``b(zeta +- B+)`` factor outside the exponent, i.e.
``-(1/zeta) e^(-1/2) b (zeta +- B+) (e^(b zeta) - 1)``, does not reproduce
the matrix element of the Gibbs state; the exponent form above does.  That
literal reading is still computed (``printed_q_plus``/``printed_q_minus``)
so the discrepancy can be reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spin import basis_index

LEVEL_LABELS = ("psi1", "psi2", "psi3", "psi4+", "psi4-", "psi5+", "psi5-", "psi6+", "psi6-")


@dataclass(frozen=True)
class DerivedQuantities:
    b_plus: float
    b_minus: float
    xi: float
    zeta: float
    m_plus: float
    m_minus: float
    r_plus: float
    r_minus: float
    s_plus: float
    s_minus: float


def derived_quantities(b: float, theta: float) -> DerivedQuantities:
    if not (math.isfinite(b) and math.isfinite(theta)):
        raise ValueError("b and theta must be finite")
    b_plus = b * math.cos(theta) + b * math.sin(theta)
    b_minus = b * math.cos(theta) - b * math.sin(theta)
    xi = math.sqrt(2.0 + b_minus**2)
    zeta = math.sqrt(4.0 + b_minus**2)
    return DerivedQuantities(
        b_plus=b_plus,
        b_minus=b_minus,
        xi=xi,
        zeta=zeta,
        m_plus=0.5 * (b_plus + zeta),
        m_minus=0.5 * (b_plus - zeta),
        r_plus=b_minus + xi,
        r_minus=-b_minus + xi,
        s_plus=0.5 * (b_minus + zeta),
        s_minus=0.5 * (b_minus - zeta),
    )


@dataclass(frozen=True)
class AnalyticLevel:
    label: str
    energy: float
    vector: np.ndarray


@dataclass(frozen=True)
class AnalyticSpectrum:
    levels: tuple[AnalyticLevel, ...]

    @property
    def energies(self) -> np.ndarray:
        return np.array([lv.energy for lv in self.levels])

    @property
    def vectors(self) -> np.ndarray:
        """Eigenvectors as columns, in level order."""
        return np.column_stack([lv.vector for lv in self.levels])

    def level(self, label: str) -> AnalyticLevel:
        for lv in self.levels:
            if lv.label == label:
                return lv
        raise KeyError(label)


def _ket(components: dict[tuple[int, int], float], norm_sq: float) -> np.ndarray:
    if not norm_sq > 0:
        raise ArithmeticError(f"non-positive normalisation {norm_sq}")
    v = np.zeros(9, dtype=np.complex128)
    for (m1, m2), amp in components.items():
        v[basis_index(m1, m2)] = amp
    return v / math.sqrt(norm_sq)


def analytic_spectrum(dq: DerivedQuantities) -> AnalyticSpectrum:
    """All nine energies and eigenvectors of the XY-field Hamiltonian at ``J = 1``."""
    bm = dq.b_minus
    levels = [
        AnalyticLevel("psi1", 0.0, _ket({(-1, 1): 1.0, (0, 0): bm, (1, -1): -1.0}, dq.xi**2)),
        AnalyticLevel("psi2", -dq.b_plus, _ket({(-1, -1): 1.0}, 1.0)),
        AnalyticLevel("psi3", dq.b_plus, _ket({(1, 1): 1.0}, 1.0)),
    ]
    for sign, s_val, m_other in (("+", dq.s_plus, dq.m_minus), ("-", dq.s_minus, dq.m_plus)):
        levels.append(
            AnalyticLevel(f"psi4{sign}", -m_other, _ket({(-1, 0): 1.0, (0, -1): s_val}, 1.0 + s_val**2))
        )
    for sign, s_val, m_same in (("+", dq.s_plus, dq.m_plus), ("-", dq.s_minus, dq.m_minus)):
        levels.append(
            AnalyticLevel(f"psi5{sign}", m_same, _ket({(0, 1): 1.0, (1, 0): s_val}, 1.0 + s_val**2))
        )
    for sgn, r_val in ((1.0, dq.r_plus), (-1.0, dq.r_minus)):
        tail = 1.0 + sgn * bm * r_val
        levels.append(
            AnalyticLevel(
                "psi6+" if sgn > 0 else "psi6-",
                sgn * dq.xi,
                _ket({(-1, 1): 1.0, (0, 0): sgn * r_val, (1, -1): tail}, 1.0 + r_val**2 + tail**2),
            )
        )
    return AnalyticSpectrum(levels=tuple(levels))


def _check_temperature(t_temp: float) -> float:
    if not t_temp > 0:
        raise ValueError(f"temperature must be positive, got {t_temp}")
    return 1.0 / t_temp


def partition_function(dq: DerivedQuantities, t_temp: float) -> float:
    """``1 + 2cosh(b xi) + 4cosh(b zeta/2)cosh(b B+/2) + 2cosh(b B+)``."""
    beta = _check_temperature(t_temp)
    return (
        1.0
        + 2.0 * math.cosh(beta * dq.xi)
        + 4.0 * math.cosh(0.5 * beta * dq.zeta) * math.cosh(0.5 * beta * dq.b_plus)
        + 2.0 * math.cosh(beta * dq.b_plus)
    )


def log_partition_function(dq: DerivedQuantities, t_temp: float) -> float:
    """``log Z`` from the same closed form, expanded into exponentials and shifted."""
    beta = _check_temperature(t_temp)
    half = 0.5 * beta
    exponents = np.array(
        [
            0.0,
            beta * dq.xi,
            -beta * dq.xi,
            half * (dq.zeta + dq.b_plus),
            half * (dq.zeta - dq.b_plus),
            -half * (dq.zeta - dq.b_plus),
            -half * (dq.zeta + dq.b_plus),
            beta * dq.b_plus,
            -beta * dq.b_plus,
        ]
    )
    top = exponents.max()
    return float(top + math.log(np.sum(np.exp(exponents - top))))


def analytic_density_matrix(spectrum: AnalyticSpectrum, t_temp: float) -> np.ndarray:
    """Gibbs state assembled from the closed-form eigenpairs."""
    beta = _check_temperature(t_temp)
    e = spectrum.energies
    w = np.exp(-beta * (e - e.min()))
    w /= w.sum()
    v = spectrum.vectors
    return (v * w) @ v.conj().T


# (row, col) -> coefficient name for every slot that may be nonzero
PT_LAYOUT: dict[tuple[int, int], str] = {
    (0, 0): "exp(-b B+)",
    (0, 4): "q+",
    (4, 0): "q+",
    (0, 8): "c19",
    (8, 0): "c19",
    (1, 1): "M exp(-b B+/2)",
    (1, 5): "u-",
    (5, 1): "u-",
    (2, 2): "W-",
    (3, 3): "Q-",
    (3, 7): "u+",
    (7, 3): "u+",
    (4, 4): "1 + 2 c19",
    (4, 8): "q-",
    (8, 4): "q-",
    (5, 5): "M exp(b B+/2)",
    (6, 6): "W+",
    (7, 7): "Q+",
    (8, 8): "exp(b B+)",
}


def pt_nonzero_mask() -> np.ndarray:
    mask = np.zeros((9, 9), dtype=bool)
    for r, c in PT_LAYOUT:
        mask[r, c] = True
    return mask


@dataclass(frozen=True)
class ClosedFormPT:
    """Coefficients of the partially transposed Gibbs state and the assembled matrix.

    Coefficients are unnormalised; ``matrix`` already carries the ``1/Z`` factor.
    """

    m_coef: float
    q_plus: float
    q_minus: float
    u_plus: float
    u_minus: float
    w_plus: float
    w_minus: float
    qq_plus: float
    qq_minus: float
    corner: float
    z: float
    matrix: np.ndarray
    printed_q_plus: float
    printed_q_minus: float


def closed_form_pt(dq: DerivedQuantities, t_temp: float) -> ClosedFormPT:
    """Assemble the partially transposed (first spin) Gibbs state in closed form.

    Uses ``math`` exponentials, so very low temperatures at strong field raise
    ``OverflowError`` rather than returning ``inf``.
    """
    beta = _check_temperature(t_temp)
    bp, bm, xi, zeta = dq.b_plus, dq.b_minus, dq.xi, dq.zeta
    ch_xi = math.cosh(beta * xi)
    sh_xi = math.sinh(beta * xi)
    xi2 = xi * xi

    m_coef = math.cosh(0.5 * beta * zeta) - math.sinh(0.5 * beta * zeta) * bm / zeta
    growth = math.expm1(beta * zeta)
    q_plus = -math.exp(-0.5 * beta * (zeta + bp)) * growth / zeta
    q_minus = -math.exp(-0.5 * beta * (zeta - bp)) * growth / zeta
    printed_q_plus = -math.exp(-0.5) * beta * (zeta + bp) * growth / zeta
    printed_q_minus = -math.exp(-0.5) * beta * (zeta - bp) * growth / zeta
    u_plus = (bm * (1.0 - ch_xi) - xi * sh_xi) / xi2
    u_minus = (-bm * (1.0 - ch_xi) - xi * sh_xi) / xi2
    w_plus = (1.0 + ch_xi * (1.0 + bm * bm) + xi * bm * sh_xi) / xi2
    w_minus = (1.0 + ch_xi * (1.0 + bm * bm) - xi * bm * sh_xi) / xi2
    denom = 4.0 + bm * (bm + zeta)
    qq_plus = 0.5 * math.exp(0.5 * beta * (zeta + bp)) * (1.0 + bm / zeta) + 2.0 * math.exp(
        0.5 * beta * (-zeta + bp)
    ) / denom
    qq_minus = 0.5 * math.exp(0.5 * beta * (zeta - bp)) * (1.0 + bm / zeta) + 2.0 * math.exp(
        -0.5 * beta * (zeta + bp)
    ) / denom
    corner = (ch_xi - 1.0) / xi2
    z = partition_function(dq, t_temp)

    values = {
        "exp(-b B+)": math.exp(-beta * bp),
        "q+": q_plus,
        "q-": q_minus,
        "c19": corner,
        "M exp(-b B+/2)": m_coef * math.exp(-0.5 * beta * bp),
        "M exp(b B+/2)": m_coef * math.exp(0.5 * beta * bp),
        "u+": u_plus,
        "u-": u_minus,
        "W+": w_plus,
        "W-": w_minus,
        "Q+": qq_plus,
        "Q-": qq_minus,
        "1 + 2 c19": 1.0 + 2.0 * corner,
        "exp(b B+)": math.exp(beta * bp),
    }
    mat = np.zeros((9, 9), dtype=np.complex128)
    for (r, c), name in PT_LAYOUT.items():
        mat[r, c] = values[name] / z
    return ClosedFormPT(
        m_coef=m_coef,
        q_plus=q_plus,
        q_minus=q_minus,
        u_plus=u_plus,
        u_minus=u_minus,
        w_plus=w_plus,
        w_minus=w_minus,
        qq_plus=qq_plus,
        qq_minus=qq_minus,
        corner=corner,
        z=z,
        matrix=mat,
        printed_q_plus=printed_q_plus,
        printed_q_minus=printed_q_minus,
    )


@dataclass(frozen=True)
class PTCrossCheck:
    """Entrywise comparison of the closed form against a numeric partial transpose."""

    max_zero_pattern_entry: float
    max_diagonal_deviation: float
    max_offdiagonal_deviation: float
    coefficient_deviation: dict[str, float] = field(default_factory=dict)
    printed_q_deviation: float = 0.0

    def offdiagonal_mismatches(self, threshold: float = 1e-8) -> dict[str, float]:
        return {k: v for k, v in self.coefficient_deviation.items() if v > threshold}


def cross_check_pt(cf: ClosedFormPT, numeric_pt: np.ndarray) -> PTCrossCheck:
    """Compare ``cf.matrix`` with ``numeric_pt`` slot by slot."""
    numeric_pt = np.asarray(numeric_pt)
    mask = pt_nonzero_mask()
    diff = np.abs(cf.matrix - numeric_pt)
    offdiag = mask & ~np.eye(9, dtype=bool)
    per_coef: dict[str, float] = {}
    for (r, c), name in PT_LAYOUT.items():
        per_coef[name] = max(per_coef.get(name, 0.0), float(diff[r, c]))
    printed = max(
        abs(cf.printed_q_plus / cf.z - numeric_pt[0, 4].real),
        abs(cf.printed_q_minus / cf.z - numeric_pt[4, 8].real),
    )
    return PTCrossCheck(
        max_zero_pattern_entry=float(np.abs(numeric_pt[~mask]).max()),
        max_diagonal_deviation=float(np.diagonal(diff).max()),
        max_offdiagonal_deviation=float(diff[offdiag].max()),
        coefficient_deviation=per_coef,
        printed_q_deviation=float(printed),
    )
