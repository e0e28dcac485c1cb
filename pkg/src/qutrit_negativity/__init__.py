"""Negativity of Gibbs states of two XY-coupled spin-1 particles with site-dependent fields."""

from .analytic import (
    DerivedQuantities,
    analytic_spectrum,
    closed_form_pt,
    cross_check_pt,
    derived_quantities,
    partition_function,
)
from .errors import ConfigError, ConvergenceError, InvalidStateError, NotHermitianError
from .features import PeakReport, compare_field_directions, detect_peaks
from .linalg import EigenDecomposition, hermitian_eig, kron, trace_norm
from .spin import (
    BilinearBiquadraticParams,
    ModelParams,
    build_bilinear_biquadratic,
    build_xy_field_hamiltonian,
    spin1_operators,
    total_sz,
)
from .sweep import SweepConfig, SweepRecord, emit, parse_config, read_records, run_sweep
from .thermal import (
    NegativityResult,
    ThermalState,
    gibbs_state,
    negativity,
    partial_transpose_first,
    thermal_negativity,
)

__version__ = "0.1.0"
