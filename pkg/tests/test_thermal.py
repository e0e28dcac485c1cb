import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutrit_negativity.analytic import (
    analytic_density_matrix,
    analytic_spectrum,
    derived_quantities,
    partition_function,
)
from qutrit_negativity.errors import InvalidStateError
from qutrit_negativity.linalg import kron
from qutrit_negativity.spin import ModelParams, build_xy_field_hamiltonian
from qutrit_negativity.thermal import (
    gibbs_state,
    negativity,
    partial_transpose_first,
    thermal_negativity,
    thermal_negativity_batch,
)

R2 = math.sqrt(2)
fields = st.floats(min_value=-6, max_value=6, allow_nan=False)
angles = st.floats(min_value=0, max_value=2 * math.pi, allow_nan=False)
temps = st.floats(min_value=0.05, max_value=3.0)


def max_entangled():
    phi = np.zeros(9)
    phi[[0, 4, 8]] = 1 / math.sqrt(3)
    return np.outer(phi, phi)


def pt_by_loops(rho, da, db):
    out = np.zeros_like(rho)
    for i, j, k, l in np.ndindex(da, db, da, db):
        out[i * db + j, k * db + l] = rho[k * db + j, i * db + l]
    return out


def random_state(rng, n, rank=None):
    rank = rank or n
    x = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = x @ x.conj().T
    return rho / np.trace(rho)


def schmidt_negativity(psi, da, db):
    s = np.linalg.svd(psi.reshape(da, db), compute_uv=False)
    return (s.sum() ** 2 - 1) / 2


# ---------------------------------------------------------------- Gibbs state


def test_infinite_temperature_limit():
    st_ = gibbs_state(build_xy_field_hamiltonian(ModelParams(2.0, 0.3)), 1e6)
    assert np.abs(st_.rho - np.eye(9) / 9).max() <= 1e-5


def test_two_level_populations():
    delta, t = 0.7, 0.3
    st_ = gibbs_state(np.diag([0.0, delta]), t)
    x = math.exp(-delta / t)
    assert np.diag(st_.rho).real == pytest.approx([1 / (1 + x), x / (1 + x)], rel=1e-14)
    assert st_.z == pytest.approx(1 + x, rel=1e-14)


def test_low_temperature_ground_population():
    p = ModelParams(0.0, math.pi / 4)
    st_ = gibbs_state(build_xy_field_hamiltonian(p), 0.05)
    ground = analytic_spectrum(derived_quantities(0.0, math.pi / 4)).level("psi6-").vector
    assert (ground.conj() @ st_.rho @ ground).real >= 0.999


@given(fields, angles, st.sampled_from([0.05, 0.2, 0.6, 1.2]))
@settings(max_examples=40, deadline=None)
def test_thermal_state_invariants(b, theta, t):
    st_ = gibbs_state(build_xy_field_hamiltonian(ModelParams(b, theta)), t)
    assert np.abs(st_.rho - st_.rho.conj().T).max() <= 1e-15
    assert abs(np.trace(st_.rho).real - 1) <= 1e-12
    assert np.linalg.eigvalsh(st_.rho).min() >= -1e-12
    assert st_.z > 0
    assert st_.z == pytest.approx(partition_function(derived_quantities(b, theta), t), rel=1e-10)


def test_very_low_temperature_is_representable():
    st_ = gibbs_state(build_xy_field_hamiltonian(ModelParams(6.0, 0.4)), 1e-3)
    assert np.all(np.isfinite(st_.rho))
    assert abs(np.trace(st_.rho).real - 1) <= 1e-12
    assert math.isfinite(st_.log_z)


def test_gibbs_rejects_non_positive_temperature():
    h = build_xy_field_hamiltonian(ModelParams())
    for t in (0.0, -0.1, math.nan):
        with pytest.raises(ValueError):
            gibbs_state(h, t)


# ---------------------------------------------------------------- partial transpose


def test_partial_transpose_definition():
    rng = np.random.default_rng(4)
    for da, db in [(3, 3), (2, 3), (3, 2), (2, 2)]:
        rho = random_state(rng, da * db)
        assert np.array_equal(partial_transpose_first(rho, da, db), pt_by_loops(rho, da, db))


def test_partial_transpose_product_state():
    rng = np.random.default_rng(9)
    ra, rb = random_state(rng, 3), random_state(rng, 3)
    out = partial_transpose_first(kron(ra, rb), 3, 3)
    assert np.allclose(out, kron(ra.T, rb), atol=1e-15)
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(kron(ra, rb)), atol=1e-14)


def test_partial_transpose_maximally_entangled():
    ev = np.linalg.eigvalsh(partial_transpose_first(max_entangled(), 3, 3))
    assert np.allclose(ev, [-1 / 3] * 3 + [1 / 3] * 6, atol=1e-15)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_partial_transpose_involution_trace_hermiticity(seed):
    rho = random_state(np.random.default_rng(seed), 9)
    pt = partial_transpose_first(rho, 3, 3)
    assert np.array_equal(partial_transpose_first(pt, 3, 3), rho)
    assert np.abs(pt - pt.conj().T).max() <= 1e-15
    assert np.trace(pt) == pytest.approx(1.0)


def test_partial_transpose_dimension_mismatch():
    with pytest.raises(ValueError):
        partial_transpose_first(np.eye(9) / 9, 2, 3)


# ---------------------------------------------------------------- negativity


def test_negativity_maximally_mixed():
    res = negativity(np.eye(9) / 9)
    assert res.negativity == 0 and res.negative_eigenvalues == ()
    assert not res.entangled


def test_negativity_maximally_entangled():
    res = negativity(max_entangled())
    assert res.negativity == pytest.approx(1.0, abs=1e-12)
    assert len(res.negative_eigenvalues) == 3
    assert res.trace_norm_value == pytest.approx(3.0, abs=1e-12)


def test_ground_state_schmidt_value():
    ground = analytic_spectrum(derived_quantities(0.0, math.pi / 4)).level("psi6-").vector
    # Schmidt coefficients 1/2, sqrt2/2, 1/2
    assert schmidt_negativity(ground, 3, 3) == pytest.approx((1 + R2 / 2) ** 2 / 2 - 0.5, abs=1e-14)
    assert schmidt_negativity(ground, 3, 3) == pytest.approx(0.9571, abs=5e-5)
    assert negativity(np.outer(ground, ground.conj())).negativity == pytest.approx(0.9571, abs=5e-5)


def test_negativity_low_temperature_gibbs():
    _, res = thermal_negativity(ModelParams(0.0, math.pi / 4), 0.05)
    assert res.negativity == pytest.approx(0.9571, abs=0.005)


@given(st.integers(0, 2**32 - 1), st.integers(1, 9))
@settings(max_examples=40, deadline=None)
def test_negativity_result_invariants(seed, rank):
    res = negativity(random_state(np.random.default_rng(seed), 9, rank))
    assert res.negativity == pytest.approx(-sum(res.negative_eigenvalues), abs=1e-12)
    assert res.negativity_via_trace_norm == pytest.approx((res.trace_norm_value - 1) / 2, abs=1e-12)
    assert abs(res.negativity - res.negativity_via_trace_norm) <= 1e-10
    assert 0 <= res.negativity <= 1


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_negativity_matches_pure_state_formula(seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=9) + 1j * rng.normal(size=9)
    psi /= np.linalg.norm(psi)
    res = negativity(np.outer(psi, psi.conj()))
    assert res.negativity == pytest.approx(schmidt_negativity(psi, 3, 3), abs=1e-12)


def test_product_states_have_zero_negativity():
    rng = np.random.default_rng(1)
    for _ in range(10):
        res = negativity(kron(random_state(rng, 3), random_state(rng, 3)))
        assert res.negativity == 0.0


def test_negativity_rejects_non_states():
    with pytest.raises(InvalidStateError):
        negativity(2 * np.eye(9) / 9)
    bad = np.diag([0.5, 0.6, -0.1, 0, 0, 0, 0, 0, 0])
    with pytest.raises(InvalidStateError):
        negativity(bad)
    negativity(bad, validate=False)
    with pytest.raises(ValueError):
        negativity(np.eye(4) / 4, 3, 3)


def test_noise_eigenvalues_not_reported():
    rho = np.eye(9) / 9
    rho[0, 0] -= 5e-13
    rho[1, 1] += 5e-13
    res = negativity(rho)
    assert res.negativity == 0.0


# ---------------------------------------------------------------- pipeline


def test_pipeline_examples():
    _, res = thermal_negativity(ModelParams(0.0, 0.0), 1e6)
    assert res.negativity <= 1e-6
    _, res = thermal_negativity(ModelParams(0.0, math.pi / 4), 1.2)
    assert res.negativity < 0.05


def test_pipeline_deterministic():
    p = ModelParams(1.3, 2.0)
    a = thermal_negativity(p, 0.4)[1]
    b = thermal_negativity(p, 0.4)[1]
    assert a == b


@given(fields, angles, temps)
@settings(max_examples=40, deadline=None)
def test_symmetries(b, theta, t):
    n = thermal_negativity(ModelParams(b, theta), t)[1].negativity
    assert abs(thermal_negativity(ModelParams(-b, theta), t)[1].negativity - n) <= 1e-10
    assert abs(thermal_negativity(ModelParams(b, math.pi / 2 - theta), t)[1].negativity - n) <= 1e-10
    assert abs(thermal_negativity(ModelParams(b, theta + math.pi), t)[1].negativity - n) <= 1e-10


def test_high_temperature_vanishing():
    b = np.linspace(-6, 6, 61)
    for theta in (0.0, math.pi / 4, 3 * math.pi / 4, 2.0):
        n, _ = thermal_negativity_batch(b, theta, 50.0)
        assert n.max() <= 1e-3


def test_batch_matches_scalar():
    rng = np.random.default_rng(12)
    b = rng.uniform(-6, 6, 30)
    th = rng.uniform(0, 2 * math.pi, 30)
    t = rng.uniform(0.05, 2, 30)
    n, n_tn = thermal_negativity_batch(b, th, t)
    for k in range(30):
        res = thermal_negativity(ModelParams(b[k], th[k]), t[k])[1]
        assert abs(res.negativity - n[k]) <= 1e-12
    assert np.abs(n - n_tn).max() <= 1e-10


def test_oracle_agreement_with_analytic_states():
    # Gibbs states from the closed-form eigenpairs, negativity by LAPACK
    b = np.linspace(-6, 6, 20)
    th = 2 * math.pi * np.arange(20) / 20
    worst = 0.0
    for t in (0.05, 0.2, 0.6, 1.2):
        bb, tt = np.meshgrid(b, th)
        n, _ = thermal_negativity_batch(bb.ravel(), tt.ravel(), t)
        for k, (x, y) in enumerate(zip(bb.ravel(), tt.ravel())):
            rho = analytic_density_matrix(analytic_spectrum(derived_quantities(x, y)), t)
            ev = np.linalg.eigvalsh(pt_by_loops(rho, 3, 3))
            worst = max(worst, abs(-ev[ev < -1e-12].sum() - n[k]))
    assert worst <= 1e-8
