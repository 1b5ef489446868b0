import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eplz import (
    EplzError,
    ModelParams,
    NearEPError,
    NoEPError,
    SpinSpace,
    build_generators,
    ep_data,
    ep_guard,
    ep_times,
    eigensystem_at,
    hamiltonian_at,
    jy_eigenbasis,
    lambda_at,
    overlap_matrix,
    parity_matrix,
    pt_similarity_pair,
    spectrum_sweep,
    x_parameter,
)


def pt_params(n_levels=2, alpha=1.0, gamma=1.0):
    return ModelParams(kind="pt", alpha=alpha, coupling=gamma, space=SpinSpace(n_levels))


def herm_params(n_levels=2, alpha=1.0, v=1.0):
    return ModelParams(kind="hermitian", alpha=alpha, coupling=v, space=SpinSpace(n_levels))


def test_params_validation():
    with pytest.raises(EplzError):
        ModelParams(kind="pt", alpha=-1.0, coupling=1.0, space=SpinSpace(2))
    with pytest.raises(EplzError):
        ModelParams(kind="pt", alpha=1.0, coupling=0.0, space=SpinSpace(2))
    # v = 0 is the valid uncoupled Hermitian limit
    ModelParams(kind="hermitian", alpha=1.0, coupling=0.0, space=SpinSpace(2))


def test_hamiltonian_two_level_forms():
    t, gamma = 0.7, 1.3
    h = hamiltonian_at(pt_params(gamma=gamma), t)
    assert np.allclose(h, [[-t, 1j * gamma], [1j * gamma, t]])
    v = 0.8
    h = hamiltonian_at(herm_params(v=v), t)
    assert np.allclose(h, [[-t, v], [v, t]])


def test_hamiltonian_at_zero_time_is_coupling_term():
    params = pt_params(n_levels=5, gamma=0.9)
    ops = build_generators(params.space)
    assert np.allclose(hamiltonian_at(params, 0.0), 2j * 0.9 * ops.jx)


@given(
    n_levels=st.integers(2, 8),
    t=st.floats(-5, 5),
    alpha=st.floats(0.1, 5),
    gamma=st.floats(0.1, 5),
)
def test_pt_symmetry_and_tracelessness(n_levels, t, alpha, gamma):
    params = ModelParams(kind="pt", alpha=alpha, coupling=gamma, space=SpinSpace(n_levels))
    h = hamiltonian_at(params, t)
    p = parity_matrix(params.space)
    assert np.abs(p @ h.conj() @ p - h).max() < 1e-12
    assert abs(np.trace(h)) < 1e-12


def test_lambda_branches():
    p = pt_params()
    assert lambda_at(p, 2.0) == pytest.approx(math.sqrt(3))
    assert lambda_at(p, 0.0) == 1j
    assert lambda_at(pt_params(alpha=2.0), 0.5) == 0
    assert lambda_at(herm_params(), 0.0) == pytest.approx(1.0)
    # between the EPs the branch has positive imaginary part
    lam = lambda_at(p, 0.5)
    assert lam.real == 0 and lam.imag > 0


def test_x_parameter_matches_direct_ratio():
    p = pt_params(alpha=0.7, gamma=1.3)
    for t in (2.1, 3.0, -2.0, -5.5, 1.9):
        lam = lambda_at(p, t)
        direct = (1.3 - 0.7 * t) / lam
        assert x_parameter(p, t) == pytest.approx(direct, rel=1e-12)
    # stable just outside the upper EP, where the direct form is nearly 0/0
    t_ep = 1.3 / 0.7
    guard = ep_guard(p)
    assert abs(x_parameter(p, t_ep + 2 * guard)) < 1e-2
    assert abs(x_parameter(p, 1e6)) == pytest.approx(1.0, abs=1e-5)


def _eigen_residuals(params, t):
    es = eigensystem_at(params, t)
    h = hamiltonian_at(params, t)
    n = params.space.n_levels
    res = max(
        np.linalg.norm(h @ es.right_vectors[:, j] - es.energies[j] * es.right_vectors[:, j])
        / np.linalg.norm(es.right_vectors[:, j])
        for j in range(n)
    )
    bio = np.abs(es.left_vectors.conj().T @ es.right_vectors - np.eye(n)).max()
    norm_dev = max(
        abs(
            np.linalg.norm(es.left_vectors[:, j]) / np.linalg.norm(es.right_vectors[:, j])
            - 1.0
        )
        for j in range(n)
    )
    return res, bio, norm_dev


@pytest.mark.parametrize("n_levels", [2, 3, 4, 6])
def test_pt_eigensystem_contract(n_levels):
    params = pt_params(n_levels=n_levels)
    for t in (-4.0, -1.4, -0.6, 0.3, 0.8, 1.7, 5.0):
        res, bio, norm_dev = _eigen_residuals(params, t)
        assert res < 1e-8
        assert bio < 1e-8
        assert norm_dev < 1e-8


def test_pt_eigensystem_two_level_closed_form():
    params = pt_params()
    for t in (-2.4, 1.6, 7.0):
        es = eigensystem_at(params, t)
        lam = lambda_at(params, t)
        for j, sign in ((0, 1), (1, -1)):
            ref = np.array([sign * lam - t, 1j])
            v = es.right_vectors[:, j]
            cross = ref[0] * v[1] - ref[1] * v[0]
            assert abs(cross) < 1e-10
        assert np.allclose(es.energies, [lam, -lam])


def test_hermitian_eigensystem_is_real_rotation():
    params = herm_params(n_levels=4)
    es = eigensystem_at(params, 1.3)
    assert es.left_vectors is es.right_vectors
    r = es.right_vectors
    assert np.abs(r.imag).max() < 1e-14
    assert np.abs(r.conj().T @ r - np.eye(4)).max() < 1e-10
    res, bio, norm_dev = _eigen_residuals(params, 1.3)
    assert res < 1e-8 and bio < 1e-8 and norm_dev < 1e-8


@pytest.mark.parametrize("n_levels", [2, 3, 5])
def test_left_vectors_conjugate_right_vectors(n_levels):
    # H is complex symmetric, so each left eigenvector is the conjugate of
    # the right one up to phase
    params = pt_params(n_levels=n_levels)
    for t in (-2.3, 0.4, 1.9):
        es = eigensystem_at(params, t)
        for j in range(n_levels):
            left = es.left_vectors[:, j] / np.linalg.norm(es.left_vectors[:, j])
            right = es.right_vectors[:, j] / np.linalg.norm(es.right_vectors[:, j])
            assert abs(np.vdot(left, right.conj())) == pytest.approx(1.0, abs=1e-10)


def test_pt_asymptotic_vectors_approach_diabatic_basis():
    params = pt_params()
    es = eigensystem_at(params, 1e3)
    vecs = es.right_vectors / np.linalg.norm(es.right_vectors, axis=0)
    assert abs(np.vdot(vecs[:, 0], vecs[:, 1])) < 0.05
    # at t -> +infinity the j = 0 branch (largest energy) is the last basis state
    assert abs(vecs[1, 0]) > 0.999
    assert abs(vecs[0, 1]) > 0.999


def test_duality_outside_the_strip():
    for n_levels in (2, 3, 5):
        params = pt_params(n_levels=n_levels)
        for t in (-3.0, 1.5, 8.0):
            phi, x = pt_similarity_pair(params, t)
            assert np.abs(np.linalg.inv(x) - phi.conj().T).max() < 1e-9


def test_near_ep_is_refused():
    params = pt_params()
    guard = ep_guard(params)
    assert guard == pytest.approx(1e-6)
    with pytest.raises(NearEPError):
        eigensystem_at(params, 1.0 + 0.1 * guard)
    with pytest.raises(NearEPError):
        overlap_matrix(params, -1.0)


def test_ep_data_contract():
    params = pt_params(n_levels=4)
    ed = ep_data(params)
    assert ed.t_plus == pytest.approx(1.0)
    assert ed.t_minus == pytest.approx(-1.0)
    for t, vec in ((ed.t_plus, ed.ep_vector_plus), (ed.t_minus, ed.ep_vector_minus)):
        h = hamiltonian_at(params, t)
        assert np.linalg.norm(h @ vec) < 1e-10
    # the EP+ eigenvector is the lowest Jy eigenstate
    y = jy_eigenbasis(params.space)
    overlap = abs(np.vdot(y[:, params.space.n], ed.ep_vector_plus))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_ep_data_two_level_vectors():
    ed = ep_data(pt_params())
    plus = ed.ep_vector_plus / ed.ep_vector_plus[0]
    minus = ed.ep_vector_minus / ed.ep_vector_minus[0]
    assert np.allclose(plus, [1, -1j])  # proportional to (-1, i)
    assert np.allclose(minus, [1, 1j])


def test_ep_times_scaling_and_hermitian_error():
    assert ep_times(pt_params(alpha=2.0))[1] == pytest.approx(0.5)
    with pytest.raises(NoEPError):
        ep_data(herm_params())
    with pytest.raises(NoEPError):
        ep_times(herm_params())


def test_overlap_matrix_properties():
    params = pt_params(n_levels=4)
    g = overlap_matrix(params, 0.97)
    assert np.array_equal(g, g.T)
    assert np.all((g >= 0) & (g <= 1))
    assert np.all(np.diag(g) == 1.0)
    assert g[0, 1] > 0.9  # near the EP the eigenvectors are nearly parallel
    far = overlap_matrix(params, 1e3)
    assert far[~np.eye(4, dtype=bool)].max() < 0.05
    herm = overlap_matrix(herm_params(n_levels=4), 0.3)
    assert np.abs(herm - np.eye(4)).max() < 1e-10


def test_spectrum_sweep_examples():
    table = spectrum_sweep(pt_params(), [0.0])
    assert np.allclose(table.energies[0], [1j, -1j])

    table = spectrum_sweep(pt_params(n_levels=4), [2.0])
    re = np.sort(table.energies[0].real)
    assert np.allclose(np.diff(re), 2 * math.sqrt(3))
    assert np.abs(table.energies[0].imag).max() == 0

    table = spectrum_sweep(herm_params(n_levels=3), [0.0])
    assert np.allclose(table.energies[0], [2, 0, -2])


def test_spectrum_sweep_flags_ep_rows():
    params = pt_params()
    table = spectrum_sweep(params, [-1.0, 0.0, 1.0, 2.0])
    assert table.at_ep.tolist() == [True, False, True, False]
    assert np.allclose(table.energies[0], 0.0)
