import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eplz import (
    DegenerateNormalizationError,
    EplzError,
    ModelParams,
    SpinSpace,
    TransitionMatrix,
    adiabatic_P,
    adiabatic_P_exact,
    adiabatic_projection,
    analytic_transition_matrix,
    ep_data,
    eigensystem_at,
    hermitian_M,
    lz2_survival,
    normalize,
    pt_M,
    pt_P_column0,
)

A_PI = math.exp(-math.pi)
R_PI = 1.0 - A_PI


def test_lz2_survival_examples():
    assert lz2_survival(0.0, 1.0) == 1.0
    assert lz2_survival(1.0, 1.0) == pytest.approx(0.0432139, abs=1e-7)
    assert lz2_survival(1.0, 1e9) == pytest.approx(1.0)
    with pytest.raises(EplzError):
        lz2_survival(1.0, 0.0)


def test_hermitian_M_two_levels():
    m = hermitian_M(SpinSpace(2), 1.0, 1.0).entries
    assert np.allclose(m, [[A_PI, R_PI], [R_PI, A_PI]], atol=1e-15)


def test_hermitian_M_first_column_is_binomial():
    m = hermitian_M(SpinSpace(3), 1.0, 1.0).entries
    assert np.allclose(m[:, 0], [A_PI**2, 2 * A_PI * R_PI, R_PI**2], atol=1e-15)


def test_hermitian_M_adiabatic_limit_hits_last_state():
    # A underflows to 0 here: the first column must be exactly (0, ..., 0, 1)
    m = hermitian_M(SpinSpace(4), 1.0, 1e-3).entries
    assert np.allclose(m[:, 0], [0, 0, 0, 1])


@given(
    n_levels=st.integers(2, 10),
    v=st.floats(0.1, 3),
    alpha=st.floats(0.05, 20),
)
def test_hermitian_M_is_doubly_stochastic(n_levels, v, alpha):
    m = hermitian_M(SpinSpace(n_levels), v, alpha).entries
    assert np.abs(m.sum(axis=0) - 1).max() < 1e-10
    assert np.abs(m.sum(axis=1) - 1).max() < 1e-10
    assert m.min() >= 0


def test_raw_matrices_symmetric_exactly():
    mh = hermitian_M(SpinSpace(7), 1.3, 0.7).entries
    mp = pt_M(SpinSpace(7), 1.3, 0.7).entries
    assert np.array_equal(mh, mh.T)
    assert np.array_equal(mp, mp.T)


def test_pt_M_two_levels_ratio_form():
    m = pt_M(SpinSpace(2), 1.0, 1.0)
    assert np.allclose(m.entries, [[1.0, R_PI], [R_PI, 1.0]], atol=1e-15)
    assert m.log_scale == pytest.approx(math.pi)


def test_pt_M_corner_entry_and_small_coupling_limit():
    assert pt_M(SpinSpace(3), 1.0, 1.0).entries[0, 0] == 1.0
    nearly_diag = pt_M(SpinSpace(4), 1e-8, 1.0).entries
    assert np.abs(nearly_diag - np.eye(4)).max() < 1e-12


def test_normalize_pt_two_levels_closed_forms():
    p = normalize(pt_M(SpinSpace(2), 1.0, 1.0)).entries
    assert p[0, 0] == pytest.approx(1 / (2 - A_PI), rel=1e-14)
    assert p[0, 0] == pytest.approx(0.51104, abs=5e-6)
    assert p[0, 1] == pytest.approx(R_PI / (2 - A_PI), rel=1e-14)
    assert np.abs(p.sum(axis=0) - 1).max() < 1e-12


def test_normalize_keeps_stochastic_matrix():
    m = hermitian_M(SpinSpace(5), 0.9, 1.7)
    p = normalize(m)
    assert np.abs(p.entries - m.entries).max() < 1e-12


def test_normalize_rejects_degenerate_and_asymmetric():
    zero_col = TransitionMatrix(entries=np.array([[0.0, 0.0], [0.0, 1.0]]), flavor="raw")
    with pytest.raises(DegenerateNormalizationError):
        normalize(zero_col)
    skew = TransitionMatrix(entries=np.array([[1.0, 0.5], [0.1, 1.0]]), flavor="raw")
    with pytest.raises(EplzError):
        normalize(skew)


def test_pt_P_column0_values():
    r = R_PI
    col = pt_P_column0(SpinSpace(3), 1.0, 1.0)
    assert col[0] == pytest.approx((1 / (1 + r)) ** 2, rel=1e-14)
    assert col[0] == pytest.approx(0.26117, abs=1e-5)
    assert col.sum() == pytest.approx(1.0, rel=1e-14)
    # adiabatic limit: exp(-pi/alpha) underflows, r -> 1 exactly
    assert np.allclose(pt_P_column0(SpinSpace(3), 1.0, 1e-3), [0.25, 0.5, 0.25])
    assert np.allclose(pt_P_column0(SpinSpace(4), 1.0, 1e-3), [0.125, 0.375, 0.375, 0.125])


def test_pt_P_column0_consistent_with_full_matrix():
    for alpha in (0.3, 1.0, 4.0):
        col = pt_P_column0(SpinSpace(5), 1.0, alpha)
        full = normalize(pt_M(SpinSpace(5), 1.0, alpha)).entries[:, 0]
        assert np.abs(col - full).max() < 1e-12


def test_adiabatic_P_examples_and_exactness():
    assert np.allclose(adiabatic_P(SpinSpace(2)), [0.5, 0.5])
    assert np.allclose(adiabatic_P(SpinSpace(3)), [0.25, 0.5, 0.25])
    assert np.allclose(adiabatic_P(SpinSpace(6)) * 32, [1, 5, 10, 10, 5, 1])
    for n_levels in range(2, 11):
        exact = adiabatic_P_exact(SpinSpace(n_levels))
        assert sum(exact) == Fraction(1)
        n = n_levels - 1
        assert exact == [Fraction(math.comb(n, k), 2**n) for k in range(n_levels)]


def test_chu_vandermonde_identity():
    for n in range(13):
        for j in range(n + 1):
            for k in range(n + 1):
                total = sum(
                    math.comb(k, l) * math.comb(n - k, j - l)
                    for l in range(0, min(j, k) + 1)
                    if j - l <= n - k
                )
                assert total == math.comb(n, j)


def test_adiabatic_independence_of_initial_state():
    space = SpinSpace(5)
    p = normalize(pt_M(space, 1.0, 1.0 / 20.0)).entries
    limit = adiabatic_P(space)
    assert np.abs(p - limit[:, None]).max() < 1e-3


def test_quench_limit_both_models():
    space = SpinSpace(4)
    for entries in (
        normalize(hermitian_M(space, 1.0, 1e6)).entries,
        normalize(pt_M(space, 1.0, 1e6)).entries,
    ):
        assert np.abs(entries - np.eye(4)).max() < 1e-4


def _pt_params(n_levels, alpha=1.0, gamma=1.0):
    return ModelParams(kind="pt", alpha=alpha, coupling=gamma, space=SpinSpace(n_levels))


def test_adiabatic_projection_normalized_is_binomial():
    for n_levels in range(2, 7):
        params = _pt_params(n_levels)
        proj = adiabatic_projection(params, 1.8)
        assert np.abs(proj.normalized - adiabatic_P(params.space)).max() < 1e-12


def test_adiabatic_projection_two_level_raw_pattern():
    params = _pt_params(2)
    proj = adiabatic_projection(params, 3.0)
    assert proj.raw[0] == pytest.approx(proj.x_abs / 2, rel=1e-14)
    assert proj.raw[1] == pytest.approx(proj.x_abs / 2, rel=1e-14)


@pytest.mark.parametrize("n_levels", range(2, 7))
def test_adiabatic_projection_crosscheck_against_eigensystem(n_levels):
    params = _pt_params(n_levels)
    ed = ep_data(params)
    for t in (1.5, 2.0, 5.0):
        proj = adiabatic_projection(params, t)
        es = eigensystem_at(params, t)
        cross = np.abs(es.left_vectors.conj().T @ ed.ep_vector_plus) ** 2
        assert np.abs(cross - proj.raw).max() < 1e-8


def test_adiabatic_projection_domain_errors():
    params = _pt_params(3)
    with pytest.raises(EplzError):
        adiabatic_projection(params, 0.9)
    herm = ModelParams(kind="hermitian", alpha=1.0, coupling=1.0, space=SpinSpace(3))
    with pytest.raises(EplzError):
        adiabatic_projection(herm, 2.0)


def test_analytic_transition_matrix_dispatch():
    pt = analytic_transition_matrix(_pt_params(3))
    assert np.abs(pt.entries[:, 0] - pt_P_column0(SpinSpace(3), 1.0, 1.0)).max() < 1e-14
    herm = analytic_transition_matrix(
        ModelParams(kind="hermitian", alpha=1.0, coupling=1.0, space=SpinSpace(3))
    )
    assert herm.entries[0, 0] == pytest.approx(A_PI**2, rel=1e-12)
