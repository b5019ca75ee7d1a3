import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybrid_precoding.errors import (DegenerateInputError, InvalidInputError,
                                     RankDeficiencyError, ShapeError)
from hybrid_precoding.numerics import (dominant_right_singular_vector, fix_phase,
                                       hermitian_inverse, kron, log2det_hermitian,
                                       pseudo_inverse, svd, unvec, vec)

from conftest import crandn


def test_svd_identity():
    np.testing.assert_allclose(svd(np.eye(3)).singular_values, [1, 1, 1])


def test_svd_diagonal():
    res = svd(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(res.singular_values, [3, 1])
    # right vectors are e1, e2 up to a unit phase
    np.testing.assert_allclose(np.abs(res.right), np.eye(2), atol=1e-14)


def test_svd_reconstructs_random(rng):
    a = crandn(rng, 6, 4)
    res = svd(a)
    assert np.linalg.norm(res.reconstruct() - a) <= 1e-10 * np.linalg.norm(a)
    assert np.all(np.diff(res.singular_values) <= 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 64), st.integers(1, 64), st.integers(0, 2**32 - 1))
def test_svd_reconstruction_property(rows, cols, seed):
    a = crandn(np.random.default_rng(seed), rows, cols)
    res = svd(a)
    assert np.linalg.norm(res.reconstruct() - a) <= 1e-10 * np.linalg.norm(a)
    assert np.all(np.diff(res.singular_values) <= 0)


def test_svd_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        svd(np.array([[1.0, np.nan]]))
    with pytest.raises(InvalidInputError):
        svd(np.array([[np.inf]]))
    with pytest.raises(ShapeError):
        svd(np.ones(3))


def test_svd_bit_identical_on_repeat(rng):
    a = crandn(rng, 8, 5)
    r1, r2 = svd(a), svd(a.copy())
    assert np.array_equal(r1.left, r2.left) and np.array_equal(r1.right, r2.right)


def test_dominant_vector_diagonal():
    v = dominant_right_singular_vector(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(v, [1, 0], atol=1e-15)


def test_dominant_vector_identity_is_deterministic_and_unit():
    a = np.eye(4)
    v = dominant_right_singular_vector(a)
    assert np.isclose(np.linalg.norm(a @ v), 1.0)
    assert np.array_equal(v, dominant_right_singular_vector(a))
    first = v[np.argmax(np.abs(v) > 1e-12)]
    assert first.imag == 0 and first.real >= 0


def test_dominant_vector_matches_eigh_oracle(rng):
    for _ in range(20):
        g = crandn(rng, 4, 4)
        psd = g @ g.conj().T
        v = dominant_right_singular_vector(psd)
        w, vecs = np.linalg.eigh(psd)
        top = vecs[:, -1]
        # align the oracle to the same global phase
        phase = np.vdot(top, v)
        phase /= abs(phase)
        np.testing.assert_allclose(v, top * phase, atol=1e-8)


def test_dominant_vector_rejects_zero():
    with pytest.raises(DegenerateInputError):
        dominant_right_singular_vector(np.zeros((3, 3)))


def test_fix_phase_convention():
    v = np.array([0.0, 1j, 1.0]) / np.sqrt(2)
    out = fix_phase(v)
    assert out[0] == 0 and out[1].imag == 0 and out[1].real > 0
    np.testing.assert_allclose(np.abs(out), np.abs(v))


def test_pinv_semi_unitary(rng):
    q, _ = np.linalg.qr(crandn(rng, 6, 3))
    np.testing.assert_allclose(pseudo_inverse(q), q.conj().T, atol=1e-12)


def test_pinv_column():
    np.testing.assert_allclose(pseudo_inverse(np.array([[2.0], [0.0]])), [[0.5, 0.0]])


def test_pinv_left_inverse(rng):
    w = crandn(rng, 6, 3)
    np.testing.assert_allclose(pseudo_inverse(w) @ w, np.eye(3), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1), st.data())
def test_pinv_property(cols, seed, data):
    rows = data.draw(st.integers(cols, 16))
    w = crandn(np.random.default_rng(seed), rows, cols)
    np.testing.assert_allclose(pseudo_inverse(w) @ w, np.eye(cols), atol=1e-10)


def test_pinv_rank_deficient():
    w = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    with pytest.raises(RankDeficiencyError):
        pseudo_inverse(w)


def test_hermitian_inverse_cases(rng):
    np.testing.assert_allclose(hermitian_inverse(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(hermitian_inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))
    g = crandn(rng, 5, 5)
    q = np.eye(5) + g @ g.conj().T
    np.testing.assert_allclose(q @ hermitian_inverse(q), np.eye(5), atol=1e-10)


def test_hermitian_inverse_rejects_non_hermitian():
    with pytest.raises(InvalidInputError):
        hermitian_inverse(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_vec_is_column_major():
    a, b, c, d = 1, 2, 3, 4
    np.testing.assert_array_equal(vec(np.array([[a, c], [b, d]])), [a, b, c, d])


def test_unvec_round_trip(rng):
    a = crandn(rng, 5, 3)
    assert np.array_equal(unvec(vec(a), 5, 3), a)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_kron_vec_identity(n, p, q, seed):
    r = np.random.default_rng(seed)
    x, b = crandn(r, n, p), crandn(r, p, q)
    lhs = kron(b.T, np.eye(n)) @ vec(x)
    np.testing.assert_allclose(lhs, vec(x @ b), atol=1e-12)


def test_log2det_hermitian(rng):
    g = crandn(rng, 4, 4)
    a = np.eye(4) + g @ g.conj().T
    expected = np.linalg.slogdet(a)[1] / np.log(2)
    assert np.isclose(log2det_hermitian(a), expected, rtol=1e-12)
