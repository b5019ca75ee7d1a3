import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybrid_precoding.config import SystemConfig
from hybrid_precoding.cwap import (analog_gain, cwap_analog_precoder, cwap_precoder, next_column,
                                   phase_codebook, q_update, quantize_phases)
from hybrid_precoding.errors import DegenerateInputError, InvalidInputError
from hybrid_precoding.rates import subrate_terms

from conftest import crandn, unit_modulus
from oracles import q_literal


def _cfg(**kw):
    base = dict(n_bs=16, n_u=4, users=2, rf_chains=4, streams=2)
    base.update(kw)
    return SystemConfig(**base)


def test_analog_gain():
    cfg = _cfg(snr_db=10.0, users=2, streams=2, c=1.0)
    assert np.isclose(analog_gain(cfg), 10.0 / 4.0)


def test_q_first_column_identity(rng):
    h = crandn(rng, 4, 16)
    np.testing.assert_array_equal(q_update(h, np.zeros((16, 0)), _cfg()), np.eye(4))


def test_q_matches_literal_oracle(rng):
    for _ in range(20):
        cfg = _cfg(snr_db=float(rng.uniform(-10, 20)), c=float(rng.uniform(0.5, 2)))
        h = crandn(rng, 4, 16)
        cols = unit_modulus(rng, 16, int(rng.integers(1, 4)))
        q = q_update(h, cols, cfg)
        ref = q_literal(h, cols, cfg.snr_db, cfg.c, cfg.sigma_sq, cfg.users, cfg.streams)
        np.testing.assert_allclose(q, ref, atol=1e-10 * np.linalg.norm(ref))


def test_q_hermitian_eigenvalues_at_least_one(rng):
    h = crandn(rng, 4, 16)
    q = q_update(h, unit_modulus(rng, 16, 3), _cfg())
    np.testing.assert_array_equal(q, q.conj().T)
    assert np.linalg.eigvalsh(q).min() >= 1.0 - 1e-12


def test_next_column_modulus(rng):
    h = crandn(rng, 4, 16)
    f = next_column(h, np.eye(4), 16)
    np.testing.assert_allclose(np.abs(f), 0.25, rtol=1e-15)


def test_next_column_miso_matched(rng):
    h = crandn(rng, 1, 16)
    f = next_column(h, np.eye(1), 16)
    ref = np.exp(-1j * np.angle(h[0])) / 4.0
    # equal up to one global phase
    phase = np.vdot(ref, f)
    np.testing.assert_allclose(f, ref * phase / abs(phase), atol=1e-12)


def test_next_column_rejects_zero_channel():
    with pytest.raises(DegenerateInputError):
        next_column(np.zeros((4, 16)), np.eye(4), 16)


def test_subrate_invariant_to_global_phase(rng):
    cfg = _cfg()
    h = crandn(rng, 4, 16)
    f = cwap_precoder(h, cfg)
    rot = f * np.exp(1j * rng.uniform(0, 2 * np.pi, f.shape[1]))
    np.testing.assert_allclose(subrate_terms(h, rot, cfg), subrate_terms(h, f, cfg), rtol=1e-12)


def test_single_column_is_next_column(rng):
    cfg = _cfg(rf_chains=1, streams=1)
    h = crandn(rng, 4, 16)
    np.testing.assert_array_equal(cwap_precoder(h, cfg)[:, 0], next_column(h, np.eye(4), 16))


def test_precoder_shape_and_modulus(rng):
    cfg = _cfg()
    chans = [crandn(rng, 4, 16) for _ in range(2)]
    f = cwap_analog_precoder(chans, cfg)
    assert f.shape == (16, 8)
    np.testing.assert_allclose(np.abs(f), 0.25, rtol=1e-15)


def test_precoder_deterministic(rng):
    cfg = _cfg()
    h = crandn(rng, 4, 16)
    assert np.array_equal(cwap_precoder(h, cfg), cwap_precoder(h.copy(), cfg))


def _subrate(h, q, f, k):
    hf = h @ f
    return np.log2(1.0 + k * np.real(np.vdot(hf, np.linalg.solve(q, hf))))


def test_column_dominates_random_candidates():
    rng = np.random.default_rng(99)
    cfg = _cfg()
    k = analog_gain(cfg)
    for _ in range(20):
        h = crandn(rng, 4, 16)
        f = cwap_precoder(h, cfg)
        for m in range(cfg.rf_chains):
            q = q_update(h, f[:, :m], cfg)
            chosen = _subrate(h, q, f[:, m], k)
            cands = unit_modulus(rng, 16, 1000)
            hc = h @ cands
            quad = np.real(np.sum(hc.conj() * np.linalg.solve(q, hc), axis=0))
            assert chosen >= np.max(np.log2(1.0 + k * quad))


def test_subrate_terms_non_negative(rng):
    cfg = _cfg()
    h = crandn(rng, 4, 16)
    assert np.all(subrate_terms(h, cwap_precoder(h, cfg), cfg) >= 0)


def test_quantize_one_bit():
    n = 16
    x = np.array([[np.exp(1j * np.pi / 3) / np.sqrt(n)]])
    out = quantize_phases(x, 1, 1 / np.sqrt(n))
    assert out[0, 0] == phase_codebook(1, 1 / np.sqrt(n))[0]


def test_quantize_tie_goes_to_smaller_index():
    book = phase_codebook(2, 1.0)
    # exactly halfway between index 0 (phase 0) and index 1 (phase pi/2)
    x = np.array([np.exp(1j * np.pi / 4)])
    d = np.abs(x[0] - book)
    if d[0] == d[1]:
        assert quantize_phases(x, 2, 1.0)[0] == book[0]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_quantize_membership_and_idempotence(bits, seed):
    r = np.random.default_rng(seed)
    x = unit_modulus(r, 16, 5)
    book = phase_codebook(bits, 0.25)
    out = quantize_phases(x, bits, 0.25)
    assert np.all(np.isin(out, book))
    assert np.array_equal(quantize_phases(out, bits, 0.25), out)


def test_quantize_nearest(rng):
    x = unit_modulus(rng, 16, 4)
    book = phase_codebook(3, 0.25)
    out = quantize_phases(x, 3, 0.25)
    best = np.min(np.abs(x[..., None] - book), axis=-1)
    np.testing.assert_array_equal(np.abs(x - out), best)


def test_quantize_rejects_wrong_modulus(rng):
    with pytest.raises(InvalidInputError):
        quantize_phases(crandn(rng, 4, 4), 3, 0.5)
    with pytest.raises(InvalidInputError):
        phase_codebook(0, 1.0)
