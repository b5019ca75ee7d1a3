import numpy as np
import pytest

from hybrid_precoding.baseline import (fully_digital, pe_altmin_factorize, phase_extraction,
                                       procrustes_digital, quantize_factorization)
from hybrid_precoding.bd import interference_leakage
from hybrid_precoding.channel import generate_channels
from hybrid_precoding.config import SystemConfig
from hybrid_precoding.cwap import phase_codebook
from hybrid_precoding.errors import ShapeError

from conftest import crandn, unit_modulus


CFG = SystemConfig(n_bs=64, n_u=16, users=4, rf_chains=4, streams=2)


def test_single_user_svd_rate():
    cfg = CFG.replace(users=1)
    h = generate_channels(cfg, 4).channels[0]
    fd = fully_digital([h], cfg)
    s = np.linalg.svd(h, compute_uv=False)[:2]
    expected = np.sum(np.log2(1 + cfg.rho * s ** 2 / (cfg.streams * cfg.sigma_sq)))
    assert np.isclose(fd.sum_rate, expected, rtol=1e-10)


def test_fully_digital_zero_interference_and_power():
    for seed in range(10):
        chans = generate_channels(CFG, seed).channels
        fd = fully_digital(chans, CFG)
        assert np.max(interference_leakage(chans, fd.precoders)) <= 1e-9
        assert abs(np.linalg.norm(fd.stacked_precoder) ** 2 - CFG.users * CFG.streams) <= 1e-9


def test_phase_extraction_modulus(rng):
    a = phase_extraction(crandn(rng, 16, 3), crandn(rng, 4, 3), 0.25)
    np.testing.assert_allclose(np.abs(a), 0.25, rtol=1e-15)


def test_procrustes_semi_unitary(rng):
    d = procrustes_digital(unit_modulus(rng, 16, 6), crandn(rng, 16, 4))
    np.testing.assert_allclose(d.conj().T @ d, np.eye(4), atol=1e-12)


def test_semi_unitary_objective_non_increasing(rng):
    cfg = CFG.replace(max_iters=200, stop_delta=1e-2)
    for _ in range(10):
        target, _ = np.linalg.qr(crandn(rng, 64, 8))
        res = pe_altmin_factorize(target, 16, cfg, rng, digital_update="semi-unitary")
        assert np.all(np.diff(res.objective_history) <= 1e-12)
        assert res.iterations <= cfg.max_iters


def test_exactly_factorizable_target(rng):
    cfg = CFG.replace(max_iters=200)
    n, k = 64, 4
    a_true = unit_modulus(rng, n, k)
    u, _ = np.linalg.qr(crandn(rng, k, k))
    target = a_true @ u
    for update in ("ls", "semi-unitary"):
        res = pe_altmin_factorize(target, k, cfg, np.random.default_rng(1), tol=1e-12,
                                  initial_analog=a_true * np.exp(1j * 0.3 * crandn(rng, n, k).real),
                                  digital_update=update)
        assert res.final_distance ** 2 <= 1e-6
        np.testing.assert_allclose(np.abs(res.analog), 1 / np.sqrt(n), rtol=1e-14)


def test_stop_rules(rng):
    cfg = CFG.replace(max_iters=50)
    target, _ = np.linalg.qr(crandn(rng, 64, 4))
    far = pe_altmin_factorize(target, 4, cfg, np.random.default_rng(0), tol=0.0)
    assert far.iterations == 50
    change = pe_altmin_factorize(target, 4, cfg, np.random.default_rng(0), tol=1e9,
                                 stop_rule="change")
    assert change.iterations == 1
    with pytest.raises(ValueError):
        pe_altmin_factorize(target, 4, cfg, rng, stop_rule="never")
    with pytest.raises(ValueError):
        pe_altmin_factorize(target, 4, cfg, rng, digital_update="magic")


def test_factorize_shape_errors(rng):
    with pytest.raises(ShapeError):
        pe_altmin_factorize(crandn(rng, 16, 4), 3, CFG, rng)
    with pytest.raises(ShapeError):
        pe_altmin_factorize(crandn(rng, 4, 2), 8, CFG, rng)


def test_quantized_factorization_in_codebook(rng):
    target, _ = np.linalg.qr(crandn(rng, 64, 4))
    res = pe_altmin_factorize(target, 8, CFG, rng)
    q = quantize_factorization(res, target, 3)
    assert np.all(np.isin(q.analog, phase_codebook(3, 1 / 8)))
    assert q.final_distance == pytest.approx(np.linalg.norm(target - q.analog @ q.digital))
