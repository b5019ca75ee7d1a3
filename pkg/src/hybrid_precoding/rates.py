"""Spectral-efficiency formulas.

* :func:`user_rate_general` - log-det rate with interference-plus-noise
  covariance built from the full hybrid chain.
* :func:`user_rate_bd` - the same rate for an exact BD construction,
  expressed through the effective singular values.
* :func:`surrogate_rate`, :func:`surrogate_rate_recursion` - analog-only
  surrogate and its exact column-by-column telescoping.
* :func:`subrate_terms` - the per-column sub-rates maximized by CWAP.
* :func:`jensen_diagnostic` - both sides of the per-block lower bound.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .config import SystemConfig
from .cwap import analog_gain, q_update
from .numerics import hermitian_inverse, log2det_hermitian, pseudo_inverse, svd

__all__ = [
    "RateReport", "user_rate_general", "sum_rate_general", "user_rate_bd",
    "surrogate_rate", "surrogate_rate_recursion", "subrate_terms", "subrate_sum",
    "JensenReport", "jensen_diagnostic",
]


@dataclass
class RateReport:
    per_user_rates: List[float]

    @property
    def sum_rate(self) -> float:
        return float(sum(self.per_user_rates))


class SingularCovarianceError(np.linalg.LinAlgError):
    pass


def user_rate_general(h: np.ndarray, f_rf: np.ndarray, f_bb_blocks: Sequence[np.ndarray],
                      user: int, w_rf: np.ndarray, w_bb: Optional[np.ndarray],
                      config: SystemConfig) -> float:
    """Achievable rate of ``user`` under Gaussian signaling.

    ``w_bb=None`` means a fully-digital combiner ``W = w_rf``.  For a
    fully-digital precoder pass ``f_rf = I``.
    """
    w = w_rf if w_bb is None else w_rf @ w_bb
    g = w.conj().T @ h @ f_rf
    scale = config.rho / (config.users * config.streams)
    n_s = w.shape[1]
    signal = np.zeros((n_s, n_s), dtype=complex)
    cov = config.sigma_sq * (w.conj().T @ w)
    for j, f_bb in enumerate(f_bb_blocks):
        gf = g @ f_bb
        term = scale * (gf @ gf.conj().T)
        if j == user:
            signal = term
        else:
            cov = cov + term
    cov = 0.5 * (cov + cov.conj().T)
    eig = np.linalg.eigvalsh(cov)
    if eig[0] <= 1e-14 * max(eig[-1], 1e-300):
        cond = np.inf if eig[0] <= 0 else eig[-1] / eig[0]
        raise SingularCovarianceError(f"interference-plus-noise covariance is singular (cond={cond:.3e})")
    # log det(I + R^{-1} S) = log det(R + S) - log det(R)
    return max(0.0, log2det_hermitian(cov + signal) - log2det_hermitian(cov))


def sum_rate_general(channels, f_rf, f_bb_blocks, combiners, config) -> RateReport:
    """Evaluate :func:`user_rate_general` for every user.

    ``combiners`` is a list of ``(w_rf, w_bb)`` pairs (``w_bb`` may be None).
    """
    rates = [user_rate_general(h, f_rf, f_bb_blocks, u, w_rf, w_bb, config)
             for u, (h, (w_rf, w_bb)) in enumerate(zip(channels, combiners))]
    return RateReport(rates)


def user_rate_bd(singular_values: np.ndarray, config: SystemConfig) -> float:
    """``sum_i log2(1 + rho sigma_i^2 / (sigma^2 U N_S))``."""
    s = np.asarray(singular_values, dtype=float)
    return float(np.sum(np.log2(1.0 + config.snr_scale * s ** 2)))


def surrogate_rate(h: np.ndarray, w: np.ndarray, f_rf_u: np.ndarray, config: SystemConfig) -> float:
    """``log2 |I + k W^+ H F F^H H^H W|`` with ``k = rho c / (sigma^2 U N_S)``."""
    if f_rf_u.shape[1] == 0:
        return 0.0
    w_pinv = pseudo_inverse(w)
    hf = h @ f_rf_u
    p = np.eye(w.shape[1]) + analog_gain(config) * (w_pinv @ hf @ hf.conj().T @ w)
    sign, logdet = np.linalg.slogdet(p)
    return float(np.real(logdet) / np.log(2.0))


def surrogate_rate_recursion(h: np.ndarray, w: np.ndarray, f_rf_u: np.ndarray,
                             config: SystemConfig) -> np.ndarray:
    """Per-column increments of the exact determinant-lemma telescoping.

    Term ``m`` is ``log2(1 + k f_m^H H^H W P_{m-1}^{-1} W^+ H f_m)`` with
    ``P_{m-1} = I + k W^+ H F_{m-1} F_{m-1}^H H^H W``.  The terms sum to
    :func:`surrogate_rate`.
    """
    k = analog_gain(config)
    w_pinv = pseudo_inverse(w)
    n_s = w.shape[1]
    p = np.eye(n_s, dtype=complex)
    terms = []
    for m in range(f_rf_u.shape[1]):
        hf = h @ f_rf_u[:, m]
        a = w_pinv @ hf
        b = hf.conj() @ w
        scalar = 1.0 + k * (b @ np.linalg.solve(p, a))
        terms.append(np.log2(abs(scalar)))
        p = p + k * np.outer(a, b)
    return np.asarray(terms, dtype=float)


def subrate_terms(h: np.ndarray, f_rf_u: np.ndarray, config: SystemConfig) -> np.ndarray:
    """``log2(1 + k f_m^H H^H Q_{m-1}^{-1} H f_m)`` for every column ``m``."""
    k = analog_gain(config)
    terms = []
    for m in range(f_rf_u.shape[1]):
        q_inv = hermitian_inverse(q_update(h, f_rf_u[:, :m], config))
        hf = h @ f_rf_u[:, m]
        quad = np.real(np.vdot(hf, q_inv @ hf))
        terms.append(np.log2(1.0 + k * quad))
    return np.asarray(terms, dtype=float)


def subrate_sum(h: np.ndarray, f_rf_u: np.ndarray, config: SystemConfig) -> float:
    return float(np.sum(subrate_terms(h, f_rf_u, config)))


@dataclass
class JensenReport:
    """Both sides of the per-block bound for one user.

    ``rate`` is ``log2|I + k sum_j S_j^2|``, ``block_sum`` is
    ``sum_j log2|I + k S_j^2|`` and ``scaled_surrogate`` is ``U`` times the
    user's own block term.  No ordering between them is asserted.
    """
    rate: float
    block_sum: float
    scaled_surrogate: float
    skipped: Optional[str] = None


def jensen_diagnostic(h: np.ndarray, analog_blocks: Sequence[np.ndarray], user: int,
                      config: SystemConfig) -> JensenReport:
    """Per-block singular values ``S_j`` of ``H_u F_RF,j`` and the quantities built from them.

    Each block ``H_u F_RF,j`` has only ``M`` columns, so its complement
    null-space basis of width ``M`` is a full unitary rotation and ``S_j``
    are simply the top ``N_S`` singular values of ``H_u F_RF,j``.
    """
    k = config.snr_scale
    n_s = config.streams
    blocks = []
    for f_j in analog_blocks:
        s = svd(h @ f_j).singular_values
        if s.size < n_s or s[0] == 0.0:
            return JensenReport(np.nan, np.nan, np.nan,
                                skipped="degenerate per-block effective channel")
        blocks.append(s[:n_s])
    total = np.sum([s ** 2 for s in blocks], axis=0)
    rate = float(np.sum(np.log2(1.0 + k * total)))
    per_block = [float(np.sum(np.log2(1.0 + k * s ** 2))) for s in blocks]
    return JensenReport(rate=rate, block_sum=float(np.sum(per_block)),
                        scaled_surrogate=len(blocks) * per_block[user])
