"""Column-wise analog precoding (CWAP) and phase-shifter quantization.

The analog precoder of each user is built one column at a time.  Column
``m`` maximizes its own sub-rate
``log2(1 + k f^H H^H Q^{-1} H f)`` with ``k = rho c / (sigma^2 U N_S)`` and
``Q = I + k H F F^H H^H`` accumulated over the columns already fixed.  The
maximizer under the constant-modulus constraint is taken as the phase of
the dominant eigenvector of ``H^H Q^{-1} H``.
"""

import numpy as np

from .config import SystemConfig
from .errors import DegenerateInputError, InvalidInputError
from .numerics import PHASE_TOL, dominant_right_singular_vector

__all__ = [
    "analog_gain", "q_update", "next_column", "cwap_precoder",
    "cwap_analog_precoder", "quantize_phases", "phase_codebook",
]


def analog_gain(config: SystemConfig) -> float:
    """``rho c / (sigma^2 U N_S)``, the coefficient in front of every sub-rate term."""
    return config.c * config.snr_scale


def q_update(h: np.ndarray, previous_columns: np.ndarray, config: SystemConfig) -> np.ndarray:
    """``I + k H F F^H H^H`` over the already fixed columns ``F`` (``I`` if none)."""
    n_u = h.shape[0]
    q = np.eye(n_u, dtype=complex)
    if previous_columns is None or previous_columns.size == 0:
        return q
    hf = h @ previous_columns
    q += analog_gain(config) * (hf @ hf.conj().T)
    return 0.5 * (q + q.conj().T)


def _phase_only(v: np.ndarray, n: int) -> np.ndarray:
    phase = np.where(np.abs(v) > PHASE_TOL, np.angle(v), 0.0)
    return np.exp(1j * phase) / np.sqrt(n)


def next_column(h: np.ndarray, q: np.ndarray, n_bs: int) -> np.ndarray:
    """Constant-modulus column maximizing ``f^H H^H Q^{-1} H f`` by phase alignment.

    The dominant eigenvector of ``H^H Q^{-1} H`` is the dominant right
    singular vector of ``L^{-1} H`` where ``Q = L L^H``; that smaller
    factorization is used instead of forming the ``N_BS x N_BS`` matrix.
    """
    if not np.any(h):
        raise DegenerateInputError("zero channel has no dominant direction")
    chol = np.linalg.cholesky(q)
    whitened = np.linalg.solve(chol, h)
    v = dominant_right_singular_vector(whitened)
    return _phase_only(v, n_bs)


def cwap_precoder(h: np.ndarray, config: SystemConfig) -> np.ndarray:
    """Analog precoder ``F_RF,u`` (``N_BS x M``) of one user, column by column."""
    n_bs, m_cols = h.shape[1], config.rf_chains
    f = np.zeros((n_bs, m_cols), dtype=complex)
    for m in range(m_cols):
        q = q_update(h, f[:, :m], config)
        f[:, m] = next_column(h, q, n_bs)
    return f


def cwap_analog_precoder(channels, config: SystemConfig) -> np.ndarray:
    """Concatenate the per-user analog precoders into ``F_RF`` (``N_BS x UM``)."""
    return np.hstack([cwap_precoder(h, config) for h in channels])


def phase_codebook(bits: int, magnitude: float) -> np.ndarray:
    """The ``2**bits`` admissible phase-shifter values ``magnitude * exp(j 2 pi p / 2**bits)``."""
    if bits < 1:
        raise InvalidInputError(f"quantization needs at least one bit, got {bits}")
    levels = 2 ** bits
    return magnitude * np.exp(2j * np.pi * np.arange(levels) / levels)


def quantize_phases(matrix: np.ndarray, bits: int, magnitude: float,
                    check_modulus: bool = True) -> np.ndarray:
    """Replace each entry by the nearest codebook value (Euclidean distance).

    Ties go to the smaller phase index.  The output entries are taken from
    the codebook array itself, so they are bit-exact codebook members.
    """
    matrix = np.asarray(matrix)
    if check_modulus and not np.allclose(np.abs(matrix), magnitude, rtol=0.0, atol=1e-9):
        raise InvalidInputError("entries do not have the stated constant modulus")
    book = phase_codebook(bits, magnitude)
    dist = np.abs(matrix[..., np.newaxis] - book)
    return book[np.argmin(dist, axis=-1)]
