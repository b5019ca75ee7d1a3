"""Block-diagonalization (BD) digital precoding.

For every user the digital precoder is confined to the (approximate) null
space of the other users' equivalent channels; inside that subspace the
user's own effective channel is diagonalized by an SVD, which also yields
the fully-digital combiner target for the user.
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .config import SystemConfig
from .errors import (ConfigurationError, DegenerateInputError,
                     EmptyComplementError, ShapeError)
from .numerics import RANK_TOL, svd

__all__ = [
    "BdSolution", "stack_complement", "null_space_basis", "numerical_null_space",
    "bd_solve", "normalize_power", "interference_leakage",
]


@dataclass
class BdSolution:
    digital_precoders: List[np.ndarray]
    combiner_targets: List[np.ndarray]
    effective_singular_values: List[np.ndarray]
    null_bases: List[np.ndarray]

    @property
    def stacked_precoder(self) -> np.ndarray:
        """``F_BB = [F_BB,1 ... F_BB,U]``."""
        return np.hstack(self.digital_precoders)


def stack_complement(equivalent_channels: Sequence[np.ndarray], excluded_user: int) -> np.ndarray:
    """Vertically stack every equivalent channel except ``excluded_user``."""
    n_users = len(equivalent_channels)
    if n_users < 2:
        raise EmptyComplementError("a single user has no interfering users")
    if not 0 <= excluded_user < n_users:
        raise IndexError(f"user index {excluded_user} out of range for {n_users} users")
    cols = {h.shape[1] for h in equivalent_channels}
    if len(cols) != 1:
        raise ShapeError(f"equivalent channels disagree on column count: {sorted(cols)}")
    return np.vstack([h for j, h in enumerate(equivalent_channels) if j != excluded_user])


def null_space_basis(stacked: np.ndarray, basis_width: int) -> np.ndarray:
    """The last ``basis_width`` right singular vectors of ``stacked``.

    These span the null space exactly when ``rank(stacked) <= cols - basis_width``;
    otherwise they span the least-interfering ``basis_width``-dimensional subspace.
    """
    cols = stacked.shape[1]
    if basis_width < 1 or basis_width > cols:
        raise ConfigurationError(
            f"cannot take {basis_width} right singular vectors of a matrix with {cols} columns")
    right = svd(stacked).right
    return right[:, cols - basis_width:]


def numerical_null_space(stacked: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the numerical null space (threshold ``RANK_TOL * sigma_max``)."""
    res = svd(stacked)
    s = res.singular_values
    rank = int(np.sum(s > RANK_TOL * s[0])) if s.size and s[0] > 0 else 0
    return res.right[:, rank:]


def bd_solve(equivalent_channels: Sequence[np.ndarray], config: SystemConfig,
             rank_revealing: bool = False) -> BdSolution:
    """BD digital precoders and fully-digital combiner targets.

    Parameters
    ----------
    equivalent_channels : sequence of np.ndarray
        ``H_u F_RF`` for every user (``N_U x UM``), or the raw channels
        ``H_u`` for the fully-digital reference.
    config : SystemConfig
        Supplies ``N_S`` and the basis width ``M``.
    rank_revealing : bool
        Use the full numerical null space of the complement instead of its
        last ``M`` right singular vectors.  The fully-digital reference uses
        this; the hybrid scheme keeps the fixed width ``M``.

    Raises
    ------
    DegenerateInputError
        If some user's effective channel has fewer than ``N_S`` significant
        singular values.
    """
    heqs = [np.asarray(h) for h in equivalent_channels]
    n_users = len(heqs)
    n_s = config.streams
    precoders, targets, svals, bases = [], [], [], []
    for u, h in enumerate(heqs):
        if n_users == 1:
            basis = np.eye(h.shape[1], dtype=complex)
        else:
            stacked = stack_complement(heqs, u)
            basis = (numerical_null_space(stacked) if rank_revealing
                     else null_space_basis(stacked, config.rf_chains))
        if basis.shape[1] < n_s:
            raise DegenerateInputError(
                f"user {u}: null space of dimension {basis.shape[1]} < {n_s} streams")
        eff = svd(h @ basis)
        s = eff.singular_values
        if s.size < n_s or s[0] == 0.0 or s[n_s - 1] < RANK_TOL * s[0]:
            raise DegenerateInputError(
                f"user {u}: effective channel has fewer than {n_s} significant singular values")
        precoders.append(basis @ eff.right[:, :n_s])
        targets.append(eff.left[:, :n_s])
        svals.append(s[:n_s].copy())
        bases.append(basis)
    return BdSolution(precoders, targets, svals, bases)


def normalize_power(analog: np.ndarray, digital: np.ndarray, config: SystemConfig) -> np.ndarray:
    """Scale ``digital`` so that ``||analog @ digital||_F^2 = U N_S``."""
    norm = np.linalg.norm(analog @ digital)
    if norm == 0.0:
        raise DegenerateInputError("hybrid precoder is zero; cannot normalize power")
    return np.sqrt(config.users * config.streams) * digital / norm


def interference_leakage(equivalent_channels: Sequence[np.ndarray],
                         digital_precoders: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix of ``||H_eq,u F_BB,j||_F / ||H_eq,u||_F`` (diagonal set to zero)."""
    n = len(equivalent_channels)
    out = np.zeros((n, n))
    for u, h in enumerate(equivalent_channels):
        hn = np.linalg.norm(h)
        for j, f in enumerate(digital_precoders):
            if j != u:
                out[u, j] = np.linalg.norm(h @ f) / hn
    return out
