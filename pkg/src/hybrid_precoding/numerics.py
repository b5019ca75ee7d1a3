"""Linear-algebra conventions used throughout the package.

All matrices are complex ``numpy`` arrays.  Vectorization is column-major
(``order="F"``) so that ``vec(X @ B) == kron(B.T, I) @ vec(X)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateInputError, InvalidInputError,
                     RankDeficiencyError, ShapeError)

__all__ = [
    "SvdResult", "svd", "dominant_right_singular_vector", "fix_phase",
    "pseudo_inverse", "hermitian_inverse", "vec", "unvec", "kron",
    "log2det_hermitian", "RANK_TOL", "PHASE_TOL",
]

# relative threshold on sigma_min / sigma_max below which a matrix is rank deficient
RANK_TOL = 1e-12
# entries below this magnitude carry no phase information
PHASE_TOL = 1e-12


@dataclass(frozen=True)
class SvdResult:
    """Full singular value decomposition ``A = left @ diag(s) @ right^H``.

    ``right`` holds right singular vectors as *columns* (it is ``V``, not
    ``V^H``).  Singular values are non-increasing.
    """
    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        k = self.singular_values.size
        return (self.left[:, :k] * self.singular_values) @ self.right[:, :k].conj().T


def _as_finite(a, name="input") -> np.ndarray:
    arr = np.asarray(a)
    if arr.size == 0:
        raise InvalidInputError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains NaN or Inf entries")
    return arr


def svd(a) -> SvdResult:
    """Full SVD of a finite, non-empty matrix."""
    a = _as_finite(a)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {a.shape}")
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    return SvdResult(left=u, singular_values=s, right=vh.conj().T)


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its first entry with magnitude above ``PHASE_TOL`` is real and >= 0."""
    v = np.asarray(v)
    idx = np.flatnonzero(np.abs(v) > PHASE_TOL)
    if idx.size == 0:
        return v.copy()
    lead = v[idx[0]]
    return v * (np.conj(lead) / np.abs(lead))


def dominant_right_singular_vector(a) -> np.ndarray:
    """Unit right singular vector for the largest singular value of ``a``.

    The global phase is fixed with :func:`fix_phase` so the output is
    reproducible.
    """
    a = _as_finite(a)
    if a.ndim == 1:
        a = a[np.newaxis, :]
    _, s, vh = np.linalg.svd(a, full_matrices=False)
    if s[0] == 0.0:
        raise DegenerateInputError("zero matrix has no dominant singular vector")
    return fix_phase(vh[0].conj())


def pseudo_inverse(w) -> np.ndarray:
    """Left pseudo-inverse ``(W^H W)^{-1} W^H`` of a full-column-rank matrix."""
    w = _as_finite(w)
    if w.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {w.shape}")
    rows, cols = w.shape
    if rows < cols:
        raise RankDeficiencyError(f"{rows}x{cols} matrix cannot have full column rank")
    s = np.linalg.svd(w, compute_uv=False)
    if s[0] == 0.0 or s[-1] < RANK_TOL * s[0]:
        raise RankDeficiencyError(
            f"matrix is rank deficient (sigma_min/sigma_max = {s[-1] / s[0] if s[0] else 0.0:.3e})")
    wh = w.conj().T
    return np.linalg.solve(wh @ w, wh)


def hermitian_inverse(q, atol: float = 1e-10) -> np.ndarray:
    """Inverse of a Hermitian positive-definite matrix (here always ``I + PSD``)."""
    q = _as_finite(q)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {q.shape}")
    scale = max(1.0, float(np.max(np.abs(q))))
    if np.max(np.abs(q - q.conj().T)) > atol * scale:
        raise InvalidInputError("matrix is not Hermitian")
    inv = np.linalg.solve(q, np.eye(q.shape[0], dtype=np.result_type(q, complex)))
    return 0.5 * (inv + inv.conj().T)


def vec(a) -> np.ndarray:
    """Stack the columns of ``a`` into one vector."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ShapeError(f"vec expects a 2-D matrix, got shape {a.shape}")
    return a.reshape(-1, order="F")


def unvec(x, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    x = np.asarray(x)
    if x.ndim != 1 or x.size != rows * cols:
        raise ShapeError(f"cannot reshape vector of shape {x.shape} to {rows}x{cols}")
    return x.reshape((rows, cols), order="F")


def kron(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError("kron expects two 2-D matrices")
    return np.kron(a, b)


def log2det_hermitian(a) -> float:
    """``log2 det(a)`` for Hermitian positive-definite ``a`` via its eigenvalues."""
    a = np.asarray(a)
    herm = 0.5 * (a + a.conj().T)
    eig = np.linalg.eigvalsh(herm)
    if eig[0] <= 0.0:
        raise np.linalg.LinAlgError(
            f"matrix is not positive definite (min eigenvalue {eig[0]:.3e})")
    return float(np.sum(np.log2(eig)))
