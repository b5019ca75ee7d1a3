"""Adaptive-gradient (AG) hybrid combining.

Given a fully-digital combiner target ``W_opt`` (``N_U x N_S``), find a
constant-modulus analog combiner ``W_RF`` (``N_U x M``) and a digital
combiner ``W_BB`` (``M x N_S``) minimizing ``||W_opt - W_RF W_BB||_F^2``.

With ``x = vec(W_RF)``, ``y = vec(W_opt)`` and ``A = W_BB^T kron I`` the
objective is ``||y - A x||^2``.  Every coordinate of ``x`` takes an
AdaGrad-style step along its Wirtinger gradient, is projected back onto
the circle of radius ``1/sqrt(N_U)``, and ``W_BB`` is then refreshed by
least squares.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .config import SystemConfig
from .errors import DegenerateInputError, RankDeficiencyError
from .numerics import RANK_TOL, unvec, vec

__all__ = [
    "AgState", "HybridCombiner", "ls_digital_combiner", "combiner_system",
    "ag_gradient", "ag_gradients", "ag_step", "project_modulus",
    "ag_hybrid_combiner", "random_phase_matrix",
]

MAX_REINIT = 3


@dataclass
class AgState:
    x: np.ndarray
    gradient_energy: np.ndarray
    iteration: int = 0

    @classmethod
    def start(cls, w_rf: np.ndarray) -> "AgState":
        x = vec(w_rf).astype(complex)
        return cls(x=x, gradient_energy=np.zeros(x.size), iteration=0)


@dataclass
class HybridCombiner:
    analog: np.ndarray
    digital: np.ndarray
    target: np.ndarray
    iterations_used: int
    final_residual: float
    initial_residual: float = float("nan")
    history: list = field(default_factory=list)

    @property
    def combiner(self) -> np.ndarray:
        return self.analog @ self.digital


def ls_digital_combiner(w_rf: np.ndarray, w_opt: np.ndarray) -> np.ndarray:
    """Least-squares ``W_BB = (W_RF^H W_RF)^{-1} W_RF^H W_opt``."""
    s = np.linalg.svd(w_rf, compute_uv=False)
    if w_rf.shape[0] < w_rf.shape[1] or s[0] == 0.0 or s[-1] < RANK_TOL * s[0]:
        raise RankDeficiencyError("analog combiner does not have full column rank")
    gram = w_rf.conj().T @ w_rf
    return np.linalg.solve(gram, w_rf.conj().T @ w_opt)


def combiner_system(w_bb: np.ndarray, n_u: int) -> np.ndarray:
    """The matrix ``A = W_BB^T kron I_{N_U}`` of the vectorized objective."""
    return np.kron(w_bb.T, np.eye(n_u))


def ag_gradient(a: np.ndarray, x: np.ndarray, y: np.ndarray, k: int) -> complex:
    """Wirtinger derivative ``-2 A[:, k]^H (y - A x)`` for coordinate ``k``."""
    return complex(-2.0 * np.vdot(a[:, k], y - a @ x))


def ag_gradients(w_rf: np.ndarray, w_bb: np.ndarray, w_opt: np.ndarray) -> np.ndarray:
    """All coordinate derivatives at once, ``-2 A^H (y - A x)``.

    Uses ``A^H vec(R) = vec(R W_BB^H)`` to avoid building the Kronecker
    product.
    """
    residual = w_opt - w_rf @ w_bb
    return vec(-2.0 * residual @ w_bb.conj().T)


def project_modulus(x: np.ndarray, n_u: int) -> np.ndarray:
    """Map each entry onto ``exp(j angle(x)) / sqrt(N_U)``."""
    return np.exp(1j * np.angle(x)) / np.sqrt(n_u)


def ag_step(state: AgState, gradients: np.ndarray, alpha: float, epsilon: float,
            n_u: int) -> AgState:
    """One accumulated-gradient step on every coordinate, then modulus projection.

    All coordinates use the gradients evaluated at the start of the
    iteration.
    """
    energy = state.gradient_energy + np.abs(gradients) ** 2
    x = state.x - alpha / np.sqrt(energy + epsilon) * gradients
    return AgState(x=project_modulus(x, n_u), gradient_energy=energy,
                   iteration=state.iteration + 1)


def random_phase_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=(rows, cols))) / np.sqrt(rows)


def _residual(w_opt, w_rf, w_bb) -> float:
    return float(np.linalg.norm(w_opt - w_rf @ w_bb) ** 2)


def ag_hybrid_combiner(w_opt: np.ndarray, config: SystemConfig, rng: np.random.Generator,
                       initial_analog: Optional[np.ndarray] = None,
                       callback: Optional[Callable[[AgState, np.ndarray], None]] = None,
                       record_history: bool = False) -> HybridCombiner:
    """Run the AG loop for one user (unquantized output).

    Parameters
    ----------
    w_opt : np.ndarray
        Fully-digital combiner target, ``N_U x N_S``.
    config : SystemConfig
        Supplies ``M``, ``alpha``, ``epsilon``, ``T`` and ``delta``.
    rng : np.random.Generator
        Source of the random initial phases.
    initial_analog : np.ndarray, optional
        Start from this analog combiner instead of random phases.
    callback : callable, optional
        Called as ``callback(state, w_bb)`` after every update.
    """
    n_u = w_opt.shape[0]
    m = config.rf_chains
    for _ in range(MAX_REINIT + 1):
        w_rf = initial_analog if initial_analog is not None else random_phase_matrix(rng, n_u, m)
        try:
            w_bb = ls_digital_combiner(w_rf, w_opt)
            break
        except RankDeficiencyError:
            if initial_analog is not None:
                raise
    else:
        raise DegenerateInputError("analog combiner stayed rank deficient after re-initialization")

    state = AgState.start(w_rf)
    residual = _residual(w_opt, w_rf, w_bb)
    initial = residual
    history = [residual] if record_history else []
    for _ in range(config.max_iters):
        if residual <= config.stop_delta:
            break
        grads = ag_gradients(w_rf, w_bb, w_opt)
        state = ag_step(state, grads, config.ag_alpha, config.ag_epsilon, n_u)
        w_rf = unvec(state.x, n_u, m)
        w_bb = ls_digital_combiner(w_rf, w_opt)
        residual = _residual(w_opt, w_rf, w_bb)
        if record_history:
            history.append(residual)
        if callback is not None:
            callback(state, w_bb)
    return HybridCombiner(analog=w_rf, digital=w_bb, target=w_opt,
                          iterations_used=state.iteration, final_residual=residual,
                          initial_residual=initial, history=history)
