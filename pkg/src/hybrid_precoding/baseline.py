"""Reference schemes: fully-digital BD and phase-extraction AltMin (PE-AltMin)."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .bd import BdSolution, bd_solve
from .config import SystemConfig
from .cwap import quantize_phases
from .errors import ShapeError
from .rates import user_rate_bd

__all__ = [
    "FullyDigitalSolution", "fully_digital", "PeAltMinResult",
    "pe_altmin_factorize", "procrustes_digital", "ls_digital", "phase_extraction",
    "quantize_factorization", "DIGITAL_UPDATES",
]


@dataclass
class FullyDigitalSolution:
    precoders: List[np.ndarray]
    combiners: List[np.ndarray]
    singular_values: List[np.ndarray]
    per_user_rates: List[float]
    bd: BdSolution

    @property
    def sum_rate(self) -> float:
        return float(sum(self.per_user_rates))

    @property
    def stacked_precoder(self) -> np.ndarray:
        return np.hstack(self.precoders)


def fully_digital(channels, config: SystemConfig) -> FullyDigitalSolution:
    """Unconstrained BD precoding/combining directly on the ``N_U x N_BS`` channels.

    Each user's precoder lives in the full numerical null space of the
    other users' channels, so inter-user interference is exactly zero.
    """
    if config.users * config.streams > config.n_bs:
        raise ShapeError("fully-digital BD needs U*N_S <= N_BS")
    sol = bd_solve(channels, config, rank_revealing=True)
    f = sol.stacked_precoder
    scale = np.sqrt(config.users * config.streams) / np.linalg.norm(f)
    precoders = [scale * p for p in sol.digital_precoders]
    # precoder columns are orthonormal, so the scale is 1 up to rounding and
    # the effective singular values carry over unchanged
    svals = [scale * s for s in sol.effective_singular_values]
    rates = [user_rate_bd(s, config) for s in svals]
    return FullyDigitalSolution(precoders, sol.combiner_targets, svals, rates, sol)


@dataclass
class PeAltMinResult:
    analog: np.ndarray
    digital: np.ndarray
    iterations: int
    final_distance: float
    objective_history: List[float] = field(default_factory=list)


def phase_extraction(target: np.ndarray, digital: np.ndarray, magnitude: float) -> np.ndarray:
    """Constant-modulus matrix with the entry-wise phases of ``target @ digital^H``."""
    corr = target @ digital.conj().T
    phase = np.where(np.abs(corr) > 0.0, np.angle(corr), 0.0)
    return magnitude * np.exp(1j * phase)


def procrustes_digital(analog: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Semi-unitary ``D`` maximizing ``Re tr(D^H A^H T)``: ``D = U V^H`` from ``A^H T = U S V^H``."""
    u, _, vh = np.linalg.svd(analog.conj().T @ target, full_matrices=False)
    return u @ vh


def _pe_objective(target, analog, digital) -> float:
    # ||T D^H - A||^2: equals ||T - A D||^2 when D is square unitary and is
    # minimized exactly by both block updates of the semi-unitary variant
    return float(np.linalg.norm(target @ digital.conj().T - analog) ** 2)


def ls_digital(analog: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Least-squares ``D = (A^H A)^{-1} A^H T``."""
    return np.linalg.lstsq(analog, target, rcond=None)[0]


DIGITAL_UPDATES = {"ls": ls_digital, "semi-unitary": procrustes_digital}


def pe_altmin_factorize(target: np.ndarray, n_rf: int, config: SystemConfig,
                        rng: np.random.Generator, tol: Optional[float] = None,
                        initial_analog: Optional[np.ndarray] = None,
                        digital_update: str = "ls", stop_rule: str = "distance") -> PeAltMinResult:
    """Factor ``target`` (``N x K``) as constant-modulus ``A`` (``N x n_rf``) times ``D``.

    Starting from random analog phases, alternates a digital update with
    the phase-extraction analog update ``A = exp(j angle(T D^H)) / sqrt(N)``
    for at most ``config.max_iters`` iterations.  With
    ``stop_rule="distance"`` the loop ends once the tracked objective is at
    most ``tol`` (default ``config.stop_delta``); with ``stop_rule="change"``
    it ends once the objective changes by less than ``tol``.

    ``digital_update="ls"`` uses the least-squares digital factor and tracks
    ``||T - A D||_F^2``.  ``digital_update="semi-unitary"`` constrains ``D``
    to orthonormal columns and tracks ``||T D^H - A||_F^2``, which both
    updates then minimize exactly, so its history is non-increasing.
    Power scaling of ``D`` is left to the caller.
    """
    n, k = target.shape
    if n_rf < k:
        raise ShapeError(f"need n_rf >= {k} columns, got {n_rf}")
    if n_rf > n:
        raise ShapeError(f"need n_rf <= {n} rows, got {n_rf}")
    try:
        update = DIGITAL_UPDATES[digital_update]
    except KeyError:
        raise ValueError(f"unknown digital update {digital_update!r}") from None
    if stop_rule not in ("distance", "change"):
        raise ValueError(f"unknown stop rule {stop_rule!r}")
    if digital_update == "ls":
        objective = lambda a, d: float(np.linalg.norm(target - a @ d) ** 2)
    else:
        objective = lambda a, d: _pe_objective(target, a, d)
    tol = config.stop_delta if tol is None else tol
    magnitude = 1.0 / np.sqrt(n)
    if initial_analog is None:
        analog = magnitude * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=(n, n_rf)))
    else:
        analog = np.asarray(initial_analog, dtype=complex)
    digital = update(analog, target)
    history = [objective(analog, digital)]
    iterations = 0
    while iterations < config.max_iters:
        if stop_rule == "distance" and history[-1] <= tol:
            break
        analog = phase_extraction(target, digital, magnitude)
        digital = update(analog, target)
        iterations += 1
        history.append(objective(analog, digital))
        if stop_rule == "change" and abs(history[-2] - history[-1]) < tol:
            break
    distance = float(np.linalg.norm(target - analog @ digital))
    return PeAltMinResult(analog, digital, iterations, distance, history)


def quantize_factorization(result: PeAltMinResult, target: np.ndarray, bits: int,
                           digital_update: str = "ls") -> PeAltMinResult:
    """Quantize the analog factor and refit the digital factor to it."""
    n = target.shape[0]
    analog = quantize_phases(result.analog, bits, 1.0 / np.sqrt(n))
    digital = DIGITAL_UPDATES[digital_update](analog, target)
    distance = float(np.linalg.norm(target - analog @ digital))
    return PeAltMinResult(analog, digital, result.iterations, distance,
                          list(result.objective_history))
