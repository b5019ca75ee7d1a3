"""Closed-form counts of complex multiplications and divisions.

Counts are analytic functions of the system dimensions and of measured
average iteration numbers; nothing is instrumented at the level of
individual multiplies.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .config import SystemConfig

__all__ = [
    "OpCountReport", "f_inv", "pe_altmin_count", "cwap_aghc_count",
    "cwap_fixed_cost", "IterationCapture", "live_iteration_capture",
]


@dataclass(frozen=True)
class OpCountReport:
    scheme: str
    n_iter_f: float
    n_iter_w: float
    total_count: float


def f_inv(n: float) -> float:
    """Multiplications/divisions to invert an ``n x n`` matrix by row reduction."""
    return (n ** 3 - n ** 2 + n) / 3.0


def pe_altmin_count(config: SystemConfig, n_iter_f: float, n_iter_w: float) -> OpCountReport:
    n_bs, n_u, u, m, n_s = config.n_bs, config.n_u, config.users, config.rf_chains, config.streams
    per_f = 2 * n_bs * u ** 2 * m * n_s + n_bs * u * m + u ** 3 * m * n_s ** 2
    per_w = 2 * n_u * m * n_s + n_u * m + m * n_s ** 2
    return OpCountReport("pe-altmin", n_iter_f, n_iter_w, n_iter_f * per_f + n_iter_w * per_w)


def cwap_fixed_cost(config: SystemConfig) -> float:
    """Analog-precoding part of the CWAP-AGHC count (all users, no iterations)."""
    n_bs, n_u, m = config.n_bs, config.n_u, config.rf_chains
    per_user = (m * (m - 1) / 2 * n_bs * n_u
                + m * (m - 1) * (2 * m - 1) / 6 * n_u ** 2
                + n_bs * n_u ** 2 + n_bs ** 2 * n_u + f_inv(n_u) + 2 * n_u)
    return config.users * per_user


def cwap_aghc_count(config: SystemConfig, n_iter_ag: float) -> OpCountReport:
    """Count for the proposed scheme; ``n_iter_ag`` is summed over all users."""
    n_u, m, n_s = config.n_u, config.rf_chains, config.streams
    per_iter = 2 * n_u ** 2 * m * n_s + 5 * n_u * m + 2 * n_u * m ** 2 + n_u * m * n_s + f_inv(m)
    return OpCountReport("cwap-aghc", 0.0, n_iter_ag, cwap_fixed_cost(config) + n_iter_ag * per_iter)


@dataclass(frozen=True)
class IterationCapture:
    scheme: str
    samples: int
    mean_iter_f: float
    mean_iter_w: float
    max_iter_f: float
    max_iter_w: float

    def op_count(self, config: SystemConfig) -> Optional[OpCountReport]:
        if self.scheme == "cwap-aghc":
            return cwap_aghc_count(config, self.mean_iter_w)
        if self.scheme.startswith("pe-altmin"):
            return pe_altmin_count(config, self.mean_iter_f, self.mean_iter_w)
        return None


def live_iteration_capture(records: Iterable, scheme: str) -> IterationCapture:
    """Average the iteration counters recorded by instrumented trial runs.

    ``records`` are :class:`~hybrid_precoding.harness.TrialRecord` objects;
    rejected trials and other schemes are skipped.
    """
    f_iters, w_iters = [], []
    for r in records:
        if r.algorithm != scheme or r.rejected:
            continue
        f_iters.append(r.iters_precoder)
        w_iters.append(r.iters_combiner)
    if not f_iters:
        return IterationCapture(scheme, 0, float("nan"), float("nan"), float("nan"), float("nan"))
    return IterationCapture(scheme, len(f_iters), float(np.mean(f_iters)), float(np.mean(w_iters)),
                            float(np.max(f_iters)), float(np.max(w_iters)))
