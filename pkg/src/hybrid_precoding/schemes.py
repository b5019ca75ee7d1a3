"""End-to-end pipelines for the proposed scheme and the reference schemes.

Every pipeline takes the user channels of one trial and returns the
designed precoder, combiners, achieved rates and iteration counters.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .ag import ag_hybrid_combiner
from .baseline import fully_digital, pe_altmin_factorize, quantize_factorization
from .bd import bd_solve, interference_leakage, normalize_power
from .channel import TrialStreams
from .config import SystemConfig
from .cwap import cwap_analog_precoder, quantize_phases
from .rates import sum_rate_general

__all__ = [
    "ALGORITHMS", "SchemeOutput", "run_cwap_aghc", "run_pe_altmin",
    "run_fully_digital", "run_algorithm", "split_blocks",
]

ALGORITHMS = ("cwap-aghc", "pe-altmin", "pe-altmin-unq", "pe-altmin-su", "fully-digital")

# name -> (quantize analog matrices, digital update rule)
PE_VARIANTS = {
    "pe-altmin": (True, "ls"),
    "pe-altmin-unq": (False, "ls"),
    "pe-altmin-su": (True, "semi-unitary"),
}


@dataclass
class SchemeOutput:
    algorithm: str
    analog_precoder: np.ndarray
    digital_blocks: List[np.ndarray]
    combiners: List[Tuple[np.ndarray, Optional[np.ndarray]]]
    per_user_rates: List[float]
    iters_precoder: float = 0.0
    iters_combiner: float = 0.0
    per_user_combiner_iters: List[int] = field(default_factory=list)
    leakage: Optional[np.ndarray] = None

    @property
    def sum_rate(self) -> float:
        return float(sum(self.per_user_rates))

    @property
    def transmit_power(self) -> float:
        f = self.analog_precoder @ np.hstack(self.digital_blocks)
        return float(np.linalg.norm(f) ** 2)


def split_blocks(f_bb: np.ndarray, users: int) -> List[np.ndarray]:
    """Split a stacked digital precoder into per-user column blocks."""
    return np.hsplit(f_bb, users)


def run_cwap_aghc(channels, config: SystemConfig, streams: TrialStreams) -> SchemeOutput:
    """Column-wise analog precoding, BD digital precoding and AG hybrid combining."""
    f_rf = cwap_analog_precoder(channels, config)
    f_rf = quantize_phases(f_rf, config.bits, 1.0 / np.sqrt(config.n_bs))
    heqs = [h @ f_rf for h in channels]
    bd = bd_solve(heqs, config)
    f_bb = normalize_power(f_rf, bd.stacked_precoder, config)
    blocks = split_blocks(f_bb, config.users)

    combiners, iters = [], []
    for u, target in enumerate(bd.combiner_targets):
        comb = ag_hybrid_combiner(target, config, streams.combiner[u])
        w_rf = quantize_phases(comb.analog, config.bits, 1.0 / np.sqrt(config.n_u))
        combiners.append((w_rf, comb.digital))
        iters.append(comb.iterations_used)
    report = sum_rate_general(channels, f_rf, blocks, combiners, config)
    return SchemeOutput("cwap-aghc", f_rf, blocks, combiners, report.per_user_rates,
                        iters_precoder=0.0, iters_combiner=float(sum(iters)),
                        per_user_combiner_iters=iters,
                        leakage=interference_leakage(heqs, blocks))


def run_pe_altmin(channels, config: SystemConfig, streams: TrialStreams,
                  quantize: bool = True, digital_update: str = "ls",
                  name: str = None) -> SchemeOutput:
    """PE-AltMin factorization of the fully-digital BD precoder and combiners."""
    fd = fully_digital(channels, config)
    target = fd.stacked_precoder
    pre = pe_altmin_factorize(target, config.users * config.rf_chains, config,
                              streams.precoder, digital_update=digital_update)
    if quantize:
        pre = quantize_factorization(pre, target, config.bits, digital_update)
    f_bb = normalize_power(pre.analog, pre.digital, config)
    blocks = split_blocks(f_bb, config.users)

    combiners, iters = [], []
    for u, w_opt in enumerate(fd.combiners):
        comb = pe_altmin_factorize(w_opt, config.rf_chains, config, streams.combiner[u],
                                   digital_update=digital_update)
        w_rf = comb.analog
        if quantize:
            w_rf = quantize_phases(w_rf, config.bits, 1.0 / np.sqrt(config.n_u))
        combiners.append((w_rf, comb.digital))
        iters.append(comb.iterations)
    report = sum_rate_general(channels, pre.analog, blocks, combiners, config)
    if name is None:
        name = "pe-altmin" if quantize else "pe-altmin-unq"
    return SchemeOutput(name, pre.analog, blocks, combiners, report.per_user_rates,
                        iters_precoder=float(pre.iterations), iters_combiner=float(sum(iters)),
                        per_user_combiner_iters=iters)


def run_fully_digital(channels, config: SystemConfig, streams: TrialStreams = None) -> SchemeOutput:
    fd = fully_digital(channels, config)
    combiners = [(w, None) for w in fd.combiners]
    return SchemeOutput("fully-digital", np.eye(config.n_bs), fd.precoders, combiners,
                        fd.per_user_rates, leakage=interference_leakage(channels, fd.precoders))


def run_algorithm(name: str, channels, config: SystemConfig, streams: TrialStreams) -> SchemeOutput:
    if name == "cwap-aghc":
        return run_cwap_aghc(channels, config, streams)
    if name in PE_VARIANTS:
        quantize, update = PE_VARIANTS[name]
        return run_pe_altmin(channels, config, streams, quantize=quantize,
                             digital_update=update, name=name)
    if name == "fully-digital":
        return run_fully_digital(channels, config, streams)
    raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
