"""Multi-user mmWave hybrid precoding: column-wise analog precoding with
block-diagonal digital precoding and adaptive-gradient hybrid combining,
plus the PE-AltMin and fully-digital reference schemes.
"""

from .bd import bd_solve, normalize_power
from .baseline import fully_digital, pe_altmin_factorize
from .channel import generate_channels, read_channel_dump, write_channel_dump
from .complexity import cwap_aghc_count, f_inv, pe_altmin_count
from .config import SystemConfig
from .cwap import cwap_analog_precoder, cwap_precoder, next_column, q_update, quantize_phases
from .ag import ag_hybrid_combiner
from .errors import (ConfigurationError, DegenerateInputError, EmptyComplementError,
                     HybridPrecodingError, InvalidInputError, RankDeficiencyError, ShapeError)
from .harness import ExperimentConfig, emit, run_sweep, run_trial
from .rates import sum_rate_general, user_rate_bd, user_rate_general
from .schemes import ALGORITHMS, run_algorithm

__version__ = "0.1.0"

__all__ = [
    "bd_solve",
    "normalize_power",
    "fully_digital",
    "pe_altmin_factorize",
    "generate_channels",
    "read_channel_dump",
    "write_channel_dump",
    "cwap_aghc_count",
    "f_inv",
    "pe_altmin_count",
    "SystemConfig",
    "cwap_analog_precoder",
    "cwap_precoder",
    "next_column",
    "q_update",
    "quantize_phases",
    "ag_hybrid_combiner",
    "ConfigurationError",
    "DegenerateInputError",
    "EmptyComplementError",
    "HybridPrecodingError",
    "InvalidInputError",
    "RankDeficiencyError",
    "ShapeError",
    "ExperimentConfig",
    "emit",
    "run_sweep",
    "run_trial",
    "sum_rate_general",
    "user_rate_bd",
    "user_rate_general",
    "ALGORITHMS",
    "run_algorithm",
]
