"""Monte Carlo experiment orchestration.

A sweep is a grid of (sweep value, algorithm, trial index) work items.  The
trial seed is ``base_seed + trial_index``, so every algorithm sees the same
channel draw at a given sweep point and the results do not depend on how
work items are scheduled across processes.
"""

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channel import TrialStreams, generate_channels, write_channel_dump
from .complexity import cwap_aghc_count, pe_altmin_count
from .config import SystemConfig
from .errors import ConfigurationError, HybridPrecodingError
from .schemes import ALGORITHMS, run_algorithm

__all__ = [
    "SWEEP_AXES", "ExperimentConfig", "TrialRecord", "AggregateRow", "run_trial",
    "collect_trials", "aggregate", "run_sweep", "emit", "render", "format_number",
    "CSV_HEADER", "MAX_REDRAWS",
]

log = logging.getLogger(__name__)

# sweep axis name -> SystemConfig field
SWEEP_AXES = {"snr_db": "snr_db", "users": "users", "n_bs": "n_bs", "n_u": "n_u", "bits": "bits"}
MAX_REDRAWS = 3
CSV_HEADER = ("sweep_axis", "sweep_value", "algorithm", "mean_sum_rate_bps_hz", "stderr",
              "mean_iters_precoder", "mean_iters_combiner", "op_count", "trials")


@dataclass(frozen=True)
class ExperimentConfig:
    base: SystemConfig = field(default_factory=SystemConfig)
    sweep_axis: str = "snr_db"
    sweep_values: Tuple = (10.0,)
    algorithms: Tuple[str, ...] = ("cwap-aghc", "pe-altmin", "fully-digital")
    trials: int = 100
    base_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.sweep_axis not in SWEEP_AXES:
            raise ConfigurationError(
                f"unknown sweep axis {self.sweep_axis!r}; choose from {', '.join(SWEEP_AXES)}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be at least 1, got {self.trials}")
        if not self.sweep_values:
            raise ConfigurationError("sweep needs at least one value")
        if not self.algorithms:
            raise ConfigurationError("no algorithms selected")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ConfigurationError(
                    f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
        if self.base_seed < 0:
            raise ConfigurationError("base_seed must be non-negative")
        for value in self.sweep_values:
            self.point_config(value)  # validates every sweep point

    def point_config(self, value) -> SystemConfig:
        field_name = SWEEP_AXES[self.sweep_axis]
        if field_name != "snr_db":
            value = int(value)
        return self.base.replace(**{field_name: value})


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    sweep_value: float
    algorithm: str
    sum_rate: float
    per_user_rates: Tuple[float, ...]
    iters_precoder: float
    iters_combiner: float
    op_count: Optional[float]
    rejected: bool = False
    reason: str = ""
    attempt: int = 0


@dataclass
class AggregateRow:
    sweep_axis: str
    sweep_value: float
    algorithm: str
    mean_sum_rate: float
    stderr: float
    mean_iters_precoder: float
    mean_iters_combiner: float
    op_count: Optional[float]
    trials: int
    rejected: int = 0


def _op_count(algorithm: str, config: SystemConfig, iters_f: float, iters_w: float) -> Optional[float]:
    if algorithm == "cwap-aghc":
        return cwap_aghc_count(config, iters_w).total_count
    if algorithm.startswith("pe-altmin"):
        return pe_altmin_count(config, iters_f, iters_w).total_count
    return None


def run_trial(config: SystemConfig, algorithm: str, seed: int, trial_index: int = 0,
              sweep_value: float = float("nan"), dump_dir=None) -> TrialRecord:
    """Draw one channel realization and run ``algorithm`` on it.

    Degenerate draws are redrawn from ``(seed, attempt)`` substreams up to
    ``MAX_REDRAWS`` times before the trial is reported as rejected.
    """
    reason = ""
    for attempt in range(MAX_REDRAWS + 1):
        streams = TrialStreams(seed, config.users, attempt)
        realization = generate_channels(config, seed, attempt, streams=streams)
        try:
            out = run_algorithm(algorithm, realization.channels, config, streams)
        except (HybridPrecodingError, np.linalg.LinAlgError) as exc:
            reason = f"{type(exc).__name__}: {exc}"
            log.info("trial %d (seed %d, attempt %d) rejected for %s: %s",
                     trial_index, seed, attempt, algorithm, reason)
            continue
        if dump_dir is not None:
            path = Path(dump_dir) / f"channel_seed{seed}_attempt{attempt}.json"
            if not path.exists():
                write_channel_dump(realization, config, path)
        return TrialRecord(
            trial_index=trial_index, seed=seed, sweep_value=sweep_value, algorithm=algorithm,
            sum_rate=out.sum_rate, per_user_rates=tuple(out.per_user_rates),
            iters_precoder=out.iters_precoder, iters_combiner=out.iters_combiner,
            op_count=_op_count(algorithm, config, out.iters_precoder, out.iters_combiner),
            attempt=attempt)
    return TrialRecord(trial_index, seed, sweep_value, algorithm, float("nan"), (),
                       float("nan"), float("nan"), None, rejected=True, reason=reason,
                       attempt=MAX_REDRAWS)


def _run_item(item):
    config, algorithm, seed, index, value, dump_dir = item
    return run_trial(config, algorithm, seed, index, value, dump_dir)


def collect_trials(exp: ExperimentConfig, dump_dir=None) -> List[TrialRecord]:
    """Run every (sweep value, algorithm, trial) work item and return sorted records."""
    items = []
    for value in exp.sweep_values:
        cfg = exp.point_config(value)
        for algorithm in exp.algorithms:
            for index in range(exp.trials):
                items.append((cfg, algorithm, exp.base_seed + index, index, value, dump_dir))
    if exp.workers > 1:
        chunk = max(1, len(items) // (4 * exp.workers))
        with ProcessPoolExecutor(max_workers=exp.workers) as pool:
            records = list(pool.map(_run_item, items, chunksize=chunk))
    else:
        records = [_run_item(item) for item in items]
    records.sort(key=lambda r: (r.sweep_value, r.algorithm, r.trial_index))
    return records


def aggregate(records: Sequence[TrialRecord], exp: ExperimentConfig) -> List[AggregateRow]:
    """Mean and standard error per (sweep value, algorithm) over accepted trials."""
    rows = []
    for value in sorted(exp.sweep_values):
        cfg = exp.point_config(value)
        for algorithm in sorted(exp.algorithms):
            group = [r for r in records if r.sweep_value == value and r.algorithm == algorithm]
            ok = [r for r in group if not r.rejected]
            rejected = len(group) - len(ok)
            if not ok:
                rows.append(AggregateRow(exp.sweep_axis, value, algorithm, float("nan"),
                                         float("nan"), float("nan"), float("nan"), None, 0, rejected))
                continue
            rates = np.array([r.sum_rate for r in ok])
            stderr = float(np.std(rates, ddof=1) / math.sqrt(len(ok))) if len(ok) > 1 else 0.0
            it_f = float(np.mean([r.iters_precoder for r in ok]))
            it_w = float(np.mean([r.iters_combiner for r in ok]))
            rows.append(AggregateRow(exp.sweep_axis, value, algorithm, float(np.mean(rates)), stderr,
                                     it_f, it_w, _op_count(algorithm, cfg, it_f, it_w),
                                     len(ok), rejected))
    total = sum(r.trials + r.rejected for r in rows)
    n_rej = sum(r.rejected for r in rows)
    if n_rej:
        log.warning("%d of %d trials rejected (%.2f%%)", n_rej, total, 100.0 * n_rej / total)
    return rows


def run_sweep(exp: ExperimentConfig, dump_dir=None) -> List[AggregateRow]:
    return aggregate(collect_trials(exp, dump_dir), exp)


def format_number(x) -> str:
    """12 significant digits; integers without a decimal point; ``None`` as empty."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isfinite(x) and x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return f"{x:.12g}"


def _row_fields(row: AggregateRow) -> list:
    return [row.sweep_axis, format_number(row.sweep_value), row.algorithm,
            format_number(row.mean_sum_rate), format_number(row.stderr),
            format_number(row.mean_iters_precoder), format_number(row.mean_iters_combiner),
            format_number(row.op_count), format_number(row.trials)]


def _json_value(text: str):
    if text == "":
        return None
    value = float(text)
    if not math.isfinite(value):
        return text
    return int(value) if "." not in text and "e" not in text.lower() else value


def render(rows: Sequence[AggregateRow], fmt: str) -> str:
    if not rows:
        raise ConfigurationError("nothing to emit: no rows")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(_row_fields(row))
        return buf.getvalue()
    if fmt == "json":
        docs = []
        for row in rows:
            fields = _row_fields(row)
            doc = {}
            for key, text in zip(CSV_HEADER, fields):
                doc[key] = text if key in ("sweep_axis", "algorithm") else _json_value(text)
            docs.append(doc)
        return json.dumps(docs, indent=2) + "\n"
    raise ConfigurationError(f"unknown output format {fmt!r}")


def emit(rows: Sequence[AggregateRow], fmt: str, path) -> Path:
    """Write aggregate rows as CSV or JSON (same fields, 12 significant digits)."""
    text = render(rows, fmt)
    path = Path(path)
    path.write_text(text)
    return path
