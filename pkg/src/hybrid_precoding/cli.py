"""Command-line entry point: ``hybrid-precoding [options]``.

Examples
--------
Single point at the default setting, 100 trials, CSV on stdout::

    hybrid-precoding

SNR sweep for two schemes, written to a JSON file::

    hybrid-precoding --nbs 64 --sweep snr_db=-10,0,10 \\
        --algorithms cwap-aghc,pe-altmin --format json --output rates.json

A config file holds ``key = value`` lines using the long flag names
(``nbs = 64``, ``sweep = users=2,4,6``); flags given on the command line win.
"""

import argparse
import logging
import sys
from pathlib import Path

from .config import SystemConfig
from .errors import HybridPrecodingError
from .harness import SWEEP_AXES, ExperimentConfig, collect_trials, aggregate, render
from .schemes import ALGORITHMS

__all__ = ["build_parser", "parse_config_file", "experiment_from_args", "main"]

DEFAULT_ALGORITHMS = "cwap-aghc,pe-altmin,fully-digital"

# flag dest -> SystemConfig field
_SYSTEM_FLAGS = {
    "snr": "snr_db", "users": "users", "nbs": "n_bs", "nu": "n_u", "rf_chains": "rf_chains",
    "streams": "streams", "bits": "bits", "paths": "n_paths",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hybrid-precoding",
        description="Monte Carlo sum-rate and complexity evaluation of multi-user hybrid precoding.")
    p.add_argument("--config", type=Path, help="flat key = value file; command-line flags override it")
    g = p.add_argument_group("system")
    g.add_argument("--snr", type=float, help="SNR in dB (default 10)")
    g.add_argument("--users", type=int, help="number of users U (default 4)")
    g.add_argument("--nbs", type=int, help="BS antennas N_BS (default 256)")
    g.add_argument("--nu", type=int, help="antennas per user N_U (default 16)")
    g.add_argument("--rf-chains", type=int, help="RF chains per user M (default 4)")
    g.add_argument("--streams", type=int, help="streams per user N_S (default 4)")
    g.add_argument("--bits", type=int, help="phase-shifter resolution B (default 3)")
    g.add_argument("--paths", type=int, help="propagation paths per user (default 5)")
    e = p.add_argument_group("experiment")
    e.add_argument("--trials", type=int, help="trials per sweep point (default 100)")
    e.add_argument("--seed", type=int, help="base seed; trial i uses seed+i (default 0)")
    e.add_argument("--algorithms", help=f"comma list from {', '.join(ALGORITHMS)} "
                                        f"(default {DEFAULT_ALGORITHMS})")
    e.add_argument("--sweep", help=f"AXIS=v1,v2,... with AXIS in {', '.join(SWEEP_AXES)}")
    e.add_argument("--workers", type=int, help="worker processes (default 1)")
    o = p.add_argument_group("output")
    o.add_argument("--output", type=Path, help="output file (default stdout)")
    o.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    o.add_argument("--dump-channels", type=Path, metavar="DIR",
                   help="write every drawn channel realization as JSON into DIR")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


_INT_KEYS = {"users", "nbs", "nu", "rf_chains", "streams", "bits", "paths", "trials", "seed", "workers"}
_FLOAT_KEYS = {"snr"}
_STR_KEYS = {"algorithms", "sweep", "format"}
_PATH_KEYS = {"output", "dump_channels"}


def parse_config_file(path: Path) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment; keys use flag names."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise HybridPrecodingError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise HybridPrecodingError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key in _STR_KEYS:
                values[key] = value
            elif key in _PATH_KEYS:
                values[key] = Path(value)
            else:
                raise HybridPrecodingError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise HybridPrecodingError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def _parse_sweep(text: str):
    if "=" not in text:
        raise HybridPrecodingError(f"--sweep expects AXIS=v1,v2,..., got {text!r}")
    axis, raw = text.split("=", 1)
    axis = axis.strip()
    if axis not in SWEEP_AXES:
        raise HybridPrecodingError(f"unknown sweep axis {axis!r}; choose from {', '.join(SWEEP_AXES)}")
    try:
        cast = float if axis == "snr_db" else int
        values = tuple(cast(v) for v in raw.split(",") if v.strip())
    except ValueError as exc:
        raise HybridPrecodingError(f"bad sweep values {raw!r}") from exc
    if not values:
        raise HybridPrecodingError("--sweep needs at least one value")
    return axis, values


def _merged(args: argparse.Namespace) -> dict:
    settings = parse_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key in ("config", "verbose") or value is None:
            continue
        settings[key] = value
    return settings


def experiment_from_args(args: argparse.Namespace) -> ExperimentConfig:
    s = _merged(args)
    base = SystemConfig(**{field: s[flag] for flag, field in _SYSTEM_FLAGS.items() if flag in s})
    if "sweep" in s:
        axis, values = _parse_sweep(s["sweep"])
    else:
        axis, values = "snr_db", (base.snr_db,)
    algorithms = tuple(a.strip() for a in s.get("algorithms", DEFAULT_ALGORITHMS).split(",") if a.strip())
    return ExperimentConfig(base=base, sweep_axis=axis, sweep_values=values, algorithms=algorithms,
                            trials=s.get("trials", 100), base_seed=s.get("seed", 0),
                            workers=s.get("workers", 1))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else (logging.INFO if args.verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        exp = experiment_from_args(args)
        s = _merged(args)
        fmt = s.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise HybridPrecodingError(f"unknown format {fmt!r}")
        dump_dir = s.get("dump_channels")
        if dump_dir is not None:
            Path(dump_dir).mkdir(parents=True, exist_ok=True)
        records = collect_trials(exp, dump_dir)
        rows = aggregate(records, exp)
        text = render(rows, fmt)
        output = s.get("output")
        if output is None:
            sys.stdout.write(text)
        else:
            Path(output).write_text(text)
        n_rej = sum(r.rejected for r in rows)
        total = n_rej + sum(r.trials for r in rows)
        if n_rej:
            print(f"rejected {n_rej} of {total} trials", file=sys.stderr)
    except (HybridPrecodingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
