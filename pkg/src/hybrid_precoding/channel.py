"""Narrowband Saleh-Valenzuela mmWave channel with UPA antenna arrays.

Each user channel is a sum of ``n_paths`` rank-one terms built from UPA
steering vectors at the BS (departure) and at the user (arrival).
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .config import SystemConfig
from .errors import ConfigurationError, ShapeError

__all__ = [
    "UpaGeometry", "PathParams", "ChannelRealization", "TrialStreams",
    "upa_response", "draw_paths", "assemble_channel", "generate_channels",
    "write_channel_dump", "read_channel_dump",
]


@dataclass(frozen=True)
class UpaGeometry:
    """Planar array with ``n_y`` elements along y and ``n_z`` along z."""
    n_y: int
    n_z: int

    def __post_init__(self):
        if self.n_y < 1 or self.n_z < 1:
            raise ConfigurationError(f"invalid UPA geometry {self.n_y}x{self.n_z}")

    @property
    def size(self) -> int:
        return self.n_y * self.n_z

    @classmethod
    def for_count(cls, n: int) -> "UpaGeometry":
        """Near-square panel for ``n`` antennas.

        ``n_z`` is the largest divisor of ``n`` not exceeding ``sqrt(n)``, so
        for ``n = 2**k`` this gives ``n_y = 2**ceil(k/2)``, ``n_z = 2**floor(k/2)``.
        """
        if n < 1:
            raise ConfigurationError(f"antenna count must be positive, got {n}")
        n_z = max(d for d in range(1, math.isqrt(n) + 1) if n % d == 0)
        return cls(n_y=n // n_z, n_z=n_z)


@dataclass(frozen=True)
class PathParams:
    """One propagation path: complex gain plus departure/arrival angles (radians)."""
    gain: complex
    aod_azimuth: float
    aod_elevation: float
    aoa_azimuth: float
    aoa_elevation: float


@dataclass
class ChannelRealization:
    channels: List[np.ndarray]
    paths: List[List[PathParams]]
    seed: int
    attempt: int = 0


class TrialStreams:
    """Independent random streams for one trial, derived from its seed.

    The channel of user ``u`` and the combiner initialization of user ``u``
    each get their own stream, so results do not depend on the order in
    which users or algorithms are processed.
    """

    def __init__(self, seed: int, users: int, attempt: int = 0):
        root = np.random.SeedSequence([int(seed), int(attempt)])
        channel_ss, combiner_ss, precoder_ss = root.spawn(3)
        self.channel = [np.random.default_rng(s) for s in channel_ss.spawn(users)]
        self.combiner = [np.random.default_rng(s) for s in combiner_ss.spawn(users)]
        self.precoder = np.random.default_rng(precoder_ss)


def upa_response(geom: UpaGeometry, azimuth: float, elevation: float) -> np.ndarray:
    """Unit-norm UPA steering vector with half-wavelength spacing.

    The entry for element ``(i_y, i_z)`` sits at index ``i_y * n_z + i_z``
    and equals ``exp(j*pi*(i_y sin(az) sin(el) + i_z cos(el))) / sqrt(n_y n_z)``.
    """
    i_y = np.arange(geom.n_y)
    i_z = np.arange(geom.n_z)
    a_y = np.exp(1j * np.pi * i_y * np.sin(azimuth) * np.sin(elevation))
    a_z = np.exp(1j * np.pi * i_z * np.cos(elevation))
    return np.kron(a_y, a_z) / np.sqrt(geom.size)


def draw_paths(rng: np.random.Generator, n_p: int) -> List[PathParams]:
    """Draw ``n_p`` paths: CN(0, 1) gains, azimuths on [0, 2pi), elevations on [0, pi)."""
    if n_p < 1:
        raise ConfigurationError(f"need at least one path, got {n_p}")
    gains = (rng.standard_normal(n_p) + 1j * rng.standard_normal(n_p)) / np.sqrt(2.0)
    aod_az = rng.uniform(0.0, 2.0 * np.pi, n_p)
    aod_el = rng.uniform(0.0, np.pi, n_p)
    aoa_az = rng.uniform(0.0, 2.0 * np.pi, n_p)
    aoa_el = rng.uniform(0.0, np.pi, n_p)
    return [PathParams(complex(gains[l]), float(aod_az[l]), float(aod_el[l]),
                       float(aoa_az[l]), float(aoa_el[l])) for l in range(n_p)]


def assemble_channel(paths: Sequence[PathParams], tx_geom: UpaGeometry,
                     rx_geom: UpaGeometry) -> np.ndarray:
    """Build the ``N_U x N_BS`` channel matrix from a list of paths."""
    if len(paths) == 0:
        raise ShapeError("channel needs at least one path")
    n_bs, n_u = tx_geom.size, rx_geom.size
    h = np.zeros((n_u, n_bs), dtype=complex)
    for p in paths:
        a_r = upa_response(rx_geom, p.aoa_azimuth, p.aoa_elevation)
        a_t = upa_response(tx_geom, p.aod_azimuth, p.aod_elevation)
        h += p.gain * np.outer(a_r, a_t.conj())
    return np.sqrt(n_bs * n_u / len(paths)) * h


def generate_channels(config: SystemConfig, seed: int, attempt: int = 0,
                      streams: TrialStreams = None) -> ChannelRealization:
    """Draw all user channels of one trial."""
    if streams is None:
        streams = TrialStreams(seed, config.users, attempt)
    tx = UpaGeometry.for_count(config.n_bs)
    rx = UpaGeometry.for_count(config.n_u)
    paths = [draw_paths(rng, config.n_paths) for rng in streams.channel]
    channels = [assemble_channel(p, tx, rx) for p in paths]
    return ChannelRealization(channels=channels, paths=paths, seed=seed, attempt=attempt)


def write_channel_dump(realization: ChannelRealization, config: SystemConfig, path) -> Path:
    """Write seed, config and per-user channels as JSON.

    Matrices are stored column-major as a list of ``[re, im]`` pairs.
    """
    path = Path(path)
    users = []
    for h in realization.channels:
        flat = h.reshape(-1, order="F")
        users.append({
            "rows": h.shape[0],
            "cols": h.shape[1],
            "entries": [[float(z.real), float(z.imag)] for z in flat],
        })
    doc = {
        "seed": realization.seed,
        "attempt": realization.attempt,
        "config": config.to_dict(),
        "users": users,
    }
    path.write_text(json.dumps(doc, indent=1))
    return path


def read_channel_dump(path):
    """Inverse of :func:`write_channel_dump`; returns ``(seed, config, channels)``."""
    doc = json.loads(Path(path).read_text())
    channels = []
    for user in doc["users"]:
        pairs = np.asarray(user["entries"], dtype=float)
        flat = pairs[:, 0] + 1j * pairs[:, 1]
        channels.append(flat.reshape((user["rows"], user["cols"]), order="F"))
    return doc["seed"], SystemConfig.from_dict(doc["config"]), channels
