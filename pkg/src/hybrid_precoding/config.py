"""System parameters for the multi-user hybrid precoding simulation."""

from dataclasses import asdict, dataclass, fields, replace

from .errors import ConfigurationError

__all__ = ["SystemConfig"]


@dataclass(frozen=True)
class SystemConfig:
    """Scalar parameters of one simulated system.

    Defaults follow the reference setting: 256 BS antennas, 4 users with 16
    antennas each, 4 RF chains and 4 streams per user, 5 propagation paths,
    3-bit phase shifters and SNR 10 dB.

    The SNR is ``rho / sigma_sq`` with ``sigma_sq = 1``, so
    ``rho = 10 ** (snr_db / 10)``.
    """
    n_bs: int = 256
    n_u: int = 16
    users: int = 4
    rf_chains: int = 4
    streams: int = 4
    snr_db: float = 10.0
    sigma_sq: float = 1.0
    c: float = 1.0
    bits: int = 3
    n_paths: int = 5
    ag_alpha: float = 0.9
    ag_epsilon: float = 1e-6
    max_iters: int = 200
    stop_delta: float = 1e-2

    def __post_init__(self):
        for name in ("n_bs", "n_u", "users", "rf_chains", "streams", "bits",
                     "n_paths", "max_iters"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
        for name in ("sigma_sq", "c", "ag_alpha", "ag_epsilon", "stop_delta"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.rf_chains >= self.streams:
            raise ConfigurationError(
                f"need rf_chains >= streams, got M={self.rf_chains}, N_S={self.streams}")
        if self.users * self.rf_chains > self.n_bs:
            raise ConfigurationError(
                f"need users*rf_chains <= n_bs, got {self.users}*{self.rf_chains} > {self.n_bs}")
        if self.n_u < self.rf_chains:
            raise ConfigurationError(
                f"need n_u >= rf_chains, got N_U={self.n_u}, M={self.rf_chains}")

    @property
    def rho(self) -> float:
        """Average transmit power (linear)."""
        return 10.0 ** (self.snr_db / 10.0)

    @property
    def snr_scale(self) -> float:
        """Per-stream SNR factor ``rho / (sigma^2 U N_S)``."""
        return self.rho / (self.sigma_sq * self.users * self.streams)

    def replace(self, **changes) -> "SystemConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {sorted(unknown)}")
        return cls(**data)
