"""Problem inputs shared by the NOMA and OMA solvers."""

import math
from dataclasses import dataclass


class InfeasibleError(ValueError):
    """The throughput floor of user 2 cannot be met with the available budget."""


@dataclass(frozen=True)
class ChannelPair:
    """Channel amplitudes ``|h1| >= |h2|`` and per-user noise powers (linear)."""

    h1_gain: float
    h2_gain: float
    noise1: float = 1.0
    noise2: float = 1.0

    def __post_init__(self):
        for name in ("h1_gain", "h2_gain", "noise1", "noise2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.h1_gain < self.h2_gain:
            raise ValueError(
                f"user 1 must be the stronger user: h1_gain={self.h1_gain} < h2_gain={self.h2_gain}"
            )

    @property
    def snr_per_watt1(self):
        return self.h1_gain**2 / self.noise1

    @property
    def snr_per_watt2(self):
        return self.h2_gain**2 / self.noise2


@dataclass(frozen=True)
class SystemBudget:
    """Total blocklength, average transmit power and user-2 throughput floor."""

    n_total: int
    p_avg: float
    t2_floor: float = 0.0

    def __post_init__(self):
        if int(self.n_total) != self.n_total or self.n_total < 2:
            raise ValueError(f"n_total must be an integer >= 2, got {self.n_total!r}")
        if not (math.isfinite(self.p_avg) and self.p_avg > 0):
            raise ValueError(f"p_avg must be positive, got {self.p_avg!r}")
        if not (math.isfinite(self.t2_floor) and self.t2_floor >= 0):
            raise ValueError(f"t2_floor must be >= 0, got {self.t2_floor!r}")
        object.__setattr__(self, "n_total", int(self.n_total))


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def power_from_snr_db(snr_db, noise=1.0):
    """Average power giving average SNR `snr_db` over a receiver with `noise` power."""
    return noise * db_to_linear(snr_db)
