"""Normal approximation of the finite-blocklength AWGN channel.

Rates are in bits per channel use throughout.  ``gamma`` is a linear SNR
(or SINR), ``n`` a blocklength in channel uses.
"""

import math
from dataclasses import dataclass

import numpy as np

from .special_math import check_probability, q_function, q_inverse

LN2 = math.log(2.0)


def capacity(gamma):
    """Shannon capacity ``log2(1 + gamma)``."""
    if np.ndim(gamma) == 0:
        return math.log1p(float(gamma)) / LN2
    return np.log1p(np.asarray(gamma, dtype=float)) / LN2


def dispersion(gamma):
    """Channel dispersion ``1 - (1 + gamma)**-2`` (dimensionless).

    Computed as ``gamma (2 + gamma) / (1 + gamma)**2`` to keep relative
    accuracy at low SNR.
    """
    if np.ndim(gamma) == 0:
        gamma = float(gamma)
        if gamma < 0 or math.isnan(gamma):
            raise ValueError(f"gamma must be >= 0, got {gamma!r}")
        return gamma * (2.0 + gamma) / ((1.0 + gamma) ** 2)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0) or np.any(np.isnan(gamma)):
        raise ValueError("gamma must be >= 0")
    return gamma * (2.0 + gamma) / (1.0 + gamma) ** 2


def rate_spread(gamma, n):
    """Scale ``sqrt(V / n) / ln 2`` of the Gaussian error approximation.

    The error probability is ``Q((log2(1+gamma) - R) / rate_spread)``.
    """
    if np.ndim(gamma) == 0 and np.ndim(n) == 0:
        return math.sqrt(dispersion(gamma) / n) / LN2
    return np.sqrt(dispersion(gamma) / np.asarray(n, dtype=float)) / LN2


def achievable_rate(gamma, n, epsilon):
    """Coding rate achievable at blocklength `n` and error probability `epsilon`.

    The result is left unclamped and can be negative for short blocks and
    strict error targets.
    """
    check_probability(epsilon, "epsilon", open_interval=True)
    _check_blocklength(n)
    return capacity(gamma) - rate_spread(gamma, n) * q_inverse(epsilon)


def error_probability(gamma, n, rate):
    """Decoding error probability of a rate-`rate` code over `n` channel uses.

    At ``gamma == 0`` the dispersion vanishes; any positive rate then fails
    with probability 1 and ``rate == 0`` (which equals capacity) gives 0.5.
    """
    if np.ndim(gamma) == 0 and np.ndim(n) == 0 and np.ndim(rate) == 0:
        gamma = float(gamma)
        rate = float(rate)
        if gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {gamma!r}")
        _check_blocklength(n)
        if gamma == 0.0:
            return 1.0 if rate > 0.0 else 0.5
        margin = capacity(gamma) - rate
        return q_function(margin / rate_spread(gamma, n))
    gamma, n, rate = np.broadcast_arrays(
        np.asarray(gamma, dtype=float), np.asarray(n, dtype=float), np.asarray(rate, dtype=float)
    )
    if np.any(gamma < 0):
        raise ValueError("gamma must be >= 0")
    _check_blocklength(n)
    spread = rate_spread(gamma, n)
    positive = spread > 0
    safe = np.where(positive, spread, 1.0)
    eps = q_function((capacity(gamma) - rate) / safe)
    degenerate = np.where(rate > 0, 1.0, 0.5)
    return np.where(positive, eps, degenerate)


def effective_throughput(n_i, n_total, rate, eff_error):
    """Rate times success probability, weighted by the share of the block used."""
    check_probability(eff_error, "eff_error")
    if np.any(np.asarray(n_i) < 1) or np.any(np.asarray(n_i) > np.asarray(n_total)):
        raise ValueError(f"need 1 <= n_i <= n_total, got n_i={n_i!r}, n_total={n_total!r}")
    return (n_i / n_total) * rate * (1.0 - eff_error)


def _check_blocklength(n):
    if np.any(np.asarray(n) < 1):
        raise ValueError(f"blocklength must be >= 1, got {n!r}")


@dataclass(frozen=True)
class LinkRealization:
    """One ``(gamma, n, rate)`` operating point of a single link."""

    gamma: float
    n: int
    rate: float

    def __post_init__(self):
        if self.gamma < 0 or self.n < 1 or self.rate < 0:
            raise ValueError(f"invalid link realization {self!r}")

    @property
    def capacity(self):
        return capacity(self.gamma)

    @property
    def error_probability(self):
        return error_probability(self.gamma, self.n, self.rate)

    def throughput(self, n_total=None):
        n_total = self.n if n_total is None else n_total
        return effective_throughput(self.n, n_total, self.rate, self.error_probability)
