"""Gaussian tail function Q and its inverse.

Both functions accept Python scalars (fast path through :mod:`math`) or
array-likes (vectorised through :mod:`scipy.special`).
"""

import math

import numpy as np
from scipy import special

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def check_probability(p, name="p", open_interval=False):
    """Raise ``ValueError`` unless every entry of `p` is a valid probability."""
    arr = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {p!r}")
    if open_interval:
        if np.any(arr <= 0.0) or np.any(arr >= 1.0):
            raise ValueError(f"{name} must lie in (0, 1), got {p!r}")
    elif np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def normal_pdf(x):
    """Standard normal density."""
    if np.ndim(x) == 0:
        return _INV_SQRT_2PI * math.exp(-0.5 * float(x) * float(x))
    x = np.asarray(x, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


def q_function(x):
    """Upper tail probability of the standard normal, ``Q(x) = P(Z > x)``.

    Evaluated as ``erfc(x / sqrt(2)) / 2``, which keeps full relative
    accuracy deep into the upper tail (no ``1 - Phi`` cancellation).
    """
    if np.ndim(x) == 0:
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"q_function needs a finite argument, got {x!r}")
        return 0.5 * math.erfc(x / _SQRT2)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("q_function needs finite arguments")
    return 0.5 * special.erfc(x / _SQRT2)


def _q_inverse_scalar(p):
    # ndtri seed, then Newton on Q(x) - p; dQ/dx = -phi(x)
    x = -float(special.ndtri(p))
    for _ in range(2):
        pdf = normal_pdf(x)
        if pdf == 0.0:
            break
        x += (q_function(x) - p) / pdf
    return x


def q_inverse(p):
    """Inverse of :func:`q_function` on the open interval (0, 1)."""
    check_probability(p, "p", open_interval=True)
    if np.ndim(p) == 0:
        return _q_inverse_scalar(float(p))
    p = np.asarray(p, dtype=float)
    x = -special.ndtri(p)
    for _ in range(2):
        pdf = normal_pdf(x)
        step = np.divide(q_function(x) - p, pdf, out=np.zeros_like(x), where=pdf > 0)
        x = x + step
    return x
