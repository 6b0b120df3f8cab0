"""Two-user downlink NOMA with SIC at the stronger user.

User 1 first decodes user 2's message; if that fails (probability
``eps21``) it decodes its own message with user 2's signal as
interference.  Both users use the full block, ``N1 = N2 = N``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import fbl
from .model import ChannelPair, InfeasibleError, SystemBudget
from .special_math import check_probability, normal_pdf, q_function

#: relative bracket tolerance of the power bisection (times ``p_avg``)
POWER_XTOL = 1e-10
#: absolute tolerance of the rate root
RATE_XTOL = 1e-12
_SCAN_POINTS = 64
_MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class NomaSinrs:
    g21: float  # user 2's message at user 1, user 1's signal as interference
    g1_prime: float  # user 1 after failed SIC
    g1: float  # user 1 after successful SIC
    g2: float  # user 2's message at user 2


@dataclass(frozen=True)
class PowerSplit:
    p1: float
    p2: float
    r2: float
    near_boundary: bool = False


@dataclass(frozen=True)
class NomaSolution:
    r1: float
    r2: float
    p1: float
    p2: float
    t1: float
    t2: float
    eff_err1: float
    err2: float
    feasible: bool = True
    diagnostics: dict = field(default_factory=dict, compare=False)

    @classmethod
    def infeasible(cls, **diagnostics):
        nan = math.nan
        return cls(nan, nan, nan, nan, nan, nan, nan, nan, feasible=False, diagnostics=diagnostics)


def noma_sinrs(p1, p2, ch):
    """SINRs of the superposition-coded downlink for the power split ``(p1, p2)``."""
    if p1 < 0 or p2 < 0:
        raise ValueError(f"powers must be non-negative, got p1={p1!r}, p2={p2!r}")
    s1 = ch.h1_gain**2
    s2 = ch.h2_gain**2
    return NomaSinrs(
        g21=p2 * s1 / (p1 * s1 + ch.noise1),
        g1_prime=p1 * s1 / (p2 * s1 + ch.noise1),
        g1=p1 * s1 / ch.noise1,
        g2=p2 * s2 / (p1 * s2 + ch.noise2),
    )


def effective_error_u1(eps1, eps1_prime, eps21):
    """User 1's error probability averaged over SIC success and failure."""
    for name, value in (("eps1", eps1), ("eps1_prime", eps1_prime), ("eps21", eps21)):
        check_probability(value, name)
    return (1.0 - eps21) * eps1 + eps21 * eps1_prime


def t1_of_r1(r1, sinrs, r2, n, eps21=None):
    """User 1's effective throughput as a function of its rate (vectorised in `r1`).

    `eps21` overrides the SIC failure probability otherwise computed from
    ``G(g21, n, r2)``; pass 0 to model perfect SIC.
    """
    if eps21 is None:
        eps21 = fbl.error_probability(sinrs.g21, n, r2)
    eps1 = fbl.error_probability(sinrs.g1, n, r1)
    eps1_prime = fbl.error_probability(sinrs.g1_prime, n, r1)
    return r1 * ((1.0 - eps1) * (1.0 - eps21) + (1.0 - eps1_prime) * eps21)


def _terms(sinrs, n, eps21):
    """(capacity, spread, weight) of the two decoding branches of user 1."""
    return [
        (fbl.capacity(sinrs.g1), fbl.rate_spread(sinrs.g1, n), 1.0 - eps21),
        (fbl.capacity(sinrs.g1_prime), fbl.rate_spread(sinrs.g1_prime, n), eps21),
    ]


def _branch_slope(r, cap, spread):
    # d/dR of R * (1 - Q((cap - R) / spread))
    if spread == 0.0:
        return 0.0
    z = (cap - r) / spread
    return 1.0 - q_function(z) - r * normal_pdf(z) / spread


def throughput_slope(r1, terms):
    """Derivative of the mixture throughput with respect to the rate."""
    return sum(w * _branch_slope(r1, cap, spread) for cap, spread, w in terms if w > 0.0)


def _mixture_throughput(r1, terms):
    return r1 * sum(w * (1.0 - q_function((cap - r1) / spread)) for cap, spread, w in terms if w > 0 and spread > 0)


def _mixture_optimal_rate(terms):
    """Rate maximising a weighted sum of single-branch throughputs.

    Returns ``(rate, saturated)``.  The slope is positive at zero rate; the
    maximiser is a down-crossing of the slope.  A single branch is concave
    up to its unique stationary point, so bracketing ``[0, capacity]`` is
    enough.  With two active branches every down-crossing on a coarse scan
    is refined and the best one is kept.
    """
    active = [(cap, spread, w) for cap, spread, w in terms if w > 0.0 and spread > 0.0]
    if not active:
        return 0.0, False
    hi = max(cap for cap, _, _ in active)

    def slope(r):
        return throughput_slope(r, active)

    for _ in range(_MAX_DOUBLINGS):
        if slope(hi) < 0.0:
            break
        hi *= 2.0
    else:
        return hi, True

    if len(active) == 1:
        return optimize.brentq(slope, 0.0, hi, xtol=RATE_XTOL), False

    grid = np.linspace(0.0, hi, _SCAN_POINTS + 1)
    values = [slope(r) for r in grid]
    roots = [
        optimize.brentq(slope, grid[i], grid[i + 1], xtol=RATE_XTOL)
        for i in range(_SCAN_POINTS)
        if values[i] > 0.0 and values[i + 1] <= 0.0
    ]
    best = max(roots, key=lambda r: _mixture_throughput(r, active))
    return best, False


def optimal_r1(sinrs, r2, n, eps21=None, full_output=False):
    """Rate of user 1 that maximises its effective throughput.

    Root of the first-order condition of :func:`t1_of_r1`.  With
    ``full_output=True`` also returns a dict holding the SIC failure
    probability used and a ``saturated`` flag, set when the slope never
    turned negative (the returned value is then the end of the bracket).
    """
    if sinrs.g1 <= 0:
        raise ValueError("user 1 needs a positive SNR")
    if eps21 is None:
        eps21 = fbl.error_probability(sinrs.g21, n, r2)
    rate, saturated = _mixture_optimal_rate(_terms(sinrs, n, eps21))
    if full_output:
        return rate, {"eps21": eps21, "saturated": saturated}
    return rate


def best_single_link_rate(gamma, n):
    """Throughput-maximising rate of one link (the mixture with one branch)."""
    if gamma <= 0:
        return 0.0
    rate, _ = _mixture_optimal_rate([(fbl.capacity(gamma), fbl.rate_spread(gamma, n), 1.0)])
    return rate


def max_t2(gamma2, n):
    """Best effective throughput of user 2 over its rate, and that rate."""
    r2 = best_single_link_rate(gamma2, n)
    return r2 * (1.0 - fbl.error_probability(gamma2, n, r2)), r2


def solve_power_and_r2(ch, budget):
    """Smallest user-2 power (full total power) whose best rate meets the floor.

    Raises :class:`InfeasibleError` if even ``p2 = p_avg`` falls short.
    """
    p_avg, n, floor = budget.p_avg, budget.n_total, budget.t2_floor
    if floor == 0.0:
        return PowerSplit(p_avg, 0.0, 0.0)

    def shortfall(p2):
        return max_t2(noma_sinrs(p_avg - p2, p2, ch).g2, n)[0] - floor

    top = shortfall(p_avg)
    if top < 0.0:
        raise InfeasibleError(f"max T2 = {top + floor:.6g} at full power is below the floor {floor}")
    if top == 0.0:
        p2 = p_avg
    else:
        p2 = optimize.brentq(shortfall, 0.0, p_avg, xtol=POWER_XTOL * p_avg, rtol=1e-15)
        # brentq may land a hair below the floor
        while shortfall(p2) < 0.0 and p2 < p_avg:
            p2 = min(p_avg, p2 + POWER_XTOL * p_avg)
    p1 = p_avg - p2
    r2 = max_t2(noma_sinrs(p1, p2, ch).g2, n)[1]
    return PowerSplit(p1, p2, r2, near_boundary=p2 > p_avg * (1.0 - 1e-6))


def evaluate_noma(ch, budget, p1, p2, r1, r2):
    """Throughputs and error probabilities of a NOMA operating point."""
    n = budget.n_total
    s = noma_sinrs(p1, p2, ch)
    eps21 = fbl.error_probability(s.g21, n, r2)
    eps1 = fbl.error_probability(s.g1, n, r1)
    eps1_prime = fbl.error_probability(s.g1_prime, n, r1)
    eff1 = effective_error_u1(eps1, eps1_prime, eps21)
    eps2 = fbl.error_probability(s.g2, n, r2)
    return {
        "sinrs": s,
        "eps21": eps21,
        "eps1": eps1,
        "eps1_prime": eps1_prime,
        "eff_err1": eff1,
        "err2": eps2,
        "t1": r1 * (1.0 - eff1),
        "t2": r2 * (1.0 - eps2),
    }


def maximize_t1_noma(ch, budget):
    """Maximise user 1's throughput subject to user 2's floor.

    Power and user-2 rate are pinned first (floor met with equality, total
    power used), then user 1's rate is optimised.
    """
    try:
        split = solve_power_and_r2(ch, budget)
    except InfeasibleError as exc:
        return NomaSolution.infeasible(reason=str(exc))
    sinrs = noma_sinrs(split.p1, split.p2, ch)
    if sinrs.g1 > 0:
        r1, info = optimal_r1(sinrs, split.r2, budget.n_total, full_output=True)
    else:
        r1, info = 0.0, {"saturated": False}
    point = evaluate_noma(ch, budget, split.p1, split.p2, r1, split.r2)
    return NomaSolution(
        r1=r1,
        r2=split.r2,
        p1=split.p1,
        p2=split.p2,
        t1=point["t1"],
        t2=point["t2"],
        eff_err1=point["eff_err1"],
        err2=point["err2"],
        diagnostics={
            "near_boundary": split.near_boundary,
            "saturated": info["saturated"],
            "eps21": point["eps21"],
            "sinrs": sinrs,
        },
    )
