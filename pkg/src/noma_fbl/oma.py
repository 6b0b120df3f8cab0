"""Time-division OMA benchmark.

User 1 gets ``n1`` channel uses at power ``p1``, user 2 the remaining
``n2 = N - n1`` at power ``p2``, with ``n1 p1 + n2 p2 = N p_avg``.
"""

import math
from dataclasses import dataclass, field

from scipy import optimize

from . import fbl
from .model import InfeasibleError
from .special_math import normal_pdf, q_function

POWER_XTOL = 1e-10
RATE_XTOL = 1e-12


@dataclass(frozen=True)
class SlotAllocation:
    n1: int
    n2: int
    p1: float
    p2: float
    r2: float


@dataclass(frozen=True)
class OmaSolution:
    r1: float
    r2: float
    p1: float
    p2: float
    n1: int
    n2: int
    t1: float
    t2: float
    feasible: bool = True
    diagnostics: dict = field(default_factory=dict, compare=False)

    @classmethod
    def infeasible(cls, **diagnostics):
        nan = math.nan
        return cls(nan, nan, nan, nan, 0, 0, nan, nan, feasible=False, diagnostics=diagnostics)


def oma_snr(p, h_gain, noise):
    """Interference-free SNR of one slot."""
    if noise <= 0:
        raise ValueError(f"noise must be positive, got {noise!r}")
    if p < 0:
        raise ValueError(f"power must be non-negative, got {p!r}")
    return p * h_gain**2 / noise


def stationarity_residual(rate, gamma, n):
    """``Q((c - R)/d) + R phi((c - R)/d) / d - 1`` with ``c`` the capacity.

    This is minus the slope of ``R (1 - Q((c - R)/d))``: zero at the
    throughput-maximising rate, negative below it.
    """
    c = fbl.capacity(gamma)
    d = fbl.rate_spread(gamma, n)
    z = (c - rate) / d
    return q_function(z) + rate * normal_pdf(z) / d - 1.0


def optimal_r1_oma(gamma1, n1):
    """Rate maximising ``R (1 - G(gamma1, n1, R))`` on an interference-free link."""
    if gamma1 <= 0:
        raise ValueError(f"gamma1 must be positive, got {gamma1!r}")
    if n1 < 1:
        raise ValueError(f"n1 must be >= 1, got {n1!r}")
    hi = fbl.capacity(gamma1)
    while stationarity_residual(hi, gamma1, n1) < 0.0:
        hi *= 2.0
    return optimize.brentq(stationarity_residual, 0.0, hi, args=(gamma1, n1), xtol=RATE_XTOL)


def slot_throughput(gamma, n_slot, n_total):
    """Best effective throughput of a slot of `n_slot` uses, and the rate achieving it."""
    if gamma <= 0:
        return 0.0, 0.0
    r = optimal_r1_oma(gamma, n_slot)
    return (n_slot / n_total) * r * (1.0 - fbl.error_probability(gamma, n_slot, r)), r


def solve_slot_allocation(ch, budget, n1):
    """Pin user 2's throughput to its floor with the least slot power.

    Whatever energy user 2 leaves goes to user 1's slot.  Raises
    :class:`InfeasibleError` if the whole energy budget in user 2's slot
    misses the floor.
    """
    n = budget.n_total
    if not 1 <= n1 <= n - 1:
        raise ValueError(f"n1 must lie in [1, {n - 1}], got {n1!r}")
    n2 = n - n1
    energy = n * budget.p_avg
    floor = budget.t2_floor
    if floor == 0.0:
        return SlotAllocation(n1, n2, energy / n1, 0.0, 0.0)

    def shortfall(p2):
        return slot_throughput(oma_snr(p2, ch.h2_gain, ch.noise2), n2, n)[0] - floor

    p2_max = energy / n2
    top = shortfall(p2_max)
    if top < 0.0:
        raise InfeasibleError(f"n1={n1}: max T2 = {top + floor:.6g} below the floor {floor}")
    if top == 0.0:
        p2 = p2_max
    else:
        p2 = optimize.brentq(shortfall, 0.0, p2_max, xtol=POWER_XTOL * budget.p_avg, rtol=1e-15)
        while shortfall(p2) < 0.0 and p2 < p2_max:
            p2 = min(p2_max, p2 + POWER_XTOL * budget.p_avg)
    r2 = slot_throughput(oma_snr(p2, ch.h2_gain, ch.noise2), n2, n)[1]
    p1 = max(0.0, (energy - n2 * p2) / n1)
    return SlotAllocation(n1, n2, p1, p2, r2)


def evaluate_oma(ch, budget, n1, p1, p2, r1, r2):
    """Throughputs of an OMA operating point (``n2 = N - n1``)."""
    n = budget.n_total
    n2 = n - n1
    g1 = oma_snr(p1, ch.h1_gain, ch.noise1)
    g2 = oma_snr(p2, ch.h2_gain, ch.noise2)
    t1 = (n1 / n) * r1 * (1.0 - fbl.error_probability(g1, n1, r1)) if n1 > 0 else 0.0
    t2 = (n2 / n) * r2 * (1.0 - fbl.error_probability(g2, n2, r2)) if n2 > 0 else 0.0
    return t1, t2


def _solve_split(ch, budget, n1):
    alloc = solve_slot_allocation(ch, budget, n1)
    g1 = oma_snr(alloc.p1, ch.h1_gain, ch.noise1)
    r1 = optimal_r1_oma(g1, n1) if g1 > 0 else 0.0
    t1, t2 = evaluate_oma(ch, budget, n1, alloc.p1, alloc.p2, r1, alloc.r2)
    return OmaSolution(r1, alloc.r2, alloc.p1, alloc.p2, n1, alloc.n2, t1, t2)


def scan_splits(ch, budget):
    """Optimal operating point for every split ``n1 = 1 .. N-1`` (``None`` if infeasible)."""
    out = {}
    for n1 in range(1, budget.n_total):
        try:
            out[n1] = _solve_split(ch, budget, n1)
        except InfeasibleError:
            out[n1] = None
    return out


def maximize_t1_oma(ch, budget, keep_scan=False):
    """Maximise user 1's throughput by exhaustive search over the slot split.

    With a zero floor user 2 is not served at all and user 1 takes the whole
    block.  Ties go to the smaller ``n1``.  ``keep_scan=True`` stores the
    per-split results under ``diagnostics["scan"]``.
    """
    n = budget.n_total
    if budget.t2_floor == 0.0:
        p1 = budget.p_avg
        g1 = oma_snr(p1, ch.h1_gain, ch.noise1)
        r1 = optimal_r1_oma(g1, n)
        t1 = r1 * (1.0 - fbl.error_probability(g1, n, r1))
        return OmaSolution(r1, 0.0, p1, 0.0, n, 0, t1, 0.0)

    scan = scan_splits(ch, budget)
    best = None
    for n1 in sorted(scan):
        sol = scan[n1]
        if sol is not None and (best is None or sol.t1 > best.t1):
            best = sol
    if best is None:
        return OmaSolution.infeasible(reason=f"no split of N={n} meets T2 >= {budget.t2_floor}")
    if keep_scan:
        best.diagnostics["scan"] = scan
    return best
