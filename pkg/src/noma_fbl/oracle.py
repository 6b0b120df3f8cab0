"""Brute-force grid maximisers used to cross-check the solvers.

Everything here is rebuilt from the primitives in :mod:`noma_fbl.fbl`;
no solver code path is used.  Ties resolve to the first grid point in
scan order (NOMA: power, then rates; OMA: ``n1``, power, then rates).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import fbl
from .noma import NomaSolution
from .oma import OmaSolution


def grid_axis(lo, hi, step):
    """Points ``lo, lo + step, ...`` not exceeding `hi` (within rounding)."""
    if step <= 0 or lo > hi:
        raise ValueError(f"bad grid axis ({lo}, {hi}, {step})")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


@dataclass(frozen=True)
class GridSpec:
    r1_range: tuple
    r2_range: tuple
    p2_range: tuple
    n1_values: tuple = None  # OMA only; default 1..N

    def __post_init__(self):
        for rng in (self.r1_range, self.r2_range, self.p2_range):
            lo, hi, step = rng
            if step <= 0 or lo > hi:
                raise ValueError(f"bad grid range {rng!r}")

    def axes(self):
        return grid_axis(*self.r1_range), grid_axis(*self.r2_range), grid_axis(*self.p2_range)


def default_noma_grid(ch, budget, rate_step=1e-3, power_divisions=2000):
    """Full-range grid: rates up to the relevant capacities, ``p2`` over ``[0, p_avg]``."""
    r1_hi = fbl.capacity(budget.p_avg * ch.h1_gain**2 / ch.noise1)
    r2_hi = fbl.capacity(budget.p_avg * ch.h2_gain**2 / ch.noise2)
    return GridSpec(
        (0.0, r1_hi, rate_step),
        (0.0, r2_hi, rate_step),
        (0.0, budget.p_avg, budget.p_avg / power_divisions),
    )


def default_oma_grid(ch, budget, rate_step=1e-3, power_divisions=2000, n1_values=None):
    """Full-range OMA grid; ``p2`` spans ``[0, N p_avg]`` (points above ``N p_avg / n2`` are skipped)."""
    energy = budget.n_total * budget.p_avg
    r1_hi = fbl.capacity(energy * ch.h1_gain**2 / ch.noise1)
    r2_hi = fbl.capacity(energy * ch.h2_gain**2 / ch.noise2)
    return GridSpec(
        (0.0, r1_hi, rate_step),
        (0.0, r2_hi, rate_step),
        (0.0, energy, energy / power_divisions),
        n1_values=n1_values,
    )


def scan_argmax(objective, lo, hi, step):
    """Grid argmax of a vectorised scalar function; returns ``(x, f(x))``."""
    xs = grid_axis(lo, hi, step)
    values = objective(xs)
    i = int(np.argmax(values))
    return float(xs[i]), float(values[i])


def noma_t1_curve(r1, g1, g1_prime, eps21, n):
    """User 1's NOMA throughput on an array of rates."""
    eps1 = fbl.error_probability(g1, n, r1)
    eps1_prime = fbl.error_probability(g1_prime, n, r1)
    return r1 * ((1.0 - eps1) * (1.0 - eps21) + (1.0 - eps1_prime) * eps21)


def oma_t1_curve(r1, g1, n1, n_total):
    return (n1 / n_total) * r1 * (1.0 - fbl.error_probability(g1, n1, r1))


def brute_force_noma(ch, budget, grid, rule="joint"):
    """Grid maximiser of user 1's NOMA throughput subject to ``T2 >= floor``.

    ``rule="joint"`` searches every ``(r1, r2, p2)`` grid point.  For a
    fixed ``(p2, r1)`` the objective is affine in the SIC failure
    probability, so its maximum over the feasible ``r2`` points sits at the
    smallest or largest failure probability; evaluating both is exactly the
    exhaustive argmax.

    ``rule="pinned"`` mirrors the fast solver's decision rule on the grid:
    ``r2`` is the grid point maximising user 2's own throughput, and only
    the smallest grid ``p2`` meeting the floor is admitted.  The joint
    optimum can beat it when SIC failures are frequent, because spending
    more power on user 2 also makes cancellation at user 1 more reliable.
    """
    if rule not in ("joint", "pinned"):
        raise ValueError(f"unknown rule {rule!r}")
    n = budget.n_total
    s1 = ch.h1_gain**2
    s2 = ch.h2_gain**2
    r1s, r2s, p2s = grid.axes()
    best = None
    for p2 in p2s[p2s <= budget.p_avg * (1 + 1e-12)]:
        p2 = min(float(p2), budget.p_avg)
        p1 = budget.p_avg - p2
        g21 = p2 * s1 / (p1 * s1 + ch.noise1)
        g1p = p1 * s1 / (p2 * s1 + ch.noise1)
        g1 = p1 * s1 / ch.noise1
        g2 = p2 * s2 / (p1 * s2 + ch.noise2)
        t2 = r2s * (1.0 - fbl.error_probability(g2, n, r2s))
        if rule == "pinned":
            top = int(np.argmax(t2))
            ok = np.array([top]) if t2[top] >= budget.t2_floor else np.array([], dtype=int)
        else:
            ok = np.flatnonzero(t2 >= budget.t2_floor)
        if ok.size == 0:
            continue
        eps21 = fbl.error_probability(g21, n, r2s[ok])
        eps1 = fbl.error_probability(g1, n, r1s)
        eps1p = fbl.error_probability(g1p, n, r1s)
        candidates = []
        for j in (int(np.argmin(eps21)), int(np.argmax(eps21))):
            t1 = r1s * ((1.0 - eps1) * (1.0 - eps21[j]) + (1.0 - eps1p) * eps21[j])
            i = int(np.argmax(t1))
            candidates.append((t1[i], i, ok[j]))
        t1, i, j = max(candidates, key=lambda c: (c[0], -c[1], -c[2]))
        if best is None or t1 > best[0]:
            best = (float(t1), float(r1s[i]), float(r2s[j]), p1, p2)
        if rule == "pinned":
            break
    if best is None:
        return NomaSolution.infeasible(reason="no grid point meets the throughput floor")
    t1, r1, r2, p1, p2 = best
    g21 = p2 * s1 / (p1 * s1 + ch.noise1)
    eps21 = fbl.error_probability(g21, n, r2)
    eps1 = fbl.error_probability(p1 * s1 / ch.noise1, n, r1)
    eps1p = fbl.error_probability(p1 * s1 / (p2 * s1 + ch.noise1), n, r1)
    eff1 = (1.0 - eps21) * eps1 + eps21 * eps1p
    err2 = fbl.error_probability(p2 * s2 / (p1 * s2 + ch.noise2), n, r2)
    return NomaSolution(r1, r2, p1, p2, r1 * (1 - eff1), r2 * (1 - err2), eff1, err2)


def _oma_best_for_split(ch, budget, grid, n1):
    """Best grid point with user 1 holding `n1` channel uses, or ``None``."""
    n = budget.n_total
    energy = n * budget.p_avg
    s1 = ch.h1_gain**2 / ch.noise1
    s2 = ch.h2_gain**2 / ch.noise2
    r1s, r2s, p2s = grid.axes()
    n2 = n - n1
    if n2 == 0:
        if budget.t2_floor > 0 or p2s[0] != 0.0:
            return None
        powers = p2s[:1]
        r2_pick = np.zeros(1)
        t2_pick = np.zeros(1)
    else:
        powers = p2s[n2 * p2s <= energy * (1 + 1e-12)]
        if powers.size == 0:
            return None
        t2 = (n2 / n) * r2s[None, :] * (1.0 - fbl.error_probability(powers[:, None] * s2, n2, r2s[None, :]))
        feasible = t2 >= budget.t2_floor
        rows = np.flatnonzero(feasible.any(axis=1))
        if rows.size == 0:
            return None
        first = feasible[rows].argmax(axis=1)
        powers = powers[rows]
        r2_pick = r2s[first]
        t2_pick = t2[rows, first]
    p1 = np.maximum(0.0, (energy - n2 * powers) / n1)
    t1 = oma_t1_curve(r1s[None, :], p1[:, None] * s1, n1, n)
    row, col = divmod(int(np.argmax(t1)), t1.shape[1])
    return OmaSolution(
        float(r1s[col]),
        float(r2_pick[row]),
        float(p1[row]),
        float(powers[row]),
        int(n1),
        int(n2),
        float(t1[row, col]),
        float(t2_pick[row]),
    )


def brute_force_oma(ch, budget, grid):
    """Grid maximiser of user 1's OMA throughput over ``(n1, r1, r2, p2)``.

    ``p1`` follows from spending the whole energy budget.  ``n1 = N``
    (user 2 unserved) is admissible and feasible only for a zero floor.
    User 1's throughput does not depend on ``r2``, so for each ``(n1, p2)``
    the rate grid of user 2 only decides feasibility.
    """
    n1_values = grid.n1_values if grid.n1_values is not None else range(1, budget.n_total + 1)
    best = None
    for n1 in n1_values:
        sol = _oma_best_for_split(ch, budget, grid, n1)
        if sol is not None and (best is None or sol.t1 > best.t1):
            best = sol
    if best is None:
        return OmaSolution.infeasible(reason="no grid point meets the throughput floor")
    return best


def _zoom_range(center, rng, factor, span):
    lo, hi, step = rng
    fine = step / factor
    return (max(lo, center - span * step), min(hi, center + span * step), fine)


def _finer(rng, factor):
    lo, hi, step = rng
    return (lo, hi, step / factor)


def refine_noma(ch, budget, grid, levels=2, factor=10, span=2, rule="joint"):
    """Coarse-to-fine NOMA oracle.

    Each level re-scans a window of ``r1`` and ``p2`` around the previous
    argmax.  ``r2`` keeps its full range (only the step shrinks): the argmax
    ``r2`` is pulled towards low values by the SIC term, while feasibility at
    a slightly smaller ``p2`` hinges on ``r2`` near user 2's best rate.
    """
    sol = brute_force_noma(ch, budget, grid, rule)
    for _ in range(levels):
        if not sol.feasible:
            break
        grid = GridSpec(
            _zoom_range(sol.r1, grid.r1_range, factor, span),
            _finer(grid.r2_range, factor),
            _zoom_range(sol.p2, grid.p2_range, factor, span),
        )
        finer = brute_force_noma(ch, budget, grid, rule)
        if finer.feasible and finer.t1 >= sol.t1:
            sol = finer
    return sol


def refine_oma(ch, budget, grid, levels=2, factor=10, span=2, n1_span=4):
    """Coarse-to-fine OMA oracle.

    Every split within `n1_span` of the coarse argmax is refined on its own
    (its best ``p2`` can sit far from the neighbours').  As in
    :func:`refine_noma`, ``r2`` keeps its full range at every level.
    """
    coarse = brute_force_oma(ch, budget, grid)
    if not coarse.feasible:
        return coarse
    best = coarse
    for n1 in range(coarse.n1 - n1_span, coarse.n1 + n1_span + 1):
        if not 1 <= n1 <= budget.n_total:
            continue
        g = grid
        sol = _oma_best_for_split(ch, budget, g, n1)
        for _ in range(levels):
            if sol is None:
                break
            g = replace(
                g,
                r1_range=_zoom_range(sol.r1, g.r1_range, factor, span),
                r2_range=_finer(g.r2_range, factor),
                p2_range=_zoom_range(sol.p2, g.p2_range, factor, span),
            )
            finer = _oma_best_for_split(ch, budget, g, n1)
            if finer is not None and finer.t1 >= sol.t1:
                sol = finer
        if sol is not None and sol.t1 > best.t1:
            best = sol
    return best
