import numpy as np
import pytest

from noma_fbl import fbl, oracle
from noma_fbl.model import ChannelPair, InfeasibleError, SystemBudget
from noma_fbl.noma import maximize_t1_noma, noma_sinrs
from noma_fbl.oma import (
    evaluate_oma,
    maximize_t1_oma,
    oma_snr,
    optimal_r1_oma,
    scan_splits,
    slot_throughput,
    solve_slot_allocation,
    stationarity_residual,
)


def test_oma_snr_examples(snr40_floor3):
    assert oma_snr(0.0, 0.8, 1.0) == 0.0
    assert oma_snr(1000.0, 0.8, 1.0) == pytest.approx(640.0)
    ch, budget = snr40_floor3
    assert oma_snr(budget.p_avg, ch.h2_gain, ch.noise2) == pytest.approx(noma_sinrs(0.0, budget.p_avg, ch).g2)
    with pytest.raises(ValueError):
        oma_snr(1.0, 0.8, 0.0)


def test_slot_allocation_zero_floor():
    budget = SystemBudget(300, 1e3, 0.0)
    alloc = solve_slot_allocation(ChannelPair(0.8, 0.1), budget, 120)
    assert alloc.p2 == 0.0 and alloc.r2 == 0.0
    assert alloc.p1 == pytest.approx(300 * 1e3 / 120)


def test_slot_allocation_infeasible():
    ch = ChannelPair(0.8, 0.1)
    budget = SystemBudget(300, 1e3, 0.0)
    top, _ = slot_throughput(oma_snr(300 * 1e3 / 200, 0.1, 1.0), 200, 300)
    with pytest.raises(InfeasibleError):
        solve_slot_allocation(ch, SystemBudget(300, 1e3, top * 1.001), 100)
    with pytest.raises(ValueError):
        solve_slot_allocation(ch, budget, 300)


def test_slot_allocation_pins_t2_at_best_split(snr40_floor3):
    ch, budget = snr40_floor3
    best = maximize_t1_oma(ch, budget)
    alloc = solve_slot_allocation(ch, budget, best.n1)
    g2 = oma_snr(alloc.p2, ch.h2_gain, ch.noise2)
    t2 = (alloc.n2 / 300) * alloc.r2 * (1 - fbl.error_probability(g2, alloc.n2, alloc.r2))
    assert t2 == pytest.approx(3.0, abs=1e-6)
    assert best.n1 * best.p1 + best.n2 * best.p2 == pytest.approx(300 * budget.p_avg, rel=1e-9)
    # grid check: smallest grid p2 meeting the floor with a grid r2
    r2s = np.arange(6.5, 7.0, 1e-4)
    p2s = np.arange(alloc.p2 - 5.0, alloc.p2 + 5.0, 0.01)
    ok = [np.max((alloc.n2 / 300) * r2s * (1 - fbl.error_probability(oma_snr(p, 0.1, 1.0), alloc.n2, r2s))) >= 3.0
          for p in p2s]
    first = p2s[np.argmax(ok)]
    assert first - 0.02 < alloc.p2 <= first + 1e-9


def test_stationarity_residual_sign():
    gamma, n = 100.0, 80
    r = optimal_r1_oma(gamma, n)
    assert stationarity_residual(0.0, gamma, n) < 0
    assert abs(stationarity_residual(r, gamma, n)) < 1e-9
    assert stationarity_residual(r + 0.1, gamma, n) > 0


@pytest.mark.parametrize("gamma,n", [(0.3, 5), (5.0, 40), (200.0, 166), (1e4, 999)])
def test_optimal_rate_matches_grid(gamma, n):
    r = optimal_r1_oma(gamma, n)
    cap = fbl.capacity(gamma)
    r_grid, t_grid = oracle.scan_argmax(lambda x: x * (1 - fbl.error_probability(gamma, n, x)), 0.0, cap + 1, 1e-4)
    assert abs(r - r_grid) < 1e-3
    assert r * (1 - fbl.error_probability(gamma, n, r)) >= t_grid - 1e-12


def test_optimal_rate_approaches_capacity():
    gamma = 50.0
    cap = fbl.capacity(gamma)
    rates = [optimal_r1_oma(gamma, n) for n in (10, 100, 1000, 10**5, 10**7)]
    assert all(r < cap for r in rates)
    assert rates == sorted(rates)
    assert cap - rates[-1] < 1e-2


def test_optimal_rate_domain():
    with pytest.raises(ValueError):
        optimal_r1_oma(0.0, 10)
    with pytest.raises(ValueError):
        optimal_r1_oma(1.0, 0)


def test_zero_floor_uses_whole_block():
    ch = ChannelPair(0.8, 0.1)
    budget = SystemBudget(300, 1e3, 0.0)
    sol = maximize_t1_oma(ch, budget)
    assert (sol.n1, sol.n2, sol.p2) == (300, 0, 0.0)
    assert sol.t1 == maximize_t1_noma(ch, budget).t1


def test_exhaustive_scan_and_energy(snr30_floor1):
    ch, budget = snr30_floor1
    sol = maximize_t1_oma(ch, budget, keep_scan=True)
    scan = sol.diagnostics["scan"]
    assert sorted(scan) == list(range(1, 300))
    feasible = {k: v for k, v in scan.items() if v is not None}
    assert feasible
    best_t1 = max(v.t1 for v in feasible.values())
    assert sol.t1 == best_t1
    assert sol.n1 == min(k for k, v in feasible.items() if v.t1 == best_t1)
    for v in feasible.values():
        assert v.n1 + v.n2 == 300
        assert v.n1 * v.p1 + v.n2 * v.p2 == pytest.approx(300 * budget.p_avg, rel=1e-9)
        assert v.t2 == pytest.approx(1.0, abs=1e-6)


def test_user1_snr_independent_of_user2_power(snr30_floor1):
    ch, budget = snr30_floor1
    t1a, _ = evaluate_oma(ch, budget, 150, 500.0, 10.0, 7.0, 1.0)
    t1b, _ = evaluate_oma(ch, budget, 150, 500.0, 900.0, 7.0, 1.0)
    assert t1a == t1b


def test_infeasible_everywhere():
    ch = ChannelPair(0.8, 0.1)
    sol = maximize_t1_oma(ch, SystemBudget(50, 100.0, 5.0))
    assert not sol.feasible


@pytest.mark.parametrize("floor", [0.5, 1.0, 2.0, 3.0])
def test_noma_dominates_oma_at_30db(floor):
    ch = ChannelPair(0.8, 0.1)
    budget = SystemBudget(300, 1e3, floor)
    assert maximize_t1_noma(ch, budget).t1 >= maximize_t1_oma(ch, budget).t1


def test_scan_splits_marks_infeasible():
    ch = ChannelPair(0.8, 0.1)
    scan = scan_splits(ch, SystemBudget(20, 1e3, 2.0))
    assert any(v is None for v in scan.values())
