import numpy as np
import pytest

from noma_fbl import experiments
from noma_fbl.experiments import SweepSpec, emit_csv, min_blocklength, rows_to_csv, run_sweep
from noma_fbl.model import ChannelPair, SystemBudget
from noma_fbl.noma import maximize_t1_noma
from noma_fbl.oma import maximize_t1_oma

CH = ChannelPair(0.8, 0.1)


def test_spec_validation():
    budget = SystemBudget(300, 1e3, 1.0)
    with pytest.raises(ValueError):
        SweepSpec("bogus", CH, budget, (1, 2))
    with pytest.raises(ValueError):
        SweepSpec("t2_sweep", CH, budget, ())
    with pytest.raises(ValueError):
        SweepSpec("t2_sweep", CH, budget, (1.0, 1.0))
    with pytest.raises(ValueError):
        SweepSpec("t2_sweep", CH, budget, (1.0,), schemes=("tdma",))
    assert SweepSpec("t2_sweep", CH, budget, (1.0,), schemes=("oma", "noma")).schemes == ("noma", "oma")


def test_rows_match_single_shot_calls():
    budget = SystemBudget(300, 1e3, 0.0)
    spec = SweepSpec("t2_sweep", CH, budget, (0.5, 2.0))
    rows = run_sweep(spec)
    for row in rows:
        b = SystemBudget(300, 1e3, row.value)
        assert row.t1["noma"] == maximize_t1_noma(CH, b).t1
        assert row.t1["oma"] == maximize_t1_oma(CH, b).t1


def test_blocklength_sweep_noma_above_oma():
    spec = SweepSpec("blocklength_sweep", CH, SystemBudget(10, 1e3, 1.0), tuple(range(10, 301, 29)))
    rows = run_sweep(spec)
    assert [r.value for r in rows] == list(spec.values)
    for row in rows:
        assert row.t1["noma"] >= row.t1["oma"]


def test_infeasible_rows_are_recorded():
    spec = SweepSpec("t2_sweep", CH, SystemBudget(300, 1e3, 0.0), (1.0, 10.0))
    rows = run_sweep(spec)
    assert rows[1].t1 == {"noma": None, "oma": None}
    assert rows[1].solutions == {"noma": None, "oma": None}
    assert rows[1].gap() == 0.0
    text = rows_to_csv(spec, rows)
    last = text.strip().split("\n")[-1].split(",")
    assert last[0] == "10"
    assert all(cell == "" for cell in last[1:3])
    assert all(cell == "" for cell in last[6:])


def test_t2_sweep_columns():
    spec = SweepSpec("t2_sweep", CH, SystemBudget(300, 1e3, 0.0), (1.0,))
    assert experiments.columns(spec)[:4] == ["t2_floor", "t1_noma", "t1_oma", "gap"]


def test_rate_sweep_uses_pinned_power():
    budget = SystemBudget(300, 1e4, 3.0)
    noma = maximize_t1_noma(CH, budget)
    spec = SweepSpec("rate_sweep", CH, budget, (noma.r1 - 1, noma.r1, noma.r1 + 1))
    rows = run_sweep(spec)
    assert rows[1].t1["noma"] == pytest.approx(noma.t1, abs=1e-12)
    assert rows[1].t1["noma"] > rows[0].t1["noma"]
    assert rows[1].t1["noma"] > rows[2].t1["noma"]


def test_parallel_matches_serial():
    spec = SweepSpec("t2_sweep", CH, SystemBudget(100, 1e3, 0.0), (0.0, 1.0, 2.0))
    assert rows_to_csv(spec, run_sweep(spec, max_workers=2)) == rows_to_csv(spec, run_sweep(spec))


def test_min_blocklength_target_zero():
    assert min_blocklength(CH, 1e3, 1.0, 0.0, "noma") == 2


def test_min_blocklength_unattainable():
    assert min_blocklength(CH, 1e3, 1.0, 50.0, "noma", n_cap=64) is None


@pytest.mark.parametrize("scheme", ["noma", "oma"])
def test_min_blocklength_is_tight(scheme):
    n = min_blocklength(CH, 1e3, 1.0, 5.0, scheme)
    t = lambda m: experiments.max_t1(scheme, CH, SystemBudget(m, 1e3, 1.0)).t1
    assert t(n) >= 5.0
    assert t(n - 1) < 5.0


def test_min_blocklength_sweep_rows():
    spec = SweepSpec("min_blocklength", CH, SystemBudget(2, 1e3, 1.0), (4.0, 5.0))
    rows = run_sweep(spec)
    text = rows_to_csv(spec, rows)
    assert text.splitlines()[0] == "t1_target,n_noma,n_oma"
    assert rows[0].blocklength["noma"] <= rows[1].blocklength["noma"]


def _max_gap(ch, p_avg):
    spec = SweepSpec("t2_sweep", ch, SystemBudget(300, p_avg, 0.0), tuple(np.round(np.arange(0.0, 4.01, 0.25), 6)))
    rows = run_sweep(spec)
    return max(r.gap() for r in rows), rows[0].t1["noma"]


def test_gap_grows_with_snr():
    """Higher average SNR raises T1* and the peak NOMA-OMA gap."""
    gap20, t20 = _max_gap(CH, 100.0)
    gap30, t30 = _max_gap(CH, 1000.0)
    assert gap30 > gap20 and t30 > t20


def test_gap_grows_with_channel_disparity():
    assert _max_gap(ChannelPair(0.8, 0.1), 1000.0)[0] > _max_gap(ChannelPair(0.8, 0.3), 1000.0)[0]


def test_emit_csv_single_row(tmp_path):
    spec = SweepSpec("t2_sweep", CH, SystemBudget(300, 1e3, 0.0), (1.0,))
    path = emit_csv(spec, run_sweep(spec), tmp_path / "out.csv")
    data = path.read_bytes()
    assert data.endswith(b"\n")
    assert len(data.decode("utf-8").splitlines()) == 2
    with pytest.raises(ValueError):
        rows_to_csv(spec, [])


def test_numeric_cells_round_trip():
    for x in (9.040893956848098, 1e-300, 123456.789123456, 0.1):
        cell = experiments.format_cell(x)
        assert abs(float(cell) - x) <= abs(x) * 1e-8
