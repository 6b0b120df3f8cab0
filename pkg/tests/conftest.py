import pytest

from noma_fbl.model import ChannelPair, SystemBudget

ACCEPTANCE_LABELS = {
    "test_c1_": "C1 optimal-rate roots vs grid argmax (50 random configs)",
    "test_c2_": "C2 rate sweep shape at 40 dB, T2 floor 3",
    "test_c3_": "C3 T2-floor sweep endpoints and gap shape at 30 dB",
    "test_c4_": "C4 minimum blocklength NOMA ~10 / OMA ~85",
    "test_c5_": "C5 full-power scaling monotonicity (100 points)",
    "test_c6a_": "C6 Q/Q^-1 roundtrip to 1e-8 over [-8, 8]",
    "test_c6b_": "C6 error_probability(achievable_rate) identity to 1e-9",
    "test_c6c_": "C6 eps = 0.5 at R = log2(1 + gamma)",
    "test_c7_": "C7 perfect-SIC reduction of the rate roots",
    "test_c8_": "C8 byte-identical sweep CSV",
}
_results = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _results:
        label = next((v for k, v in ACCEPTANCE_LABELS.items() if name.startswith(k)), name)
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}  [{name}]")


@pytest.fixture
def snr40_floor3():
    """|h1| = 0.8, |h2| = 0.1, 40 dB, N = 300, T2 floor 3."""
    return ChannelPair(0.8, 0.1), SystemBudget(300, 1e4, 3.0)


@pytest.fixture
def snr30_floor1():
    """|h1| = 0.8, |h2| = 0.1, 30 dB, N = 300, T2 floor 1."""
    return ChannelPair(0.8, 0.1), SystemBudget(300, 1e3, 1.0)
