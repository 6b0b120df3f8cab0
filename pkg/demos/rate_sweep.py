"""Effective throughput of the near user as a function of its rate.

Two users share a downlink: the near user (|h1| = 0.8) and the far user
(|h2| = 0.1), 40 dB transmit SNR, 300 channel uses per frame, and the far user
must get an effective throughput of at least 3 bits per frame use.
"""

# %%
import numpy as np

from noma_fbl import ChannelPair, SystemBudget, maximize_t1_noma, maximize_t1_oma
from noma_fbl.experiments import SweepSpec, run_sweep

ch = ChannelPair(0.8, 0.1)
budget = SystemBudget(n_total=300, p_avg=1e4, t2_floor=3.0)

# %% [markdown]
# With superposition coding the far user's power and rate are fixed by its
# throughput floor, so only R1 is left free.  In the time-division scheme the
# frame split and the power split are optimized first, and then R1.

# %%
noma = maximize_t1_noma(ch, budget)
oma = maximize_t1_oma(ch, budget)
print(f"NOMA: R1* = {noma.r1:.4f}, T1* = {noma.t1:.4f}, P2 = {noma.p2:.1f}, R2 = {noma.r2:.4f}")
print(f"OMA:  R1* = {oma.r1:.4f}, T1* = {oma.t1:.4f}, N1 = {oma.n1}, N2 = {oma.n2}")

# %% [markdown]
# Holding everything else at the optimum and sweeping R1 shows why a fixed
# rate is risky: past the peak, the superposed link collapses quickly because
# SIC leaves user 1 with interference, while the longer OMA slot degrades more gently.

# %%
values = tuple(np.round(np.arange(0.0, 14.0 + 1e-9, 0.5), 10))
rows = run_sweep(SweepSpec("rate_sweep", ch, budget, values))
print(f"{'R1':>6} {'T1 NOMA':>10} {'T1 OMA':>10}")
for row in rows:
    print(f"{row.value:6.1f} {row.t1['noma']:10.4f} {row.t1['oma']:10.4f}")

# %%
at10 = values.index(10.0)
print(f"at R1 = 10: NOMA {rows[at10].t1['noma']:.4f} vs OMA {rows[at10].t1['oma']:.4f}")
