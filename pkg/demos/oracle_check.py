"""Cross-check the analytic optima against brute-force grid search."""

# %%
from noma_fbl import ChannelPair, SystemBudget, maximize_t1_noma, maximize_t1_oma
from noma_fbl import oracle

ch = ChannelPair(0.8, 0.1)
budget = SystemBudget(300, 1e3, 1.0)

# %% [markdown]
# The pinned oracle searches power and rates on a grid under the same rule as
# the solver (far user held at its floor, R2 maximizing its own throughput).
# The joint oracle drops that rule and searches (R1, R2, P2) freely, so it
# can only do better.

# %%
solver = maximize_t1_noma(ch, budget)
grid = oracle.default_noma_grid(ch, budget, rate_step=1e-2, power_divisions=200)
pinned = oracle.refine_noma(ch, budget, grid, rule="pinned")
joint = oracle.refine_noma(ch, budget, grid, rule="joint")
print(f"NOMA solver  T1 = {solver.t1:.5f}  R1 = {solver.r1:.4f}  P2 = {solver.p2:.2f}")
print(f"pinned grid  T1 = {pinned.t1:.5f}  R1 = {pinned.r1:.4f}  P2 = {pinned.p2:.2f}")
print(f"joint grid   T1 = {joint.t1:.5f}  R1 = {joint.r1:.4f}  P2 = {joint.p2:.2f}")

# %%
solver = maximize_t1_oma(ch, budget)
grid = oracle.default_oma_grid(ch, budget, rate_step=1e-2, power_divisions=200)
brute = oracle.refine_oma(ch, budget, grid)
print(f"OMA solver   T1 = {solver.t1:.5f}  N1 = {solver.n1}  R1 = {solver.r1:.4f}")
print(f"grid         T1 = {brute.t1:.5f}  N1 = {brute.n1}  R1 = {brute.r1:.4f}")
