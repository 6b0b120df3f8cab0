"""Finite-blocklength NOMA vs OMA for a two-user downlink."""

from .fbl import (
    LinkRealization,
    achievable_rate,
    capacity,
    dispersion,
    effective_throughput,
    error_probability,
)
from .model import ChannelPair, InfeasibleError, SystemBudget, power_from_snr_db
from .noma import (
    NomaSinrs,
    NomaSolution,
    effective_error_u1,
    maximize_t1_noma,
    noma_sinrs,
    optimal_r1,
    solve_power_and_r2,
    t1_of_r1,
)
from .oma import OmaSolution, maximize_t1_oma, oma_snr, optimal_r1_oma, solve_slot_allocation
from .special_math import q_function, q_inverse

__version__ = "0.1.0"
