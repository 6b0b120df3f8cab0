"""Parameter sweeps behind the NOMA vs OMA comparison curves."""

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import fbl
from .model import ChannelPair, InfeasibleError, SystemBudget
from .noma import maximize_t1_noma, noma_sinrs, solve_power_and_r2, t1_of_r1
from .oma import maximize_t1_oma, oma_snr

KINDS = {
    "rate_sweep": "r1",
    "t2_sweep": "t2_floor",
    "blocklength_sweep": "n_total",
    "min_blocklength": "t1_target",
}
SCHEMES = ("noma", "oma")
SOLUTION_FIELDS = {
    "noma": ("r1", "r2", "p1", "p2", "t2"),
    "oma": ("r1", "r2", "p1", "p2", "n1", "n2", "t2"),
}
DEFAULT_N_CAP = 10000


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    channel: ChannelPair
    budget: SystemBudget
    values: tuple
    schemes: tuple = SCHEMES
    n_cap: int = DEFAULT_N_CAP  # min_blocklength only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; expected one of {sorted(KINDS)}")
        values = tuple(self.values)
        if not values:
            raise ValueError("a sweep needs at least one value")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        schemes = tuple(s for s in SCHEMES if s in self.schemes)
        if not schemes or len(schemes) != len(set(self.schemes)):
            raise ValueError(f"schemes must be a non-empty subset of {SCHEMES}, got {self.schemes!r}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "schemes", schemes)

    @property
    def variable(self):
        return KINDS[self.kind]


@dataclass
class SweepRow:
    value: float
    t1: dict = field(default_factory=dict)  # scheme -> float, None when infeasible
    solutions: dict = field(default_factory=dict)  # scheme -> solution, None when infeasible
    blocklength: dict = field(default_factory=dict)  # min_blocklength: scheme -> N or None

    def gap(self):
        """NOMA minus OMA throughput, an infeasible scheme counting as zero."""
        if "noma" not in self.t1 or "oma" not in self.t1:
            return None
        return (self.t1["noma"] or 0.0) - (self.t1["oma"] or 0.0)


def max_t1(scheme, ch, budget):
    if scheme == "noma":
        return maximize_t1_noma(ch, budget)
    if scheme == "oma":
        return maximize_t1_oma(ch, budget)
    raise ValueError(f"unknown scheme {scheme!r}")


def min_blocklength(ch, p_avg, t2_floor, t1_target, scheme, n_cap=DEFAULT_N_CAP, n_min=2, window=8):
    """Smallest blocklength whose optimal user-1 throughput reaches `t1_target`.

    Doubling search for a passing N, bisection below it, then a scan of the
    `window` blocklengths under the answer (the throughput need not be
    monotone in N).  Returns ``None`` when nothing up to `n_cap` passes.
    """
    if t1_target <= 0:
        return n_min

    cache = {}

    def passes(n):
        if n not in cache:
            sol = max_t1(scheme, ch, SystemBudget(n, p_avg, t2_floor))
            cache[n] = sol.feasible and sol.t1 >= t1_target
        return cache[n]

    lo, hi = n_min - 1, n_min  # lo fails (or is below range), hi candidate
    while not passes(hi):
        if hi >= n_cap:
            return None
        lo, hi = hi, min(2 * hi, n_cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid
    for n in range(max(n_min, hi - window), hi):
        if passes(n):
            return n
    return hi


def _rate_sweep_rows(spec):
    ch, budget = spec.channel, spec.budget
    n = budget.n_total
    curves = {}
    if "noma" in spec.schemes:
        try:
            split = solve_power_and_r2(ch, budget)
        except InfeasibleError:
            curves["noma"] = None
        else:
            sinrs = noma_sinrs(split.p1, split.p2, ch)
            sol = maximize_t1_noma(ch, budget)
            curves["noma"] = (lambda r, s=sinrs, r2=split.r2: t1_of_r1(r, s, r2, n), sol)
    if "oma" in spec.schemes:
        sol = maximize_t1_oma(ch, budget)
        if not sol.feasible:
            curves["oma"] = None
        else:
            g1 = oma_snr(sol.p1, ch.h1_gain, ch.noise1)
            curves["oma"] = (
                lambda r, g=g1, n1=sol.n1: (n1 / n) * r * (1.0 - fbl.error_probability(g, n1, r)),
                sol,
            )
    rows = []
    for r1 in spec.values:
        row = SweepRow(r1)
        for scheme in spec.schemes:
            if curves[scheme] is None:
                row.t1[scheme] = None
                row.solutions[scheme] = None
            else:
                curve, sol = curves[scheme]
                row.t1[scheme] = float(curve(float(r1)))
                row.solutions[scheme] = sol
        rows.append(row)
    return rows


def _point_row(spec, value):
    if spec.kind == "t2_sweep":
        budget = replace(spec.budget, t2_floor=float(value))
    else:
        budget = replace(spec.budget, n_total=int(value))
    row = SweepRow(value)
    for scheme in spec.schemes:
        sol = max_t1(scheme, spec.channel, budget)
        row.t1[scheme] = sol.t1 if sol.feasible else None
        row.solutions[scheme] = sol if sol.feasible else None
    return row


def _min_n_row(spec, value):
    row = SweepRow(value)
    for scheme in spec.schemes:
        row.blocklength[scheme] = min_blocklength(
            spec.channel, spec.budget.p_avg, spec.budget.t2_floor, float(value), scheme, n_cap=spec.n_cap
        )
    return row


def _evaluate(args):
    spec, value = args
    if spec.kind == "min_blocklength":
        return _min_n_row(spec, value)
    return _point_row(spec, value)


def run_sweep(spec, max_workers=None):
    """Evaluate every sweep value; rows come back in input order.

    Infeasible points are recorded in the row (``None`` entries) and never
    stop the sweep.  ``max_workers > 1`` spreads points over processes.
    """
    if spec.kind == "rate_sweep":
        return _rate_sweep_rows(spec)
    jobs = [(spec, v) for v in spec.values]
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_evaluate, jobs))
    return [_evaluate(job) for job in jobs]


def columns(spec):
    """CSV header for a sweep of this kind and scheme set."""
    cols = [spec.variable]
    if spec.kind == "min_blocklength":
        return cols + [f"n_{s}" for s in spec.schemes]
    cols += [f"t1_{s}" for s in spec.schemes]
    if len(spec.schemes) == 2:
        cols.append("gap")
    cols += [f"feasible_{s}" for s in spec.schemes]
    for s in spec.schemes:
        cols += [f"{name}_{s}" for name in SOLUTION_FIELDS[s]]
    return cols


def row_values(spec, row):
    """Cell values of `row` in :func:`columns` order (``None`` for empty cells)."""
    out = [row.value]
    if spec.kind == "min_blocklength":
        return out + [row.blocklength[s] for s in spec.schemes]
    out += [row.t1[s] for s in spec.schemes]
    if len(spec.schemes) == 2:
        out.append(row.gap())
    out += [row.solutions[s] is not None for s in spec.schemes]
    for s in spec.schemes:
        sol = row.solutions[s]
        out += [None if sol is None else getattr(sol, name) for name in SOLUTION_FIELDS[s]]
    return out


def format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return ""
    if value == 0.0:
        return "0"
    return f"{value:.9g}"


def rows_to_csv(spec, rows):
    """Serialise sweep rows as CSV text (header first, ``\\n`` line endings)."""
    if not rows:
        raise ValueError("nothing to write: no rows")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns(spec))
    for row in rows:
        writer.writerow([format_cell(v) for v in row_values(spec, row)])
    return buf.getvalue()


def emit_csv(spec, rows, path):
    """Write sweep rows to `path` as UTF-8 CSV."""
    text = rows_to_csv(spec, rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path
