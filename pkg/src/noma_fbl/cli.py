"""Command-line front end: ``noma-fbl {solve,sweep,min-n,verify}``."""

import argparse
import dataclasses
import sys
from dataclasses import dataclass

import numpy as np

from . import experiments, oracle
from .model import ChannelPair, SystemBudget, power_from_snr_db
from .noma import maximize_t1_noma, noma_sinrs
from .oma import maximize_t1_oma, oma_snr

COMMANDS = ("solve", "sweep", "min-n", "verify")
SWEEP_KINDS = {"r1": "rate_sweep", "t2": "t2_sweep", "n": "blocklength_sweep"}
DEFAULT_RANGES = {"r1": "0:12:0.05", "t2": "0:4:0.1", "n": "10:300:10"}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    scheme: str = "both"
    h1: float = None
    h2: float = None
    noise1: float = 1.0
    noise2: float = 1.0
    snr_db: float = None
    p_avg: float = None
    n: int = None
    t2_floor: float = 0.0
    sweep: str = None
    range: str = None
    target_t1: float = None
    out: str = None
    verify_grid: str = None

    @property
    def power(self):
        if self.p_avg is not None:
            return self.p_avg
        return power_from_snr_db(self.snr_db, self.noise1)

    @property
    def schemes(self):
        return ("noma", "oma") if self.scheme == "both" else (self.scheme,)

    def channel(self):
        return ChannelPair(self.h1, self.h2, self.noise1, self.noise2)

    def budget(self, n=None):
        return SystemBudget(self.n if n is None else n, self.power, self.t2_floor)

    def dump(self):
        """``key = value`` text readable by :func:`read_config_file`."""
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if value is not None:
                lines.append(f"{f.name.replace('_', '-')} = {value!r}" if isinstance(value, float) else
                             f"{f.name.replace('_', '-')} = {value}")
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {"h1": float, "h2": float, "noise1": float, "noise2": float, "snr_db": float,
                "p_avg": float, "n": int, "t2_floor": float, "target_t1": float}


def read_config_file(path):
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in RunConfig.__dataclass_fields__:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def _coerce(key, value):
    if value is None:
        return None
    kind = _FIELD_TYPES.get(key, str)
    try:
        return kind(value)
    except ValueError:
        raise UsageError(f"bad value for {key!r}: {value!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="noma-fbl", description="NOMA vs OMA with finite blocklength")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key = value file; flags override it")
    parser.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
    parser.add_argument("--scheme", choices=("noma", "oma", "both"))
    parser.add_argument("--h1", type=float, help="|h1| (amplitude)")
    parser.add_argument("--h2", type=float, help="|h2| (amplitude)")
    parser.add_argument("--noise1", type=float)
    parser.add_argument("--noise2", type=float)
    parser.add_argument("--snr-db", type=float, help="average SNR in dB (P = noise1 * 10^(snr/10))")
    parser.add_argument("--p-avg", type=float, help="average power, linear")
    parser.add_argument("--n", type=int, help="total blocklength N")
    parser.add_argument("--t2-floor", type=float, help="throughput floor of user 2")
    parser.add_argument("--sweep", choices=tuple(SWEEP_KINDS))
    parser.add_argument("--range", help="lo:hi:step, inclusive")
    parser.add_argument("--target-t1", type=float)
    parser.add_argument("--out", help="CSV output path (stdout if omitted)")
    parser.add_argument("--verify-grid", help="r_step,p_step (p_step as a fraction of the power range)")
    return parser


def parse_config(argv):
    """Return ``(command, dump, RunConfig)`` from command-line arguments and optional file."""
    parser = build_parser()
    args = parser.parse_args(argv)
    merged = {}
    if args.config:
        merged.update(read_config_file(args.config))
    for key in RunConfig.__dataclass_fields__:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    if "snr_db" in merged and "p_avg" in merged:
        raise UsageError("give exactly one of 'snr-db' and 'p-avg', not both")
    cfg = RunConfig(**{k: _coerce(k, v) for k, v in merged.items()})
    validate(cfg, args.command)
    return args.command, args.dump_config, cfg


def validate(cfg, command):
    if cfg.scheme not in ("noma", "oma", "both"):
        raise UsageError(f"bad value for 'scheme': {cfg.scheme!r}")
    for key in ("h1", "h2"):
        if getattr(cfg, key) is None:
            raise UsageError(f"missing required key {key!r}")
    if cfg.snr_db is None and cfg.p_avg is None:
        raise UsageError("missing required key: one of 'snr-db' or 'p-avg'")
    for key in ("h1", "h2", "noise1", "noise2", "p_avg"):
        value = getattr(cfg, key)
        if value is not None and value <= 0:
            raise UsageError(f"{key!r} must be positive, got {value}")
    if cfg.t2_floor < 0:
        raise UsageError(f"'t2-floor' must be >= 0, got {cfg.t2_floor}")
    needs_n = command in ("solve", "verify") or (command == "sweep" and cfg.sweep != "n")
    if needs_n and cfg.n is None:
        raise UsageError("missing required key 'n'")
    if command == "sweep" and cfg.sweep is None:
        raise UsageError("missing required key 'sweep'")
    if command == "min-n" and cfg.target_t1 is None:
        raise UsageError("missing required key 'target-t1'")
    if cfg.sweep is not None and cfg.sweep not in SWEEP_KINDS:
        raise UsageError(f"bad value for 'sweep': {cfg.sweep!r}")


def parse_range(text, integer=False):
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected lo:hi:step") from None
    if step <= 0 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    values = oracle.grid_axis(lo, hi, step)
    if integer:
        return tuple(int(round(v)) for v in values)
    # round away accumulated float noise so sweep values print cleanly
    return tuple(float(v) for v in np.round(values, 12))


def _fmt(x):
    return experiments.format_cell(x) or "-"


def cmd_solve(cfg, stdout):
    ch, budget = cfg.channel(), cfg.budget()
    ok = True
    header = ["scheme", "feasible", "t1", "t2", "r1", "r2", "p1", "p2", "n1", "n2"]
    stdout.write("\t".join(header) + "\n")
    for scheme in cfg.schemes:
        sol = experiments.max_t1(scheme, ch, budget)
        ok = ok and sol.feasible
        n1 = getattr(sol, "n1", budget.n_total)
        n2 = getattr(sol, "n2", budget.n_total)
        cells = [scheme, _fmt(sol.feasible), _fmt(sol.t1), _fmt(sol.t2), _fmt(sol.r1), _fmt(sol.r2),
                 _fmt(sol.p1), _fmt(sol.p2), _fmt(n1 if sol.feasible else None), _fmt(n2 if sol.feasible else None)]
        stdout.write("\t".join(cells) + "\n")
    return 0 if ok else 1


def _write(text, cfg, stdout):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def cmd_sweep(cfg, stdout):
    kind = SWEEP_KINDS[cfg.sweep]
    values = parse_range(cfg.range or DEFAULT_RANGES[cfg.sweep], integer=cfg.sweep == "n")
    n = cfg.n if cfg.n is not None else values[0]
    spec = experiments.SweepSpec(kind, cfg.channel(), cfg.budget(n), values, cfg.schemes)
    _write(experiments.rows_to_csv(spec, experiments.run_sweep(spec)), cfg, stdout)
    return 0


def cmd_min_n(cfg, stdout):
    if cfg.range:
        targets = parse_range(cfg.range)
    else:
        targets = (cfg.target_t1,)
    spec = experiments.SweepSpec(
        "min_blocklength", cfg.channel(), SystemBudget(2, cfg.power, cfg.t2_floor), targets, cfg.schemes
    )
    _write(experiments.rows_to_csv(spec, experiments.run_sweep(spec)), cfg, stdout)
    return 0


def verify_report(cfg, rate_step=1e-3, power_fraction=5e-4, r1_step=1e-4):
    """Solver-vs-oracle comparison lines for the configured point."""
    ch, budget = cfg.channel(), cfg.budget()
    divisions = max(1, int(round(1.0 / power_fraction)))
    lines = [f"config: h1={ch.h1_gain} h2={ch.h2_gain} P={budget.p_avg:.9g} N={budget.n_total} "
             f"T2floor={budget.t2_floor}"]
    for scheme in cfg.schemes:
        sol = experiments.max_t1(scheme, ch, budget)
        if scheme == "noma":
            grid = oracle.default_noma_grid(ch, budget, rate_step, divisions)
            ref = oracle.refine_noma(ch, budget, grid)
        else:
            grid = oracle.default_oma_grid(ch, budget, rate_step, divisions)
            ref = oracle.refine_oma(ch, budget, grid)
        if not sol.feasible or not ref.feasible:
            lines.append(f"{scheme}: solver feasible={sol.feasible} oracle feasible={ref.feasible}")
            continue
        # 1-D check of the rate root with everything else held at the solver's point
        if scheme == "noma":
            s = noma_sinrs(sol.p1, sol.p2, ch)
            eps21 = sol.diagnostics["eps21"]
            r_grid, _ = oracle.scan_argmax(
                lambda r: oracle.noma_t1_curve(r, s.g1, s.g1_prime, eps21, budget.n_total),
                0.0, sol.r1 * 1.5 + 1.0, r1_step)
        else:
            g1 = oma_snr(sol.p1, ch.h1_gain, ch.noise1)
            r_grid, _ = oracle.scan_argmax(
                lambda r: oracle.oma_t1_curve(r, g1, sol.n1, budget.n_total),
                0.0, sol.r1 * 1.5 + 1.0, r1_step)
        lines.append(
            f"{scheme}: T1 solver={sol.t1:.9g} oracle={ref.t1:.9g} |dT1|={abs(sol.t1 - ref.t1):.3g} "
            f"|dR1 vs rate grid|={abs(sol.r1 - r_grid):.3g}"
        )
    return "\n".join(lines) + "\n"


def cmd_verify(cfg, stdout):
    kwargs = {}
    if cfg.verify_grid:
        try:
            r_step, p_frac = (float(x) for x in cfg.verify_grid.split(","))
        except ValueError:
            raise UsageError(f"bad value for 'verify-grid': {cfg.verify_grid!r}") from None
        kwargs = {"rate_step": r_step, "power_fraction": p_frac}
    _write(verify_report(cfg, **kwargs), cfg, stdout)
    return 0


HANDLERS = {"solve": cmd_solve, "sweep": cmd_sweep, "min-n": cmd_min_n, "verify": cmd_verify}


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    try:
        command, dump, cfg = parse_config(sys.argv[1:] if argv is None else argv)
        if dump:
            stdout.write(cfg.dump())
            return 0
        return HANDLERS[command](cfg, stdout)
    except UsageError as exc:
        sys.stderr.write(f"noma-fbl: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
