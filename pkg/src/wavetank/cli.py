"""Command-line front end: config parsing, dispatch, deterministic file outputs.

Commands
    simulate   evolve one system and write the trajectory as CSV
    sweep      run a shallowness sweep; write error CSV and a text summary
    verify     run every kernel/resolvent/forcing audit; exit 0 iff all proven
               bounds hold
    field      write both boundary-data extensions on a grid as CSV

Configuration is a flat key=value file (one pair per line, `#` comments);
command-line flags override file values.  Exit codes: 0 success, 1 usage or
configuration error, 2 precision or audit failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .basis import ModalVector, SpectralParams
from .evolution import InputSignal, evolve, limit_system, make_initial, water_system
from .fields import FieldGrid, LateralProfile, dirichlet_extension, neumann_extension, write_field_csv
from .lab import (
    SweepConfig,
    audit_kernels,
    bmu_rate_table,
    random_probe_audit,
    run_sweep,
    sweep_summary,
    write_sweep_csv,
)
from .operators import PrecisionError

__all__ = ["ConfigError", "RunConfig", "parse_config", "dispatch", "main"]

COMMANDS = ("simulate", "sweep", "verify", "field")

# key: (default, help). Order fixes the serialized layout.
CONFIG_KEYS = {
    "out": ("out", "output directory"),
    "mu": ("0.01", "shallowness parameter, in (0, 1]"),
    "mu_list": ("1e-1,1e-2,1e-3,1e-4", "comma-separated decreasing shallowness values in (0, 1]"),
    "k_modes": ("256", "number of nonzero surface modes, >= 1"),
    "l_modes": ("10000", "lateral-mode truncation, >= 1"),
    "dt": ("", "time step; empty selects 1e-3*tau"),
    "tau": ("10.0", "time horizon, > 0"),
    "grid": ("50,50", "field grid resolution NX,NY (>= 2 each)"),
    "signal": ("pulse:0:1:1", "input signal: zero | const:AMP | pulse:T0:T1:AMP"),
    "init": ("smooth8", "initial elevation: zero | cos1 | smooth8 | mode:K:AMP[+...]"),
    "init1": ("zero", "initial velocity, same mini-language as init"),
    "system": ("water", "simulate target: water | limit"),
    "seed": ("20260809", "seed for the resolvent probe audit"),
    "k_max": ("10000", "largest mode index in the kernel audit, >= 1"),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    out: str
    mu: float
    mu_list: Tuple[float, ...]
    k_modes: int
    l_modes: int
    dt: Optional[float]
    tau: float
    grid: Tuple[int, int]
    signal: str
    init: str
    init1: str
    system: str
    seed: int
    k_max: int

    @property
    def effective_dt(self) -> float:
        return self.dt if self.dt is not None else 1e-3 * self.tau

    def to_text(self) -> str:
        """Serialize as the key=value format accepted by parse_config."""
        parts = []
        for key in CONFIG_KEYS:
            val = getattr(self, key)
            if key == "mu_list":
                val = ",".join(f"{m:.17g}" for m in val)
            elif key == "grid":
                val = f"{val[0]},{val[1]}"
            elif key == "dt":
                val = "" if val is None else f"{val:.17g}"
            elif isinstance(val, float):
                val = f"{val:.17g}"
            parts.append(f"{key}={val}")
        return "\n".join(parts) + "\n"


def _parse_pairs(text: str, source: str) -> dict:
    pairs = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{ln}: expected key=value, got {raw.strip()!r}")
        key, val = line.split("=", 1)
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{ln}: unknown key {key!r}; known keys: {', '.join(CONFIG_KEYS)}")
        pairs[key] = val.strip()
    return pairs


def _to_float(key: str, raw: str, lo: float, hi: float, lo_open=True, hi_open=False) -> float:
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {raw!r}") from None
    lo_ok = val > lo if lo_open else val >= lo
    hi_ok = val < hi if hi_open else val <= hi
    if not (math.isfinite(val) and lo_ok and hi_ok):
        lo_b = "(" if lo_open else "["
        hi_b = ")" if hi_open else "]"
        lo_s = "0" if lo == 0 else f"{lo:g}"
        hi_s = "inf" if hi == math.inf else f"{hi:g}"
        raise ConfigError(f"{key} must be in {lo_b}{lo_s}, {hi_s}{hi_b}, got {raw}")
    return val


def _to_int(key: str, raw: str, lo: int) -> int:
    try:
        val = int(raw)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
    if val < lo:
        raise ConfigError(f"{key} must be >= {lo}, got {val}")
    return val


def parse_config(command: str, file_text: str = "", overrides: Optional[dict] = None, source: str = "<config>") -> RunConfig:
    """Build a validated RunConfig from file text plus flag overrides."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    raw = {k: v for k, (v, _) in CONFIG_KEYS.items()}
    raw.update(_parse_pairs(file_text, source))
    for k, v in (overrides or {}).items():
        if v is not None:
            raw[k] = str(v)

    mu = _to_float("mu", raw["mu"], 0.0, 1.0)
    items = [s for s in raw["mu_list"].split(",") if s.strip()]
    if not items:
        raise ConfigError("mu_list must contain at least one value")
    mu_list = tuple(_to_float("mu_list", s, 0.0, 1.0) for s in items)
    if any(b >= a for a, b in zip(mu_list, mu_list[1:])):
        raise ConfigError(f"mu_list must be strictly decreasing, got {raw['mu_list']}")
    grid_items = raw["grid"].split(",")
    if len(grid_items) != 2:
        raise ConfigError(f"grid must be NX,NY, got {raw['grid']!r}")
    grid = (_to_int("grid", grid_items[0], 2), _to_int("grid", grid_items[1], 2))
    dt = None if raw["dt"] == "" else _to_float("dt", raw["dt"], 0.0, math.inf)
    system = raw["system"]
    if system not in ("water", "limit"):
        raise ConfigError(f"system must be water or limit, got {system!r}")
    cfg = RunConfig(
        command=command,
        out=raw["out"],
        mu=mu,
        mu_list=mu_list,
        k_modes=_to_int("k_modes", raw["k_modes"], 1),
        l_modes=_to_int("l_modes", raw["l_modes"], 1),
        dt=dt,
        tau=_to_float("tau", raw["tau"], 0.0, math.inf),
        grid=grid,
        signal=raw["signal"],
        init=raw["init"],
        init1=raw["init1"],
        system=system,
        seed=_to_int("seed", raw["seed"], 0),
        k_max=_to_int("k_max", raw["k_max"], 1),
    )
    # fail early on malformed mini-language specs
    parse_initial_spec(cfg.init, cfg.k_modes)
    parse_initial_spec(cfg.init1, cfg.k_modes)
    make_signal(cfg.signal, 1.0, 1)
    return cfg


def parse_initial_spec(spec: str, K: int) -> ModalVector:
    """Initial-data mini-language: zero | cos1 | smooth8 | mode:K:AMP terms joined by +."""
    spec = spec.strip()
    if spec == "zero":
        return ModalVector.zeros(K)
    if spec == "cos1":
        return ModalVector.unit(1, K)
    if spec == "smooth8":
        c = np.zeros(K + 1)
        top = min(8, K)
        c[1 : top + 1] = 1.0 / np.arange(1, top + 1) ** 2
        return ModalVector(c)
    c = np.zeros(K + 1)
    for term in spec.split("+"):
        parts = term.strip().split(":")
        if len(parts) != 3 or parts[0] != "mode":
            raise ConfigError(f"bad initial-data term {term!r}; expected mode:K:AMP or a preset")
        try:
            k, amp = int(parts[1]), float(parts[2])
        except ValueError:
            raise ConfigError(f"bad initial-data term {term!r}") from None
        if not 0 <= k <= K:
            raise ConfigError(f"initial-data mode {k} outside 0..{K}")
        c[k] += amp
    return ModalVector(c)


def make_signal(spec: str, dt: float, n_steps: int) -> InputSignal:
    """Signal mini-language: zero | const:AMP | pulse:T0:T1:AMP."""
    spec = spec.strip()
    if spec == "zero":
        return InputSignal.zero(dt, n_steps)
    parts = spec.split(":")
    try:
        if parts[0] == "const" and len(parts) == 2:
            return InputSignal.constant(dt, n_steps, float(parts[1]))
        if parts[0] == "pulse" and len(parts) == 4:
            return InputSignal.pulse(dt, n_steps, float(parts[1]), float(parts[2]), float(parts[3]))
    except ValueError:
        pass
    raise ConfigError(f"bad signal spec {spec!r}; expected zero, const:AMP or pulse:T0:T1:AMP")


class _OutputSet:
    """Tracks files written by one command so failures leave no partial outputs."""

    def __init__(self, out_dir: str):
        self.dir = Path(out_dir)
        self.written = []

    def path(self, name: str) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        p = self.dir / name
        self.written.append(p)
        return p

    def discard(self):
        for p in self.written:
            try:
                p.unlink()
            except OSError:
                pass


def _write_text(path: Path, text: str) -> None:
    path.write_bytes(text.encode("ascii"))


def _write_trajectory_csv(path: Path, traj) -> None:
    K = traj.K
    header = (
        "t,"
        + ",".join(f"zeta_{k}" for k in range(K + 1))
        + ","
        + ",".join(f"dzeta_{k}" for k in range(K + 1))
    )
    lines = [header]
    for i in range(traj.times.size):
        row = [f"{traj.times[i]:.17g}"]
        row += [f"{v:.17g}" for v in traj.zeta[i]]
        row += [f"{v:.17g}" for v in traj.zeta_t[i]]
        lines.append(",".join(row))
    _write_text(path, "\n".join(lines) + "\n")


def _cmd_simulate(cfg: RunConfig, out: _OutputSet) -> int:
    dt = cfg.effective_dt
    n = int(round(cfg.tau / dt))
    if cfg.system == "water":
        system = water_system(SpectralParams(mu=cfg.mu, K=cfg.k_modes, L_modes=cfg.l_modes))
    else:
        system = limit_system(cfg.k_modes)
    zeta0 = parse_initial_spec(cfg.init, cfg.k_modes)
    zeta1 = parse_initial_spec(cfg.init1, cfg.k_modes)
    traj = evolve(make_initial(zeta0, zeta1, system), make_signal(cfg.signal, dt, n), system)
    _write_trajectory_csv(out.path("trajectory.csv"), traj)
    return 0


def _cmd_sweep(cfg: RunConfig, out: _OutputSet) -> int:
    dt = cfg.effective_dt
    n = int(round(cfg.tau / dt))
    sweep_cfg = SweepConfig(
        mu_list=cfg.mu_list,
        tau=cfg.tau,
        K=cfg.k_modes,
        L_modes=cfg.l_modes,
        dt=dt,
        zeta0=parse_initial_spec(cfg.init, cfg.k_modes),
        zeta1=parse_initial_spec(cfg.init1, cfg.k_modes),
        signal=make_signal(cfg.signal, dt, n),
    )
    report = run_sweep(sweep_cfg)
    report = replace(report, audit=audit_kernels(k_max=cfg.k_max, l_modes=cfg.l_modes))
    write_sweep_csv(report, out.path("sweep.csv"))
    _write_text(out.path("summary.txt"), sweep_summary(report) + "\n")
    return 0


def _cmd_verify(cfg: RunConfig, out: _OutputSet) -> int:
    audit = audit_kernels(k_max=cfg.k_max, l_modes=cfg.l_modes)
    lines = [audit.table(), ""]
    probe_rows = random_probe_audit(K=cfg.k_modes, seed=cfg.seed)
    lines.append(f"resolvent probe audit (100 random unit probes per decade, seed {cfg.seed})")
    probes_ok = True
    for mu, worst, bound, fitted, ok in probe_rows:
        probes_ok &= ok
        lines.append(
            f"  mu={mu:<9.1e} worst gap {worst:.6e} <= sqrt(mu) = {bound:.6e}"
            f"  [{'PASS' if ok else 'FAIL'}]  fitted C (sqrt channel) {fitted:.4f}"
        )
    lines.append("")
    rate_rows = bmu_rate_table()
    scaled = [r[2] for r in rate_rows]
    spread = max(scaled) / min(scaled)
    lines.append("forcing gap rate audit (dual norm, scaled by mu^(-1/4))")
    for mu, gap, sc in rate_rows:
        lines.append(f"  mu={mu:<9.1e} gap {gap:.6e}  scaled {sc:.6f}")
    rate_ok = spread < 2.0
    lines.append(f"  scaled spread {spread:.4f} < 2  [{'PASS' if rate_ok else 'FAIL'}]")
    ok = audit.passed and probes_ok and rate_ok
    lines.append("")
    lines.append("verify: " + ("all proven bounds hold" if ok else "BOUND VIOLATION"))
    text = "\n".join(lines) + "\n"
    _write_text(out.path("audit.txt"), text)
    sys.stdout.write(text)
    return 0 if ok else 2


def _cmd_field(cfg: RunConfig, out: _OutputSet) -> int:
    params = SpectralParams(mu=cfg.mu, K=cfg.k_modes, L_modes=cfg.l_modes)
    grid = FieldGrid.regular(*cfg.grid)
    eta = parse_initial_spec(cfg.init, cfg.k_modes)
    write_field_csv(dirichlet_extension(eta, params, grid), out.path("field_dirichlet.csv"))
    profile = LateralProfile.constant(1.0, min(cfg.l_modes, 512))
    write_field_csv(neumann_extension(profile, params, grid), out.path("field_neumann.csv"))
    return 0


def dispatch(cfg: RunConfig) -> int:
    """Run one command; on failure remove any files written by this invocation."""
    runner = {
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
        "field": _cmd_field,
    }[cfg.command]
    out = _OutputSet(cfg.out)
    try:
        return runner(cfg, out)
    except Exception:
        out.discard()
        raise


def _config_help() -> str:
    lines = ["configuration keys (file and/or flags; defaults in brackets):"]
    for key, (default, text) in CONFIG_KEYS.items():
        lines.append(f"  {key:<8} {text}  [{default or '1e-3*tau'}]")
    lines += [
        "",
        "initial-data mini-language (init, init1):",
        "  zero | cos1 (unit coefficient on mode 1) | smooth8 (modes 1..8, amplitude 1/k^2)",
        "  | mode:K:AMP terms joined by '+', e.g. mode:1:1+mode:3:0.5",
        "signal mini-language: zero | const:AMP | pulse:T0:T1:AMP (held on [T0, T1))",
    ]
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavetank",
        description=__doc__,
        epilog=_config_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", metavar="PATH", help="key=value configuration file")
    parser.add_argument("--out", metavar="DIR")
    parser.add_argument("--mu", metavar="MU")
    parser.add_argument("--mu-list", dest="mu_list", metavar="M1,M2,...")
    parser.add_argument("--k-modes", dest="k_modes", metavar="K")
    parser.add_argument("--l-modes", dest="l_modes", metavar="L")
    parser.add_argument("--dt", metavar="DT")
    parser.add_argument("--tau", metavar="TAU")
    parser.add_argument("--grid", metavar="NX,NY")
    parser.add_argument("--signal", metavar="SPEC")
    parser.add_argument("--init", metavar="SPEC")
    for key in ("init1", "system", "seed", "k_max"):
        parser.add_argument(f"--{key.replace('_', '-')}", dest=key, metavar=key.upper())
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; remap usage to 1
        return 0 if exc.code == 0 else 1
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        file_text = ""
        source = "<defaults>"
        if args.config is not None:
            try:
                file_text = Path(args.config).read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read config file {args.config!r}: {exc}") from None
            source = args.config
        cfg = parse_config(args.command, file_text, overrides, source=source)
    except ConfigError as exc:
        print(f"wavetank: config error: {exc}", file=sys.stderr)
        return 1
    try:
        return dispatch(cfg)
    except PrecisionError as exc:
        print(f"wavetank: precision error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"wavetank: {cfg.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
