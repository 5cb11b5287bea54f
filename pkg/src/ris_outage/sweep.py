"""Parameter sweeps over SNR for the three evaluation methods, with CSV
output and reconstructed figure presets.

A sweep is a base scenario, an SNR range, an optional list of per-variant
overrides, and a method subset.  Cells (variant x SNR x method) are
independent and may run concurrently; rows are ordered at emit time, and
Monte-Carlo cells use fixed per-chunk substreams, so output is
deterministic for a given spec and seed.

The figure presets reproduce the qualitative curve families of the source
study (outage vs SNR for varying relay counts, reflector counts,
interference splits, and combined relay/reflector settings).  The study
does not state every parameter it plotted with, so preset values of R,
interferer counts, and channel variances are documented reconstructions,
flagged as such in the sweep summary.
"""

import csv
import io
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

from .analytic import (
    METHOD_ANALYTIC,
    METHOD_ASYMPTOTIC,
    METHOD_MONTE_CARLO,
    outage_probability,
)
from .asymptotic import asym_outage_general
from .mc import TrialPlan, estimate_outage, make_plan
from .model import SystemConfig

THREADS_ENV_VAR = "RIS_OUTAGE_THREADS"

METHOD_ALIASES = {
    "a": METHOD_ANALYTIC,
    "analytic": METHOD_ANALYTIC,
    "s": METHOD_ASYMPTOTIC,
    "asymptotic": METHOD_ASYMPTOTIC,
    "m": METHOD_MONTE_CARLO,
    "mc": METHOD_MONTE_CARLO,
    "monte_carlo": METHOD_MONTE_CARLO,
}

CSV_COLUMNS = [
    "N", "K", "I_r", "I_d", "R", "rhoI_r_dB", "rhoI_d_dB",
    "rho_dB", "method", "p", "ci95", "status", "wall_time_ms",
]

_CONFIG_FIELD_NAMES = {f.name for f in fields(SystemConfig)}
_INT_KEYS = {"N", "K", "I_r", "I_d", "n_trials", "seed", "chunk_size"}
_FLOAT_KEYS = {
    "R", "rho_dB", "rhoI_r_dB", "rhoI_d_dB",
    "sigma2_rd", "sigma2_Ir", "sigma2_Id",
    "start_dB", "stop_dB", "step_dB",
}
_BOOL_KEYS = {"timing"}
_BOOL_VALUES = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


class ConfigError(ValueError):
    """Malformed sweep configuration (unknown key, bad type, bad invariant)."""


@dataclass(frozen=True)
class SweepSpec:
    """Validated description of one sweep run."""

    base: SystemConfig
    snr_range: tuple[float, float, float]  # start, stop, step in dB
    vary: tuple[dict, ...] = ({},)
    methods: tuple[str, ...] = (METHOD_ANALYTIC,)
    mc_plan: TrialPlan = make_plan(1_000_000)
    axis: str = "rho_dB"
    preset: str | None = None
    timing: bool = False

    def __post_init__(self):
        start, stop, step = self.snr_range
        if step <= 0:
            raise ConfigError(f"step_dB must be > 0, got {step}")
        if start >= stop:
            raise ConfigError(f"start_dB must be < stop_dB, got {start} >= {stop}")
        if self.axis != "rho_dB":
            raise ConfigError(f"only the rho_dB axis is supported, got {self.axis!r}")
        if not self.methods:
            raise ConfigError("at least one method is required")
        for m in self.methods:
            if m not in (METHOD_ANALYTIC, METHOD_ASYMPTOTIC, METHOD_MONTE_CARLO):
                raise ConfigError(f"unknown method {m!r}")
        if not self.vary:
            raise ConfigError("vary must contain at least one (possibly empty) override set")

    def snr_points(self) -> list[float]:
        start, stop, step = self.snr_range
        n = int(round((stop - start) / step))
        points = [start + i * step for i in range(n + 1)]
        return [p for p in points if p <= stop + 1e-9]

    def variants(self) -> list[SystemConfig]:
        return [self.base.with_overrides(**ov) for ov in self.vary]


@dataclass(frozen=True)
class SweepRow:
    """One CSV row: flattened config, SNR point, method, and outcome."""

    N: int
    K: int
    I_r: int
    I_d: int
    R: float
    rhoI_r_dB: float
    rhoI_d_dB: float
    rho_dB: float
    method: str
    p: float | None
    ci95: float | None
    status: str
    wall_time_ms: float | None


# Reconstructed curve families; R = 1, two interferers per node, and unit
# variances are documented defaults, not values stated by the source study.
PRESETS: dict[str, dict] = {
    "fig1": {
        "_note": "outage vs SNR for K = 1, 2, 3 relays (N = 2, 10 dB interference)",
        "N": 2, "K": 2, "rhoI_r_dB": 10.0, "rhoI_d_dB": 10.0,
        "start_dB": 0.0, "stop_dB": 60.0, "step_dB": 5.0,
        "vary": [{"K": 1}, {"K": 2}, {"K": 3}],
    },
    "fig2": {
        "_note": "outage vs SNR for N = 1, 2, 4, 6 reflectors (K = 3, 10 dB interference)",
        "N": 2, "K": 3, "rhoI_r_dB": 10.0, "rhoI_d_dB": 10.0,
        "start_dB": 0.0, "stop_dB": 60.0, "step_dB": 5.0,
        "vary": [{"N": 1}, {"N": 2}, {"N": 4}, {"N": 6}],
    },
    "fig3": {
        "_note": "outage vs SNR for relay/destination interference splits (K = 2, N = 4)",
        "N": 4, "K": 2,
        "start_dB": 0.0, "stop_dB": 60.0, "step_dB": 5.0,
        "vary": [
            {"rhoI_r_dB": 30.0, "rhoI_d_dB": 30.0},
            {"rhoI_r_dB": 15.0, "rhoI_d_dB": 30.0},
            {"rhoI_r_dB": 30.0, "rhoI_d_dB": 15.0},
            {"rhoI_r_dB": 5.0, "rhoI_d_dB": 5.0},
        ],
    },
    "fig4": {
        "_note": "outage vs SNR for combined K/N settings (10 dB interference)",
        "N": 1, "K": 2, "rhoI_r_dB": 10.0, "rhoI_d_dB": 10.0,
        "start_dB": 0.0, "stop_dB": 60.0, "step_dB": 5.0,
        "vary": [
            {"K": 2, "N": 1}, {"K": 2, "N": 2}, {"K": 2, "N": 4},
            {"K": 3, "N": 1}, {"K": 3, "N": 2}, {"K": 3, "N": 4},
        ],
    },
}

_DEFAULTS = {
    "start_dB": 0.0,
    "stop_dB": 40.0,
    "step_dB": 5.0,
    "methods": (METHOD_ANALYTIC,),
    "n_trials": 1_000_000,
    "seed": 42,
    "chunk_size": 250_000,
}


def parse_methods(text: str) -> tuple[str, ...]:
    """Parse a comma-separated method list, accepting a/s/m shorthands."""
    out = []
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token not in METHOD_ALIASES:
            raise ConfigError(f"unknown method {token!r} (expected a, s, m or full names)")
        method = METHOD_ALIASES[token]
        if method not in out:
            out.append(method)
    if not out:
        raise ConfigError("method list is empty")
    return tuple(out)


def _parse_vary(text: str) -> tuple[dict, ...]:
    """Parse variant overrides: groups split by ';', each 'key=value, ...'."""
    groups = []
    for group in text.split(";"):
        group = group.strip()
        if not group:
            continue
        overrides = {}
        for item in group.split(","):
            if "=" not in item:
                raise ConfigError(f"vary entry {item.strip()!r} is not key=value")
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in _CONFIG_FIELD_NAMES:
                raise ConfigError(f"vary refers to unknown config field {key!r}")
            overrides[key] = _coerce(key, value.strip(), context="vary")
        groups.append(overrides)
    if not groups:
        raise ConfigError("vary is empty")
    return tuple(groups)


def _coerce(key: str, raw: str, context: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError:
        raise ConfigError(f"{context}: value {raw!r} for key {key!r} is not numeric") from None
    if key in _BOOL_KEYS:
        flag = _BOOL_VALUES.get(raw.strip().lower())
        if flag is None:
            raise ConfigError(f"{context}: value {raw!r} for key {key!r} is not a boolean")
        return flag
    return raw


def parse_config_file(path: str) -> dict:
    """Read a flat 'key = value' config file with '#' comments."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key in ("methods",):
            values[key] = parse_methods(raw)
        elif key == "vary":
            values[key] = _parse_vary(raw)
        elif key == "preset":
            values[key] = raw
        elif key in _CONFIG_FIELD_NAMES or key in _INT_KEYS or key in _FLOAT_KEYS or key in _BOOL_KEYS:
            values[key] = _coerce(key, raw, context=f"{path}:{lineno}")
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def build_sweep_spec(values: dict) -> SweepSpec:
    """Assemble and validate a SweepSpec from flat key/value settings."""
    values = dict(values)
    preset = values.pop("preset", None)
    merged: dict = dict(_DEFAULTS)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r} (have {sorted(PRESETS)})")
        preset_values = {k: v for k, v in PRESETS[preset].items() if k != "_note"}
        merged.update(preset_values)
    merged.update(values)

    config_kwargs = {k: merged[k] for k in _CONFIG_FIELD_NAMES if k in merged}
    if "N" not in config_kwargs or "K" not in config_kwargs:
        raise ConfigError("config must set at least N and K (or use a preset)")
    try:
        base = SystemConfig(**config_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    vary = merged.get("vary", ({},))
    if isinstance(vary, list):
        vary = tuple(vary)
    methods = merged["methods"]
    if isinstance(methods, str):
        methods = parse_methods(methods)
    plan = make_plan(
        n_trials=int(merged["n_trials"]),
        seed=int(merged["seed"]),
        chunk_size=int(merged["chunk_size"]),
    )
    return SweepSpec(
        base=base,
        snr_range=(float(merged["start_dB"]), float(merged["stop_dB"]), float(merged["step_dB"])),
        vary=vary,
        methods=tuple(methods),
        mc_plan=plan,
        preset=preset,
        timing=bool(merged.get("timing", False)),
    )


def parse_config(path: str | None = None, overrides: dict | None = None) -> SweepSpec:
    """Build a SweepSpec from an optional config file plus flag overrides.

    Flag overrides win over file values, which win over preset values,
    which win over the documented defaults (R = 1, unit variances,
    I_r = I_d = 2, one million trials, seed 42).
    """
    values = parse_config_file(path) if path else {}
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return build_sweep_spec(values)


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "0")
    try:
        requested = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ConfigError(f"{THREADS_ENV_VAR} must be >= 0, got {requested}")
    if requested == 0:
        return min(8, os.cpu_count() or 1)
    return requested


def _evaluate_cell(cfg: SystemConfig, method: str, plan: TrialPlan, timing: bool):
    started = time.perf_counter()
    p: float | None = None
    ci: float | None = None
    status = "ok"
    try:
        if method == METHOD_ANALYTIC:
            p = outage_probability(cfg).p
        elif method == METHOD_ASYMPTOTIC:
            p = asym_outage_general(cfg)
        else:
            est = estimate_outage(cfg, plan)
            p, ci = est.p_hat, est.ci95_halfwidth
    except Exception as exc:  # per-cell failures must not abort the sweep
        status = f"error: {type(exc).__name__}: {exc}"
    elapsed_ms = (time.perf_counter() - started) * 1e3
    return p, ci, status, (elapsed_ms if timing else None)


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every (variant, SNR, method) cell of the sweep.

    Cells run on a thread pool sized by the RIS_OUTAGE_THREADS environment
    variable (0 or unset: automatic).  Rows come back sorted by variant
    order, then SNR, then method order, independent of scheduling.
    """
    cells = []
    for v_idx, variant in enumerate(spec.variants()):
        for rho_db in spec.snr_points():
            cfg = variant.with_overrides(rho_dB=rho_db)
            for m_idx, method in enumerate(spec.methods):
                cells.append((v_idx, rho_db, m_idx, method, cfg))

    workers = _worker_count()
    if workers == 1:
        outcomes = [
            _evaluate_cell(cfg, method, spec.mc_plan, spec.timing)
            for (_, _, _, method, cfg) in cells
        ]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(
                pool.map(
                    lambda cell: _evaluate_cell(cell[4], cell[3], spec.mc_plan, spec.timing),
                    cells,
                )
            )

    rows = []
    for (v_idx, rho_db, m_idx, method, cfg), (p, ci, status, ms) in zip(cells, outcomes):
        rows.append(
            (
                (v_idx, rho_db, m_idx),
                SweepRow(
                    N=cfg.N, K=cfg.K, I_r=cfg.I_r, I_d=cfg.I_d, R=cfg.R,
                    rhoI_r_dB=cfg.rhoI_r_dB, rhoI_d_dB=cfg.rhoI_d_dB,
                    rho_dB=rho_db, method=method, p=p,
                    ci95=ci, status=status, wall_time_ms=ms,
                ),
            )
        )
    rows.sort(key=lambda pair: pair[0])
    return [row for _, row in rows]


def _cell_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # shortest round-trip decimal
    return str(value)


def rows_to_csv_text(rows: list[SweepRow]) -> str:
    """Render rows as CSV text with the fixed column order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell_text(getattr(row, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def emit_csv(rows: list[SweepRow], path: str) -> None:
    """Write rows to path as UTF-8 CSV (header always present)."""
    text = rows_to_csv_text(rows)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path!r}: {exc}") from exc
