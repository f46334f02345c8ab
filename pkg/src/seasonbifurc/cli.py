"""Command-line front end.

Five commands over one flat config:

* ``simulate``    integrate a trajectory over several periods -> CSV
* ``equilibrium`` find a periodic equilibrium -> CSV + monodromy report
* ``sweep``       bifurcation diagram over a tau mesh -> CSV (+ SVG)
* ``critical``    locate critical season lengths by every available route
* ``validate``    run the closed-form cross-check suite

Config files are plain sectioned key=value text; every value can also be
set from the command line with ``--set section.key=value``.  All numeric
defaults reproduce the reference parameter set (two species, alpha=(2,1),
beta_11=beta_22=1, beta_21=0.25, beta_12=0, mu=(1,1), dt=0.1/365,
tol=1e-15, max 50000 periods, initial datum half the coexistence
equilibrium, sharp seasons).

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bifurcation import (
    SolverSettings,
    secondary_tau_analytic,
    secondary_tau_scan,
    primary_tau,
    sweep_diagram,
)
from .equilibrium import find_equilibrium, l2_norm_component
from .errors import ConfigError, SeasonBifurcError
from .integrator import integrate_horizon, write_states_csv
from .linearization import monodromy_report, transversality
from .models import LVMalthusParams, lv_malthus_model
from .mollifier import SeasonSchedule
from .oracles import coexistence_equilibrium, cross_check_suite
from .svgplot import line_chart

__all__ = ["RunConfig", "parse_config", "execute_command", "main"]

_ENV_WORKERS = "SEASON_BIFURC_WORKERS"
_COMMANDS = ("simulate", "equilibrium", "sweep", "critical", "validate")


@dataclass
class RunConfig:
    """Fully resolved run parameters (defaults = reference setup)."""

    alpha_1: float = 2.0
    alpha_2: float = 1.0
    beta_11: float = 1.0
    beta_12: float = 0.0
    beta_21: float = 0.25
    beta_22: float = 1.0
    mu_1: float = 1.0
    mu_2: float = 1.0
    tau: float = 0.45
    epsilon: float = 0.0
    dt: float = 0.1 / 365
    tol: float = 1e-15
    max_periods: int = 50000
    initial: str = "half-coexistence"
    tau_start: float = 0.0
    tau_stop: float = 1.0
    tau_count: int = 366
    workers: int = 1
    residual_bound: float = 0.02
    scan_tol: float = 1e-8
    scan_max_periods: int = 5000
    periods: int = 10
    out_dir: str = "."

    def params(self) -> LVMalthusParams:
        return LVMalthusParams(
            alpha=np.array([self.alpha_1, self.alpha_2]),
            beta=np.array(
                [[self.beta_11, self.beta_12], [self.beta_21, self.beta_22]]
            ),
            mu=np.array([self.mu_1, self.mu_2]),
        )

    def schedule(self) -> SeasonSchedule:
        if self.epsilon == 0.0:
            return SeasonSchedule.sharp(self.tau)
        return SeasonSchedule.mollified(self.tau, self.epsilon)

    def initial_state(self) -> np.ndarray:
        if self.initial == "half-coexistence":
            return 0.5 * coexistence_equilibrium(self.params())
        parts = self.initial.split(",")
        if len(parts) != 2:
            raise ConfigError(
                "initial must be 'half-coexistence' or two comma-separated "
                f"numbers, got {self.initial!r}"
            )
        try:
            return np.array([float(p) for p in parts])
        except ValueError as exc:
            raise ConfigError(f"bad initial state {self.initial!r}: {exc}") from exc

    def solver(self) -> SolverSettings:
        init = None
        if self.initial != "half-coexistence":
            init = tuple(float(x) for x in self.initial_state())
        return SolverSettings(
            dt=self.dt,
            tol=self.tol,
            max_periods=self.max_periods,
            initial=init,
        )

    def tau_mesh(self) -> np.ndarray:
        if self.tau_count == 1:
            return np.array([self.tau_start])
        k = np.arange(self.tau_count)
        return self.tau_start + (self.tau_stop - self.tau_start) * k / (
            self.tau_count - 1
        )


# section -> key -> (RunConfig attribute, converter)
def _positive(name):
    def conv(raw: str):
        v = float(raw)
        if not np.isfinite(v) or v <= 0:
            raise ValueError(f"{name} must be a positive real, got {raw!r}")
        return v

    return conv


def _nonneg(name):
    def conv(raw: str):
        v = float(raw)
        if not np.isfinite(v) or v < 0:
            raise ValueError(f"{name} must be a nonnegative real, got {raw!r}")
        return v

    return conv


def _int_min(name, lo):
    def conv(raw: str):
        try:
            v = int(raw)
        except ValueError:
            raise ValueError(f"{name} must be an integer, got {raw!r}") from None
        if v < lo:
            raise ValueError(f"{name} must be at least {lo}, got {v}")
        return v

    return conv


def _unit_open(name):
    def conv(raw: str):
        v = float(raw)
        if not 0.0 < v < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {raw!r}")
        return v

    return conv


def _unit_closed(name):
    def conv(raw: str):
        v = float(raw)
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {raw!r}")
        return v

    return conv


_SCHEMA: dict[str, dict[str, tuple[str, object]]] = {
    "model": {
        "alpha_1": ("alpha_1", _positive("alpha_1")),
        "alpha_2": ("alpha_2", _positive("alpha_2")),
        "beta_11": ("beta_11", _positive("beta_11")),
        "beta_12": ("beta_12", _nonneg("beta_12")),
        "beta_21": ("beta_21", _nonneg("beta_21")),
        "beta_22": ("beta_22", _positive("beta_22")),
        "mu_1": ("mu_1", _positive("mu_1")),
        "mu_2": ("mu_2", _positive("mu_2")),
    },
    "schedule": {
        "tau": ("tau", _unit_open("tau")),
        "epsilon": ("epsilon", _nonneg("epsilon")),
    },
    "solver": {
        "dt": ("dt", _positive("dt")),
        "tol": ("tol", _positive("tol")),
        "max_periods": ("max_periods", _int_min("max_periods", 2)),
        "initial": ("initial", str),
    },
    "sweep": {
        "tau_start": ("tau_start", _unit_closed("tau_start")),
        "tau_stop": ("tau_stop", _unit_closed("tau_stop")),
        "tau_count": ("tau_count", _int_min("tau_count", 1)),
        "workers": ("workers", _int_min("workers", 1)),
    },
    "critical": {
        "residual_bound": ("residual_bound", _positive("residual_bound")),
        "scan_tol": ("scan_tol", _positive("scan_tol")),
        "scan_max_periods": ("scan_max_periods", _int_min("scan_max_periods", 2)),
    },
    "simulate": {
        "periods": ("periods", _int_min("periods", 1)),
    },
    "output": {
        "directory": ("out_dir", str),
    },
}

_ATTR_TO_KEY = {
    attr: f"{section}.{key}"
    for section, keys in _SCHEMA.items()
    for key, (attr, _) in keys.items()
}


def _apply(cfg: RunConfig, section: str, key: str, raw: str, line=None) -> None:
    if section not in _SCHEMA:
        raise ConfigError(
            f"unknown section [{section}] (known: {', '.join(sorted(_SCHEMA))})",
            line=line,
        )
    table = _SCHEMA[section]
    if key not in table:
        raise ConfigError(
            f"unknown key {key!r} in [{section}] "
            f"(known: {', '.join(sorted(table))})",
            line=line,
        )
    attr, conv = table[key]
    try:
        value = conv(raw)
    except ValueError as exc:
        raise ConfigError(str(exc), line=line) from None
    setattr(cfg, attr, value)


def _validate_semantics(cfg: RunConfig) -> None:
    try:
        cfg.params()
    except ValueError as exc:
        raise ConfigError(f"inadmissible model parameters: {exc}") from None
    if cfg.epsilon > 0:
        if cfg.epsilon >= 1:
            raise ConfigError(f"epsilon must be below 1, got {cfg.epsilon}")
        if not cfg.epsilon / 2 < cfg.tau < 1 - cfg.epsilon / 2:
            raise ConfigError(
                f"tau={cfg.tau} violates the admissible range "
                f"(eps/2, 1-eps/2) = ({cfg.epsilon / 2}, {1 - cfg.epsilon / 2}) "
                f"for epsilon={cfg.epsilon}"
            )
    if cfg.tau_stop <= cfg.tau_start and cfg.tau_count > 1:
        raise ConfigError(
            f"tau_stop={cfg.tau_stop} must exceed tau_start={cfg.tau_start}"
        )
    if cfg.dt > 0.5:
        raise ConfigError(f"dt={cfg.dt} must not exceed half a period")
    cfg.initial_state()


def parse_config(path=None, overrides=()) -> RunConfig:
    """Load a config file (optional) and apply dotted-key overrides.

    Precedence: built-in defaults < file < SEASON_BIFURC_WORKERS < --set.
    Unknown sections/keys and out-of-range values raise
    :class:`~seasonbifurc.errors.ConfigError`, file entries with the
    offending line number.
    """
    cfg = RunConfig()
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        section = None
        for lineno, rawline in enumerate(text.splitlines(), start=1):
            stripped = rawline.strip()
            if not stripped or stripped.startswith(("#", ";")):
                continue
            if stripped.startswith("[") and stripped.endswith("]"):
                section = stripped[1:-1].strip()
                if not section:
                    raise ConfigError("empty section header", line=lineno)
                if section not in _SCHEMA:
                    raise ConfigError(
                        f"unknown section [{section}] "
                        f"(known: {', '.join(sorted(_SCHEMA))})",
                        line=lineno,
                    )
                continue
            if "=" not in stripped:
                raise ConfigError(
                    f"expected 'key = value', got {stripped!r}", line=lineno
                )
            if section is None:
                raise ConfigError(
                    "key outside any [section] header", line=lineno
                )
            key, _, raw = stripped.partition("=")
            _apply(cfg, section, key.strip(), raw.strip(), line=lineno)
    env_workers = os.environ.get(_ENV_WORKERS)
    if env_workers is not None:
        _apply(cfg, "sweep", "workers", env_workers.strip())
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        dotted, _, raw = item.partition("=")
        if "." not in dotted:
            raise ConfigError(
                f"--set key must be section.key, got {dotted.strip()!r}"
            )
        section, _, key = dotted.strip().partition(".")
        _apply(cfg, section, key.strip(), raw.strip())
    _validate_semantics(cfg)
    return cfg


# Execution knobs that cannot change any computed value.  Left out of the
# provenance header and hash so output files stay byte-identical across
# worker counts and checkpoints survive a rescheduled resume.
_RUNTIME_ATTRS = frozenset({"workers"})


def resolved_lines(cfg: RunConfig) -> list[str]:
    """Canonical 'section.key = value' lines for provenance headers."""
    out = []
    for f in dataclasses.fields(RunConfig):
        if f.name in _RUNTIME_ATTRS:
            continue
        value = getattr(cfg, f.name)
        rendered = repr(value) if isinstance(value, float) else str(value)
        out.append(f"{_ATTR_TO_KEY[f.name]} = {rendered}")
    return out


def config_hash(cfg: RunConfig) -> str:
    digest = hashlib.sha256("\n".join(resolved_lines(cfg)).encode())
    return digest.hexdigest()[:16]


def _header_comments(cfg: RunConfig, command: str) -> list[str]:
    return [
        f"seasonbifurc {command}",
        f"config_hash = {config_hash(cfg)}",
        *resolved_lines(cfg),
    ]


def _cmd_simulate(cfg: RunConfig, out_dir: Path, plot: bool) -> int:
    model = lv_malthus_model(cfg.params())
    traj = integrate_horizon(
        model, cfg.schedule(), cfg.initial_state(), cfg.periods, cfg.dt
    )
    csv_path = out_dir / "trajectory.csv"
    write_states_csv(
        csv_path, traj.times, traj.states, comments=_header_comments(cfg, "simulate")
    )
    print(f"wrote {csv_path} ({cfg.periods} periods, {len(traj.times)} nodes)")
    if plot:
        svg_path = out_dir / "trajectory.svg"
        line_chart(
            svg_path,
            traj.times,
            [("u_1", traj.states[:, 0]), ("u_2", traj.states[:, 1])],
            title=f"trajectory, tau={cfg.tau:g}, eps={cfg.epsilon:g}",
            xlabel="t",
            ylabel="state",
        )
        print(f"wrote {svg_path}")
    return 0


def _cmd_equilibrium(cfg: RunConfig, out_dir: Path, plot: bool) -> int:
    model = lv_malthus_model(cfg.params())
    schedule = cfg.schedule()
    orbit = find_equilibrium(
        model,
        schedule,
        cfg.initial_state(),
        dt=cfg.dt,
        tol=cfg.tol,
        max_periods=cfg.max_periods,
    )
    csv_path = out_dir / "orbit.csv"
    write_states_csv(
        csv_path,
        orbit.times,
        orbit.states,
        comments=_header_comments(cfg, "equilibrium"),
    )
    report = monodromy_report(model, schedule, orbit)
    trans = None
    if report.unit_multiplier_count == 1:
        trans = transversality(model, schedule, report, orbit)
    lines = [
        f"converged = {orbit.converged}",
        f"iterations = {orbit.iterations}",
        f"residual = {orbit.residual:.6e}",
        f"norm_1 = {l2_norm_component(orbit, 0):.12e}",
        f"norm_2 = {l2_norm_component(orbit, 1):.12e}",
        report.summary(trans),
    ]
    text = "\n".join(lines)
    print(text)
    report_path = out_dir / "equilibrium_report.txt"
    report_path.write_text(text + "\n", encoding="utf-8")
    print(f"wrote {csv_path}")
    print(f"wrote {report_path}")
    if plot:
        svg_path = out_dir / "orbit.svg"
        line_chart(
            svg_path,
            orbit.times,
            [("u_1", orbit.states[:, 0]), ("u_2", orbit.states[:, 1])],
            title=f"periodic orbit, tau={cfg.tau:g}, eps={cfg.epsilon:g}",
            xlabel="t",
            ylabel="state",
        )
        print(f"wrote {svg_path}")
    return 0


def _diagram_row_line(row) -> str:
    norms = ",".join(repr(float(v)) for v in row.norms)
    return f"{row.tau!r},{norms},{row.iterations},{int(row.converged)}"


def _parse_diagram_csv(path: Path):
    """Read back a diagram CSV; returns (hash or None, rows as tuples)."""
    file_hash = None
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("config_hash = "):
                file_hash = body.split("=", 1)[1].strip()
            continue
        if not line or line.startswith("tau,"):
            continue
        parts = line.split(",")
        rows.append(
            (
                float(parts[0]),
                (float(parts[1]), float(parts[2])),
                int(parts[3]),
                bool(int(parts[4])),
            )
        )
    return file_hash, rows


def _cmd_sweep(cfg: RunConfig, out_dir: Path, plot: bool) -> int:
    params = cfg.params()
    mesh = cfg.tau_mesh()
    csv_path = out_dir / "diagram.csv"
    done = 0
    if csv_path.exists():
        file_hash, existing = _parse_diagram_csv(csv_path)
        if file_hash == config_hash(cfg) and len(existing) <= len(mesh):
            done = len(existing)
            if done:
                print(f"resuming sweep from row {done} of {len(mesh)}")
        else:
            csv_path.unlink()
    if done == 0:
        header = "".join(f"# {c}\n" for c in _header_comments(cfg, "sweep"))
        csv_path.write_text(
            header + "tau,norm_1,norm_2,iterations,converged\n", encoding="utf-8"
        )
    if done < len(mesh):
        with open(csv_path, "a", encoding="utf-8") as fh:

            def flush_row(row):
                fh.write(_diagram_row_line(row) + "\n")
                fh.flush()

            sweep_diagram(
                params,
                cfg.epsilon,
                mesh[done:],
                solver=cfg.solver(),
                workers=cfg.workers,
                on_row=flush_row,
            )
    _, table = _parse_diagram_csv(csv_path)
    print(f"wrote {csv_path} ({len(table)} rows)")
    if plot:
        taus = np.array([r[0] for r in table])
        n1 = np.array([r[1][0] for r in table])
        n2 = np.array([r[1][1] for r in table])
        vlines = []
        try:
            pair = primary_tau(params, cfg.epsilon)
            lead = min(pair, key=lambda c: c.tau_value)
            vlines.append((lead.tau_value, "primary"))
        except ValueError:
            pass
        if cfg.epsilon == 0.0:
            try:
                vlines.append(
                    (secondary_tau_analytic(params).tau_value, "secondary")
                )
            except ValueError:
                pass
        svg_path = out_dir / "diagram.svg"
        line_chart(
            svg_path,
            taus,
            [("norm_1", n1), ("norm_2", n2)],
            title=f"bifurcation diagram, eps={cfg.epsilon:g}",
            xlabel="tau",
            ylabel="L2 norm",
            vlines=vlines,
        )
        print(f"wrote {svg_path}")
    return 0


def _cmd_critical(cfg: RunConfig, out_dir: Path, plot: bool) -> int:
    params = cfg.params()
    lines = []
    pair = primary_tau(params, cfg.epsilon)
    for crit in pair:
        lines.append(crit.describe())
    analytic = None
    if cfg.epsilon == 0.0:
        try:
            analytic = secondary_tau_analytic(params)
            lines.append(analytic.describe())
        except ValueError as exc:
            lines.append(f"secondary closed form unavailable: {exc}")
    else:
        lines.append("secondary closed form unavailable for epsilon > 0")
    mesh = cfg.tau_mesh()
    scan_solver = SolverSettings(
        dt=cfg.dt,
        tol=cfg.scan_tol,
        max_periods=cfg.scan_max_periods,
        initial=cfg.solver().initial,
    )
    rows = sweep_diagram(
        params, cfg.epsilon, mesh, solver=scan_solver, workers=cfg.workers
    )
    scanned = secondary_tau_scan(
        params, cfg.epsilon, rows, residual_bound=cfg.residual_bound
    )
    if scanned is None:
        lines.append("secondary mesh scan: no crossing detected")
    else:
        lines.append(scanned.describe())
        if analytic is not None:
            gap = abs(analytic.tau_value - scanned.tau_value)
            cell = float(np.max(np.diff(mesh))) if len(mesh) > 1 else 0.0
            ok = "within" if gap <= cell + 1e-12 else "OUTSIDE"
            lines.append(
                f"cross-check |closed_form - mesh_scan| = {gap:.6e} "
                f"({ok} one mesh cell = {cell:.6e})"
            )
    text = "\n".join(lines)
    print(text)
    report_path = out_dir / "critical_report.txt"
    report_path.write_text(text + "\n", encoding="utf-8")
    print(f"wrote {report_path}")
    return 0


def _cmd_validate(cfg: RunConfig, out_dir: Path, plot: bool) -> int:
    results = cross_check_suite(dt=cfg.dt)
    for res in results:
        print(res.row())
    failed = [r for r in results if not r.passed]
    print(
        f"{len(results) - len(failed)}/{len(results)} checks passed"
        + (f", {len(failed)} FAILED" if failed else "")
    )
    return 4 if failed else 0


_DISPATCH = {
    "simulate": _cmd_simulate,
    "equilibrium": _cmd_equilibrium,
    "sweep": _cmd_sweep,
    "critical": _cmd_critical,
    "validate": _cmd_validate,
}


def execute_command(
    command: str, cfg: RunConfig, out_dir=None, plot: bool = False
) -> int:
    """Run one CLI command; returns the process exit code."""
    if command not in _DISPATCH:
        raise ConfigError(
            f"unknown command {command!r} (known: {', '.join(_COMMANDS)})"
        )
    out = Path(out_dir) if out_dir is not None else Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _DISPATCH[command](cfg, out, plot)


def _error_record(exc: Exception) -> str:
    record = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ConfigError) and exc.line is not None:
        record["line"] = exc.line
    return json.dumps(record, sort_keys=True)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="season-bifurc",
        description=(
            "Numerical toolkit for seasonally switched population models: "
            "periodic equilibria, Floquet analysis, and bifurcation "
            "diagrams in the season length."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "integrate a trajectory over several periods",
        "equilibrium": "find a periodic equilibrium and its monodromy report",
        "sweep": "build a bifurcation diagram over a tau mesh",
        "critical": "locate primary and secondary critical season lengths",
        "validate": "run the closed-form cross-check suite",
    }
    for name in _COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("--config", default=None, help="config file path")
        sp.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override one config value (repeatable)",
        )
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument(
            "--plot", action="store_true", help="also render an SVG chart"
        )
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config, args.overrides)
        return execute_command(args.command, cfg, out_dir=args.out, plot=args.plot)
    except ConfigError as exc:
        print(_error_record(exc), file=sys.stderr)
        return 2
    except OSError as exc:
        print(_error_record(exc), file=sys.stderr)
        return 2
    except SeasonBifurcError as exc:
        print(_error_record(exc), file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
