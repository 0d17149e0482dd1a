"""Command-line front end.

    fracspm solve          one solve, writes the coefficient vector
    fracspm converge       L-infinity error versus N for SPM and PGS-tau
    fracspm penalty-sweep  SPM error versus a multiplier on the penalty parameters
    fracspm eigen-sweep    spectrum diagnostics over an (alpha, p) grid
    fracspm diffuse        implicit-Euler fractional diffusion with no-flux ends
    fracspm selftest       seeded randomized checks of the numerical kernels

Every option may also come from a flat ``key = value`` file given with
``--config`` (keys are the long flag names with dashes replaced by
underscores; ``#`` starts a comment). Flags override file values, which
override the benchmark preset. CSV outputs start with ``# key=value`` lines
describing the run, so any CSV can be passed back as ``--config`` to rerun it.

Exit status: 0 success, 1 input error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .assembly import BCKind, DerivKind, Method, ProblemSpec, default_penalty
from .errors import ConfigurationError, FracSpmError
from .experiments import (
    REFERENCE_N,
    convergence_sweep,
    diffusion_run,
    eigen_sweep,
    linf_error,
    penalty_sweep,
    reference_solution,
    solve,
)
from .problems import BENCHMARKS, RHS_NAMES, make_spec

__all__ = ["RunConfig", "build_config", "load_config_file", "run", "main", "OUTPUT_ENV"]

OUTPUT_ENV = "FRACSPM_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "fracspm-out"
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
COMMANDS = ("solve", "converge", "penalty-sweep", "eigen-sweep", "diffuse", "selftest")

# -- value parsers -------------------------------------------------------------


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigurationError(f"expected a number, got {text!r}") from None


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigurationError(f"expected an integer, got {text!r}") from None


def _weight(text: str):
    return None if text.strip() in ("", "default") else _float(text)


def _items(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _int_list(text: str) -> tuple:
    return tuple(_int(t) for t in _items(text))


def _str_list(text: str) -> tuple:
    return tuple(_items(text))


def _float_list(text: str) -> tuple:
    """Comma list; an item start:stop:step expands to an inclusive grid."""
    out = []
    for item in _items(text):
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise ConfigurationError(f"range must be start:stop:step, got {item!r}")
            start, stop, step = (_float(s) for s in parts)
            if step <= 0.0 or stop < start:
                raise ConfigurationError(f"empty or invalid range {item!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            out.extend(round(start + i * step, 12) for i in range(count))
        else:
            out.append(_float(item))
    return tuple(out)


# key -> (parser, help)
OPTIONS = {
    "benchmark": (str, "preset problem: ex1 (FDBC), ex2 (R-L FNBC), ex3 (Caputo Dirichlet), ex4 (Caputo FNBC)"),
    "case": (_int, "preset case: 1 manufactured exact solution, 2 f = 1 + cos(pi x)"),
    "alpha": (_float, "fractional order in (1, 2)"),
    "p": (_float, "left/right mixing weight in [0, 1]"),
    "c": (_float, "reaction coefficient c >= 0"),
    "bc": (str, "boundary family: " + ", ".join(b.value for b in BCKind)),
    "deriv": (str, "derivative kind: rl or caputo (diffuse: selects the model)"),
    "rhs": (str, "right-hand side: " + ", ".join(RHS_NAMES)),
    "g1": (_float, "boundary datum at x = -1"),
    "g2": (_float, "boundary datum at x = +1"),
    "weight_a": (_weight, "first exponent of the R-L inner-product weight, or 'default'"),
    "weight_b": (_weight, "second exponent of the R-L inner-product weight, or 'default'"),
    "N": (_int, "highest mode index"),
    "N_list": (_int_list, "ascending comma list of N"),
    "method": (str, "SPM or PGS-tau"),
    "methods": (_str_list, "comma list of methods"),
    "reference_N": (_int, "N of the SPM reference when no exact solution is known"),
    "multipliers": (_float_list, "comma list of penalty multipliers"),
    "alphas": (_float_list, "alpha grid, comma list or start:stop:step"),
    "p_list": (_float_list, "comma list of p values"),
    "dt": (_float, "time step"),
    "t_end": (_float, "final time (multiple of dt)"),
    "snapshots": (_float_list, "snapshot times (multiples of dt)"),
    "points": (_int, "number of interior output points"),
    "seed": (_int, "seed for randomized checks"),
    "workers": (_int, "worker processes for sweeps (default: available cores)"),
    "output": (str, "output CSV path (diffuse: the profile file; mass goes to <stem>-mass.csv)"),
    "output_dir": (str, f"output directory (default ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT_DIR})"),
}
# keys that never change results and are left out of the CSV metadata
_RUNTIME_KEYS = ("workers", "output", "output_dir", "config")
# metadata-only keys accepted (and ignored) when a CSV is read back as a config file
_INFO_KEYS = ("command", "mu", "nu", "c_alpha_p", "resolved_weight")

COMMON_DEFAULTS = {"benchmark": "ex1", "case": 1, "alpha": 1.2, "seed": 0, "workers": None,
                   "output": None, "output_dir": None}
COMMAND_DEFAULTS = {
    "solve": {"N": 32, "method": "SPM"},
    "converge": {"N_list": (8, 16, 32, 64), "methods": ("SPM",), "reference_N": REFERENCE_N},
    "penalty-sweep": {"N": 32, "multipliers": (1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3),
                      "reference_N": REFERENCE_N},
    "eigen-sweep": {"N": 100, "alphas": _float_list("1.1:1.9:0.1"), "p_list": (0.5, 0.8)},
    "diffuse": {"deriv": "caputo", "alpha": 1.5, "N": 100, "dt": 0.0025, "t_end": 2.0,
                "snapshots": (0.0, 0.05, 0.1, 2.0), "points": 100},
    "selftest": {},
}
COMMAND_KEYS = {
    "solve": ("N", "method"),
    "converge": ("N_list", "methods", "reference_N"),
    "penalty-sweep": ("N", "multipliers", "reference_N"),
    "eigen-sweep": ("N", "alphas", "p_list"),
    "diffuse": ("N", "dt", "t_end", "snapshots", "points"),
    "selftest": ("seed",),
}
_PROBLEM_KEYS = ("benchmark", "case", "alpha", "p", "c", "bc", "deriv", "rhs", "g1", "g2",
                 "weight_a", "weight_b")


# -- configuration -------------------------------------------------------------


def load_config_file(path) -> dict:
    """Parse a flat key = value file. '# key=value' lines (CSV metadata) are read too."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc.strerror}") from None
    seen_metadata = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        from_comment = line.startswith("#")
        if from_comment:
            line = line.lstrip("#").strip()
            seen_metadata = seen_metadata or "=" in line
        if not line or "=" not in line:
            if line and not from_comment:
                if seen_metadata:
                    break  # CSV body after the metadata block
                raise ConfigurationError(f"{path}:{lineno}: expected key = value")
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if key in _INFO_KEYS or key in _RUNTIME_KEYS:
            continue
        if key not in OPTIONS:
            if from_comment:
                continue
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = OPTIONS[key][0](value)
    return values


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one CLI run."""

    command: str
    benchmark: str
    case: int
    alpha: float
    p: float | None
    c: float
    bc: str
    deriv: str | None
    rhs: str
    g1: float
    g2: float
    weight_a: float | None
    weight_b: float | None
    N: int | None = None
    N_list: tuple = ()
    method: str = "SPM"
    methods: tuple = ()
    reference_N: int = REFERENCE_N
    multipliers: tuple = ()
    alphas: tuple = ()
    p_list: tuple = ()
    dt: float = 0.0
    t_end: float = 0.0
    snapshots: tuple = ()
    points: int = 100
    seed: int = 0
    workers: int | None = None
    output: str | None = None
    output_dir: str | None = None

    def spec(self) -> ProblemSpec:
        weight = None
        if self.weight_a is not None or self.weight_b is not None:
            if self.weight_a is None or self.weight_b is None:
                raise ConfigurationError("weight_a and weight_b must be given together")
            weight = (self.weight_a, self.weight_b)
        spec = make_spec(self.alpha, self.p, self.c, self.bc, self.rhs, self.g1, self.g2, weight)
        if self.deriv is not None and DerivKind(self.deriv) is not spec.deriv_kind:
            raise ConfigurationError(
                f"boundary condition {self.bc!r} is incompatible with derivative kind {self.deriv!r}")
        return spec

    def metadata(self, spec: ProblemSpec | None = None) -> list[tuple[str, object]]:
        """(key, value) pairs for the CSV header; reading them back reproduces the run."""
        keys = _PROBLEM_KEYS + COMMAND_KEYS[self.command]
        if self.command == "diffuse":
            keys = ("alpha", "p", "deriv") + COMMAND_KEYS["diffuse"]
        items: list[tuple[str, object]] = [("command", self.command)]
        for key in keys:
            items.append((key, getattr(self, key)))
        if spec is not None:
            resolved = {"g1": spec.g1, "g2": spec.g2, "deriv": spec.deriv_kind.value,
                        "bc": spec.bc_kind.value, "rhs": spec.rhs_name}
            items = [(k, resolved.get(k, v)) for k, v in items]
            items += [("resolved_weight", (spec.weight.a, spec.weight.b)), ("mu", spec.frac.mu),
                      ("nu", spec.frac.nu), ("c_alpha_p", spec.frac.c_alpha_p)]
        return items

    def output_path(self, default_name: str) -> Path:
        if self.output:
            return Path(self.output)
        base = self.output_dir or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT_DIR
        return Path(base) / default_name


def _preset(benchmark: str, case: int) -> dict:
    if benchmark not in BENCHMARKS:
        raise ConfigurationError(f"unknown benchmark {benchmark!r}; choose from {', '.join(BENCHMARKS)}")
    bench = BENCHMARKS[benchmark]
    if case not in (1, 2):
        raise ConfigurationError(f"case must be 1 or 2, got {case}")
    out = {"bc": bench.bc.value, "p": bench.p, "c": bench.c_values[0], "deriv": None,
           "weight_a": None, "weight_b": None, "g1": 0.0, "g2": 0.0}
    if case == 1:
        out["rhs"] = bench.case1_rhs
    else:
        out["rhs"] = "one-plus-cos-pi"
        out["g1"], out["g2"] = bench.case2_g
    return out


def build_config(command: str, flags: dict, file_values: dict | None = None) -> RunConfig:
    """Merge defaults < benchmark preset < config file < flags and validate."""
    if command not in COMMANDS:
        raise ConfigurationError(f"unknown command {command!r}")
    file_values = dict(file_values or {})
    flags = {k: v for k, v in flags.items() if v is not None}
    merged = {**COMMON_DEFAULTS, **COMMAND_DEFAULTS[command]}
    for src in (file_values, flags):
        for key in ("benchmark", "case"):
            if key in src:
                merged[key] = src[key]
    preset = _preset(merged["benchmark"], merged["case"])
    if command == "eigen-sweep":
        preset["rhs"] = "zero"
    if command == "diffuse":
        preset["p"] = None
    merged = {**merged, **preset, **COMMAND_DEFAULTS[command]}
    merged.update(file_values)
    merged.update(flags)
    names = {f.name for f in fields(RunConfig)}
    cfg = RunConfig(command=command, **{k: v for k, v in merged.items() if k in names})
    _validate(cfg)
    return cfg


def _check_alpha(alpha: float):
    if not 1.0 < alpha < 2.0:
        raise ConfigurationError(f"alpha must lie in (1, 2), got {alpha}")


def _check_p(p: float):
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"p must lie in [0, 1], got {p}")


def _validate(cfg: RunConfig):
    _check_alpha(cfg.alpha)
    if cfg.p is not None:
        _check_p(cfg.p)
    if cfg.workers is not None and cfg.workers < 1:
        raise ConfigurationError("workers must be at least 1")
    if cfg.command in ("solve", "penalty-sweep", "eigen-sweep", "diffuse") and (cfg.N is None or cfg.N < 2):
        raise ConfigurationError(f"N must be at least 2, got {cfg.N}")
    if cfg.command == "solve":
        Method(cfg.method) if cfg.method in {m.value for m in Method} else _bad_method(cfg.method)
    if cfg.command == "converge":
        if not cfg.N_list or list(cfg.N_list) != sorted(cfg.N_list) or min(cfg.N_list) < 2:
            raise ConfigurationError("N_list must be ascending with every N >= 2")
        for m in cfg.methods:
            if m not in {x.value for x in Method}:
                _bad_method(m)
    if cfg.command in ("converge", "penalty-sweep") and cfg.reference_N < 2:
        raise ConfigurationError("reference_N must be at least 2")
    if cfg.command == "penalty-sweep" and any(not (m > 0.0 and math.isfinite(m)) for m in cfg.multipliers):
        raise ConfigurationError("penalty multipliers must be positive and finite")
    if cfg.command == "eigen-sweep":
        if not cfg.alphas or not cfg.p_list:
            raise ConfigurationError("alphas and p_list must be non-empty")
        for a in cfg.alphas:
            _check_alpha(a)
        for p in cfg.p_list:
            _check_p(p)
    if cfg.command == "diffuse":
        if cfg.deriv not in ("rl", "caputo"):
            raise ConfigurationError(f"deriv must be rl or caputo, got {cfg.deriv!r}")
        if cfg.dt <= 0.0 or cfg.t_end < 0.0 or cfg.points < 1:
            raise ConfigurationError("need dt > 0, t_end >= 0 and points >= 1")
        if list(cfg.snapshots) != sorted(set(cfg.snapshots)):
            raise ConfigurationError("snapshot times must be strictly increasing")
    if cfg.command in ("solve", "converge", "penalty-sweep", "eigen-sweep"):
        cfg.spec()


def _bad_method(name: str):
    raise ConfigurationError(f"unknown method {name!r}; choose SPM or PGS-tau")


# -- output --------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return "default"
    if isinstance(value, tuple):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def write_csv(path: Path, metadata, header: str, rows) -> Path:
    """Metadata comment lines, then the header and full-precision rows."""
    buf = io.StringIO()
    for key, value in metadata:
        buf.write(f"# {key}={_fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header.split(","))
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue())
    return path


def _say(text: str):
    print(text, flush=True)


# -- commands ------------------------------------------------------------------


def _cmd_solve(cfg: RunConfig) -> Path:
    spec = cfg.spec()
    sol = solve(spec, cfg.N, Method(cfg.method))
    coeffs = np.asarray(sol.coeffs)
    if spec.exact is not None:
        _say(f"{cfg.method} N={cfg.N} linf_error={linf_error(sol, spec.exact):.3e} (exact solution)")
    else:
        _say(f"{cfg.method} N={cfg.N} solved; no exact solution for rhs={spec.rhs_name}")
    path = cfg.output_path(f"solve-{spec.bc_kind.value}-{spec.rhs_name}-{cfg.method}-N{cfg.N}.csv")
    return write_csv(path, cfg.metadata(spec), "k,coefficient", enumerate(coeffs))


def _cmd_converge(cfg: RunConfig) -> Path:
    spec = cfg.spec()
    ref = None if spec.exact is not None else reference_solution(spec, cfg.reference_N)
    rows = []
    for m in cfg.methods:
        report = convergence_sweep(spec, cfg.N_list, Method(m), reference=ref)
        for r in report.rows:
            rows.append((m, r.N, spec.alpha, spec.p, spec.c, spec.bc_kind.value, r.rho_minus,
                         r.rho_plus, r.linf_error, r.decay_ratio))
            _say(f"{m:8s} N={r.N:4d} linf_error={r.linf_error:.3e} decay_ratio={r.decay_ratio:.3g}")
    path = cfg.output_path(f"converge-{spec.bc_kind.value}-{spec.rhs_name}-alpha{spec.alpha:g}.csv")
    header = "method,N,alpha,p,c,bc,rho_minus,rho_plus,linf_error,decay_ratio"
    return write_csv(path, cfg.metadata(spec), header, rows)


def _cmd_penalty_sweep(cfg: RunConfig) -> Path:
    spec = cfg.spec()
    ref = None if spec.exact is not None else reference_solution(spec, cfg.reference_N)
    report = penalty_sweep(spec, cfg.N, cfg.multipliers, reference=ref)
    rows = []
    for s, r in zip(cfg.multipliers, report.rows):
        rows.append((s, r.N, spec.alpha, spec.p, spec.c, spec.bc_kind.value, r.rho_minus, r.rho_plus,
                     r.linf_error))
        _say(f"multiplier={s:.3g} rho_-={r.rho_minus:.3e} rho_+={r.rho_plus:.3e} linf_error={r.linf_error:.3e}")
    path = cfg.output_path(f"penalty-sweep-{spec.bc_kind.value}-{spec.rhs_name}-N{cfg.N}.csv")
    header = "multiplier,N,alpha,p,c,bc,rho_minus,rho_plus,linf_error"
    return write_csv(path, cfg.metadata(spec), header, rows)


def _cmd_eigen_sweep(cfg: RunConfig) -> Path:
    spec = cfg.spec()
    workers = cfg.workers if cfg.workers is not None else (os.cpu_count() or 1)
    result = eigen_sweep(spec, cfg.alphas, cfg.N, cfg.p_list, workers=workers)
    for r in result:
        _say(f"alpha={r.alpha:.3g} p={r.p:.3g} N={r.N} min_real_part={r.min_real_part:.6e} "
             f"min_symmetric_eig={r.min_symmetric_eig:.6e}")
    path = cfg.output_path(f"eigen-sweep-{spec.bc_kind.value}-N{cfg.N}.csv")
    return write_csv(path, cfg.metadata(spec), "alpha,p,N,min_real_part,min_symmetric_eig", result)


def _cmd_diffuse(cfg: RunConfig) -> Path:
    p = cfg.p if cfg.p is not None else (0.25 if cfg.deriv == "caputo" else 0.75)
    cfg = RunConfig(**{**{f.name: getattr(cfg, f.name) for f in fields(cfg)}, "p": p})
    run_ = diffusion_run(cfg.deriv, cfg.alpha, p, cfg.N, cfg.dt, cfg.t_end,
                         snapshot_times=cfg.snapshots)
    x = -1.0 + 2.0 * np.arange(1, cfg.points + 1) / (cfg.points + 1)
    rows = []
    for t, sol in run_.snapshots:
        u = sol(x)
        rows.extend((t, xi, ui) for xi, ui in zip(x, u))
        _say(f"t={t:g} max|u-1/2|={np.max(np.abs(u - 0.5)):.4e} u(x0)={u[0]:.4g} "
             f"u(center)={float(sol(np.array([0.0]))[0]):.4g} u(x_last)={u[-1]:.4g}")
    drift = max(abs(m - 1.0) for _, m in run_.mass_series)
    _say(f"steps={run_.steps} dt={run_.dt:g} max|mass-1|={drift:.3e}")
    path = cfg.output_path(f"diffuse-{cfg.deriv}-profiles.csv")
    mass_path = path.with_name(path.stem.replace("-profiles", "") + "-mass.csv")
    meta = cfg.metadata()
    write_csv(mass_path, meta, "time,mass", run_.mass_series)
    return write_csv(path, meta, "time,x,u", rows)


def _cmd_selftest(cfg: RunConfig) -> Path:
    from .selftest import run_selftest

    results = run_selftest(cfg.seed)
    for r in results:
        _say(f"{'PASS' if r.passed else 'FAIL'} {r.name}: value={r.value:.3e} tolerance={r.tolerance:.1e}")
    path = cfg.output_path(f"selftest-seed{cfg.seed}.csv")
    write_csv(path, cfg.metadata(), "check,passed,value,tolerance",
              [(r.name, r.passed, r.value, r.tolerance) for r in results])
    if not all(r.passed for r in results):
        raise ArithmeticError(f"{sum(not r.passed for r in results)} self-test check(s) failed")
    return path


_HANDLERS = {
    "solve": _cmd_solve,
    "converge": _cmd_converge,
    "penalty-sweep": _cmd_penalty_sweep,
    "eigen-sweep": _cmd_eigen_sweep,
    "diffuse": _cmd_diffuse,
    "selftest": _cmd_selftest,
}

_SUMMARIES = {
    "solve": "one solve, writes the coefficient vector",
    "converge": "L-infinity error versus N for SPM and PGS-tau",
    "penalty-sweep": "SPM error versus a multiplier on the penalty parameters",
    "eigen-sweep": "spectrum diagnostics over an (alpha, p) grid",
    "diffuse": "implicit-Euler fractional diffusion with no-flux ends",
    "selftest": "seeded randomized checks of the numerical kernels",
}


def run(cfg: RunConfig) -> Path:
    """Execute a validated configuration; returns the main output path."""
    return _HANDLERS[cfg.command](cfg)


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(f"{self.prog}: {message}")


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def _typed(parse):
    # argparse replaces ValueError text with a generic message; keep ours
    def convert(text):
        try:
            return parse(text)
        except ConfigurationError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    convert.__name__ = parse.__name__.lstrip("_")
    return convert


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracspm", description="Spectral penalty solvers for two-sided fractional BVPs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=_SUMMARIES[name])
        cmd.add_argument("--config", default=None, help="flat key = value file (flags override it)")
        for key, (parse, text) in OPTIONS.items():
            cmd.add_argument(_flag(key), dest=key, type=_typed(parse), default=None, help=text)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        flags = vars(args)
        command = flags.pop("command")
        config_path = flags.pop("config")
        file_values = load_config_file(config_path) if config_path else {}
        cfg = build_config(command, flags, file_values)
        path = run(cfg)
    except (ConfigurationError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"fracspm: input error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"fracspm: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, FracSpmError) as exc:
        print(f"fracspm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _say(f"wrote {path}")
    return EXIT_OK
