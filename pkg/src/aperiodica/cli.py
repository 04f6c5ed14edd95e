"""Command-line entry point.

Exit codes: 0 pass, 1 fail, 2 indeterminate, 3 configuration error
(malformed JSON, unknown ids, out-of-range values), 4 runtime error.

A function description is a corpus id or a JSON object
``{"corpus": id, "n": 1, "params": {...}, "radius": R, "step": h}``, given
inline, as a file path, or as ``$APERIODICA_DATA_DIR/<id>.json`` (which
overrides the built-in corpus entry of that name).
"""
from __future__ import annotations

import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

from . import corpus
from .problems import ProblemError
from .report import EXIT_CODES, FAIL, PASS, ClassificationReport, dumps, ladder_csv

CONFIG_ERROR, RUNTIME_ERROR = 3, 4
CLASSES = ("quasi-ap", "s-asymptotic", "vanishing", "bohr-ap", "uniform-recurrence", "quasi-ur",
           "stepanov", "weyl", "semi-periodic")


class ConfigError(ValueError):
    """Invalid configuration; ``where`` names the file/line or field."""

    def __init__(self, msg: str, where: str = ""):
        super().__init__(f"{where}: {msg}" if where else msg)


def _load_json(text_or_path: str, what: str):
    """Parse inline JSON or a JSON file, reporting line and column on error."""
    p = Path(text_or_path)
    src, text = what, text_or_path
    if not text_or_path.lstrip().startswith(("{", "[")) and p.exists():
        src, text = str(p), p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON: {e.msg}", f"{src} line {e.lineno} column {e.colno}") from None


def parse_complex(v, field_name: str = "c") -> complex:
    if isinstance(v, dict):
        try:
            return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
        except (TypeError, ValueError):
            raise ConfigError("expected {re, im} numbers", field_name) from None
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise ConfigError(f"cannot read {v!r} as a complex number", field_name) from None
    raise ConfigError("expected a number, a string like '0+1i' or {re, im}", field_name)


@dataclass
class FunctionDescription:
    corpus_id: str
    n: int = 1
    params: dict = field(default_factory=dict)
    radius: float = 200.0
    step: float = 0.25

    def validate(self):
        try:
            corpus.get(self.corpus_id)
        except corpus.UnknownCorpusEntry:
            raise ConfigError(f"unknown corpus id {self.corpus_id!r}", "func.corpus") from None
        if not (isinstance(self.n, int) and 1 <= self.n <= 3):
            raise ConfigError("dimension must be 1, 2 or 3", "func.n")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ConfigError("window radius must be positive", "func.radius")
        if not (math.isfinite(self.step) and 0 < self.step < self.radius):
            raise ConfigError("grid step must lie in (0, radius)", "func.step")
        pts = (2 * self.radius / self.step + 1) ** self.n
        if pts > 5e7:
            raise ConfigError(f"grid would have {pts:.3g} points (limit 5e7)", "func.step")
        return self

    def sample(self):
        params = {k: (parse_complex(v, f"func.params.{k}") if k == "c" else v)
                  for k, v in self.params.items()}
        return corpus.get(self.corpus_id).sample(self.n, self.radius, self.step, **params)


def resolve_function(func: str, grid_res: float | None, window: float | None) -> FunctionDescription:
    data_dir = os.environ.get("APERIODICA_DATA_DIR")
    d = None
    if data_dir and (Path(data_dir) / f"{func}.json").exists():
        d = _load_json(str(Path(data_dir) / f"{func}.json"), func)
    elif func.lstrip().startswith("{") or func.endswith(".json"):
        d = _load_json(func, "--func")
    if d is None:
        desc = FunctionDescription(func)
    else:
        if not isinstance(d, dict) or "corpus" not in d:
            raise ConfigError("function description needs a 'corpus' field", "func")
        unknown = set(d) - {"corpus", "n", "params", "radius", "step"}
        if unknown:
            raise ConfigError(f"unknown fields {sorted(unknown)}", "func")
        desc = FunctionDescription(d["corpus"], int(d.get("n", 1)), dict(d.get("params", {})),
                                   float(d.get("radius", 200.0)), float(d.get("step", 0.25)))
    if grid_res is not None:
        desc.step = grid_res
    if window is not None:
        desc.radius = window
    return desc.validate()


def load_spec(spec: str | None) -> dict:
    if spec is None:
        return {}
    d = _load_json(spec, "--spec")
    if not isinstance(d, dict):
        raise ConfigError("class spec must be a JSON object", "spec")
    return d


def _floats(v, name: str) -> list[float]:
    try:
        out = [float(x) for x in (v if isinstance(v, (list, tuple)) else [v])]
    except (TypeError, ValueError):
        raise ConfigError("expected numbers", name) from None
    if any(not math.isfinite(x) for x in out):
        raise ConfigError("values must be finite", name)
    return out


def _region(F, v, name: str):
    from .grid import DomainSubset

    if v is None or v == "all":
        return None
    if v == "nonnegative":
        return DomainSubset.from_predicate(F.grid, lambda x: np.all(x >= 0, axis=-1), "t>=0")
    if isinstance(v, dict) and "lattice" in v:
        w = float(v["lattice"])
        x = F.grid.points()[..., 0]
        k = np.round(x / w)
        return DomainSubset(F.grid, (np.abs(x - k * w) < 1e-9) & (k >= 1), "omegaN")
    raise ConfigError("region must be 'all', 'nonnegative' or {\"lattice\": omega}", name)


def _build(ctor, where: str, *args, **kw):
    """Construct a config object, reporting its validation error as a configuration error."""
    try:
        return ctor(*args, **kw)
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e), where) from None


def _period_spec(F, spec: dict):
    from .periodic import PeriodSpec

    if "omega" not in spec:
        raise ConfigError("this class needs 'omega'", "spec.omega")
    om = _floats(spec["omega"], "spec.omega")
    mode = spec.get("mode", "joint")
    if mode == "joint":
        if len(om) != F.grid.n:
            raise ConfigError(f"omega needs {F.grid.n} components", "spec.omega")
        return _build(PeriodSpec.joint, "spec", om, parse_complex(spec.get("c", 1.0)))
    if mode == "axiswise":
        cs = spec.get("c", [1.0] * len(om))
        cs = [parse_complex(x, "spec.c") for x in (cs if isinstance(cs, list) else [cs] * len(om))]
        return _build(PeriodSpec.axiswise, "spec", om, cs)
    raise ConfigError("mode must be 'joint' or 'axiswise'", "spec.mode")


def run_classify(cls: str, F, spec: dict, workers: int = 1) -> ClassificationReport:
    """Dispatch a class name to its check."""
    from . import asymptotic as A, harmonic as H, periodic as P, stepanov_weyl as S

    c = parse_complex(spec.get("c", 1.0)) if not isinstance(spec.get("c"), list) else None
    eps = _floats(spec["eps"], "spec.eps") if "eps" in spec else None
    ladder = _floats(spec["ladder"], "spec.ladder") if "ladder" in spec else None
    D = _region(F, spec.get("D"), "spec.D")
    Ip = _region(F, spec.get("I_prime"), "spec.I_prime")
    over = {k: spec[k] for k in ("probe_radius", "l_max", "l_ladder", "probe_step", "tau_step") if k in spec}
    if cls == "quasi-ap":
        return A.quasi_asymptotic_check(F, c, eps or (0.5, 0.25, 0.15), I_prime=Ip, D=D,
                                        workers=workers, **over)
    if cls == "s-asymptotic":
        return A.s_asymptotic_check(F, _period_spec(F, spec), D, ladder, spec.get("tol"))
    if cls == "vanishing":
        return A.vanishing_check(F, D, ladder, spec.get("tol"))
    if cls == "bohr-ap":
        return P.bohr_classify(F, eps or (0.5, 0.25), c)
    if cls == "uniform-recurrence":
        return P.uniform_recurrence_check(F, c, int(spec.get("K", 6)), spec.get("tol"))
    if cls == "quasi-ur":
        return A.quasi_uniform_recurrence_check(F, c, int(spec.get("K", 4)), Ip, D)
    if cls == "stepanov":
        cfg = _build(S.StepanovConfig, "spec", p=float(spec.get("p", 1.0)),
                     variant=spec.get("variant", "inner"))
        return S.stepanov_classify(F, cfg, c, eps or (0.5, 0.25, 0.15), Ip, D, workers=workers, **over)
    if cls == "weyl":
        cfg = _build(S.WeylConfig, "spec", ladder=ladder or [8, 16, 32, 64], p=float(spec.get("p", 1.0)),
                     placement=spec.get("placement", "inner"), mode=spec.get("weyl_mode", "limsup"))
        return S.weyl_classify(F, cfg, c, eps or (0.5, 0.25))
    if cls == "semi-periodic":
        cs = spec.get("c", 1.0)
        cs = [parse_complex(x, "spec.c") for x in cs] if isinstance(cs, list) else parse_complex(cs)
        return H.semi_cj_check(F, cs, eps or (0.1, 0.05), int(spec.get("m_max", 8)))
    raise ConfigError(f"unknown class {cls!r}; choose from {', '.join(CLASSES)}", "class")


def _emit(obj, out: str | None):
    text = dumps(obj)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _guard(fn):
    """Map configuration and runtime errors to their exit codes."""
    try:
        return fn()
    except ConfigError as e:
        click.echo(f"configuration error: {e}", err=True)
        sys.exit(CONFIG_ERROR)
    except ProblemError as e:
        click.echo(f"configuration error: {e}", err=True)
        sys.exit(CONFIG_ERROR)
    except (ValueError, RuntimeError, KeyError) as e:
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        sys.exit(RUNTIME_ERROR)


COMMON = [
    click.option("--func", "func", required=True, help="Corpus id, JSON description or JSON file."),
    click.option("--spec", "spec", default=None, help="Class parameters as JSON (inline or file)."),
    click.option("--out", "out", default=None, help="JSON report path (default: stdout)."),
    click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0)),
    click.option("--workers", default=1, show_default=True, type=click.IntRange(min=1)),
    click.option("--grid-res", "grid_res", default=None, type=float, help="Grid step override."),
    click.option("--window", default=None, type=float, help="Window radius override."),
]


def common(f):
    for opt in reversed(COMMON):
        f = opt(f)
    return f


@click.group()
def main():
    """Classify sampled functions into generalized almost periodic classes."""


@main.command()
@click.argument("cls", metavar="CLASS")
@common
@click.option("--csv", "csv_path", default=None, help="Write the margin ladder as CSV.")
def classify(cls, func, spec, out, seed, workers, grid_res, window, csv_path):
    """Run the CLASS check on a function (exit 0 pass, 1 fail, 2 indeterminate)."""
    def go():
        if cls not in CLASSES:
            raise ConfigError(f"unknown class {cls!r}; choose from {', '.join(CLASSES)}", "class")
        sp = load_spec(spec)
        F = resolve_function(func, grid_res, window).sample()
        rep = run_classify(cls, F, sp, workers)
        _emit(rep, out)
        if csv_path:
            Path(csv_path).write_text(ladder_csv(rep.ladder, rep.margins, key="T"))
        return EXIT_CODES[rep.verdict]
    sys.exit(_guard(go))


@main.command()
@common
def periodic(func, spec, out, seed, workers, grid_res, window):
    """Exact (omega, c)-periodicity; without omega, an eps-period scan."""
    from .periodic import check_periodic, epsilon_period_scan

    def go():
        sp = load_spec(spec)
        F = resolve_function(func, grid_res, window).sample()
        if "omega" in sp:
            r = check_periodic(F, _period_spec(F, sp), sp.get("tol"))
            _emit({"verdict": PASS if r.passed else FAIL, "max_defect": r.max_defect,
                   "defects": r.defects, "bound": r.bound, "snapped": r.snapped}, out)
            return 0 if r.passed else 1
        eps = float(sp.get("eps", 0.1))
        r = epsilon_period_scan(F, eps, parse_complex(sp.get("c", 1.0)))
        _emit(r.to_dict(), out)
        return 0 if r.found else 1
    sys.exit(_guard(go))


@main.command()
@common
@click.option("--csv", "csv_path", default=None, help="Write the peak table as CSV.")
def spectrum(func, spec, out, seed, workers, grid_res, window, csv_path):
    """Bohr spectrum estimate and commensurability test."""
    from .harmonic import bohr_spectrum_scan, commensurability_test

    def go():
        sp = load_spec(spec)
        F = resolve_function(func, grid_res, window).sample()
        est = bohr_spectrum_scan(F, T=sp.get("T"), seed=seed)
        comm = commensurability_test(est, c=parse_complex(sp.get("c", 1.0))) if F.grid.n == 1 else None
        _emit({"spectrum": est, "commensurability": comm}, out)
        if csv_path:
            Path(csv_path).write_text(est.peak_csv())
        return 0 if comm is None else EXIT_CODES[comm.verdict]
    sys.exit(_guard(go))


@main.command()
@click.option("--func", "func", default=None, help="Corpus id or description (not needed for a sweep).")
@click.option("--spec", "spec", default=None)
@click.option("--out", "out", default=None)
@click.option("--seed", default=0, type=click.IntRange(min=0))
@click.option("--workers", default=1, type=click.IntRange(min=1))
@click.option("--grid-res", "grid_res", default=None, type=float)
@click.option("--window", default=None, type=float)
@click.option("--sigma-sweep", "sweep", default=None,
              help="Comma-separated sigmas for the orthant-indicator threshold experiment.")
@click.option("--csv", "csv_path", default=None)
def weyl(func, spec, out, seed, workers, grid_res, window, sweep, csv_path):
    """Weyl classification, or the sigma-sweep threshold experiment."""
    from .stepanov_weyl import weyl_threshold_experiment

    def go():
        sp = load_spec(spec)
        if sweep:
            sig = _floats([s for s in sweep.split(",") if s.strip()], "--sigma-sweep")
            r = weyl_threshold_experiment(int(sp.get("n", 2)), float(sp.get("p", 2.0)), sig,
                                          _floats(sp.get("ladder", [8, 16, 32, 64, 128]), "spec.ladder"),
                                          window or float(sp.get("radius", 256)), grid_res or 1.0)
            _emit({k: v for k, v in r.items() if k != "csv"}, out)
            if csv_path:
                Path(csv_path).write_text(r["csv"])
            else:
                click.echo(r["csv"], nl=False, err=out is None)
            return 0 if r["bracket"] is not None else 2
        if func is None:
            raise ConfigError("--func is required without --sigma-sweep", "func")
        F = resolve_function(func, grid_res, window).sample()
        rep = run_classify("weyl", F, sp)
        _emit(rep, out)
        if csv_path:
            Path(csv_path).write_text(ladder_csv(rep.ladder, rep.margins, key="l"))
        return EXIT_CODES[rep.verdict]
    sys.exit(_guard(go))


@main.command()
@click.argument("kind", type=click.Choice(["wave", "hammerstein"]))
@click.option("--problem", required=True, help="Problem JSON (inline or file).")
@click.option("--out", "out", default=None, help="Certification JSON path (default: stdout).")
@click.option("--csv", "csv_path", default=None, help="Solution CSV path.")
def solve(kind, problem, out, csv_path):
    """Solve a wave or Hammerstein problem and certify it."""
    from .problems import hammerstein_from_config, wave_from_config

    def go():
        cfg = _load_json(problem, "--problem")
        if not isinstance(cfg, dict):
            raise ConfigError("problem must be a JSON object", "problem")
        res = wave_from_config(cfg) if kind == "wave" else hammerstein_from_config(cfg)
        _emit(res["report"], out)
        if csv_path:
            from .grid import to_csv
            Path(csv_path).write_text(to_csv(res["solution"]))
        return EXIT_CODES[res["report"]["verdict"]]
    sys.exit(_guard(go))


@main.command()
@click.argument("suite")
@click.option("--out", "out", default=None, help="JSON results path (default: stdout).")
@click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0))
@click.option("--workers", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--timings", is_flag=True, help="Include runtimes in the JSON (breaks byte-identity).")
@click.option("--csv", "csv_path", default=None, help="CSV path for the weyl-threshold sweep.")
def verify(suite, out, seed, workers, timings, csv_path):
    """Run a verification suite (exit 0 all pass, 1 any fail, 2 otherwise)."""
    from .suite import SUITES, UnknownSuite, run_suite, weyl_threshold

    def go():
        if suite == "weyl-threshold":
            r = weyl_threshold()
            path = csv_path or (str(Path(out).with_suffix(".csv")) if out else None)
            if path:
                Path(path).write_text(r["csv"])
            else:
                click.echo(r["csv"], nl=False, err=True)
            _emit({k: v for k, v in r.items() if k != "csv"}, out)
            return 0 if r["bracket"] is not None else 2
        try:
            res = run_suite(suite, seed, workers)
        except UnknownSuite:
            raise ConfigError(f"unknown suite {suite!r}; choose from "
                              f"{', '.join(SUITES + ('all', 'weyl-threshold'))}", "suite") from None
        # the table shares stdout only when the JSON goes to a file
        click.echo(res.table(), err=out is None)
        _emit(res.to_dict(timings), out)
        return EXIT_CODES[res.status]
    sys.exit(_guard(go))


if __name__ == "__main__":
    main()
