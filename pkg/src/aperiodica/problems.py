"""Wave and Hammerstein problems from JSON configuration.

One-dimensional data functions are either a corpus entry
``{"corpus": id, "params": {...}}`` or a sum of terms
``{"terms": [{"kind": "sin", "amp": 1, "freq": 1, "shift": 0}, ...]}`` with
kinds ``sin``, ``cos``, ``sech``, ``sech2``, ``gauss``, ``const`` and ``linear``.
No expression strings are evaluated.
"""
from __future__ import annotations

import math

import numpy as np

from . import corpus
from .applications import (HammersteinProblem, Kernel, WaveProblem, dalembert_asymptotic_certify,
                           dalembert_solve, hammerstein_semiperiodic_property, hammerstein_solve,
                           wave_residual)
from .grid import Domain, Grid, sample
from .report import FAIL, PASS

TERM_KINDS = {
    "sin": np.sin,
    "cos": np.cos,
    "sech": lambda z: 1 / np.cosh(z),
    "sech2": lambda z: 1 / np.cosh(z) ** 2,
    "gauss": lambda z: np.exp(-z ** 2),
    "const": lambda z: np.ones_like(z),
    "linear": lambda z: z,
}


class ProblemError(ValueError):
    """Invalid problem description; the message starts with the field path."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


def _num(d: dict, key: str, where: str, default=None, positive: bool = False) -> float:
    if key not in d:
        if default is None:
            raise ProblemError(f"{where}.{key}", "required")
        return default
    try:
        v = float(d[key])
    except (TypeError, ValueError):
        raise ProblemError(f"{where}.{key}", "expected a number") from None
    if not math.isfinite(v) or (positive and v <= 0):
        raise ProblemError(f"{where}.{key}", "expected a positive finite number" if positive
                           else "expected a finite number")
    return v


def function_1d(d, where: str):
    """Callable on arrays of reals from a data-function description."""
    if not isinstance(d, dict):
        raise ProblemError(where, "expected an object with 'terms' or 'corpus'")
    if "corpus" in d:
        try:
            b = corpus.get(d["corpus"]).make(1, **d.get("params", {}))
        except corpus.UnknownCorpusEntry:
            raise ProblemError(f"{where}.corpus", f"unknown corpus id {d['corpus']!r}") from None
        return lambda s: np.real(np.asarray(b.evaluator(np.asarray(s, float)[..., None])))[..., 0]
    terms = d.get("terms")
    if not isinstance(terms, list) or not terms:
        raise ProblemError(f"{where}.terms", "expected a nonempty list")
    parsed = []
    for i, t in enumerate(terms):
        w = f"{where}.terms[{i}]"
        if not isinstance(t, dict) or t.get("kind") not in TERM_KINDS:
            raise ProblemError(f"{w}.kind", f"expected one of {sorted(TERM_KINDS)}")
        parsed.append((TERM_KINDS[t["kind"]], _num(t, "amp", w, 1.0), _num(t, "freq", w, 1.0),
                       _num(t, "shift", w, 0.0)))

    def f(s):
        s = np.asarray(s, float)
        return sum(a * fn(w * (s - x0)) for fn, a, w, x0 in parsed)
    return f


def _region(d, where: str):
    if d is None:
        return None
    if isinstance(d, dict) and "parabola" in d:
        al, be = d["parabola"]
        return lambda x, t: x >= al * t ** 2 + be
    if d == "all":
        return lambda x, t: np.ones_like(x, bool)
    raise ProblemError(where, "expected 'all' or {\"parabola\": [alpha, beta]} (x >= alpha t^2 + beta)")


def wave_from_config(cfg: dict) -> dict:
    """Solve on [-R, R] x [0, t_max]; certify when a 'certify' block is given."""
    a = _num(cfg, "a", "problem", positive=True)
    f = function_1d(cfg.get("f"), "problem.f")
    g = function_1d(cfg.get("g"), "problem.g")
    R = _num(cfg, "radius", "problem", 64.0, positive=True)
    h = _num(cfg, "step", "problem", math.pi / 16, positive=True)
    tmax = _num(cfg, "t_max", "problem", R, positive=True)
    cert = cfg.get("certify")
    kw = {}
    if cert is not None:
        from .cli import parse_complex
        kw = dict(D=_region(cert.get("region", {"parabola": [1.0, 1.0]}), "problem.certify.region"),
                  omega=_num(cert, "omega", "problem.certify", positive=True),
                  c=parse_complex(cert.get("c", 1.0), "problem.certify.c"), k=int(cert.get("k", 1)))
    try:
        prob = WaveProblem(a, f, g, **kw)
    except ValueError as e:
        raise ProblemError("problem", str(e)) from None
    grid = Grid((-R, 0.0), (h, h), (int(round(2 * R / h)) + 1, int(round(tmax / h)) + 1))
    u = dalembert_solve(prob, grid)
    report = {"verdict": PASS, "residual": wave_residual(u, a), "grid": grid.to_dict()}
    if cert is not None:
        rep = dalembert_asymptotic_certify(prob, u, tol=cert.get("tol"))
        report.update(verdict=rep.verdict, certificate=rep)
    return {"report": report, "solution": u}


def hammerstein_from_config(cfg: dict) -> dict:
    """y = k * (b + alpha phi(y)) with phi in {identity, sin, tanh}; |alpha| is the Lipschitz constant."""
    kd = cfg.get("kernel", {"type": "gaussian", "t0": 1.0})
    if not isinstance(kd, dict):
        raise ProblemError("problem.kernel", "expected an object")
    if kd.get("type") == "gaussian":
        kernel = Kernel.gaussian(_num(kd, "t0", "problem.kernel", positive=True))
    elif kd.get("type") == "box":
        kernel = Kernel.box(_num(kd, "half_width", "problem.kernel", positive=True))
    else:
        raise ProblemError("problem.kernel.type", "expected 'gaussian' or 'box'")
    b = function_1d(cfg.get("forcing"), "problem.forcing")
    alpha = _num(cfg, "alpha", "problem")
    phis = {"identity": lambda y: y, "sin": np.sin, "tanh": np.tanh}
    phi = phis.get(cfg.get("nonlinearity", "identity"))
    if phi is None:
        raise ProblemError("problem.nonlinearity", f"expected one of {sorted(phis)}")
    R = _num(cfg, "radius", "problem", 100.0, positive=True)
    h = _num(cfg, "step", "problem", 0.25, positive=True)
    tol = _num(cfg, "tol", "problem", 1e-8, positive=True)
    if abs(alpha) * kernel.l1_norm >= 1:
        raise ProblemError("problem.alpha", "the map is not a contraction (|alpha| ||k||_1 >= 1)")
    prob = HammersteinProblem(kernel, lambda s, y: b(s[..., :1]) + alpha * phi(y), abs(alpha))
    dom = Domain.full(1, R)
    y0 = sample(lambda t: np.zeros(t.shape[:-1]), Grid.covering(dom, h), dom)
    res = hammerstein_solve(prob, y0, int(cfg.get("max_iter", 500)), tol)
    ok = res.residual <= res.residual_bound and res.iterations <= res.apriori_bound
    report = {"verdict": PASS if ok else FAIL, "solver": res.to_dict()}
    if cfg.get("semi_periodic"):
        sp = cfg["semi_periodic"] if isinstance(cfg["semi_periodic"], dict) else {}
        rep = hammerstein_semiperiodic_property(prob, res, margin=sp.get("margin"))
        report.update(verdict=rep.verdict if ok else FAIL, semi_periodic=rep)
    return {"report": report, "solution": res.solution}
