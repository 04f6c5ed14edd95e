"""Stepanov and Weyl classes: cell norms of shift defects in L^{p(.)}.

A cell is an axis-aligned box of grid nodes.  The cell norm at a node t is
the Luxemburg norm of u -> phi(||G(t + u)||) (or of ||G(t + u)||) over the
nodes u of the cell, where G(s) = F(s + tau) - c F(s).  Constant exponents
use separable box sums; variable exponents use a vectorized bisection.

The Weyl cell at scale l is the dilated box l*Omega, with exponent
p(v / l) at node v; the weight multiplies that norm directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .asymptotic import (PreconditionError, QuasiConfig, _family, _lattice, _mask, _radius,
                         quasi_search)
from .grid import (DomainSubset, EmptyOverlapError, GridMismatchError, SampledFunction,
                   default_tolerance, overlap_slices, pointwise_norm)
from .report import (FAIL, INDETERMINATE, PASS, ClassificationReport, combine, ladder_verdict,
                     rows_csv)

VARIANTS = ("inner", "type1", "type2")
PLACEMENTS = ("inner", "norm", "weight")


class CellOutsideWindow(ValueError):
    pass


class WeightError(ValueError):
    pass


class InclusionViolation(ValueError):
    """A hypothesis of the form A + B + l*Omega within Lambda fails on the window."""


# ---------------------------------------------------------------- weights

PHI_CATALOG = {
    "identity": (lambda a: (lambda x: np.asarray(x, float)), lambda a: (lambda x: np.asarray(x, float))),
    "power": (lambda a: (lambda x: np.asarray(x, float) ** a),
              lambda a: (lambda x: np.asarray(x, float) ** a)),
    "log1p": (lambda a: (lambda x: np.log1p(np.asarray(x, float))),
              lambda a: (lambda x: np.maximum(1.0, np.asarray(x, float)))),
}


@dataclass
class WeightSpec:
    """phi with its companion varphi (phi(xy) <= varphi(x) phi(y)) and weights.

    ``stepanov(t, eps, tau)``, ``recurrent(t, k)``, ``asymptotic(t)`` and
    ``weyl(l, t)`` receive node coordinates of shape (N, n) and return
    positive arrays of shape (N,).
    """

    phi_name: str = "identity"
    exponent: float = 1.0
    stepanov: Callable | None = None
    recurrent: Callable | None = None
    asymptotic: Callable | None = None
    weyl: Callable | None = None
    eps_dependent: bool = False

    def __post_init__(self):
        if self.phi_name not in PHI_CATALOG:
            raise ValueError(f"unknown phi {self.phi_name!r}; catalog: {sorted(PHI_CATALOG)}")
        if self.phi_name == "power" and not self.exponent > 0:
            raise ValueError("power phi needs a positive exponent")

    @property
    def phi(self) -> Callable:
        return PHI_CATALOG[self.phi_name][0](self.exponent)

    @property
    def varphi(self) -> Callable:
        return PHI_CATALOG[self.phi_name][1](self.exponent)

    @property
    def increasing(self) -> bool:
        return True

    @classmethod
    def scale_power(cls, sigma: float, **kw) -> "WeightSpec":
        """Weyl weight l^{-sigma}, independent of t."""
        return cls(weyl=lambda l, t: np.full(len(t), float(l) ** (-sigma)), **kw)

    def weyl_weight(self, l: float, t: np.ndarray, default: float) -> np.ndarray:
        w = np.full(len(t), default) if self.weyl is None else np.asarray(self.weyl(l, t), float)
        return _positive(w, "weyl")

    def stepanov_weight(self, t, eps, tau) -> np.ndarray:
        w = np.ones(len(t)) if self.stepanov is None else np.asarray(self.stepanov(t, eps, tau), float)
        return _positive(w, "stepanov")

    def condition_f(self, samples: int = 2000, seed: int = 0, upper: float = 50.0) -> dict:
        """Spot-check phi(xy) <= varphi(x) phi(y) and phi(0) = 0."""
        rng = np.random.default_rng(seed)
        x, y = rng.uniform(0, upper, (2, samples))
        lhs = self.phi(x * y)
        rhs = self.varphi(x) * self.phi(y)
        worst = float(np.max(lhs - rhs * (1 + 1e-12)))
        return {"holds": worst <= 1e-12 and float(self.phi(0.0)) == 0.0, "worst": worst}

    def subadditivity_constant(self, m: int, samples: int = 4000, seed: int = 0,
                               upper: float = 50.0) -> float:
        """Sampled sup of phi(x_1 + ... + x_m) / sum phi(x_i)."""
        if m < 1:
            raise ValueError("m must be positive")
        rng = np.random.default_rng(seed)
        x = rng.uniform(0, upper, (samples, m)) * rng.uniform(0, 1, (samples, 1)) ** 3
        # equal arguments are the extreme case for convex power maps
        x = np.vstack([x, np.repeat(np.geomspace(1e-3, upper, 64)[:, None], m, axis=1)])
        den = self.phi(x).sum(axis=1)
        ok = den > 0
        return float(np.max(self.phi(x.sum(axis=1))[ok] / den[ok]))


def _positive(w: np.ndarray, what: str) -> np.ndarray:
    if np.any(~(w > 0)):
        raise WeightError(f"{what} weight must be positive")
    return w


# ---------------------------------------------------------------- cells

@dataclass(frozen=True)
class Cell:
    """Box of nodes start_j .. start_j + size_j - 1 (grid units) along each axis."""

    start: tuple
    size: tuple

    @classmethod
    def from_box(cls, lower, upper, step) -> "Cell":
        lower = np.broadcast_to(np.asarray(lower, float), (len(step),))
        upper = np.broadcast_to(np.asarray(upper, float), (len(step),))
        st = tuple(int(round(a / h)) for a, h in zip(lower, step))
        sz = tuple(max(1, int(round((b - a) / h))) for a, b, h in zip(lower, upper, step))
        return cls(st, sz)

    @classmethod
    def unit(cls, step) -> "Cell":
        return cls.from_box(0.0, 1.0, step)

    def scaled(self, l: float) -> "Cell":
        return Cell(tuple(int(round(l * s)) for s in self.start),
                    tuple(max(1, int(round(l * k))) for k in self.size))

    def reflected(self) -> "Cell":
        return Cell(tuple(-(s + k - 1) for s, k in zip(self.start, self.size)), self.size)

    def offsets(self) -> np.ndarray:
        """Node offsets of the cell, shape (prod size, n)."""
        ax = [np.arange(s, s + k) for s, k in zip(self.start, self.size)]
        return np.stack(np.meshgrid(*ax, indexing="ij"), -1).reshape(-1, len(ax))

    def measure(self, step) -> float:
        return float(np.prod(np.asarray(self.size) * np.asarray(step)))


def _box_sum(a: np.ndarray, size: Sequence[int]) -> np.ndarray:
    """Sums over all windows of shape ``size`` (valid positions only)."""
    out = a
    for ax, k in enumerate(size):
        cs = np.cumsum(out, axis=ax)
        pad = [(0, 0)] * out.ndim
        pad[ax] = (1, 0)
        cs = np.pad(cs, pad)
        hi = [slice(None)] * out.ndim
        lo = [slice(None)] * out.ndim
        hi[ax] = slice(k, None)
        lo[ax] = slice(None, cs.shape[ax] - k)
        out = cs[tuple(hi)] - cs[tuple(lo)]
    return out


def _place(window_vals: np.ndarray, cell: Cell, shape) -> np.ndarray:
    """Move window-start indexed values to base-node indexing (nan outside)."""
    out = np.full(shape, np.nan)
    src, dst = [], []
    for j, (s, n) in enumerate(zip(cell.start, shape)):
        m = window_vals.shape[j]
        # node i uses the window starting at i + s
        i0, i1 = max(0, -s), min(n, m - s)
        if i1 <= i0:
            return out
        dst.append(slice(i0, i1))
        src.append(slice(i0 + s, i1 + s))
    out[tuple(dst)] = window_vals[tuple(src)]
    return out


def cell_norms(mag: np.ndarray, valid: np.ndarray, cell: Cell, step, p=1.0,
               scale: float = 1.0, stride: int = 1, tol: float = 1e-10) -> np.ndarray:
    """L^{p(.)} norm over ``t + cell`` for every node t (nan where the cell
    leaves the valid region).

    ``p`` is a number (1 <= p <= inf) or a callable of cell coordinates u in
    Omega units, evaluated at v / scale for the dilated cell.  ``stride``
    subsamples base nodes for variable exponents.
    """
    step = np.asarray(step, float)
    vol = float(np.prod(step))
    if any(k > n for k, n in zip(cell.size, mag.shape)):
        return np.full(mag.shape, np.nan)
    bad = _box_sum((~valid).astype(np.int64), cell.size) > 0
    m = np.where(valid, mag, 0.0)
    if callable(p):
        pv = np.asarray(p(cell.offsets() * step / scale), float).reshape(cell.size)
        if np.all(pv == pv.flat[0]):
            p = float(pv.flat[0])
    if not callable(p):
        p = float(p)
        if p < 1:
            raise ValueError("exponent must be >= 1")
        if math.isinf(p):
            win = sliding_window_view(m, cell.size)
            vals = win.reshape(win.shape[:m.ndim] + (-1,)).max(axis=-1)
        else:
            vals = (np.maximum(_box_sum(m ** p, cell.size), 0.0) * vol) ** (1.0 / p)
        vals = np.where(bad, np.nan, vals)
        return _place(vals, cell, mag.shape)
    if np.any(pv < 1):
        raise ValueError("exponent must be >= 1")
    win = sliding_window_view(m, cell.size)
    sl = tuple(slice(None, None, stride) for _ in range(m.ndim))
    win = win[sl]
    nb = win.shape[:m.ndim]
    flat = win.reshape(int(np.prod(nb)), -1)
    vals = _luxemburg_rows(flat, pv.ravel(), vol, tol).reshape(nb)
    full = np.full(bad.shape, np.nan)
    full[sl] = np.where(bad[sl], np.nan, vals)
    return _place(full, cell, mag.shape)


def _luxemburg_rows(a: np.ndarray, p: np.ndarray, vol: float, tol: float) -> np.ndarray:
    """Row-wise Luxemburg norms by log-bisection (relative accuracy ``tol``)."""
    amax = a.max(axis=1)
    out = np.zeros(len(a))
    nz = amax > 0
    if not nz.any():
        return out
    a, amax = a[nz], amax[nz]
    inf = np.isinf(p)
    fin = ~inf
    amax_inf = a[:, inf].max(axis=1) if inf.any() else np.zeros(len(a))
    V = vol * fin.sum()
    pmin = p[fin].min() if fin.any() else 1.0
    hi = np.maximum(amax * max(1.0, V) ** (1.0 / pmin), amax_inf)
    lo = np.maximum(hi * 1e-13, amax_inf)
    with np.errstate(divide="ignore"):
        la = np.log(a[:, fin])
    pf = p[fin]
    while True:
        done = hi - lo <= tol * hi
        if done.all():
            break
        mid = np.sqrt(lo * hi)
        mid = np.where(mid <= lo, 0.5 * (lo + hi), mid)
        rho = np.exp(pf * (la - np.log(mid)[:, None])).sum(axis=1) * vol
        fits = (rho <= 1.0) & (mid >= amax_inf)
        hi = np.where(~done & fits, mid, hi)
        lo = np.where(~done & ~fits, mid, lo)
    out[nz] = hi
    return out


# ---------------------------------------------------------------- Bochner transform

@dataclass
class BochnerHandle:
    """u -> F(t + u) on the nodes u of a cell."""

    t: np.ndarray
    cell: Cell
    values: np.ndarray
    step: np.ndarray
    norm: str

    def __call__(self, u) -> np.ndarray:
        idx = tuple(np.round(np.asarray(u, float) / self.step).astype(int) - np.asarray(self.cell.start))
        return self.values[idx]

    def distance(self, other: "BochnerHandle", p=1.0, c: complex = 1.0) -> float:
        """L^{p(.)} norm of ||self - c other|| over the cell."""
        if self.values.shape != other.values.shape:
            raise GridMismatchError("handles on different cells")
        mag = pointwise_norm(self.values - c * other.values, self.norm)
        return float(cell_norms(mag, np.ones(mag.shape, bool),
                                Cell((0,) * mag.ndim, self.cell.size), self.step, p)
                     .flat[0])


def bochner_transform(F: SampledFunction, cell: Cell | None = None) -> Callable:
    """Returns t -> BochnerHandle of F restricted to t + Omega."""
    cell = Cell.unit(F.grid.step) if cell is None else cell
    step = np.asarray(F.grid.step)

    def handle(t) -> BochnerHandle:
        k, snapped = F.grid.locate(t)
        lo = k + np.asarray(cell.start)
        hi = lo + np.asarray(cell.size)
        if np.any(lo < 0) or np.any(hi > np.asarray(F.grid.count)):
            raise CellOutsideWindow(f"cell at {tuple(snapped)} leaves the window")
        sl = tuple(slice(a, b) for a, b in zip(lo, hi))
        if not F.valid[sl].all():
            raise CellOutsideWindow(f"cell at {tuple(snapped)} meets invalid samples")
        return BochnerHandle(snapped, cell, F.values[sl], step, F.norm)

    return handle


# ---------------------------------------------------------------- defect fields

def _defect_full(F: SampledFunction, tau, c: complex, shift_valid: bool = True):
    """||F(t + tau) - c F(t)|| at every node (valid where both samples exist)."""
    k, snapped = F.grid.snap(tau)
    sl = overlap_slices(F.grid.count, k)
    if sl is None:
        raise EmptyOverlapError(f"shift {tuple(np.atleast_1d(tau))} leaves no overlap")
    base, moved = sl
    mag = np.zeros(F.grid.count)
    ok = np.zeros(F.grid.count, bool)
    mag[base] = pointwise_norm(F.values[moved] - complex(c) * F.values[base], F.norm)
    ok[base] = F.valid[moved] & F.valid[base]
    return mag, ok, np.asarray(k)


@dataclass
class StepanovConfig:
    """Cell Omega, exponent, placement variant and weights."""

    cell: Cell | None = None
    p: float | Callable = 1.0
    variant: str = "inner"
    weights: WeightSpec = field(default_factory=WeightSpec)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")


def stepanov_field(F: SampledFunction, cfg: StepanovConfig, tau, c: complex = 1.0,
                   eps: float | None = None, stride: int = 1) -> np.ndarray:
    """Variant-composed Stepanov defect at every node t (nan where undefined)."""
    cell = Cell.unit(F.grid.step) if cfg.cell is None else cfg.cell
    mag, ok, _ = _defect_full(F, tau, c)
    w = cfg.weights
    if cfg.variant == "inner":
        nrm = cell_norms(w.phi(mag), ok, cell, F.grid.step, cfg.p, stride=stride)
    else:
        nrm = cell_norms(mag, ok, cell, F.grid.step, cfg.p, stride=stride)
    if w.stepanov is None:
        W = 1.0
    else:
        W = w.stepanov_weight(F.grid.points().reshape(-1, F.grid.n), eps,
                              np.asarray(tau, float)).reshape(F.grid.count)
    if cfg.variant == "inner":
        return W * nrm
    if cfg.variant == "type1":
        return W * w.phi(nrm)
    return w.phi(W * nrm)


def _tail_sup(field_: np.ndarray, F: SampledFunction, k, ladder, D, both: bool,
              stride: int = 1) -> np.ndarray:
    r = _radius(F.grid)
    ok = np.isfinite(field_)
    rmin = r
    if both:
        sl = overlap_slices(F.grid.count, k)
        rm = np.full(F.grid.count, -np.inf)
        okm = np.zeros(F.grid.count, bool)
        base, moved = sl
        rm[base] = r[moved]
        okm[base] = True if D is None else D[moved]
        rmin = np.minimum(r, rm)
        ok &= okm
    if D is not None:
        ok &= D
    if stride > 1:
        s = tuple(slice(None, None, stride) for _ in range(F.grid.n))
        ok, rmin, field_ = ok[s], rmin[s], field_[s]
    vals = np.where(ok, field_, -np.inf)
    out = []
    for T in ladder:
        sel = rmin >= T
        v = float(vals[sel].max()) if sel.any() else -np.inf
        out.append(v if np.isfinite(v) else np.nan)
    return np.asarray(out)


def stepanov_qa_distance(F, cfg: StepanovConfig, tau, eps: float, M: float, c: complex = 1.0,
                         D: DomainSubset | None = None, require_shifted: bool = True) -> float:
    """sup over t in D_M (and t + tau in D_M) of the Stepanov defect.

    ``require_shifted=False`` drops the condition on t + tau, which changes
    nothing when D + I' lies in D.
    """
    fam = _family(F)
    vals = []
    for f in fam:
        fld = stepanov_field(f, cfg, tau, c, eps)
        k, _ = f.grid.snap(tau)
        vals.append(_tail_sup(fld, f, k, [M], _mask(D, f), require_shifted)[0])
    return float(np.max(vals))


def stepanov_classify(F, cfg: StepanovConfig, c: complex = 1.0,
                      eps_list: Sequence[float] = (0.5, 0.25, 0.15),
                      I_prime: DomainSubset | None = None, D: DomainSubset | None = None,
                      config: QuasiConfig | None = None, workers: int = 1,
                      **over) -> ClassificationReport:
    """Quasi-asymptotic search with the Stepanov cell defect."""
    fam = _family(F)
    F0 = fam[0]
    qc = config or QuasiConfig.for_function(F0, **over)
    Dm = _mask(D, F0)
    Im = None if I_prime is None else _mask(I_prime, F0)

    def margins(tau, stride, eps):
        rows = []
        for f in fam:
            fld = stepanov_field(f, cfg, tau, c, eps)
            k, _ = f.grid.snap(tau)
            rows.append(_tail_sup(fld, f, k, qc.ladder, Dm, True, stride))
        return np.max(rows, axis=0)

    return quasi_search(F0, margins, qc, eps_list, Im, f"stepanov-{cfg.variant}",
                        eps_dependent=cfg.weights.eps_dependent,
                        diagnostics={"c": c, "variant": cfg.variant}, workers=workers)


# ---------------------------------------------------------------- Weyl

@dataclass
class WeylConfig:
    """Cell Omega, exponent p(u) on Omega, placement, scale ladder and weights.

    The default weight l^{-n/p} turns the dilated cell norm into a mean.
    """

    ladder: Sequence[float]
    cell: Cell | None = None
    p: float | Callable = 1.0
    placement: str = "inner"
    mode: str = "limsup"
    weights: WeightSpec = field(default_factory=WeightSpec)
    slope_tol: float = 0.05
    stride: int = 1
    Lambda: DomainSubset | None = None

    def __post_init__(self):
        if self.placement not in PLACEMENTS:
            raise ValueError(f"placement must be one of {PLACEMENTS}")
        if self.mode not in ("equi", "limsup"):
            raise ValueError("mode must be 'equi' or 'limsup'")
        if len(self.ladder) < 2 or any(b <= a for a, b in zip(self.ladder, self.ladder[1:])):
            raise ValueError("scale ladder must be strictly increasing with >= 2 rungs")


def _default_weight(l: float, n: int, p) -> float:
    p0 = 1.0 if callable(p) else float(p)
    return 1.0 if math.isinf(p0) else float(l) ** (-n / p0)


def weyl_field(F: SampledFunction, cfg: WeylConfig, tau, c: complex, l: float,
               mag=None) -> np.ndarray:
    """Placement-composed Weyl value at every node t for one scale l."""
    base = Cell.unit(F.grid.step) if cfg.cell is None else cfg.cell
    cell = base.scaled(l)
    if mag is None:
        mag, ok, _ = _defect_full(F, tau, c)
    else:
        mag, ok = mag
    w = cfg.weights
    pts = None
    if w.weyl is not None:
        pts = F.grid.points().reshape(-1, F.grid.n)
        W = w.weyl_weight(l, pts, 1.0).reshape(F.grid.count)
    else:
        W = _default_weight(l, F.grid.n, cfg.p)
    inner = w.phi(mag) if cfg.placement == "inner" else mag
    nrm = cell_norms(inner, ok, cell, F.grid.step, cfg.p, scale=l, stride=cfg.stride)
    if cfg.placement == "inner":
        return W * nrm
    if cfg.placement == "norm":
        return W * w.phi(nrm)
    return w.phi(W * nrm)


def weyl_distance(F, cfg: WeylConfig, tau, c: complex = 1.0) -> np.ndarray:
    """sup over t in Lambda (cells inside the window) of the Weyl value, per l."""
    fam = _family(F)
    out = []
    for f in fam:
        mag = _defect_full(f, tau, c)[:2]
        row = []
        for l in cfg.ladder:
            fld = weyl_field(f, cfg, tau, c, l, mag)
            if cfg.Lambda is not None:
                fld = np.where(_mask(cfg.Lambda, f), fld, np.nan)
            if not np.isfinite(fld).any():
                raise InclusionViolation(f"no cell of scale {l} fits the window for shift {tau}")
            row.append(float(np.nanmax(fld)))
        out.append(row)
    return np.max(np.asarray(out), axis=0)


def loglog_slope(ladder, values) -> float:
    x = np.log(np.asarray(ladder, float))
    y = np.log(np.maximum(np.asarray(values, float), 1e-300))
    return float(np.polyfit(x, y, 1)[0])


def limsup_estimate(ladder, values, slope_tol: float = 0.05) -> tuple[float, str]:
    """Tail estimate of limsup over l with its trend label.

    Decaying trend (log-log slope < -slope_tol) estimates 0; otherwise the
    max over the top half of the ladder.  ``growing`` marks an increasing
    trend, where a small value only means the window is too short.
    """
    v = np.asarray(values, float)
    if np.all(v <= 1e-300):
        return 0.0, "zero"
    s = loglog_slope(ladder, v)
    top = float(v[len(v) // 2:].max())
    if s < -slope_tol:
        return 0.0, "decaying"
    return top, "growing" if s > slope_tol else "flat"


def weyl_verdict(ladder, values, eps: float, mode: str, slope_tol: float = 0.05) -> str:
    if mode == "equi":
        return PASS if float(np.min(values)) <= eps else FAIL
    est, trend = limsup_estimate(ladder, values, slope_tol)
    if trend == "growing":
        return FAIL if est > eps else INDETERMINATE
    return PASS if est <= eps else FAIL


def weyl_classify(F, cfg: WeylConfig, c: complex = 1.0, eps_list: Sequence[float] = (0.5, 0.25),
                  probes: np.ndarray | None = None, l_incl: Sequence[float] | None = None,
                  tau_step: float | None = None) -> ClassificationReport:
    """For every eps find an inclusion length such that each probe ball holds
    a shift tau whose Weyl ladder meets eps (min over l in equi mode, the
    limsup estimate otherwise)."""
    F0 = _family(F)[0]
    R = F0.domain.radius
    h = max(F0.grid.step)
    if probes is None:
        probes = _lattice(F0, R / 16, max(h, R / 32))
    l_incl = [R / 64, R / 32, R / 16] if l_incl is None else list(l_incl)
    tau_step = max(h, max(l_incl) / 4) if tau_step is None else tau_step
    cache: dict = {}

    def ladder_of(tau):
        key = tuple(np.round(tau, 9))
        if key not in cache:
            cache[key] = weyl_distance(F, cfg, tau, c)
        return cache[key]

    verdicts, wit = [], []
    for eps in eps_list:
        found = None
        undecided = False
        for L in l_incl:
            chosen = []
            for t0 in probes:
                hit = None
                for tau in _lattice(F0, L, tau_step, center=t0):
                    vals = ladder_of(tau)
                    v = weyl_verdict(cfg.ladder, vals, eps, cfg.mode, cfg.slope_tol)
                    if v == PASS:
                        hit = (tau, vals)
                        break
                    undecided |= v == INDETERMINATE
                if hit is None:
                    chosen = None
                    break
                chosen.append({"t0": t0.tolist(), "tau": hit[0].tolist(),
                               "values": hit[1].tolist()})
            if chosen is not None:
                found = (L, chosen)
                break
        if found:
            verdicts.append(PASS)
            wit.append({"eps": eps, "l": found[0], "witnesses": found[1][:8]})
        else:
            verdicts.append(INDETERMINATE if undecided else FAIL)
            wit.append({"eps": eps, "l": None})
    sample = next(iter(cache.values()))
    return ClassificationReport(f"weyl-{cfg.mode}-{cfg.placement}", combine(verdicts),
                                list(sample), list(cfg.ladder), float(min(eps_list)), wit,
                                {"eps_verdicts": verdicts, "c": c,
                                 "n_shifts_evaluated": len(cache)})


def weyl_threshold_experiment(n: int, p0: float, sigmas: Sequence[float],
                              ladder: Sequence[float], radius: float, step: float = 1.0,
                              eps: float = 0.1, c: complex = 1.0,
                              taus: Sequence | None = None, slope_tol: float = 0.05) -> dict:
    """Sweep sigma for the orthant indicator with weight l^{-sigma}.

    A sigma passes when every probe shift has limsup estimate <= eps.
    Returns the CSV table (sigma, l, value, verdict) and the crossover bracket.
    """
    from .corpus import get

    F = get("chi-orthant").sample(n, radius, step)
    if taus is None:
        taus = [np.full(n, k * step) for k in (1, 2, 4)]
    rows, verdicts = [], []
    for s in sigmas:
        cfg = WeylConfig(ladder=list(ladder), p=p0, weights=WeightSpec.scale_power(s),
                         slope_tol=slope_tol)
        vs = []
        worst = None
        for tau in taus:
            vals = weyl_distance(F, cfg, tau, c)
            vs.append(weyl_verdict(cfg.ladder, vals, eps, "limsup", slope_tol))
            if worst is None or np.max(vals) > np.max(worst):
                worst = vals
        v = combine(vs)
        verdicts.append(v)
        for l, val in zip(ladder, worst):
            rows.append([float(s), float(l), float(val), v])
    bracket = None
    for (s0, v0), (s1, v1) in zip(zip(sigmas, verdicts), list(zip(sigmas, verdicts))[1:]):
        if v0 != PASS and v1 == PASS:
            bracket = (float(s0), float(s1))
    return {"csv": rows_csv(["sigma", "l", "value", "verdict"], rows),
            "verdicts": dict(zip(map(float, sigmas), verdicts)), "bracket": bracket,
            "threshold": (n - 1) / p0}


def weyl_ur_check(F, cfg: WeylConfig, K: int = 4, c: complex = 1.0,
                  taus: Sequence | None = None, tol: float | None = None,
                  r_max: float | None = None) -> ClassificationReport:
    """tau_k with growing norm; the k-th margin is the limsup estimate over l,
    reduced to its tail envelope across k."""
    if K < 2:
        raise ValueError("K must be at least 2")
    F0 = _family(F)[0]
    tol = default_tolerance(F0) if tol is None else tol
    if taus is None:
        r_max = F0.domain.radius / 8 if r_max is None else r_max
        cands = _lattice(F0, r_max, max(max(F0.grid.step), r_max / 16))
        rad = np.linalg.norm(cands, axis=1)
        edges = np.linspace(0, r_max, K + 1)
        taus = []
        for k in range(K):
            sel = cands[(rad > edges[k]) & (rad <= edges[k + 1] + 1e-12)]
            best, arg = np.inf, None
            for tau in sel:
                est, _ = limsup_estimate(cfg.ladder, weyl_distance(F, cfg, tau, c), cfg.slope_tol)
                if est < best:
                    best, arg = est, tau
            taus.append(arg)
    est, trends, vals = [], [], []
    for tau in taus:
        v = weyl_distance(F, cfg, tau, c)
        e, tr = limsup_estimate(cfg.ladder, v, cfg.slope_tol)
        est.append(e)
        trends.append(tr)
        vals.append(v.tolist())
    env = [max(est[k:]) for k in range(len(est))]
    verdict = ladder_verdict(env, tol)
    if verdict == PASS and trends[-1] == "growing":
        verdict = INDETERMINATE
    return ClassificationReport("weyl-ur", verdict, env, [float(np.linalg.norm(t)) for t in taus],
                                tol, [{"tau": np.asarray(t).tolist(), "values": v}
                                      for t, v in zip(taus, vals)], {"trends": trends, "c": c})


def power_argument_check(F, cfg: WeylConfig, tau, c: complex, m: int, eps: float,
                         samples: int = 4000) -> dict:
    """Transport a Weyl witness (tau, c) to (m tau, c^m).

    Checks, per scale l, that the measured defect for (m tau, c^m) is at most
    c_m * sum_j varphi(|c|^j) times the largest single-step defect, and
    reports the transported verdict at eps' = that constant times eps.
    """
    if m < 1:
        raise ValueError("m must be positive")
    w = cfg.weights
    cf = w.condition_f()
    if not cf["holds"]:
        raise PreconditionError("condition (F) fails for the declared phi")
    F0 = _family(F)[0]
    tau = np.asarray(tau, float)
    cm = w.subadditivity_constant(m, samples) if m > 1 else 1.0
    const = cm * float(sum(w.varphi(abs(c) ** j) for j in range(m)))
    # every intermediate shift j*tau must keep the cells inside the window
    if cfg.Lambda is None:
        k, _ = F0.grid.snap(m * tau)
        lmax = max(cfg.ladder)
        if np.any(np.abs(k) + np.asarray(Cell.unit(F0.grid.step).scaled(lmax).size)
                  >= np.asarray(F0.grid.count)):
            raise InclusionViolation("m*tau plus the largest cell exceeds the window")
    single = weyl_distance(F, cfg, tau, c)
    multi = weyl_distance(F, cfg, m * tau, c ** m)
    if cfg.placement != "inner":
        bound_ok = None
    else:
        bound_ok = bool(np.all(multi <= const * single * (1 + 1e-9) + 1e-12))
    v1 = weyl_verdict(cfg.ladder, single, eps, cfg.mode, cfg.slope_tol)
    vm = weyl_verdict(cfg.ladder, multi, const * eps, cfg.mode, cfg.slope_tol)
    return {"c_m": cm, "constant": const, "single": single.tolist(), "multi": multi.tolist(),
            "bound_holds": bound_ok, "verdict_single": v1, "verdict_transported": vm,
            "target": complex(c) ** m}
