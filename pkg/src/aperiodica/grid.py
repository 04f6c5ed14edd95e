"""Domains, rectangular grids and sampled functions.

Every operation in the package works on a :class:`SampledFunction`: complex
vector values stored on a uniform rectangular grid that realizes a (possibly
unbounded) product domain through a truncation radius.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

AXIS_KINDS = ("full", "from", "to")


class SamplingError(ValueError):
    """Raised when an evaluator produces a non-finite value."""


class GridMismatchError(ValueError):
    pass


class EmptyOverlapError(ValueError):
    pass


@dataclass(frozen=True)
class Domain:
    """Product domain I_1 x ... x I_n truncated at radius ``radius``.

    ``kinds[j]`` is ``"full"`` (the real line), ``"from"`` (``[anchor, inf)``)
    or ``"to"`` (``(-inf, anchor]``).
    """

    kinds: tuple[str, ...]
    anchors: tuple[float, ...]
    radius: float

    def __post_init__(self):
        if len(self.kinds) < 1:
            raise ValueError("domain needs at least one axis")
        if len(self.anchors) != len(self.kinds):
            raise ValueError("one anchor per axis required")
        if not self.radius > 0:
            raise ValueError("truncation radius must be positive")
        for k in self.kinds:
            if k not in AXIS_KINDS:
                raise ValueError(f"unknown axis kind {k!r}")

    @classmethod
    def full(cls, n: int, radius: float) -> "Domain":
        return cls(("full",) * n, (0.0,) * n, float(radius))

    @classmethod
    def half(cls, n: int, radius: float, anchor: float = 0.0) -> "Domain":
        return cls(("from",) * n, (float(anchor),) * n, float(radius))

    @property
    def n(self) -> int:
        return len(self.kinds)

    def bounds(self) -> list[tuple[float, float]]:
        """Truncated interval of every axis."""
        out = []
        for kind, a in zip(self.kinds, self.anchors):
            if kind == "full":
                out.append((-self.radius, self.radius))
            elif kind == "from":
                out.append((a, a + self.radius))
            else:
                out.append((a - self.radius, a))
        return out

    def reflected(self) -> "Domain":
        flip = {"full": "full", "from": "to", "to": "from"}
        return Domain(tuple(flip[k] for k in self.kinds),
                      tuple(-a for a in self.anchors), self.radius)

    def to_dict(self) -> dict:
        return {"kinds": list(self.kinds), "anchors": list(self.anchors),
                "radius": self.radius}

    @classmethod
    def from_dict(cls, d: dict) -> "Domain":
        kinds = tuple(d["kinds"])
        anchors = tuple(float(a) for a in d.get("anchors", [0.0] * len(kinds)))
        return cls(kinds, anchors, float(d["radius"]))


@dataclass(frozen=True)
class Grid:
    origin: tuple[float, ...]
    step: tuple[float, ...]
    count: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.origin) == len(self.step) == len(self.count)):
            raise ValueError("origin, step and count must have equal length")
        if any(not h > 0 for h in self.step):
            raise ValueError("grid steps must be positive")
        if any(int(c) < 1 for c in self.count):
            raise ValueError("every axis needs at least one point")

    @classmethod
    def covering(cls, domain: Domain, step: float | Sequence[float]) -> "Grid":
        """Uniform grid over the truncated domain, endpoints included."""
        steps = np.broadcast_to(np.asarray(step, float), (domain.n,))
        origin, count = [], []
        for (lo, hi), h in zip(domain.bounds(), steps):
            origin.append(float(lo))
            count.append(int(np.floor((hi - lo) / h + 1e-9)) + 1)
        return cls(tuple(origin), tuple(float(h) for h in steps), tuple(count))

    @property
    def n(self) -> int:
        return len(self.count)

    @property
    def size(self) -> int:
        return int(np.prod(self.count))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.step))

    def axis(self, j: int) -> np.ndarray:
        return self.origin[j] + self.step[j] * np.arange(self.count[j])

    def axes(self) -> list[np.ndarray]:
        return [self.axis(j) for j in range(self.n)]

    def points(self) -> np.ndarray:
        """Coordinates with shape ``count + (n,)``."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def radius_field(self) -> np.ndarray:
        """Euclidean norm |t| at every grid point."""
        r2 = np.zeros(self.count)
        for j, ax in enumerate(self.axes()):
            shape = [1] * self.n
            shape[j] = -1
            r2 = r2 + (ax ** 2).reshape(shape)
        return np.sqrt(r2)

    def snap(self, tau: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        """Integer offsets nearest to ``tau`` and the snapped shift itself."""
        tau = np.broadcast_to(np.asarray(tau, float), (self.n,))
        k = np.rint(tau / np.asarray(self.step)).astype(int)
        return k, k * np.asarray(self.step)

    def locate(self, t: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        """Index of the node nearest to the point ``t`` and that node's coordinates."""
        t = np.broadcast_to(np.asarray(t, float), (self.n,))
        step = np.asarray(self.step)
        i = np.rint((t - np.asarray(self.origin)) / step).astype(int)
        return i, np.asarray(self.origin) + i * step

    def fits(self, domain: Domain) -> bool:
        for j, (lo, hi) in enumerate(domain.bounds()):
            ax = self.axis(j)
            tol = 1e-9 * max(1.0, abs(lo), abs(hi))
            if ax[0] < lo - tol or ax[-1] > hi + tol:
                return False
        return True

    def to_dict(self) -> dict:
        return {"origin": list(self.origin), "step": list(self.step),
                "count": list(self.count)}

    @classmethod
    def from_dict(cls, d: dict) -> "Grid":
        return cls(tuple(float(x) for x in d["origin"]),
                   tuple(float(x) for x in d["step"]),
                   tuple(int(x) for x in d["count"]))


def midpoint_grid(lower: Sequence[float], upper: Sequence[float],
                  cells: int | Sequence[int]) -> Grid:
    """Cell-centre grid of the box ``[lower, upper]`` (midpoint quadrature)."""
    lower = np.atleast_1d(np.asarray(lower, float))
    upper = np.atleast_1d(np.asarray(upper, float))
    cells = np.broadcast_to(np.asarray(cells, int), lower.shape)
    h = (upper - lower) / cells
    return Grid(tuple((lower + h / 2).tolist()), tuple(h.tolist()), tuple(int(c) for c in cells))


def box_domain(lower: Sequence[float], upper: Sequence[float]) -> Domain:
    """Smallest symmetric full domain containing the box."""
    r = float(max(np.max(np.abs(lower)), np.max(np.abs(upper)), 1e-12))
    return Domain.full(len(np.atleast_1d(lower)), r)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SampledFunction:
    """Values of F on a grid; ``values`` has shape ``grid.count + (m,)``.

    ``norm`` selects the target-space norm: ``"euclidean"`` for C^m and
    ``"sup"`` for truncated sequence spaces.  Points with ``valid == False``
    lie outside the realized window (after a shift, say) and are ignored by
    every sup and integral.
    """

    grid: Grid
    domain: Domain
    values: np.ndarray
    label: str = ""
    valid: np.ndarray | None = None
    norm: str = "euclidean"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim == self.grid.n:
            vals = vals[..., None]
        if vals.shape[:-1] != tuple(self.grid.count):
            raise GridMismatchError(
                f"values shape {vals.shape[:-1]} does not match grid {self.grid.count}")
        valid = (np.ones(self.grid.count, bool) if self.valid is None
                 else np.asarray(self.valid, bool))
        if valid.shape != tuple(self.grid.count):
            raise GridMismatchError("validity mask does not match grid")
        if self.norm not in ("euclidean", "sup"):
            raise ValueError(f"unknown target norm {self.norm!r}")
        object.__setattr__(self, "values", _readonly(vals))
        object.__setattr__(self, "valid", _readonly(valid))

    @property
    def m(self) -> int:
        return self.values.shape[-1]

    def pointwise_norm(self, values: np.ndarray | None = None) -> np.ndarray:
        v = self.values if values is None else values
        return pointwise_norm(v, self.norm)

    def with_values(self, values, label: str | None = None, valid=None) -> "SampledFunction":
        return replace(self, values=values, label=self.label if label is None else label,
                       valid=self.valid if valid is None else valid, meta={})

    def sup_norm(self) -> float:
        nrm = self.pointwise_norm()[self.valid]
        return float(nrm.max()) if nrm.size else 0.0

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values.imag) <= tol))


def pointwise_norm(values: np.ndarray, norm: str = "euclidean") -> np.ndarray:
    a = np.abs(values)
    if norm == "sup":
        return a.max(axis=-1)
    if a.shape[-1] == 1:
        return a[..., 0]
    return np.sqrt((a ** 2).sum(axis=-1))


@dataclass(frozen=True)
class DomainSubset:
    """Explicit membership mask over grid points (used for D, D_j and I')."""

    grid: Grid
    mask: np.ndarray
    label: str = ""

    def __post_init__(self):
        mask = np.asarray(self.mask, bool)
        if mask.shape != tuple(self.grid.count):
            raise GridMismatchError("mask does not match grid")
        object.__setattr__(self, "mask", _readonly(mask))

    @classmethod
    def everything(cls, grid: Grid, label: str = "all") -> "DomainSubset":
        return cls(grid, np.ones(grid.count, bool), label)

    @classmethod
    def from_predicate(cls, grid: Grid, pred: Callable[[np.ndarray], np.ndarray],
                       label: str = "") -> "DomainSubset":
        """``pred`` receives coordinates of shape ``(..., n)``."""
        return cls(grid, np.asarray(pred(grid.points()), bool), label)

    def tail(self, T: float) -> "DomainSubset":
        """The set {t in D : |t| >= T}."""
        return DomainSubset(self.grid, self.mask & (self.grid.radius_field() >= T),
                            f"{self.label}_T{T:g}")

    def __and__(self, other: "DomainSubset") -> "DomainSubset":
        return DomainSubset(self.grid, self.mask & other.mask, f"{self.label}&{other.label}")

    def reaches(self, radius: float) -> bool:
        """True if the set meets the outer shell |t| >= radius."""
        return bool(np.any(self.mask & (self.grid.radius_field() >= radius)))

    def points(self) -> np.ndarray:
        return self.grid.points()[self.mask]


def sample(evaluator: Callable[[np.ndarray], np.ndarray], grid: Grid, domain: Domain,
           label: str = "", norm: str = "euclidean") -> SampledFunction:
    """Evaluate ``evaluator`` (coordinates ``(..., n)`` -> values ``(..., m)``)."""
    if grid.n != domain.n:
        raise GridMismatchError("grid and domain dimensions differ")
    if not grid.fits(domain):
        raise GridMismatchError("grid exceeds the truncated domain")
    pts = grid.points()
    vals = np.asarray(evaluator(pts), dtype=complex)
    if vals.ndim == grid.n:
        vals = vals[..., None]
    elif vals.ndim == 0:
        vals = np.full(grid.count + (1,), complex(vals))
    bad = ~np.isfinite(vals).all(axis=-1)
    if bad.any():
        idx = tuple(int(i[0]) for i in np.nonzero(bad))
        raise SamplingError(f"non-finite value at t = {tuple(pts[idx].tolist())}")
    return SampledFunction(grid, domain, vals, label=label, norm=norm)


def overlap_slices(count: Sequence[int], offset: Sequence[int]):
    """Slices (base, shifted) with ``base[i] <-> shifted[i + offset]``.

    Returns ``None`` when the overlap is empty.
    """
    base, moved = [], []
    for N, k in zip(count, offset):
        k = int(k)
        if abs(k) >= N:
            return None
        base.append(slice(max(0, -k), N - max(0, k)))
        moved.append(slice(max(0, k), N + min(0, k)))
    return tuple(base), tuple(moved)


def shift_sample(F: SampledFunction, tau: Sequence[float]) -> SampledFunction:
    """F(. + tau) on the same grid; points whose shift leaves the window are invalid.

    ``tau`` is snapped to the nearest grid multiple; the snapped shift and the
    snapping offset are stored in ``meta``.
    """
    k, snapped = F.grid.snap(tau)
    sl = overlap_slices(F.grid.count, k)
    if sl is None:
        raise EmptyOverlapError(f"shift {tuple(np.atleast_1d(tau))} leaves no overlap")
    base, moved = sl
    vals = np.zeros_like(F.values)
    valid = np.zeros(F.grid.count, bool)
    vals[base] = F.values[moved]
    valid[base] = F.valid[moved]
    if not valid.any():
        raise EmptyOverlapError("shifted function has no valid points")
    out = F.with_values(vals, label=f"{F.label}(.+tau)", valid=valid)
    tau = np.broadcast_to(np.asarray(tau, float), (F.grid.n,))
    out.meta.update(offset=tuple(int(x) for x in k), snapped=tuple(snapped.tolist()),
                    snap_error=float(np.abs(snapped - tau).max()))
    return out


def reflect(F: SampledFunction) -> SampledFunction:
    """F(-t) sampled on the reflected grid and domain."""
    g = F.grid
    origin = tuple(-(o + h * (c - 1)) for o, h, c in zip(g.origin, g.step, g.count))
    grid = Grid(origin, g.step, g.count)
    axes = tuple(range(g.n))
    return SampledFunction(grid, F.domain.reflected(), np.flip(F.values, axis=axes),
                           label=f"reflect({F.label})", valid=np.flip(F.valid, axis=axes),
                           norm=F.norm)


def crop(F: SampledFunction, lower: Sequence[float], upper: Sequence[float]) -> SampledFunction:
    """Restrict F to the sub-box ``[lower, upper]`` (grid points inside kept)."""
    g = F.grid
    sl, origin, count = [], [], []
    for j in range(g.n):
        ax = g.axis(j)
        idx = np.nonzero((ax >= lower[j] - 1e-12) & (ax <= upper[j] + 1e-12))[0]
        if idx.size == 0:
            raise EmptyOverlapError("crop box misses the grid")
        sl.append(slice(idx[0], idx[-1] + 1))
        origin.append(float(ax[idx[0]]))
        count.append(int(idx.size))
    grid = Grid(tuple(origin), g.step, tuple(count))
    sl = tuple(sl)
    bounds = [(origin[j], origin[j] + g.step[j] * (count[j] - 1)) for j in range(g.n)]
    radius = max(max(abs(a), abs(b)) for a, b in bounds) or 1.0
    dom = Domain(("full",) * g.n, (0.0,) * g.n, radius)
    return SampledFunction(grid, dom, F.values[sl], label=F.label, valid=F.valid[sl], norm=F.norm)


def lipschitz_estimate(F: SampledFunction) -> np.ndarray:
    """Per-axis finite-difference Lipschitz constants over valid neighbours."""
    out = np.zeros(F.grid.n)
    for j in range(F.grid.n):
        if F.grid.count[j] < 2:
            continue
        a = [slice(None)] * F.grid.n
        b = [slice(None)] * F.grid.n
        a[j] = slice(1, None)
        b[j] = slice(None, -1)
        a, b = tuple(a), tuple(b)
        d = pointwise_norm(F.values[a] - F.values[b], F.norm)
        ok = F.valid[a] & F.valid[b]
        if ok.any():
            out[j] = float(d[ok].max()) / F.grid.step[j]
    return out


def default_tolerance(F: SampledFunction) -> float:
    """Defect tolerance 10 * h * Lip, capped at a quarter of the sup norm.

    The cap keeps coarse grids of smooth bounded functions from accepting
    defects of the order of the function itself.
    """
    lip = lipschitz_estimate(F)
    h = np.asarray(F.grid.step)
    base = 10.0 * float(np.max(h * lip)) if lip.size else 0.0
    cap = 0.25 * F.sup_norm()
    tol = min(base, cap) if cap > 0 else base
    return max(tol, 1e-9)


def snapping_bound(F: SampledFunction, tau: Sequence[float], safety: float = 2.0) -> float:
    """Upper estimate of |F(t + tau) - F(t + snapped tau)| from the grid Lipschitz field."""
    _, snapped = F.grid.snap(tau)
    tau = np.broadcast_to(np.asarray(tau, float), (F.grid.n,))
    return safety * float(np.sum(lipschitz_estimate(F) * np.abs(snapped - tau)))


def to_csv(F: SampledFunction) -> str:
    """Coordinates followed by real and imaginary parts of each component."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = [f"t{j + 1}" for j in range(F.grid.n)]
    for i in range(F.m):
        head += [f"re{i}", f"im{i}"]
    w.writerow(head + ["valid"])
    pts = F.grid.points().reshape(-1, F.grid.n)
    vals = F.values.reshape(-1, F.m)
    valid = F.valid.reshape(-1)
    for p, v, ok in zip(pts, vals, valid):
        row = [repr(float(x)) for x in p]
        for z in v:
            row += [repr(float(z.real)), repr(float(z.imag))]
        w.writerow(row + [int(ok)])
    return buf.getvalue()
