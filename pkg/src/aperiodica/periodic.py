"""Exact and approximate periodicity with a multiplicative factor c.

Covers F(t + omega) = c F(t) (jointly or axis by axis), the profiling
transform that removes the factor, epsilon-period scans with inclusion
lengths, and uniform recurrence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .grid import (DomainSubset, EmptyOverlapError, SampledFunction, default_tolerance,
                   overlap_slices, pointwise_norm, snapping_bound)
from .corpus import principal_power
from .report import FAIL, PASS, ClassificationReport, ladder_verdict


@dataclass(frozen=True)
class PeriodSpec:
    """``mode="joint"``: one vector omega and one c.
    ``mode="axiswise"``: omega[j], c[j] act along axis j only.
    """

    mode: str
    omega: tuple
    c: tuple

    def __post_init__(self):
        if self.mode not in ("joint", "axiswise"):
            raise ValueError("mode must be 'joint' or 'axiswise'")
        om = tuple(float(x) for x in np.atleast_1d(self.omega))
        cs = tuple(complex(x) for x in np.atleast_1d(self.c))
        if self.mode == "joint":
            if not any(om):
                raise ValueError("omega must be nonzero")
            if len(cs) != 1:
                raise ValueError("joint mode takes a single c")
        else:
            if any(w == 0 for w in om):
                raise ValueError("every axis period must be nonzero")
            if len(cs) == 1:
                cs = cs * len(om)
            if len(cs) != len(om):
                raise ValueError("one c per axis required")
        if any(z == 0 for z in cs):
            raise ValueError("c must be nonzero")
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "c", cs)

    @classmethod
    def joint(cls, omega, c=1.0) -> "PeriodSpec":
        return cls("joint", tuple(np.atleast_1d(omega)), (c,))

    @classmethod
    def axiswise(cls, omegas, cs) -> "PeriodSpec":
        return cls("axiswise", tuple(omegas), tuple(np.atleast_1d(cs)))

    @property
    def n(self) -> int:
        return len(self.omega)

    def shifts(self) -> list[tuple[np.ndarray, complex]]:
        """(shift vector, factor) pairs that the spec constrains."""
        if self.mode == "joint":
            return [(np.asarray(self.omega), self.c[0])]
        out = []
        for j, (w, cj) in enumerate(zip(self.omega, self.c)):
            e = np.zeros(self.n)
            e[j] = w
            out.append((e, cj))
        return out

    def power(self, m: int) -> "PeriodSpec":
        """The spec (m omega, c^m)."""
        return PeriodSpec(self.mode, tuple(m * w for w in self.omega),
                          tuple(z ** m for z in self.c))

    def respects(self, domain) -> bool:
        """omega + I is contained in I for every constrained shift."""
        for vec, _ in self.shifts():
            for kind, w in zip(domain.kinds, vec):
                if (kind == "from" and w < 0) or (kind == "to" and w > 0):
                    return False
        return True

    def to_dict(self) -> dict:
        return {"mode": self.mode, "omega": list(self.omega), "c": list(self.c)}

    @classmethod
    def from_dict(cls, d: dict) -> "PeriodSpec":
        c = d.get("c", 1.0)
        c = [complex(x["re"], x["im"]) if isinstance(x, dict) else x for x in np.atleast_1d(c)]
        return cls(d.get("mode", "joint"), tuple(np.atleast_1d(d["omega"])), tuple(c))


@dataclass
class ShiftDefect:
    """||F(t + tau) - c F(t)|| over the base block ``base`` of the grid."""

    defect: np.ndarray
    ok: np.ndarray
    base: tuple
    offset: np.ndarray
    snapped: np.ndarray
    snap_error: float

    def full(self, shape) -> tuple[np.ndarray, np.ndarray]:
        d = np.zeros(shape)
        ok = np.zeros(shape, bool)
        d[self.base] = self.defect
        ok[self.base] = self.ok
        return d, ok

    def sup(self, mask: np.ndarray | None = None) -> float:
        sel = self.ok if mask is None else self.ok & mask[self.base]
        return float(self.defect[sel].max()) if sel.any() else float("nan")


def shift_defect(F: SampledFunction, tau: Sequence[float], c: complex = 1.0,
                 G: SampledFunction | None = None) -> ShiftDefect:
    """Defect of F(. + tau) against c G(.) (G defaults to F)."""
    G = F if G is None else G
    k, snapped = F.grid.snap(tau)
    sl = overlap_slices(F.grid.count, k)
    if sl is None:
        raise EmptyOverlapError(f"shift {tuple(np.atleast_1d(tau))} leaves no overlap")
    base, moved = sl
    diff = F.values[moved] - complex(c) * G.values[base]
    ok = F.valid[moved] & G.valid[base]
    tau = np.broadcast_to(np.asarray(tau, float), (F.grid.n,))
    return ShiftDefect(pointwise_norm(diff, F.norm), ok, base, k, snapped,
                       float(np.abs(snapped - tau).max()))


@dataclass
class PeriodicReport:
    passed: bool
    max_defect: float
    defects: list
    bound: float
    snapped: list = field(default_factory=list)


def check_periodic(F: SampledFunction, spec: PeriodSpec, tol: float | None = None,
                   subset: DomainSubset | None = None) -> PeriodicReport:
    """Sup defect of F(t + omega) - c F(t); pass iff within tol + snapping bound."""
    if spec.n != F.grid.n:
        raise ValueError("spec dimension differs from grid")
    tol = 1e-9 * max(1.0, F.sup_norm()) if tol is None else tol
    mask = None if subset is None else subset.mask
    defects, snapped, bound = [], [], 0.0
    for vec, cj in spec.shifts():
        sd = shift_defect(F, vec, cj)
        d = sd.sup(mask)
        if np.isnan(d):
            raise EmptyOverlapError("no valid points for the periodicity test")
        defects.append(d)
        snapped.append(sd.snapped.tolist())
        bound = max(bound, snapping_bound(F, vec) * max(1.0, abs(cj)))
    worst = max(defects)
    return PeriodicReport(bool(worst <= tol + bound), worst, defects, tol + bound, snapped)


def profile_transform(F: SampledFunction, spec: PeriodSpec, a: Sequence[float] | None = None,
                      axis: int = 0) -> SampledFunction:
    """Remove the factor c: joint mode returns c^{-sum a_i t_i / omega_i} F,
    axiswise mode returns c_j^{-t_j / omega_j} F for ``axis = j``.

    The result is (omega, 1)-periodic exactly when F is (omega, c)-periodic.
    """
    t = F.grid.points()
    if spec.mode == "joint":
        S = [i for i, w in enumerate(spec.omega) if w != 0]
        a = np.full(len(S), 1.0 / len(S)) if a is None else np.asarray(a, float)
        if a.shape != (len(S),):
            raise ValueError(f"a needs one weight per nonzero period component ({len(S)})")
        if abs(a.sum() - 1.0) > 1e-12:
            raise ValueError("profiling weights must sum to 1")
        z = sum(ai * t[..., i] / spec.omega[i] for ai, i in zip(a, S))
        factor = principal_power(spec.c[0], -z)
    else:
        factor = principal_power(spec.c[axis], -t[..., axis] / spec.omega[axis])
    return F.with_values(F.values * factor[..., None], label=f"profile({F.label})")


@dataclass
class EpsilonPeriodReport:
    eps: float
    window: list
    periods: np.ndarray
    inclusion_length: float | None
    l_max: float

    @property
    def found(self) -> bool:
        return self.inclusion_length is not None

    def to_dict(self) -> dict:
        return {"eps": self.eps, "window": self.window, "periods": self.periods.tolist(),
                "inclusion_length": self.inclusion_length, "l_max": self.l_max,
                "bohr_pass": self.found}


def _candidate_offsets(F: SampledFunction, candidates: DomainSubset | None, radius: float):
    g = F.grid
    if candidates is None:
        r = g.radius_field()
        mask = r <= radius
    else:
        mask = candidates.mask
    pts = g.points()[mask]
    return pts


def inclusion_length(periods: np.ndarray, probes: np.ndarray) -> float:
    """Twice the covering radius of ``probes`` by ``periods``.

    In one dimension this is the longest gap between consecutive periods,
    i.e. the classical inclusion length.
    """
    if len(periods) == 0:
        return float("inf")
    d, _ = cKDTree(periods).query(probes)
    return 2.0 * float(np.max(d))


def epsilon_period_scan(F: SampledFunction, eps: float, c: complex = 1.0,
                        candidates: DomainSubset | None = None, l_max: float | None = None,
                        radius: float | None = None) -> EpsilonPeriodReport:
    """All grid shifts tau with sup ||F(t + tau) - c F(t)|| <= eps, plus the
    smallest inclusion length over probe points of the candidate region.

    Candidates default to grid shifts with |tau| <= radius (half the window).
    Probe points are the candidates at distance >= l_max from the edge of
    the candidate region, so that balls of radius l_max stay inside it.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    dom_r = F.domain.radius
    radius = dom_r / 2 if radius is None else radius
    l_max = radius / 2 if l_max is None else l_max
    pts = _candidate_offsets(F, candidates, radius)
    good = []
    for tau in pts:
        try:
            sd = shift_defect(F, tau, c)
        except EmptyOverlapError:
            continue
        if sd.sup() <= eps:
            # record the grid shift actually tested, not the candidate node
            good.append(sd.snapped)
    periods = np.asarray(good).reshape(-1, F.grid.n)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    inner = np.all((pts >= lo + l_max / 2) & (pts <= hi - l_max / 2), axis=1)
    probes = pts[inner] if inner.any() else pts
    L = inclusion_length(periods, probes)
    return EpsilonPeriodReport(eps, [lo.tolist(), hi.tolist()], periods,
                               L if L <= l_max else None, l_max)


def best_shift_in(F: SampledFunction, taus: np.ndarray, c: complex, mask=None,
                  stride: int | None = None) -> tuple[float, np.ndarray | None]:
    """Minimum over ``taus`` of the sup defect.

    A strided subgrid sup (a lower bound of the full sup) rejects shifts
    that cannot beat the current best before the full defect is computed.
    """
    g = F.grid
    if stride is None:
        stride = max(4, int(np.ceil((g.size / 20_000) ** (1.0 / g.n))))
    best, arg = float("inf"), None
    for tau in taus:
        k, _ = g.snap(tau)
        sl = overlap_slices(g.count, k)
        if sl is None:
            continue
        base, moved = sl
        bc = tuple(slice(b.start, b.stop, stride) for b in base)
        mc = tuple(slice(m.start, m.stop, stride) for m in moved)
        sc = F.valid[mc] & F.valid[bc]
        if mask is not None:
            sc = sc & mask[bc]
        if sc.any():
            dc = pointwise_norm(F.values[mc] - complex(c) * F.values[bc], F.norm)
            if dc[sc].max() >= best:
                continue
        sd = shift_defect(F, tau, c)
        sel = sd.ok if mask is None else sd.ok & mask[sd.base]
        if not sel.any():
            continue
        d = float(sd.defect[sel].max())
        if d < best:
            best, arg = d, np.asarray(tau)
    return best, arg


def recurrence_bands(F: SampledFunction, K: int, max_candidates: int = 4000,
                     r_max: float | None = None):
    """Split grid shifts 0 < |tau| <= r_max into K radial bands.

    Returns a list of (outer radius, candidate shifts) with at most
    ``max_candidates`` shifts overall (uniform stride subsampling).
    """
    g = F.grid
    half = [0.5 * h * (c - 1) for h, c in zip(g.step, g.count)]
    r_max = min(half) if r_max is None else r_max
    per_axis = [np.arange(-int(r_max / h), int(r_max / h) + 1) * h for h in g.step]
    total = np.prod([len(a) for a in per_axis])
    stride = max(1, int(np.ceil((total / max_candidates) ** (1.0 / g.n))))
    axes = [a[(len(a) // 2) % stride::stride] for a in per_axis]
    taus = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, g.n)
    r = np.linalg.norm(taus, axis=1)
    edges = np.linspace(0, r_max, K + 1)
    bands = []
    for k in range(K):
        sel = (r > edges[k]) & (r <= edges[k + 1])
        if k == 0:
            sel &= r > 0
        bands.append((float(edges[k + 1]), taus[sel]))
    return bands, stride


def uniform_recurrence_check(F: SampledFunction, c: complex = 1.0, K: int = 6,
                             tol: float | None = None, max_candidates: int = 4000,
                             r_max: float | None = None) -> ClassificationReport:
    """Best sup-defect per radial band of shifts, growing toward the window edge.

    Margins are the tail envelopes max_{j >= k} best_j (a finite stand-in for
    limsup over the band index); pass iff they decay below ``tol``.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    tol = default_tolerance(F) if tol is None else tol
    bands, stride = recurrence_bands(F, K, max_candidates, r_max)
    best, witnesses = [], []
    for radius, taus in bands:
        d, arg = best_shift_in(F, taus, c)
        best.append(d)
        witnesses.append({"band_radius": radius,
                          "tau": None if arg is None else arg.tolist(), "defect": d})
    env = [max(best[k:]) for k in range(len(best))]
    verdict = ladder_verdict(env, tol)
    return ClassificationReport("uniform-recurrence", verdict, env, [b[0] for b in bands],
                                tol, witnesses, {"best_defects": best, "stride": stride,
                                                 "c": c})


def bohr_classify(F: SampledFunction, eps_list: Sequence[float], c: complex = 1.0,
                  l_max: float | None = None) -> ClassificationReport:
    """Bohr (c-)almost periodicity: an inclusion length for every eps."""
    reps = [epsilon_period_scan(F, e, c, l_max=l_max) for e in eps_list]
    verdict = PASS if all(r.found for r in reps) else FAIL
    return ClassificationReport(
        "bohr-ap", verdict, [r.inclusion_length if r.found else float("inf") for r in reps],
        list(eps_list), 0.0,
        [{"eps": r.eps, "l": r.inclusion_length, "n_periods": len(r.periods)} for r in reps],
        {"l_max": reps[0].l_max if reps else None})
