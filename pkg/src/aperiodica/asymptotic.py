"""Asymptotic classes: vanishing functions, S-asymptotic (omega, c)-periodicity,
quasi-asymptotic almost periodicity and uniform recurrence.

Limits |t| -> infinity along a set D are read off a tail ladder
T_1 < ... < T_r: rung k holds the sup of the defect over D_{T_k}.  A class
passes only when the ladder decays monotonically and ends below tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .grid import (DomainSubset, EmptyOverlapError, Grid, SampledFunction, default_tolerance,
                   overlap_slices, pointwise_norm, snapping_bound)
from .periodic import PeriodSpec, shift_defect
from .report import (FAIL, INDETERMINATE, PASS, ClassificationReport, combine,
                     is_monotone_nonincreasing, ladder_verdict)


class PreconditionError(ValueError):
    pass


class DecompositionMismatch(ValueError):
    pass


@lru_cache(maxsize=8)
def _radius(grid: Grid) -> np.ndarray:
    r = grid.radius_field()
    r.setflags(write=False)
    return r


def default_ladder(F: SampledFunction) -> list[float]:
    """Geometric ladder ending at the outer shell R/2."""
    R = F.domain.radius
    return [R / 16, R / 8, R / 4, R / 2]


def _family(F) -> list[SampledFunction]:
    """A function or a list of functions indexed by a sampled parameter set B."""
    return [F] if isinstance(F, SampledFunction) else list(F)


def _mask(D: DomainSubset | None, F: SampledFunction) -> np.ndarray | None:
    if D is None:
        return None
    if D.grid != F.grid:
        raise ValueError("domain subset lives on a different grid")
    return D.mask


def tail_margins(F: SampledFunction, tau, c: complex, ladder: Sequence[float],
                 D: np.ndarray | None = None, both: bool = False, stride: int = 1,
                 G: SampledFunction | None = None) -> np.ndarray:
    """Sup of ||F(t + tau) - c G(t)|| over t in D_T for each rung T.

    ``both=True`` also requires t + tau in D_T (quasi-asymptotic classes).
    Rungs without admissible points get ``nan``.
    """
    G = F if G is None else G
    k, _ = F.grid.snap(tau)
    sl = overlap_slices(F.grid.count, k)
    if sl is None:
        raise EmptyOverlapError(f"shift {tuple(np.atleast_1d(tau))} leaves no overlap")
    base, moved = sl
    if stride > 1:
        # the subsampled sup never exceeds the full one
        base = tuple(slice(b.start, b.stop, stride) for b in base)
        moved = tuple(slice(m.start, m.stop, stride) for m in moved)
    dfc = pointwise_norm(F.values[moved] - complex(c) * G.values[base], F.norm)
    ok = F.valid[moved] & G.valid[base]
    r = _radius(F.grid)
    rb = r[base]
    if D is not None:
        ok = ok & D[base]
    if both:
        rb = np.minimum(rb, r[moved])
        if D is not None:
            ok = ok & D[moved]
    vals = np.where(ok, dfc, -np.inf)
    out = []
    for T in ladder:
        sel = rb >= T
        v = float(vals[sel].max()) if sel.any() else -np.inf
        out.append(v if np.isfinite(v) else np.nan)
    return np.asarray(out)


def vanishing_margins(Q: SampledFunction, ladder: Sequence[float], D=None) -> np.ndarray:
    nrm = np.where(Q.valid if D is None else Q.valid & D, Q.pointwise_norm(), -np.inf)
    r = _radius(Q.grid)
    out = []
    for T in ladder:
        sel = r >= T
        v = float(nrm[sel].max()) if sel.any() else -np.inf
        out.append(v if np.isfinite(v) else np.nan)
    return np.asarray(out)


def vanishing_check(Q, D: DomainSubset | None = None, ladder: Sequence[float] | None = None,
                    tol: float | None = None) -> ClassificationReport:
    """Q tends to 0 as |t| -> infinity in D, uniformly over the family."""
    fam = _family(Q)
    ladder = default_ladder(fam[0]) if ladder is None else list(ladder)
    if not ladder:
        raise ValueError("tail ladder must be nonempty")
    tol = default_tolerance(fam[0]) if tol is None else tol
    m = np.max([vanishing_margins(q, ladder, _mask(D, q)) for q in fam], axis=0)
    return ClassificationReport("vanishing", ladder_verdict(m, tol), m.tolist(), ladder, tol)


def s_asymptotic_check(F, spec: PeriodSpec, D: DomainSubset | Sequence[DomainSubset] | None = None,
                       ladder: Sequence[float] | None = None,
                       tol: float | None = None) -> ClassificationReport:
    """lim_{t in D, |t| -> inf} ||F(t + omega) - c F(t)|| = 0.

    In axiswise mode ``D`` may be a list with one subset per axis.
    """
    fam = _family(F)
    F0 = fam[0]
    ladder = default_ladder(F0) if ladder is None else list(ladder)
    shifts = spec.shifts()
    Ds = list(D) if isinstance(D, (list, tuple)) else [D] * len(shifts)
    if len(Ds) != len(shifts):
        raise ValueError("one domain subset per constrained axis required")
    base_tol = default_tolerance(F0) if tol is None else tol
    per_axis, verdicts, tols = [], [], []
    for (vec, cj), Dj in zip(shifts, Ds):
        m = np.max([tail_margins(f, vec, cj, ladder, _mask(Dj, f)) for f in fam], axis=0)
        t = base_tol + snapping_bound(F0, vec) * max(1.0, abs(cj))
        per_axis.append(m.tolist())
        tols.append(t)
        verdicts.append(ladder_verdict(m, t))
    margins = np.max(np.asarray(per_axis), axis=0)
    name = "s-asymptotic" if spec.mode == "joint" else "s-asymptotic-axiswise"
    return ClassificationReport(name, combine(verdicts), margins.tolist(), ladder, max(tols),
                                [{"omega": vec.tolist(), "c": cj} for vec, cj in shifts],
                                {"per_axis": per_axis, "axis_verdicts": verdicts,
                                 "axis_tolerances": tols})


@dataclass
class QuasiConfig:
    """Finite-window search parameters for quasi-asymptotic classes.

    ``probe_radius``: t_0 are drawn from I' within this radius.
    ``l_ladder``: inclusion lengths tried (ball radii around t_0).
    ``tau_step``: spacing of the candidate lattice for tau.
    ``ladder``: tail ladder for M; its last rung caps M at the outer shell.
    """

    probe_radius: float
    l_ladder: list
    ladder: list
    probe_step: float
    tau_step: float
    decay_ratio: float = 0.75
    prune_stride: int = 4

    @classmethod
    def for_function(cls, F: SampledFunction, **over) -> "QuasiConfig":
        R = F.domain.radius
        h = max(F.grid.step)
        probe = over.pop("probe_radius", R / 10)
        lmax = over.pop("l_max", probe / 2)
        kw = dict(probe_radius=probe, l_ladder=[lmax / 8, lmax / 4, lmax / 2, lmax],
                  ladder=default_ladder(F), probe_step=max(h, probe / 4),
                  tau_step=max(h, lmax / 8), prune_stride=coarse_stride(F))
        kw.update(over)
        kw["tau_step"] = max(h, round(kw["tau_step"] / h) * h)
        return cls(**kw)


def coarse_stride(F: SampledFunction, target: int = 20_000) -> int:
    """Stride giving about ``target`` points in the rejection pre-pass."""
    return max(4, int(np.ceil((F.grid.size / target) ** (1.0 / F.grid.n))))


def _lattice(F: SampledFunction, radius: float, step: float, center=None,
             subset: np.ndarray | None = None) -> np.ndarray:
    """Grid points on a sublattice of spacing ``step`` within ``radius`` of ``center``."""
    g = F.grid
    center = np.zeros(g.n) if center is None else np.asarray(center, float)
    if subset is not None:
        pts = g.points()[subset]
        return pts[np.linalg.norm(pts - center, axis=1) <= radius + 1e-12]
    axes = []
    for j in range(g.n):
        k = max(1, int(round(step / g.step[j])))
        m = int(np.floor(radius / (k * g.step[j]) + 1e-9))
        axes.append(np.arange(-m, m + 1) * k * g.step[j])
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, g.n)
    _, snapped = g.snap(center)
    pts = pts + snapped
    return pts[np.linalg.norm(pts - center, axis=1) <= radius + 1e-12]


class _TauCache:
    """Lazily computed tail ladders per candidate shift.

    ``fn(tau, stride)`` returns the ladder; ``stride > 1`` gives a cheap
    subsampled ladder used only to reject candidates (a subsampled sup
    never exceeds the full one).
    """

    def __init__(self, fn, stride):
        self.fn, self.stride = fn, stride
        self.full: dict = {}
        self.coarse: dict = {}

    def _eval(self, tau, stride):
        try:
            return np.asarray(self.fn(tau, stride), float)
        except EmptyOverlapError:
            return None

    def margins(self, tau) -> np.ndarray | None:
        key = tuple(np.round(np.asarray(tau), 9))
        if key not in self.full:
            self.full[key] = self._eval(tau, 1)
        return self.full[key]

    def accepts(self, tau, eps) -> tuple[bool, np.ndarray | None]:
        """Whether some rung brings the defect to <= eps; cheap rejection first."""
        key = tuple(np.round(np.asarray(tau), 9))
        if key not in self.full and self.stride > 1:
            if key not in self.coarse:
                self.coarse[key] = self._eval(tau, self.stride)
            cm = self.coarse[key]
            if cm is None or not np.any(cm <= eps):
                return False, cm
        m = self.margins(tau)
        return (m is not None and bool(np.any(m <= eps))), m


def _first_rung(m: np.ndarray, eps: float) -> int:
    return int(np.nonzero(m <= eps)[0][0])


def quasi_search(F0: SampledFunction, margin_fn, cfg: QuasiConfig, eps_list: Sequence[float],
                 I_prime: np.ndarray | None, class_name: str,
                 eps_dependent: bool = False, diagnostics: dict | None = None,
                 workers: int = 1) -> ClassificationReport:
    """Inclusion-length search shared by the pointwise and cell-based classes.

    ``margin_fn(tau, stride, eps)`` returns the tail ladder of the defect for
    the shift ``tau``.  For each eps the smallest l in the l-ladder such that
    every probe ball holds an accepted shift is recorded.
    """
    if not eps_list:
        raise ValueError("eps list must be nonempty")
    probes = _lattice(F0, cfg.probe_radius, cfg.probe_step, subset=I_prime)
    if len(probes) == 0:
        raise PreconditionError("no probe points of I' inside the probe radius")
    shared = _TauCache(lambda tau, s: margin_fn(tau, s, None), cfg.prune_stride)
    l_max = max(cfg.l_ladder)
    verdicts, witnesses, found_l, evaluated = [], [], [], 0
    for eps in eps_list:
        cache = (_TauCache(lambda tau, s, e=eps: margin_fn(tau, s, e), cfg.prune_stride)
                 if eps_dependent else shared)
        balls = {}
        for l in sorted(cfg.l_ladder):
            balls[l] = [_sorted_lattice(F0, l, cfg.tau_step, t0, I_prime) for t0 in probes]
        _prefetch(cache, balls[l_max], workers)
        result = None
        for l in sorted(cfg.l_ladder):
            wit = []
            for t0, cands in zip(probes, balls[l]):
                hit = None
                for tau in cands:
                    ok, m = cache.accepts(tau, eps)
                    if ok:
                        hit = (tau, m)
                        break
                if hit is None:
                    wit = None
                    break
                k = _first_rung(hit[1], eps)
                wit.append({"t0": t0.tolist(), "tau": hit[0].tolist(),
                            "M": cfg.ladder[k], "margins": hit[1].tolist()})
            if wit is not None:
                result = (l, wit)
                break
        if result is not None:
            l, wit = result
            monotone = all(is_monotone_nonincreasing(w["margins"]) for w in wit)
            verdicts.append(PASS if monotone else INDETERMINATE)
            found_l.append(l)
            witnesses.append({"eps": eps, "l": l, "witnesses": wit[:8], "n_probes": len(wit)})
        else:
            verdicts.append(_undecided_or_fail(cache, balls[l_max], cfg, eps))
            found_l.append(float("inf"))
            witnesses.append({"eps": eps, "l": None})
        if cache is not shared:
            evaluated += len(cache.full)
    evaluated += len(shared.full)
    rows = [w2["margins"] for w in witnesses if w.get("l") is not None for w2 in w["witnesses"]]
    worst = np.nanmax(np.asarray(rows, float), axis=0).tolist() if rows else []
    diag = {"eps_verdicts": verdicts, "inclusion_lengths": found_l,
            "probe_radius": cfg.probe_radius, "l_ladder": cfg.l_ladder,
            "n_shifts_evaluated": evaluated}
    diag.update(diagnostics or {})
    return ClassificationReport(class_name, combine(verdicts), worst, cfg.ladder,
                                float(min(eps_list)), witnesses, diag)


def _sorted_lattice(F0, l, step, t0, I_prime):
    cands = _lattice(F0, l, step, center=t0, subset=I_prime)
    return cands[np.lexsort((*cands.T[::-1], np.linalg.norm(cands, axis=1)))]


def _prefetch(cache: _TauCache, balls, workers: int):
    """Fill the full-ladder cache in parallel; results do not depend on order."""
    if workers <= 1 or cache.stride > 1:
        return
    from concurrent.futures import ThreadPoolExecutor

    taus = {tuple(np.round(t, 9)): t for cands in balls for t in cands}
    with ThreadPoolExecutor(workers) as ex:
        for key, m in zip(taus, ex.map(lambda t: cache._eval(t, 1), taus.values())):
            cache.full[key] = m


def _undecided_or_fail(cache, balls, cfg, eps) -> str:
    for cands in balls:
        if any(cache.accepts(tau, eps)[0] for tau in cands):
            continue
        # this probe has no witness: fail unless some candidate still decays
        for tau in cands:
            m = cache.margins(tau)
            if m is None or np.isnan(m).any() or len(m) < 2:
                continue
            if m[-1] > eps and m[-1] <= cfg.decay_ratio * m[-2]:
                return INDETERMINATE
        return FAIL
    return INDETERMINATE


def quasi_asymptotic_check(F, c: complex = 1.0, eps_list: Sequence[float] = (0.5, 0.25, 0.15),
                           I_prime: DomainSubset | None = None, D: DomainSubset | None = None,
                           config: QuasiConfig | None = None, workers: int = 1,
                           **over) -> ClassificationReport:
    """For every eps find l such that each probe t_0 in I' has tau in B(t_0, l)
    whose defect is <= eps on D_M (t and t + tau both in D_M) for some rung M.

    A failing eps is indeterminate (rather than fail) when some candidate's
    ladder is still decaying at the outer shell, i.e. M would have to exceed
    the window.
    """
    fam = _family(F)
    F0 = fam[0]
    cfg = config or QuasiConfig.for_function(F0, **over)
    Dm = _mask(D, F0)
    Im = None if I_prime is None else _mask(I_prime, F0)

    def margins(tau, stride, _eps):
        return np.max([tail_margins(f, tau, c, cfg.ladder, Dm, both=True, stride=stride)
                       for f in fam], axis=0)

    return quasi_search(F0, margins, cfg, eps_list, Im, "quasi-asymptotic-ap",
                        diagnostics={"c": c}, workers=workers)


def quasi_uniform_recurrence_check(F, c: complex = 1.0, K: int = 4,
                                   I_prime: DomainSubset | None = None,
                                   D: DomainSubset | None = None, r_max: float | None = None,
                                   tol: float | None = None,
                                   tau_step: float | None = None) -> ClassificationReport:
    """Shifts tau_k from K radial bands (|tau_k| growing) with tail radii M_k
    growing quadratically to the outer shell; the k-th margin is the best
    defect in band k, and the ladder is its tail envelope."""
    if K < 2:
        raise ValueError("K must be at least 2")
    fam = _family(F)
    F0 = fam[0]
    R = F0.domain.radius
    r_max = R / 8 if r_max is None else r_max
    m_cap = R / 2
    tol = default_tolerance(F0) if tol is None else tol
    h = max(F0.grid.step)
    tau_step = max(h, r_max / 16) if tau_step is None else tau_step
    Dm = _mask(D, F0)
    Im = None if I_prime is None else _mask(I_prime, F0)
    taus = _lattice(F0, r_max, tau_step, subset=Im)
    rad = np.linalg.norm(taus, axis=1)
    edges = np.linspace(0, r_max, K + 1)
    best, wit, Ms = [], [], []
    for k in range(K):
        Mk = m_cap * ((k + 1) / K) ** 2
        Ms.append(Mk)
        sel = (rad > edges[k]) & (rad <= edges[k + 1] + 1e-12)
        b, arg = np.inf, None
        for tau in taus[sel]:
            try:
                v = float(np.nanmax([tail_margins(f, tau, c, [Mk], Dm, both=True)[0]
                                     for f in fam]))
            except EmptyOverlapError:
                continue
            if v < b:
                b, arg = v, tau
        best.append(b)
        wit.append({"tau": None if arg is None else arg.tolist(), "M": Mk, "defect": b})
    env = [max(best[k:]) for k in range(K)]
    return ClassificationReport("quasi-asymptotic-ur", ladder_verdict(env, tol), env, Ms, tol,
                                wit, {"best_defects": best, "c": c, "band_edges": edges.tolist()})


def perturbation_property(F, Q, c: complex = 1.0, eps_list: Sequence[float] = (0.5, 0.25, 0.15),
                          D: DomainSubset | None = None, **over) -> dict:
    """F + Q keeps the quasi-asymptotic verdict of F when Q vanishes on D.

    Every witness (tau, M) of F is re-checked on F + Q against eps inflated
    by (1 + |c|) sup_{D_M} ||Q||.
    """
    Qf = _family(Q)[0]
    vq = vanishing_check(Q, D)
    if not vq.passed:
        raise PreconditionError("perturbation is not vanishing on D")
    Ff = _family(F)[0]
    FQ = Ff.with_values(Ff.values + Qf.values, label=f"{Ff.label}+Q")
    r1 = quasi_asymptotic_check(Ff, c, eps_list, D=D, **over)
    r2 = quasi_asymptotic_check(FQ, c, eps_list, D=D, **over)
    reuse = []
    for w in r1.witnesses:
        if w.get("l") is None:
            continue
        for x in w["witnesses"]:
            qtail = float(vanishing_margins(Qf, [x["M"]], _mask(D, Qf))[0])
            d = tail_margins(FQ, x["tau"], c, [x["M"]], _mask(D, FQ), both=True)[0]
            reuse.append(bool(d <= w["eps"] + (1 + abs(c)) * qtail + 1e-12))
    return {"verdict_F": r1.verdict, "verdict_FQ": r2.verdict,
            "same": r1.verdict == r2.verdict, "witness_reuse": all(reuse) if reuse else None,
            "q_margins": vq.margins}


def joint_domain(spec: PeriodSpec, Ds: Sequence[DomainSubset]) -> DomainSubset:
    """t in D_n with t + sum_{i > j} omega_i e_i in D_j for every j < n."""
    n = spec.n
    g = Ds[0].grid
    mask = Ds[-1].mask.copy()
    for j in range(n - 1):
        tail = np.zeros(n)
        tail[j + 1:] = np.asarray(spec.omega)[j + 1:]
        k, _ = g.snap(tail)
        sl = overlap_slices(g.count, k)
        shifted = np.zeros(g.count, bool)
        if sl is not None:
            base, moved = sl
            shifted[base] = Ds[j].mask[moved]
        mask &= shifted
    return DomainSubset(g, mask, "joint")


def telescope_combine(F: SampledFunction, spec: PeriodSpec, Ds: Sequence[DomainSubset],
                      ladder: Sequence[float] | None = None,
                      tol: float | None = None) -> ClassificationReport:
    """Axiswise S-asymptotic data give joint (sum omega_j e_j, prod c_j) data.

    Checks pointwise that the joint defect is bounded by
    sum_j (prod_{i<j} |c_i|) d_j(t + sum_{i>j} omega_i e_i).
    """
    if spec.mode != "axiswise":
        raise ValueError("telescoping needs an axiswise spec")
    axis_rep = s_asymptotic_check(F, spec, list(Ds), ladder, tol)
    D = joint_domain(spec, Ds)
    ladder = axis_rep.ladder
    if not D.reaches(max(ladder)):
        raise PreconditionError("combined domain misses the outer shell")
    omega = np.asarray(spec.omega)
    cprod = complex(np.prod(spec.c))
    joint = PeriodSpec.joint(omega, cprod)
    joint_rep = s_asymptotic_check(F, joint, D, ladder, tol)
    g = F.grid
    jd, jok = shift_defect(F, omega, cprod).full(g.count)
    bound = np.zeros(g.count)
    bok = np.ones(g.count, bool)
    weight = 1.0
    for j in range(spec.n):
        e = np.zeros(spec.n)
        e[j] = omega[j]
        dj, okj = shift_defect(F, e, spec.c[j]).full(g.count)
        tail = np.zeros(spec.n)
        tail[j + 1:] = omega[j + 1:]
        k, _ = g.snap(tail)
        sl = overlap_slices(g.count, k)
        moved_d = np.zeros(g.count)
        moved_ok = np.zeros(g.count, bool)
        if sl is not None:
            base, moved = sl
            moved_d[base] = dj[moved]
            moved_ok[base] = okj[moved]
        bound += weight * moved_d
        bok &= moved_ok
        weight *= abs(spec.c[j])
    sel = jok & bok & D.mask
    excess = float(np.max(jd[sel] - bound[sel])) if sel.any() else float("nan")
    diag = {"axis_verdict": axis_rep.verdict, "joint_margins": joint_rep.margins,
            "max_excess_over_bound": excess, "joint_c": cprod,
            "axis_margins": axis_rep.diagnostics["per_axis"]}
    verdict = joint_rep.verdict
    if axis_rep.verdict != PASS:
        verdict = combine([axis_rep.verdict, verdict])
    return ClassificationReport("telescoped-joint", verdict, joint_rep.margins, ladder,
                                joint_rep.tolerance, [{"omega": omega.tolist(), "c": cprod}],
                                diag)


def decomposition_check(F: SampledFunction, F0: SampledFunction, Q: SampledFunction,
                        spec: PeriodSpec, D: DomainSubset | None = None,
                        ladder: Sequence[float] | None = None, tol: float = 1e-9) -> dict:
    """F = F0 + Q with F0 exactly periodic and Q vanishing on D; a pass is
    cross-checked against the direct S-asymptotic test of F."""
    from .periodic import check_periodic

    gap = float(np.max(pointwise_norm(F.values - F0.values - Q.values, F.norm)))
    if gap > tol * max(1.0, F.sup_norm()):
        raise DecompositionMismatch(f"F differs from F0 + Q by {gap:.3g}")
    per = check_periodic(F0, spec)
    van = vanishing_check(Q, D, ladder)
    passed = per.passed and van.passed
    s = s_asymptotic_check(F, spec, D, ladder)
    return {"verdict": PASS if passed else FAIL, "periodic": per.passed,
            "vanishing": van.verdict, "s_asymptotic": s.verdict,
            "consistent": (not passed) or s.passed, "q_margins": van.margins}


def uniform_limit_check(F: SampledFunction, approximants: Sequence[SampledFunction],
                        spec: PeriodSpec, D=None, ladder=None, tol: float | None = None) -> dict:
    """Each approximant passes; F passes with tolerance inflated by
    max(3, 1 + |c|) times the smallest uniform gap."""
    reps, gaps = [], []
    for Fk in approximants:
        reps.append(s_asymptotic_check(Fk, spec, D, ladder, tol))
        gaps.append(float(np.max(pointwise_norm(Fk.values - F.values, F.norm))))
    base = s_asymptotic_check(F, spec, D, ladder, tol)
    factor = max(3.0, 1.0 + max(abs(z) for z in spec.c))
    passing = [g for g, r in zip(gaps, reps) if r.passed]
    if not passing:
        return {"approximant_verdicts": [r.verdict for r in reps], "gaps": gaps,
                "limit_margins": base.margins, "verdict": INDETERMINATE}
    verdict = ladder_verdict(base.margins, base.tolerance + factor * min(passing))
    return {"approximant_verdicts": [r.verdict for r in reps], "gaps": gaps,
            "limit_margins": base.margins, "verdict": verdict}
