"""Mean values, Bohr-Fourier coefficients, spectra and semi-(c_j)-periodicity."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .grid import SampledFunction, pointwise_norm, snapping_bound
from .periodic import PeriodSpec, check_periodic, shift_defect
from .report import FAIL, INDETERMINATE, PASS, ClassificationReport, combine, rows_csv

WINDOWS = ("box", "hann")


class LadderOutsideWindow(ValueError):
    pass


# ---------------------------------------------------------------- averaging

def _axis_weights(ax: np.ndarray, lo: float, T: float, window: str) -> np.ndarray:
    """Quadrature weights of one axis for the cube side [lo, lo + T]."""
    h = ax[1] - ax[0] if len(ax) > 1 else 1.0
    inside = (ax >= lo - 1e-9 * h) & (ax < lo + T - 1e-9 * h)
    if window == "box":
        w = inside.astype(float)
    else:
        w = np.where(inside, 1.0 - np.cos(2 * np.pi * (ax - lo) / T), 0.0)
    return w


def _cube_average(F: SampledFunction, s, T: float, window: str,
                  factor: np.ndarray | None = None) -> np.ndarray:
    """Weighted average of F (times ``factor``) over s + [0, T]^n."""
    g = F.grid
    s = np.broadcast_to(np.asarray(s, float), (g.n,))
    vals = F.values if factor is None else F.values * factor[..., None]
    ws = []
    for j in range(g.n):
        ax = g.axis(j)
        if s[j] < ax[0] - 1e-9 or s[j] + T > ax[-1] + g.step[j] * (1 + 1e-9):
            raise LadderOutsideWindow(f"cube side [{s[j]}, {s[j] + T}] leaves axis {j}")
        ws.append(_axis_weights(ax, s[j], T, window))
    out = vals
    for w in ws:
        out = np.tensordot(w, out, axes=(0, 0)) / w.sum()
    return np.asarray(out)


@dataclass
class MeanValueReport:
    value: np.ndarray
    ladder: list
    estimates: list
    box_estimates: list
    shift_gaps: list
    shifts: list
    window: str = "hann"

    def to_dict(self) -> dict:
        return {"value": self.value.tolist(), "ladder": self.ladder,
                "estimates": [e.tolist() for e in self.estimates],
                "box_estimates": [e.tolist() for e in self.box_estimates],
                "shift_gaps": self.shift_gaps, "shifts": self.shifts, "window": self.window}


def default_shifts(F: SampledFunction, T: float) -> list:
    """Cube corners: the origin plus up to two shifts that keep the cube inside."""
    lo = np.array([b[0] for b in F.domain.bounds()])
    hi = np.array([b[1] for b in F.domain.bounds()])
    room = hi - T - np.maximum(lo, 0.0)
    base = np.maximum(lo, 0.0) if np.any(lo >= 0) else np.zeros(F.grid.n)
    out = [base]
    for frac in (0.5, -0.5):
        s = base + frac * np.minimum(room, T / 5)
        if np.all(s >= lo - 1e-9) and np.all(s + T <= hi + 1e-9) and not np.allclose(s, base):
            out.append(s)
    return out


def mean_value(F: SampledFunction, ladder: Sequence[float], shifts=None,
               window: str = "hann", factor: np.ndarray | None = None) -> MeanValueReport:
    """Estimate lim T^{-n} int_{s + [0,T]^n} F over a T-ladder.

    The reported value is the window-weighted average at the largest T; box
    averages are kept as diagnostics.  ``shift_gaps`` holds the largest
    difference between shifted cubes and the first cube for every rung.
    """
    if window not in WINDOWS:
        raise ValueError(f"window must be one of {WINDOWS}")
    ladder = sorted(float(T) for T in ladder)
    if not ladder:
        raise ValueError("empty T-ladder")
    est, box, gaps = [], [], []
    used = None
    for T in ladder:
        S = default_shifts(F, T) if shifts is None else [np.asarray(s, float) for s in shifts]
        used = S
        vals = [_cube_average(F, s, T, window, factor) for s in S]
        est.append(vals[0])
        box.append(_cube_average(F, S[0], T, "box", factor))
        gaps.append(float(max((np.max(np.abs(v - vals[0])) for v in vals[1:]), default=0.0)))
    return MeanValueReport(est[-1], ladder, est, box, gaps, [s.tolist() for s in used], window)


def _plane_wave(F: SampledFunction, lam) -> np.ndarray:
    """e^{-i <lam, t>} on the grid, built separably."""
    out = np.ones(F.grid.count, complex)
    lam = np.broadcast_to(np.asarray(lam, float), (F.grid.n,))
    for j, ax in enumerate(F.grid.axes()):
        shape = [1] * F.grid.n
        shape[j] = -1
        out = out * np.exp(-1j * lam[j] * ax).reshape(shape)
    return out


def bohr_coefficient(F: SampledFunction, lam, ladder: Sequence[float], shifts=None,
                     window: str = "hann") -> MeanValueReport:
    """Mean value of e^{-i<lam, .>} F."""
    return mean_value(F, ladder, shifts, window, factor=_plane_wave(F, lam))


def decay_envelope(F: SampledFunction, ladder: Sequence[float], s=None,
                   samples: int = 16) -> list:
    """sup over T' in [T, 2T] of the box mean's modulus, per rung."""
    s = np.zeros(F.grid.n) if s is None else s
    out = []
    for T in ladder:
        vals = [float(np.max(np.abs(_cube_average(F, s, Tp, "box"))))
                for Tp in np.linspace(T, 2 * T, samples)]
        out.append(max(vals))
    return out


# ---------------------------------------------------------------- spectra

@dataclass
class SpectrumEstimate:
    frequencies: list
    coefficients: list
    magnitudes: list
    T: float
    floor: float
    residual: float
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"frequencies": self.frequencies, "coefficients": self.coefficients,
                "magnitudes": self.magnitudes, "T": self.T, "floor": self.floor,
                "residual": self.residual, "diagnostics": self.diagnostics}

    def peak_csv(self) -> str:
        rows = [[*np.atleast_1d(f), complex(c).real, complex(c).imag, m]
                for f, c, m in zip(self.frequencies, self.coefficients, self.magnitudes)]
        n = len(np.atleast_1d(self.frequencies[0])) if self.frequencies else 1
        return rows_csv([f"lambda_{j + 1}" for j in range(n)] + ["re", "im", "magnitude"], rows)


def _line_samples(F: SampledFunction, axis: int, T: float, s0: float, fixed: Sequence[int]):
    """Samples t_axis in [s0, s0 + T) with other coordinates at node indices ``fixed``."""
    ax = F.grid.axis(axis)
    sel = (ax >= s0 - 1e-9) & (ax < s0 + T - 1e-9)
    idx = list(fixed)
    idx.insert(axis, np.nonzero(sel)[0])
    vals = F.values[tuple(idx)]
    return ax[sel], vals


def _weighted_coeffs(t, vals, w, lam):
    """Hann-weighted Bohr coefficients of line samples at frequencies ``lam``."""
    lam = np.atleast_1d(lam)
    e = np.exp(-1j * np.outer(lam, t))
    return (e * w) @ vals / w.sum()


def noise_floor(T: float, h: float, factor: float = 5.0) -> float:
    """``factor`` times the Hann mean of e^{i mu t} over [0, T) for a few
    irrational mu: the estimator's noise for a unit-modulus component."""
    t = np.arange(0.0, T, h)
    w = 1.0 - np.cos(2 * np.pi * t / T)
    mus = (math.sqrt(2), math.sqrt(3), math.pi / 3, math.e / 2)
    return factor * max(abs(np.sum(w * np.exp(1j * mu * t)) / w.sum()) for mu in mus)


def spectrum_1d(t: np.ndarray, vals: np.ndarray, floor: float | None = None,
                lam_max: float | None = None, resolution: float | None = None,
                max_peaks: int = 64) -> SpectrumEstimate:
    """Greedy peak extraction on line samples (vals shape (N, m)).

    An FFT of the Hann-weighted, zero-padded samples gives a coarse scan;
    each peak is refined by Brent's method on |coefficient| and subtracted
    from the residual before the next scan.
    """
    vals = np.asarray(vals, complex).reshape(len(t), -1)
    h = float(t[1] - t[0])
    T = float(t[-1] - t[0] + h)
    w = 1.0 - np.cos(2 * np.pi * (t - t[0]) / T)
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if floor is None:
        floor = max(noise_floor(T, h), 1e-9 * scale)
    lam_max = math.pi / h if lam_max is None else lam_max
    resolution = 0.25 * 2 * math.pi / T if resolution is None else resolution
    npad = int(2 ** math.ceil(math.log2(max(len(t), 2 * math.pi / (h * resolution)))))
    res = vals.copy()
    found: list[float] = []
    width = 4 * math.pi / T
    bin_ = 2 * math.pi / (h * npad)
    freqs = 2 * math.pi * np.fft.fftfreq(npad, d=h)
    for _ in range(max_peaks):
        mag = np.linalg.norm(np.fft.fft(res * w[:, None], n=npad, axis=0), axis=1) / w.sum()
        mag[np.abs(freqs) > lam_max] = 0.0
        k = int(np.argmax(mag))
        if mag[k] <= floor:
            break
        lam = _refine(t, res, w, freqs[k], bin_)
        if any(abs(l0 - lam) < 0.5 * width for l0 in found):
            # leakage of a known peak: sharpen the known frequencies instead
            found = _sweep(t, vals, w, found, bin_)
        else:
            found.append(lam)
        coefs = _refit(t, vals, w, found)
        res = vals - _synth(t, found, coefs)
    for _ in range(2):
        found = _sweep(t, vals, w, found, bin_)
    order = np.argsort(found)
    lams = [float(found[i]) for i in order]
    coefs = _refit(t, vals, w, lams) if lams else []
    mags = [float(np.linalg.norm(c)) for c in coefs]
    keep = [i for i, m in enumerate(mags) if m > floor]
    lams = [lams[i] for i in keep]
    coefs = _refit(t, vals, w, lams) if lams else []
    mags = [float(np.linalg.norm(c)) for c in coefs]
    resid = vals - _synth(t, lams, coefs)
    r = float(np.max(np.linalg.norm(_weighted_coeffs(t, resid, w, np.array([0.0])), axis=-1)))
    return SpectrumEstimate(lams, [c if c.size > 1 else complex(c[0]) for c in coefs], mags, T,
                            float(floor), float(np.max(np.abs(resid))) if lams else scale,
                            {"resolution": resolution, "npad": npad, "residual_mean": r})


def _refine(t, res, w, f0, half):
    """Brent maximization of |coefficient| within f0 +- half."""
    opt = minimize_scalar(lambda lam: -float(np.linalg.norm(_weighted_coeffs(t, res, w, lam)[0])),
                          bounds=(f0 - half, f0 + half), method="bounded",
                          options={"xatol": 1e-13 * max(1.0, abs(f0))})
    return float(opt.x)


def _synth(t, lams, coefs):
    if not len(lams):
        return 0.0
    return np.exp(1j * np.outer(t, lams)) @ np.asarray(coefs)


def _sweep(t, vals, w, lams, half):
    """Re-refine each frequency against the data minus all other components."""
    lams = list(lams)
    for i in range(len(lams)):
        coefs = _refit(t, vals, w, lams)
        others = [j for j in range(len(lams)) if j != i]
        r = vals - _synth(t, [lams[j] for j in others], [coefs[j] for j in others])
        lams[i] = _refine(t, r, w, lams[i], half)
    return lams


def _refit(t, vals, w, lams):
    """Weighted least squares for the coefficients at fixed frequencies."""
    A = np.exp(1j * np.outer(t, lams))
    sw = np.sqrt(w)[:, None]
    coef, *_ = np.linalg.lstsq(A * sw, vals * sw, rcond=None)
    return [coef[i] for i in range(len(lams))]


def bohr_spectrum_scan(F: SampledFunction, T: float | None = None, floor: float | None = None,
                       resolution: float | None = None, lam_max: float | None = None,
                       lines: int = 3, seed: int = 0, max_peaks: int = 64) -> SpectrumEstimate:
    """Bohr spectrum estimate.

    In one dimension the scan runs on [s, s + T).  For n > 1 each axis is
    scanned along ``lines`` random lines (other coordinates fixed) and the
    union of axis frequencies is reported per axis in ``diagnostics``; the
    joint frequencies are the products whose direct coefficient clears the
    floor.
    """
    g = F.grid
    lo = [b[0] for b in F.domain.bounds()]
    hi = [b[1] for b in F.domain.bounds()]
    Tmax = min(b - a for a, b in zip(lo, hi))
    T = Tmax if T is None else T
    if T > Tmax + 1e-9:
        raise LadderOutsideWindow("scan length exceeds the window")
    if g.n == 1:
        t, vals = _line_samples(F, 0, T, lo[0], [])
        return spectrum_1d(t, vals, floor, lam_max, resolution, max_peaks)
    rng = np.random.default_rng(seed)
    per_axis = []
    for j in range(g.n):
        fr = []
        for _ in range(lines):
            fixed = [int(rng.integers(0, g.count[i])) for i in range(g.n) if i != j]
            t, vals = _line_samples(F, j, T, lo[j], fixed)
            est = spectrum_1d(t, vals, floor, lam_max, resolution, max_peaks)
            for l in est.frequencies:
                if not any(abs(l - x) < 2 * math.pi / T for x in fr):
                    fr.append(l)
        per_axis.append(sorted(fr))
    t0 = np.asarray(lo)
    cands = np.stack(np.meshgrid(*per_axis, indexing="ij"), -1).reshape(-1, g.n) if all(
        per_axis) else np.zeros((0, g.n))
    fl = floor if floor is not None else max(noise_floor(T, max(g.step)), 1e-9 * F.sup_norm())
    lams, coefs, mags = [], [], []
    for lam in cands:
        c = bohr_coefficient(F, lam, [T], shifts=[t0]).value
        m = float(np.linalg.norm(c))
        if m > fl:
            lams.append(lam.tolist())
            coefs.append(c if c.size > 1 else complex(c[0]))
            mags.append(m)
    return SpectrumEstimate(lams, coefs, mags, T, float(fl), float("nan"),
                            {"axis_frequencies": per_axis})


# ---------------------------------------------------------------- commensurability

def _convergents(x: float, max_den: int):
    """Continued-fraction convergents p/q of x with q <= max_den."""
    out = []
    a = math.floor(x)
    p0, q0, p1, q1 = 1, 0, a, 1
    out.append(Fraction(p1, q1))
    r = x - a
    while r > 1e-15 and len(out) < 64:
        r = 1.0 / r
        a = math.floor(r)
        r -= a
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_den:
            break
        out.append(Fraction(p1, q1))
    return out


def _solve_axis(lams: Sequence[float], theta: float, tol: float, max_den: int):
    """Smallest omega > 0 with lam * omega = theta (mod 2 pi) for every lam, or None."""
    lams = [float(l) for l in lams]
    zero = [l for l in lams if abs(l) <= tol]
    nz = [l for l in lams if abs(l) > tol]
    frac_theta = (theta / (2 * math.pi)) % 1.0
    if zero and min(frac_theta, 1 - frac_theta) > tol:
        return None, "zero frequency forces c = 1"
    if not nz:
        return None, "no nonzero frequency"
    ref = min(nz, key=abs)
    ratios = [l / ref for l in nz]
    conv = [_convergents(r, max_den) for r in ratios]
    depth = max(len(c) for c in conv)
    for d in range(depth):
        fr = [c[min(d, len(c) - 1)] for c in conv]
        if any(abs(float(f) - r) > max(tol, 1e-12) * max(1.0, abs(r)) for f, r in zip(fr, ratios)) \
                and d < depth - 1:
            continue
        Q = math.lcm(*[f.denominator for f in fr])
        N = [int(f.numerator * (Q // f.denominator)) for f in fr]
        g = math.gcd(*N)
        beta = ref / Q * g
        N = [x // g for x in N]
        omega = _twist_solution(N, frac_theta, tol)
        if omega is None:
            continue
        omega = 2 * math.pi * omega / abs(beta) * (1 if beta > 0 else -1)
        resid = max(_dist_to_target(l * omega, theta) for l in lams)
        if resid <= tol:
            return abs(omega) if beta > 0 else omega, f"residual {resid:.3g}"
    return None, "no denominator within the cap meets the tolerance"


def _twist_solution(N: Sequence[int], frac_theta: float, tol: float):
    """Smallest s > 0 with s N_i = frac_theta (mod 1) for all i."""
    diffs = [abs(x - N[0]) for x in N[1:] if x != N[0]]
    G = math.gcd(*diffs) if diffs else 0
    N1 = N[0]
    if G == 0:
        # one distinct integer: s = (frac_theta + k) / N1
        cands = [(frac_theta + k) / abs(N1) for k in range(abs(N1) + 1)]
        cands = [s for s in cands if s > tol]
        return min(cands) if cands else None
    for r in range(1, G * max(1, abs(N1)) + 1):
        s = r / G
        x = (s * N1 - frac_theta) % 1.0
        if min(x, 1 - x) <= 1e-9:
            return s
    return None


def _dist_to_target(phase: float, theta: float) -> float:
    x = ((phase - theta) / (2 * math.pi)) % 1.0
    return min(x, 1 - x)


def commensurability_test(spectrum, tol: float = 1e-6, max_den: int = 10_000,
                          c=1.0) -> ClassificationReport:
    """Per axis find omega_j != 0 with lam_j omega_j = arg(c_j) (mod 2 pi) for
    every lam in the spectrum (c_j = 1: lam_j omega_j in 2 pi Z).

    ``spectrum`` is a SpectrumEstimate or a list of frequencies (numbers in
    one dimension, vectors otherwise).  Failure is an obstruction to
    semi-(c_j)-periodicity at the given resolution.
    """
    freqs = spectrum.frequencies if isinstance(spectrum, SpectrumEstimate) else list(spectrum)
    if not freqs:
        return ClassificationReport("commensurability", INDETERMINATE, [], [], tol, [],
                                    {"reason": "empty spectrum"})
    arr = np.atleast_2d(np.asarray(freqs, float))
    if arr.shape[0] == 1 and np.ndim(freqs[0]) == 0:
        arr = arr.T
    n = arr.shape[1]
    cs = np.broadcast_to(np.asarray(c, complex), (n,))
    omegas, notes, verdicts = [], [], []
    for j in range(n):
        theta = float(np.angle(cs[j]))
        if abs(abs(cs[j]) - 1) > 1e-12:
            omegas.append(None)
            notes.append("|c| != 1")
            verdicts.append(FAIL)
            continue
        om, note = _solve_axis(arr[:, j], theta, tol, max_den)
        omegas.append(om)
        notes.append(note)
        verdicts.append(PASS if om is not None else FAIL)
    return ClassificationReport("commensurability", combine(verdicts), [], [], tol,
                                [{"axis": j, "omega": om} for j, om in enumerate(omegas)],
                                {"notes": notes, "max_den": max_den, "c": list(cs)})


# ---------------------------------------------------------------- semi-(c_j)-periodicity

def _axis_vec(n, j, w):
    v = np.zeros(n)
    v[j] = w
    return v


def _m_defect(F: SampledFunction, j: int, omega: float, c: complex, m_max: int):
    """max_{1 <= m <= m_max} sup_t ||F(t + m omega e_j) - c^m F(t)||.

    Also returns the largest excess of a defect over its snapping bound, which
    is what gets compared with eps when m omega is off the grid.
    """
    worst, excess = 0.0, -np.inf
    for m in range(1, m_max + 1):
        vec = _axis_vec(F.grid.n, j, m * omega)
        d = shift_defect(F, vec, c ** m).sup()
        worst = max(worst, d)
        excess = max(excess, d - snapping_bound(F, vec) * max(1.0, abs(c) ** m))
    return worst, excess


def _truncate_mass(est: SpectrumEstimate, budget: float):
    """Drop the smallest coefficients while their summed magnitude stays <= budget."""
    order = np.argsort(est.magnitudes)
    dropped, keep = 0.0, set(range(len(est.magnitudes)))
    for i in order:
        if dropped + est.magnitudes[i] > budget:
            break
        dropped += est.magnitudes[i]
        keep.discard(int(i))
    return [est.frequencies[i] for i in sorted(keep)], dropped


def semi_cj_check(F, c, eps_list: Sequence[float] = (0.1, 0.05), m_max: int = 8,
                  candidates: Sequence | None = None, spectrum: SpectrumEstimate | None = None,
                  tol: float = 1e-6, max_den: int = 10_000,
                  scan_max: int = 2000) -> ClassificationReport:
    """Semi-(c_j)-periodicity on the window for m <= m_max.

    |c_j| = 1: omega_j comes from the commensurability of the spectrum part
    carrying all but eps/2 of the coefficient mass (plus user candidates) and
    is then verified directly.  A failed commensurability is a certified
    obstruction.  |c_j| != 1: semi-periodicity forces exact c_j-periodicity,
    so the axis passes only when an exactly c_j-periodic omega_j is found.
    """
    fam = [F] if isinstance(F, SampledFunction) else list(F)
    F0 = fam[0]
    n = F0.grid.n
    cs = list(np.broadcast_to(np.asarray(c, complex), (n,)))
    widths = [b[1] - b[0] for b in F0.domain.bounds()]
    if F0.is_real(1e-12) and any(abs(z.imag) > 1e-12 or abs(abs(z) - 1) > 1e-12 for z in cs):
        warn = "real-valued F can only be semi-(c_j)-periodic with c_j in {-1, 1}"
    else:
        warn = None
    verdicts, wit, margins = [], [], []
    spec = None
    for eps in eps_list:
        per_axis = []
        for j in range(n):
            w_max = widths[j] / (m_max + 1)
            if abs(abs(cs[j]) - 1) > 1e-12:
                per_axis.append(_rigid_axis(fam, j, cs[j], w_max, scan_max))
                continue
            if spec is None:
                spec = spectrum if spectrum is not None else bohr_spectrum_scan(F0)
            cand = [] if candidates is None else [float(np.atleast_1d(x)[j]) for x in candidates]
            kept, dropped = _truncate_mass(spec, eps / 2)
            axis_freqs = (kept if n == 1 else [np.atleast_1d(k)[j] for k in kept])
            comm = None
            if axis_freqs:
                om, note = _solve_axis(axis_freqs, float(np.angle(cs[j])), tol, max_den)
                comm = note
                if om is not None:
                    cand.append(om)
            tried = []
            hit = None
            for om in sorted(set(abs(x) for x in cand if x)):
                if om > w_max:
                    tried.append({"omega": om, "defect": None, "reason": "exceeds window"})
                    continue
                ds = [_m_defect(f, j, om, cs[j], m_max) for f in fam]
                d, ex = max(x[0] for x in ds), max(x[1] for x in ds)
                tried.append({"omega": om, "defect": d, "snap_allowance": d - ex})
                if ex <= eps:
                    hit = (om, d, ex)
                    break
            per_axis.append({"axis": j, "verdict": PASS if hit else FAIL,
                             "omega": hit[0] if hit else None,
                             "defect": hit[1] if hit else None,
                             "margin": hit[2] if hit else None,
                             "commensurability": comm, "kept_frequencies": len(axis_freqs),
                             "dropped_mass": dropped, "tried": tried[:8]})
        v = combine([a["verdict"] for a in per_axis])
        verdicts.append(v)
        margins.append(max((a["margin"] for a in per_axis if a.get("margin") is not None),
                           default=float("nan")))
        wit.append({"eps": eps, "axes": per_axis})
    diag = {"eps_verdicts": verdicts, "m_max": m_max, "c": cs}
    if warn:
        diag["warning"] = warn
    return ClassificationReport("semi-cj-periodic", combine(verdicts), margins,
                                list(eps_list), float(min(eps_list)), wit, diag)


def _rigid_axis(fam, j, c, w_max, scan_max) -> dict:
    """|c| != 1 branch: look for an exactly c-periodic omega on the grid."""
    F0 = fam[0]
    h = F0.grid.step[j]
    ks = np.arange(1, min(int(w_max / h), scan_max) + 1)
    for k in ks:
        om = k * h
        vec = _axis_vec(F0.grid.n, j, om)
        d = max(shift_defect(f, vec, c).sup() for f in fam)
        tol = 1e-9 * max(1.0, F0.sup_norm())
        if d <= tol:
            exact = all(check_periodic(f, PeriodSpec.joint(vec, c), tol).passed for f in fam)
            return {"axis": j, "verdict": PASS if exact else FAIL, "omega": om, "defect": d,
                    "margin": d, "rigidity": "exactly c-periodic" if exact else "cross-check failed"}
    return {"axis": j, "verdict": FAIL, "omega": None, "defect": None,
            "rigidity": "no exact period: |c| != 1 admits no proper semi-periodicity"}


def periodize(F: SampledFunction, j: int, omega: float, c: complex, anchor: float | None = None,
              snap: bool = False):
    """(omega, c)-periodic extension along axis j of F restricted to one cell.

    Node t maps to t - m omega in [anchor, anchor + omega) and takes the value
    c^m F(t - m omega).  ``omega`` must be a multiple of the axis step unless
    ``snap`` is set, in which case the nearest multiple is used.
    """
    g = F.grid
    h = g.step[j]
    k = int(round(omega / h))
    if k < 1 or (not snap and abs(k * h - omega) > 1e-9 * max(1.0, omega)):
        raise ValueError("omega must be a positive multiple of the grid step")
    idx = np.arange(g.count[j])
    a = 0 if anchor is None else int(round((anchor - g.origin[j]) / h))
    m = np.floor_divide(idx - a, k)
    src = idx - m * k
    if np.any(src < 0) or np.any(src >= g.count[j]):
        raise ValueError("base cell leaves the window")
    vals = np.take(F.values, src, axis=j)
    shape = [1] * (g.n + 1)
    shape[j] = -1
    vals = vals * (complex(c) ** m.astype(float)).reshape(shape)
    return F.with_values(vals, label=f"{F.label}~periodized")


def semi_periodic_approximation(F: SampledFunction, c, eps_ladder: Sequence[float] | None = None,
                                approximants: Sequence[SampledFunction] | None = None,
                                m_max: int = 8, **kw) -> dict:
    """Uniform approximation by (c_j)-periodic functions.

    With ``approximants`` the gaps sup|F_k - F| are measured and each F_k is
    certified semi-periodic by the check with eps = 3 * gap.  Otherwise the
    semi check is run on a decreasing eps ladder and F is periodized over the
    found omega_j, one approximant per rung.  Gaps must decrease strictly;
    otherwise the result is indeterminate.
    """
    n = F.grid.n
    cs = list(np.broadcast_to(np.asarray(c, complex), (n,)))
    gaps, omegas = [], []
    if approximants is not None:
        for Fk in approximants:
            gaps.append(float(np.max(pointwise_norm(Fk.values - F.values, F.norm))))
        base = None
    else:
        eps_ladder = [0.2, 0.1, 0.05] if eps_ladder is None else list(eps_ladder)
        base = semi_cj_check(F, cs, eps_ladder, m_max, **kw)
        approximants = []
        for w in base.witnesses:
            Fk = F
            om_row = []
            for a in w["axes"]:
                om = a["omega"]
                if om is None:
                    break
                h = F.grid.step[a["axis"]]
                Fk = periodize(Fk, a["axis"], om, cs[a["axis"]], anchor=_anchor(F, a["axis"]), snap=True)
                om_row.append(round(om / h) * h)
            if len(om_row) < n or (omegas and omegas[-1] == om_row):
                # same periods rebuild the same approximant
                continue
            approximants.append(Fk)
            omegas.append(om_row)
            gaps.append(float(np.max(pointwise_norm(Fk.values - F.values, F.norm))))
    decreasing = len(gaps) >= 2 and all(b < a for a, b in zip(gaps, gaps[1:]))
    if not gaps:
        verdict = FAIL if base is not None and base.verdict == FAIL else INDETERMINATE
    elif decreasing:
        verdict = PASS
    else:
        verdict = INDETERMINATE
    return {"verdict": verdict, "gaps": gaps, "omegas": omegas,
            "certified_eps": [3 * g for g in gaps], "decreasing": decreasing,
            "semi_check": None if base is None else base.verdict,
            "approximants": approximants}


def _anchor(F: SampledFunction, j: int) -> float:
    lo, hi = F.domain.bounds()[j]
    return lo if lo >= 0 or F.domain.kinds[j] != "full" else 0.0
