"""Registry of property checks and the suite runner.

A check returns a :class:`CheckOutcome`.  Its status is ``pass`` only when
the property holds: a classifier reproduces the expected verdict, or a
numerical identity holds within its pinned tolerance.  Checks whose margins
form a ladder are audited by the runner, and a pass with a non-monotone
ladder is downgraded to indeterminate.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import corpus
from .applications import (HammersteinProblem, Kernel, WaveProblem, convolution_invariance_property,
                           convolve, dalembert_asymptotic_certify, dalembert_solve, gaussian_apply,
                           hammerstein_dense_linear, hammerstein_semiperiodic_property, hammerstein_solve,
                           wave_residual)
from .asymptotic import (decomposition_check, perturbation_property, quasi_asymptotic_check,
                         s_asymptotic_check, telescope_combine, uniform_limit_check, vanishing_check)
from .grid import Domain, DomainSubset, Grid, midpoint_grid, box_domain, sample, shift_sample
from .harmonic import (bohr_spectrum_scan, commensurability_test, decay_envelope, mean_value,
                       semi_cj_check, semi_periodic_approximation)
from .periodic import PeriodSpec, bohr_classify, check_periodic, profile_transform, uniform_recurrence_check
from .report import FAIL, INDETERMINATE, PASS, ClassificationReport, combine, is_monotone_nonincreasing
from .stepanov_weyl import (VARIANTS, StepanovConfig, WeightSpec, WeylConfig, bochner_transform,
                            power_argument_check, stepanov_classify, weyl_distance,
                            weyl_threshold_experiment, weyl_ur_check)
from .varlex import ExponentField, embedding_check, holder_check, luxemburg_norm

SUITES = ("periodicity", "asymptotic", "stepanov-weyl", "harmonic", "applications")
TWO_PI = 2 * math.pi


class UnknownSuite(KeyError):
    pass


@dataclass
class CheckOutcome:
    status: str
    margins: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    ladder: bool = False


@dataclass
class Check:
    id: str
    suite: str
    description: str
    fn: Callable[[np.random.Generator], CheckOutcome]


REGISTRY: dict[str, Check] = {}


def register(cid: str, suite: str, description: str):
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")

    def deco(fn):
        if cid in REGISTRY:
            raise ValueError(f"duplicate check id {cid!r}")
        REGISTRY[cid] = Check(cid, suite, description, fn)
        return fn

    return deco


def _ok(cond: bool, margins=(), ladder: bool = False, **details) -> CheckOutcome:
    return CheckOutcome(PASS if cond else FAIL, [float(m) for m in margins], details, ladder)


def _expect(rep: ClassificationReport, expected: str, ladder: bool = False, **details) -> CheckOutcome:
    """Pass iff the classifier verdict equals ``expected``; an indeterminate
    verdict stays indeterminate."""
    if rep.verdict == expected:
        status = PASS
    elif rep.verdict == INDETERMINATE:
        status = INDETERMINATE
    else:
        status = FAIL
    details = dict(details, verdict=rep.verdict, expected=expected)
    return CheckOutcome(status, list(rep.margins), details, ladder)


def _merge(outcomes: list[CheckOutcome], **details) -> CheckOutcome:
    status = combine([o.status for o in outcomes])
    margins = [m for o in outcomes for m in o.margins]
    ladder = any(o.ladder for o in outcomes)
    if ladder and status == PASS and not all(is_monotone_nonincreasing(o.margins)
                                             for o in outcomes if o.ladder):
        status = INDETERMINATE
    return CheckOutcome(status, margins, dict(details, parts=[o.details for o in outcomes]), ladder)


def _s(name: str, n: int, radius: float, step: float, **kw):
    return corpus.get(name).sample(n, radius, step, **kw)


def _lattice_subset(F, w: float) -> DomainSubset:
    x = F.grid.points()[..., 0]
    k = np.round(x / w)
    return DomainSubset(F.grid, (np.abs(x - k * w) < 1e-9) & (k >= 1), "omegaN")


def _ge0(F) -> DomainSubset:
    return DomainSubset.from_predicate(F.grid, lambda x: x[..., 0] >= 0, "t>=0")


# --- periodicity -------------------------------------------------------------

@register("periodic.sin-period", "periodicity", "sin is (2pi, 1)- and (pi, -1)-periodic")
def _(rng):
    F = _s("sin", 1, 40, math.pi / 16)
    a = check_periodic(F, PeriodSpec.joint([TWO_PI], 1.0))
    b = check_periodic(F, PeriodSpec.joint([math.pi], -1.0))
    c = check_periodic(F, PeriodSpec.joint([math.pi], 1.0))
    return _ok(a.passed and b.passed and not c.passed, [a.max_defect, b.max_defect, c.max_defect])


@register("periodic.twisted-sine", "periodicity", "twisted sine is (2pi, c)-periodic for c in {i, e^i}")
def _(rng):
    out = []
    for c in (1j, np.exp(1j)):
        F = _s("twisted-sine", 1, 40, math.pi / 16, c=c)
        r = check_periodic(F, PeriodSpec.joint([TWO_PI], c))
        out.append(_ok(r.passed, [r.max_defect], c=c))
    return _merge(out)


@register("periodic.exp-base", "periodicity", "base^t is (1, base)-periodic for base 2 and 0.5")
def _(rng):
    out = []
    for base in (2.0, 0.5):
        F = _s("exp-base", 1, 8, 1 / 16, base=base)
        r = check_periodic(F, PeriodSpec.joint([1.0], base), tol=1e-9 * F.sup_norm())
        out.append(_ok(r.passed, [r.max_defect], base=base))
    return _merge(out)


@register("periodic.power-spec", "periodicity", "(omega, c)-periodic implies (m omega, c^m)-periodic")
def _(rng):
    F = _s("twisted-sine", 1, 80, math.pi / 16, c=1j)
    spec = PeriodSpec.joint([TWO_PI], 1j)
    rs = [check_periodic(F, spec.power(m)) for m in (1, 2, 3, 4)]
    return _ok(all(r.passed for r in rs), [r.max_defect for r in rs])


@register("periodic.profile", "periodicity", "the profile of a (2pi, i)-periodic function is 2pi-periodic")
def _(rng):
    F = _s("twisted-sine", 1, 40, math.pi / 16, c=1j)
    spec = PeriodSpec.joint([TWO_PI], 1j)
    P = profile_transform(F, spec)
    r = check_periodic(P, PeriodSpec.joint([TWO_PI], 1.0), tol=1e-9)
    return _ok(r.passed, [r.max_defect])


@register("periodic.bohr-quasiperiodic", "periodicity", "sin t + sin(sqrt2 t) is Bohr almost periodic")
def _(rng):
    F = _s("sin-irrational", 1, 400, 0.25)
    return _expect(bohr_classify(F, [0.5, 0.25]), PASS)


@register("periodic.recurrence", "periodicity", "sin is uniformly recurrent and t is not")
def _(rng):
    a = uniform_recurrence_check(_s("sin", 1, 200, 0.25))
    b = uniform_recurrence_check(_s("identity", 1, 200, 0.25))
    return _merge([_expect(a, PASS), _expect(b, FAIL)])


# --- variable-exponent spaces (grouped with the Stepanov/Weyl suite) ---------

def _piecewise(rng, cells: int = 400, pieces: int = 5, p_choices=(1.0, 2.0, 4.0, math.inf)):
    cuts = np.sort(rng.choice(np.arange(1, cells), pieces - 1, replace=False))
    bounds = np.concatenate([[0], cuts, [cells]])
    a = rng.uniform(0.1, 3.0, pieces)
    p = rng.choice(p_choices, pieces)
    w = np.diff(bounds) / cells
    fa = np.repeat(a, np.diff(bounds))
    fp = np.repeat(p, np.diff(bounds))
    return a, p, w, fa, fp


def _grid01(cells: int):
    g = midpoint_grid([0.0], [1.0], cells)
    return g, box_domain([0.0], [1.0])


def luxemburg_oracle(a, p, w) -> float:
    """Independent root solve of sum w_i (a_i/lam)^{p_i} = 1 with an infinity threshold."""
    a, p, w = map(np.asarray, (a, p, w))
    inf = np.isinf(p)
    lo = float(a[inf].max()) if inf.any() else 0.0
    fin = ~inf
    if not fin.any():
        return lo
    rho = lambda lam: float(np.sum(w[fin] * (a[fin] / lam) ** p[fin])) - 1.0
    if lo > 0 and rho(lo) <= 0:
        return lo
    hi = max(lo, 1.0)
    while rho(hi) > 0:
        hi *= 2
    lo = max(lo, 1e-12)
    return brentq(rho, lo, hi, xtol=1e-15, rtol=1e-14)


@register("spaces.luxemburg-constant", "stepanov-weyl",
          "Luxemburg norm with constant p in {1,2,4,inf} matches closed forms on 20 random step functions")
def _(rng):
    cells = 400
    g, dom = _grid01(cells)
    errs = []
    for _ in range(20):
        a, _p, w, fa, _fp = _piecewise(rng, cells)
        F = sample(lambda t: np.zeros(t.shape[:-1]), g, dom).with_values(fa)
        for p0 in (1.0, 2.0, 4.0, math.inf):
            exact = float(a.max()) if math.isinf(p0) else float(np.sum(w * a ** p0) ** (1 / p0))
            got = luxemburg_norm(F, ExponentField.constant(g, p0))
            errs.append(abs(got - exact) / exact)
    return _ok(max(errs) <= 1e-6, [max(errs)])


@register("spaces.luxemburg-variable", "stepanov-weyl",
          "Luxemburg norm with piecewise p (including inf) matches a root-solve oracle")
def _(rng):
    cells = 400
    g, dom = _grid01(cells)
    errs = []
    for _ in range(20):
        a, p, w, fa, fp = _piecewise(rng, cells)
        F = sample(lambda t: np.zeros(t.shape[:-1]), g, dom).with_values(fa)
        got = luxemburg_norm(F, ExponentField(g, fp))
        exact = luxemburg_oracle(a, p, w)
        errs.append(abs(got - exact) / exact)
    return _ok(max(errs) <= 1e-6, [max(errs)])


@register("spaces.luxemburg-two-piece", "stepanov-weyl",
          "f = 1 with p = 1 on [0, 1/2) and p = 2 on [1/2, 1] has norm 1")
def _(rng):
    g, dom = _grid01(1000)
    F = sample(lambda t: np.ones(t.shape[:-1]), g, dom)
    p = ExponentField.from_function(g, lambda t: np.where(t[..., 0] < 0.5, 1.0, 2.0))
    v = luxemburg_norm(F, p)
    return _ok(abs(v - 1.0) <= 1e-8, [abs(v - 1.0)], value=v)


@register("spaces.holder", "stepanov-weyl", "Hoelder inequality for random polynomial pairs")
def _(rng):
    g, dom = _grid01(500)
    out = []
    for _ in range(5):
        cu, cv = rng.normal(size=4), rng.normal(size=4)
        u = sample(lambda t: np.polyval(cu, t[..., 0]), g, dom)
        v = sample(lambda t: np.polyval(cv, t[..., 0]), g, dom)
        two, one = ExponentField.constant(g, 2.0), ExponentField.constant(g, 1.0)
        r = holder_check(u, v, two, one, two)
        out.append(_ok(r.holds, [r.slack]))
    return _merge(out)


@register("spaces.embedding", "stepanov-weyl", "embedding L^4 into L^2 for the indicator of [0, 1/2]")
def _(rng):
    g, dom = _grid01(1000)
    f = sample(lambda t: (t[..., 0] <= 0.5).astype(float), g, dom)
    r = embedding_check(f, ExponentField.constant(g, 4.0), ExponentField.constant(g, 2.0))
    exact_q, exact_p = 0.5 ** 0.5, 0.5 ** 0.25
    ok = r.holds and abs(r.lhs - exact_q) < 1e-9 and abs(r.details["norm_p"] - exact_p) < 1e-9
    return _ok(ok, [r.slack])


# --- asymptotic ----------------------------------------------------------------

@register("asymptotic.periodic-implies-s-asymptotic", "asymptotic",
          "exactly (omega, c)-periodic functions are S-asymptotically (omega, c)-periodic")
def _(rng):
    out = []
    for name, kw, w, c in (("sin", {}, TWO_PI, 1.0), ("sin", {}, math.pi, -1.0),
                           ("twisted-sine", {"c": 1j}, TWO_PI, 1j)):
        F = _s(name, 1, 128, math.pi / 16, **kw)
        out.append(_expect(s_asymptotic_check(F, PeriodSpec.joint([w], c)), PASS, ladder=True))
    return _merge(out)


@register("asymptotic.vanishing", "asymptotic", "1/(1+|t|) and exp(-|t|) vanish at infinity")
def _(rng):
    out = [_expect(vanishing_check(_s(nm, 1, 200, 0.25), ladder=[10, 20, 40, 80], tol=0.02), PASS,
                   ladder=True) for nm in ("inv-decay", "exp-decay")]
    return _merge(out)


@register("asymptotic.periodic-plus-decay", "asymptotic",
          "sin t + exp(-|t|) is S-asymptotically 2pi-periodic and t is not")
def _(rng):
    a = s_asymptotic_check(_s("periodic-plus-decay", 1, 128, math.pi / 16), PeriodSpec.joint([TWO_PI], 1.0))
    b = s_asymptotic_check(_s("identity", 1, 128, math.pi / 16), PeriodSpec.joint([TWO_PI], 1.0))
    return _merge([_expect(a, PASS, ladder=True), _expect(b, FAIL, ladder=True)])


def _sin_log_reports(n: int):
    F = _s("sin-log", n, 200, 0.25)
    return (quasi_asymptotic_check(F, 1.0), quasi_asymptotic_check(F, -1.0),
            uniform_recurrence_check(F))


@register("asymptotic.sin-log", "asymptotic",
          "sin(ln(1+|t|)) on n = 1, 2: quasi-asymptotic for c = 1, not for c = -1, not uniformly recurrent")
def _(rng):
    out = []
    for n in (1, 2):
        a, b, c = _sin_log_reports(n)
        out += [_expect(a, PASS, n=n), _expect(b, FAIL, n=n), _expect(c, FAIL, n=n)]
    return _merge(out)


TRANSPORT_CASES = (("exp-base", {"base": 0.5, "period": 1.0}, 1.0, 0.5),
                   ("sin", {}, math.pi, -1.0),
                   ("sin", {}, TWO_PI, 1.0),
                   ("twisted-sine", {"c": 1j}, TWO_PI, 1j))


def transport_quasi(name, kw, w, c, eps_list=(0.5, 0.25, 0.15)) -> ClassificationReport:
    """Quasi-asymptotic check with I' = omega N and inclusion length 2 omega."""
    F = _s(name, 1, 64 * w, w / 16, **kw)
    return quasi_asymptotic_check(F, c, eps_list, I_prime=_lattice_subset(F, w), D=_ge0(F),
                                  l_ladder=[2 * w], probe_step=w)


@register("asymptotic.transport-quasi", "asymptotic",
          "exact (omega, c)-periodicity with |c| <= 1 gives quasi-asymptotic (omega N, c) with l = 2 omega")
def _(rng):
    out = []
    for name, kw, w, c in TRANSPORT_CASES:
        r = transport_quasi(name, kw, w, c)
        out.append(_expect(r, PASS, entry=name, c=c))
    return _merge(out)


@register("asymptotic.transport-irrational-angle", "asymptotic",
          "the l = 2 omega witness fails for c = e^i, where c^n never returns near c in 5 steps")
def _(rng):
    return _expect(transport_quasi("twisted-sine", {"c": np.exp(1j)}, TWO_PI, np.exp(1j)), FAIL)


def _product_setup():
    P = _s("product", 2, 20, 0.5)
    D1 = DomainSubset.everything(P.grid)
    D2 = DomainSubset.from_predicate(P.grid, lambda x: x[..., 0] <= TWO_PI)
    return P, [D1, D2], PeriodSpec.axiswise([TWO_PI, 1.0], [1j, 1.0])


@register("asymptotic.telescoping", "asymptotic",
          "axiswise S-asymptotic periodicity telescopes to the joint shift with c = prod c_j")
def _(rng):
    P, Ds, spec = _product_setup()
    a = s_asymptotic_check(P, spec, Ds, ladder=[2.5, 5, 10])
    t = telescope_combine(P, spec, Ds, ladder=[2.5, 5, 10])
    ex = t.diagnostics["max_excess_over_bound"]
    return _merge([_expect(a, PASS, ladder=True), _expect(t, PASS, ladder=True),
                   _ok(ex <= 1e-9, [], excess=ex)])


@register("asymptotic.perturbation", "asymptotic",
          "adding a function vanishing at infinity keeps the quasi-asymptotic verdict")
def _(rng):
    F = _s("sin-log", 1, 200, 0.25)
    Q = _s("inv-decay", 1, 200, 0.25)
    r = perturbation_property(F, Q, 1.0)
    return _ok(r["same"] and r["verdict_F"] == PASS and r["witness_reuse"] is not False,
               r["q_margins"], **{k: v for k, v in r.items() if k != "q_margins"})


@register("asymptotic.decomposition", "asymptotic",
          "periodic plus vanishing decomposes and agrees with the direct check")
def _(rng):
    F = _s("periodic-plus-decay", 1, 128, math.pi / 16)
    F0 = _s("sin", 1, 128, math.pi / 16)
    Q = _s("exp-decay", 1, 128, math.pi / 16)
    r = decomposition_check(F, F0, Q, PeriodSpec.joint([TWO_PI], 1.0))
    return _ok(r["verdict"] == PASS and r["consistent"] and r["s_asymptotic"] == PASS,
               r["q_margins"], ladder=True, **{k: v for k, v in r.items() if k != "q_margins"})


@register("asymptotic.uniform-limit", "asymptotic",
          "a uniform limit of S-asymptotically periodic functions is S-asymptotically periodic")
def _(rng):
    F = _s("periodic-plus-decay", 1, 128, math.pi / 16)
    apps = [F.with_values(F.values + 0.1 / k * np.cos(F.grid.points()[..., :1]), label=f"F+{k}")
            for k in (1, 2, 4, 8)]
    r = uniform_limit_check(F, apps, PeriodSpec.joint([TWO_PI], 1.0))
    return _ok(r["verdict"] == PASS and all(v == PASS for v in r["approximant_verdicts"]),
               r["limit_margins"], ladder=True, gaps=r["gaps"])


# --- Stepanov / Weyl -----------------------------------------------------------

@register("stepanov.variants", "stepanov-weyl",
          "sin(ln(1+|t|)) is Stepanov quasi-asymptotically almost periodic in all three variants")
def _(rng):
    F = _s("sin-log", 1, 200, 0.25)
    out = [_expect(stepanov_classify(F, StepanovConfig(variant=v), 1.0), PASS, variant=v) for v in VARIANTS]
    out.append(_expect(stepanov_classify(_s("identity", 1, 200, 0.25), StepanovConfig(), 1.0), FAIL))
    return _merge(out)


@register("stepanov.bochner-distance", "stepanov-weyl",
          "Bochner transform distance of sin equals the L1 quadrature of the shift defect")
def _(rng):
    F = _s("sin", 1, 20, 0.001)
    B = bochner_transform(F)
    d0 = B(0.0).distance(B(TWO_PI))
    d1 = B(1.0).distance(B(1 + math.pi))
    ref = 2 * quad(lambda u: abs(math.sin(1 + u)), 0, 1)[0]
    # 2pi is off the 0.001 grid, so both sides carry a snapping error of order h
    return _ok(d0 <= 1e-3 and abs(d1 - ref) <= 1e-3, [d0, abs(d1 - ref)])


def weyl_threshold(radius: float = 256, sigmas=None):
    sigmas = np.round(np.arange(0.1, 1.25, 0.05), 2) if sigmas is None else sigmas
    return weyl_threshold_experiment(2, 2.0, sigmas, [8, 16, 32, 64, 128], radius)


@register("weyl.threshold", "stepanov-weyl",
          "indicator of the quarter plane with p = 2: Weyl pass iff sigma > (n-1)/p = 0.5")
def _(rng):
    r = weyl_threshold()
    v = r["verdicts"]
    if r["bracket"] is None:
        return _ok(False, [], verdicts={str(k): x for k, x in v.items()})
    lo, hi = r["bracket"]
    ok = v.get(1.0) == PASS and v.get(0.25) == FAIL and 0.3 <= lo and hi <= 0.7
    return _ok(ok, [lo, hi], verdicts={str(k): x for k, x in v.items()})


@register("weyl.indicator-bound", "stepanov-weyl",
          "Weyl defect of an indicator of a compact set is at most 4 l^-sigma (1+|c|) m(K)")
def _(rng):
    out = []
    for n, sigma, c in ((1, 0.5, 1.0), (1, 1.0, -1.0), (2, 0.5, 1j)):
        F = _s("chi-box", n, 64, 0.25, lower=0.0, upper=2.0)
        lad = [4, 8, 16, 32]
        cfg = WeylConfig(ladder=lad, p=1.0, weights=WeightSpec().scale_power(sigma))
        mK = 2.0 ** n
        for tau in (3.0, 7.5):
            d = np.asarray(weyl_distance(F, cfg, [tau] * n, c))
            bound = np.array([4 * l ** -sigma * (1 + abs(c)) * mK for l in lad])
            out.append(_ok(bool(np.all(d <= bound * (1 + 1e-9))), list(bound - d), n=n, tau=tau))
    return _merge(out)


@register("weyl.power-transport", "stepanov-weyl",
          "a Weyl (tau, c)-witness transports to (m tau, c^m) with the subadditivity constant")
def _(rng):
    F = _s("trig", 1, 400, math.pi / 16, freqs=[[0.25]], coefs=[1.0])
    r = power_argument_check(F, WeylConfig(ladder=[8, 16, 32, 64]), [TWO_PI], 1j, 4, 0.1)
    return _ok(bool(r["bound_holds"]) and r["verdict_transported"] == PASS,
               [r["constant"]], **{k: v for k, v in r.items() if k in ("c_m", "verdict_single")})


@register("weyl.recurrence", "stepanov-weyl", "Weyl uniform recurrence: periodic passes, t fails")
def _(rng):
    cfg = WeylConfig(ladder=[8, 16, 32, 64])
    F = _s("trig", 1, 400, math.pi / 16, freqs=[[0.25]], coefs=[1.0])
    a = weyl_ur_check(F, cfg, K=3, c=1j, taus=[[TWO_PI * k] for k in (1, 5, 9)])
    b = weyl_ur_check(_s("identity", 1, 400, 0.25), cfg, K=3)
    return _merge([_expect(a, PASS), _expect(b, FAIL)])


# --- harmonic ----------------------------------------------------------------

AP_ENTRIES = (("sin", {}), ("sin-squared", {}), ("sin-irrational", {}),
              ("trig", {"freqs": [[0.5], [math.e]], "coefs": [1.0, 0.5j]}),
              ("twisted-sine", {"c": 1j}))


@register("harmonic.mean-shift-invariance", "harmonic",
          "mean values over shifted cubes agree within 1e-3 at T = 500 for AP entries")
def _(rng):
    gaps = []
    for name, kw in AP_ENTRIES:
        e = corpus.get(name)
        F = e.sample(1, 1200, 0.25, **kw)
        r = mean_value(F, [500.0])
        gaps.append(max(r.shift_gaps))
    return _ok(max(gaps) <= 1e-3, gaps)


@register("harmonic.mean-decay", "harmonic", "M_T(e^{it}) decays like 1/T (log-log slope -1 +- 0.2)")
def _(rng):
    F = _s("trig", 1, 2100, 0.25, freqs=[[1.0]], coefs=[1.0])
    lad = [50, 100, 200, 400, 800]
    env = decay_envelope(F, lad)
    slope = float(np.polyfit(np.log(lad), np.log(env), 1)[0])
    return _ok(abs(slope + 1) <= 0.2, [slope], envelope=env)


def random_trig(rng, max_terms: int = 5, gap: float = 0.3, span: float = 3.0):
    while True:
        fr = np.sort(rng.uniform(-span, span, int(rng.integers(1, max_terms + 1))))
        if fr.size < 2 or np.min(np.diff(fr)) >= gap:
            break
    co = rng.normal(size=fr.size) + 1j * rng.normal(size=fr.size)
    return fr, co


@register("harmonic.spectrum-recovery", "harmonic",
          "Bohr spectra of 10 random trigonometric polynomials recovered at T = 500")
def _(rng):
    errs, ok = [], True
    for _ in range(10):
        fr, co = random_trig(rng)
        F = _s("trig", 1, 260, 0.25, freqs=[[f] for f in fr], coefs=list(co))
        s = bohr_spectrum_scan(F, T=500)
        if len(s.frequencies) != fr.size:
            ok = False
            errs.append(float("inf"))
            continue
        ok &= bool(np.max(np.abs(np.array(s.frequencies) - fr)) < 1e-3)
        errs.append(float(np.max(np.abs(np.array(s.coefficients) - co))))
    return _ok(ok and max(errs) <= 1e-2, errs)


@register("harmonic.commensurability", "harmonic",
          "integer-ratio spectra are commensurable, {1, sqrt2} is not")
def _(rng):
    out = [_expect(commensurability_test(sp), PASS, spectrum=sp)
           for sp in ([1.0, 2.0, 3.0], [0.5, 1.5], [2.0, 3.0, 7.0], [1 / 3, 1 / 5])]
    out.append(_expect(commensurability_test([1.0, math.sqrt(2)]), FAIL))
    return _merge(out)


@register("harmonic.twisted-commensurability", "harmonic",
          "frequencies 1/(2l+1) admit an anti-period (c = -1)")
def _(rng):
    r = commensurability_test([1 / (2 * l + 1) for l in range(5)], c=-1)
    return _expect(r, PASS, omega=r.witnesses)


def odd_series(radius: float = 9000, step: float = math.pi / 4, **kw):
    return _s("odd-series", 1, radius, step, **kw)


@register("harmonic.semi-odd-series", "harmonic",
          "the odd-denominator exponential series is semi-anti-periodic (c = -1)")
def _(rng):
    return _expect(semi_cj_check(odd_series(), -1.0), PASS)


@register("harmonic.semi-approximation", "harmonic",
          "partial sums of the odd series approximate it with strictly decreasing gaps")
def _(rng):
    F = odd_series()
    parts = [odd_series(cutoff=k) for k in range(1, 7)]
    r = semi_periodic_approximation(F, -1.0, approximants=parts)
    return _ok(r["verdict"] == PASS, r["gaps"])


@register("harmonic.semi-irrational", "harmonic", "sin t + sin(sqrt2 t) is not semi-periodic")
def _(rng):
    return _expect(semi_cj_check(_s("sin-irrational", 1, 9000, 0.25), 1.0), FAIL)


# --- applications --------------------------------------------------------------

def _line(radius=40.0, step=0.01):
    dom = Domain.full(1, radius)
    return Grid.covering(dom, step), dom


@register("applications.box-convolution", "applications",
          "normalized box * sin = sin(t) sin(a)/a within quadrature error")
def _(rng):
    g, dom = _line()
    G = convolve(Kernel.box(1.0), sample(lambda t: np.sin(t[..., 0]), g, dom))
    x = g.axis(0)[G.valid]
    err = float(np.abs(G.values[G.valid, 0] - np.sin(x) * math.sin(1.0)).max())
    return _ok(err <= 0.01 ** 2 / 6, [err])


@register("applications.gaussian-multiplier", "applications",
          "G(t0) e^{i xi t} = e^{-t0 xi^2} e^{i xi t}, and G(t0) 1 = 1")
def _(rng):
    g, dom = _line()
    x = g.axis(0)
    errs = []
    for xi in (0.5, 2.0):
        G = gaussian_apply(0.7, sample(lambda t: np.exp(1j * xi * t[..., 0]), g, dom))
        errs.append(float(np.abs(G.values[G.valid, 0] - math.exp(-0.7 * xi * xi)
                                 * np.exp(1j * xi * x[G.valid])).max()))
    G = gaussian_apply(1.0, sample(lambda t: np.ones(t.shape[:-1]), g, dom))
    errs.append(float(np.abs(G.values[G.valid] - 1).max()))
    return _ok(max(errs) <= 1e-9, errs)


@register("applications.gaussian-semigroup", "applications", "G(t1) G(t2) F = G(t1 + t2) F on the interior")
def _(rng):
    F = _s("sin-log", 1, 200, 0.25)
    a = gaussian_apply(0.5, gaussian_apply(0.3, F))
    b = gaussian_apply(0.8, F)
    m = a.valid & b.valid
    err = float(np.abs(a.values[m] - b.values[m]).max())
    qerr = a.meta["error_bound"] + b.meta["error_bound"]
    return _ok(err <= 2 * max(qerr, 1e-12), [err, qerr])


@register("applications.shift-commutation", "applications",
          "convolution commutes with grid shifts exactly on the common interior")
def _(rng):
    F = _s("sin-log", 2, 20, 0.25)
    h = Kernel.gaussian(0.5, 2, delta=1e-9)
    a = convolve(h, shift_sample(F, [3.0, -1.5]))
    b = shift_sample(convolve(h, F), [3.0, -1.5])
    m = a.valid & b.valid
    err = float(np.abs(a.values[m] - b.values[m]).max())
    return _ok(err == 0.0 and m.any(), [err])


def convolution_cases():
    """(label, F, kind, keyword arguments) for the five pass-case inputs."""
    h1 = Kernel.gaussian(1.0)
    P, _, pspec = _product_setup()
    return [
        ("sin", h1, _s("sin", 1, 128, math.pi / 16), "periodic",
         {"spec": PeriodSpec.joint([TWO_PI], 1.0)}),
        ("twisted-sine", h1, _s("twisted-sine", 1, 128, math.pi / 16, c=1j), "periodic",
         {"spec": PeriodSpec.joint([TWO_PI], 1j)}),
        ("sin-log", h1, _s("sin-log", 1, 200, 0.25), "quasi", {"c": 1.0}),
        ("periodic-plus-decay", h1, _s("periodic-plus-decay", 1, 128, math.pi / 16), "s-asymptotic",
         {"spec": PeriodSpec.joint([TWO_PI], 1.0)}),
        ("product", Kernel.gaussian(0.25, 2), P, "s-asymptotic",
         {"spec": pspec, "D": [lambda x: np.ones(x.shape[:-1], bool), lambda x: x[..., 0] <= TWO_PI],
          "ladder": [2.5, 5, 10]}),
    ]


@register("applications.convolution-invariance", "applications",
          "Gaussian convolution preserves the class of five pass-case inputs")
def _(rng):
    out = []
    for label, h, F, kind, kw in convolution_cases():
        r = convolution_invariance_property(h, F, kind, **kw)
        o = _expect(r, PASS, entry=label, kind=kind)
        if kind == "periodic":
            o = _ok(o.status == PASS and r.margins[0] <= 1e-6, r.margins, entry=label)
        out.append(o)
    return _merge(out)


@register("applications.gaussian-stepanov", "applications",
          "the Gaussian semigroup maps a Stepanov quasi-asymptotic function to one")
def _(rng):
    r = convolution_invariance_property(Kernel.gaussian(0.5), _s("sin-log", 1, 200, 0.25), "stepanov",
                                        stepanov=StepanovConfig())
    return _expect(r, PASS)


def wave_data():
    return WaveProblem(1.5, lambda s: np.sin(s) + np.exp(-s ** 2), lambda s: np.cos(2 * s) / (1 + s ** 2))


def wave_residuals(steps=(0.1, 0.05, 0.025)):
    p = wave_data()
    out = []
    for h in steps:
        g = Grid((-5.0, 0.0), (h, h / 2), (int(round(10 / h)) + 1, int(round(8 / h)) + 1))
        out.append(wave_residual(dalembert_solve(p, g), p.a))
    return out


@register("applications.dalembert-order", "applications",
          "d'Alembert residual drops by a factor in [3.5, 4.5] when h halves")
def _(rng):
    r = wave_residuals()
    ratios = [a / b for a, b in zip(r, r[1:])]
    return _ok(all(3.5 <= q <= 4.5 for q in ratios), ratios, residuals=r)


@register("applications.dalembert-exact", "applications",
          "standing wave sin x cos t and u = t are reproduced")
def _(rng):
    g = Grid((-5.0, 0.0), (0.05, 0.05), (201, 81))
    X, T = np.meshgrid(g.axis(0), g.axis(1), indexing="ij")
    u1 = dalembert_solve(WaveProblem(1.0, np.sin, lambda s: 0 * s), g)
    u2 = dalembert_solve(WaveProblem(1.0, lambda s: 0 * s, lambda s: 1 + 0 * s), g)
    e = [float(np.abs(u1.values[..., 0] - np.sin(X) * np.cos(T)).max()),
         float(np.abs(u2.values[..., 0] - T).max())]
    return _ok(max(e) <= 1e-12, e)


def certificate_problem(f=None, g=None):
    sech = lambda s: 1 / np.cosh(s)
    f = (lambda s: np.sin(s) + sech(s)) if f is None else f
    g = (lambda s: np.cos(s) + sech(s) ** 2) if g is None else g
    return WaveProblem(1.0, f, g, D=lambda x, t: x >= t ** 2 + 1, omega=TWO_PI, c=1.0, k=1)


def certificate_grid(R: float = 64.0, h: float = math.pi / 16) -> Grid:
    return Grid((-R, 0.0), (h, h), (int(round(2 * R / h)) + 1, int(round(R / h)) + 1))


@register("applications.dalembert-certificate", "applications",
          "k = 1, c = 1 data S-asymptotically periodic on [0, inf) certify u on {x >= t^2 + 1}; f = x fails")
def _(rng):
    g = certificate_grid()
    p = certificate_problem()
    a = dalembert_asymptotic_certify(p, dalembert_solve(p, g), tol=1e-6)
    q = certificate_problem(f=lambda s: s, g=lambda s: 0 * s)
    b = dalembert_asymptotic_certify(q, dalembert_solve(q, g), tol=1e-6)
    return _merge([_expect(a, PASS, ladder=True), _expect(b, FAIL)])


def hammerstein_linear(radius: float = 100.0, step: float = 0.25, tol: float = 1e-8):
    dom = Domain.full(1, radius)
    g = Grid.covering(dom, step)
    b = sample(lambda t: np.sin(t[..., 0]) + 0.3 * np.cos(t[..., 0] / 3), g, dom)
    k = Kernel.gaussian(1.0)
    bf = lambda s: np.sin(s[..., :1]) + 0.3 * np.cos(s[..., :1] / 3)
    prob = HammersteinProblem(k, lambda s, y: bf(s) + 0.5 * y, 0.5)
    res = hammerstein_solve(prob, b.with_values(np.zeros_like(b.values)), tol=tol)
    return prob, b, res


@register("applications.hammerstein-oracle", "applications",
          "Picard solution with q = 0.5 matches the dense linear solve within tol/(1-q)")
def _(rng):
    prob, b, res = hammerstein_linear()
    ora = hammerstein_dense_linear(prob.kernel, b, 0.5)
    diff = float(np.abs(ora.values - res.solution.values).max())
    worst = max(res.ratios[1:]) if len(res.ratios) > 1 else 0.0
    return _ok(diff <= res.residual_bound and worst <= 0.55 and res.iterations <= res.apriori_bound,
               [diff, worst], bound=res.residual_bound, iterations=res.iterations)


@register("applications.hammerstein-semi-periodic", "applications",
          "semi-periodic G gives a semi-periodic solution, and the composition is semi-periodic")
def _(rng):
    prob, b, res = hammerstein_linear(radius=200.0)
    r = hammerstein_semiperiodic_property(prob, res, margin=40.0)
    return _merge([_expect(r, PASS), _ok(r.diagnostics["composition_verdict"] == PASS)])


# --- runner ------------------------------------------------------------------

@dataclass
class CheckResult:
    id: str
    suite: str
    status: str
    margins: list
    details: dict
    runtime: float

    def to_dict(self, timings: bool = False) -> dict:
        d = {"id": self.id, "suite": self.suite, "status": self.status,
             "margins": self.margins, "details": self.details}
        if timings:
            d["runtime"] = self.runtime
        return d


@dataclass
class SuiteResult:
    suite: str
    seed: int
    results: list

    @property
    def counts(self) -> dict:
        c = {PASS: 0, FAIL: 0, INDETERMINATE: 0}
        for r in self.results:
            c[r.status] += 1
        return c

    @property
    def status(self) -> str:
        return combine([r.status for r in self.results])

    def to_dict(self, timings: bool = False) -> dict:
        return {"suite": self.suite, "seed": self.seed, "status": self.status, "counts": self.counts,
                "checks": [r.to_dict(timings) for r in self.results]}

    def table(self) -> str:
        w = max((len(r.id) for r in self.results), default=10)
        lines = [f"{'check':<{w}}  {'status':<13}  {'seconds':>8}"]
        for r in self.results:
            lines.append(f"{r.id:<{w}}  {r.status:<13}  {r.runtime:8.2f}")
        c = self.counts
        lines.append(f"{len(self.results)} checks: {c[PASS]} pass, {c[FAIL]} fail, "
                     f"{c[INDETERMINATE]} indeterminate")
        return "\n".join(lines)


def checks_for(suite: str) -> list[Check]:
    if suite == "all":
        return sorted(REGISTRY.values(), key=lambda c: c.id)
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    return sorted((c for c in REGISTRY.values() if c.suite == suite), key=lambda c: c.id)


def run_check(check: Check, seed: int = 0) -> CheckResult:
    # each check gets its own stream so results do not depend on scheduling
    rng = np.random.default_rng([seed, sum(map(ord, check.id))])
    t0 = time.perf_counter()
    try:
        out = check.fn(rng)
    except Exception as exc:  # a crashing check is reported, not raised
        out = CheckOutcome(FAIL, [], {"error": f"{type(exc).__name__}: {exc}"})
    status = out.status
    if out.ladder and status == PASS and not is_monotone_nonincreasing(out.margins) \
            and not out.details.get("parts"):
        status = INDETERMINATE
    return CheckResult(check.id, check.suite, status, out.margins, out.details,
                       time.perf_counter() - t0)


def run_suite(suite: str, seed: int = 0, workers: int = 1) -> SuiteResult:
    checks = checks_for(suite)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda c: run_check(c, seed), checks))
    else:
        results = [run_check(c, seed) for c in checks]
    return SuiteResult(suite, seed, results)
