import json
import math

import numpy as np
from hypothesis import given, strategies as st

from aperiodica.applications import HammersteinProblem, Kernel, convolve, hammerstein_solve
from aperiodica.grid import Domain, Grid, box_domain, midpoint_grid, sample, shift_sample
from aperiodica.report import INDETERMINATE, PASS, ClassificationReport, dumps, ladder_verdict
from aperiodica.suite import Check, CheckOutcome, run_check
from aperiodica.varlex import ExponentField, luxemburg_norm

finite = st.floats(-5, 5, allow_nan=False)
G01, D01 = midpoint_grid([0.0], [1.0], 64), box_domain([0.0], [1.0])
LINE = Domain.full(1, 20.0)
LGRID = Grid.covering(LINE, 0.25)


@given(st.lists(st.floats(0.0, 10.0), min_size=64, max_size=64),
       st.lists(st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]), min_size=64, max_size=64),
       st.floats(0.01, 100.0))
def test_luxemburg_homogeneity(vals, ps, alpha):
    f = sample(lambda t: np.zeros(t.shape[:-1]), G01, D01).with_values(np.array(vals))
    p = ExponentField(G01, np.array(ps))
    a = luxemburg_norm(f.with_values(alpha * np.array(vals)), p)
    assert math.isclose(a, alpha * luxemburg_norm(f, p), rel_tol=1e-8, abs_tol=1e-300)


@given(st.lists(st.floats(0.0, 10.0), min_size=64, max_size=64), st.floats(1.0, 4.0))
def test_luxemburg_monotone_in_exponent_free_majorant(vals, p0):
    v = np.array(vals)
    f = sample(lambda t: np.zeros(t.shape[:-1]), G01, D01).with_values(v)
    big = f.with_values(v + 1.0)
    p = ExponentField.constant(G01, p0)
    assert luxemburg_norm(f, p) <= luxemburg_norm(big, p) * (1 + 1e-9)


@given(finite, finite, st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_convolution_is_linear(a, b, w1, w2):
    k = Kernel.gaussian(0.5)
    F = sample(lambda t: np.sin(w1 * t[..., 0]), LGRID, LINE)
    G = sample(lambda t: np.cos(w2 * t[..., 0]), LGRID, LINE)
    lhs = convolve(k, F.with_values(a * F.values + b * G.values))
    rhs = a * convolve(k, F).values + b * convolve(k, G).values
    m = lhs.valid
    assert np.abs(lhs.values[m] - rhs[m]).max() <= 1e-12 * (1 + abs(a) + abs(b))


@given(st.integers(-8, 8), st.floats(0.1, 3.0))
def test_convolution_commutes_with_grid_shifts(k, w):
    h = Kernel.box(0.75)
    F = sample(lambda t: np.sin(w * t[..., 0]) + 0.1 * t[..., 0], LGRID, LINE)
    tau = [k * 0.25]
    a = convolve(h, shift_sample(F, tau))
    b = shift_sample(convolve(h, F), tau)
    m = a.valid & b.valid
    assert np.abs(a.values[m] - b.values[m]).max() <= 1e-12


@given(st.floats(0.1, 0.8), st.sampled_from(["identity", "sin", "tanh"]))
def test_contraction_ratio_below_q(alpha, phi):
    fn = {"identity": lambda y: y, "sin": np.sin, "tanh": np.tanh}[phi]
    prob = HammersteinProblem(Kernel.gaussian(1.0), lambda s, y: np.cos(s[..., :1]) + alpha * fn(y), alpha)
    y0 = sample(lambda t: np.zeros(t.shape[:-1]), LGRID, LINE)
    res = hammerstein_solve(prob, y0, tol=1e-9)
    assert max(res.ratios, default=0.0) <= res.q + 0.05
    assert res.iterations <= res.apriori_bound


ladders = st.lists(st.floats(0.0, 10.0), min_size=2, max_size=8)


@given(ladders, st.sampled_from(["pass", "fail", "indeterminate"]),
       st.dictionaries(st.text(min_size=1, max_size=5), st.floats(allow_nan=False), max_size=3))
def test_report_round_trip(margins, verdict, diag):
    r = ClassificationReport("x", verdict, margins, list(range(len(margins))), 0.1, [], diag)
    assert ClassificationReport.from_dict(json.loads(dumps(r))) == r


@given(ladders)
def test_non_monotone_ladders_never_pass(margins):
    nonmono = any(b > a * (1 + 1e-9) + 1e-300 for a, b in zip(margins, margins[1:]))
    if nonmono:
        assert ladder_verdict(margins, 1e9) == INDETERMINATE
        chk = Check("x.forged", "harmonic", "forged", lambda rng: CheckOutcome(PASS, margins, {}, True))
        assert run_check(chk).status != PASS
