import math

import numpy as np
import pytest

from aperiodica import corpus
from aperiodica.asymptotic import (PreconditionError, coarse_stride, decomposition_check,
                                   default_ladder, quasi_asymptotic_check, s_asymptotic_check,
                                   tail_margins, telescope_combine, uniform_limit_check, vanishing_check,
                                   vanishing_margins)
from aperiodica.grid import DomainSubset
from aperiodica.periodic import PeriodSpec
from aperiodica.report import FAIL, INDETERMINATE, PASS
from aperiodica.suite import _product_setup

TWO_PI = 2 * math.pi


def s(name, radius, step, n=1, **kw):
    return corpus.get(name).sample(n, radius, step, **kw)


def test_vanishing_margins_of_exponential_decay():
    # sup_{|t| >= T} exp(-|t|) = exp(-T) when T is a grid node
    Q = s("exp-decay", 40, 0.25)
    assert np.allclose(vanishing_margins(Q, [1, 2, 4, 8]), np.exp(-np.array([1, 2, 4, 8])), rtol=1e-12)


def test_tail_margins_of_periodic_plus_decay():
    # on t >= 0: |e^{-(t + 2 pi)} - e^{-t}| = e^{-t} (1 - e^{-2 pi}), largest at the first node >= T
    F = s("periodic-plus-decay", 64, math.pi / 16)
    x = F.grid.axis(0)
    ladder = [math.pi, TWO_PI, 4 * math.pi]
    m = tail_margins(F, [TWO_PI], 1.0, ladder, x >= 0)
    first = np.array([x[x >= T].min() for T in ladder])
    assert np.allclose(m, np.exp(-first) * (1 - math.exp(-TWO_PI)), rtol=1e-9)


def test_tail_rung_without_points_is_nan():
    F = s("sin", 10, 0.5)
    assert np.isnan(tail_margins(F, [1.0], 1.0, [100.0])[0])


def test_s_asymptotic_verdicts():
    spec = PeriodSpec.joint([TWO_PI])
    assert s_asymptotic_check(s("periodic-plus-decay", 128, math.pi / 16), spec).verdict == PASS
    assert s_asymptotic_check(s("identity", 128, math.pi / 16), spec).verdict == FAIL


def test_vanishing_verdicts():
    assert vanishing_check(s("inv-decay", 200, 0.25), ladder=[10, 20, 40, 80], tol=0.02).verdict == PASS
    assert vanishing_check(s("sin", 200, 0.25), ladder=[10, 20, 40, 80], tol=0.02).verdict == FAIL
    with pytest.raises(ValueError):
        vanishing_check(s("sin", 20, 0.25), ladder=[])


def test_default_ladder_stays_inside_window():
    lad = default_ladder(s("sin", 200, 0.25))
    assert all(a < b for a, b in zip(lad, lad[1:])) and lad[-1] < 200


def test_sin_log_quasi_asymptotic_one_dimension():
    F = s("sin-log", 200, 0.25)
    a = quasi_asymptotic_check(F, 1.0)
    assert a.verdict == PASS and a.witnesses[0]["l"] is not None
    assert quasi_asymptotic_check(F, -1.0).verdict == FAIL


def test_quasi_needs_probe_points():
    F = s("sin", 50, 0.25)
    empty = DomainSubset(F.grid, np.zeros(F.grid.count, bool))
    with pytest.raises(PreconditionError):
        quasi_asymptotic_check(F, 1.0, I_prime=empty)


def test_telescoping_stays_under_the_bound():
    P, Ds, spec = _product_setup()
    t = telescope_combine(P, spec, Ds, ladder=[2.5, 5, 10])
    assert t.verdict == PASS and t.diagnostics["max_excess_over_bound"] <= 1e-9


def test_decomposition_and_uniform_limit():
    F = s("periodic-plus-decay", 128, math.pi / 16)
    r = decomposition_check(F, s("sin", 128, math.pi / 16), s("exp-decay", 128, math.pi / 16),
                            PeriodSpec.joint([TWO_PI]))
    assert r["verdict"] == PASS and r["consistent"]
    apps = [F.with_values(F.values + 0.1 / k) for k in (1, 2, 4)]
    u = uniform_limit_check(F, apps, PeriodSpec.joint([TWO_PI]))
    assert u["verdict"] == PASS and u["gaps"] == pytest.approx([0.1, 0.05, 0.025])


def test_coarse_stride():
    assert coarse_stride(s("sin", 100, 0.25)) == 4
    # 1601^2 points: ceil(sqrt(2563201 / 20000)) = 12
    assert coarse_stride(s("sin", 200, 0.25, n=2)) == 12


def test_non_monotone_ladder_cannot_pass():
    from aperiodica.report import ladder_verdict
    assert ladder_verdict([0.5, 0.0, 0.5, 0.0], 1e-3) == INDETERMINATE
