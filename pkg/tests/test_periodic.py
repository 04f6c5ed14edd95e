import math

import numpy as np
import pytest

from aperiodica import corpus
from aperiodica.periodic import (PeriodSpec, bohr_classify, check_periodic, epsilon_period_scan,
                                 inclusion_length, profile_transform, shift_defect,
                                 uniform_recurrence_check)
from aperiodica.report import FAIL, PASS

TWO_PI = 2 * math.pi


def s(name, radius, step, n=1, **kw):
    return corpus.get(name).sample(n, radius, step, **kw)


def test_sine_periods_and_anti_periods():
    F = s("sin", 40, math.pi / 16)
    assert check_periodic(F, PeriodSpec.joint([TWO_PI])).passed
    assert check_periodic(F, PeriodSpec.joint([math.pi], -1)).passed
    r = check_periodic(F, PeriodSpec.joint([math.pi], 1))
    # |sin(t + pi) - sin t| = 2 |sin t|, maximized over the grid nodes
    x = F.grid.axis(0)[F.grid.axis(0) <= 40 - math.pi]
    assert not r.passed and r.max_defect == pytest.approx(2 * np.abs(np.sin(x)).max(), abs=1e-12)


def test_exponential_base_is_twisted_periodic():
    F = s("exp-base", 8, 1 / 16, base=2.0)
    assert check_periodic(F, PeriodSpec.joint([1.0], 2.0), tol=1e-9 * F.sup_norm()).passed


def test_power_of_spec():
    sp = PeriodSpec.joint([1.5], 1j).power(3)
    assert sp.omega == (4.5,) and sp.c[0] == pytest.approx(-1j)
    F = s("twisted-sine", 80, math.pi / 16, c=1j)
    assert all(check_periodic(F, PeriodSpec.joint([TWO_PI], 1j).power(m)).passed for m in (1, 2, 3))


def test_axiswise_spec_shifts_one_axis_at_a_time():
    sp = PeriodSpec.axiswise([1.0, 2.0], [1.0, -1.0])
    (v1, c1), (v2, c2) = sp.shifts()
    assert v1.tolist() == [1.0, 0.0] and v2.tolist() == [0.0, 2.0] and c2 == -1
    assert PeriodSpec.from_dict(sp.to_dict()) == sp


@pytest.mark.parametrize("bad", [dict(mode="joint", omega=(0.0,), c=(1,)),
                                 dict(mode="joint", omega=(1.0,), c=(0,)),
                                 dict(mode="axiswise", omega=(1.0, 2.0), c=(1, 1, 1)),
                                 dict(mode="diagonal", omega=(1.0,), c=(1,))])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        PeriodSpec(**bad)


def test_dimension_mismatch_is_rejected():
    with pytest.raises(ValueError):
        check_periodic(s("sin", 10, 0.5), PeriodSpec.joint([1.0, 1.0]))


def test_profile_of_twisted_sine_is_periodic():
    F = s("twisted-sine", 40, math.pi / 16, c=1j)
    P = profile_transform(F, PeriodSpec.joint([TWO_PI], 1j))
    assert check_periodic(P, PeriodSpec.joint([TWO_PI]), tol=1e-9).passed


def test_eps_periods_of_sine_match_closed_form():
    # sup_t |sin(t + tau) - sin t| = 2 |sin(tau / 2)|
    eps = 0.1
    F = s("sin", 40, math.pi / 64)
    r = epsilon_period_scan(F, eps)
    found = {round(float(t), 9) for t in r.periods[:, 0]}
    h = F.grid.step[0]
    taus = h * np.arange(-int(20 / h), int(20 / h) + 1)
    exact = 2 * np.abs(np.sin(taus / 2))
    clear_in = {round(float(t), 9) for t, d in zip(taus, exact) if d <= eps - 1e-3}
    clear_out = {round(float(t), 9) for t, d in zip(taus, exact) if d >= eps + 1e-3}
    assert clear_in <= found and not (found & clear_out)
    assert r.found and r.inclusion_length < 2 * TWO_PI


def test_inclusion_length_is_longest_gap_in_one_dimension():
    periods = np.array([[0.0], [1.0], [4.0]])
    probes = np.linspace(0, 4, 41)[:, None]
    assert inclusion_length(periods, probes) == pytest.approx(3.0)
    assert inclusion_length(np.zeros((0, 1)), probes) == math.inf


def test_shift_defect_sup():
    F = s("sin", 20, 0.25)
    assert shift_defect(F, [0.0]).sup() == 0.0


def test_uniform_recurrence_and_bohr():
    assert uniform_recurrence_check(s("sin", 200, 0.25)).verdict == PASS
    assert uniform_recurrence_check(s("identity", 200, 0.25)).verdict == FAIL
    assert bohr_classify(s("sin-irrational", 400, 0.25), [0.5, 0.25]).verdict == PASS
    assert bohr_classify(s("identity", 100, 0.25), [0.5]).verdict == FAIL
    with pytest.raises(ValueError):
        uniform_recurrence_check(s("sin", 20, 0.25), K=0)
