import math

import numpy as np
import pytest

from aperiodica import corpus
from aperiodica.harmonic import (LadderOutsideWindow, bohr_coefficient, bohr_spectrum_scan,
                                 commensurability_test, decay_envelope, mean_value, periodize,
                                 semi_cj_check, semi_periodic_approximation)
from aperiodica.report import FAIL, PASS


def s(name, radius, step, n=1, **kw):
    return corpus.get(name).sample(n, radius, step, **kw)


def test_bohr_coefficient_of_sine():
    # sin t = (e^{it} - e^{-it}) / 2i: the coefficient at 1 is -i/2
    r = bohr_coefficient(s("sin", 1200, 0.25), [1.0], [500.0])
    assert r.value[0] == pytest.approx(-0.5j, abs=1e-6)


def test_mean_of_sine_squared():
    r = mean_value(s("sin-squared", 1200, 0.25), [500.0])
    assert r.value[0] == pytest.approx(0.5, abs=1e-6) and max(r.shift_gaps) <= 1e-3


def test_mean_ladder_must_fit_window():
    with pytest.raises(LadderOutsideWindow):
        mean_value(s("sin", 100, 0.25), [500.0])


def test_mean_decay_slope():
    F = s("trig", 2100, 0.25, freqs=[[1.0]], coefs=[1.0])
    lad = [50, 100, 200, 400, 800]
    slope = np.polyfit(np.log(lad), np.log(decay_envelope(F, lad)), 1)[0]
    assert abs(slope + 1) <= 0.2


def test_spectrum_of_two_close_frequencies():
    F = s("trig", 260, 0.25, freqs=[[0.7], [1.0]], coefs=[1.0, -0.5j])
    est = bohr_spectrum_scan(F, T=500)
    assert np.allclose(est.frequencies, [0.7, 1.0], atol=1e-3)
    assert np.allclose(est.coefficients, [1.0, -0.5j], atol=1e-2)
    assert est.peak_csv().splitlines()[0].startswith("lambda_1")


def test_commensurability_witnesses():
    r = commensurability_test([1.0, 2.0, 3.0])
    assert r.verdict == PASS and r.witnesses[0]["omega"] == pytest.approx(2 * math.pi)
    assert commensurability_test([1.0, math.sqrt(2)], tol=1e-6).verdict == FAIL
    # lam * omega = pi (mod 2 pi) for lam = 1/(2l+1), l < 5: omega = 315 pi
    t = commensurability_test([1 / (2 * l + 1) for l in range(5)], c=-1)
    assert t.verdict == PASS and t.witnesses[0]["omega"] == pytest.approx(315 * math.pi)


def test_periodize_reproduces_a_periodic_function():
    F = s("sin", 40, math.pi / 16)
    P = periodize(F, 0, 2 * math.pi, 1.0)
    ok = P.valid
    assert np.abs(P.values[ok] - F.values[ok]).max() < 1e-12


def test_semi_periodic_verdicts():
    assert semi_cj_check(s("sin", 400, math.pi / 16), 1.0).verdict == PASS
    assert semi_cj_check(s("sin-irrational", 2000, 0.25), 1.0).verdict == FAIL


def test_semi_approximation_gaps_decrease():
    F = s("odd-series", 2000, math.pi / 4)
    parts = [s("odd-series", 2000, math.pi / 4, cutoff=k) for k in range(1, 5)]
    r = semi_periodic_approximation(F, -1.0, approximants=parts)
    g = r["gaps"]
    assert all(b < a for a, b in zip(g, g[1:]))
