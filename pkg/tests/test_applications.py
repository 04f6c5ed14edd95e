import math

import numpy as np
import pytest
from scipy.special import erfcinv

from aperiodica.applications import (ConvergenceError, HammersteinProblem, Kernel, WaveProblem,
                                     antiderivative, convolve, dalembert_solve, gaussian_apply,
                                     hammerstein_dense_linear, hammerstein_solve, interior)
from aperiodica.asymptotic import PreconditionError
from aperiodica.grid import Domain, EmptyOverlapError, Grid, sample
from aperiodica.suite import hammerstein_linear, wave_residuals


def line(radius=40.0, step=0.01, fn=np.sin):
    dom = Domain.full(1, radius)
    return sample(lambda t: fn(t[..., 0]), Grid.covering(dom, step), dom)


def test_gaussian_kernel_truncation_radius():
    k = Kernel.gaussian(0.5, 2, delta=1e-9)
    assert k.radius == pytest.approx(2 * math.sqrt(0.5) * erfcinv(1e-9 / 2))
    assert k.quadrature_l1(0.01) == pytest.approx(1.0, abs=1e-8)


def test_box_kernel_smooths_sine():
    # (1/2a) int_{-a}^{a} sin(t - y) dy = sin t sin(a) / a
    G = convolve(Kernel.box(1.0), line())
    x = G.grid.axis(0)[G.valid]
    assert np.abs(G.values[G.valid, 0] - np.sin(x) * math.sin(1.0)).max() <= 0.01 ** 2 / 6


def test_heat_multiplier():
    G = gaussian_apply(0.7, line(fn=lambda t: np.exp(2j * t)))
    x = G.grid.axis(0)[G.valid]
    assert np.abs(G.values[G.valid, 0] - math.exp(-0.7 * 4) * np.exp(2j * x)).max() <= 1e-9


def test_zero_kernel_and_empty_interior():
    G = convolve(Kernel.zero(1, 1.0), line(radius=5))
    assert np.all(G.values[G.valid] == 0)
    with pytest.raises(EmptyOverlapError):
        convolve(Kernel.box(10.0), line(radius=2, step=0.5))


def test_interior_crop_is_all_valid():
    G = interior(gaussian_apply(1.0, line(radius=20, step=0.1)))
    assert G.valid.all()


def test_scaled_kernel_mass():
    k = Kernel.gaussian(1.0).scaled(-0.5)
    assert k.l1_norm == 0.5 and k.integral == -0.5


def test_antiderivative_of_cosine():
    s = np.linspace(-7, 9, 33)
    assert np.abs(antiderivative(np.cos, s) - np.sin(s)).max() < 1e-12


def test_standing_wave_is_reproduced():
    g = Grid((-5.0, 0.0), (0.05, 0.05), (201, 81))
    u = dalembert_solve(WaveProblem(1.0, np.sin, lambda s: 0 * s), g)
    X, T = np.meshgrid(g.axis(0), g.axis(1), indexing="ij")
    assert np.abs(u.values[..., 0] - np.sin(X) * np.cos(T)).max() < 1e-12


def test_residual_is_second_order():
    r = wave_residuals()
    assert all(3.5 <= a / b <= 4.5 for a, b in zip(r, r[1:]))


def test_wave_problem_validation():
    with pytest.raises(ValueError):
        WaveProblem(0.0, np.sin, np.cos)
    with pytest.raises(ValueError):
        WaveProblem(1.0, np.sin, np.cos, omega=1.0, c=-1.0, k=2)
    assert WaveProblem(2.0, np.sin, np.cos, omega=1.0, c=-1.0, k=3).omegas == (2.0, 0.5)


def test_hammerstein_matches_dense_solve():
    prob, b, res = hammerstein_linear()
    ora = hammerstein_dense_linear(prob.kernel, b, 0.5)
    assert np.abs(ora.values - res.solution.values).max() <= res.residual_bound == pytest.approx(2e-8)
    assert res.iterations <= res.apriori_bound and max(res.ratios[1:]) <= 0.55


def test_hammerstein_rejects_non_contraction_and_reports_stalls():
    k = Kernel.gaussian(1.0)
    y0 = line(radius=20, step=0.25, fn=lambda t: 0 * t)
    with pytest.raises(PreconditionError):
        hammerstein_solve(HammersteinProblem(k, lambda s, y: y, 1.0), y0)
    slow = HammersteinProblem(k, lambda s, y: np.sin(s[..., :1]) + 0.9 * y, 0.9)
    with pytest.raises(ConvergenceError) as e:
        hammerstein_solve(slow, y0, max_iter=3)
    assert len(e.value.ratios) == 2
