import math

import numpy as np
import pytest

from aperiodica.grid import GridMismatchError, box_domain, midpoint_grid, sample
from aperiodica.varlex import (ExponentField, ExponentRelationError, NotInSpaceError, apply_matrix,
                               classical_norm, embedding_check, holder_check, luxemburg_norm,
                               luxemburg_of_magnitudes, modular)


def unit(cells=1000):
    return midpoint_grid([0.0], [1.0], cells), box_domain([0.0], [1.0])


def step_fn(g, dom, left, right):
    return sample(lambda t: np.where(t[..., 0] < 0.5, left, right), g, dom)


def test_two_piece_exponent_norm_is_one():
    g, dom = unit()
    p = ExponentField.from_function(g, lambda t: np.where(t[..., 0] < 0.5, 1.0, 2.0))
    assert luxemburg_norm(step_fn(g, dom, 1.0, 1.0), p) == pytest.approx(1.0, abs=1e-8)


def test_two_piece_exponent_quadratic_oracle():
    # 1.5 / lam + 0.5 / lam^2 = 1  =>  lam = (1.5 + sqrt(4.25)) / 2
    g, dom = unit()
    p = ExponentField.from_function(g, lambda t: np.where(t[..., 0] < 0.5, 1.0, 2.0))
    assert luxemburg_norm(step_fn(g, dom, 3.0, 1.0), p) == pytest.approx(1.7807764064044151, rel=1e-9)


def test_infinite_exponent_gives_sup_floor():
    # a = (2, 1) with p = (inf, 1): rho(f / 2) = 0.25 <= 1, so the norm is the sup 2
    g, dom = unit(10)
    p = ExponentField.from_function(g, lambda t: np.where(t[..., 0] < 0.5, np.inf, 1.0))
    assert luxemburg_norm(step_fn(g, dom, 2.0, 1.0), p) == pytest.approx(2.0, rel=1e-9)


@pytest.mark.parametrize("p0", [1.0, 2.0, 4.0, math.inf])
def test_constant_exponent_matches_classical_norm(p0):
    g, dom = unit(400)
    f = sample(lambda t: 1 + np.sin(7 * t[..., 0]) ** 2, g, dom)
    assert luxemburg_norm(f, ExponentField.constant(g, p0)) == pytest.approx(classical_norm(f, p0), rel=1e-9)


def test_modular_values():
    g, dom = unit(10)
    two = ExponentField.constant(g, 2.0)
    assert modular(step_fn(g, dom, 2.0, 2.0), two).value == pytest.approx(4.0)
    inf = ExponentField.constant(g, math.inf)
    assert modular(step_fn(g, dom, 2.0, 2.0), inf).infinite
    assert modular(step_fn(g, dom, 0.5, 0.5), inf).value == 0.0


def test_zero_function_has_zero_norm():
    g, dom = unit(10)
    assert luxemburg_norm(step_fn(g, dom, 0.0, 0.0), ExponentField.constant(g, 3.0)) == 0.0


def test_extreme_magnitudes_scale_exactly():
    assert luxemburg_of_magnitudes(np.array([1e14]), np.array([np.inf]), 1.0) == 1e14
    assert luxemburg_of_magnitudes(np.array([1e14]), np.array([1.0]), 1.0) == pytest.approx(1e14, rel=1e-9)
    assert luxemburg_of_magnitudes(np.array([1e-200]), np.array([2.0]), 1.0) == pytest.approx(1e-200, rel=1e-9)
    with pytest.raises(NotInSpaceError):
        luxemburg_of_magnitudes(np.array([np.inf]), np.array([1.0]), 1.0)


def test_exponent_field_validation():
    g, _ = unit(10)
    with pytest.raises(ValueError):
        ExponentField.constant(g, 0.5)
    g2, dom2 = unit(20)
    with pytest.raises(GridMismatchError):
        luxemburg_norm(sample(lambda t: t[..., 0], g2, dom2), ExponentField.constant(g, 2.0))


def test_holder_and_embedding():
    g, dom = unit(500)
    u = sample(lambda t: 1 + t[..., 0], g, dom)
    v = sample(lambda t: np.cos(3 * t[..., 0]), g, dom)
    two, one = ExponentField.constant(g, 2.0), ExponentField.constant(g, 1.0)
    assert holder_check(u, v, two, one, two).holds
    with pytest.raises(ExponentRelationError):
        holder_check(u, v, two, two, two)
    r = embedding_check(u, two, one)
    assert r.holds and r.details["measure"] == pytest.approx(1.0)
    with pytest.raises(ExponentRelationError):
        embedding_check(u, one, two)


def test_apply_matrix_acts_pointwise():
    g, dom = unit(4)
    f = sample(lambda t: np.stack([t[..., 0], 1 + 0 * t[..., 0]], -1), g, dom)
    A = apply_matrix(f, [[0, 1], [1, 0]])
    assert np.allclose(A.values[..., 0], 1) and np.allclose(A.values[..., 1], g.axis(0))
