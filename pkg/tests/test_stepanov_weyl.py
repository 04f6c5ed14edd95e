import math

import numpy as np
import pytest

from aperiodica import corpus
from aperiodica.report import FAIL, INDETERMINATE, PASS
from aperiodica.stepanov_weyl import (Cell, StepanovConfig, WeightSpec, WeylConfig, bochner_transform,
                                      limsup_estimate, loglog_slope, stepanov_classify, stepanov_field,
                                      weyl_distance, weyl_verdict)


def s(name, radius, step, n=1, **kw):
    return corpus.get(name).sample(n, radius, step, **kw)


def test_stepanov_field_of_sine_anti_shift():
    # sup_t int_t^{t+1} |sin(u + pi) - sin u| du = 4 sin(1/2)
    F = s("sin", 20, 0.001)
    fld = stepanov_field(F, StepanovConfig(), [math.pi], 1.0)
    assert np.nanmax(fld) == pytest.approx(4 * math.sin(0.5), abs=2e-3)


def test_weyl_mean_of_sine_defect_tends_to_four_over_pi():
    # (1/l) int |2 sin u| du -> 4 / pi as l grows
    F = s("sin", 400, math.pi / 16)
    d = weyl_distance(F, WeylConfig(ladder=[16, 32, 64, 128]), [math.pi], 1.0)
    assert abs(d[-1] - 4 / math.pi) <= 4 / 128 + 1e-3
    assert abs(d[-1] - 4 / math.pi) < abs(d[0] - 4 / math.pi) + 1e-12


def test_cell_geometry():
    c = Cell.unit([0.25, 0.5])
    assert c.measure([0.25, 0.5]) == pytest.approx(1.0)
    assert c.scaled(4).measure([0.25, 0.5]) == pytest.approx(16.0)


def test_bochner_distance_zero_for_period():
    B = bochner_transform(s("sin", 20, math.pi / 64))
    assert B(0.0).distance(B(2 * math.pi)) == pytest.approx(0.0, abs=1e-12)


def test_trend_labels():
    lad = [8, 16, 32, 64]
    assert limsup_estimate(lad, [1, 0.5, 0.25, 0.125]) == (0.0, "decaying")
    assert limsup_estimate(lad, [1, 1, 1, 1]) == (1.0, "flat")
    assert limsup_estimate(lad, [1, 2, 4, 8])[1] == "growing"
    assert loglog_slope(lad, [8, 4, 2, 1]) == pytest.approx(-1.0)


def test_weyl_verdict_modes():
    lad = [8, 16, 32, 64]
    assert weyl_verdict(lad, [0.01, 0.02, 0.04, 0.08], 0.1, "limsup") == INDETERMINATE
    assert weyl_verdict(lad, [0.5, 1, 2, 4], 0.1, "limsup") == FAIL
    assert weyl_verdict(lad, [0.5, 0.25, 0.12, 0.06], 0.1, "limsup") == PASS
    assert weyl_verdict(lad, [0.5, 0.05, 0.5, 0.5], 0.1, "equi") == PASS


def test_weight_spec_scale_power():
    w = WeightSpec.scale_power(0.5)
    assert w.weyl_weight(16.0, np.zeros((1, 1)), 1.0) == pytest.approx(0.25)


@pytest.mark.parametrize("bad", [dict(variant="outer")])
def test_stepanov_config_validation(bad):
    with pytest.raises(ValueError):
        StepanovConfig(**bad)


@pytest.mark.parametrize("bad", [dict(ladder=[8]), dict(ladder=[8, 4]), dict(ladder=[8, 16], mode="max"),
                                 dict(ladder=[8, 16], placement="outer")])
def test_weyl_config_validation(bad):
    with pytest.raises(ValueError):
        WeylConfig(**bad)


def test_stepanov_classify_identity_fails():
    assert stepanov_classify(s("identity", 200, 0.25), StepanovConfig()).verdict == FAIL
