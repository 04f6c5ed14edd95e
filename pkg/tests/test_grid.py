import math

import numpy as np
import pytest

from aperiodica.grid import (Domain, DomainSubset, EmptyOverlapError, Grid, GridMismatchError,
                             SamplingError, crop, default_tolerance, lipschitz_estimate, overlap_slices,
                             reflect, sample, shift_sample, snapping_bound, to_csv)


def sin_on(radius, step, n=1):
    dom = Domain.full(n, radius)
    return sample(lambda t: np.sin(t.sum(-1)), Grid.covering(dom, step), dom)


def test_covering_includes_endpoints():
    g = Grid.covering(Domain.full(1, 2.0), 0.5)
    assert g.count == (9,) and g.origin == (-2.0,)
    assert Grid.covering(Domain.half(2, 3.0), 1.0).count == (4, 4)


def test_domain_bounds_and_reflection():
    d = Domain(("full", "from", "to"), (0.0, 1.0, -1.0), 5.0)
    assert d.bounds() == [(-5.0, 5.0), (1.0, 6.0), (-6.0, -1.0)]
    assert d.reflected().bounds() == [(-5.0, 5.0), (-6.0, -1.0), (1.0, 6.0)]
    assert Domain.from_dict(d.to_dict()) == d


def test_grid_dict_round_trip():
    g = Grid((0.0, -1.0), (0.5, 0.25), (3, 4))
    assert Grid.from_dict(g.to_dict()) == g


@pytest.mark.parametrize("bad", [dict(kinds=(), anchors=(), radius=1.0),
                                 dict(kinds=("full",), anchors=(0.0,), radius=0.0),
                                 dict(kinds=("sideways",), anchors=(0.0,), radius=1.0)])
def test_domain_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        Domain(**bad)


def test_sampling_rejects_non_finite_values():
    dom = Domain.full(1, 1.0)
    with pytest.raises(SamplingError, match="non-finite"), np.errstate(divide="ignore"):
        sample(lambda t: 1 / t[..., 0], Grid.covering(dom, 0.5), dom)


def test_sampling_rejects_grid_outside_domain():
    with pytest.raises(GridMismatchError):
        sample(np.sin, Grid((-3.0,), (1.0,), (7,)), Domain.full(1, 1.0))


def test_shift_is_exact_on_grid_multiples():
    F = sin_on(10, 0.125)
    S = shift_sample(F, [1.0])
    x = F.grid.axis(0)
    assert S.meta["offset"] == (8,) and (~S.valid).sum() == 8
    assert np.abs(S.values[S.valid, 0] - np.sin(x[S.valid] + 1.0)).max() < 1e-15


def test_shift_beyond_window_has_no_overlap():
    F = sin_on(1, 0.5)
    assert overlap_slices((5,), (5,)) is None
    with pytest.raises(EmptyOverlapError):
        shift_sample(F, [2.5])


def test_snapping_bound_vanishes_on_grid_multiples():
    F = sin_on(20, math.pi / 16)
    assert snapping_bound(F, [2 * math.pi]) == pytest.approx(0.0, abs=1e-12)
    # 2 pi is 25.13 steps of 0.25: offset 0.0332, Lipschitz constant close to 1
    G = sin_on(20, 0.25)
    assert snapping_bound(G, [2 * math.pi]) == pytest.approx(2 * abs(6.25 - 2 * math.pi), rel=1e-2)


def test_reflect_twice_is_identity():
    F = sin_on(3, 0.5, n=2)
    R = reflect(reflect(F))
    assert R.grid == F.grid and np.array_equal(R.values, F.values)
    assert reflect(F).values[0, 0, 0] == F.values[-1, -1, 0]


def test_crop_keeps_inner_box():
    F = sin_on(4, 0.5)
    C = crop(F, [-1.0], [2.0])
    assert C.grid.count == (7,) and C.grid.origin == (-1.0,)
    with pytest.raises(EmptyOverlapError):
        crop(F, [10.0], [11.0])


def test_lipschitz_and_tolerance_for_sine():
    F = sin_on(10, 0.01)
    assert lipschitz_estimate(F)[0] == pytest.approx(1.0, abs=1e-4)
    assert default_tolerance(F) == pytest.approx(0.1, rel=1e-3)


def test_domain_subset_operations():
    g = Grid.covering(Domain.full(1, 4.0), 1.0)
    pos = DomainSubset.from_predicate(g, lambda x: x[..., 0] >= 0, "pos")
    assert pos.points().ravel().tolist() == [0, 1, 2, 3, 4]
    assert (pos & pos.tail(2.5)).points().ravel().tolist() == [3, 4]
    assert pos.reaches(4.0) and not pos.tail(5.0).reaches(4.0)
    with pytest.raises(GridMismatchError):
        DomainSubset(g, np.ones(3, bool))


def test_csv_lists_coordinates_and_parts():
    F = sin_on(1, 1.0)
    lines = to_csv(F).splitlines()
    assert lines[0] == "t1,re0,im0,valid" and len(lines) == 4
