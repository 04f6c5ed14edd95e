import pytest

from aperiodica.report import FAIL, INDETERMINATE, PASS
from aperiodica.suite import (REGISTRY, SUITES, Check, CheckOutcome, UnknownSuite, _merge, checks_for,
                              run_check, run_suite)


def test_registry_size_and_coverage():
    assert len(REGISTRY) >= 30
    assert {c.suite for c in REGISTRY.values()} == set(SUITES)
    assert all(c.description for c in REGISTRY.values())


def test_harmonic_suite_contents():
    ids = {c.id for c in checks_for("harmonic")}
    assert {"harmonic.commensurability", "harmonic.semi-approximation"} <= ids


def test_all_is_sorted_union():
    ids = [c.id for c in checks_for("all")]
    assert ids == sorted(REGISTRY)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        checks_for("spaces")


def test_crashing_check_is_reported_as_fail():
    def boom(rng):
        raise RuntimeError("kaput")
    r = run_check(Check("x.boom", "harmonic", "raises", boom))
    assert r.status == FAIL and "kaput" in r.details["error"]


def test_runner_downgrades_non_monotone_pass():
    chk = Check("x.ladder", "harmonic", "forged", lambda rng: CheckOutcome(PASS, [1.0, 0.0, 1.0], {}, True))
    assert run_check(chk).status == INDETERMINATE


def test_merge_guard():
    good = CheckOutcome(PASS, [1.0, 0.5], {}, True)
    bad = CheckOutcome(PASS, [0.1, 0.9], {}, True)
    assert _merge([good, good]).status == PASS
    assert _merge([good, bad]).status == INDETERMINATE
    assert _merge([good, CheckOutcome(FAIL)]).status == FAIL


def test_periodicity_suite_passes_in_registry_order():
    r = run_suite("periodicity", seed=3, workers=2)
    assert r.status == PASS and [x.id for x in r.results] == [c.id for c in checks_for("periodicity")]
    assert "runtime" not in r.to_dict()["checks"][0] and "runtime" in r.to_dict(True)["checks"][0]
    assert r.table().splitlines()[-1].startswith(f"{len(r.results)} checks:")
