import json
import math

import pytest

from aperiodica.report import (EXIT_CODES, FAIL, INDETERMINATE, PASS, ClassificationReport, combine,
                               dumps, is_monotone_nonincreasing, ladder_csv, ladder_verdict, rows_csv)


def test_verdict_precedence():
    assert combine([PASS, INDETERMINATE, FAIL]) == FAIL
    assert combine([PASS, INDETERMINATE]) == INDETERMINATE
    assert combine([PASS, PASS]) == PASS
    assert EXIT_CODES == {PASS: 0, FAIL: 1, INDETERMINATE: 2}


def test_ladder_rules():
    assert ladder_verdict([1, 0.1, 1e-9], 1e-6) == PASS
    assert ladder_verdict([1, 0.9, 0.8], 1e-6) == FAIL
    assert ladder_verdict([1, 0, 1], 1e-6) == INDETERMINATE
    assert ladder_verdict([], 1e-6) == INDETERMINATE
    assert ladder_verdict([1, math.nan], 1e-6) == INDETERMINATE
    assert is_monotone_nonincreasing([1, 1 + 1e-12, 0.5])


def test_empty_report_is_valid_json():
    d = json.loads(dumps(ClassificationReport("x", PASS)))
    assert d["margins"] == [] and d["witnesses"] == [] and d["schema"] == 1


def test_round_trip_with_non_finite_values():
    r = ClassificationReport("q", FAIL, [math.inf, 1.0], [10.0, 20.0], 0.1, [{"tau": [1.0]}], {"c": 1j})
    back = ClassificationReport.from_dict(json.loads(dumps(r)))
    assert back.margins == [math.inf, 1.0] and back.verdict == FAIL
    assert json.loads(dumps(r))["diagnostics"]["c"] == {"re": 0.0, "im": 1.0}


def test_unknown_verdict_rejected():
    with pytest.raises(ValueError):
        ClassificationReport("x", "maybe")


def test_csv_layouts():
    assert ladder_csv([10, 20], [0.5, 0.25], key="l").splitlines() == ["l,margin", "10.0,0.5", "20.0,0.25"]
    assert rows_csv(["a", "b"], [[1.5, "pass"]]).splitlines() == ["a,b", "1.5,pass"]


def test_dumps_is_key_order_independent():
    assert dumps({"b": 1, "a": [1.0]}) == dumps({"a": [1.0], "b": 1})
