"""Classification reports, the ladder verdict rule and deterministic serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Sequence

import numpy as np

SCHEMA_VERSION = 1

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"
EXIT_CODES = {PASS: 0, FAIL: 1, INDETERMINATE: 2}


def is_monotone_nonincreasing(margins: Sequence[float], rel: float = 1e-9) -> bool:
    m = [float(x) for x in margins]
    for a, b in zip(m, m[1:]):
        if math.isnan(a) or math.isnan(b):
            return False
        if b > a + rel * abs(a) + 1e-300 and not (math.isinf(a) and math.isinf(b)):
            return False
    return True


def ladder_verdict(margins: Sequence[float], tol: float) -> str:
    """Pass needs monotone decay with the last rung below ``tol``.

    Non-monotone ladders are indeterminate: a finite window cannot tell a
    slow limit from an oscillation.
    """
    m = [float(x) for x in margins]
    if not m or any(math.isnan(x) for x in m):
        return INDETERMINATE
    if not is_monotone_nonincreasing(m):
        return INDETERMINATE
    return PASS if m[-1] <= tol else FAIL


def combine(verdicts: Sequence[str]) -> str:
    """Fail dominates, then indeterminate; an empty list is indeterminate."""
    vs = list(verdicts)
    if not vs:
        return INDETERMINATE
    if FAIL in vs:
        return FAIL
    if INDETERMINATE in vs:
        return INDETERMINATE
    return PASS


def to_jsonable(x: Any) -> Any:
    """Recursively convert numpy/complex/inf values to plain JSON types."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        if z.imag == 0:
            return to_jsonable(z.real)
        return {"re": to_jsonable(z.real), "im": to_jsonable(z.imag)}
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if x is None or isinstance(x, str):
        return x
    if hasattr(x, "to_dict"):
        return to_jsonable(x.to_dict())
    return str(x)


def _from_json_float(v):
    if v == "inf":
        return float("inf")
    if v == "-inf":
        return float("-inf")
    if v == "nan":
        return float("nan")
    return v


def _decode(x):
    """Inverse of the non-finite float markers; the strings "inf", "-inf" and
    "nan" always decode to floats."""
    if isinstance(x, dict):
        return {k: _decode(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_decode(v) for v in x]
    return _from_json_float(x) if isinstance(x, str) else x


@dataclass
class ClassificationReport:
    class_name: str
    verdict: str
    margins: list = field(default_factory=list)
    ladder: list = field(default_factory=list)
    tolerance: float = 0.0
    witnesses: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in EXIT_CODES:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        d = to_jsonable(asdict(self))
        d["schema"] = SCHEMA_VERSION
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ClassificationReport":
        names = {f.name for f in fields(cls)}
        kw = {k: v for k, v in d.items() if k in names}
        for k in ("margins", "ladder", "tolerance", "witnesses", "diagnostics"):
            if k in kw:
                kw[k] = _decode(kw[k])
        return cls(**kw)


def dumps(obj: Any) -> str:
    """Deterministic JSON (sorted keys, fixed separators, trailing newline)."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def ladder_csv(ladder: Sequence[float], margins: Sequence[float], key: str = "T") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([key, "margin"])
    for a, b in zip(ladder, margins):
        w.writerow([repr(float(a)), repr(float(b))])
    return buf.getvalue()


def rows_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()
