"""Built-in corpus of test functions with documented truncation.

Each entry builds a vectorized evaluator ``t (..., n) -> values (..., m)``.
Series-defined entries choose their cutoff from a requested sup-norm error
``delta`` and record the resulting tail bound.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import Domain, Grid, SampledFunction, sample


class UnknownCorpusEntry(KeyError):
    pass


@dataclass(frozen=True)
class Built:
    evaluator: Callable[[np.ndarray], np.ndarray]
    m: int = 1
    norm: str = "euclidean"
    cutoff: int | None = None
    tail_bound: float = 0.0


@dataclass(frozen=True)
class CorpusEntry:
    identifier: str
    description: str
    build: Callable[..., Built]
    half_line: bool = False
    defaults: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)

    def make(self, n: int, **params) -> Built:
        p = dict(self.defaults)
        p.update(params)
        return self.build(n, **p)

    def domain(self, n: int, radius: float) -> Domain:
        return Domain.half(n, radius) if self.half_line else Domain.full(n, radius)

    def sample(self, n: int, radius: float, step: float, **params) -> SampledFunction:
        if "seq_radius" in self.defaults and "seq_radius" not in params:
            # truncate the sequence so that the tail bound holds on the whole window
            params = dict(params, seq_radius=radius)
        b = self.make(n, **params)
        dom = self.domain(n, radius)
        F = sample(b.evaluator, Grid.covering(dom, step), dom, label=self.identifier, norm=b.norm)
        F.meta.update(cutoff=b.cutoff, tail_bound=b.tail_bound, params=params)
        return F


def principal_power(c: complex, z: np.ndarray) -> np.ndarray:
    """c**z on the principal branch of log c."""
    return np.exp(np.asarray(z) * np.log(complex(c)))


def _norm(t):
    return np.sqrt((np.asarray(t, float) ** 2).sum(axis=-1))


def _scalar(fn):
    return lambda n, **p: Built(lambda t: fn(np.asarray(t, float), **p)[..., None])


def _const(t, value=1.0):
    return np.full(t.shape[:-1], complex(value))


def _sin_log(t):
    return np.sin(np.log1p(_norm(t)))


def _sin(t):
    return np.sin(t[..., 0])


def _sin_sq(t):
    return np.sin(t[..., 0]) ** 2


def _sin_irrational(t):
    x = t[..., 0]
    return np.sin(x) + np.sin(np.sqrt(2.0) * x)


def _exp_base(t, base=2.0, period=1.0):
    # base ** (t_1 / period): exactly (period, base)-periodic along axis 1
    return principal_power(base, t[..., 0] / period)


def _identity(t):
    return t[..., 0]


def _exp_decay(t):
    return np.exp(-_norm(t))


def _inv_decay(t):
    return 1.0 / (1.0 + _norm(t))


def _chi_orthant(t):
    return np.all(t >= 0, axis=-1).astype(float)


def _chi_box(t, lower=0.0, upper=1.0):
    return np.all((t >= lower) & (t <= upper), axis=-1).astype(float)


def _periodic_plus_decay(t):
    return np.sin(t[..., 0]) + np.exp(-_norm(t))


def _twisted_sine(n, c=None):
    """prod_j c_j^{t_j / 2 pi} sin t_j on the closed orthant."""
    cs = [1j] * n if c is None else list(np.broadcast_to(np.asarray(c, complex), (n,)))

    def ev(t):
        out = np.ones(t.shape[:-1], complex)
        for j, cj in enumerate(cs):
            out = out * principal_power(cj, t[..., j] / (2 * np.pi)) * np.sin(t[..., j])
        return out[..., None]

    return Built(ev)


def vanishing_seq_cutoff(radius: float, delta: float) -> int:
    """Smallest K with sup_{k > K, 0 <= t <= radius} 4k^2t^2/(t^2+k^2)^2 < delta."""
    K = max(1, int(math.ceil(radius)))
    while True:
        k = K + 1
        # for k >= radius the k-th term is increasing in t on [0, radius]
        val = 4 * k * k * radius * radius / (radius * radius + k * k) ** 2
        if val < delta:
            return K
        K = int(K * 1.25) + 1


def _seq_values(x: np.ndarray, K: int) -> np.ndarray:
    k = np.arange(1, K + 1, dtype=float)
    x = x[..., None]
    return 4 * k ** 2 * x ** 2 / (x ** 2 + k ** 2) ** 2


def _vanishing_seq(n, seq_radius=20.0, delta=1e-2):
    K = vanishing_seq_cutoff(seq_radius, delta)
    return Built(lambda t: _seq_values(np.asarray(t, float)[..., 0], K).astype(complex),
                 m=K, norm="sup", cutoff=K, tail_bound=delta)


def _product(n, c=None, seq_radius=20.0, delta=1e-2):
    """Twisted sine in the first n-1 variables times the sequence in the last."""
    if n < 2:
        raise ValueError("product entry needs n >= 2")
    head = _twisted_sine(n - 1, c)
    K = vanishing_seq_cutoff(seq_radius, delta)

    def ev(t):
        t = np.asarray(t, float)
        return head.evaluator(t[..., :-1]) * _seq_values(t[..., -1], K)

    return Built(ev, m=K, norm="sup", cutoff=K, tail_bound=delta)


def factorial_tail(n: int, L: int) -> float:
    """sum_{|l|_1 > L} 1 / prod l_j!  =  sum_{k > L} n^k / k!."""
    total, term, k = 0.0, 1.0, 0
    while True:
        if k > L:
            total += term
            if term < 1e-18 * max(total, 1e-300):
                return total
        k += 1
        term *= n / k


def odd_series_cutoff(n: int, delta: float) -> int:
    L = 0
    while factorial_tail(n, L) >= delta:
        L += 1
    return L


def odd_series_terms(n: int, q, L: int):
    """(frequency vector, coefficient) pairs of the partial sum |l|_1 <= L."""
    q = list(np.broadcast_to(np.asarray(q, int), (n,)))
    terms = []
    for l in itertools.product(range(L + 1), repeat=n):
        if sum(l) > L:
            continue
        freq = np.array([1.0 / (2 * lj * qj + 1) for lj, qj in zip(l, q)])
        coef = 1.0 / math.prod(math.factorial(lj) for lj in l)
        terms.append((freq, coef))
    return terms


def _odd_series(n, q=1, delta=1e-10, cutoff=None):
    L = odd_series_cutoff(n, delta) if cutoff is None else int(cutoff)
    terms = odd_series_terms(n, q, L)

    def ev(t):
        t = np.asarray(t, float)
        out = np.zeros(t.shape[:-1], complex)
        for freq, coef in terms:
            out += coef * np.exp(1j * (t @ freq))
        return out[..., None]

    return Built(ev, cutoff=L, tail_bound=factorial_tail(n, L))


def _trig(n, freqs=((1.0,),), coefs=(1.0,)):
    F = np.atleast_2d(np.asarray(freqs, float))
    C = np.asarray(coefs, complex)

    def ev(t):
        t = np.asarray(t, float)
        return (np.exp(1j * (t @ F.T)) @ C)[..., None]

    return Built(ev)


def _difference_product(n, g="sin"):
    """prod_j [g(t_{j+k}) - g(t_j)] in 2k variables (k = n / 2)."""
    if n % 2:
        raise ValueError("difference-product entry needs an even dimension")
    k = n // 2
    g = {"sin": np.sin, "cos": np.cos}[g]

    def ev(t):
        t = np.asarray(t, float)
        out = np.ones(t.shape[:-1])
        for j in range(k):
            out = out * (g(t[..., j + k]) - g(t[..., j]))
        return out[..., None]

    return Built(ev)


CORPUS: dict[str, CorpusEntry] = {}


def _register(e: CorpusEntry):
    CORPUS[e.identifier] = e


_register(CorpusEntry("zero", "identically zero", _scalar(lambda t: np.zeros(t.shape[:-1]))))
_register(CorpusEntry("const", "constant value", _scalar(_const), defaults={"value": 1.0}))
_register(CorpusEntry("sin", "sin t_1", _scalar(_sin),
                      expected={"periodic": "pass", "uniform-recurrence": "pass"}))
_register(CorpusEntry("sin-squared", "sin(t_1)^2", _scalar(_sin_sq)))
_register(CorpusEntry("sin-irrational", "sin t + sin(sqrt2 t)", _scalar(_sin_irrational),
                      expected={"bohr-ap": "pass", "semi-periodic": "fail"}))
_register(CorpusEntry("exp-base", "base^(t_1/period)", _scalar(_exp_base),
                      defaults={"base": 2.0, "period": 1.0}, expected={"periodic": "pass"}))
_register(CorpusEntry("sin-log", "sin(ln(1+|t|))", _scalar(_sin_log),
                      expected={"quasi-ap(c=1)": "pass", "quasi-ap(c=-1)": "fail",
                                "uniform-recurrence": "fail"}))
_register(CorpusEntry("identity", "t_1", _scalar(_identity),
                      expected={"s-asymptotic": "fail"}))
_register(CorpusEntry("exp-decay", "exp(-|t|)", _scalar(_exp_decay),
                      expected={"vanishing": "pass"}))
_register(CorpusEntry("inv-decay", "1/(1+|t|)", _scalar(_inv_decay),
                      expected={"vanishing": "pass"}))
_register(CorpusEntry("chi-orthant", "indicator of the closed orthant", _scalar(_chi_orthant)))
_register(CorpusEntry("chi-box", "indicator of [lower, upper]^n", _scalar(_chi_box),
                      defaults={"lower": 0.0, "upper": 1.0}))
_register(CorpusEntry("periodic-plus-decay", "sin t_1 + exp(-|t|)", _scalar(_periodic_plus_decay),
                      expected={"s-asymptotic": "pass"}))
_register(CorpusEntry("twisted-sine", "prod c_j^(t_j/2pi) sin t_j", _twisted_sine,
                      half_line=True, expected={"periodic-axiswise": "pass"}))
_register(CorpusEntry("vanishing-seq", "(4k^2t^2/(t^2+k^2)^2)_k, truncated", _vanishing_seq,
                      half_line=True, defaults={"seq_radius": 20.0, "delta": 1e-2}, expected={"s-asymptotic": "pass"}))
_register(CorpusEntry("product", "twisted sine times the vanishing sequence", _product,
                      half_line=True, defaults={"seq_radius": 20.0, "delta": 1e-2}, expected={"s-asymptotic-axiswise": "pass"}))
_register(CorpusEntry("odd-series", "sum_l prod e^{i t_j/(2 l_j q_j + 1)} / prod l_j!",
                      _odd_series, defaults={"q": 1, "delta": 1e-10},
                      expected={"semi-periodic(c=-1)": "pass"}))
_register(CorpusEntry("trig", "finite trigonometric polynomial", _trig))
_register(CorpusEntry("difference-product", "prod_j [g(t_{j+k}) - g(t_j)]", _difference_product,
                      expected={"weyl(diagonal shifts)": "not asserted"}))


def get(identifier: str) -> CorpusEntry:
    try:
        return CORPUS[identifier]
    except KeyError:
        raise UnknownCorpusEntry(f"unknown corpus entry {identifier!r}") from None
