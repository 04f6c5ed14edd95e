"""Variable-exponent Lebesgue spaces: modular, Luxemburg norm, lemma checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import Grid, GridMismatchError, SampledFunction, pointwise_norm

BRACKET_MIN = 1e-12
BRACKET_MAX = 1e12


class NotInSpaceError(ValueError):
    """Non-finite magnitudes, or no finite Luxemburg bracket below ``BRACKET_MAX``."""


class ExponentRelationError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentField:
    """Exponent p(x) in [1, inf] at every grid point of Omega."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.broadcast_to(np.asarray(self.values, float), self.grid.count).copy()
        if v.shape != tuple(self.grid.count):
            raise GridMismatchError("exponent field does not match grid")
        if np.any(np.isnan(v)) or np.any(v < 1):
            raise ValueError("exponents must lie in [1, inf]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, grid: Grid, p: float) -> "ExponentField":
        return cls(grid, np.full(grid.count, float(p)))

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> "ExponentField":
        return cls(grid, np.asarray(fn(grid.points()), float))

    @property
    def p_minus(self) -> float:
        return float(self.values.min())

    @property
    def p_plus(self) -> float:
        return float(self.values.max())

    def is_constant(self) -> bool:
        return self.p_minus == self.p_plus

    def reciprocal(self) -> np.ndarray:
        """1/p with 1/inf = 0."""
        with np.errstate(divide="ignore"):
            return np.where(np.isinf(self.values), 0.0, 1.0 / self.values)


@dataclass(frozen=True)
class ModularValue:
    value: float
    infinite: bool = False

    def __post_init__(self):
        if not self.infinite and not self.value >= 0:
            raise ValueError("modular value must be nonnegative")

    def __le__(self, other: float) -> bool:
        return (not self.infinite) and self.value <= other

    def as_float(self) -> float:
        return float("inf") if self.infinite else self.value


INFINITE = ModularValue(float("inf"), infinite=True)


def _check_grid(f_grid: Grid, p: ExponentField):
    if f_grid != p.grid:
        raise GridMismatchError("function and exponent field live on different grids")


def modular_of_magnitudes(a: np.ndarray, p: np.ndarray, cell: float) -> ModularValue:
    """rho for pointwise magnitudes ``a`` with exponents ``p`` (flat arrays)."""
    inf = np.isinf(p)
    if np.any(a[inf] > 1.0):
        return INFINITE
    fin = ~inf
    total = float(np.sum(a[fin] ** p[fin])) * cell
    if not np.isfinite(total):
        return INFINITE
    return ModularValue(total)


def modular(f: SampledFunction, p: ExponentField) -> ModularValue:
    """rho(f) by the midpoint rule over the valid cells of Omega."""
    _check_grid(f.grid, p)
    ok = f.valid
    return modular_of_magnitudes(f.pointwise_norm()[ok], p.values[ok], f.grid.cell_volume)


def luxemburg_of_magnitudes(a: np.ndarray, p: np.ndarray, cell: float,
                            tol: float = 1e-10) -> float:
    """inf{lam > 0 : rho(a / lam) <= 1} for flat magnitude/exponent arrays."""
    a = np.asarray(a, float).ravel()
    p = np.asarray(p, float).ravel()
    if tol <= 0:
        raise ValueError("tol must be positive")
    nz = a > 0
    if not nz.any():
        return 0.0
    a, p = a[nz], p[nz]
    scale = float(a.max())
    if not np.isfinite(scale):
        raise NotInSpaceError("non-finite magnitude: not in L^p(.)")
    # the norm is homogeneous, so bracket the normalized magnitudes
    a = a / scale
    keep = a > 0  # underflowed entries add nothing to the modular
    a, p = a[keep], p[keep]
    inf = np.isinf(p)
    amax_inf = float(a[inf].max()) if inf.any() else 0.0
    la, pf = np.log(a[~inf]), p[~inf]

    def fits(lam: float) -> bool:
        if lam < amax_inf:
            return False
        if pf.size == 0:
            return True
        return float(np.sum(np.exp(pf * (la - np.log(lam))))) * cell <= 1.0

    hi = max(amax_inf, 1.0)
    while not fits(hi):
        hi *= 2.0
        if hi > BRACKET_MAX:
            raise NotInSpaceError("no finite Luxemburg bracket below 1e12: not in L^p(.)")
    lo = hi / 2.0
    while fits(lo):
        hi = lo
        lo /= 2.0
        if lo < BRACKET_MIN:
            return scale * hi
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if fits(mid):
            hi = mid
        else:
            lo = mid
    return scale * hi


def luxemburg_norm(f: SampledFunction, p: ExponentField, tol: float = 1e-10) -> float:
    """Luxemburg norm by geometric bracketing and bisection (relative ``tol``)."""
    _check_grid(f.grid, p)
    ok = f.valid
    return luxemburg_of_magnitudes(f.pointwise_norm()[ok], p.values[ok],
                                   f.grid.cell_volume, tol)


@dataclass
class InequalityReport:
    holds: bool
    lhs: float
    rhs: float
    slack: float
    details: dict = field(default_factory=dict)


def holder_check(u: SampledFunction, v: SampledFunction, p: ExponentField,
                 q: ExponentField, r: ExponentField, tol: float = 1e-10) -> InequalityReport:
    """||uv||_q <= 2 ||u||_p ||v||_r under 1/q = 1/p + 1/r."""
    gap = np.abs(q.reciprocal() - p.reciprocal() - r.reciprocal())
    if gap.max() > 1e-9:
        raise ExponentRelationError(f"1/q != 1/p + 1/r (max gap {gap.max():.3g})")
    prod = u.with_values(u.values * v.values, label="uv")
    nuv = luxemburg_norm(prod, q, tol)
    nu = luxemburg_norm(u, p, tol)
    nv = luxemburg_norm(v, r, tol)
    rhs = 2.0 * nu * nv
    return InequalityReport(nuv <= rhs * (1 + 2 * tol), nuv, rhs, rhs - nuv,
                            {"norm_uv": nuv, "norm_u": nu, "norm_v": nv})


def embedding_check(f: SampledFunction, p: ExponentField, q: ExponentField,
                    tol: float = 1e-10) -> InequalityReport:
    """||f||_q <= 2 (1 + m(Omega)) ||f||_p for q <= p."""
    if np.any(q.values > p.values):
        raise ExponentRelationError("embedding needs q(x) <= p(x) everywhere")
    measure = float(f.valid.sum()) * f.grid.cell_volume
    nq = luxemburg_norm(f, q, tol)
    np_ = luxemburg_norm(f, p, tol)
    rhs = 2.0 * (1.0 + measure) * np_
    return InequalityReport(nq <= rhs * (1 + 2 * tol), nq, rhs, rhs - nq,
                            {"norm_q": nq, "norm_p": np_, "measure": measure})


def apply_matrix(f: SampledFunction, A: np.ndarray) -> SampledFunction:
    """Pointwise linear map x -> A x on the target space."""
    A = np.asarray(A, complex)
    return f.with_values(f.values @ A.T, label=f"A{f.label}")


def classical_norm(f: SampledFunction, p0: float) -> float:
    """Discrete L^p0 norm with constant exponent, for cross-checks."""
    a = pointwise_norm(f.values, f.norm)[f.valid]
    if np.isinf(p0):
        return float(a.max()) if a.size else 0.0
    return float((np.sum(a ** p0) * f.grid.cell_volume) ** (1.0 / p0))
