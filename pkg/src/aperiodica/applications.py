"""Convolution operators, the Gaussian semigroup, d'Alembert waves and Hammerstein equations.

Convolution is direct summation over grid nodes with trapezoid end weights
and kernel truncation at an effective radius.  Two boundary modes exist:
``"valid"`` keeps only outputs whose kernel support lies inside the window,
``"truncate"`` extends the input by zero (the window is the whole domain),
which is what a fixed-point solver on a finite window needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import erfcinv, roots_legendre

from .asymptotic import PreconditionError, default_ladder, quasi_asymptotic_check, s_asymptotic_check
from .grid import (Domain, DomainSubset, EmptyOverlapError, Grid, SampledFunction, crop,
                   pointwise_norm)
from .harmonic import semi_cj_check
from .periodic import PeriodSpec, check_periodic
from .report import FAIL, PASS, ClassificationReport, combine, ladder_verdict
from .stepanov_weyl import StepanovConfig, stepanov_classify

BOUNDARY_MODES = ("valid", "truncate")


class ConvergenceError(RuntimeError):
    """Picard iteration did not reach the tolerance within ``max_iter``."""

    def __init__(self, msg: str, ratios: Sequence[float]):
        super().__init__(msg)
        self.ratios = list(ratios)


@dataclass(frozen=True)
class Kernel:
    """Convolution kernel h on R^n.

    ``factors`` (one 1-D callable per axis) marks a separable kernel, which is
    convolved axis by axis.  ``radius`` is the half-width of the truncation
    cube, outside of which at most ``delta`` of the L1 mass lives.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    n: int
    l1_norm: float
    integral: complex
    radius: float
    delta: float = 0.0
    factors: tuple | None = None
    label: str = ""

    @classmethod
    def gaussian(cls, t0: float, n: int = 1, delta: float = 1e-12) -> "Kernel":
        """Heat kernel (4 pi t0)^{-n/2} exp(-|y|^2 / 4 t0)."""
        if not t0 > 0:
            raise ValueError("the semigroup time must be positive")
        s = math.sqrt(t0)
        # cube truncation loses at most n * erfc(r / (2 sqrt t0)) of the mass
        r = 2 * s * float(erfcinv(delta / n))
        f1 = lambda x: np.exp(-np.asarray(x) ** 2 / (4 * t0)) / math.sqrt(4 * math.pi * t0)
        ev = lambda y: np.exp(-(np.asarray(y) ** 2).sum(-1) / (4 * t0)) / (4 * math.pi * t0) ** (n / 2)
        return cls(ev, n, 1.0, 1.0, r, delta, (f1,) * n, f"gauss({t0:g})")

    @classmethod
    def box(cls, half_width: float, n: int = 1) -> "Kernel":
        """Normalized indicator of [-a, a]^n."""
        a = float(half_width)
        f1 = lambda x: np.where(np.abs(np.asarray(x)) <= a * (1 + 1e-12), 1 / (2 * a), 0.0)
        ev = lambda y: np.prod(f1(y), axis=-1)
        return cls(ev, n, 1.0, 1.0, a, 0.0, (f1,) * n, f"box({a:g})")

    @classmethod
    def zero(cls, n: int = 1, radius: float = 1.0) -> "Kernel":
        f1 = lambda x: np.zeros_like(np.asarray(x, float))
        return cls(lambda y: np.zeros(np.shape(y)[:-1]), n, 0.0, 0.0, radius, 0.0, (f1,) * n, "zero")

    @classmethod
    def from_function(cls, evaluator, n: int, radius: float, step: float = 1e-3,
                      label: str = "") -> "Kernel":
        """Kernel with L1 norm and integral from trapezoid quadrature on the cube."""
        l1, integral = _cube_quadrature(evaluator, n, radius, step)
        return cls(evaluator, n, l1, integral, radius, 0.0, None, label)

    def quadrature_l1(self, step: float = 1e-3) -> float:
        return _cube_quadrature(self.evaluator, self.n, self.radius, step)[0]

    def scaled(self, s: float) -> "Kernel":
        fac = None
        if self.factors is not None:
            # put the whole factor on the first axis
            fac = ((lambda x, f=self.factors[0]: s * f(x)),) + tuple(self.factors[1:])
        return Kernel(lambda y: s * self.evaluator(y), self.n, abs(s) * self.l1_norm,
                      s * self.integral, self.radius, self.delta, fac, f"{s:g}*{self.label}")


def _cube_quadrature(evaluator, n: int, radius: float, step: float):
    K = max(1, int(math.ceil(radius / step)))
    x = np.linspace(-radius, radius, 2 * K + 1)
    w1 = np.full(x.size, x[1] - x[0])
    w1[[0, -1]] *= 0.5
    pts = np.stack(np.meshgrid(*([x] * n), indexing="ij"), axis=-1)
    w = w1
    for _ in range(n - 1):
        w = np.multiply.outer(w, w1)
    v = np.asarray(evaluator(pts))
    return float((np.abs(v) * w).sum()), complex((v * w).sum())


def _axis_weights(f1, h: float, radius: float) -> np.ndarray:
    K = max(1, int(math.ceil(radius / h - 1e-9)))
    x = np.arange(-K, K + 1) * h
    w = np.asarray(f1(x), complex) * h
    w[[0, -1]] *= 0.5
    return w


def _conv_axis(vals: np.ndarray, w: np.ndarray, axis: int) -> np.ndarray:
    """out[i] = sum_k w[k] vals[i - k] with zero extension, k = -K..K."""
    K = (w.size - 1) // 2
    N = vals.shape[axis]
    pad = [(0, 0)] * vals.ndim
    pad[axis] = (K, K)
    p = np.pad(vals, pad)
    out = np.zeros(vals.shape, complex)
    sl = [slice(None)] * vals.ndim
    for idx, k in enumerate(range(-K, K + 1)):
        if w[idx] == 0:
            continue
        sl[axis] = slice(K - k, K - k + N)
        out += w[idx] * p[tuple(sl)]
    return out


def _support_valid(valid: np.ndarray, K: Sequence[int]) -> np.ndarray:
    """Nodes whose whole (2K+1)-cube lies in the window and is valid."""
    ok = valid.copy()
    for j, k in enumerate(K):
        N = ok.shape[j]
        bad = np.cumsum(np.moveaxis(~ok, j, 0), axis=0, dtype=np.int64)
        bad = np.concatenate([np.zeros((1,) + bad.shape[1:], np.int64), bad])
        new = np.zeros((N,) + bad.shape[1:], bool)
        if N > 2 * k:
            new[k:N - k] = (bad[2 * k + 1:] - bad[:N - 2 * k]) == 0
        ok = np.moveaxis(new, 0, j)
    return ok


def convolve(h: Kernel, F: SampledFunction, boundary: str = "valid") -> SampledFunction:
    """(h * F)(t) = int h(s) F(t - s) ds by direct summation on the grid.

    ``meta`` carries the discrete kernel mass and an error bound
    ``(|sum |w| - ||h||_1| + delta) * sup|F|``.
    """
    if boundary not in BOUNDARY_MODES:
        raise ValueError(f"unknown boundary mode {boundary!r}")
    g = F.grid
    if h.n != g.n:
        raise ValueError("kernel and grid dimensions differ")
    vals = np.where(F.valid[..., None], F.values, 0.0)
    Ks = [max(1, int(math.ceil(h.radius / s - 1e-9))) for s in g.step]
    if h.factors is not None:
        ws = [_axis_weights(f, s, h.radius) for f, s in zip(h.factors, g.step)]
        out = vals
        for j, w in enumerate(ws):
            out = _conv_axis(out, w, j)
        mass = float(np.prod([np.abs(w).sum() for w in ws]))
    else:
        axes = [np.arange(-k, k + 1) * s for k, s in zip(Ks, g.step)]
        offs = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        W = np.asarray(h.evaluator(offs), complex) * g.cell_volume
        for j in range(g.n):
            sl = [slice(None)] * g.n
            sl[j] = [0, -1]
            W[tuple(sl)] *= 0.5
        mass = float(np.abs(W).sum())
        pad = [(k, k) for k in Ks] + [(0, 0)]
        p = np.pad(vals, pad)
        out = np.zeros(vals.shape, complex)
        for idx in np.ndindex(W.shape):
            if W[idx] == 0:
                continue
            sl = tuple(slice(2 * k - i, 2 * k - i + N) for i, k, N in zip(idx, Ks, g.count))
            out += W[idx] * p[sl]
    if boundary == "valid":
        valid = _support_valid(F.valid, Ks)
        if not valid.any():
            raise EmptyOverlapError("kernel support leaves no interior region")
    else:
        if not F.valid.all():
            raise ValueError("zero extension needs a fully valid input")
        valid = np.ones(g.count, bool)
    out = np.where(valid[..., None], out, 0.0)
    res = F.with_values(out, label=f"{h.label}*{F.label}", valid=valid)
    res.meta.update(kernel_mass=mass, boundary=boundary, support_nodes=Ks,
                    error_bound=(abs(mass - h.l1_norm) + h.delta) * F.sup_norm())
    return res


def gaussian_apply(t0: float, F: SampledFunction, delta: float = 1e-12,
                   boundary: str = "valid") -> SampledFunction:
    """Gaussian semigroup G(t0) F."""
    return convolve(Kernel.gaussian(t0, F.grid.n, delta), F, boundary)


def interior(G: SampledFunction) -> SampledFunction:
    """Crop a convolution result to the bounding box of its valid nodes."""
    idx = np.nonzero(G.valid)
    if not idx[0].size:
        raise EmptyOverlapError("no valid nodes")
    lo = [G.grid.origin[j] + G.grid.step[j] * int(i.min()) for j, i in enumerate(idx)]
    hi = [G.grid.origin[j] + G.grid.step[j] * int(i.max()) for j, i in enumerate(idx)]
    return crop(G, lo, hi)


def _subset(F: SampledFunction, D):
    if D is None:
        return None
    if isinstance(D, (list, tuple)):
        return [_subset(F, d) for d in D]
    if isinstance(D, DomainSubset):
        if D.grid == F.grid:
            return D
        raise ValueError("pass D as a predicate when the grid changes")
    return DomainSubset.from_predicate(F.grid, D)


def convolution_invariance_property(h: Kernel, F: SampledFunction, kind: str, c: complex = 1.0,
                                    spec: PeriodSpec | None = None, D=None,
                                    eps_list: Sequence[float] = (0.5, 0.25, 0.15),
                                    stepanov: StepanovConfig | None = None,
                                    ladder: Sequence[float] | None = None,
                                    **over) -> ClassificationReport:
    """Check that h * F stays in the class of F.

    ``kind`` is ``"periodic"``, ``"s-asymptotic"``, ``"quasi"`` or
    ``"stepanov"``.  F must pass the class check first.  Tolerances for h * F
    are those of F scaled by ||h||_1 plus the truncation and quadrature
    error ``c_B = (delta + mass error) sup|F|`` on each side of the shift.
    ``D`` is a predicate on coordinates (or a list of them, one per axis in
    axiswise mode) so that it can be rebuilt on the cropped interior.
    """
    full = convolve(h, F)
    G = interior(full)
    tail = 2 * full.meta["error_bound"]
    scale = max(h.l1_norm, 1e-300)
    DF, DG = _subset(F, D), _subset(G, D)
    if kind == "periodic":
        if spec is None:
            raise ValueError("periodic invariance needs a period spec")
        rf = check_periodic(F, spec, tol=1e-9)
        if not rf.passed:
            raise PreconditionError("F is not (omega, c)-periodic on the window")
        rg = check_periodic(G, spec, tol=1e-6)
        return ClassificationReport("convolution-periodic", PASS if rg.passed else FAIL,
                                    [rg.max_defect], [], rg.bound, [],
                                    {"input_defect": rf.max_defect, "kernel": h.label})
    if kind == "s-asymptotic":
        if spec is None:
            raise ValueError("s-asymptotic invariance needs a period spec")
        rf = s_asymptotic_check(F, spec, DF, ladder)
        if rf.verdict != PASS:
            raise PreconditionError(f"F is not S-asymptotically periodic ({rf.verdict})")
        lad = default_ladder(G) if ladder is None else [t for t in ladder if t < _half_width(G)]
        rg = s_asymptotic_check(G, spec, DG, lad, tol=scale * rf.tolerance + tail)
    elif kind == "quasi":
        rf = quasi_asymptotic_check(F, c, eps_list, D=DF, **over)
        if rf.verdict != PASS:
            raise PreconditionError(f"F is not quasi-asymptotically almost periodic ({rf.verdict})")
        rg = quasi_asymptotic_check(G, c, [scale * e + tail for e in eps_list], D=DG, **over)
    elif kind == "stepanov":
        if stepanov is None:
            raise ValueError("stepanov invariance needs a Stepanov config")
        rf = stepanov_classify(F, stepanov, c, eps_list, D=DF, **over)
        if rf.verdict != PASS:
            raise PreconditionError(f"F is not Stepanov quasi-asymptotically almost periodic ({rf.verdict})")
        rg = stepanov_classify(G, stepanov, c, [scale * e + tail for e in eps_list], D=DG, **over)
    else:
        raise ValueError(f"unknown class {kind!r}")
    diag = dict(rg.diagnostics)
    diag.update(input_verdict=rf.verdict, input_margins=rf.margins, kernel=h.label,
                l1=h.l1_norm, tail=tail)
    return ClassificationReport(f"convolution-{rg.class_name}", rg.verdict, rg.margins,
                                rg.ladder, rg.tolerance, rg.witnesses, diag)


def _half_width(F: SampledFunction) -> float:
    return min(max(abs(F.grid.origin[j]), abs(F.grid.origin[j] + F.grid.step[j] * (F.grid.count[j] - 1)))
               for j in range(F.grid.n))


# --- d'Alembert -------------------------------------------------------------

@dataclass
class WaveProblem:
    """u_tt = a^2 u_xx, u(., 0) = f, u_t(., 0) = g.

    ``D`` is a predicate on ``(x, t)`` arrays; ``omega``, ``c`` and ``k`` are
    the certification data (c^{k-1} = 1).  ``window`` bounds the x-interval
    on which f and g are known (``None`` means the whole line).
    """

    a: float
    f: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    D: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    omega: float | None = None
    c: complex = 1.0
    k: int = 1
    window: tuple[float, float] | None = None
    label: str = "wave"

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("wave speed must be positive")
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if abs(complex(self.c) ** (self.k - 1) - 1) > 1e-12:
            raise ValueError("c^(k-1) must equal 1")

    @property
    def omegas(self) -> tuple[float, float]:
        """Space and time periods of the solution, ((1+k) omega / 2, (k-1) omega / (2a))."""
        w = float(self.omega)
        return (1 + self.k) * w / 2, (self.k - 1) * w / (2 * self.a)


_GL_X, _GL_W = roots_legendre(8)


def antiderivative(g, s: np.ndarray) -> np.ndarray:
    """g^[1](s) = int_0^s g on arbitrary points.

    The sorted points (with 0) are joined by 8-point Gauss-Legendre panels and
    accumulated, so the error is far below any finite-difference scale.
    """
    s = np.asarray(s, float)
    u, inv = np.unique(np.concatenate([s.ravel(), [0.0]]), return_inverse=True)
    a, b = u[:-1], u[1:]
    mid, half = (a + b) / 2, (b - a) / 2
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    panel = (np.asarray(g(nodes), complex) * _GL_W[None, :]).sum(1) * half
    cum = np.concatenate([[0.0], np.cumsum(panel)])
    cum = cum - cum[np.searchsorted(u, 0.0)]
    return cum[inv[:-1]].reshape(s.shape)


def dalembert_solve(prob: WaveProblem, grid: Grid, domain: Domain | None = None) -> SampledFunction:
    """u(x, t) = [f(x - at) + f(x + at)] / 2 + [g1(x + at) - g1(x - at)] / (2a)."""
    if grid.n != 2:
        raise ValueError("the wave grid is two-dimensional (x, t)")
    if grid.origin[1] < 0:
        raise ValueError("time axis must start at t >= 0")
    a = prob.a
    x, t = grid.axis(0), grid.axis(1)
    X, T = np.meshgrid(x, t, indexing="ij")
    lo, hi = x.min() - a * t.max(), x.max() + a * t.max()
    if prob.window is not None and (lo < prob.window[0] - 1e-12 or hi > prob.window[1] + 1e-12):
        raise EmptyOverlapError(f"dependency interval [{lo:g}, {hi:g}] exits the data window")
    xi, eta = X - a * T, X + a * T
    G1 = antiderivative(prob.g, np.stack([xi, eta]))
    u = 0.5 * (np.asarray(prob.f(xi), complex) + np.asarray(prob.f(eta), complex)) \
        + (G1[1] - G1[0]) / (2 * a)
    if domain is None:
        r = max(abs(lo + a * t.max()), abs(hi - a * t.max()), t.max())
        domain = Domain(("full", "from"), (0.0, 0.0), float(r))
    return SampledFunction(grid, domain, u, label=prob.label)


def wave_residual(u: SampledFunction, a: float) -> float:
    """sup |u_tt - a^2 u_xx| by centered second differences on interior nodes."""
    v = u.values[..., 0]
    hx, ht = u.grid.step
    utt = (v[1:-1, 2:] - 2 * v[1:-1, 1:-1] + v[1:-1, :-2]) / ht ** 2
    uxx = (v[2:, 1:-1] - 2 * v[1:-1, 1:-1] + v[:-2, 1:-1]) / hx ** 2
    return float(np.abs(utt - a * a * uxx).max())


def dalembert_asymptotic_certify(prob: WaveProblem, u: SampledFunction,
                                 ladder: Sequence[float] | None = None,
                                 tol: float | None = None) -> ClassificationReport:
    """Certify S-asymptotic ((omega_1, omega_2), c)-periodicity of u on D.

    The hypothesis is the decay along D of the data defects
    f(xi + omega) - c f(xi), f(eta + k omega) - c f(eta) and the same for g1,
    with xi = x - at and eta = x + at.  When it decays, u itself is checked;
    a decaying hypothesis with a failing u is reported as fail.
    """
    if prob.omega is None:
        raise ValueError("certification needs omega")
    if prob.D is None:
        raise ValueError("certification needs a region D")
    a, w, c, k = prob.a, float(prob.omega), complex(prob.c), prob.k
    P = u.grid.points()
    X, T = P[..., 0], P[..., 1]
    Dm = np.asarray(prob.D(X, T), bool)
    xi, eta = X - a * T, X + a * T
    G1 = antiderivative(prob.g, np.stack([xi, eta, xi + w, eta + k * w]))
    f = lambda s: np.asarray(prob.f(s), complex)
    E = np.max(np.abs(np.stack([
        f(xi + w) - c * f(xi), f(eta + k * w) - c * f(eta),
        G1[2] - c * G1[0], G1[3] - c * G1[1]])), axis=0)
    ladder = default_ladder(u) if ladder is None else list(ladder)
    R = np.sqrt((P ** 2).sum(-1))
    margins = []
    for L in ladder:
        sel = Dm & (R >= L)
        margins.append(float(E[sel].max()) if sel.any() else float("nan"))
    dtol = 1e-3 if tol is None else tol
    decay = ladder_verdict(margins, dtol)
    spec = PeriodSpec.joint(prob.omegas, c)
    Dsub = DomainSubset(u.grid, Dm, "D")
    diag = {"hypothesis_margins": margins, "hypothesis_verdict": decay,
            "omega": list(prob.omegas), "c": c}
    if decay != PASS:
        return ClassificationReport("dalembert-certificate", decay, margins, ladder, dtol, [], diag)
    ru = s_asymptotic_check(u, spec, Dsub, ladder, tol)
    diag.update(solution_margins=ru.margins, solution_verdict=ru.verdict)
    return ClassificationReport("dalembert-certificate", combine([decay, ru.verdict]), ru.margins,
                                ladder, ru.tolerance, ru.witnesses, diag)


# --- Hammerstein -------------------------------------------------------------

@dataclass
class HammersteinProblem:
    """y(t) = int k(t - s) G(s, y(s)) ds with G Lipschitz in y (constant L)."""

    kernel: Kernel
    G: Callable[[np.ndarray, np.ndarray], np.ndarray]
    lipschitz: float
    label: str = "hammerstein"

    @property
    def margin(self) -> float:
        return self.lipschitz * self.kernel.l1_norm


@dataclass
class HammersteinResult:
    solution: SampledFunction
    iterations: int
    updates: list
    ratios: list
    q: float
    apriori_bound: float
    residual: float
    residual_bound: float
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"iterations": self.iterations, "updates": self.updates, "ratios": self.ratios,
                "q": self.q, "apriori_bound": self.apriori_bound, "residual": self.residual,
                "residual_bound": self.residual_bound, "diagnostics": self.diagnostics}


def _apply_G(prob: HammersteinProblem, y: SampledFunction) -> SampledFunction:
    vals = np.asarray(prob.G(y.grid.points(), y.values), complex)
    return y.with_values(vals.reshape(y.values.shape))


def hammerstein_operator(prob: HammersteinProblem, y: SampledFunction) -> SampledFunction:
    """y -> k * G(., y) with zero extension beyond the window."""
    return convolve(prob.kernel, _apply_G(prob, y), boundary="truncate")


def hammerstein_solve(prob: HammersteinProblem, y0: SampledFunction, max_iter: int = 500,
                      tol: float = 1e-10) -> HammersteinResult:
    """Picard iteration until the sup update is <= tol.

    The discrete contraction constant q uses the discrete kernel mass, so the
    a-priori count log(tol (1 - q) / ||y1 - y0||) / log q is a true bound for
    the iteration actually run.
    """
    q0 = prob.margin
    if not q0 < 1:
        raise PreconditionError(f"contraction margin {q0:g} is not below 1")
    y = y0
    updates, ratios = [], []
    q, bound = q0, float("nan")
    for it in range(1, max_iter + 1):
        y_new = hammerstein_operator(prob, y)
        if it == 1:
            q = max(q0, prob.lipschitz * y_new.meta["kernel_mass"])
            if not q < 1:
                raise PreconditionError(f"discrete contraction margin {q:g} is not below 1")
        d = float(np.max(pointwise_norm(y_new.values - y.values, y.norm)))
        if updates:
            ratios.append(d / updates[-1] if updates[-1] > 0 else 0.0)
        updates.append(d)
        y = y_new
        if it == 1:
            bound = (0.0 if d <= tol else
                     math.ceil(math.log(tol * (1 - q) / d) / math.log(q)) + 1 if q > 0 else 1)
        if d <= tol:
            break
    else:
        raise ConvergenceError(
            f"no convergence in {max_iter} iterations (last update {updates[-1]:.3g}, "
            f"measured ratio {ratios[-1] if ratios else float('nan'):.3g})", ratios)
    r = float(np.max(pointwise_norm(hammerstein_operator(prob, y).values - y.values, y.norm)))
    sol = y.with_values(y.values, label=f"{prob.label}~solution")
    return HammersteinResult(sol, len(updates), updates, ratios, q, float(bound), r,
                             tol / (1 - q), {"declared_margin": q0})


def hammerstein_dense_linear(kernel: Kernel, b: SampledFunction, alpha: float) -> SampledFunction:
    """Solve (I - alpha K) y = K b on a 1-D grid with the convolution matrix K."""
    g = b.grid
    if g.n != 1:
        raise ValueError("the dense oracle is one-dimensional")
    N = g.count[0]
    h = g.step[0]
    if kernel.factors is not None:
        w = _axis_weights(kernel.factors[0], h, kernel.radius)
    else:
        K = max(1, int(math.ceil(kernel.radius / h - 1e-9)))
        w = np.asarray(kernel.evaluator((np.arange(-K, K + 1) * h)[:, None]), complex) * h
        w[[0, -1]] *= 0.5
    K = (w.size - 1) // 2
    i = np.arange(N)
    D = i[:, None] - i[None, :]
    M = np.where(np.abs(D) <= K, w[np.clip(D + K, 0, 2 * K)], 0.0)
    y = np.linalg.solve(np.eye(N) - alpha * M, M @ b.values)
    return b.with_values(y, label="dense-oracle")


def hammerstein_semiperiodic_property(prob: HammersteinProblem, result: HammersteinResult,
                                      y_samples: Sequence[float] = (-1.0, 0.0, 1.0),
                                      eps_list: Sequence[float] = (0.1, 0.05), margin: float | None = None,
                                      **semi) -> ClassificationReport:
    """The solution of a contractive equation with semi-periodic G is semi-periodic.

    The hypothesis is checked on s -> G(s, y) for each constant y in
    ``y_samples`` (a sampled bounded set).  The solution is cropped by
    ``margin`` on every side (default: a quarter of the window) to remove the
    zero-extension boundary layer, and checked with eps inflated by the
    solver bound tol / (1 - q).  The composition s -> G(s, y(s)) is checked
    too and reported as a diagnostic.
    """
    y = result.solution
    g = y.grid
    hyp = []
    for v in y_samples:
        Gv = y.with_values(np.asarray(prob.G(g.points(), np.full(y.values.shape, v, complex)),
                                      complex).reshape(y.values.shape))
        hyp.append(semi_cj_check(Gv, 1.0, eps_list, **semi).verdict)
    if combine(hyp) != PASS:
        raise PreconditionError(f"G(., y) is not semi-periodic for every sampled y: {hyp}")
    if not prob.margin < 1:
        raise PreconditionError("contraction fails")
    lo = [g.origin[j] for j in range(g.n)]
    hi = [g.origin[j] + g.step[j] * (g.count[j] - 1) for j in range(g.n)]
    m = [(b - a) / 4 for a, b in zip(lo, hi)] if margin is None else [margin] * g.n
    yc = crop(y, [a + d for a, d in zip(lo, m)], [b - d for b, d in zip(hi, m)])
    infl = result.residual_bound
    ry = semi_cj_check(yc, 1.0, [e + infl for e in eps_list], **semi)
    comp = _apply_G(prob, yc)
    rc = semi_cj_check(comp, 1.0, [e + infl for e in eps_list], **semi)
    diag = dict(ry.diagnostics)
    diag.update(hypothesis=hyp, composition_verdict=rc.verdict, inflation=infl)
    return ClassificationReport("hammerstein-semi-periodic", ry.verdict, ry.margins, ry.ladder,
                                ry.tolerance, ry.witnesses, diag)
