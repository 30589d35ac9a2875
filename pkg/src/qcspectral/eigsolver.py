"""First non-trivial Neumann eigenvalue of the p-Laplacian by P1 finite elements.

``mu_p`` is the minimum of ``R(u) = int |grad u|^p / int |u|^p`` over
fields with ``int |u|^(p-2) u = 0``.  The constraint is enforced by
subtracting the unique constant that satisfies it, so the solver descends
the function ``u -> R(u - c(u))``.  At a constrained point its gradient
coincides with the gradient of ``R``.  The descent is nonlinear conjugate
gradients on Sobolev gradients: the Euclidean gradient preconditioned by
``S + sigma M`` (P1 stiffness plus scaled mass), which keeps the iteration
count mesh-independent.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import brentq
from scipy.sparse.linalg import splu

from . import kernels
from . import maps as _maps
from .mesh import Mesh, mesh_disc, push_forward

logger = logging.getLogger(__name__)

# degree-4 symmetric rule on the triangle (6 points)
_A1, _B1, _W1 = 0.445948490915965, 0.108103018168070, 0.223381589678011
_A2, _B2, _W2 = 0.091576213509771, 0.816847572980459, 0.109951743655322
TRI_BARY = np.array([
    [_A1, _A1, _B1], [_A1, _B1, _A1], [_B1, _A1, _A1],
    [_A2, _A2, _B2], [_A2, _B2, _A2], [_B2, _A2, _A2],
])
TRI_WEIGHTS = np.array([_W1, _W1, _W1, _W2, _W2, _W2])
TRI_WEIGHTS = TRI_WEIGHTS / TRI_WEIGHTS.sum()


_RTOL = 4.0 * np.finfo(float).eps


class DegenerateFieldError(ValueError):
    pass


class FEData:
    """Per-triangle geometry of a mesh, shared by all kernels."""

    def __init__(self, mesh: Mesh):
        self.mesh = mesh
        V, T = mesh.vertices, mesh.triangles
        self.tri = np.ascontiguousarray(T, dtype=np.int64)
        area = mesh.signed_areas()
        if np.any(area <= 0):
            raise ValueError("mesh has non-positive triangles")
        self.area = np.ascontiguousarray(area)
        p0, p1, p2 = V[T[:, 0]], V[T[:, 1]], V[T[:, 2]]
        # grad of barycentric lambda_i = rot90(opposite edge) / (2 area)
        grads = np.empty((len(T), 3, 2))
        for i, (a, b) in enumerate(((p1, p2), (p2, p0), (p0, p1))):
            e = b - a
            grads[:, i, 0] = -e[:, 1]
            grads[:, i, 1] = e[:, 0]
        self.grads = np.ascontiguousarray(grads / (2.0 * area)[:, None, None])
        self.bary = np.ascontiguousarray(TRI_BARY)
        self.wq = np.ascontiguousarray(TRI_WEIGHTS)
        self.W = np.ascontiguousarray(self.area[:, None] * self.wq[None, :])
        self.total_area = float(np.sum(self.area))
        self._S = self._M = None

    @property
    def n(self) -> int:
        return len(self.mesh.vertices)

    def stiffness(self) -> sparse.csr_matrix:
        if self._S is None:
            loc = np.einsum("tid,tjd->tij", self.grads, self.grads) * self.area[:, None, None]
            self._S = self._assemble(loc)
        return self._S

    def mass(self) -> sparse.csr_matrix:
        if self._M is None:
            base = (np.ones((3, 3)) + np.eye(3)) / 12.0
            self._M = self._assemble(self.area[:, None, None] * base[None])
        return self._M

    def _assemble(self, loc):
        rows = np.repeat(self.tri, 3, axis=1).ravel()
        cols = np.tile(self.tri, (1, 3)).ravel()
        return sparse.csr_matrix((loc.ravel(), (rows, cols)), shape=(self.n, self.n))


def _fe(mesh_or_fe) -> FEData:
    return mesh_or_fe if isinstance(mesh_or_fe, FEData) else FEData(mesh_or_fe)


def _as_field(fe: FEData, u) -> np.ndarray:
    u = np.ascontiguousarray(u, dtype=float)
    if u.shape != (fe.n,):
        raise ValueError(f"field has {u.shape} values, mesh has {fe.n} vertices")
    if not np.all(np.isfinite(u)):
        raise ValueError("field has non-finite values")
    return u


def gradient_energy(fe: FEData, u, p: float):
    u = np.ascontiguousarray(u, dtype=float)
    return kernels.energy_grad(u, fe.tri, fe.grads, fe.area, float(p))


def power_mass(fe: FEData, u, p: float):
    u = np.ascontiguousarray(u, dtype=float)
    return kernels.mass_grad(u, fe.tri, fe.area, fe.bary, fe.wq, float(p))


def rayleigh_quotient(mesh, u, p: float) -> float:
    """``sum_T |grad u|_T^p area_T / int |u|^p``."""
    fe = _fe(mesh)
    u = _as_field(fe, u)
    num, _ = gradient_energy(fe, u, p)
    den, _ = power_mass(fe, u, p)
    if den <= 0:
        raise DegenerateFieldError("zero field has no Rayleigh quotient")
    return num / den


def rayleigh_gradient(mesh, u, p: float):
    """``(R(u), dR/du)``."""
    fe = _fe(mesh)
    u = _as_field(fe, u)
    num, gnum = gradient_energy(fe, u, p)
    den, gden = power_mass(fe, u, p)
    if den <= 0:
        raise DegenerateFieldError("zero field has no Rayleigh quotient")
    R = num / den
    return R, (gnum - R * gden) / den


def shift_root(values, weights, p: float) -> float:
    """Constant ``c`` with ``sum w |v - c|^(p-2) (v - c) = 0`` for weighted samples.

    The sum is strictly decreasing in ``c``, so the root is unique.
    """
    v = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        raise DegenerateFieldError("constant samples have no unique shift")

    def g(c):
        d = v - c
        return float(np.sum(w * np.abs(d) ** (p - 2.0) * d))

    return brentq(g, lo, hi, xtol=1e-15 * max(1.0, hi - lo), rtol=_RTOL, maxiter=500)


def constraint_shift(mesh, u, p: float):
    """Return ``(u - c, c)`` with ``int |u - c|^(p-2) (u - c) = 0``."""
    fe = _fe(mesh)
    u = _as_field(fe, u)
    lo, hi = float(u.min()), float(u.max())
    if hi - lo <= 1e-300 or hi - lo <= 1e-14 * max(abs(lo), abs(hi)):
        raise DegenerateFieldError("constant field cannot satisfy the constraint")
    if p == 2.0:
        c = float(np.sum(fe.mass() @ u) / fe.total_area)
        return u - c, c
    uq = kernels.quad_values(u, fe.tri, fe.bary)
    W = fe.W

    def g(c):
        return kernels.constraint(uq, W, c, float(p))[0]

    c = brentq(g, lo, hi, xtol=1e-15 * (hi - lo), rtol=_RTOL, maxiter=500)
    return u - c, c


def constraint_residual(fe: FEData, u, p: float) -> float:
    """``|int |u|^(p-2) u| / int |u|^(p-1)``."""
    uq = kernels.quad_values(u, fe.tri, fe.bary)
    val, scale = kernels.constraint(uq, fe.W, 0.0, float(p))
    return abs(val) / scale if scale > 0 else math.inf


@dataclass
class SolverOptions:
    tolerance: float = 1e-8
    max_iter: int = 2000
    starts: Sequence[str] = ("x", "y", "random")
    seed: int = 0
    patience: int = 3


@dataclass
class EigenResult:
    mu: float
    field: np.ndarray
    constraint_residual: float
    iterations: int
    rayleigh_trace: List[float]
    converged: bool = True
    start: str = ""
    seed: int = 0
    starts: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {"mu": self.mu, "constraint_residual": self.constraint_residual,
                "iterations": self.iterations, "converged": self.converged,
                "start": self.start, "seed": self.seed,
                "trace_monotone": trace_monotone(self.rayleigh_trace),
                "starts": self.starts}


def trace_monotone(trace: Sequence[float]) -> bool:
    return all(b <= a for a, b in zip(trace, trace[1:]))


def _initial_field(fe: FEData, start: str, rng) -> np.ndarray:
    V = fe.mesh.vertices
    if start == "x":
        return V[:, 0].copy()
    if start == "y":
        return V[:, 1].copy()
    if start == "random":
        return rng.standard_normal(fe.n)
    raise ValueError(f"unknown start {start!r}")


def _normalize(fe, u, p):
    d, _ = power_mass(fe, u, p)
    return u / d ** (1.0 / p)


def _descend(fe: FEData, u0: np.ndarray, p: float, opts: SolverOptions, lu) -> EigenResult:
    u, _ = constraint_shift(fe, u0, p)
    u = _normalize(fe, u, p)
    R, g = rayleigh_gradient(fe, u, p)
    trace = [R]
    a_prev = 0.1
    quiet = 0
    converged = False
    it = 0
    z_prev = g_prev = s_prev = None

    def step(a, d):
        trial, _ = constraint_shift(fe, u - a * d, p)
        trial = _normalize(fe, trial, p)
        return (trial,) + rayleigh_gradient(fe, trial, p)

    for it in range(1, opts.max_iter + 1):
        z = lu.solve(g)
        s = z
        if s_prev is not None:
            # Polak-Ribiere+ on the preconditioned gradient
            beta = max(0.0, float(z @ (g - g_prev)) / float(z_prev @ g_prev))
            s = z + beta * s_prev
            if not float(g @ s) > 0:
                s = z
        # step length is measured relative to |u| so the iteration is scale free
        d = s * (np.linalg.norm(u) / np.linalg.norm(s))
        slope = float(g @ d)
        if not slope > 0:
            converged = True
            break
        accepted = False
        a = min(2.0 * a_prev, 1.0)
        for _ in range(60):
            try:
                trial, Rt, gt = step(a, d)
            except DegenerateFieldError:
                a *= 0.5
                continue
            if Rt <= R - 1e-4 * a * slope:
                accepted = True
                break
            # safeguarded quadratic backtracking
            curv = 2.0 * (Rt - R + slope * a)
            a = max(0.1 * a, min(0.5 * a, slope * a * a / curv)) if curv > 0 else 0.5 * a
        if not accepted:
            converged = True
            break
        # one extra trial at the minimizer of the quadratic model, kept if better
        curv = 2.0 * (Rt - R + slope * a)
        if curv > 0:
            a2 = slope * a * a / curv
            if not 0.8 * a <= a2 <= 1.2 * a:
                try:
                    t2, R2, g2 = step(a2, d)
                    if R2 < Rt:
                        trial, Rt, gt, a = t2, R2, g2, a2
                except DegenerateFieldError:
                    pass
        a_prev = a
        rel = (R - Rt) / Rt
        z_prev, g_prev, s_prev = z, g, s
        u, R, g = trial, Rt, gt
        trace.append(R)
        quiet = quiet + 1 if rel < opts.tolerance else 0
        if quiet >= opts.patience:
            converged = True
            break
    return EigenResult(R, u, constraint_residual(fe, u, p), it, trace, converged)


def _preconditioner(fe: FEData):
    sigma = math.pi / fe.total_area
    P = (fe.stiffness() + sigma * fe.mass()).tocsc()
    return splu(P)


def minimize_eigen(mesh, p: float, opts: Optional[SolverOptions] = None) -> EigenResult:
    """Multi-start projected descent; returns the best start."""
    if p < 2:
        raise ValueError("p must be >= 2")
    opts = opts or SolverOptions()
    fe = _fe(mesh)
    lu = _preconditioner(fe)
    rng = np.random.default_rng(opts.seed)
    best = None
    per_start = {}
    for start in opts.starts:
        u0 = _initial_field(fe, start, rng)
        res = _descend(fe, u0, p, opts, lu)
        res.start, res.seed = start, opts.seed
        per_start[start] = {"mu": res.mu, "iterations": res.iterations,
                            "converged": res.converged,
                            "trace_monotone": trace_monotone(res.rayleigh_trace)}
        logger.debug("start %s: mu=%.12g after %d iterations", start, res.mu, res.iterations)
        if best is None or res.mu < best.mu:
            best = res
    best.starts = per_start
    best.converged = all(v["converged"] for v in per_start.values())
    return best


def linear_eigen(mesh, tol: float = 1e-14, max_iter: int = 500) -> tuple:
    """``p = 2`` reference: inverse iteration on ``S x = mu M x`` with constants deflated."""
    fe = _fe(mesh)
    S, M = fe.stiffness(), fe.mass()
    sigma = math.pi / fe.total_area
    lu = splu((S + sigma * M).tocsc())
    one = np.ones(fe.n)
    m1 = M @ one
    mass1 = float(one @ m1)

    def deflate(x):
        return x - (float(m1 @ x) / mass1) * one

    x = deflate(fe.mesh.vertices[:, 0] + 0.5 * fe.mesh.vertices[:, 1])
    mu_old = math.inf
    mu = math.inf
    for _ in range(max_iter):
        x = deflate(lu.solve(M @ x))
        x /= math.sqrt(float(x @ (M @ x)))
        mu = float(x @ (S @ x))
        if abs(mu_old - mu) <= tol * mu:
            break
        mu_old = mu
    return mu, x


def bessel_jp11(tol: float = 1e-15) -> float:
    """First positive zero of ``J_1'`` from the power series of ``J_1``."""

    def j1p(x):
        # J_1(x) = sum (-1)^k (x/2)^(2k+1) / (k! (k+1)!)
        total, k = 0.0, 0
        while True:
            coef = (-1) ** k / (math.factorial(k) * math.factorial(k + 1))
            term = coef * (2 * k + 1) * 0.5 * (0.5 * x) ** (2 * k)
            total += term
            if abs(term) < 1e-18 and k > 5:
                return total
            k += 1

    return brentq(j1p, 1.0, 3.0, xtol=tol)


@dataclass
class ConvergenceStudy:
    rings: List[int]
    h: List[float]
    mu: List[float]
    extrapolated: Optional[float]
    order: Optional[float]
    monotone: bool

    def to_dict(self) -> dict:
        return {"rings": self.rings, "h": self.h, "mu": self.mu,
                "extrapolated": self.extrapolated, "observed_order": self.order,
                "monotone_within_noise": self.monotone}


def richardson(h: Sequence[float], mu: Sequence[float]):
    """Extrapolate the last three (or two, assuming order 2) refinement levels."""
    if len(mu) < 2:
        return None, None
    if len(mu) >= 3:
        d1, d2 = mu[-3] - mu[-2], mu[-2] - mu[-1]
        ratio = h[-2] / h[-1]
        if d1 != 0 and d2 != 0 and d1 / d2 > 1.0:
            order = math.log(d1 / d2) / math.log(ratio)
            return mu[-1] - d2 / (ratio**order - 1.0), order
    ratio = h[-2] / h[-1]
    return mu[-1] + (mu[-1] - mu[-2]) / (ratio**2 - 1.0), 2.0


def convergence_study(m, p: float, ring_list: Sequence[int],
                      opts: Optional[SolverOptions] = None,
                      grading: Optional[float] = None) -> ConvergenceStudy:
    ring_list = list(ring_list)
    if any(b <= a for a, b in zip(ring_list, ring_list[1:])):
        raise ValueError("ring_list must be increasing")
    hs, mus = [], []
    for rings in ring_list:
        mesh = push_forward(mesh_disc(rings, grading), m)
        res = minimize_eigen(mesh, p, opts)
        hs.append(1.0 / rings)
        mus.append(res.mu)
    diffs = np.diff(mus)
    noise = 1e-3 * abs(mus[-1])
    monotone = bool(np.all(diffs <= noise) or np.all(diffs >= -noise))
    ext, order = richardson(hs, mus)
    return ConvergenceStudy(ring_list, hs, mus, ext, order, monotone)


def solve_domain(m, p: float, rings: int = 64, opts: Optional[SolverOptions] = None,
                 grading: Optional[float] = None):
    """Mesh ``phi(D)`` and solve the eigenproblem on it."""
    mesh = push_forward(mesh_disc(rings, grading), m)
    return mesh, minimize_eigen(mesh, p, opts)
