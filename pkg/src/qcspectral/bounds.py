"""Upper bounds on ``1/mu_p`` for quasiconformal regular domains.

The q-dependent factor of every bound is

    bracket(q) = 2^p * ((1 - 1/q + 1/r) / (1/2 - 1/q + 1/r)) ** (p - p/q + p/r)

for ``q`` in ``(q*, 2]`` with ``1/q* = 1/2 + 1/r``.  Writing
``gap = 1/q* - 1/q`` (which runs over ``(0, 1/r]``) turns it into
``2^p * ((1/2 + gap)/gap) ** (p (1/2 + gap))``, a form that stays well
conditioned when ``r`` is huge and ``q*`` is indistinguishable from 2.
The searches below work in that variable.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

INF = math.inf
GRID_POINTS = 1024
LEFT_OFFSET = 1e-9  # relative offset from q* of the left end of the search

VARIANTS = ("beta-regular", "inf-regular", "measure-preserving-beta",
            "measure-preserving-inf", "intro-form")


class ParameterError(ValueError):
    pass


def parse_beta(beta) -> float:
    """Accept a number or the strings ``"inf"``/``"infinity"``."""
    if isinstance(beta, str):
        if beta.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        beta = float(beta)
    return float(beta)


def exponents(p: float, beta) -> Tuple[float, float]:
    """``(r, q*)`` for integrability exponent ``beta`` (``inf`` allowed)."""
    beta = parse_beta(beta)
    if not p > 2:
        raise ParameterError(f"p must exceed 2 (got {p})")
    if not beta > 1:
        raise ParameterError(f"beta must exceed 1 (got {beta})")
    if math.isinf(beta):
        return float(p), 2.0 * p / (p + 2.0)
    r = p * beta / (beta - 1.0)
    q_star = 2.0 * beta * p / (beta * p + 2.0 * (beta - 1.0))
    return r, q_star


def exponents_from_offset(p: float, eps: float) -> Tuple[float, float]:
    """``(1/r, 1/q*)`` for ``beta = 1 + eps``, exact for tiny ``eps``."""
    inv_r = eps / (p * (1.0 + eps))
    return inv_r, 0.5 + inv_r


def pi_p(p: float) -> float:
    """``2 pi (p-1)^(1/p) / (p sin(pi/p))``."""
    if not p > 1:
        raise ParameterError("pi_p needs p > 1")
    return 2.0 * math.pi * (p - 1.0) ** (1.0 / p) / (p * math.sin(math.pi / p))


def convex_lower_bound(p: float, diameter: float) -> float:
    """Lower bound ``(pi_p / d)^p`` on ``mu_p`` of a convex domain of diameter ``d``.

    Convexity is the caller's responsibility.
    """
    if not diameter > 0:
        raise ParameterError("diameter must be positive")
    return (pi_p(p) / diameter) ** p


def poincare_constant_upper(r: float, q: float) -> float:
    """Upper estimate of the (r, q) Poincare-Sobolev constant of the unit disc."""
    delta = 1.0 / q - 1.0 / r
    if delta < 0 or delta >= 0.5:
        raise ParameterError(f"need 0 <= 1/q - 1/r < 1/2 (got {delta})")
    return (2.0 ** -delta * ((1.0 - delta) / (1.0 - 2.0 * delta)) ** (1.0 - delta)
            * math.pi ** delta)


def log_bracket_gap(p: float, gap):
    """Natural log of the bracket as a function of ``gap = 1/q* - 1/q``."""
    gap = np.asarray(gap, dtype=float)
    out = p * math.log(2.0) + p * (0.5 + gap) * np.log1p(0.5 / gap)
    return float(out) if out.ndim == 0 else out


def q_bracket(p: float, q: float, r: float) -> float:
    inv_q_star = 0.5 + 1.0 / r
    gap = inv_q_star - 1.0 / q
    if not gap > 0:
        raise ParameterError(f"q = {q} must exceed q* = {1.0 / inv_q_star}")
    if q > 2.0:
        raise ParameterError("q must not exceed 2")
    return math.exp(log_bracket_gap(p, gap))


def _golden(f: Callable[[float], float], a: float, b: float, tol: float = 1e-13,
            max_iter: int = 200) -> Tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def minimize_on_gap(logf: Callable, gap_lo: float, gap_hi: float,
                    points: int = GRID_POINTS) -> Tuple[float, float]:
    """Minimize ``logf`` over ``[gap_lo, gap_hi]``: grid, then golden section.

    Unimodality is not assumed; golden section only refines the best grid
    cell.  Ties go to the larger gap (the smaller q).
    """
    grid = np.linspace(gap_lo, gap_hi, points)
    vals = np.asarray(logf(grid), dtype=float)
    # largest gap = smallest q wins ties
    i = points - 1 - int(np.argmin(vals[::-1]))
    best_g, best_v = float(grid[i]), float(vals[i])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, points - 1)]
    if hi > lo:
        g, v = _golden(lambda t: float(logf(t)), float(lo), float(hi))
        if v < best_v:
            best_g, best_v = g, v
    return best_g, best_v


def infimum_log_gap(p: float, inv_r: float) -> Tuple[float, float]:
    """Minimizing gap and log of the minimal bracket over ``(0, 1/r]``."""
    inv_q_star = 0.5 + inv_r
    gap_lo = min(LEFT_OFFSET * inv_q_star, inv_r)
    return minimize_on_gap(lambda g: log_bracket_gap(p, g), gap_lo, inv_r)


def infimum_over_q(p: float, r: float, q_star: float) -> Tuple[float, float]:
    """``(q_opt, min bracket)`` over ``q`` in ``(q*, 2]``."""
    inv_r = 1.0 / r
    if not math.isclose(1.0 / q_star, 0.5 + inv_r, rel_tol=1e-12):
        raise ParameterError("inconsistent exponents: need 1/q* = 1/2 + 1/r")
    gap, logv = infimum_log_gap(p, inv_r)
    return 1.0 / (0.5 + (inv_r - gap)), math.exp(logv)


@dataclass
class BoundReport:
    """Upper bound ``rhs`` on ``1/mu_p`` and the implied lower bound on ``mu_p``."""

    p: float
    beta: float
    K: float
    r: float
    q_star: float
    q_opt: float
    rhs: float
    mu_lower: float
    variant: str
    ingredients: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["beta"] = "inf" if math.isinf(self.beta) else self.beta
        return d


def _check_common(p, K):
    if not p > 2:
        raise ParameterError(f"p must exceed 2 (got {p})")
    if not K >= 1:
        raise ParameterError(f"K must be >= 1 (got {K})")


def bound_beta_regular(p: float, beta: float, K: float, area: float,
                       jnorm: float) -> BoundReport:
    """Bound for a K-quasiconformal beta-regular domain, finite ``beta``."""
    _check_common(p, K)
    beta = parse_beta(beta)
    if math.isinf(beta):
        raise ParameterError("use bound_inf_regular for beta = inf")
    if not (area > 0 and jnorm > 0):
        raise ParameterError("area and Jacobian norm must be positive")
    r, q_star = exponents(p, beta)
    q_opt, inf_b = infimum_over_q(p, r, q_star)
    rhs = (inf_b * math.pi ** (p / r - p / 2.0) * K ** (p / 2.0)
           * area ** ((p - 2.0) / 2.0) * jnorm)
    return BoundReport(p, beta, K, r, q_star, q_opt, rhs, 1.0 / rhs, "beta-regular",
                       {"area": area, "jnorm": jnorm, "bracket": inf_b})


def bound_inf_regular(p: float, K: float, area: float, jsup: float) -> BoundReport:
    """Bound for a K-quasiconformal domain with essentially bounded Jacobian."""
    _check_common(p, K)
    if not (area > 0 and jsup > 0):
        raise ParameterError("area and Jacobian sup must be positive")
    r, q_star = exponents(p, INF)
    q_opt, inf_b = infimum_over_q(p, r, q_star)
    rhs = (inf_b * math.pi ** (1.0 - p / 2.0) * K ** (p / 2.0)
           * area ** ((p - 2.0) / 2.0) * jsup)
    return BoundReport(p, INF, K, r, q_star, q_opt, rhs, 1.0 / rhs, "inf-regular",
                       {"area": area, "jsup": jsup, "bracket": inf_b})


def bound_measure_preserving(p: float, beta, K: float) -> BoundReport:
    """Bound for domains generated by a measure preserving K-quasiconformal map."""
    _check_common(p, K)
    beta = parse_beta(beta)
    r, q_star = exponents(p, beta)
    q_opt, inf_b = infimum_over_q(p, r, q_star)
    rhs = inf_b * K ** (p / 2.0)
    variant = "measure-preserving-inf" if math.isinf(beta) else "measure-preserving-beta"
    jnorm = 1.0 if math.isinf(beta) else math.pi ** (1.0 / beta)
    return BoundReport(p, beta, K, r, q_star, q_opt, rhs, 1.0 / rhs, variant,
                       {"area": math.pi, "jnorm": jnorm, "bracket": inf_b})


def bound_intro_form(p: float, beta, K: float) -> BoundReport:
    """Alternative measure preserving form built on the Poincare-Sobolev estimate.

    ``rhs = inf_q {B_{r,q}^p pi^(p/q)} K^(p/2) pi^(1/beta - 1)``.
    """
    _check_common(p, K)
    beta = parse_beta(beta)
    r, q_star = exponents(p, beta)
    inv_r = 1.0 / r
    inv_q_star = 0.5 + inv_r

    def logf(gap):
        gap = np.asarray(gap, dtype=float)
        inv_q = inv_q_star - gap
        delta = inv_q - inv_r  # = 1/2 - gap
        logB = (-delta * math.log(2.0)
                + (1.0 - delta) * np.log((1.0 - delta) / (2.0 * gap))
                + delta * math.log(math.pi))
        return p * logB + p * inv_q * math.log(math.pi)

    gap_lo = min(LEFT_OFFSET * inv_q_star, inv_r)
    gap, logv = minimize_on_gap(logf, gap_lo, inv_r)
    inv_beta = 0.0 if math.isinf(beta) else 1.0 / beta
    value = math.exp(logv)
    rhs = value * K ** (p / 2.0) * math.pi ** (inv_beta - 1.0)
    q_opt = 1.0 / (0.5 + (inv_r - gap))
    return BoundReport(p, beta, K, r, q_star, q_opt, rhs, 1.0 / rhs, "intro-form",
                       {"area": math.pi, "jnorm": math.pi ** inv_beta,
                        "poincare_term": value})
