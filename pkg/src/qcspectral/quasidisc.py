"""Reverse Hölder constants and the quasidisc eigenvalue bound.

Integrability exponents live within ~1e-13 of 1, so every function of
``kappa`` (or ``beta``) takes the offset ``eps = kappa - 1`` and all
constants are carried as :class:`LogValue`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import bounds
from .logvalue import LogValue, log1mexp

LN10 = math.log(10.0)
EPS_MIN = 1e-300
BETA_GRID = 64


class DomainError(ValueError):
    """Exponent at or beyond the root of nu = 1."""


def distortion_factor(K: float, reflection: bool = True) -> float:
    """``24 pi^2 K^m`` with ``m = 2`` for quasidiscs (reflection) and 1 otherwise."""
    if K < 1:
        raise bounds.ParameterError("K must be >= 1")
    return 24.0 * math.pi**2 * (K * K if reflection else K)


def exp_exponent(K: float, reflection: bool = True) -> float:
    """``K^m pi^2 (2 + pi^2)^2 / (2 log 3)``."""
    Km = K * K if reflection else K
    return Km * math.pi**2 * (2.0 + math.pi**2) ** 2 / (2.0 * math.log(3.0))


def _offset(kappa, eps):
    if eps is None:
        if kappa is None:
            raise TypeError("give kappa or eps")
        eps = float(kappa) - 1.0
    if not eps > 0:
        raise bounds.ParameterError("kappa must exceed 1")
    return float(eps)


def ln_nu(eps: float, factor: float) -> float:
    """``ln nu(1 + eps)``; increasing in ``eps``."""
    kappa = 1.0 + eps
    return (8.0 * kappa * LN10 + math.log(2.0 * eps) - math.log1p(2.0 * eps)
            + 2.0 * kappa * math.log(factor))


def nu_log(kappa: Optional[float], factor: float, eps: Optional[float] = None) -> LogValue:
    """``nu = 10^(8k) (2k-2)/(2k-1) factor^(2k)`` as a LogValue."""
    return LogValue(1, ln_nu(_offset(kappa, eps), factor))


def _ln_c(eps: float, factor: float) -> float:
    lnu = ln_nu(eps, factor)
    if lnu >= 0:
        raise DomainError(f"kappa = 1 + {eps:.6g} is beyond the root of nu = 1")
    kappa = 1.0 + eps
    return 6.0 * LN10 - (math.log1p(2.0 * eps) + log1mexp(lnu)) / (2.0 * kappa)


def c_kappa_log(kappa: Optional[float], factor: float, eps: Optional[float] = None) -> LogValue:
    """``C = 10^6 / [(2k-1)(1-nu)]^(1/(2k))`` as a LogValue."""
    return LogValue(1, _ln_c(_offset(kappa, eps), factor))


def beta_tilde(K: float) -> float:
    """Offset ``eps`` of the root ``beta~ = 1 + eps`` of ``nu(beta) = 1`` (factor uses K^2)."""
    factor = distortion_factor(K, reflection=True)
    lo, hi = math.log(EPS_MIN), 0.0
    if ln_nu(math.exp(hi), factor) <= 0:
        raise RuntimeError("nu does not reach 1 below beta = 2")
    # bisection in log(eps), then in eps
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ln_nu(math.exp(mid), factor) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-3:
            break
    a, b = math.exp(lo), math.exp(hi)
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        val = ln_nu(mid, factor)
        if val < 0:
            a = mid
        else:
            b = mid
    return a if abs(ln_nu(a, factor)) <= abs(ln_nu(b, factor)) else b


@dataclass(frozen=True)
class BetaStar:
    eps: float
    source: str  # "beta_tilde" or "K/(K-1)"

    @property
    def value(self) -> float:
        return 1.0 + self.eps


def beta_star(K: float) -> BetaStar:
    """``min(K/(K-1), beta~)`` as an offset from 1; ``K = 1`` gives ``beta~``."""
    if not K >= 1:
        raise bounds.ParameterError("K must be >= 1")
    eps_t = beta_tilde(K)
    if K > 1 and 1.0 / (K - 1.0) < eps_t:
        return BetaStar(1.0 / (K - 1.0), "K/(K-1)")
    return BetaStar(eps_t, "beta_tilde")


def reverse_holder_rhs(kappa: Optional[float], K: float, area: float, reflection: bool,
                       eps: Optional[float] = None) -> LogValue:
    """Upper bound for ``(int_D |J|^kappa)^(1/kappa)``.

    ``C^2 K^m pi^(1/kappa - 1) / 4 * exp(K^m pi^2 (2+pi^2)^2 / (2 log 3)) * area``,
    ``m = 2`` with ``reflection`` and 1 without.
    """
    eps = _offset(kappa, eps)
    factor = distortion_factor(K, reflection)
    m = 2 if reflection else 1
    kappa = 1.0 + eps
    ln = (2.0 * _ln_c(eps, factor) + m * math.log(K)
          + (1.0 / kappa - 1.0) * math.log(math.pi) - math.log(4.0)
          + exp_exponent(K, reflection) + math.log(area))
    return LogValue(1, ln)


def _ln_inner(eps: float, p: float, factor: float) -> float:
    """Log of ``(inf_q ratio^(p - p/q + p/r))^(-1) * C_beta^(-2)`` at ``beta = 1 + eps``."""
    lnu = ln_nu(eps, factor)
    if lnu >= 0:
        return -math.inf
    inv_r, _ = bounds.exponents_from_offset(p, eps)
    _, log_b = bounds.infimum_log_gap(p, inv_r)
    return -(log_b - p * math.log(2.0)) - 2.0 * _ln_c(eps, factor)


@dataclass(frozen=True)
class QuasidiscConstants:
    K: float
    p: float
    beta_tilde_offset: float
    beta_star: BetaStar
    mp: LogValue
    mp_star: LogValue
    beta_opt_offset: float
    q_opt: float
    gap_opt: float
    boundary_attained: bool

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "p": self.p,
            "beta_tilde_offset": self.beta_tilde_offset,
            "beta_star_offset": self.beta_star.eps,
            "beta_star_source": self.beta_star.source,
            "ln_Mp": self.mp.ln,
            "ln_Mp_star": self.mp_star.ln,
            "Mp": self.mp.to_dict(),
            "Mp_star": self.mp_star.to_dict(),
            "Mp_decimal": self.mp.decimal(),
            "Mp_star_decimal": self.mp_star.decimal(),
            "beta_opt_offset": self.beta_opt_offset,
            "q_opt": self.q_opt,
            "q_opt_gap": self.gap_opt,
            "boundary_attained": self.boundary_attained,
        }


def mp_constant(K: float, p: float) -> QuasidiscConstants:
    """``M_p(K)`` and ``M_p*(K) = M_p(K) pi^(-p/2)`` in log form.

    The optimization over ``(beta, q)`` maximizes the reciprocal of the
    beta-regular bound, so ``beta`` runs over ``(1, beta*)`` on a log grid
    in ``beta - 1`` refined by golden section, and ``q`` over ``(q*, 2]``.
    """
    if not p > 2:
        raise bounds.ParameterError("p must exceed 2")
    bstar = beta_star(K)
    eps_t = beta_tilde(K)
    factor = distortion_factor(K, reflection=True)

    def neg(t):
        return -_ln_inner(math.exp(t), p, factor)

    lo, hi = math.log(EPS_MIN), math.log(bstar.eps)
    grid = np.linspace(lo, hi, BETA_GRID)
    vals = np.array([neg(t) for t in grid])
    i = int(np.argmin(vals))  # first minimum = smallest eps on ties
    best_t, best_v = float(grid[i]), float(vals[i])
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, BETA_GRID - 1)]
    t, v = bounds._golden(neg, float(a), float(b), tol=1e-15)
    if v < best_v:
        best_t, best_v = t, v
    eps_opt = math.exp(best_t)
    inv_r, _ = bounds.exponents_from_offset(p, eps_opt)
    gap, _ = bounds.infimum_log_gap(p, inv_r)
    q_opt = 1.0 / (0.5 + (inv_r - gap))

    ln_prefix = (0.5 * p * math.log(math.pi) - (p - 2.0) * math.log(2.0)
                 - (0.5 * p + 2.0) * math.log(K) - exp_exponent(K, reflection=True))
    mp = LogValue(1, ln_prefix - best_v)
    mp_star = mp * LogValue(1, -0.5 * p * math.log(math.pi))
    return QuasidiscConstants(K, p, eps_t, bstar, mp, mp_star, eps_opt, q_opt, gap,
                              boundary_attained=(i == 0 and best_t <= grid[0] + 1e-9))


def quasidisc_lower_bound(K: float, p: float, area: float,
                          constants: Optional[QuasidiscConstants] = None
                          ) -> Tuple[LogValue, LogValue]:
    """``(M_p / area^(p/2), M_p* / R*^p)`` with ``R* = sqrt(area / pi)``."""
    if not area > 0:
        raise bounds.ParameterError("area must be positive")
    c = constants or mp_constant(K, p)
    mu_lower = c.mp / LogValue.from_float(area) ** (0.5 * p)
    r_star = LogValue(1, 0.5 * (math.log(area) - math.log(math.pi)))
    via_radius = c.mp_star / r_star**p
    return mu_lower, via_radius
