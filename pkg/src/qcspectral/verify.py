"""Compare theoretical lower bounds on ``mu_p`` with the finite-element value."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from . import bounds, discquad, quasidisc
from . import maps as _maps
from .eigsolver import EigenResult, SolverOptions, solve_domain
from .logvalue import LogValue

DISCRETIZATION_ALLOWANCE = 0.02

VERIFY_VARIANTS = ("auto", "measure-preserving", "measure-preserving-inf",
                   "measure-preserving-beta", "beta-regular", "inf-regular",
                   "intro-form", "quasidisc", "convex")


@dataclass
class VerifyReport:
    map: dict
    K: float
    p: float
    variant: str
    mu_lower: LogValue
    mu_numeric: float
    converged: bool
    slack: LogValue  # mu_numeric / mu_lower
    status: str
    bound: dict = field(default_factory=dict)
    eigen: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "map": self.map,
            "K": self.K,
            "p": self.p,
            "variant": self.variant,
            "mu_lower": self.mu_lower.to_dict(),
            "mu_lower_decimal": self.mu_lower.decimal(),
            "mu_numeric": self.mu_numeric,
            "solver_converged": self.converged,
            "slack_ratio": self.slack.to_dict(),
            "slack_ratio_decimal": self.slack.decimal(),
            "status": self.status,
            "bound": self.bound,
            "eigen": self.eigen,
        }


def resolve_variant(m, variant: str, beta) -> str:
    if variant == "auto":
        return "measure-preserving" if m.measure_preserving else "inf-regular"
    if variant not in VERIFY_VARIANTS:
        raise bounds.ParameterError(f"unknown variant {variant!r}")
    return variant


def theoretical_lower(m, p: float, variant: str = "auto", beta="inf",
                      spec: discquad.QuadratureSpec = discquad.DEFAULT_SPEC):
    """Return ``(mu_lower as LogValue, detail dict)`` for a map and variant."""
    variant = resolve_variant(m, variant, beta)
    info = _maps.map_info(m)
    beta = bounds.parse_beta(beta)
    if variant.startswith("measure-preserving") or variant == "intro-form":
        if not m.measure_preserving:
            raise bounds.ParameterError(f"{m.kind} is not measure preserving")
        if variant == "measure-preserving-inf":
            beta = bounds.INF
        if variant == "intro-form":
            rep = bounds.bound_intro_form(p, beta, info.K)
        else:
            rep = bounds.bound_measure_preserving(p, beta, info.K)
        return LogValue.from_float(rep.mu_lower), rep.to_dict()
    if variant == "inf-regular":
        area = discquad.image_area(m, spec)
        sup = discquad.jacobian_sup(m, spec)
        rep = bounds.bound_inf_regular(p, info.K, area, sup.value)
        d = rep.to_dict()
        d["jacobian_sup_analytic"] = sup.analytic
        return LogValue.from_float(rep.mu_lower), d
    if variant == "beta-regular":
        if math.isinf(beta):
            raise bounds.ParameterError("beta-regular variant needs a finite --beta")
        area = discquad.image_area(m, spec)
        jn = discquad.integrate_disc_checked(
            lambda z: abs(_maps.jacobian(m, z)) ** beta, spec)
        jnorm = jn.value ** (1.0 / beta)
        rep = bounds.bound_beta_regular(p, beta, info.K, area, jnorm)
        d = rep.to_dict()
        d["quadrature"] = jn.to_dict()
        return LogValue.from_float(rep.mu_lower), d
    if variant == "quasidisc":
        area = info.area if info.area is not None else discquad.image_area(m, spec)
        consts = quasidisc.mp_constant(info.K, p)
        mu_lower, via_radius = quasidisc.quasidisc_lower_bound(info.K, p, area, consts)
        d = consts.to_dict()
        d.update({"area": area, "mu_lower_via_radius": via_radius.to_dict()})
        return mu_lower, d
    # convex
    diam = _maps.diameter_if_convex(m)
    if diam is None:
        raise bounds.ParameterError(f"{m.kind} image is not a catalog convex domain")
    val = bounds.convex_lower_bound(p, diam)
    return LogValue.from_float(val), {"diameter": diam, "pi_p": bounds.pi_p(p),
                                      "mu_lower": val}


def verify_bound(m, p: float, variant: str = "auto", beta="inf", rings: int = 64,
                 opts: Optional[SolverOptions] = None,
                 eigen: Optional[EigenResult] = None) -> VerifyReport:
    """Pass iff the solver converged and ``mu_numeric >= 0.98 mu_lower``."""
    variant = resolve_variant(m, variant, beta)
    if variant != "convex" and not p > 2:
        raise bounds.ParameterError("bound variants need p > 2")
    mu_lower, detail = theoretical_lower(m, p, variant, beta)
    if eigen is None:
        _, eigen = solve_domain(m, p, rings, opts)
    mu = LogValue.from_float(eigen.mu)
    slack = mu / mu_lower
    ok = mu >= mu_lower * (1.0 - DISCRETIZATION_ALLOWANCE)
    if not eigen.converged:
        status = "inconclusive"
    else:
        status = "pass" if ok else "fail"
    return VerifyReport(m.to_dict(), _maps.map_info(m).K, p, variant, mu_lower, eigen.mu,
                        eigen.converged, slack, status, detail, eigen.summary())
