"""Catalog of quasiconformal maps of the unit disc.

Every map is given in closed form together with its Wirtinger derivatives,
so Jacobians and distortion coefficients are evaluated exactly rather than
by differencing.  Points are complex numbers (scalars or numpy arrays).

Kinds
-----
identity
    ``phi(z) = z``.
epicycloid
    ``A (z + z**n / n) + B (conj(z) + conj(z)**n / n)`` with ``A > B >= 0``.
ellipse-shear
    ``sqrt(a**2 + 1) z + a conj(z)``, measure preserving.
rose-petal
    ``sqrt(2) (1 + z)**(3/4) (1 + conj(z))**(1/4)``, measure preserving.
linear-shear
    ``(x, y) -> (a x + f(y), y / a)``, measure preserving, with ``f`` chosen
    from a small set of closed-form profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

KINDS = ("identity", "epicycloid", "ellipse-shear", "rose-petal", "linear-shear")
PROFILES = ("sine", "poly")

# exclusion radius around the rose-petal derivative singularity at z = -1
ROSE_SINGULAR_RADIUS = 1e-8
DISC_TOLERANCE = 1e-12


class MapError(ValueError):
    """Invalid map parameters or evaluation outside the map's domain."""


class SingularityError(MapError):
    """Derivative requested at a point where it is unbounded."""


class OrientationError(MapError):
    """The map is not orientation preserving at the requested point."""


@dataclass(frozen=True)
class MapDescriptor:
    """Immutable description of one catalog map.

    ``params`` holds the named real parameters of the kind.  For
    ``linear-shear`` the profile is selected by ``profile`` (``"sine"`` gives
    ``f(y) = amp * sin(omega * y)``, ``"poly"`` gives ``f(y) = amp * y**deg``).
    """

    kind: str
    params: Dict[str, float] = field(default_factory=dict)
    profile: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MapError(f"unknown map kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        params = {k: float(v) for k, v in self.params.items()}
        defaults = _DEFAULTS[self.kind]
        unknown = set(params) - set(defaults)
        if unknown:
            raise MapError(f"unknown parameters for {self.kind}: {sorted(unknown)}")
        merged = dict(defaults)
        merged.update(params)
        object.__setattr__(self, "params", merged)
        if self.kind == "linear-shear":
            prof = self.profile or "sine"
            if prof not in PROFILES:
                raise MapError(f"unknown shear profile {prof!r}")
            object.__setattr__(self, "profile", prof)
        elif self.profile is not None:
            raise MapError(f"profile only applies to linear-shear, not {self.kind}")
        _validate(self)

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items())), self.profile))

    @property
    def measure_preserving(self) -> bool:
        # analytic flag; the epicycloid is never flagged
        return self.kind in ("identity", "ellipse-shear", "rose-petal", "linear-shear")

    def to_record(self) -> str:
        """Serialize as ``kind:key=value,...``; inverse of :func:`parse_map`."""
        items = [f"{k}={_fmt(v)}" for k, v in sorted(self.params.items())]
        if self.profile is not None:
            items.insert(0, f"profile={self.profile}")
        return self.kind + (":" + ",".join(items) if items else "")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "params": dict(sorted(self.params.items()))}
        if self.profile is not None:
            d["profile"] = self.profile
        return d


_DEFAULTS: Dict[str, Dict[str, float]] = {
    "identity": {},
    "epicycloid": {"A": 1.0, "B": 0.0, "n": 2.0},
    "ellipse-shear": {"a": 0.0},
    "rose-petal": {},
    "linear-shear": {"a": 1.0, "amp": 0.5, "omega": 1.0, "deg": 3.0},
}


def _fmt(v: float) -> str:
    return repr(int(v)) if float(v).is_integer() else repr(float(v))


def _validate(m: MapDescriptor) -> None:
    p = m.params
    if m.kind == "epicycloid":
        n = p["n"]
        if not (p["A"] > p["B"] >= 0):
            raise MapError("epicycloid requires A > B >= 0")
        if n < 1 or not float(n).is_integer():
            raise MapError("epicycloid requires an integer n >= 1")
    elif m.kind == "ellipse-shear":
        if not p["a"] >= 0:
            raise MapError("ellipse-shear requires a >= 0")
    elif m.kind == "linear-shear":
        if not p["a"] > 0:
            raise MapError("linear-shear requires a > 0")
        if not math.isfinite(p["amp"]) or not math.isfinite(p["omega"]):
            raise MapError("linear-shear profile parameters must be finite")
        if m.profile == "poly" and (p["deg"] < 1 or not float(p["deg"]).is_integer()):
            raise MapError("poly profile requires an integer deg >= 1")


def parse_map(record: str) -> MapDescriptor:
    """Parse ``kind`` or ``kind:key=value,...`` into a descriptor.

    >>> parse_map("ellipse-shear:a=0.5").params["a"]
    0.5
    """
    kind, _, rest = record.strip().partition(":")
    params: Dict[str, float] = {}
    profile = None
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise MapError(f"malformed map parameter {item!r}; expected key=value")
        key = key.strip()
        if key == "profile":
            profile = value.strip()
            continue
        try:
            params[key] = float(value)
        except ValueError:
            raise MapError(f"parameter {key} is not numeric: {value!r}") from None
    return MapDescriptor(kind.strip(), params, profile)


def map_from_dict(d: dict) -> MapDescriptor:
    return MapDescriptor(d["kind"], d.get("params", {}), d.get("profile"))


# ---------------------------------------------------------------------------
# shear profiles


def _profile(m: MapDescriptor, y):
    p = m.params
    if m.profile == "sine":
        return p["amp"] * np.sin(p["omega"] * y)
    return p["amp"] * y ** int(p["deg"])


def _profile_prime(m: MapDescriptor, y):
    p = m.params
    if m.profile == "sine":
        return p["amp"] * p["omega"] * np.cos(p["omega"] * y)
    k = int(p["deg"])
    return p["amp"] * k * y ** (k - 1)


def _profile_prime_sup(m: MapDescriptor) -> float:
    # sup of |f'| over y in [-1, 1]
    p = m.params
    if m.profile == "sine":
        return abs(p["amp"] * p["omega"])
    return abs(p["amp"]) * int(p["deg"])


# ---------------------------------------------------------------------------
# pointwise evaluation


def _check_disc(z, strict: bool):
    az = np.abs(z)
    bad = az >= 1.0 if strict else az > 1.0 + DISC_TOLERANCE
    if np.any(bad):
        where = "open" if strict else "closed"
        raise MapError(f"point outside the {where} unit disc (|z| = {np.max(az):.6g})")


def evaluate(m: MapDescriptor, z):
    """Image ``phi(z)`` of points in the closed unit disc."""
    z = np.asarray(z, dtype=complex)
    _check_disc(z, strict=False)
    p = m.params
    if m.kind == "identity":
        w = z.copy()
    elif m.kind == "epicycloid":
        n = int(p["n"])
        zb = np.conj(z)
        w = p["A"] * (z + z**n / n) + p["B"] * (zb + zb**n / n)
    elif m.kind == "ellipse-shear":
        a = p["a"]
        w = math.sqrt(a * a + 1.0) * z + a * np.conj(z)
    elif m.kind == "rose-petal":
        # principal branches; Re(1 + z) >= 0 on the closed disc
        w = math.sqrt(2.0) * (1.0 + z) ** 0.75 * (1.0 + np.conj(z)) ** 0.25
    else:
        a = p["a"]
        x, y = z.real, z.imag
        w = (a * x + _profile(m, y)) + 1j * (y / a)
    return w[()] if w.ndim == 0 else w


def wirtinger(m: MapDescriptor, z) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(phi_z, phi_zbar)`` at interior points."""
    z = np.asarray(z, dtype=complex)
    _check_disc(z, strict=True)
    p = m.params
    one = np.ones_like(z)
    if m.kind == "identity":
        dz, dzb = one, 0 * one
    elif m.kind == "epicycloid":
        n = int(p["n"])
        dz = p["A"] * (1.0 + z ** (n - 1))
        dzb = p["B"] * (1.0 + np.conj(z) ** (n - 1))
    elif m.kind == "ellipse-shear":
        a = p["a"]
        dz, dzb = math.sqrt(a * a + 1.0) * one, a * one
    elif m.kind == "rose-petal":
        if np.any(np.abs(1.0 + z) < ROSE_SINGULAR_RADIUS):
            raise SingularityError("rose-petal derivatives are unbounded at z = -1")
        s = 1.0 + z
        sb = np.conj(s)
        dz = math.sqrt(2.0) * 0.75 * s**-0.25 * sb**0.25
        dzb = math.sqrt(2.0) * 0.25 * s**0.75 * sb**-0.75
    else:
        a = p["a"]
        fp = _profile_prime(m, z.imag)
        # phi_x = a, phi_y = f'(y) + i/a
        dz = 0.5 * (a + 1.0 / a - 1j * fp)
        dzb = 0.5 * (a - 1.0 / a + 1j * fp)
    if z.ndim == 0:
        return complex(dz), complex(dzb)
    return dz, dzb


def jacobian(m: MapDescriptor, z):
    """``|phi_z|**2 - |phi_zbar|**2``.

    The rose-petal Jacobian is extended by its constant value 1 at ``z = -1``.
    """
    if m.kind == "rose-petal":
        z = np.asarray(z, dtype=complex)
        _check_disc(z, strict=True)
        near = np.abs(1.0 + z) < ROSE_SINGULAR_RADIUS
        if np.any(near):
            safe = np.where(near, 0.0, z)
            out = np.asarray(jacobian(m, safe), dtype=float)
            out = np.where(near, 1.0, out)
            return float(out) if out.ndim == 0 else out
    dz, dzb = wirtinger(m, z)
    J = np.abs(dz) ** 2 - np.abs(dzb) ** 2
    return float(J) if np.ndim(J) == 0 else J


def local_distortion(m: MapDescriptor, z):
    """``(|phi_z| + |phi_zbar|) / (|phi_z| - |phi_zbar|)``, at least 1."""
    dz, dzb = wirtinger(m, z)
    a, b = np.abs(dz), np.abs(dzb)
    if np.any(a <= b):
        raise OrientationError("|phi_z| <= |phi_zbar|: map not orientation preserving here")
    k = (a + b) / (a - b)
    return float(k) if np.ndim(k) == 0 else k


def shear_lambda(fprime, a: float = 1.0):
    """Largest eigenvalue of ``D D^T`` for ``D = [[a, f'], [0, 1/a]]``.

    For ``a = 1`` this is ``(1 + f'^2/2)(1 + sqrt(1 - 4/(2 + f'^2)^2))``.
    """
    fprime = np.asarray(fprime, dtype=float)
    if a == 1.0:
        s = 2.0 + fprime**2
        lam = 0.5 * s * (1.0 + np.sqrt(1.0 - 4.0 / s**2))
    else:
        t = a * a + fprime**2 + 1.0 / (a * a)
        lam = 0.5 * (t + np.sqrt(t * t - 4.0))
    return float(lam) if lam.ndim == 0 else lam


@dataclass(frozen=True)
class MapInfo:
    K: float
    area: Optional[float]
    measure_preserving: bool
    K_source: str = "analytic"


def map_info(m: MapDescriptor) -> MapInfo:
    """Analytic distortion coefficient and image area of a catalog map."""
    p = m.params
    if m.kind == "identity":
        return MapInfo(1.0, math.pi, True)
    if m.kind == "epicycloid":
        A, B, n = p["A"], p["B"], int(p["n"])
        K = (A + B) / (A - B)
        # the (n+1)/n factor needs n >= 2; for n = 1 the integrand is 4(A^2 - B^2)
        factor = 4.0 if n == 1 else (n + 1) / n
        return MapInfo(K, (A * A - B * B) * factor * math.pi, False)
    if m.kind == "ellipse-shear":
        a = p["a"]
        s = math.sqrt(a * a + 1.0)
        return MapInfo((s + a) / (s - a), math.pi, True)
    if m.kind == "rose-petal":
        return MapInfo(2.0, math.pi, True)
    # K = sup of lambda / J over the profile range, J = 1
    K = shear_lambda(_profile_prime_sup(m), p["a"])
    return MapInfo(K, math.pi, True, K_source="sup-over-profile")


def jacobian_sup_analytic(m: MapDescriptor) -> Optional[float]:
    """Analytic essential supremum of the Jacobian on the disc, when known."""
    if m.measure_preserving:
        return 1.0
    if m.kind == "epicycloid":
        A, B = m.params["A"], m.params["B"]
        return 4.0 * (A * A - B * B)
    return None


def boundary(m: MapDescriptor, n: int = 512) -> np.ndarray:
    """Image of ``n`` equally spaced points of the unit circle."""
    t = 2.0 * np.pi * np.arange(n) / n
    return evaluate(m, np.exp(1j * t))


def diameter_if_convex(m: MapDescriptor) -> Optional[float]:
    """Diameter of the image for catalog maps whose image is convex."""
    if m.kind == "identity":
        return 2.0
    if m.kind == "ellipse-shear":
        a = m.params["a"]
        return 2.0 * (math.sqrt(a * a + 1.0) + a)
    return None


def catalog() -> list:
    """Static description of the five map kinds."""
    return [
        {"kind": "identity", "formula": "z", "K": "1", "area": "pi",
         "measure_preserving": True},
        {"kind": "epicycloid", "formula": "A(z + z^n/n) + B(zbar + zbar^n/n)",
         "K": "(A+B)/(A-B)", "area": "(A^2-B^2)(n+1)pi/n  (n>=2)",
         "measure_preserving": False},
        {"kind": "ellipse-shear", "formula": "sqrt(a^2+1) z + a zbar",
         "K": "(sqrt(a^2+1)+a)/(sqrt(a^2+1)-a)", "area": "pi",
         "measure_preserving": True},
        {"kind": "rose-petal", "formula": "sqrt(2)(1+z)^(3/4)(1+zbar)^(1/4)",
         "K": "2", "area": "pi", "measure_preserving": True},
        {"kind": "linear-shear", "formula": "(a x + f(y), y/a)",
         "K": "sup_y lambda_max(D D^T)", "area": "pi", "measure_preserving": True},
    ]
