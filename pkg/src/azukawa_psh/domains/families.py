"""Parametrized families t -> Omega_t over a disc in the parameter plane."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConstructionError, DomainError
from .gauges import LinearPullback, MinkowskiGauge, Scale, gauge_from_dict
from .points import CPoint, as_array
from .weights import SubharmonicExpr, weight_from_dict

__all__ = [
    "ParamDisc",
    "DomainFamily",
    "BalancedScaled",
    "BalancedPullback",
    "HartogsBall",
    "FixedBall",
    "family_from_dict",
    "family_to_json",
    "family_from_json",
]


@dataclass(frozen=True)
class ParamDisc:
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ConstructionError(f"parameter disc radius must be positive, got {self.radius}")

    def contains(self, t) -> np.ndarray:
        return np.abs(np.asarray(t) - self.center) < self.radius

    def sample(self, n_radial: int = 16, n_angular: int = 32) -> np.ndarray:
        """Polar grid on the closed disc (center included, rim included)."""
        r = self.radius * np.arange(1, n_radial + 1) / n_radial
        a = 2 * np.pi * np.arange(n_angular) / n_angular
        ring = self.center + (r[:, None] * np.exp(1j * a)[None, :]).ravel()
        return np.concatenate([[self.center], ring])

    def to_dict(self):
        return {"center": [self.center.real, self.center.imag], "radius": self.radius}

    @classmethod
    def from_dict(cls, d):
        re, im = d["center"]
        return cls(complex(re, im), float(d["radius"]))


class DomainFamily:
    variant: str
    param_disc: ParamDisc

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def pole(self) -> CPoint:
        raise NotImplementedError

    @property
    def is_balanced(self) -> bool:
        return False

    def contains(self, t, z) -> np.ndarray:
        """Membership z in Omega_t, broadcasting t of shape (...) against z of shape (..., n)."""
        self._check_t(t)
        return self.defining(t, z) < 0.0

    def defining(self, t, z) -> np.ndarray:
        """A continuous function of z, negative exactly on Omega_t."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def _check_t(self, t):
        if not np.all(self.param_disc.contains(t)):
            raise DomainError(f"parameter {t} outside the disc {self.param_disc}")


class _Balanced(DomainFamily):
    gauge: MinkowskiGauge

    @property
    def dim(self):
        return self.gauge.dim

    @property
    def pole(self):
        return CPoint(np.zeros(self.dim))

    @property
    def is_balanced(self):
        return True

    def gauge_at(self, t) -> MinkowskiGauge:
        raise NotImplementedError

    def log_gauge(self, x, t) -> np.ndarray:
        """log h_t(X) with X of shape (..., n) and t broadcast against (...)."""
        raise NotImplementedError

    def defining(self, t, z):
        with np.errstate(divide="ignore"):
            return self.log_gauge(z, t)


@dataclass(frozen=True)
class BalancedScaled(_Balanced):
    """h_t = exp(phi(t)) * h."""

    gauge: MinkowskiGauge
    phi: SubharmonicExpr
    param_disc: ParamDisc = field(default_factory=ParamDisc)
    variant = "balanced_scaled"

    def gauge_at(self, t):
        self._check_t(t)
        factor = float(np.exp(self.phi(t)))
        return Scale(self.gauge, factor)

    def log_gauge(self, x, t):
        x = as_array(x, self.dim)
        with np.errstate(divide="ignore"):
            return self.phi(t) + np.log(self.gauge._eval(x))

    def to_dict(self):
        return {
            "variant": self.variant,
            "gauge": self.gauge.to_dict(),
            "phi": self.phi.to_dict(),
            "param_disc": self.param_disc.to_dict(),
        }


@dataclass(frozen=True)
class BalancedPullback(_Balanced):
    """h_t(z) = h(z + t * z_1 * xi), the linear change of coordinates I + t xi e_1^T.

    The map must stay invertible over the whole parameter disc; this is
    enforced as ``sup|t| * |xi| < 1`` (``|xi|`` is the operator norm of the
    rank-one matrix ``xi e_1^T``).
    """

    gauge: MinkowskiGauge
    xi: CPoint
    param_disc: ParamDisc = field(default_factory=ParamDisc)
    variant = "balanced_pullback"

    def __post_init__(self):
        xi = self.xi if isinstance(self.xi, CPoint) else CPoint(self.xi)
        object.__setattr__(self, "xi", xi)
        if xi.dim != self.gauge.dim:
            raise ConstructionError(f"xi has dimension {xi.dim}, gauge has {self.gauge.dim}")
        bound = (abs(self.param_disc.center) + self.param_disc.radius) * xi.norm()
        if bound >= 1.0:
            raise ConstructionError(f"sup|t| * |xi| = {bound} >= 1: I + t M(xi) may be singular on the disc")

    def matrix_at(self, t) -> np.ndarray:
        m = np.eye(self.dim, dtype=complex)
        m[:, 0] += complex(t) * self.xi.array
        return m

    def gauge_at(self, t):
        self._check_t(t)
        return LinearPullback(self.gauge, self.matrix_at(t))

    def log_gauge(self, x, t):
        x = as_array(x, self.dim)
        t = np.asarray(t, dtype=complex)
        z = x + (t[..., None] * x[..., :1]) * self.xi.array
        with np.errstate(divide="ignore"):
            return np.log(self.gauge._eval(z))

    def to_dict(self):
        return {
            "variant": self.variant,
            "gauge": self.gauge.to_dict(),
            "xi": self.xi.to_json(),
            "param_disc": self.param_disc.to_dict(),
        }


@dataclass(frozen=True)
class HartogsBall(DomainFamily):
    """Omega_t = ball of radius exp(-phi(t)) in C^2, pole fixed at (1, 0).

    phi < 0 on the parameter disc keeps the pole inside every fiber; it is
    checked on a polar sample of the closed disc at construction.
    """

    phi: SubharmonicExpr
    param_disc: ParamDisc = field(default_factory=ParamDisc)
    variant = "hartogs_ball"

    def __post_init__(self):
        values = self.phi(self.param_disc.sample())
        if not np.all(values < 0):
            raise ConstructionError(f"phi must be negative on the parameter disc, max sampled value {np.max(values)}")

    @property
    def dim(self):
        return 2

    @property
    def pole(self):
        return CPoint([1.0, 0.0])

    def radius_at(self, t):
        return np.exp(-self.phi(t))

    def defining(self, t, z):
        z = as_array(z, 2)
        with np.errstate(divide="ignore"):
            return np.log(np.linalg.norm(z, axis=-1)) + self.phi(t)

    def to_dict(self):
        return {"variant": self.variant, "phi": self.phi.to_dict(), "param_disc": self.param_disc.to_dict()}


@dataclass(frozen=True)
class FixedBall(DomainFamily):
    """The same ball B(0, R) for every t, with pole w."""

    radius: float
    w: CPoint
    param_disc: ParamDisc = field(default_factory=ParamDisc)
    variant = "fixed_ball"

    def __post_init__(self):
        w = self.w if isinstance(self.w, CPoint) else CPoint(self.w)
        object.__setattr__(self, "w", w)
        if not self.radius > 0:
            raise ConstructionError(f"radius must be positive, got {self.radius}")
        if w.norm() >= self.radius:
            raise ConstructionError(f"pole {w.coords} is not inside the ball of radius {self.radius}")

    @property
    def dim(self):
        return self.w.dim

    @property
    def pole(self):
        return self.w

    def defining(self, t, z):
        z = as_array(z, self.dim)
        with np.errstate(divide="ignore"):
            v = np.log(np.linalg.norm(z, axis=-1)) - np.log(self.radius)
        return np.broadcast_to(v, np.broadcast_shapes(np.shape(t), v.shape))

    def to_dict(self):
        return {
            "variant": self.variant,
            "R": self.radius,
            "w": self.w.to_json(),
            "param_disc": self.param_disc.to_dict(),
        }


def family_from_dict(d: dict) -> DomainFamily:
    disc = ParamDisc.from_dict(d["param_disc"]) if "param_disc" in d else ParamDisc()
    variant = d["variant"]
    if variant == "balanced_scaled":
        return BalancedScaled(gauge_from_dict(d["gauge"]), weight_from_dict(d["phi"]), disc)
    if variant == "balanced_pullback":
        return BalancedPullback(gauge_from_dict(d["gauge"]), CPoint.from_json(d["xi"]), disc)
    if variant == "hartogs_ball":
        return HartogsBall(weight_from_dict(d["phi"]), disc)
    if variant == "fixed_ball":
        return FixedBall(float(d["R"]), CPoint.from_json(d["w"]), disc)
    raise ValueError(f"unknown family variant {variant!r}")


def family_to_json(family: DomainFamily, **kwargs) -> str:
    return json.dumps(family.to_dict(), **kwargs)


def family_from_json(text: str) -> DomainFamily:
    return family_from_dict(json.loads(text))
