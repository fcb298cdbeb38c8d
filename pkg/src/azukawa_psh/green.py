"""Closed-form pluricomplex Green functions.

Two sources are available: a ball ``B(0, R)`` with an arbitrary pole, through
the automorphisms ``T_a`` of the unit ball, and a bounded balanced
pseudoconvex domain ``{h < 1}`` with pole at the origin, where
``g(z) = log h(z)``. There is no solver for other domains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains.gauges import MinkowskiGauge
from .domains.points import CPoint, as_array
from .errors import ConfigError, DomainError
from .montecarlo import MCConfig, VolumeEstimate, hit_or_miss, uniform_sphere
from .sphere import SphericalGrid

__all__ = [
    "mobius_map",
    "green_ball",
    "green_balanced",
    "GreenEvaluator",
    "BallGreen",
    "BalancedGreen",
    "sublevel_volume",
    "BOUNDARY_RTOL",
]

# |z| within this relative distance of R counts as on the boundary sphere
BOUNDARY_RTOL = 1e-12


def _mobius(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    aa = float(np.vdot(a, a).real)
    if aa == 0.0:
        return -z
    za = z @ np.conj(a)
    pz = (za / aa)[..., None] * a
    qz = z - pz
    return (a - pz - math.sqrt(1.0 - aa) * qz) / (1.0 - za)[..., None]


def mobius_map(a, z):
    """T_a(z) = (a - P_a z - sqrt(1 - |a|^2) Q_a z) / (1 - <z, a>).

    ``P_a`` projects onto C a and ``Q_a = Id - P_a``. T_a is an involutive
    automorphism of the unit ball exchanging a and 0. ``z`` may be a batch
    of shape (..., n).
    """
    a = as_array(a)
    z = as_array(z, a.shape[-1])
    if np.linalg.norm(a) >= 1.0:
        raise DomainError(f"|a| = {np.linalg.norm(a)} must be < 1", value=float(np.linalg.norm(a)))
    nz = np.linalg.norm(z, axis=-1)
    if np.any(nz >= 1.0):
        raise DomainError(f"|z| = {np.max(nz)} must be < 1", value=float(np.max(nz)))
    return _mobius(a, z)


def green_ball(R: float, w, z, *, return_flags: bool = False):
    """g_{B(0,R), w}(z) = log |T_{w/R}(z/R)|.

    Points on the boundary sphere (relative tolerance ``BOUNDARY_RTOL``) give 0
    and are reported in the flag array when ``return_flags`` is set; points
    outside the closed ball raise :class:`DomainError`.
    """
    if R <= 0:
        raise DomainError(f"radius must be positive, got {R}", value=R)
    w = as_array(w)
    z = as_array(z, w.shape[-1])
    if np.linalg.norm(w) >= R:
        raise DomainError(f"pole norm {np.linalg.norm(w)} is not below R = {R}", value=float(np.linalg.norm(w)))
    nz = np.linalg.norm(z, axis=-1)
    if np.any(nz > R * (1 + BOUNDARY_RTOL)):
        raise DomainError(f"point of norm {np.max(nz)} outside the ball of radius {R}", value=float(np.max(nz)))
    boundary = nz >= R * (1 - BOUNDARY_RTOL)
    u = np.where(boundary[..., None], 0.0, z / R)
    with np.errstate(divide="ignore"):
        g = np.log(np.linalg.norm(_mobius(w / R, u), axis=-1))
    g = np.where(boundary, 0.0, g)
    if np.ndim(g) == 0:
        g = float(g)
    return (g, boundary) if return_flags else g


def green_balanced(h: MinkowskiGauge, z):
    """g_{Omega, 0}(z) = log h(z) for Omega = {h < 1}."""
    z = as_array(z, h.dim)
    v = h._eval(z)
    if np.any(v >= 1.0):
        bad = float(np.max(v))
        raise DomainError(f"gauge value {bad} >= 1: point outside the domain", value=bad)
    with np.errstate(divide="ignore"):
        g = np.log(v)
    return float(g) if np.ndim(g) == 0 else g


class GreenEvaluator:
    """g_{Omega, w} for one of the closed-form sources."""

    @property
    def pole(self) -> CPoint:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        return self.pole.dim

    def __call__(self, z):
        raise NotImplementedError

    def contains(self, z) -> np.ndarray:
        raise NotImplementedError

    def _raw(self, z: np.ndarray) -> np.ndarray:
        """g on points known to be inside; no domain checks."""
        raise NotImplementedError

    def sublevel_indicator(self, z, level: float) -> np.ndarray:
        """z in {g < level}; points outside the domain give False."""
        z = as_array(z, self.dim)
        inside = self.contains(z)
        out = np.zeros(inside.shape, dtype=bool)
        if np.any(inside):
            with np.errstate(divide="ignore"):
                out[inside] = self._raw(z[inside]) < level
        return out

    def sublevel_radius(self, level: float) -> float:
        """Radius of a Euclidean ball about the pole containing {g < level}."""
        raise NotImplementedError


@dataclass(frozen=True)
class BallGreen(GreenEvaluator):
    radius: float
    w: CPoint

    def __post_init__(self):
        w = self.w if isinstance(self.w, CPoint) else CPoint(self.w)
        object.__setattr__(self, "w", w)
        if not self.radius > 0 or w.norm() >= self.radius:
            raise DomainError(f"need 0 <= |w| < R, got |w| = {w.norm()}, R = {self.radius}")

    @property
    def pole(self):
        return self.w

    def __call__(self, z):
        return green_ball(self.radius, self.w, z)

    def contains(self, z):
        return np.linalg.norm(as_array(z, self.dim), axis=-1) < self.radius

    def _raw(self, z):
        return np.log(np.linalg.norm(_mobius(self.w.array / self.radius, z / self.radius), axis=-1))

    def sublevel_radius(self, level):
        # {g < c} = R T_a(B(0, rho)), rho = e^c, a = w/R; for |u| < rho,
        # |T_a(u) - a| <= rho sqrt(1 - |a|^2) / (1 - |a| rho)
        rho = math.exp(min(level, 0.0))
        a = self.w.norm() / self.radius
        whole = self.radius + self.w.norm()
        if rho >= 1.0:
            return whole
        return min(whole, self.radius * rho * math.sqrt(1 - a * a) / (1 - a * rho))


@dataclass(frozen=True)
class BalancedGreen(GreenEvaluator):
    gauge: MinkowskiGauge

    @property
    def pole(self):
        return CPoint(np.zeros(self.gauge.dim))

    def __call__(self, z):
        return green_balanced(self.gauge, z)

    def contains(self, z):
        return self.gauge(z) < 1.0

    def _raw(self, z):
        return np.log(self.gauge._eval(z))

    def sublevel_radius(self, level):
        c = self.gauge.norm_lower_bound()
        if c is None:
            # unchecked gauge: estimate min h on the sphere and keep a wide margin
            rng = np.random.default_rng(0)
            c = 0.5 * float(np.min(self.gauge._eval(uniform_sphere(rng, 4096, self.dim))))
        return math.exp(min(level, 0.0)) / c


def _radial_sublevel_volume(G: GreenEvaluator, level: float, grid: SphericalGrid, iterations: int = 64):
    """Volume of a sublevel set star-shaped about the pole, by bisection along rays."""
    pole = G.pole.array
    hi_r = G.sublevel_radius(level)

    def radial(dirs):
        lo = np.zeros(dirs.shape[0])
        hi = np.full(dirs.shape[0], hi_r)
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            inside = G.sublevel_indicator(pole + mid[:, None] * dirs, level)
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        return 0.5 * (lo + hi)

    n = G.dim
    value, err = grid.integrate(lambda dirs: radial(dirs) ** (2 * n) / (2 * n))
    return VolumeEstimate(value, err, "radial", grid.size, None if grid.dim <= 2 else grid.seed)


def sublevel_volume(
    G: GreenEvaluator,
    t: float,
    sampler: MCConfig | None = None,
    *,
    method: str = "montecarlo",
    grid: SphericalGrid | None = None,
    workers: int = 1,
) -> VolumeEstimate:
    """Volume of {z : g(z) < t/2}.

    ``method="montecarlo"`` is hit-or-miss in the cube about the pole that
    contains the sublevel set. ``method="radial"`` integrates
    ``r(X)^{2n}/(2n)`` over the sphere of directions, with the radial extent
    ``r(X)`` found by bisection on g along each ray from the pole; it relies
    on the sublevel sets being star-shaped about the pole, which holds for
    both closed-form sources.
    """
    if not t < 0:
        raise DomainError(f"t must be negative, got {t}", value=t)
    level = t / 2.0
    if method == "radial":
        return _radial_sublevel_volume(G, level, grid or SphericalGrid(dim=G.dim))
    if method != "montecarlo":
        raise ConfigError(f"unknown method {method!r}")
    sampler = sampler or MCConfig()
    half = G.sublevel_radius(level)
    return hit_or_miss(lambda z: G.sublevel_indicator(z, level), G.pole.array, half, sampler, workers)
