"""Point-extension L^2 bounds on balls: minimal extension norm, indicatrix
volume and the Robin-type bound, plus the scaled sublevel masses.

With weight 0, the holomorphic F on B(0, R) with F(w) = 1 of least L^2 norm
is ``K(., w) / K(w, w)`` and its squared norm is ``1 / K(w, w)``. The bound
by the indicatrix volume V(I) is compared with ``sigma_n e^{n B(w)}``, where
``B(w) = -2 min_{|X|=1} A(X)`` is the best constant in
``G >= log|z - w|^2 - B`` for ``G = 2 g`` at the pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .azukawa import BallAzukawa
from .domains.points import CPoint, as_array
from .errors import DomainError
from .green import BallGreen, sublevel_volume
from .indicatrix import indicatrix_volume_spherical, sphere_extrema
from .montecarlo import MCConfig, MCEstimate, ball_volume, sample_mean, uniform_ball
from .sphere import SphericalGrid

__all__ = [
    "bergman_kernel_ball",
    "minimal_extension_norm",
    "reproducing_norm",
    "ExtensionCheckResult",
    "theorem53_check",
    "sublevel_mass_limit",
    "MassPoint",
]


def bergman_kernel_ball(R: float, z, w):
    """K(z, w) = n!/pi^n R^{-2n} (1 - <z, w>/R^2)^{-(n+1)} for B(0, R) in C^n."""
    w = as_array(w)
    z = as_array(z, w.shape[-1])
    n = w.shape[-1]
    if np.any(np.linalg.norm(z, axis=-1) >= R) or np.linalg.norm(w) >= R:
        raise DomainError("Bergman kernel points must lie inside the open ball")
    zw = z @ np.conj(w)
    k = math.factorial(n) / math.pi**n / R ** (2 * n) * (1 - zw / R**2) ** (-(n + 1))
    return complex(k) if np.ndim(k) == 0 else k


def _check_pole(R, w):
    w = as_array(w)
    if not np.linalg.norm(w) < R:
        raise DomainError(f"pole norm {np.linalg.norm(w)} is not below R = {R}")
    return w


def _ball_mc(R, n, integrand, mc, workers):
    vol = ball_volume(n) * R ** (2 * n)

    def draw(rng, size):
        return vol * integrand(R * uniform_ball(rng, size, n))

    return sample_mean(draw, mc, workers)


def minimal_extension_norm(R: float, w, mc: MCConfig | None = None, workers: int = 1) -> MCEstimate:
    """Monte Carlo value of the squared norm of F = K(., w)/K(w, w) on B(0, R).

    The exact value is ``1/K(w, w)``.
    """
    w = _check_pole(R, w)
    mc = mc or MCConfig(samples=400_000)
    kww = bergman_kernel_ball(R, w, w).real
    return _ball_mc(R, w.shape[-1], lambda z: np.abs(bergman_kernel_ball(R, z, w)) ** 2 / kww**2, mc, workers)


def reproducing_norm(R: float, w, mc: MCConfig | None = None, workers: int = 1) -> MCEstimate:
    """Monte Carlo value of the integral of |K(z, w)|^2 over B(0, R); equals K(w, w)."""
    w = _check_pole(R, w)
    mc = mc or MCConfig(samples=400_000)
    return _ball_mc(R, w.shape[-1], lambda z: np.abs(bergman_kernel_ball(R, z, w)) ** 2, mc, workers)


@dataclass(frozen=True)
class ExtensionCheckResult:
    R: float
    w: CPoint
    minimal_norm: float
    minimal_norm_error: float
    minimal_norm_exact: float
    indicatrix_volume: float
    indicatrix_volume_error: float
    robin_bound: float
    robin_constant: float
    tolerance: float

    @property
    def norm_ratio(self) -> float:
        return self.minimal_norm / self.indicatrix_volume

    @property
    def volume_ratio(self) -> float:
        return self.indicatrix_volume / self.robin_bound

    @property
    def holds(self) -> bool:
        """minimal norm <= V(I)(1 + tol) and V(I) <= Robin bound (1 + tol)."""
        return self.norm_ratio <= 1 + self.tolerance and self.volume_ratio <= 1 + self.tolerance

    def to_dict(self) -> dict:
        return {
            "R": self.R,
            "w": self.w.to_json(),
            "minimal_norm": self.minimal_norm,
            "minimal_norm_error": self.minimal_norm_error,
            "minimal_norm_exact": self.minimal_norm_exact,
            "indicatrix_volume": self.indicatrix_volume,
            "indicatrix_volume_error": self.indicatrix_volume_error,
            "robin_constant": self.robin_constant,
            "robin_bound": self.robin_bound,
            "norm_ratio": self.norm_ratio,
            "volume_ratio": self.volume_ratio,
            "holds": self.holds,
        }


def theorem53_check(
    R: float,
    w,
    grid: SphericalGrid | None = None,
    mc: MCConfig | None = None,
    tolerance: float = 0.01,
    workers: int = 1,
) -> ExtensionCheckResult:
    """Minimal extension norm vs V(I) vs the Robin-type bound, weight 0, n = 2."""
    w = CPoint(_check_pole(R, w))
    if w.dim != 2:
        raise DomainError("the closed-form indicatrix is only available for n = 2")
    grid = grid or SphericalGrid()
    A = BallAzukawa(R, w)
    vol = indicatrix_volume_spherical(A, grid)
    amin, _ = sphere_extrema(A, grid)
    B = -2.0 * amin
    n = w.dim
    robin_bound = ball_volume(n) * math.exp(n * B)
    est = minimal_extension_norm(R, w, mc, workers)
    exact = 1.0 / bergman_kernel_ball(R, w, w).real
    return ExtensionCheckResult(
        R=float(R),
        w=w,
        minimal_norm=est.value,
        minimal_norm_error=est.error,
        minimal_norm_exact=exact,
        indicatrix_volume=vol.value,
        indicatrix_volume_error=vol.error,
        robin_bound=robin_bound,
        robin_constant=B,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class MassPoint:
    t: float
    scaled_mass: float
    error: float
    method: str
    flagged: bool

    def to_dict(self):
        return {"t": self.t, "scaled_mass": self.scaled_mass, "error": self.error, "method": self.method, "flagged": self.flagged}


def sublevel_mass_limit(
    R: float,
    w,
    t_list,
    mc: MCConfig | None = None,
    *,
    method: str = "montecarlo",
    grid: SphericalGrid | None = None,
    workers: int = 1,
) -> list:
    """e^{-n t} Vol({g < t/2}) for each t, with chi = 1.

    Points whose Monte Carlo relative error exceeds 10% are flagged. Every t
    uses the same seed, so the samples are common random numbers scaled to
    the size of each sublevel set.
    """
    w = _check_pole(R, w)
    G = BallGreen(R, w)
    n = w.shape[-1]
    out = []
    for t in t_list:
        if t > -2:
            raise DomainError(f"t values must be <= -2, got {t}")
        vol = sublevel_volume(G, float(t), mc, method=method, grid=grid, workers=workers)
        factor = math.exp(-n * t)
        est = vol.scaled(factor)
        flagged = method == "montecarlo" and (vol.value == 0 or vol.relative_error > 0.10)
        out.append(MassPoint(float(t), est.value, est.error, method, flagged))
    return out
