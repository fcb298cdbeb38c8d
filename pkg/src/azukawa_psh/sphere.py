"""Integration over the unit sphere S^{2n-1} of C^n.

n = 1: periodic trapezoid rule on the circle.
n = 2: product rule in Hopf coordinates
    X = (cos(th) e^{i xi1}, sin(th) e^{i xi2}),  dS = sin(th) cos(th) dth dxi1 dxi2,
  with the th-nodes placed uniformly in u = sin(th)^2 (so dS = du dxi1 dxi2 / 2),
  composite Simpson in u and the periodic trapezoid rule in xi1, xi2.
n >= 3: seeded Monte Carlo with uniform points on the sphere.

Deterministic rules report ``|Q_h - Q_2h|`` (the same rule on every other
node) as their error estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError
from .montecarlo import DEFAULT_SEED, MCConfig, sample_mean, sphere_area, uniform_sphere

__all__ = ["SphericalGrid", "simpson_weights"]


def simpson_weights(n_nodes: int, length: float) -> np.ndarray:
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise ConfigError(f"composite Simpson needs an odd node count >= 3, got {n_nodes}")
    h = length / (n_nodes - 1)
    w = np.full(n_nodes, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * h / 3.0


@dataclass(frozen=True)
class SphericalGrid:
    dim: int = 2
    n_theta: int = 65
    n_xi1: int = 64
    n_xi2: int = 64
    samples: int = 200_000
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError("dimension must be >= 1")
        if self.dim <= 2 and (self.n_xi1 < 4 or self.n_xi1 % 2):
            raise ConfigError(f"n_xi1 must be even and >= 4, got {self.n_xi1}")
        if self.dim == 2:
            if self.n_xi2 < 4 or self.n_xi2 % 2:
                raise ConfigError(f"n_xi2 must be even and >= 4, got {self.n_xi2}")
            # the half-resolution rule must again be Simpson, and u = 1/2 must be a panel end
            if self.n_theta < 5 or (self.n_theta - 1) % 4:
                raise ConfigError(f"n_theta must be 1 mod 4 and >= 5, got {self.n_theta}")

    @classmethod
    def cube(cls, nodes: int = 64, dim: int = 2, **kwargs) -> "SphericalGrid":
        """The ``nodes^3``-equivalent Hopf grid (``nodes + 1`` theta nodes)."""
        return cls(dim=dim, n_theta=nodes + 1, n_xi1=nodes, n_xi2=nodes, **kwargs)

    @property
    def method(self) -> str:
        return "spherical" if self.dim <= 2 else "montecarlo"

    @property
    def size(self) -> int:
        if self.dim == 1:
            return self.n_xi1
        if self.dim == 2:
            return self.n_theta * self.n_xi1 * self.n_xi2
        return self.samples

    def _rule(self, step: int):
        if self.dim == 1:
            xi = 2 * np.pi * np.arange(0, self.n_xi1, step) / self.n_xi1
            pts = np.exp(1j * xi)[:, None]
            return pts, np.full(xi.size, 2 * np.pi / xi.size)
        nu = (self.n_theta - 1) // step + 1
        u = np.linspace(0.0, 1.0, nu)
        wu = 0.5 * simpson_weights(nu, 1.0)
        xi1 = 2 * np.pi * np.arange(0, self.n_xi1, step) / self.n_xi1
        xi2 = 2 * np.pi * np.arange(0, self.n_xi2, step) / self.n_xi2
        U, A, B = np.meshgrid(u, xi1, xi2, indexing="ij")
        pts = np.stack([np.sqrt(1.0 - U) * np.exp(1j * A), np.sqrt(U) * np.exp(1j * B)], axis=-1)
        w = wu[:, None, None] * (2 * np.pi / xi1.size) * (2 * np.pi / xi2.size)
        w = np.broadcast_to(w, U.shape)
        return pts.reshape(-1, 2), w.reshape(-1)

    def nodes(self):
        """Quadrature nodes (M, n) and weights (M,) with sum(w f(p)) ~ integral of f dS."""
        if self.dim >= 3:
            raise ConfigError("dimension >= 3 uses Monte Carlo; call integrate()")
        return self._rule(1)

    def theta_nodes(self) -> np.ndarray:
        return np.arcsin(np.sqrt(np.linspace(0.0, 1.0, self.n_theta)))

    def integrate(self, fn: Callable[[np.ndarray], np.ndarray]) -> tuple:
        """Integrate ``fn`` (vectorized over (M, n) points) over S^{2n-1}.

        Returns ``(value, error)``.
        """
        if self.dim >= 3:
            cfg = MCConfig(samples=self.samples, seed=self.seed)
            est = sample_mean(lambda rng, size: fn(uniform_sphere(rng, size, self.dim)), cfg)
            area = sphere_area(self.dim)
            return area * est.value, area * est.error
        pts, w = self._rule(1)
        vals = np.asarray(fn(pts), dtype=float)
        fine = float(np.dot(w, vals))
        coarse = self._coarse(vals)
        return fine, abs(fine - coarse)

    def _coarse(self, vals: np.ndarray) -> float:
        if self.dim == 1:
            sub = vals[::2]
            return float(sub.sum() * 2 * np.pi / sub.size)
        grid = vals.reshape(self.n_theta, self.n_xi1, self.n_xi2)[::2, ::2, ::2]
        _, w = self._rule(2)
        return float(np.dot(w, grid.reshape(-1)))

    def to_dict(self) -> dict:
        if self.dim >= 3:
            return {"dim": self.dim, "samples": self.samples, "seed": self.seed}
        return {"dim": self.dim, "n_theta": self.n_theta, "n_xi1": self.n_xi1, "n_xi2": self.n_xi2}


