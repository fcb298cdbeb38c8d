"""Azukawa indicatrix I = {X : A(X) < 0} and its Euclidean volume.

Since A is log-homogeneous, I is the star-shaped set with radial function
``exp(-A(X^))`` on the unit sphere, hence

    Vol(I) = 1/(2n) * integral over S^{2n-1} of exp(-2n A(X^)) dS(X^).

The same radial reduction gives, for 0 < eps < 2n,

    integral over B^{2n} of exp(-(2n - eps) A) = (1/eps) * integral over S^{2n-1} of exp(-(2n - eps) A(X^)) dS,

which :func:`epsilon_identity_check` tests with independent numerics on the
two sides.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .azukawa import AzukawaEvaluator
from .domains.points import as_array
from .errors import ConfigError, DomainError
from .montecarlo import (
    DEFAULT_SEED,
    MCConfig,
    VolumeEstimate,
    hit_or_miss,
    sample_mean,
    sphere_area,
    uniform_sphere,
)
from .sphere import SphericalGrid

__all__ = [
    "indicatrix_member",
    "indicatrix_volume_spherical",
    "indicatrix_volume_mc",
    "required_halfwidth",
    "epsilon_identity_check",
    "EpsilonIdentity",
    "sphere_extrema",
    "boundary_radii",
    "write_boundary_csv",
    "ball_indicatrix_volume",
    "hartogs_indicatrix_volume",
]


def indicatrix_member(A: AzukawaEvaluator, X):
    """X in I, i.e. A(X) < 0. The origin always belongs to I."""
    with np.errstate(divide="ignore"):
        v = np.asarray(A(X)) < 0.0
    return bool(v) if v.ndim == 0 else v


def _check_finite(values: np.ndarray, pts: np.ndarray):
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        kind = "unbounded indicatrix" if values[i] == -np.inf else "non-finite A"
        raise DomainError(f"{kind} in direction {pts[i]} (A = {values[i]})", value=float(values[i]))


def indicatrix_volume_spherical(A: AzukawaEvaluator, grid: SphericalGrid | None = None) -> VolumeEstimate:
    """Vol(I) by quadrature of exp(-2n A) over the unit sphere."""
    grid = grid or SphericalGrid(dim=A.dim)
    n = A.dim
    if grid.dim != n:
        raise ConfigError(f"grid is for n = {grid.dim}, evaluator has n = {n}")

    def integrand(pts):
        a = np.asarray(A._eval(pts), dtype=float)
        _check_finite(a, pts)
        return np.exp(-2 * n * a) / (2 * n)

    value, err = grid.integrate(integrand)
    seed = grid.seed if grid.method == "montecarlo" else None
    return VolumeEstimate(max(value, 0.0), err, grid.method, grid.size, seed)


def _probe_directions(n: int) -> np.ndarray:
    if n <= 2:
        pts, _ = SphericalGrid(dim=n, n_theta=33, n_xi1=32, n_xi2=32).nodes()
        return pts
    rng = np.random.default_rng(np.random.SeedSequence(DEFAULT_SEED, spawn_key=(n,)))
    return np.concatenate([np.eye(n, dtype=complex), uniform_sphere(rng, 8192, n)])


def sphere_extrema(A: AzukawaEvaluator, grid: SphericalGrid | None = None) -> tuple:
    """(min, max) of A over the nodes of a sphere grid (probe directions for n >= 3)."""
    if grid is not None and grid.dim <= 2:
        pts, _ = grid.nodes()
    else:
        pts = _probe_directions(A.dim)
    a = np.asarray(A._eval(pts), dtype=float)
    _check_finite(a, pts)
    return float(a.min()), float(a.max())


def required_halfwidth(A: AzukawaEvaluator, margin: float = 0.02) -> float:
    """Half-width of a coordinate cube containing I, from sampled radial extents.

    A point r X^ of I has real coordinates bounded by r * max_j(|Re X^_j|, |Im X^_j|).
    """
    pts = _probe_directions(A.dim)
    a = np.asarray(A._eval(pts), dtype=float)
    _check_finite(a, pts)
    coord = np.maximum(np.abs(pts.real), np.abs(pts.imag)).max(axis=-1)
    return float(np.max(np.exp(-a) * coord) * (1 + margin))


def indicatrix_volume_mc(
    A: AzukawaEvaluator,
    halfwidth: float,
    samples: int = 1_000_000,
    seed: int = DEFAULT_SEED,
    *,
    chunk: int = 1 << 16,
    workers: int = 1,
) -> VolumeEstimate:
    """Hit-or-miss estimate of Vol(I) in the cube [-halfwidth, halfwidth]^{2n}."""
    need = required_halfwidth(A)
    if need > halfwidth:
        raise ConfigError(f"sampling box too small: halfwidth {halfwidth} < required {need:.6g}")
    config = MCConfig(samples=samples, seed=seed, chunk=chunk)
    return hit_or_miss(lambda X: indicatrix_member(A, X), np.zeros(A.dim), halfwidth, config, workers)


@dataclass(frozen=True)
class EpsilonIdentity:
    epsilon: float
    lhs: float
    lhs_error: float
    rhs: float
    rhs_error: float
    shift: float

    @property
    def relative_gap(self) -> float:
        return abs(self.lhs - self.rhs) / abs(self.rhs)

    def within(self, n_sigma: float = 3.0, rtol_floor: float = 1e-12) -> bool:
        """|lhs - rhs| inside n_sigma combined error bars (plus a rounding floor)."""
        bar = n_sigma * math.hypot(self.lhs_error, self.rhs_error) + rtol_floor * abs(self.rhs)
        return abs(self.lhs - self.rhs) <= bar

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "lhs": self.lhs,
            "lhs_error": self.lhs_error,
            "rhs": self.rhs,
            "rhs_error": self.rhs_error,
            "shift": self.shift,
            "relative_gap": self.relative_gap,
        }


def epsilon_identity_check(
    A: AzukawaEvaluator,
    epsilon: float,
    grid: SphericalGrid | None = None,
    ball_mc: MCConfig | None = None,
    *,
    margin: float = 0.1,
    workers: int = 1,
) -> EpsilonIdentity:
    """Compare both sides of the eps-regularized radial identity.

    If the unit sphere is not inside the closure of I, A is first shifted
    down by ``max_sphere A + margin`` so the closed unit ball lies in I; the
    shift is reported. The ball side is Monte Carlo over B^{2n} with radial
    importance sampling ``r = U^{1/eps}`` (the plain estimator has infinite
    variance for eps <= n); the sphere side is quadrature on ``grid``.
    """
    n = A.dim
    if not 0 < epsilon < 2 * n:
        raise ConfigError(f"epsilon must lie in (0, {2 * n}), got {epsilon}")
    grid = grid or SphericalGrid(dim=n)
    ball_mc = ball_mc or MCConfig(samples=200_000)
    _, amax = sphere_extrema(A, grid)
    # a rounding-level positive max (e.g. log of a unit norm) needs no shift
    shift = 0.0 if amax <= 1e-12 else amax + margin
    p = 2 * n - epsilon

    def sphere_side(pts):
        a = np.asarray(A._eval(pts), dtype=float)
        _check_finite(a, pts)
        return np.exp(-p * (a - shift))

    rhs, rhs_err = grid.integrate(sphere_side)
    rhs, rhs_err = rhs / epsilon, rhs_err / epsilon
    area = sphere_area(n)

    def ball_side(rng, size):
        direction = uniform_sphere(rng, size, n)
        r = (1.0 - rng.uniform(size=size)) ** (1.0 / epsilon)
        X = direction * r[:, None]
        a = np.asarray(A._eval(X), dtype=float)
        # exp(-p (A - shift)) * r^p, combined in log space
        return area / epsilon * np.exp(-p * (a - shift) + p * np.log(r))

    est = sample_mean(ball_side, ball_mc, workers)
    return EpsilonIdentity(float(epsilon), est.value, est.error, rhs, rhs_err, shift)


def boundary_radii(A: AzukawaEvaluator, grid: SphericalGrid | None = None) -> np.ndarray:
    """Rows (theta, xi1, xi2, exp(-A(X^))) over a Hopf grid (n = 2)."""
    grid = grid or SphericalGrid(dim=2, n_theta=17, n_xi1=16, n_xi2=16)
    if A.dim != 2 or grid.dim != 2:
        raise ConfigError("boundary radii export uses Hopf coordinates and needs n = 2")
    pts, _ = grid.nodes()
    theta = np.arctan2(np.abs(pts[:, 1]), np.abs(pts[:, 0]))
    xi1 = np.mod(np.angle(pts[:, 0]), 2 * np.pi)
    xi2 = np.mod(np.angle(pts[:, 1]), 2 * np.pi)
    radius = np.exp(-np.asarray(A._eval(pts), dtype=float))
    return np.column_stack([theta, xi1, xi2, radius])


def write_boundary_csv(path, rows: np.ndarray):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta", "xi1", "xi2", "radius"])
        for row in rows:
            writer.writerow([repr(float(x)) for x in row])



def ball_indicatrix_volume(R: float, w) -> float:
    """Closed form Vol(I) for a ball of C^2 with pole w.

    The indicatrix is the complex ellipsoid with semi-axes ``R(1 - r^2)`` along
    w and ``R sqrt(1 - r^2)`` across it (``r = |w|/R``), so
    ``Vol = sigma_2 R^4 (1 - r^2)^3``.
    """
    r2 = (np.linalg.norm(as_array(w)) / R) ** 2
    return math.pi**2 / 2 * R**4 * (1 - r2) ** 3


def hartogs_indicatrix_volume(phi_value):
    """Closed form Vol(I) for the Hartogs fiber with weight value phi < 0.

    The fiber is the ball of radius ``exp(-phi)`` with pole (1, 0), so this is
    ``sigma_2 exp(-4 phi) (1 - exp(2 phi))^3``.
    """
    phi_value = np.asarray(phi_value, dtype=float)
    return math.pi**2 / 2 * np.exp(-4 * phi_value) * (-np.expm1(2 * phi_value)) ** 3
