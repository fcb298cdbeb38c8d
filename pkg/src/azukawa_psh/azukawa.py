"""Azukawa pseudometrics A_{Omega,w}(X) = limsup_{lam -> 0} g(w + lam X) - log|lam|.

Closed forms exist for balls (any pole in C^2, centered pole in any C^n),
for balanced domains with pole 0 (``A = log h``) and for the Hartogs ball
family. :class:`LimitAzukawa` evaluates the definition directly from a
Green evaluator and is the independent route used to check the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domains.families import BalancedPullback, BalancedScaled, DomainFamily, FixedBall, HartogsBall
from .domains.gauges import MinkowskiGauge
from .domains.points import CPoint, as_array
from .domains.weights import SubharmonicExpr
from .errors import ConfigError, ConvergenceError, DimensionError, DomainError, UnsupportedError
from .green import GreenEvaluator

__all__ = [
    "LambdaSchedule",
    "LimitEstimate",
    "AzukawaEvaluator",
    "BallAzukawa",
    "BalancedAzukawa",
    "HartogsAzukawa",
    "LimitAzukawa",
    "ScaledAzukawa",
    "azukawa_ball",
    "azukawa_balanced",
    "azukawa_hartogs",
    "azukawa_limit",
    "azukawa_scale",
    "robin_constant",
    "family_evaluator",
    "family_log_azukawa",
    "SPREAD_LIMIT",
]

# largest last-three spread accepted by verification mode
SPREAD_LIMIT = 1e-4
# how many times lambda_0 is halved before giving up
MAX_SHRINK = 8


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def _log(x):
    with np.errstate(divide="ignore"):
        return np.log(x)


def _rotate_to_axis(w: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply the unitary U of C^2 with U w = (|w|, 0) to x."""
    m = np.linalg.norm(w)
    u = np.array([[np.conj(w[0]), np.conj(w[1])], [-w[1], w[0]]]) / m
    return x @ u.T


def azukawa_ball(R: float, w, X):
    """A_{B(0,R), w}(X).

    For ``w = 0`` this is ``log|X| - log R`` in any dimension. Otherwise
    (n = 2 only) rotate w onto the first axis, ``Y = U X``, and with
    ``r = |w|/R``::

        A = 1/2 log[(|Y1|^2 + (1 - r^2)|Y2|^2) / (1 - r^2)^2] - log R
    """
    w = as_array(w)
    X = as_array(X, w.shape[-1])
    m = float(np.linalg.norm(w))
    if not 0 <= m < R:
        raise DomainError(f"pole norm {m} is not below R = {R}", value=m)
    if m == 0.0:
        return _out(_log(np.linalg.norm(X, axis=-1)) - math.log(R))
    if w.shape[-1] != 2:
        raise UnsupportedError(f"off-center ball closed form is only available for n = 2, got n = {w.shape[-1]}")
    Y = _rotate_to_axis(w, X)
    r2 = (m / R) ** 2
    num = np.abs(Y[..., 0]) ** 2 + (1 - r2) * np.abs(Y[..., 1]) ** 2
    return _out(0.5 * _log(num / (1 - r2) ** 2) - math.log(R))


def azukawa_balanced(h: MinkowskiGauge, X):
    """A_{Omega, 0}(X) = log h(X) for Omega = {h < 1}."""
    return _out(_log(h(as_array(X, h.dim))))


def azukawa_hartogs(phi: SubharmonicExpr, t, X):
    """A_{Omega_t, (1,0)}(X) for Omega_t the ball of radius exp(-phi(t)) in C^2::

        phi + 1/2 log[(|X1|^2 + (1 - e^{2 phi})|X2|^2) / (1 - e^{2 phi})^2]

    ``t`` broadcasts against the leading axes of ``X``.
    """
    X = as_array(X, 2)
    p = phi(t)
    if np.any(p >= 0):
        bad = float(np.max(p))
        raise DomainError(f"phi(t) = {bad} >= 0: the pole (1,0) is not inside the fiber", value=bad)
    one_minus_q = -np.expm1(2 * p)
    num = np.abs(X[..., 0]) ** 2 + one_minus_q * np.abs(X[..., 1]) ** 2
    return _out(p + 0.5 * _log(num / one_minus_q**2))


@dataclass(frozen=True)
class LambdaSchedule:
    """lam_k = lambda0 * ratio^k, k < count; ``order`` 1 adds one Richardson step."""

    lambda0: float = 0.1
    ratio: float = 0.5
    count: int = 12
    order: int = 1

    def __post_init__(self):
        if not 0 < self.lambda0 < 1 or not 0 < self.ratio < 1:
            raise ConfigError(f"need lambda0, ratio in (0, 1), got {self.lambda0}, {self.ratio}")
        if self.count < 3:
            raise ConfigError(f"need at least 3 schedule points, got {self.count}")
        if self.order not in (0, 1):
            raise ConfigError(f"extrapolation order must be 0 or 1, got {self.order}")
        if self.smallest < 1e-10:
            raise ConfigError(f"smallest lambda {self.smallest:.3g} is below 1e-10")

    @property
    def smallest(self) -> float:
        return self.lambda0 * self.ratio ** (self.count - 1)

    @property
    def values(self) -> np.ndarray:
        return self.lambda0 * self.ratio ** np.arange(self.count)

    def shrunk(self, factor: float) -> "LambdaSchedule":
        return LambdaSchedule(self.lambda0 * factor, self.ratio, self.count, self.order)


@dataclass(frozen=True)
class LimitEstimate:
    estimate: float
    spread: float
    lambdas: tuple = ()
    sequence: tuple = ()

    def to_dict(self):
        return {"estimate": self.estimate, "spread": self.spread}


def _limit_batch(G: GreenEvaluator, w: np.ndarray, X: np.ndarray, s: LambdaSchedule):
    """Extrapolated limits and spreads for a batch X of shape (M, n)."""
    lam = s.values
    scale = np.ones(X.shape[0])
    for _ in range(MAX_SHRINK + 1):
        pts = w + (scale[:, None] * lam[None, :])[..., None] * X[:, None, :]
        ok = np.all(G.contains(pts), axis=1)
        if ok.all():
            break
        scale = np.where(ok, scale, 0.5 * scale)
    else:
        raise DomainError(f"w + lambda0 X leaves the domain even after {MAX_SHRINK} halvings of lambda0")
    if np.min(scale) * s.smallest < 1e-10:
        raise DomainError("shrinking lambda0 pushed the schedule below 1e-10")
    lams = scale[:, None] * lam[None, :]
    seq = G._raw(pts) - np.log(lams)
    if s.order == 1:
        seq = (seq[:, 1:] - s.ratio * seq[:, :-1]) / (1 - s.ratio)
    last = seq[:, -3:]
    return seq[:, -1], np.ptp(last, axis=1), lams, seq


def azukawa_limit(G: GreenEvaluator, w, X, s: LambdaSchedule | None = None, *, verify: bool = False) -> LimitEstimate:
    """Estimate A_{Omega,w}(X) from the definition.

    The sequence ``g(w + lam_k X) - log lam_k`` is computed on the schedule
    and, for ``order == 1``, extrapolated once assuming an O(lam) error.
    ``spread`` is max - min of the last three values of the sequence that
    is reported (extrapolated or raw). With ``verify`` a spread above
    ``SPREAD_LIMIT`` raises :class:`ConvergenceError`.
    """
    s = s or LambdaSchedule()
    w = as_array(w if w is not None else G.pole, G.dim)
    if not np.allclose(w, G.pole.array, rtol=0, atol=1e-14):
        raise DomainError(f"w = {w} is not the pole {G.pole.coords} of the Green evaluator")
    X = as_array(X, G.dim)
    if np.linalg.norm(X) == 0:
        return LimitEstimate(-math.inf, 0.0)
    est, spread, lams, seq = _limit_batch(G, w, X[None, :], s)
    result = LimitEstimate(float(est[0]), float(spread[0]), tuple(map(float, lams[0])), tuple(map(float, seq[0])))
    if verify and result.spread > SPREAD_LIMIT:
        raise ConvergenceError(f"limit spread {result.spread:.3g} exceeds {SPREAD_LIMIT}", spread=result.spread)
    return result


def robin_constant(G: GreenEvaluator, w=None, s: LambdaSchedule | None = None) -> float:
    """A_{Omega,w}(1) for a planar domain."""
    if G.dim != 1:
        raise DimensionError(1, G.dim, what="Robin constant domain")
    return azukawa_limit(G, w, [1.0], s).estimate


class AzukawaEvaluator:
    """X -> A(X), vectorized over arrays of shape (..., n)."""

    dim: int

    def __call__(self, X):
        X = as_array(X, self.dim)
        return _out(self._eval(X))

    def _eval(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class BallAzukawa(AzukawaEvaluator):
    radius: float
    w: CPoint

    def __post_init__(self):
        w = self.w if isinstance(self.w, CPoint) else CPoint(self.w)
        object.__setattr__(self, "w", w)
        if w.norm() > 0 and w.dim != 2:
            raise UnsupportedError("off-center ball closed form is only available for n = 2")

    @property
    def dim(self):
        return self.w.dim

    def _eval(self, X):
        return np.asarray(azukawa_ball(self.radius, self.w, X))


@dataclass(frozen=True)
class BalancedAzukawa(AzukawaEvaluator):
    gauge: MinkowskiGauge

    @property
    def dim(self):
        return self.gauge.dim

    def _eval(self, X):
        return _log(self.gauge._eval(X))


@dataclass(frozen=True)
class HartogsAzukawa(AzukawaEvaluator):
    phi: SubharmonicExpr
    t: complex
    dim = 2

    def __post_init__(self):
        p = float(self.phi(self.t))
        if p >= 0:
            raise DomainError(f"phi(t) = {p} >= 0", value=p)

    @property
    def phi_value(self) -> float:
        return float(self.phi(self.t))

    def _eval(self, X):
        return np.asarray(azukawa_hartogs(self.phi, self.t, X))


@dataclass(frozen=True)
class LimitAzukawa(AzukawaEvaluator):
    green: GreenEvaluator
    schedule: LambdaSchedule = field(default_factory=LambdaSchedule)
    verify: bool = False

    @property
    def dim(self):
        return self.green.dim

    def _eval(self, X):
        shape = X.shape[:-1]
        flat = X.reshape(-1, self.dim)
        out = np.full(flat.shape[0], -np.inf)
        nz = np.linalg.norm(flat, axis=-1) > 0
        if np.any(nz):
            est, spread, _, _ = _limit_batch(self.green, self.green.pole.array, flat[nz], self.schedule)
            if self.verify and np.max(spread) > SPREAD_LIMIT:
                worst = float(np.max(spread))
                raise ConvergenceError(f"limit spread {worst:.3g} exceeds {SPREAD_LIMIT}", spread=worst)
            out[nz] = est
        return out.reshape(shape)


@dataclass(frozen=True)
class ScaledAzukawa(AzukawaEvaluator):
    """A_{rho Omega, rho w}(X) = A_{Omega, w}(X) - log rho."""

    base: AzukawaEvaluator
    rho: float

    @property
    def dim(self):
        return self.base.dim

    def _eval(self, X):
        return self.base._eval(X) - math.log(self.rho)


def azukawa_scale(A: AzukawaEvaluator, rho: float) -> ScaledAzukawa:
    if not rho > 0:
        raise DomainError(f"scale factor must be positive, got {rho}", value=rho)
    return ScaledAzukawa(A, float(rho))


def family_evaluator(family: DomainFamily, t) -> AzukawaEvaluator:
    """The closed-form Azukawa evaluator of the fiber Omega_t at the family pole."""
    if isinstance(family, (BalancedScaled, BalancedPullback)):
        return BalancedAzukawa(family.gauge_at(t))
    if isinstance(family, HartogsBall):
        return HartogsAzukawa(family.phi, complex(t))
    if isinstance(family, FixedBall):
        return BallAzukawa(family.radius, family.w)
    raise TypeError(f"no Azukawa evaluator for {type(family).__name__}")


def family_log_azukawa(family: DomainFamily, X, t) -> np.ndarray:
    """(X, t) -> A_{Omega_t, pole}(X), broadcasting t against the leading axes of X."""
    if isinstance(family, (BalancedScaled, BalancedPullback)):
        return family.log_gauge(X, t)
    if isinstance(family, HartogsBall):
        return np.asarray(azukawa_hartogs(family.phi, t, X))
    if isinstance(family, FixedBall):
        X = as_array(X, family.dim)
        v = np.asarray(azukawa_ball(family.radius, family.w, X))
        return np.broadcast_to(v, np.broadcast_shapes(v.shape, np.shape(t)))
    raise TypeError(f"no Azukawa evaluator for {type(family).__name__}")
