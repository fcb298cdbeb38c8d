"""Minkowski gauges of bounded balanced pseudoconvex domains.

A gauge ``h`` is absolutely homogeneous, ``h(lam*z) = |lam| h(z)``, positive
away from the origin, and ``log h`` is plurisubharmonic, so that
``{h < 1}`` is a bounded balanced pseudoconvex domain. The catalogue below
only contains combinators preserving these three properties; arbitrary
callables have to go through :class:`CallableGauge` with ``unchecked=True``.

All gauges evaluate on arrays of shape ``(..., n)`` and return ``(...)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import ConstructionError, DimensionError
from .points import as_array

__all__ = [
    "MinkowskiGauge",
    "Ellipsoid",
    "MaxAbs",
    "SumAbs",
    "Max",
    "GeoMean",
    "Scale",
    "LinearPullback",
    "CallableGauge",
    "gauge_eval",
    "gauge_from_dict",
]


class MinkowskiGauge:
    dim: int

    def __call__(self, z) -> np.ndarray:
        a = as_array(z, self.dim)
        return self._eval(a)

    def _eval(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, z) -> np.ndarray:
        return self(z) < 1.0

    def norm_lower_bound(self) -> Optional[float]:
        """A constant ``c > 0`` with ``h(z) >= c |z|``, or None if unknown.

        ``{h < 1}`` then lies in the Euclidean ball of radius ``1/c``.
        """
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _check_same_dim(a: MinkowskiGauge, b: MinkowskiGauge):
    if a.dim != b.dim:
        raise DimensionError(a.dim, b.dim, what="gauge")


@dataclass(frozen=True)
class Ellipsoid(MinkowskiGauge):
    """h(z) = sqrt(sum |z_i / a_i|^2)."""

    axes: tuple

    def __post_init__(self):
        axes = tuple(float(a) for a in self.axes)
        if not axes or any(not np.isfinite(a) or a <= 0 for a in axes):
            raise ConstructionError(f"ellipsoid semi-axes must be positive, got {axes}")
        object.__setattr__(self, "axes", axes)

    @property
    def dim(self) -> int:
        return len(self.axes)

    def _eval(self, z):
        return np.sqrt(np.sum(np.abs(z / np.asarray(self.axes)) ** 2, axis=-1))

    def norm_lower_bound(self):
        return 1.0 / max(self.axes)

    def to_dict(self):
        return {"op": "ellipsoid", "axes": list(self.axes)}


@dataclass(frozen=True)
class MaxAbs(MinkowskiGauge):
    """Polydisc gauge, h(z) = max_i |z_i|."""

    dim: int = 2

    def __post_init__(self):
        if self.dim < 1:
            raise ConstructionError("dimension must be >= 1")

    def _eval(self, z):
        return np.max(np.abs(z), axis=-1)

    def norm_lower_bound(self):
        return 1.0 / np.sqrt(self.dim)

    def to_dict(self):
        return {"op": "max_abs", "dim": self.dim}


@dataclass(frozen=True)
class SumAbs(MinkowskiGauge):
    """h(z) = sum_i |z_i|."""

    dim: int = 2

    def __post_init__(self):
        if self.dim < 1:
            raise ConstructionError("dimension must be >= 1")

    def _eval(self, z):
        return np.sum(np.abs(z), axis=-1)

    def norm_lower_bound(self):
        return 1.0

    def to_dict(self):
        return {"op": "sum_abs", "dim": self.dim}


@dataclass(frozen=True)
class Max(MinkowskiGauge):
    first: MinkowskiGauge
    second: MinkowskiGauge

    def __post_init__(self):
        _check_same_dim(self.first, self.second)

    @property
    def dim(self):
        return self.first.dim

    def _eval(self, z):
        return np.maximum(self.first._eval(z), self.second._eval(z))

    def norm_lower_bound(self):
        a, b = self.first.norm_lower_bound(), self.second.norm_lower_bound()
        if a is None or b is None:
            return a if b is None else b
        return max(a, b)

    def to_dict(self):
        return {"op": "max", "args": [self.first.to_dict(), self.second.to_dict()]}


@dataclass(frozen=True)
class GeoMean(MinkowskiGauge):
    """h1^theta * h2^(1 - theta)."""

    first: MinkowskiGauge
    second: MinkowskiGauge
    theta: float = 0.5

    def __post_init__(self):
        _check_same_dim(self.first, self.second)
        if not 0.0 <= self.theta <= 1.0:
            raise ConstructionError(f"theta must lie in [0, 1], got {self.theta}")

    @property
    def dim(self):
        return self.first.dim

    def _eval(self, z):
        # h1^th h2^(1-th) with 0^0 = 1 so that theta in {0, 1} reduces to one factor
        with np.errstate(divide="ignore"):
            a = np.power(self.first._eval(z), self.theta)
            b = np.power(self.second._eval(z), 1.0 - self.theta)
        return a * b

    def norm_lower_bound(self):
        a, b = self.first.norm_lower_bound(), self.second.norm_lower_bound()
        if a is None or b is None:
            return None
        return a**self.theta * b ** (1.0 - self.theta)

    def to_dict(self):
        return {"op": "geo_mean", "theta": self.theta, "args": [self.first.to_dict(), self.second.to_dict()]}


@dataclass(frozen=True)
class Scale(MinkowskiGauge):
    """c * h; the domain shrinks by the factor 1/c."""

    base: MinkowskiGauge
    factor: float

    def __post_init__(self):
        if not np.isfinite(self.factor) or self.factor <= 0:
            raise ConstructionError(f"scale factor must be positive, got {self.factor}")

    @property
    def dim(self):
        return self.base.dim

    def _eval(self, z):
        return self.factor * self.base._eval(z)

    def norm_lower_bound(self):
        c = self.base.norm_lower_bound()
        return None if c is None else self.factor * c

    def to_dict(self):
        return {"op": "scale", "factor": self.factor, "arg": self.base.to_dict()}


def _freeze_matrix(m) -> tuple:
    a = np.asarray(m, dtype=complex)
    return tuple(tuple(complex(x) for x in row) for row in a)


@dataclass(frozen=True)
class LinearPullback(MinkowskiGauge):
    """z -> h(M z) for an invertible complex matrix M."""

    base: MinkowskiGauge
    matrix: tuple
    _sigma: tuple = field(default=(), init=False, repr=False, compare=False)

    # singular values below this fraction of the largest count as singular
    RCOND = 1e-12

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.base.dim, self.base.dim):
            raise ConstructionError(f"pullback matrix has shape {m.shape}, expected {(self.base.dim,) * 2}")
        if not np.all(np.isfinite(m)):
            raise ConstructionError("pullback matrix has non-finite entries")
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] <= self.RCOND * s[0]:
            raise ConstructionError(f"pullback matrix is not invertible (singular values {s})")
        object.__setattr__(self, "matrix", _freeze_matrix(m))
        object.__setattr__(self, "_sigma", (float(s[0]), float(s[-1])))

    @property
    def dim(self):
        return self.base.dim

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex)

    def _eval(self, z):
        return self.base._eval(z @ self.array.T)

    def norm_lower_bound(self):
        c = self.base.norm_lower_bound()
        return None if c is None else c * self._sigma[1]

    def to_dict(self):
        return {
            "op": "pullback",
            "matrix": [[[x.real, x.imag] for x in row] for row in self.matrix],
            "arg": self.base.to_dict(),
        }


@dataclass(frozen=True)
class CallableGauge(MinkowskiGauge):
    """A user-supplied gauge; none of the gauge properties are verified."""

    fn: Callable[[np.ndarray], np.ndarray]
    dim: int
    unchecked: bool = False

    def __post_init__(self):
        if not self.unchecked:
            raise ConstructionError(
                "arbitrary callables are not known to give plurisubharmonic log h; pass unchecked=True"
            )

    def _eval(self, z):
        return np.asarray(self.fn(z), dtype=float)

    def norm_lower_bound(self):
        return None

    def to_dict(self):
        raise TypeError("callable gauges cannot be serialized")


def gauge_eval(h: MinkowskiGauge, z) -> np.ndarray | float:
    """h(z); a single point gives a float."""
    a = as_array(z, h.dim)
    v = h._eval(a)
    return float(v) if np.ndim(v) == 0 else v


def gauge_from_dict(d: dict) -> MinkowskiGauge:
    op = d["op"]
    if op == "ellipsoid":
        return Ellipsoid(tuple(d["axes"]))
    if op == "max_abs":
        return MaxAbs(int(d["dim"]))
    if op == "sum_abs":
        return SumAbs(int(d["dim"]))
    if op == "max":
        a, b = d["args"]
        return Max(gauge_from_dict(a), gauge_from_dict(b))
    if op == "geo_mean":
        a, b = d["args"]
        return GeoMean(gauge_from_dict(a), gauge_from_dict(b), float(d["theta"]))
    if op == "scale":
        return Scale(gauge_from_dict(d["arg"]), float(d["factor"]))
    if op == "pullback":
        m = [[complex(re, im) for re, im in row] for row in d["matrix"]]
        return LinearPullback(gauge_from_dict(d["arg"]), m)
    raise ValueError(f"unknown gauge op {op!r}")
