"""Subharmonic functions of the fiber parameter t, built from a closed catalogue.

Each node maps complex arrays ``t`` to real arrays (``-inf`` allowed, only
produced by :class:`LogAbs` at zeros of its polynomial). Polynomial
coefficients are in ascending order: ``(c0, c1, c2)`` is ``c0 + c1 t + c2 t^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P

from ..errors import ConstructionError, DomainError

__all__ = [
    "SubharmonicExpr",
    "HarmonicPoly",
    "AbsSq",
    "LogAbs",
    "NonnegSum",
    "Max",
    "ConvexIncreasing",
    "Const",
    "CallableWeight",
    "CONVEX_INCREASING",
    "subharmonic_eval",
    "weight_from_dict",
]


def _log_inv_one_minus_exp(x):
    return -np.log1p(-np.exp(x))


def _log_exp_over_one_minus_exp(x):
    return x - np.log1p(-np.exp(x))


# name -> (function, upper end of the open validity interval)
CONVEX_INCREASING = {
    "exp": (np.exp, np.inf),
    "log_inv_one_minus_exp": (_log_inv_one_minus_exp, 0.0),
    "log_exp_over_one_minus_exp": (_log_exp_over_one_minus_exp, 0.0),
}


class SubharmonicExpr:
    def __call__(self, t):
        t = np.asarray(t, dtype=complex)
        with np.errstate(divide="ignore"):
            return self._eval(t)

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __add__(self, other):
        return NonnegSum(1.0, self, 1.0, _coerce(other))

    __radd__ = __add__


def _coerce(x) -> SubharmonicExpr:
    return x if isinstance(x, SubharmonicExpr) else Const(float(x))


def _coeffs(c) -> tuple:
    out = tuple(complex(x) for x in np.atleast_1d(np.asarray(c, dtype=complex)))
    if not out:
        raise ConstructionError("polynomial needs at least one coefficient")
    return out


def _coeffs_json(c):
    return [[x.real, x.imag] for x in c]


def _coeffs_from_json(c):
    return tuple(complex(*x) if isinstance(x, (list, tuple)) else complex(x) for x in c)


@dataclass(frozen=True)
class HarmonicPoly(SubharmonicExpr):
    """Re p(t) or Im p(t)."""

    coeffs: tuple
    part: str = "re"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coeffs(self.coeffs))
        if self.part not in ("re", "im"):
            raise ConstructionError(f"part must be 're' or 'im', got {self.part!r}")

    def _eval(self, t):
        v = P.polyval(t, self.coeffs)
        return np.real(v) if self.part == "re" else np.imag(v)

    def to_dict(self):
        return {"op": "harmonic_poly", "coeffs": _coeffs_json(self.coeffs), "part": self.part}


@dataclass(frozen=True)
class AbsSq(SubharmonicExpr):
    """|p(t)|^2."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coeffs(self.coeffs))

    def _eval(self, t):
        return np.abs(P.polyval(t, self.coeffs)) ** 2

    def to_dict(self):
        return {"op": "abs_sq", "coeffs": _coeffs_json(self.coeffs)}


@dataclass(frozen=True)
class LogAbs(SubharmonicExpr):
    """log |p(t)|, equal to -inf at the zeros of p."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coeffs(self.coeffs))
        if all(c == 0 for c in self.coeffs):
            raise ConstructionError("log|0| is identically -inf")

    def _eval(self, t):
        return np.log(np.abs(P.polyval(t, self.coeffs)))

    def to_dict(self):
        return {"op": "log_abs", "coeffs": _coeffs_json(self.coeffs)}


@dataclass(frozen=True)
class NonnegSum(SubharmonicExpr):
    """alpha*u + beta*v with alpha, beta >= 0.

    Negative coefficients break subharmonicity and need ``unchecked=True``;
    they exist to build counterexamples for the verification harness.
    """

    alpha: float
    first: SubharmonicExpr
    beta: float
    second: SubharmonicExpr
    unchecked: bool = False

    def __post_init__(self):
        if not self.unchecked and (self.alpha < 0 or self.beta < 0):
            raise ConstructionError(
                f"coefficients must be nonnegative (got {self.alpha}, {self.beta}); pass unchecked=True"
            )

    def _eval(self, t):
        out = np.zeros(t.shape)
        # 0 * (-inf) must not turn into nan
        if self.alpha != 0:
            out = out + self.alpha * self.first._eval(t)
        if self.beta != 0:
            out = out + self.beta * self.second._eval(t)
        return out

    def to_dict(self):
        d = {
            "op": "nonneg_sum",
            "alpha": self.alpha,
            "beta": self.beta,
            "args": [self.first.to_dict(), self.second.to_dict()],
        }
        if self.unchecked:
            d["unchecked"] = True
        return d


@dataclass(frozen=True)
class Max(SubharmonicExpr):
    first: SubharmonicExpr
    second: SubharmonicExpr

    def _eval(self, t):
        return np.maximum(self.first._eval(t), self.second._eval(t))

    def to_dict(self):
        return {"op": "max", "args": [self.first.to_dict(), self.second.to_dict()]}


@dataclass(frozen=True)
class ConvexIncreasing(SubharmonicExpr):
    """chi(u) for chi convex and nondecreasing on the range of u."""

    chi: str
    arg: SubharmonicExpr

    def __post_init__(self):
        if self.chi not in CONVEX_INCREASING:
            raise ConstructionError(f"unknown convex increasing function {self.chi!r}")

    def _eval(self, t):
        fn, upper = CONVEX_INCREASING[self.chi]
        x = self.arg._eval(t)
        if np.any(x >= upper):
            bad = float(np.max(x))
            raise DomainError(f"{self.chi} needs its argument below {upper}, got {bad}", value=bad)
        return fn(x)

    def to_dict(self):
        return {"op": "convex_increasing", "chi": self.chi, "arg": self.arg.to_dict()}


@dataclass(frozen=True)
class Const(SubharmonicExpr):
    value: float

    def _eval(self, t):
        return np.full(t.shape, float(self.value))

    def to_dict(self):
        return {"op": "const", "value": self.value}


@dataclass(frozen=True)
class CallableWeight(SubharmonicExpr):
    """A user-supplied weight; subharmonicity is not verified."""

    fn: Callable[[np.ndarray], np.ndarray]
    unchecked: bool = False

    def __post_init__(self):
        if not self.unchecked:
            raise ConstructionError("arbitrary callables are not known to be subharmonic; pass unchecked=True")

    def _eval(self, t):
        return np.asarray(self.fn(t), dtype=float)

    def to_dict(self):
        raise TypeError("callable weights cannot be serialized")


def subharmonic_eval(phi: SubharmonicExpr, t):
    """phi(t); a scalar t gives a float."""
    v = phi(t)
    return float(v) if np.ndim(v) == 0 else v


def weight_from_dict(d: dict) -> SubharmonicExpr:
    op = d["op"]
    if op == "harmonic_poly":
        return HarmonicPoly(_coeffs_from_json(d["coeffs"]), d.get("part", "re"))
    if op == "abs_sq":
        return AbsSq(_coeffs_from_json(d["coeffs"]))
    if op == "log_abs":
        return LogAbs(_coeffs_from_json(d["coeffs"]))
    if op == "nonneg_sum":
        a, b = d["args"]
        return NonnegSum(
            float(d["alpha"]),
            weight_from_dict(a),
            float(d["beta"]),
            weight_from_dict(b),
            unchecked=bool(d.get("unchecked", False)),
        )
    if op == "max":
        a, b = d["args"]
        return Max(weight_from_dict(a), weight_from_dict(b))
    if op == "convex_increasing":
        return ConvexIncreasing(d["chi"], weight_from_dict(d["arg"]))
    if op == "const":
        return Const(float(d["value"]))
    raise ValueError(f"unknown weight op {op!r}")
