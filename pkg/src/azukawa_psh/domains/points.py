"""Points and unit directions in C^n."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..errors import ConstructionError, DimensionError

__all__ = ["CPoint", "UnitDirection", "as_array", "PointLike"]


@dataclass(frozen=True)
class CPoint:
    """A point of C^n stored as an immutable tuple of complex coordinates."""

    coords: tuple

    def __init__(self, coords: Sequence[complex]):
        values = tuple(complex(c) for c in np.atleast_1d(np.asarray(coords, dtype=complex)).ravel())
        if len(values) < 1:
            raise ConstructionError("a point needs at least one coordinate")
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in values):
            raise ConstructionError(f"non-finite coordinate in {values}")
        object.__setattr__(self, "coords", values)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.array))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __array__(self, dtype=None, copy=None):
        a = self.array
        return a if dtype is None else a.astype(dtype)

    def to_json(self) -> list:
        return [[c.real, c.imag] for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "CPoint":
        return cls([complex(re, im) for re, im in data])


@dataclass(frozen=True)
class UnitDirection:
    """X-hat = X/|X| for a nonzero X."""

    point: CPoint

    def __post_init__(self):
        if abs(self.point.norm() - 1.0) > 1e-12:
            raise ConstructionError(f"direction has norm {self.point.norm()}, use UnitDirection.of()")

    @classmethod
    def of(cls, x) -> "UnitDirection":
        a = as_array(x)
        r = np.linalg.norm(a)
        if r == 0:
            raise ConstructionError("cannot normalize the zero vector")
        return cls(CPoint(a / r))

    @staticmethod
    def decompose(x) -> tuple:
        """Split X = r * X-hat; returns ``(r, UnitDirection)``."""
        a = as_array(x)
        return float(np.linalg.norm(a)), UnitDirection.of(a)

    @property
    def array(self) -> np.ndarray:
        return self.point.array

    @property
    def dim(self) -> int:
        return self.point.dim


PointLike = Union[CPoint, UnitDirection, Sequence[complex], np.ndarray]


def as_array(x, dim: int | None = None) -> np.ndarray:
    """Coerce a point or a batch of points to a complex array of shape (..., n).

    A bare scalar is read as a point of C^1.
    """
    if isinstance(x, UnitDirection):
        a = x.array
    elif isinstance(x, CPoint):
        a = x.array
    else:
        a = np.asarray(x, dtype=complex)
        if a.ndim == 0:
            a = a.reshape(1)
    if dim is not None and a.shape[-1] != dim:
        raise DimensionError(dim, a.shape[-1])
    return a
