"""Seeded, chunked Monte Carlo primitives.

Every estimate is split into chunks of ``MCConfig.chunk`` samples. Chunk ``i``
draws from ``SeedSequence(seed, spawn_key=(i,))`` and chunk results are
reduced in chunk order, so a fixed seed gives a bitwise identical estimate
no matter how many worker threads run the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError

DEFAULT_SEED = 0xA2C4A3A0

__all__ = [
    "DEFAULT_SEED",
    "MCConfig",
    "MCEstimate",
    "VolumeEstimate",
    "map_chunks",
    "hit_or_miss",
    "sample_mean",
    "uniform_sphere",
    "uniform_ball",
    "sphere_area",
    "ball_volume",
]


def sphere_area(n: int) -> float:
    """Area of the unit sphere S^{2n-1} in C^n, 2 pi^n / (n-1)!."""
    return 2.0 * math.pi**n / math.factorial(n - 1)


def ball_volume(n: int) -> float:
    """Volume of the unit ball of C^n, pi^n / n!."""
    return math.pi**n / math.factorial(n)


@dataclass(frozen=True)
class MCConfig:
    samples: int = 1_000_000
    seed: int = DEFAULT_SEED
    chunk: int = 1 << 16

    def __post_init__(self):
        if int(self.samples) <= 0:
            raise ConfigError(f"sample budget must be positive, got {self.samples}")
        if int(self.chunk) <= 0:
            raise ConfigError(f"chunk size must be positive, got {self.chunk}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def n_chunks(self) -> int:
        return -(-self.samples // self.chunk)

    def chunk_size(self, index: int) -> int:
        return min(self.chunk, self.samples - index * self.chunk)

    def rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(int(self.seed), spawn_key=(index,)))

    def to_dict(self) -> dict:
        return asdict(self)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


@dataclass(frozen=True)
class VolumeEstimate:
    """A volume with an error bar.

    ``error`` is a standard error for ``method == "montecarlo"`` and a
    quadrature error estimate (difference to the half-resolution rule) for
    ``method == "spherical"`` or ``"radial"``.
    """

    value: float
    error: float
    method: str
    samples: int
    seed: Optional[int] = None

    def __post_init__(self):
        if self.value < 0 or self.error < 0:
            raise ValueError(f"negative volume or error: {self.value}, {self.error}")

    @property
    def relative_error(self) -> float:
        return self.error / self.value if self.value > 0 else math.inf

    def scaled(self, factor: float) -> "VolumeEstimate":
        return VolumeEstimate(self.value * factor, self.error * factor, self.method, self.samples, self.seed)

    def to_dict(self) -> dict:
        key = "samples" if self.method == "montecarlo" else "nodes"
        return {
            "value": _jsonable(self.value),
            "error": _jsonable(self.error),
            "method": self.method,
            key: self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class MCEstimate:
    value: float
    error: float
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"value": self.value, "error": self.error, "samples": self.samples, "seed": self.seed}


def map_chunks(fn: Callable[[np.random.Generator, int], object], config: MCConfig, workers: int = 1) -> list:
    """Apply ``fn(rng, size)`` to every chunk; results come back in chunk order."""
    jobs = [(config.rng(i), config.chunk_size(i)) for i in range(config.n_chunks)]
    if workers <= 1 or len(jobs) == 1:
        return [fn(rng, size) for rng, size in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def uniform_box(rng: np.random.Generator, size: int, center: np.ndarray, halfwidth: float) -> np.ndarray:
    n = center.shape[-1]
    u = rng.uniform(-1.0, 1.0, size=(size, 2 * n))
    return center + halfwidth * (u[:, :n] + 1j * u[:, n:])


def uniform_sphere(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    """Uniform points on S^{2n-1} from normalized Gaussian vectors."""
    g = rng.standard_normal(size=(size, 2 * n))
    z = g[:, :n] + 1j * g[:, n:]
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def uniform_ball(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    """Uniform points in the unit ball of C^n."""
    direction = uniform_sphere(rng, size, n)
    radius = rng.uniform(size=size) ** (1.0 / (2 * n))
    return direction * radius[:, None]


def hit_or_miss(
    indicator: Callable[[np.ndarray], np.ndarray],
    center,
    halfwidth: float,
    config: MCConfig,
    workers: int = 1,
) -> VolumeEstimate:
    """Estimate the volume of ``{z : indicator(z)}`` inside a cube of C^n.

    The cube is ``center + [-halfwidth, halfwidth]^{2n}`` in real coordinates.
    The caller guarantees the set lies inside it.
    """
    center = np.asarray(center, dtype=complex)
    if halfwidth <= 0:
        raise ConfigError(f"halfwidth must be positive, got {halfwidth}")

    def count(rng, size):
        return int(np.count_nonzero(indicator(uniform_box(rng, size, center, halfwidth))))

    hits = sum(map_chunks(count, config, workers))
    box = (2.0 * halfwidth) ** (2 * center.shape[-1])
    p = hits / config.samples
    return VolumeEstimate(
        value=p * box,
        error=box * math.sqrt(p * (1.0 - p) / config.samples),
        method="montecarlo",
        samples=config.samples,
        seed=config.seed,
    )


def sample_mean(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    config: MCConfig,
    workers: int = 1,
) -> MCEstimate:
    """Mean and standard error of the values returned by ``draw(rng, size)``."""

    def moments(rng, size):
        v = np.asarray(draw(rng, size), dtype=float)
        return float(v.sum()), float(np.square(v).sum())

    parts = map_chunks(moments, config, workers)
    n = config.samples
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0) * n / max(n - 1, 1)
    return MCEstimate(mean, math.sqrt(var / n), n, config.seed)
