import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from azukawa_psh.errors import ConfigError
from azukawa_psh.montecarlo import (
    DEFAULT_SEED,
    MCConfig,
    VolumeEstimate,
    ball_volume,
    hit_or_miss,
    map_chunks,
    sample_mean,
    sphere_area,
    uniform_ball,
    uniform_box,
    uniform_sphere,
)


def in_unit_ball(z):
    return np.linalg.norm(z, axis=-1) < 1


class TestConstants:
    @pytest.mark.parametrize("n, area", [(1, 2 * math.pi), (2, 2 * math.pi**2), (3, math.pi**3)])
    def test_sphere_area(self, n, area):
        assert sphere_area(n) == pytest.approx(area)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_ball_volume_from_area(self, n):
        assert ball_volume(n) == pytest.approx(sphere_area(n) / (2 * n))


class TestConfig:
    def test_chunks(self):
        cfg = MCConfig(samples=10, chunk=4)
        assert cfg.n_chunks == 3
        assert [cfg.chunk_size(i) for i in range(3)] == [4, 4, 2]

    @pytest.mark.parametrize("kwargs", [{"samples": 0}, {"chunk": 0}, {"seed": -1}, {"seed": 2**64}])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            MCConfig(**kwargs)

    def test_default_seed(self):
        assert MCConfig().seed == DEFAULT_SEED

    def test_chunk_streams_differ(self):
        cfg = MCConfig()
        assert cfg.rng(0).random() != cfg.rng(1).random()


class TestSamplers:
    def test_box_bounds(self, rng):
        z = uniform_box(rng, 1000, np.array([1 + 1j, 0]), 0.5)
        assert np.all(np.abs(z.real - [1, 0]) <= 0.5) and np.all(np.abs(z.imag - [1, 0]) <= 0.5)

    def test_sphere_norm(self, rng):
        np.testing.assert_allclose(np.linalg.norm(uniform_sphere(rng, 100, 3), axis=-1), 1)

    def test_ball_radial_law(self, rng):
        # |z|^4 is uniform on [0, 1] for the unit ball of C^2
        r = np.linalg.norm(uniform_ball(rng, 200_000, 2), axis=-1)
        assert np.mean(r**4) == pytest.approx(0.5, abs=5e-3)
        assert np.all(r < 1)


class TestHitOrMiss:
    def test_unit_ball(self):
        est = hit_or_miss(in_unit_ball, np.zeros(2), 1.0, MCConfig(samples=400_000))
        assert abs(est.value - math.pi**2 / 2) <= 3 * est.error
        assert est.method == "montecarlo" and est.seed == DEFAULT_SEED

    def test_full_box(self):
        est = hit_or_miss(lambda z: np.ones(len(z), bool), np.zeros(1), 0.5, MCConfig(samples=100))
        assert est.value == 1.0 and est.error == 0.0

    def test_bad_halfwidth(self):
        with pytest.raises(ConfigError):
            hit_or_miss(in_unit_ball, np.zeros(2), 0.0, MCConfig(samples=10))

    @pytest.mark.parametrize("workers", [2, 4])
    def test_worker_count_does_not_change_result(self, workers):
        cfg = MCConfig(samples=300_000, chunk=10_000)
        serial = hit_or_miss(in_unit_ball, np.zeros(2), 1.0, cfg)
        parallel = hit_or_miss(in_unit_ball, np.zeros(2), 1.0, cfg, workers=workers)
        assert serial == parallel

    def test_seed_changes_result(self):
        a = hit_or_miss(in_unit_ball, np.zeros(2), 1.0, MCConfig(samples=10_000, seed=1))
        b = hit_or_miss(in_unit_ball, np.zeros(2), 1.0, MCConfig(samples=10_000, seed=2))
        assert a.value != b.value


class TestSampleMean:
    def test_constant(self):
        est = sample_mean(lambda rng, size: np.full(size, 3.0), MCConfig(samples=1000))
        assert est.value == 3.0 and est.error == 0.0

    def test_uniform_mean(self):
        est = sample_mean(lambda rng, size: rng.uniform(size=size), MCConfig(samples=200_000))
        assert abs(est.value - 0.5) <= 4 * est.error
        assert est.error == pytest.approx(math.sqrt(1 / 12 / 200_000), rel=0.01)

    def test_workers(self):
        draw = lambda rng, size: rng.standard_normal(size)  # noqa: E731
        cfg = MCConfig(samples=100_000, chunk=8192)
        assert sample_mean(draw, cfg) == sample_mean(draw, cfg, workers=3)

    def test_map_chunks_order(self):
        out = map_chunks(lambda rng, size: size, MCConfig(samples=10, chunk=3), workers=2)
        assert out == [3, 3, 3, 1]


class TestVolumeEstimate:
    def test_relative_error(self):
        assert VolumeEstimate(2.0, 0.1, "montecarlo", 10).relative_error == pytest.approx(0.05)
        assert VolumeEstimate(0.0, 0.1, "montecarlo", 10).relative_error == math.inf

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            VolumeEstimate(-1.0, 0.0, "spherical", 10)

    def test_to_dict_keys(self):
        assert "samples" in VolumeEstimate(1.0, 0.0, "montecarlo", 10, 5).to_dict()
        assert "nodes" in VolumeEstimate(1.0, 0.0, "spherical", 10).to_dict()

    @given(st.floats(0, 1e6), st.floats(0, 1e3), st.floats(1e-3, 1e3))
    def test_scaled(self, value, error, factor):
        v = VolumeEstimate(value, error, "montecarlo", 10).scaled(factor)
        assert v.value == pytest.approx(value * factor) and v.error == pytest.approx(error * factor)
