import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from azukawa_psh.domains import (
    AbsSq,
    BalancedPullback,
    BalancedScaled,
    CallableGauge,
    CallableWeight,
    Const,
    ConvexIncreasing,
    CPoint,
    Ellipsoid,
    FixedBall,
    GeoMean,
    GaugeMax,
    HarmonicPoly,
    HartogsBall,
    LinearPullback,
    LogAbs,
    MaxAbs,
    NonnegSum,
    ParamDisc,
    Scale,
    SumAbs,
    UnitDirection,
    WeightMax,
    as_array,
    gauge_eval,
    subharmonic_eval,
)
from azukawa_psh.errors import ConstructionError, DimensionError, DomainError
from azukawa_psh.subharm import circle_mean_test

from helpers import random_vectors

finite = st.floats(-10, 10, allow_nan=False)
complexes = st.builds(complex, finite, finite)

LEAF_GAUGES = [
    Ellipsoid((1.0, 1.0)),
    Ellipsoid((2.0, 0.5)),
    MaxAbs(2),
    SumAbs(2),
]
COMPOSITE_GAUGES = [
    GaugeMax(Scale(MaxAbs(2), 1.2), Ellipsoid((1.0, 0.5))),
    GeoMean(Ellipsoid((1.0, 1.0)), SumAbs(2), 0.3),
    LinearPullback(Ellipsoid((1.0, 1.5)), [[1, 0.3], [0.2j, 1]]),
]


class TestCPoint:
    def test_coords_are_complex(self):
        p = CPoint([1, 2j])
        assert p.coords == (1 + 0j, 2j)
        assert p.dim == 2
        assert p.norm() == pytest.approx(math.sqrt(5))

    @pytest.mark.parametrize("bad", [[], [float("nan"), 0], [0, complex(0, float("inf"))]])
    def test_rejects_empty_and_nonfinite(self, bad):
        with pytest.raises(ConstructionError):
            CPoint(bad)

    def test_json_round_trip(self):
        p = CPoint([0.25 - 1j, 3])
        assert CPoint.from_json(p.to_json()) == p

    def test_as_array_scalar_is_a_point_of_c1(self):
        assert as_array(0.5).shape == (1,)

    def test_as_array_dimension_check(self):
        with pytest.raises(DimensionError):
            as_array([1, 2, 3], 2)


class TestUnitDirection:
    @given(st.lists(complexes, min_size=1, max_size=4).filter(lambda v: np.linalg.norm(v) > 1e-3))
    def test_normalized(self, coords):
        d = UnitDirection.of(coords)
        assert abs(d.point.norm() - 1) <= 1e-12

    def test_decompose(self):
        r, d = UnitDirection.decompose([3, 4j])
        assert r == pytest.approx(5)
        np.testing.assert_allclose(d.array * r, [3, 4j])

    def test_zero_vector(self):
        with pytest.raises(ConstructionError):
            UnitDirection.of([0, 0])

    def test_unnormalized_rejected(self):
        with pytest.raises(ConstructionError):
            UnitDirection(CPoint([1, 1]))


class TestGaugeExamples:
    def test_max_abs(self):
        assert gauge_eval(MaxAbs(2), [0.5, -0.3j]) == pytest.approx(0.5)

    def test_euclidean(self):
        assert gauge_eval(Ellipsoid((1, 1)), [3, 4]) == pytest.approx(5.0)

    def test_geo_mean(self):
        assert gauge_eval(GeoMean(MaxAbs(2), Ellipsoid((1, 1)), 0.5), [1, 0]) == pytest.approx(1.0)

    def test_sum_abs(self):
        assert gauge_eval(SumAbs(2), [3j, -4]) == pytest.approx(7.0)

    def test_pullback_evaluates_h_of_mz(self):
        h = LinearPullback(MaxAbs(2), [[2, 0], [0, 1]])
        assert gauge_eval(h, [0.5, 0.7]) == pytest.approx(1.0)

    def test_zero_and_membership(self):
        h = Ellipsoid((2.0, 1.0))
        assert gauge_eval(h, [0, 0]) == 0
        assert h.contains([1.9, 0]) and not h.contains([2.0, 0])

    def test_batch_shape(self, rng):
        z = random_vectors(rng, 7)
        assert gauge_eval(MaxAbs(2), z).shape == (7,)


class TestGaugeConstruction:
    @pytest.mark.parametrize(
        "make",
        [
            lambda: Ellipsoid((1.0, 0.0)),
            lambda: GeoMean(MaxAbs(2), MaxAbs(2), 1.5),
            lambda: Scale(MaxAbs(2), -1.0),
            lambda: LinearPullback(MaxAbs(2), [[1, 2], [2, 4]]),
            lambda: CallableGauge(lambda z: np.abs(z[..., 0]), 2),
        ],
    )
    def test_rejected(self, make):
        with pytest.raises(ConstructionError):
            make()

    def test_mixed_dimensions(self):
        with pytest.raises(DimensionError):
            GeoMean(MaxAbs(2), MaxAbs(3), 0.5)

    def test_eval_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            gauge_eval(MaxAbs(2), [1, 2, 3])

    def test_unchecked_callable(self):
        h = CallableGauge(lambda z: np.linalg.norm(z, axis=-1), 2, unchecked=True)
        assert gauge_eval(h, [3, 4]) == pytest.approx(5)


@pytest.mark.parametrize("h", LEAF_GAUGES + COMPOSITE_GAUGES, ids=repr)
def test_homogeneity_1000_samples(h, rng):
    z = random_vectors(rng, 1000)
    lam = (rng.standard_normal(1000) + 1j * rng.standard_normal(1000)) * rng.uniform(0.01, 5, 1000)
    lhs = gauge_eval(h, lam[:, None] * z)
    rhs = np.abs(lam) * gauge_eval(h, z)
    assert np.all(np.abs(lhs - rhs) <= 1e-10 * rhs)


@pytest.mark.parametrize("h", LEAF_GAUGES, ids=repr)
def test_circular_symmetry_exact_for_leaves(h, rng):
    z = random_vectors(rng, 200)
    theta = rng.uniform(0, 2 * np.pi, 200)
    rotated = gauge_eval(h, np.exp(1j * theta)[:, None] * z)
    np.testing.assert_allclose(rotated, gauge_eval(h, z), rtol=1e-14)


@pytest.mark.parametrize("h", LEAF_GAUGES + COMPOSITE_GAUGES, ids=repr)
def test_positive_away_from_zero(h, rng):
    assert np.all(gauge_eval(h, random_vectors(rng, 500)) > 0)


@pytest.mark.parametrize("h", LEAF_GAUGES + COMPOSITE_GAUGES, ids=repr)
def test_norm_lower_bound(h, rng):
    z = random_vectors(rng, 500)
    assert np.all(gauge_eval(h, z) >= h.norm_lower_bound() * np.linalg.norm(z, axis=1) * (1 - 1e-12))


class TestWeightExamples:
    def test_shifted_abs_sq(self):
        phi = NonnegSum(1.0, AbsSq((0, 1)), 1.0, Const(-1.0))
        assert subharmonic_eval(phi, 0) == -1.0

    def test_log_pole(self):
        assert subharmonic_eval(LogAbs((0, 1)), 0) == -math.inf

    def test_bounded_convex_composite(self):
        phi = ConvexIncreasing("log_inv_one_minus_exp", Const(-math.log(2)))
        assert subharmonic_eval(phi, 0.3 + 0.1j) == pytest.approx(math.log(2))

    def test_log_ratio_composite(self):
        phi = ConvexIncreasing("log_exp_over_one_minus_exp", Const(-math.log(2)))
        assert subharmonic_eval(phi, 0) == pytest.approx(0.0, abs=1e-15)

    def test_harmonic_parts(self):
        assert subharmonic_eval(HarmonicPoly((0, 2), "re"), 1 + 3j) == pytest.approx(2)
        assert subharmonic_eval(HarmonicPoly((0, 2), "im"), 1 + 3j) == pytest.approx(6)

    def test_add_constant_shortcut(self):
        assert subharmonic_eval(AbsSq((0, 1)) + (-1.0), 2) == pytest.approx(3)

    def test_composite_out_of_domain(self):
        with pytest.raises(DomainError):
            subharmonic_eval(ConvexIncreasing("log_inv_one_minus_exp", Const(0.5)), 0)

    @pytest.mark.parametrize(
        "make",
        [
            lambda: NonnegSum(-1.0, AbsSq((0, 1)), 1.0, Const(0.0)),
            lambda: ConvexIncreasing("sin", Const(0.0)),
            lambda: HarmonicPoly((1,), "abs"),
            lambda: CallableWeight(lambda t: -np.abs(t)),
        ],
    )
    def test_rejected(self, make):
        with pytest.raises(ConstructionError):
            make()

    def test_unchecked_negative_coefficient(self):
        phi = NonnegSum(-1.0, AbsSq((0, 1)), 1.0, Const(0.0), unchecked=True)
        assert subharmonic_eval(phi, 2) == pytest.approx(-4)


CATALOGUE_WEIGHTS = [
    HarmonicPoly((1, -2j, 0.5), "re"),
    AbsSq((0.3, 1, 1j)),
    LogAbs((0.5, 1)),
    NonnegSum(2.0, AbsSq((0, 1)), 0.5, HarmonicPoly((0, 1), "im")),
    WeightMax(HarmonicPoly((0, 0.5)), NonnegSum(1.0, AbsSq((0, 1)), 1.0, Const(-0.5))),
    ConvexIncreasing("exp", HarmonicPoly((0, 1))),
    ConvexIncreasing("log_inv_one_minus_exp", NonnegSum(1.0, AbsSq((0, 1)), 1.0, Const(-3.0))),
    ConvexIncreasing("log_exp_over_one_minus_exp", NonnegSum(1.0, AbsSq((0, 1)), 1.0, Const(-3.0))),
]


@pytest.mark.parametrize("phi", CATALOGUE_WEIGHTS, ids=repr)
def test_catalogue_weights_are_subharmonic(phi, rng):
    # 100 random centers and radii inside |t| < 1.3, away from the LogAbs pole at -0.5
    worst = math.inf
    for _ in range(100):
        t0 = 0.8 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        r = rng.uniform(0.01, 0.5)
        if abs(t0 + 0.5) <= r * 1.01:
            continue
        for rep in circle_mean_test(lambda t: subharmonic_eval(phi, t), t0, [r]):
            worst = min(worst, rep.slack)
    assert worst >= -1e-9


class TestFamilies:
    def test_scaled_gauge(self):
        fam = BalancedScaled(MaxAbs(2), NonnegSum(1.0, AbsSq((0, 1)), 1.0, Const(-1.0)), ParamDisc(0, 0.9))
        assert gauge_eval(fam.gauge_at(0.5), [1, 0]) == pytest.approx(math.exp(-0.75))
        assert fam.contains(0.5, [2.0, 0]) and not fam.contains(0.5, [2.2, 0])

    def test_pullback_matrix(self):
        fam = BalancedPullback(Ellipsoid((1.0, 1.5)), CPoint([0.3, 0.4j]), ParamDisc(0, 0.9))
        np.testing.assert_allclose(fam.matrix_at(0.5), [[1.15, 0], [0.2j, 1]])
        z = np.array([0.4, 0.2])
        expected = gauge_eval(Ellipsoid((1.0, 1.5)), fam.matrix_at(0.5) @ z)
        assert gauge_eval(fam.gauge_at(0.5), z) == pytest.approx(expected)

    def test_pullback_disc_too_large(self):
        with pytest.raises(ConstructionError):
            BalancedPullback(MaxAbs(2), CPoint([2.0, 0]), ParamDisc(0, 0.9))

    def test_hartogs_fiber(self):
        fam = HartogsBall(NonnegSum(1.0, AbsSq((0, 1)), 1.0, Const(-1.0)), ParamDisc(0, 0.9))
        assert fam.radius_at(0) == pytest.approx(math.e)
        assert fam.contains(0, fam.pole) and not fam.contains(0, [2.8, 0])
        assert fam.pole == CPoint([1, 0])

    def test_hartogs_needs_negative_phi(self):
        with pytest.raises(ConstructionError):
            HartogsBall(AbsSq((0, 1)), ParamDisc(0, 0.5))

    def test_fixed_ball_pole_inside(self):
        with pytest.raises(ConstructionError):
            FixedBall(1.0, CPoint([1.5, 0]))

    def test_parameter_outside_disc(self):
        fam = FixedBall(1.0, CPoint([0.5, 0]), ParamDisc(0, 0.5))
        with pytest.raises(DomainError):
            fam.contains(0.9, [0, 0])

    def test_param_disc_samples_inside(self):
        disc = ParamDisc(0.2 - 0.1j, 0.3)
        s = disc.sample()
        assert np.all(np.abs(s - disc.center) <= disc.radius * (1 + 1e-12))
