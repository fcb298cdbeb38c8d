"""Named domain families used by the checks, the CLI and the test-suite."""

from __future__ import annotations

from .domains import (
    AbsSq,
    BalancedPullback,
    BalancedScaled,
    Const,
    ConvexIncreasing,
    Ellipsoid,
    FixedBall,
    GeoMean,
    HarmonicPoly,
    HartogsBall,
    MaxAbs,
    NonnegSum,
    ParamDisc,
    Scale,
    SumAbs,
)
from .domains import gauges, weights

__all__ = ["quadratic_weight", "FAMILIES", "BALANCED", "get_family"]

DISC = ParamDisc(0j, 0.9)


def quadratic_weight(shift: float = -1.0) -> weights.SubharmonicExpr:
    """|t|^2 + shift."""
    return NonnegSum(1.0, AbsSq((0, 1)), 1.0, Const(shift))


def _families() -> dict:
    phi = quadratic_weight(-1.0)
    return {
        "scaled-ellipsoid": BalancedScaled(Ellipsoid((1.0, 2.0)), phi, DISC),
        "scaled-polydisc": BalancedScaled(MaxAbs(2), phi, DISC),
        "max-scaled": BalancedScaled(
            gauges.Max(Scale(MaxAbs(2), 1.2), Scale(Ellipsoid((1.0, 0.5)), 0.8)),
            weights.Max(HarmonicPoly((0, 0.5)), quadratic_weight(-0.5)),
            DISC,
        ),
        "geomean-pair": BalancedScaled(
            GeoMean(Ellipsoid((1.0, 1.0)), SumAbs(2), 0.3),
            NonnegSum(1.0, ConvexIncreasing("exp", HarmonicPoly((0, 1))), 1.0, Const(-2.0)),
            DISC,
        ),
        "case3-pullback": BalancedPullback(Ellipsoid((1.0, 1.5)), (0.3, 0.4j), DISC),
        "hartogs": HartogsBall(phi, DISC),
        "fixed-ball": FixedBall(1.0, (0.5, 0.0), DISC),
        "superharmonic-counterexample": BalancedScaled(
            MaxAbs(2),
            NonnegSum(-1.0, AbsSq((0, 1)), 1.0, Const(0.0), unchecked=True),
            DISC,
        ),
    }


FAMILIES = _families()
BALANCED = ("scaled-ellipsoid", "scaled-polydisc", "max-scaled", "geomean-pair", "case3-pullback")


def get_family(name: str):
    try:
        return FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; known: {sorted(FAMILIES)}") from None
