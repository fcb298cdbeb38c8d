"""Points, gauges, weights and parametrized domain families."""

from . import gauges, weights
from .families import (
    BalancedPullback,
    BalancedScaled,
    DomainFamily,
    FixedBall,
    HartogsBall,
    ParamDisc,
    family_from_dict,
    family_from_json,
    family_to_json,
)
from .gauges import (
    CallableGauge,
    Ellipsoid,
    GeoMean,
    LinearPullback,
    MaxAbs,
    MinkowskiGauge,
    Scale,
    SumAbs,
    gauge_eval,
    gauge_from_dict,
)
from .points import CPoint, UnitDirection, as_array
from .weights import (
    AbsSq,
    CallableWeight,
    Const,
    ConvexIncreasing,
    HarmonicPoly,
    LogAbs,
    NonnegSum,
    SubharmonicExpr,
    subharmonic_eval,
    weight_from_dict,
)

__all__ = [
    "gauges",
    "weights",
    "CPoint",
    "UnitDirection",
    "as_array",
    "MinkowskiGauge",
    "Ellipsoid",
    "MaxAbs",
    "SumAbs",
    "GeoMean",
    "Scale",
    "LinearPullback",
    "CallableGauge",
    "gauge_eval",
    "gauge_from_dict",
    "SubharmonicExpr",
    "HarmonicPoly",
    "AbsSq",
    "LogAbs",
    "NonnegSum",
    "ConvexIncreasing",
    "Const",
    "CallableWeight",
    "subharmonic_eval",
    "weight_from_dict",
    "ParamDisc",
    "DomainFamily",
    "BalancedScaled",
    "BalancedPullback",
    "HartogsBall",
    "FixedBall",
    "family_from_dict",
    "family_from_json",
    "family_to_json",
]

GaugeMax = gauges.Max
WeightMax = weights.Max
__all__ += ["GaugeMax", "WeightMax"]
