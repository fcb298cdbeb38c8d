"""Pluricomplex Green functions, Azukawa pseudometrics and indicatrix volumes,
with numerical verifiers for subharmonic variation in families of domains."""

from importlib.metadata import PackageNotFoundError, version

from .azukawa import (
    BallAzukawa,
    BalancedAzukawa,
    HartogsAzukawa,
    LambdaSchedule,
    LimitAzukawa,
    LimitEstimate,
    azukawa_ball,
    azukawa_balanced,
    azukawa_hartogs,
    azukawa_limit,
    azukawa_scale,
    family_evaluator,
    robin_constant,
)
from .domains import CPoint, DomainFamily, ParamDisc, family_from_json, family_to_json
from .errors import (
    AzukawaPshError,
    ConfigError,
    ConstructionError,
    ConvergenceError,
    DimensionError,
    DomainError,
    UnsupportedError,
)
from .extension import minimal_extension_norm, sublevel_mass_limit, theorem53_check
from .green import BallGreen, BalancedGreen, green_ball, green_balanced, mobius_map, sublevel_volume
from .indicatrix import epsilon_identity_check, indicatrix_volume_mc, indicatrix_volume_spherical
from .montecarlo import DEFAULT_SEED, MCConfig, VolumeEstimate
from .sphere import SphericalGrid
from .subharm import (
    PshReport,
    circle_mean_test,
    directional_distance,
    laplacian_grid_test,
    psh_line_test,
    volume_subharmonicity_test,
)

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

__all__ = [
    "BallAzukawa",
    "BalancedAzukawa",
    "HartogsAzukawa",
    "LambdaSchedule",
    "LimitAzukawa",
    "LimitEstimate",
    "azukawa_ball",
    "azukawa_balanced",
    "azukawa_hartogs",
    "azukawa_limit",
    "azukawa_scale",
    "family_evaluator",
    "robin_constant",
    "CPoint",
    "DomainFamily",
    "ParamDisc",
    "family_from_json",
    "family_to_json",
    "AzukawaPshError",
    "ConfigError",
    "ConstructionError",
    "ConvergenceError",
    "DimensionError",
    "DomainError",
    "UnsupportedError",
    "minimal_extension_norm",
    "sublevel_mass_limit",
    "theorem53_check",
    "BallGreen",
    "BalancedGreen",
    "green_ball",
    "green_balanced",
    "mobius_map",
    "sublevel_volume",
    "epsilon_identity_check",
    "indicatrix_volume_mc",
    "indicatrix_volume_spherical",
    "DEFAULT_SEED",
    "MCConfig",
    "VolumeEstimate",
    "SphericalGrid",
    "PshReport",
    "circle_mean_test",
    "directional_distance",
    "laplacian_grid_test",
    "psh_line_test",
    "volume_subharmonicity_test",
    "__version__",
]
