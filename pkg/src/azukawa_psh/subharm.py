"""Numerical sub-mean-value and Laplacian tests for (pluri)subharmonicity.

Two independent verifiers are provided. :func:`circle_mean_test` compares
the trapezoid mean of ``f`` over circles with the center value; along
complex lines this becomes :func:`psh_line_test`. :func:`laplacian_grid_test`
evaluates the 5-point Laplacian on a square grid.

Passing is ``slack >= -tolerance``. The default tolerances live in
``data/calibration.json`` together with the refinement study that backs
them (see :func:`calibrate`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .azukawa import family_evaluator, family_log_azukawa
from .domains.families import DomainFamily, HartogsBall
from .domains.points import CPoint, as_array
from .errors import ConfigError, DomainError
from .indicatrix import hartogs_indicatrix_volume, indicatrix_volume_spherical
from .montecarlo import DEFAULT_SEED
from .sphere import SphericalGrid

__all__ = [
    "MeanValueReport",
    "PshReport",
    "circle_mean_test",
    "laplacian_grid_test",
    "five_point_stencil",
    "psh_line_test",
    "line_directions",
    "merge_reports",
    "directional_distance",
    "volume_subharmonicity_test",
    "family_psh_test",
    "calibrate",
    "load_calibration",
    "CLOSED_FORM_TOL",
    "LIMIT_TOL",
]


def load_calibration() -> dict:
    text = resources.files("azukawa_psh").joinpath("data/calibration.json").read_text()
    return json.loads(text)


_CAL = load_calibration()
CLOSED_FORM_TOL = float(_CAL["tolerances"]["closed_form"])
LIMIT_TOL = float(_CAL["tolerances"]["limit_based"])
DEFAULT_NODES = int(_CAL["circle_nodes"])


@dataclass(frozen=True)
class MeanValueReport:
    center: complex
    radius: float
    mean: float
    value: float
    slack: float
    nodes: int


@dataclass(frozen=True)
class PshReport:
    """Aggregate verdict of many sub-mean-value (or stencil) tests.

    ``verdict`` is "fail" iff ``min_slack < -tolerance``.
    """

    verdict: str
    min_slack: float
    witness: dict
    tests_run: int
    tolerance: float
    label: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @classmethod
    def from_slack(cls, min_slack, witness, tests_run, tolerance, label="", extra=None):
        verdict = "fail" if min_slack < -tolerance else "pass"
        return cls(verdict, float(min_slack), witness, int(tests_run), float(tolerance), label, extra or {})

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "verdict": self.verdict,
            "min_slack": _json_float(self.min_slack),
            "tolerance": self.tolerance,
            "tests_run": self.tests_run,
            "witness": _jsonify(self.witness),
            **{k: _jsonify(v) for k, v in self.extra.items()},
        }


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_json_float(obj.real), _json_float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _json_float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, CPoint):
        return obj.to_json()
    return obj


def merge_reports(reports: Sequence[PshReport], label: str = "") -> PshReport:
    """Combine reports; the worst case (first one in enumeration order on ties) wins."""
    if not reports:
        raise ConfigError("nothing to merge")
    worst = min(reports, key=lambda r: r.min_slack)
    tol = max(r.tolerance for r in reports)
    return PshReport.from_slack(
        worst.min_slack, worst.witness, sum(r.tests_run for r in reports), tol, label or worst.label
    )


def circle_mean_test(
    f: Callable[[np.ndarray], np.ndarray],
    t0: complex,
    radii: Sequence[float],
    nodes: int = DEFAULT_NODES,
) -> list:
    """Sub-mean-value slacks ``mean_{|t - t0| = r} f - f(t0)`` for each radius.

    ``f`` maps complex arrays to real arrays. A center value of -inf makes
    the inequality vacuous and gives slack +inf.
    """
    if nodes < 3:
        raise ConfigError(f"need at least 3 circle nodes, got {nodes}")
    t0 = complex(t0)
    angles = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    with np.errstate(divide="ignore"):
        center = float(np.asarray(f(np.array([t0])), dtype=float)[0])
    out = []
    for r in radii:
        if not r > 0:
            raise ConfigError(f"radius must be positive, got {r}")
        with np.errstate(divide="ignore"):
            vals = np.asarray(f(t0 + r * angles), dtype=float)
        if np.any(vals == -np.inf):
            raise DomainError(f"f = -inf on the circle |t - {t0}| = {r}; choose another radius")
        if np.any(np.isnan(vals)) or np.isnan(center):
            raise DomainError(f"f is undefined on or at the center of |t - {t0}| = {r}")
        mean = float(np.mean(vals))
        slack = math.inf if center == -math.inf else mean - center
        out.append(MeanValueReport(t0, float(r), mean, center, slack, nodes))
    return out


def five_point_stencil(values: np.ndarray, h: float, step: int = 1) -> np.ndarray:
    """Discrete Laplacian with spacing ``step * h`` at the nodes at least ``step`` from the edge."""
    k = step
    v = values
    return (v[2 * k :, k:-k] + v[: -2 * k, k:-k] + v[k:-k, 2 * k :] + v[k:-k, : -2 * k] - 4 * v[k:-k, k:-k]) / (k * h) ** 2


def laplacian_grid_test(
    f: Callable[[np.ndarray], np.ndarray] | None,
    center: complex,
    halfwidth: float,
    mesh: int = 32,
    tolerance: float = CLOSED_FORM_TOL,
    *,
    values: np.ndarray | None = None,
    label: str = "",
) -> PshReport:
    """5-point Laplacian test of f on the (mesh+1)^2 grid covering the square.

    The h-stencil D_h has an O(h^2) truncation error that does not vanish
    for harmonic f. Each node is therefore credited with the mesh-refinement
    error bar ``|D_h - D_2h|`` (three times the Richardson error estimate),
    and the test runs on the nodes at least two steps from the edge, where
    D_2h exists. Slack is ``(D_h + |D_h - D_2h|) / scale`` with
    ``scale = max |f|`` on the grid (1 if f vanishes). The raw stencil
    minimum and the largest error bar are kept in ``extra``. Precomputed
    grid values (indexed [real, imag]) can be passed as ``values``.
    """
    if mesh < 4:
        raise ConfigError(f"mesh must be >= 4, got {mesh}")
    h = 2.0 * halfwidth / mesh
    axis = np.linspace(-halfwidth, halfwidth, mesh + 1)
    T = complex(center) + axis[:, None] + 1j * axis[None, :]
    if values is None:
        with np.errstate(divide="ignore"):
            values = np.asarray(f(T), dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError("f is not finite on the test grid")
    fine = five_point_stencil(values, h)[1:-1, 1:-1]
    bar = np.abs(fine - five_point_stencil(values, h, 2))
    scale = float(np.max(np.abs(values))) or 1.0
    credited = fine + bar
    i, j = np.unravel_index(int(np.argmin(credited)), credited.shape)
    witness = {"base_point": complex(T[i + 2, j + 2]), "direction": None, "radius": h}
    extra = {
        "min_stencil": float(fine.min()),
        "stencil_at_witness": float(fine[i, j]),
        "max_error_bar": float(bar.max()),
        "scale": scale,
        "mesh": mesh,
    }
    return PshReport.from_slack(float(credited[i, j]) / scale, witness, credited.size, tolerance, label, extra)


def line_directions(n: int, count: int = 64, seed: int = DEFAULT_SEED, include_axes: bool = True) -> list:
    """Directions (xi, tau) in C^n x C: the n + 1 axes, then seeded normalized Gaussians."""
    dirs = []
    if include_axes:
        for k in range(n + 1):
            e = np.zeros(n + 1, dtype=complex)
            e[k] = 1.0
            dirs.append((e[:n], complex(e[n])))
    rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(n, count)))
    while len(dirs) < count:
        g = rng.standard_normal(2 * (n + 1))
        v = g[: n + 1] + 1j * g[n + 1 :]
        v /= np.linalg.norm(v)
        dirs.append((v[:n], complex(v[n])))
    return dirs[:count]


def psh_line_test(
    F: Callable[[np.ndarray, np.ndarray], np.ndarray],
    base: tuple,
    directions: Sequence[tuple],
    radii: Sequence[float],
    nodes: int = DEFAULT_NODES,
    tolerance: float = CLOSED_FORM_TOL,
    label: str = "",
) -> PshReport:
    """Sub-mean-value test of F(X, t) on the complex lines lam -> (X0 + lam xi, t0 + lam tau).

    ``F`` takes X of shape (M, n) and t of shape (M,).
    """
    X0 = as_array(base[0])
    t0 = complex(base[1])
    worst = None
    count = 0
    for k, (xi, tau) in enumerate(directions):
        xi = as_array(xi, X0.shape[-1])
        tau = complex(tau)

        def line(lam, xi=xi, tau=tau):
            lam = np.asarray(lam, dtype=complex)
            return F(X0 + lam[:, None] * xi, t0 + lam * tau)

        try:
            reps = circle_mean_test(line, 0.0, radii, nodes)
        except DomainError as exc:
            raise DomainError(f"line {k} (xi={xi}, tau={tau}) through {base}: {exc}") from exc
        count += len(reps)
        for rep in reps:
            if worst is None or rep.slack < worst[0]:
                worst = (rep.slack, k, xi, tau, rep.radius)
    if worst is None:
        raise ConfigError("no lines to test")
    slack, k, xi, tau, r = worst
    witness = {"base_point": {"X": X0, "t": t0}, "direction": {"index": k, "xi": xi, "tau": tau}, "radius": r}
    return PshReport.from_slack(slack, witness, count, tolerance, label)


def _max_on_circle(fn: Callable[[np.ndarray], np.ndarray], samples: int = 256) -> float:
    """max over theta in [0, 2 pi) of fn(e^{i theta}), sampled then polished."""
    theta = 2 * np.pi * np.arange(samples) / samples
    vals = fn(np.exp(1j * theta))
    k = int(np.argmax(vals))
    step = 2 * np.pi / samples
    res = minimize_scalar(
        lambda a: -float(fn(np.exp(1j * np.array([a])))[0]),
        bounds=(theta[k] - step, theta[k] + step),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return max(float(vals[k]), -float(res.fun))


def directional_distance(
    family: DomainFamily,
    t: complex,
    p,
    direction_index: int = 1,
    *,
    rtol: float = 1e-12,
) -> float:
    """sup{s > 0 : p + lam e_j in Omega_t for all |lam| < s}, j = direction_index (1-based).

    Bisection on s. For p = 0 every provided fiber is circular (invariant
    under z -> e^{i theta} z), so one ray decides the whole circle;
    otherwise the worst point of each circle is located numerically.
    """
    p = as_array(p, family.dim)
    if not 1 <= direction_index <= family.dim:
        raise ConfigError(f"direction index must be in 1..{family.dim}, got {direction_index}")
    e = np.zeros(family.dim, dtype=complex)
    e[direction_index - 1] = 1.0
    if not family.defining(t, p) < 0:
        raise DomainError(f"point {p} is not in the fiber at t = {t}")
    circular = not np.any(p)

    def worst(s):
        if circular:
            return float(family.defining(t, p + s * e))
        return _max_on_circle(lambda u: family.defining(t, p + (s * u)[:, None] * e))

    lo, hi = 0.0, 1.0
    for _ in range(200):
        if worst(hi) >= 0:
            break
        lo, hi = hi, 2 * hi
    else:
        raise DomainError("fiber looks unbounded in this direction")
    while hi - lo > rtol * max(lo, 1e-300):
        mid = 0.5 * (lo + hi)
        if worst(mid) < 0:
            lo = mid
        else:
            hi = mid
        if mid in (lo, hi) and hi - lo <= np.spacing(hi):
            break
    return 0.5 * (lo + hi)


def volume_subharmonicity_test(
    family: DomainFamily,
    center: complex = 0j,
    halfwidth: float = 0.5,
    mesh: int = 20,
    grid: SphericalGrid | None = None,
    tolerance: float = CLOSED_FORM_TOL,
    label: str = "",
) -> PshReport:
    """Laplacian test of t -> -log V(t), V(t) the indicatrix volume of Omega_t.

    Volumes come from spherical quadrature on ``grid``. For the Hartogs
    family the closed form is also evaluated and the largest relative
    deviation is reported as ``closed_form_max_rel_error``. The per-node table
    (t, V, -log V, stencil) is in ``extra["table"]``.
    """
    grid = grid or SphericalGrid(dim=family.dim, n_theta=33, n_xi1=32, n_xi2=32)
    axis = np.linspace(-halfwidth, halfwidth, mesh + 1)
    T = complex(center) + axis[:, None] + 1j * axis[None, :]
    V = np.empty(T.shape)
    for idx in np.ndindex(T.shape):
        V[idx] = indicatrix_volume_spherical(family_evaluator(family, T[idx]), grid).value
    f = -np.log(V)
    report = laplacian_grid_test(None, center, halfwidth, mesh, tolerance, values=f, label=label)
    h = 2.0 * halfwidth / mesh
    stencil = np.full(T.shape, np.nan)
    stencil[1:-1, 1:-1] = five_point_stencil(f, h)
    table = [
        (complex(T[idx]), float(V[idx]), float(f[idx]), float(stencil[idx])) for idx in np.ndindex(T.shape)
    ]
    extra = dict(report.extra)
    extra["table"] = table
    if isinstance(family, HartogsBall):
        closed = hartogs_indicatrix_volume(family.phi(T))
        extra["closed_form_max_rel_error"] = float(np.max(np.abs(V - closed) / closed))
    return PshReport(report.verdict, report.min_slack, report.witness, report.tests_run, tolerance, label, extra)


def family_psh_test(
    family: DomainFamily,
    bases: Sequence[tuple],
    lines: int = 64,
    radii: Sequence[float] = (0.05, 0.1),
    nodes: int = DEFAULT_NODES,
    tolerance: float = CLOSED_FORM_TOL,
    seed: int = DEFAULT_SEED,
    label: str = "",
) -> PshReport:
    """psh_line_test of (X, t) -> A_{Omega_t, pole}(X) through each base point."""
    F = lambda X, t: family_log_azukawa(family, X, t)  # noqa: E731
    reports = []
    for k, base in enumerate(bases):
        dirs = line_directions(family.dim, lines, seed + k)
        reports.append(psh_line_test(F, base, dirs, radii, nodes, tolerance, label))
    return merge_reports(reports, label)


def calibrate(nodes_list: Sequence[int] = (32, 64, 128, 256)) -> dict:
    """Refinement study for the circle-mean slack on closed-form test lines.

    For ``f = log|a + lam|^2 + log(1 + |lam|^2)`` near its singularity the
    exact slack over |lam| = r is known in closed form; the table records the
    quadrature error against node count. The stored default node count is one
    doubling past the first count whose error is below 1e-3 of the
    closed-form tolerance.
    """
    a, r = 0.3, 0.25
    # mean of log|a + lam|^2 is 2 log max(a, r); mean of log(1 + |lam|^2) is log(1 + r^2)
    exact = 2 * math.log(max(a, r)) + math.log(1 + r * r) - 2 * math.log(a)

    def f(lam):
        return np.log(np.abs(a + lam) ** 2) + np.log1p(np.abs(lam) ** 2)

    rows = []
    for n in nodes_list:
        slack = circle_mean_test(f, 0.0, [r], n)[0].slack
        rows.append({"nodes": n, "slack": slack, "error": abs(slack - exact)})
    return {"exact_slack": exact, "rows": rows}
