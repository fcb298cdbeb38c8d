"""Reproduction checks, one per verified statement.

Each runner returns a :class:`CheckResult` holding a pass/fail verdict, a
JSON-ready summary and a table for CSV output. The CLI and the acceptance
suite both go through these runners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .azukawa import BallAzukawa, family_log_azukawa
from .domains import DomainFamily, HartogsBall
from .errors import UnsupportedError
from .extension import sublevel_mass_limit, theorem53_check
from .indicatrix import (
    ball_indicatrix_volume,
    epsilon_identity_check,
    indicatrix_volume_mc,
    indicatrix_volume_spherical,
    required_halfwidth,
)
from .montecarlo import DEFAULT_SEED, MCConfig
from .sphere import SphericalGrid
from .subharm import (
    CLOSED_FORM_TOL,
    PshReport,
    _jsonify,
    directional_distance,
    family_psh_test,
    laplacian_grid_test,
    volume_subharmonicity_test,
)

__all__ = [
    "STATEMENTS",
    "CheckSettings",
    "CheckResult",
    "random_bases",
    "check_thm13",
    "check_thm14",
    "check_thm15",
    "check_claim21",
    "check_case2",
    "check_lemma54",
    "check_thm53",
    "RUNNERS",
]

STATEMENTS = {
    "thm13": "If (X, t) -> A_t(X) is psh then t -> -log V(t), V(t) the Euclidean volume of the indicatrix, is subharmonic",
    "thm14": "For a pseudoconvex family of balanced domains with pole at the origin, (X, t) -> log h_t(X) is psh",
    "thm15": "For the family exp(-phi(t)) B with pole (1, 0) and phi < 0 subharmonic, (X, t) -> A_t(X) is psh",
    "claim21": "The indicatrix volume equals (1/2n) times the sphere integral of exp(-2n A), and the epsilon-weighted ball integral identity holds",
    "case2": "For balanced fibers, t -> -log of the z_1-directional boundary distance from the origin is subharmonic",
    "lemma54": "The scaled sublevel mass e^{-nt} Vol({g < t/2}) of the ball Green function tends to V(I) as t -> -infinity",
    "thm53": "The minimal L2 extension norm is at most V(I), which is at most the Robin-type bound sigma_n e^{n B(w)}",
}

DEFAULT_NODES = {"thm13": 32, "claim21": 64, "lemma54": 32, "thm53": 64}


@dataclass(frozen=True)
class CheckSettings:
    seed: int = DEFAULT_SEED
    samples: int = 1_000_000
    nodes: int | None = None
    tol: float | None = None
    t_halfwidth: float = 0.5
    t_mesh: int = 20
    lines: int = 64
    bases: int = 10
    workers: int = 1

    def grid(self, check: str) -> SphericalGrid:
        return SphericalGrid.cube(self.nodes or DEFAULT_NODES[check], seed=self.seed)

    def mc(self, samples: int | None = None) -> MCConfig:
        return MCConfig(samples=samples or self.samples, seed=self.seed)

    @property
    def psh_tol(self) -> float:
        return CLOSED_FORM_TOL if self.tol is None else self.tol

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "nodes": self.nodes,
            "tol": self.tol,
            "t_halfwidth": self.t_halfwidth,
            "t_mesh": self.t_mesh,
            "lines": self.lines,
            "bases": self.bases,
        }


@dataclass
class CheckResult:
    check: str
    passed: bool
    summary: dict
    columns: tuple
    rows: list
    witness: dict | None = None
    settings: dict = field(default_factory=dict)

    @property
    def statement(self) -> str:
        return STATEMENTS[self.check]

    def to_dict(self) -> dict:
        return _jsonify(
            {
                "check": self.check,
                "statement": self.statement,
                "passed": self.passed,
                "settings": self.settings,
                "summary": self.summary,
                "witness": self.witness,
                "columns": list(self.columns),
                "rows": [list(r) for r in self.rows],
            }
        )


def _label(family: DomainFamily, name: str | None) -> str:
    return name or type(family).__name__


def _report_rows(report: PshReport) -> tuple:
    cols = ("label", "verdict", "min_slack", "tests_run", "tolerance")
    return cols, [(report.label, report.verdict, report.min_slack, report.tests_run, report.tolerance)]


def random_bases(family: DomainFamily, count: int, seed: int) -> list:
    """Seeded base points (X0, t0): |X0| in [0.5, 1.5], t0 in the inner half of the parameter disc."""
    rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(7,)))
    disc = family.param_disc
    out = []
    for _ in range(count):
        g = rng.standard_normal(2 * family.dim)
        X = g[: family.dim] + 1j * g[family.dim :]
        X *= rng.uniform(0.5, 1.5) / np.linalg.norm(X)
        t = disc.center + 0.5 * disc.radius * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        out.append((X, complex(t)))
    return out


def check_thm13(family: DomainFamily, settings: CheckSettings = CheckSettings(), name: str | None = None) -> CheckResult:
    label = _label(family, name)
    rep = volume_subharmonicity_test(
        family,
        family.param_disc.center,
        settings.t_halfwidth,
        settings.t_mesh,
        settings.grid("thm13"),
        settings.psh_tol,
        label,
    )
    summary = {"family": label, **rep.to_dict()}
    table = rep.extra["table"]
    del summary["table"]
    passed = rep.passed
    closed_err = rep.extra.get("closed_form_max_rel_error")
    if closed_err is not None:
        passed = passed and closed_err < 0.005
    rows = [(t.real, t.imag, V, f, s) for t, V, f, s in table]
    return CheckResult(
        "thm13", passed, summary, ("t_re", "t_im", "V", "neg_log_V", "stencil"), rows, summary["witness"], settings.to_dict()
    )


def _psh_family(check, family, settings, name):
    label = _label(family, name)
    bases = random_bases(family, settings.bases, settings.seed)
    rep = family_psh_test(
        family, bases, lines=settings.lines, tolerance=settings.psh_tol, seed=settings.seed, label=label
    )
    cols, rows = _report_rows(rep)
    summary = {"family": label, **rep.to_dict()}
    return CheckResult(check, rep.passed, summary, cols, rows, summary["witness"], settings.to_dict())


def check_thm14(family: DomainFamily, settings: CheckSettings = CheckSettings(), name: str | None = None) -> CheckResult:
    if not family.is_balanced:
        raise UnsupportedError("the log-gauge check needs a balanced family")
    return _psh_family("thm14", family, settings, name)


def check_thm15(family: DomainFamily, settings: CheckSettings = CheckSettings(), name: str | None = None) -> CheckResult:
    if not isinstance(family, HartogsBall):
        raise UnsupportedError("this check needs a hartogs_ball family")
    return _psh_family("thm15", family, settings, name)


def check_case2(family: DomainFamily, settings: CheckSettings = CheckSettings(), name: str | None = None) -> CheckResult:
    label = _label(family, name)
    hw, mesh = settings.t_halfwidth, settings.t_mesh
    axis = np.linspace(-hw, hw, mesh + 1)
    T = complex(family.param_disc.center) + axis[:, None] + 1j * axis[None, :]
    origin = np.zeros(family.dim, dtype=complex)
    f = np.empty(T.shape)
    for idx in np.ndindex(T.shape):
        f[idx] = -math.log(directional_distance(family, complex(T[idx]), origin, 1))
    rep = laplacian_grid_test(None, family.param_disc.center, hw, mesh, settings.psh_tol, values=f, label=label)
    summary = {"family": label, **rep.to_dict()}
    rows = [(T[idx].real, T[idx].imag, f[idx]) for idx in np.ndindex(T.shape)]
    return CheckResult(
        "case2", rep.passed, summary, ("t_re", "t_im", "neg_log_dist"), rows, summary["witness"], settings.to_dict()
    )


def check_claim21(settings: CheckSettings = CheckSettings()) -> CheckResult:
    grid = settings.grid("claim21")
    rows = []
    ok = True
    for r, rtol in ((0.0, 1e-3), (0.5, 5e-3)):
        A = BallAzukawa(1.0, (r, 0.0))
        exact = ball_indicatrix_volume(1.0, (r, 0.0))
        quad = indicatrix_volume_spherical(A, grid)
        mc = indicatrix_volume_mc(A, required_halfwidth(A), settings.samples, settings.seed, workers=settings.workers)
        quad_ok = abs(quad.value - exact) <= rtol * exact
        mc_ok = abs(mc.value - exact) <= 3 * mc.error
        ok = ok and quad_ok and mc_ok
        rows.append(("volume", r, "", quad.method, quad.value, quad.error, exact, quad_ok))
        rows.append(("volume", r, "", mc.method, mc.value, mc.error, exact, mc_ok))
    for r in (0.0, 0.5):
        A = BallAzukawa(1.0, (r, 0.0))
        for eps in (1.0, 0.5, 0.25):
            ident = epsilon_identity_check(A, eps, grid, settings.mc(), workers=settings.workers)
            good = ident.within()
            ok = ok and good
            rows.append(("epsilon", r, eps, "sphere_vs_ball", ident.lhs, ident.lhs_error, ident.rhs, good))
    cols = ("kind", "r", "epsilon", "method", "value", "error", "reference", "ok")
    summary = {"volume_centered_exact": math.pi**2 / 2, "volume_off_center_exact": 27 * math.pi**2 / 128}
    return CheckResult("claim21", ok, summary, cols, rows, None, settings.to_dict())


def check_lemma54(settings: CheckSettings = CheckSettings()) -> CheckResult:
    t_list = (-4.0, -6.0, -8.0, -10.0)
    grid = settings.grid("lemma54")
    rows = []
    V = ball_indicatrix_volume(1.0, (0.5, 0.0))
    radial = sublevel_mass_limit(1.0, (0.5, 0.0), t_list, method="radial", grid=grid)
    mc = sublevel_mass_limit(1.0, (0.5, 0.0), t_list, settings.mc(), workers=settings.workers)
    gaps = [abs(p.scaled_mass - V) for p in radial]
    monotone = all(a > b for a, b in zip(gaps, gaps[1:]))
    close = gaps[-1] <= 0.05 * V
    agree = all(abs(m.scaled_mass - q.scaled_mass) <= 3 * m.error + q.error for m, q in zip(mc, radial))
    for p in radial + mc:
        rows.append((0.5, p.t, p.method, p.scaled_mass, p.error, V, p.flagged))
    V0 = ball_indicatrix_volume(1.0, (0.0, 0.0))
    centered = sublevel_mass_limit(1.0, (0.0, 0.0), t_list, settings.mc(), workers=settings.workers)
    vals = [p.scaled_mass for p in centered]
    err = max(p.error for p in centered)
    constant = bool(max(vals) - min(vals) <= 3 * err and abs(np.mean(vals) - V0) <= 3 * err)
    for p in centered:
        rows.append((0.0, p.t, p.method, p.scaled_mass, p.error, V0, p.flagged))
    summary = {
        "V_I": V,
        "radial_gaps": gaps,
        "monotone": monotone,
        "within_5pct_at_last_t": close,
        "montecarlo_agrees": agree,
        "centered_constant": constant,
    }
    ok = monotone and close and agree and constant
    cols = ("r", "t", "method", "scaled_mass", "error", "V_I", "flagged")
    return CheckResult("lemma54", ok, summary, cols, rows, None, settings.to_dict())


def check_thm53(settings: CheckSettings = CheckSettings()) -> CheckResult:
    grid = settings.grid("thm53")
    rows = []
    ok = True
    ratios = {}
    tol = 0.01 if settings.tol is None else settings.tol
    for r in (0.0, 0.25, 0.5, 0.8):
        res = theorem53_check(1.0, (r, 0.0), grid, settings.mc(min(settings.samples, 400_000)), tol, settings.workers)
        good = res.holds and abs(res.minimal_norm - res.indicatrix_volume) <= max(
            tol * res.indicatrix_volume, 3 * res.minimal_norm_error
        )
        if r == 0:
            good = good and abs(res.volume_ratio - 1) <= 0.005
        else:
            good = good and res.volume_ratio < 1
        if r == 0.5:
            good = good and res.volume_ratio < 0.9
        ok = ok and good
        ratios[str(r)] = {"norm_ratio": res.norm_ratio, "volume_ratio": res.volume_ratio}
        rows.append((r, res.minimal_norm, res.minimal_norm_error, res.indicatrix_volume, res.robin_bound, good))
    cols = ("r", "minimal_norm", "minimal_norm_error", "V_I", "robin_bound", "ok")
    return CheckResult("thm53", ok, {"ratios": ratios}, cols, rows, None, settings.to_dict())


RUNNERS = {
    "thm13": check_thm13,
    "thm14": check_thm14,
    "thm15": check_thm15,
    "case2": check_case2,
    "claim21": check_claim21,
    "lemma54": check_lemma54,
    "thm53": check_thm53,
}

FAMILY_CHECKS = ("thm13", "thm14", "thm15", "case2")


def with_overrides(settings: CheckSettings, **kwargs) -> CheckSettings:
    return replace(settings, **{k: v for k, v in kwargs.items() if v is not None})
