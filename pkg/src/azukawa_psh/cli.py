"""Command-line front end.

    azukawa-psh azukawa eval --ball r=0.5 --X 1,0
    azukawa-psh indicatrix volume --ball r=0.5 --nodes 64
    azukawa-psh check thm14 --family scaled-polydisc.json
    azukawa-psh report all --out results/
    azukawa-psh run --config experiment.json

Exit codes: 0 when every asserted check passes, 1 when a check fails,
2 for invalid configuration or input.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import click
import jsonschema
import numpy as np

from . import catalogue
from .artifacts import atomic_write, to_csv_text, to_json_text
from .azukawa import BallAzukawa, family_evaluator
from .checks import FAMILY_CHECKS, RUNNERS, STATEMENTS, CheckResult, CheckSettings
from .domains import CPoint, HartogsBall, family_from_dict
from .errors import AzukawaPshError, ConvergenceError
from .indicatrix import (
    ball_indicatrix_volume,
    hartogs_indicatrix_volume,
    indicatrix_volume_mc,
    indicatrix_volume_spherical,
    required_halfwidth,
)
from .montecarlo import DEFAULT_SEED
from .sphere import SphericalGrid

OUT_ENV = "AZUKAWA_PSH_OUT"
DEFAULT_OUT_DIR = "azukawa-psh-out"

DEFAULT_FAMILY = {"thm13": "hartogs", "thm14": "scaled-polydisc", "thm15": "hartogs", "case2": "scaled-polydisc"}

# (check, family, expected verdict) run by `report all`
REPORT_PLAN = (
    [("claim21", None, True), ("thm53", None, True), ("lemma54", None, True)]
    + [("thm13", name, True) for name in ("hartogs", "fixed-ball", *catalogue.BALANCED)]
    + [("thm13", "superharmonic-counterexample", False)]
    + [("thm14", name, True) for name in catalogue.BALANCED]
    + [("thm14", "superharmonic-counterexample", False)]
    + [("thm15", "hartogs", True)]
    + [("case2", name, True) for name in (*catalogue.BALANCED, "hartogs", "fixed-ball")]
    + [("case2", "superharmonic-counterexample", False)]
)


class UsageFailure(Exception):
    """Invalid configuration or input; reported with exit code 2."""


def _schema(name: str) -> dict:
    return json.loads(resources.files("azukawa_psh").joinpath("schemas", name).read_text(encoding="utf-8"))


def _validate(doc, schema_name: str, source: str):
    validator = jsonschema.Draft202012Validator(_schema(schema_name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        lines = []
        for err in errors:
            where = ".".join(str(p) for p in err.absolute_path) or "<root>"
            lines.append(f"{source}: field '{where}': {err.message}")
        raise UsageFailure("\n".join(lines))


def _load_json(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageFailure(f"{path}: cannot read: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageFailure(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def load_family(spec) -> tuple:
    """Resolve a family from a file path, a catalogue name or an inline document. Returns (name, family)."""
    if isinstance(spec, dict):
        doc, name, source = spec, spec.get("variant", "family"), "family"
    else:
        path = Path(spec)
        if path.exists():
            doc, name, source = _load_json(path), path.stem, str(path)
        else:
            name = path.name.removesuffix(".json")
            if name not in catalogue.FAMILIES:
                raise UsageFailure(
                    f"{spec}: no such file and not a catalogue family (known: {', '.join(sorted(catalogue.FAMILIES))})"
                )
            return name, catalogue.FAMILIES[name]
    _validate(doc, "family.schema.json", source)
    try:
        return name, family_from_dict(doc)
    except (AzukawaPshError, ValueError) as exc:
        raise UsageFailure(f"{source}: {exc}") from None


def load_config(path) -> dict:
    if path is None:
        return {}
    doc = _load_json(Path(path))
    _validate(doc, "config.schema.json", str(path))
    return doc


def parse_ball(spec: str) -> tuple:
    """'r=0.5' or 'R=2,r=0.5,n=2' -> (R, pole). The pole is (r, 0, ..., 0)."""
    vals = {"R": 1.0, "r": 0.0, "n": 2.0}
    for part in filter(None, (p.strip() for p in spec.split(","))):
        key, sep, value = part.partition("=")
        if not sep or key not in vals:
            raise UsageFailure(f"--ball: cannot parse {part!r}; expected R=<radius>, r=<pole offset>, n=<dimension>")
        try:
            vals[key] = float(value)
        except ValueError:
            raise UsageFailure(f"--ball: {key} must be a number, got {value!r}") from None
    n = int(vals["n"])
    if n < 1 or n != vals["n"]:
        raise UsageFailure(f"--ball: n must be a positive integer, got {vals['n']}")
    pole = np.zeros(n, dtype=complex)
    pole[0] = vals["r"]
    return vals["R"], pole


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageFailure(f"cannot parse complex number {text!r}") from None


def parse_vector(text: str) -> np.ndarray:
    return np.array([parse_complex(p) for p in text.split(",")], dtype=complex)


@dataclass
class Options:
    seed: int = DEFAULT_SEED
    samples: int | None = None
    nodes: int | None = None
    tol: float | None = None
    out: str | None = None
    fmt: str | None = None
    workers: int = 1
    grids: dict = field(default_factory=dict)
    family: object = None
    config: dict = field(default_factory=dict)

    @classmethod
    def build(cls, config: dict, **flags) -> "Options":
        grids = config.get("grids", {})
        mc = config.get("mc", {})
        tols = config.get("tolerances", {})
        output = config.get("output", {})

        def pick(flag, default):
            return flag if flag is not None else default

        return cls(
            seed=pick(flags.get("seed"), mc.get("seed", DEFAULT_SEED)),
            samples=pick(flags.get("samples"), mc.get("samples")),
            nodes=pick(flags.get("nodes"), grids.get("sphere_nodes")),
            tol=pick(flags.get("tol"), tols.get("psh")),
            out=pick(flags.get("out"), output.get("path")),
            fmt=pick(flags.get("fmt"), output.get("format")),
            workers=pick(flags.get("workers"), config.get("workers", 1)),
            grids=grids,
            family=pick(flags.get("family"), config.get("family")),
            config=config,
        )

    def settings(self) -> CheckSettings:
        if self.nodes is not None and (self.nodes < 4 or self.nodes % 4):
            raise UsageFailure(f"--nodes must be a positive multiple of 4, got {self.nodes}")
        kwargs = {
            "seed": self.seed,
            "nodes": self.nodes,
            "tol": self.tol,
            "workers": self.workers,
            "t_halfwidth": self.grids.get("t_halfwidth", 0.5),
            "t_mesh": self.grids.get("t_mesh", 20),
            "lines": self.grids.get("lines", 64),
            "bases": self.grids.get("bases", 10),
        }
        if self.samples is not None:
            kwargs["samples"] = self.samples
        return CheckSettings(**kwargs)


def common_options(fn):
    """Flags shared by every leaf command; values override the --config file."""
    opts = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Experiment configuration (JSON)."),
        click.option("--seed", type=int, help="Master seed for every random stream."),
        click.option("--samples", type=click.IntRange(min=1), help="Monte Carlo sample count."),
        click.option("--nodes", type=int, help="Sphere grid nodes per angle (nodes^3-equivalent Hopf grid)."),
        click.option("--tol", type=float, help="Slack tolerance for subharmonicity tests."),
        click.option("--out", type=click.Path(), help="Output file (directory for `report all`)."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Output format."),
        click.option("--workers", type=click.IntRange(min=1), help="Threads for Monte Carlo chunks."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)

    @functools.wraps(fn)
    def wrapper(config_path, **kwargs):
        try:
            config = load_config(config_path)
            flags = {k: kwargs.pop(k) for k in ("seed", "samples", "nodes", "tol", "out", "fmt", "workers")}
            flags["family"] = kwargs.pop("family", None)
            opts = Options.build(config, **flags)
            code = fn(opts, **kwargs)
        except UsageFailure as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except ConvergenceError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except AzukawaPshError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        sys.exit(code or 0)

    return wrapper


def emit(opts: Options, default_fmt: str, payload: dict, columns, rows):
    fmt = opts.fmt or default_fmt
    text = to_json_text(payload) if fmt == "json" else to_csv_text(columns, rows)
    if opts.out:
        atomic_write(opts.out, text)
        click.echo(f"wrote {opts.out}", err=True)
    else:
        click.echo(text, nl=False)


def _family_or_ball(opts: Options, ball: str | None):
    if ball and opts.family:
        raise UsageFailure("give either --ball or --family, not both")
    if ball:
        return "ball", parse_ball(ball)
    if opts.family:
        return "family", load_family(opts.family)
    raise UsageFailure("one of --ball or --family is required")


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Pluricomplex Green functions, Azukawa pseudometrics and subharmonicity checks."""


@main.group()
def azukawa():
    """Azukawa pseudometric evaluation."""


@azukawa.command("eval")
@click.option("--ball", help="Ball instance, e.g. 'r=0.5' or 'R=2,r=0.5'.")
@click.option("--family", help="Family JSON file or catalogue name.")
@click.option("--t", "t_text", default=None, help="Parameter t (complex), default the disc center.")
@click.option("--X", "x_texts", multiple=True, help="Tangent vector, comma-separated complex entries. Repeatable.")
@common_options
def azukawa_eval(opts: Options, ball, t_text, x_texts):
    """Evaluate log A(X) for each --X."""
    t = parse_complex(t_text) if t_text else _t_from_config(opts)
    if x_texts:
        points = [parse_vector(x) for x in x_texts]
    else:
        points = [CPoint.from_json(p).array for p in opts.config.get("points", [])]
    return run_eval(opts, ball or opts.config.get("ball"), t, points)


def _t_from_config(opts: Options):
    t = opts.config.get("t")
    return None if t is None else complex(*t)


def run_eval(opts: Options, ball, t, points) -> int:
    kind, obj = _family_or_ball(opts, ball)
    if kind == "ball":
        R, pole = obj
        A = BallAzukawa(R, pole)
        t = None
        source = f"ball R={R} pole={CPoint(pole).to_json()}"
    else:
        name, family = obj
        t = complex(family.param_disc.center) if t is None else t
        A = family_evaluator(family, t)
        source = f"family {name}"
    if not points:
        raise UsageFailure("at least one tangent vector (--X) is required")
    rows = []
    for X in points:
        value = float(A(X))
        rows.append((json.dumps(CPoint(X).to_json()), "" if t is None else repr(t), value))
    payload = {
        "source": source,
        "t": None if t is None else [t.real, t.imag],
        "values": [{"X": json.loads(r[0]), "log_A": r[2]} for r in rows],
    }
    emit(opts, "csv", payload, ("X", "t", "log_A"), rows)
    return 0


@main.group()
def indicatrix():
    """Indicatrix volumes."""


@indicatrix.command("volume")
@click.option("--ball", help="Ball instance, e.g. 'r=0.5'.")
@click.option("--family", help="Family JSON file or catalogue name.")
@click.option("--t", "t_text", default=None, help="Parameter t (complex), default the disc center.")
@click.option(
    "--method",
    type=click.Choice(["spherical", "montecarlo", "both"]),
    default=None,
    help="Volume method (default spherical).",
)
@common_options
def indicatrix_volume(opts: Options, ball, t_text, method):
    """Euclidean volume of {X : A(X) < 0}."""
    t = parse_complex(t_text) if t_text else _t_from_config(opts)
    method = method or opts.config.get("method", "spherical")
    return run_volume(opts, ball or opts.config.get("ball"), t, method)


def run_volume(opts: Options, ball, t, method) -> int:
    kind, obj = _family_or_ball(opts, ball)
    exact = None
    if kind == "ball":
        R, pole = obj
        A = BallAzukawa(R, pole)
        source, t = f"ball R={R} r={pole[0].real}", None
        if len(pole) == 2:
            exact = ball_indicatrix_volume(R, pole)
    else:
        name, family = obj
        t = complex(family.param_disc.center) if t is None else t
        A = family_evaluator(family, t)
        source = name
        if isinstance(family, HartogsBall):
            exact = float(hartogs_indicatrix_volume(family.phi(t)))
    settings = opts.settings()
    estimates = []
    if method in ("spherical", "both"):
        grid = SphericalGrid.cube(settings.nodes or 64, dim=A.dim, samples=settings.samples, seed=settings.seed)
        estimates.append(indicatrix_volume_spherical(A, grid))
    if method in ("montecarlo", "both"):
        estimates.append(
            indicatrix_volume_mc(A, required_halfwidth(A), settings.samples, settings.seed, workers=settings.workers)
        )
    columns = ("source", "t", "method", "value", "error", "size", "exact")
    rows = []
    for est in estimates:
        size = est.samples
        rows.append((source, "" if t is None else repr(t), est.method, est.value, est.error, size, exact))
    payload = {
        "source": source,
        "t": None if t is None else [t.real, t.imag],
        "exact": exact,
        "estimates": [e.to_dict() for e in estimates],
    }
    emit(opts, "csv", payload, columns, rows)
    return 0


@main.group()
def check():
    """Reproduction checks, one per verified statement."""


def _print_header(result: CheckResult, label: str | None):
    tag = f"[{result.check}]" + (f" {label}" if label else "")
    click.echo(f"{tag} {result.statement}", err=True)
    click.echo(f"{tag} {'PASS' if result.passed else 'FAIL'}", err=True)
    if not result.passed:
        witness = result.to_dict()["witness"]
        if witness is not None:
            click.echo(f"{tag} witness: {json.dumps(witness)}", err=True)
        for k in ("min_slack", "tolerance"):
            if k in result.summary:
                click.echo(f"{tag} {k}: {result.summary[k]}", err=True)


def run_check(opts: Options, name: str) -> int:
    settings = opts.settings()
    label = None
    if name in FAMILY_CHECKS:
        label, family = load_family(opts.family or DEFAULT_FAMILY[name])
        result = RUNNERS[name](family, settings, name=label)
    else:
        if opts.family:
            raise UsageFailure(f"check {name} runs on fixed ball instances and takes no --family")
        result = RUNNERS[name](settings)
    _print_header(result, label)
    emit(opts, "json", result.to_dict(), result.columns, result.rows)
    return 0 if result.passed else 1


def _make_check_command(name: str):
    takes_family = name in FAMILY_CHECKS

    def command(opts: Options, **_):
        return run_check(opts, name)

    command.__doc__ = STATEMENTS[name] + "."
    command.__name__ = f"check_{name}"
    fn = common_options(command)
    if takes_family:
        fn = click.option("--family", help=f"Family JSON file or catalogue name (default {DEFAULT_FAMILY[name]}).")(fn)
    return check.command(name)(fn)


for _name in RUNNERS:
    _make_check_command(_name)


@main.group()
def report():
    """Batch reproduction."""


def run_report(opts: Options) -> int:
    out_dir = Path(opts.out or os.environ.get(OUT_ENV) or DEFAULT_OUT_DIR)
    settings = opts.settings()
    summary = []
    all_ok = True
    for name, family_name, expected in REPORT_PLAN:
        if family_name is None:
            result = RUNNERS[name](settings)
            stem = name
        else:
            result = RUNNERS[name](catalogue.get_family(family_name), settings, name=family_name)
            stem = f"{name}-{family_name}"
        ok = result.passed == expected
        all_ok = all_ok and ok
        atomic_write(out_dir / f"{stem}.json", to_json_text(result.to_dict()))
        atomic_write(out_dir / f"{stem}.csv", to_csv_text(result.columns, result.rows))
        summary.append(
            {
                "check": name,
                "family": family_name,
                "statement": result.statement,
                "passed": result.passed,
                "expected": "pass" if expected else "fail",
                "as_expected": ok,
            }
        )
        status = "ok" if ok else "UNEXPECTED"
        click.echo(
            f"[{name}] {family_name or '-'}: {'PASS' if result.passed else 'FAIL'} (expected {'pass' if expected else 'fail'}) {status}",
            err=True,
        )
    atomic_write(
        out_dir / "summary.json",
        to_json_text({"settings": settings.to_dict(), "all_as_expected": all_ok, "checks": summary}),
    )
    click.echo(f"wrote {len(summary) * 2 + 1} artifacts to {out_dir}", err=True)
    return 0 if all_ok else 1


@report.command("all")
@common_options
def report_all(opts: Options):
    """Run every check on the catalogue; expected failures must fail."""
    return run_report(opts)


@main.command("run")
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False), help="Experiment configuration (JSON).")
def run_config(config_path):
    """Run the command named in a configuration file."""
    try:
        config = load_config(config_path)
        command = config.get("command")
        if command is None:
            raise UsageFailure(f"{config_path}: field 'command' is required for `run`")
        opts = Options.build(config)
        group, _, sub = command.partition(" ")
        if group == "check":
            code = run_check(opts, sub)
        elif group == "report":
            code = run_report(opts)
        elif group == "azukawa":
            points = [CPoint.from_json(p).array for p in config.get("points", [])]
            code = run_eval(opts, config.get("ball"), _t_from_config(opts), points)
        else:
            code = run_volume(opts, config.get("ball"), _t_from_config(opts), config.get("method", "spherical"))
    except UsageFailure as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except ConvergenceError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except AzukawaPshError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    sys.exit(code)


if __name__ == "__main__":
    main()
