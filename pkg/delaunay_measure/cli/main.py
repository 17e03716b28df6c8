from __future__ import annotations

import csv
import functools
import io
import json
import sys
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import click
import numpy as np

from common.settings import CONVENTIONS, numeric_overrides
from common.utils.logging_setup import setup_logger
from common.utils.timer import BlockTimer

from ..chern import chern_check
from ..combinatorics import enumerate_3trees, find_edge_basis
from ..errors import MeasureError
from ..fixtures import FIXTURES, named_fixture
from ..measure import evaluate_routes, tree_sum, tree_term
from ..mesh import PointConfig, config_from_dict, delaunay_build, render_svg, triangulation_to_dict
from ..operators import assemble_operators
from ..sampler import TARGET_KAHLER, TARGET_UNIT, SampleStream, run_chains
from ..verify import run_identity_suite

logger = setup_logger(__name__)


# ── Helpers ──────────────────────────────────────────────────────────────────

def _parse_indices(value: Optional[str], count: int, label: str) -> Optional[tuple]:
    if value is None:
        return None
    try:
        parts = tuple(float(p) if label == "bounds" else int(p) for p in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected {count} comma-separated numbers, got {value!r}", param_hint=f"--{label}")
    if len(parts) != count:
        raise click.BadParameter(f"expected {count} values, got {len(parts)}", param_hint=f"--{label}")
    return parts


def _load(ctx: click.Context, source: Optional[str], fixture: Optional[str]) -> PointConfig:
    if (source is None) == (fixture is None):
        raise click.UsageError("give exactly one of INPUT or --fixture")
    fixed = ctx.obj.get("fixed")
    convention = ctx.obj.get("convention")
    if fixture is not None:
        config = named_fixture(fixture)
        if fixed is None and convention is None:
            return config
        payload = config.to_dict()
        payload["name"] = config.name
        return config_from_dict(payload, convention=convention, fixed=fixed)
    try:
        payload = json.loads(Path(source).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise click.BadParameter(f"cannot read point set: {exc}", param_hint="INPUT")
    payload.setdefault("name", Path(source).stem)
    try:
        return config_from_dict(payload, convention=convention, fixed=fixed)
    except MeasureError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise click.BadParameter(f"invalid point set: {exc}", param_hint="INPUT")


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info("Wrote %s", path)


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


def _json(payload) -> str:
    return json.dumps(payload, indent=2)


def reports_errors(command: Callable) -> Callable:
    """Turn library errors into a JSON message on stderr and exit code 1."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except MeasureError as exc:
            logger.error("%s failed: %s", command.__name__, exc.message)
            click.echo(json.dumps(exc.to_dict()), err=True)
            sys.exit(1)

    return wrapper


input_argument = click.argument("source", metavar="INPUT", required=False, type=click.Path(dir_okay=False))
fixture_option = click.option("--fixture", type=click.Choice(sorted(FIXTURES)), help="Use a named configuration instead of INPUT.")
out_option = click.option("--out", type=click.Path(dir_okay=False), help="Write to this file instead of stdout.")


# ── Group ────────────────────────────────────────────────────────────────────

@click.group()
@click.option("--tol-geom", type=click.FloatRange(min=0, min_open=True), help="Predicate tolerance (TOL_GEOM).")
@click.option("--tol-agree", type=click.FloatRange(min=0, min_open=True), help="Route agreement tolerance (TOL_AGREE).")
@click.option("--convention", type=click.Choice(CONVENTIONS), help="How the sphere is compactified.")
@click.option("--fixed", help="Three fixed vertex indices, e.g. 0,1,2.")
@click.pass_context
def cli(ctx: click.Context, tol_geom, tol_agree, convention, fixed) -> None:
    """Conformally invariant measure on Delaunay triangulations."""
    ctx.ensure_object(dict)
    # environment and cached settings are restored when the command finishes
    ctx.with_resource(numeric_overrides(tol_geom=tol_geom, tol_agree=tol_agree, convention=convention))
    ctx.obj["convention"] = convention
    ctx.obj["fixed"] = _parse_indices(fixed, 3, "fixed")


# ── Commands ─────────────────────────────────────────────────────────────────

@cli.command()
@input_argument
@fixture_option
@out_option
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), help="Also write an SVG drawing here.")
@click.option("--format", "fmt", type=click.Choice(["json", "svg"]), default="json", show_default=True)
@click.pass_context
@reports_errors
def build(ctx, source, fixture, out, svg_path, fmt) -> None:
    """Delaunay triangulation of a point set."""
    config = _load(ctx, source, fixture)
    with BlockTimer("delaunay build"):
        t = delaunay_build(config)
    if svg_path:
        Path(svg_path).write_text(render_svg(t), encoding="utf-8")
        logger.info("Wrote %s", svg_path)
    _write(render_svg(t) if fmt == "svg" else _json(triangulation_to_dict(t)), out)


@cli.command()
@input_argument
@fixture_option
@out_option
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--fd/--no-fd", default=False, help="Include the finite-difference route.")
@click.option("--trees/--no-trees", "with_trees", default=True, help="Include the 3-tree route when N allows it.")
@click.pass_context
@reports_errors
def measure(ctx, source, fixture, out, fmt, fd, with_trees) -> None:
    """𝒟_T(z) by every route, with the agreement report."""
    config = _load(ctx, source, fixture)
    t = delaunay_build(config)
    ops = assemble_operators(t, find_edge_basis(t))
    report = evaluate_routes(ops, include_trees=with_trees, include_fd=fd)
    if fmt == "csv":
        rows = [(v.route, v.log_magnitude, v.phase.real, v.phase.imag) for v in report.values]
        _write(_csv(("route", "log_magnitude", "phase_re", "phase_im"), rows), out)
    else:
        payload = report.to_dict()
        payload.update({"name": config.name, "n_free": config.n_free})
        _write(_json(payload), out)
    if not report.agree:
        sys.exit(1)


@cli.command()
@input_argument
@fixture_option
@out_option
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.pass_context
@reports_errors
def trees(ctx, source, fixture, out, fmt) -> None:
    """Triangle-rooted spanning 3-trees of the fixed face, with their signs."""
    config = _load(ctx, source, fixture)
    t = delaunay_build(config)
    if t.fixed_face is None:
        raise click.UsageError("the fixed vertices do not span a face; pass --fixed with a face")
    found = enumerate_3trees(t, t.fixed_face)
    if fmt == "csv":
        rows = [
            (
                k,
                f.epsilon,
                " ".join(f"{a}-{b}" for a, b in f.arrows_first),
                " ".join(f"{a}-{b}" for a, b in f.arrows_second),
                f.third_is_tree,
            )
            for k, f in enumerate(found)
        ]
        _write(_csv(("index", "epsilon", "arrows_first", "arrows_second", "third_is_tree"), rows), out)
        return
    raw = tree_sum(t, found)
    payload = {
        "name": config.name,
        "n_free": config.n_free,
        "count": len(found),
        "sum": [raw.real, raw.imag],
        "trees": [dict(f.to_dict(t), term=[tree_term(config, f).real, tree_term(config, f).imag]) for f in found],
    }
    _write(_json(payload), out)


@cli.command()
@input_argument
@fixture_option
@out_option
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--hessian/--no-hessian", default=None, help="Force the finite-difference Hessian check on or off.")
@click.pass_context
@reports_errors
def verify(ctx, source, fixture, out, fmt, seed, hessian) -> None:
    """Run every applicable identity; exit 1 if any fails."""
    config = _load(ctx, source, fixture)
    report = run_identity_suite(config, seed=seed, with_hessian=hessian)
    if fmt == "csv":
        rows = [(c.name, c.residual, c.tolerance, c.passed) for c in report.checks]
        _write(_csv(("identity", "residual", "tolerance", "passed"), rows), out)
    else:
        _write(_json(report.to_dict()), out)
    if not report.ok:
        sys.exit(1)


@cli.command()
@input_argument
@fixture_option
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="JSON-lines sample file.")
@click.option("--steps", type=click.IntRange(min=1), default=10_000, show_default=True)
@click.option("--sigma", type=click.FloatRange(min=0, min_open=True), default=0.05, show_default=True)
@click.option("--thin", type=click.IntRange(min=1), default=None, help="Keep every n-th state (SAMPLER_THIN).")
@click.option("--seed", type=int, default=None, help="Root seed (SAMPLER_SEED).")
@click.option("--chains", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Threads for parallel chains.")
@click.option("--target", type=click.Choice([TARGET_KAHLER, TARGET_UNIT]), default=TARGET_KAHLER, show_default=True)
@click.option("--bounds", help="Proposal window x_min,x_max,y_min,y_max.")
@click.pass_context
@reports_errors
def sample(ctx, source, fixture, out, steps, sigma, thin, seed, chains, workers, target, bounds) -> None:
    """Metropolis–Hastings chains under the measure."""
    config = _load(ctx, source, fixture)
    window = _parse_indices(bounds, 4, "bounds")
    base = Path(out)
    paths = [base] if chains == 1 else [base.with_name(f"{base.stem}.{k}{base.suffix}") for k in range(chains)]
    streams = [SampleStream(p) for p in paths]
    for stream in streams:
        stream.reset()

    results = run_chains(
        config, chains, steps, sigma,
        seed=seed, thin=thin, workers=workers, target=target, bounds=window, streams=streams,
    )
    summary = {
        "chains": [
            {"path": str(p), "acceptance_rate": r.acceptance_rate, "samples": len(r.samples), "steps": r.state.step}
            for p, r in zip(paths, results)
        ],
        "mean_acceptance": float(np.mean([r.acceptance_rate for r in results])),
    }
    click.echo(_json(summary))


@cli.command()
@input_argument
@fixture_option
@out_option
@click.option("--oracle/--no-oracle", default=True, help="Cross-check with the wedge expansion.")
@click.pass_context
@reports_errors
def chern(ctx, source, fixture, out, oracle) -> None:
    """Pfaffian of Σ_v 4π²ψ_v on the basis coordinates against 2^{2N}."""
    config = _load(ctx, source, fixture)
    t = delaunay_build(config)
    report = chern_check(t, find_edge_basis(t), with_oracle=oracle)
    _write(_json(report.to_dict()), out)
    if not report.passed:
        sys.exit(1)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="delaunay-measure", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run())
