"""Command-line interface: generate, cpd, decompose, bottleneck, stats."""

from __future__ import annotations

import csv
import datetime as _dt
import json
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click
import numpy as np

from . import __version__
from .cpd import ConnectedPD, connected_pd, has_negative, render_cpd
from .courses import enumerate_azc_bfs
from .decompose_finite import (
    DecompositionError,
    InsufficientCourses,
    build_coefficient_matrix,
    builtin_indecomposables,
    decompose,
    load_indecomposables,
)
from .filtrations import (
    DEFAULT_POINT_CAP,
    GENERATOR,
    LadderFiltration,
    LadderTriplet,
    clique_model,
    critical_values,
    homology_rep,
    ladder_filtration,
    linial_meshulam_model,
    thinning_triplet,
)
from .grid_poset import CapacityError
from .quiver_rep import Representation
from .stability import NotIntervalDecomposable, bottleneck_distance

EXIT_USAGE, EXIT_SCHEMA, EXIT_CAPACITY, EXIT_DOMAIN = 2, 3, 4, 5


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None = None
    prime: int = 2
    versions: dict = field(default_factory=lambda: {
        "cladder": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "generator": GENERATOR,
    })
    timestamps: dict = field(default_factory=dict)

    def start(self) -> "RunManifest":
        self.timestamps["started"] = _now()
        return self

    def finish(self) -> dict:
        self.timestamps["finished"] = _now()
        return asdict(self)


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


class SchemaError(click.ClickException):
    exit_code = EXIT_SCHEMA


class CapacityExceeded(click.ClickException):
    exit_code = EXIT_CAPACITY


class DomainError(click.ClickException):
    exit_code = EXIT_DOMAIN


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON in {path}: {exc}") from exc


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=1) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def select_thresholds(values: list[float], n: int | None, rng: np.random.Generator) -> list[float]:
    """All values, or ``n`` of them drawn without replacement and sorted."""
    if n is None or n >= len(values):
        if n is not None and n > len(values):
            raise ValueError(f"only {len(values)} critical values, {n} requested")
        return list(values)
    idx = np.sort(rng.choice(len(values), size=n, replace=False))
    return [values[i] for i in idx]


def _load_target(path: str, k: int, n: int | None, seed: int | None, prime: int):
    """A ladder Representation, or a filtration built from a triplet file."""
    obj = _read_json(path)
    schema = obj.get("schema", "")
    try:
        if schema.startswith("cladder.representation"):
            return Representation.from_json(obj), None
        if schema.startswith("cladder.triplet") or "simplices" in obj:
            triplet = LadderTriplet.from_json(obj)
            values = critical_values(triplet, k)
            th = select_thresholds(values, n, np.random.default_rng(seed))
            return ladder_filtration(triplet, th), th
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"invalid input {path}: {exc}") from exc
    raise SchemaError(f"unsupported schema {schema!r} in {path}")


@click.group()
@click.version_option(__version__)
def main():
    """Interval approximations and connected persistence diagrams on commutative ladders."""


# ---------------------------------------------------------------- generate


@main.command()
@click.argument("model", type=click.Choice(["thinning", "clique", "dlm"]))
@click.option("--m", "m", type=click.IntRange(min=1), default=8, show_default=True,
              help="Number of vertices or points.")
@click.option("--d", "d", type=click.IntRange(min=1), default=2, show_default=True,
              help="Simplex dimension for dlm.")
@click.option("--dim", "ambient", type=click.Choice(["2", "3"]), default="2", show_default=True,
              help="Ambient dimension of the thinning point cloud.")
@click.option("--max-dim", type=click.IntRange(1, 3), default=2, show_default=True,
              help="Largest simplex dimension kept.")
@click.option("--cap", type=click.IntRange(min=1), default=DEFAULT_POINT_CAP, show_default=True,
              help="Maximum number of points.")
@click.option("--seed", type=int, default=0, show_default=True, help="PRNG seed.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if absent).")
def generate(model, m, d, ambient, max_dim, cap, seed, out):
    """Sample a random ladder triplet (complex with two filters) as JSON."""
    manifest = RunManifest("generate", {"model": model, "m": m, "d": d, "dim": ambient,
                                        "max_dim": max_dim, "cap": cap}, seed).start()
    try:
        if model == "clique":
            if m < 3:
                raise click.UsageError("clique needs --m >= 3")
            triplet = clique_model(m, seed, max_dim)
        elif model == "dlm":
            if not 1 <= d <= m - 1:
                raise click.UsageError("dlm needs 1 <= --d <= --m - 1")
            triplet = linial_meshulam_model(m, d, seed)
        else:
            if m < 2:
                raise click.UsageError("thinning needs --m >= 2")
            rng = np.random.default_rng(seed)
            pts = rng.random((m, int(ambient)))
            size = int(rng.integers(1, m))
            sub = rng.choice(m, size=size, replace=False)
            triplet = thinning_triplet(pts, sub, max_dim, cap=cap)
            triplet.meta["points"] = pts.tolist()
    except CapacityError as exc:
        raise CapacityExceeded(str(exc)) from exc
    obj = triplet.to_json()
    obj["manifest"] = manifest.finish()
    _emit(obj, out)


# ---------------------------------------------------------------- cpd


@main.command()
@click.option("--input", "input_", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Triplet JSON or ladder representation JSON.")
@click.option("--k", type=click.IntRange(min=0), default=1, show_default=True, help="Homology degree.")
@click.option("--n", type=click.IntRange(min=1), default=None, help="Ladder length (random thresholds).")
@click.option("--prime", type=int, default=2, show_default=True, help="Coefficient field F_p.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for threshold selection.")
@click.option("--style", type=click.Choice(["triangles", "layered"]), default="triangles", show_default=True,
              help="Plot style for --svg.")
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Also write an SVG plot.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if absent).")
def cpd(input_, k, n, prime, seed, style, svg, out):
    """Connected persistence diagram of H_k of a filtration, or of a module."""
    manifest = RunManifest("cpd", {"input": input_, "k": k, "n": n, "style": style}, seed, prime).start()
    target, th = _load_target(input_, k, n, seed, prime)
    M = homology_rep(target, k, prime) if isinstance(target, LadderFiltration) else target
    if not M.shape.is_ladder:
        raise DomainError("connected persistence diagrams need a ladder module")
    try:
        diagram = connected_pd(M, "ss", th)
    except CapacityError as exc:
        raise CapacityExceeded(str(exc)) from exc
    if svg:
        Path(svg).write_text(render_cpd(diagram, style))
    obj = diagram.to_json()
    obj["has_negative"] = has_negative(diagram)
    obj["manifest"] = manifest.finish()
    _emit(obj, out)


# ---------------------------------------------------------------- decompose


@main.command("decompose")
@click.option("--input", "input_", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Ladder representation JSON or triplet JSON.")
@click.option("--n", type=click.Choice(["2", "3", "4"]), required=True, help="Ladder length.")
@click.option("--reps", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Representative list for CL(4) (packaged asset if absent).")
@click.option("--k", type=click.IntRange(min=0), default=1, show_default=True, help="Homology degree.")
@click.option("--prime", type=int, default=2, show_default=True, help="Coefficient field F_p.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for threshold selection.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if absent).")
def decompose_cmd(input_, n, reps, k, prime, seed, out):
    """Indecomposable decomposition over CL(2), CL(3) or CL(4)."""
    n = int(n)
    manifest = RunManifest("decompose", {"input": input_, "n": n, "reps": reps, "k": k}, seed, prime).start()
    if n == 4:
        L = load_indecomposables(reps)
    else:
        L = builtin_indecomposables(n, prime)
    target, _ = _load_target(input_, k, n, seed, prime)
    if isinstance(target, Representation) and target.shape.p != n:
        raise DomainError(f"module has {target.shape.p} columns, expected {n}")
    try:
        C = build_coefficient_matrix(L, enumerate_azc_bfs(n, 2, 6))
        mult = decompose(target, C, k, prime)
    except (InsufficientCourses, DecompositionError) as exc:
        raise DomainError(str(exc)) from exc
    flags = dict(zip(L.labels, L.is_interval))
    obj = {
        "schema": "cladder.decomposition/1",
        "n": n,
        "multiplicities": [{"label": lab, "interval": flags[lab], "m": m} for lab, m in mult.items() if m],
        "interval_decomposable": all(flags[lab] for lab, m in mult.items() if m),
        "manifest": manifest.finish(),
    }
    _emit(obj, out)


# ---------------------------------------------------------------- bottleneck


@main.command()
@click.argument("cpd_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("cpd_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (stdout if absent).")
def bottleneck(cpd_a, cpd_b, out):
    """Bottleneck distance between two interval-decomposable cPDs, with a matching."""
    manifest = RunManifest("bottleneck", {"a": cpd_a, "b": cpd_b}).start()
    try:
        A = ConnectedPD.from_json(_read_json(cpd_a))
        B = ConnectedPD.from_json(_read_json(cpd_b))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(str(exc)) from exc
    try:
        d, matching = bottleneck_distance(A, B, return_matching=True)
    except NotIntervalDecomposable as exc:
        raise DomainError(str(exc)) from exc
    _emit({"schema": "cladder.bottleneck/1", "distance": d, "matching": matching.to_json(),
           "manifest": manifest.finish()}, out)


# ---------------------------------------------------------------- stats


@dataclass
class StatsConfig:
    model: str = "clique"
    k: int = 1
    lengths: tuple[int, ...] = (4, 6, 8)
    trials: int = 200
    seed: int = 0
    clique_vertices: tuple[int, int] = (8, 16)
    cloud_points: tuple[int, int] = (8, 16)
    ambient: int = 2


def sample_triplet(cfg: StatsConfig, rng: np.random.Generator) -> LadderTriplet:
    if cfg.model == "clique":
        m = int(rng.integers(cfg.clique_vertices[0], cfg.clique_vertices[1] + 1))
        return clique_model(m, int(rng.integers(2**63)), max_dim=cfg.k + 1)
    if cfg.model == "pointcloud":
        m = int(rng.integers(cfg.cloud_points[0], cfg.cloud_points[1] + 1))
        pts = rng.random((m, cfg.ambient))
        sub = rng.choice(m, size=int(rng.integers(1, m)), replace=False)
        return thinning_triplet(pts, sub, cfg.k + 1)
    raise ValueError(f"unknown model {cfg.model!r}")


def run_trial(cfg: StatsConfig, n: int, trial: int) -> dict | None:
    """One sample: None when the configuration has fewer than ``max(4, n)`` critical values."""
    rng = np.random.default_rng([cfg.seed, n, trial])
    triplet = sample_triplet(cfg, rng)
    values = critical_values(triplet, cfg.k)
    if len(values) < max(4, n):
        return None
    th = select_thresholds(values, n, rng)
    M = homology_rep(ladder_filtration(triplet, th), cfg.k)
    if M.total_dim == 0:
        return None
    D = connected_pd(M)
    return {"model": cfg.model, "n": n, "trial": trial, "seed": cfg.seed,
            "total_dim": M.total_dim, "has_negative": int(has_negative(D))}


def _trial_args(args):
    return run_trial(*args)


def run_stats(cfg: StatsConfig, workers: int = 1) -> list[dict]:
    jobs = [(cfg, n, t) for n in cfg.lengths for t in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_trial_args, jobs, chunksize=8))
    else:
        rows = [run_trial(*j) for j in jobs]
    return [r for r in rows if r is not None]


def negative_rates(rows: list[dict]) -> dict[int, float]:
    by_n: dict[int, list[int]] = {}
    for r in rows:
        by_n.setdefault(r["n"], []).append(r["has_negative"])
    return {n: sum(v) / len(v) for n, v in sorted(by_n.items())}


FIELDS = ["model", "n", "trial", "seed", "total_dim", "has_negative"]


@main.command()
@click.option("--model", type=click.Choice(["clique", "pointcloud"]), default="clique", show_default=True)
@click.option("--trials", type=click.IntRange(min=0), default=100, show_default=True,
              help="Samples per ladder length.")
@click.option("--n", "lengths", type=click.IntRange(min=1), multiple=True, default=(4, 6, 8), show_default=True,
              help="Ladder length; repeat for several.")
@click.option("--k", type=click.IntRange(min=0), default=1, show_default=True, help="Homology degree.")
@click.option("--seed", type=int, default=0, show_default=True, help="PRNG seed.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="CSV output.")
def stats(model, trials, lengths, k, seed, workers, out):
    """Negative cPD multiplicity indicators by ladder length, as CSV."""
    cfg = StatsConfig(model=model, k=k, lengths=tuple(lengths), trials=trials, seed=seed)
    manifest = RunManifest("stats", asdict(cfg), seed).start()
    rows = run_stats(cfg, workers)
    with open(out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=FIELDS)
        w.writeheader()
        w.writerows(rows)
    summary = {"rates": negative_rates(rows), "samples": len(rows), "manifest": manifest.finish()}
    Path(out).with_suffix(".manifest.json").write_text(json.dumps(summary, indent=1) + "\n")
    click.echo(json.dumps(summary["rates"]))


if __name__ == "__main__":
    sys.exit(main())
