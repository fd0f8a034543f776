"""Command-line entry points: serve, attack, ml-train, bench, make-pool."""

from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path

import click

from .core import GenParams, Point, Rng, validate_params
from .generator import generate_challenge
from .kinematics import positions_at
from .pool import PicturePool, synthesize_pool
from .bench import (
    BenchReport,
    SweepConfig,
    attack_success,
    monte_carlo_random_guess,
    profile_generation,
    run_sweep,
)
from .attacks import heuristics as hx
from .attacks import ml as mlx


def _params_options(fn):
    fn = click.option("--psi", type=float, default=70.0, show_default=True, help="noisy stars, % of originals")(fn)
    fn = click.option("--delta", type=float, default=7.0, show_default=True, help="sensitivity")(fn)
    fn = click.option("--nsol", type=int, default=1, show_default=True)(fn)
    fn = click.option("--pic-size", type=int, default=150, show_default=True)(fn)
    fn = click.option("--rotation/--no-rotation", default=False, show_default=True)(fn)
    fn = click.option("--tolerance", type=float, default=5.0, show_default=True)(fn)
    return fn


def _build_params(psi, delta, nsol, pic_size, rotation, tolerance) -> GenParams:
    return validate_params(
        psi=psi, delta=delta, nsol=nsol, pic_size=pic_size,
        rotation=rotation, tolerance=tolerance,
    )


@click.group()
def main():
    """Interactive shape-discovery CAPTCHA toolkit."""


@main.command()
@click.option("--pool", "pool_dir", type=click.Path(), default="pool", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--ttl", type=float, default=300.0, show_default=True, help="challenge TTL seconds")
@click.option("--encoding", type=click.Choice(["json", "binary"]), default="json", show_default=True)
@click.option("--static-dir", type=click.Path(), default=None, help="web client bundle to serve at /")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="JSON config file")
@click.option("--buffer", "buffer_size", type=int, default=None, help="pre-generated challenge buffer size")
@click.option("--rate-limit", type=int, default=None, help="per-IP challenges per minute (0 = off)")
@click.option("--seed", type=int, default=None, help="deterministic generation (tests only)")
@_params_options
def serve(pool_dir, port, ttl, encoding, static_dir, config_path, buffer_size, rate_limit, seed,
          psi, delta, nsol, pic_size, rotation, tolerance):
    """Run the challenge/verify HTTP service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.load(
        config_path,
        pool_dir=pool_dir,
        port=port,
        ttl_seconds=ttl,
        encoding=encoding,
        static_dir=static_dir,
        buffer_size=buffer_size,
        rate_limit_per_minute=rate_limit,
        seed=seed,
        params=_build_params(psi, delta, nsol, pic_size, rotation, tolerance),
    )
    app = create_app(config)
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")


@main.command()
@click.option("--strategy", type=click.Choice(list(hx.HEURISTICS) + ["ml"]), required=True)
@click.option("--challenges", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--grid-step", type=int, default=1, show_default=True, help="cursor grid stride (1 = full)")
@click.option("--sample", type=int, default=None, help="dev only: subsample stars before scoring")
@click.option("--model", "model_path", type=click.Path(exists=True), default=None, help="trained model (ml strategy)")
@click.option("--pool", "pool_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), default=None, help="CSV output (default stdout)")
@_params_options
def attack(strategy, challenges, seed, grid_step, sample, model_path, pool_dir, out_path,
           psi, delta, nsol, pic_size, rotation, tolerance):
    """Attack fresh seeded challenges; emit one CSV row per challenge."""
    params = _build_params(psi, delta, nsol, pic_size, rotation, tolerance)
    pool = PicturePool(pool_dir)
    grid = hx.default_grid() if grid_step == 1 else hx.stepped_grid(grid_step)
    model = mlx.load_model(model_path) if model_path else None
    if strategy == "ml" and model is None:
        raise click.UsageError("--model is required for the ml strategy")

    rows = []
    master = Rng(seed)
    for i in range(challenges):
        rng = master.child(i)
        challenge = generate_challenge(params, pool, rng)
        if strategy == "ml":
            t0 = time.perf_counter()
            answer = mlx.ml_solve(challenge.client_view(), model)
            elapsed = time.perf_counter() - t0
            score = float("nan")
        else:
            res = hx.solve(challenge.stars, strategy, grid, sample_stars=sample)
            answer, score, elapsed = res.best_cursor, res.best_score, res.wall_time
        rows.append(
            {
                "challenge_seed": rng.seed,
                "strategy": strategy,
                "success": int(attack_success(challenge, answer)),
                "score": score,
                "wall_time": elapsed,
            }
        )

    fh = open(out_path, "w", newline="") if out_path else sys.stdout
    writer = csv.DictWriter(fh, fieldnames=["challenge_seed", "strategy", "success", "score", "wall_time"])
    writer.writeheader()
    writer.writerows(rows)
    if out_path:
        fh.close()
    rate = sum(r["success"] for r in rows) / len(rows)
    click.echo(f"success rate: {rate:.2%} over {len(rows)} challenges", err=True)


@main.command("ml-train")
@click.option("--omega", type=int, default=15, show_default=True)
@click.option("--challenges", type=int, default=60, show_default=True)
@click.option("--states", type=int, default=400, show_default=True, help="states per challenge")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--classifier", type=click.Choice(["forest", "logistic", "svm"]), default="forest", show_default=True)
@click.option("--pool", "pool_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@_params_options
def ml_train(omega, challenges, states, seed, classifier, pool_dir, out_path,
             psi, delta, nsol, pic_size, rotation, tolerance):
    """Train a solution/non-solution classifier and save the model file."""
    params = _build_params(psi, delta, nsol, pic_size, rotation, tolerance)
    pool = PicturePool(pool_dir)
    rng = Rng(seed)

    click.echo("sampling tile corpus...", err=True)
    corpus = mlx.sample_tile_corpus(pool, params, omega, rng.child(1))
    click.echo(f"clustering {len(corpus)} distinct tiles into {3 * omega} references...", err=True)
    refs = mlx.build_reference_tiles(corpus, omega, rng.child(2))
    click.echo(f"building training set: {challenges} challenges x {states} states...", err=True)
    training = mlx.build_training_set(pool, params, challenges, states, omega, refs, rng.child(3))
    clf = mlx.make_classifier(classifier, seed=seed)
    clf.fit(training.features, training.labels)

    model = mlx.TrainedModel(
        omega=omega,
        refs=refs,
        classifier=clf,
        description=(
            f"{classifier} on {challenges}x{states} states, psi={params.psi} "
            f"delta={params.delta} omega={omega} seed={seed}"
        ),
    )
    mlx.save_model(model, out_path)
    click.echo(f"saved model to {out_path}", err=True)


@main.group()
def bench():
    """Parameter sweeps and security analytics."""


@bench.command("sweep")
@click.option("--strategies", default="minsize,mindistribution,minsumdist,allsumdist", show_default=True)
@click.option("--psi-values", default="0,10,30,50,70", show_default=True)
@click.option("--delta-values", default="5,7", show_default=True)
@click.option("--per-cell", type=int, default=100, show_default=True)
@click.option("--full", is_flag=True, help="use 250 challenges per cell")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--pool", "pool_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--grid-step", type=int, default=1, show_default=True)
@click.option("--bound", "bounds", multiple=True,
              help="assert 'strategy,psi,delta,<op>,value' on a cell's success rate; exit 1 on miss")
def bench_sweep(strategies, psi_values, delta_values, per_cell, full, seed, pool_dir, out_path, grid_step, bounds):
    """Success-rate sweep over (strategy, psi, delta) cells."""
    config = SweepConfig(
        strategies=[s.strip() for s in strategies.split(",") if s.strip()],
        psi_values=[float(v) for v in psi_values.split(",")],
        delta_values=[float(v) for v in delta_values.split(",")],
        per_cell=250 if full else per_cell,
        seed=seed,
        out_path=Path(out_path),
        grid=hx.default_grid() if grid_step == 1 else hx.stepped_grid(grid_step),
    )
    report = run_sweep(config, PicturePool(pool_dir))
    for row in report.rows:
        click.echo(
            f"{row.strategy:16s} psi={row.psi:<6g} delta={row.delta:<4g} "
            f"rate={row.success_rate:.2%} ({row.successes}/{row.trials}) "
            f"mean_time={row.mean_wall_time:.1f}s"
        )
    if not _check_bounds(report, bounds):
        sys.exit(1)


def _check_bounds(report: BenchReport, bounds) -> bool:
    ok = True
    cells = {(r.strategy, r.psi, r.delta): r for r in report.rows}
    for spec in bounds:
        strategy, psi, delta, op, value = spec.split(",")
        cell = cells.get((strategy, float(psi), float(delta)))
        if cell is None:
            click.echo(f"bound {spec}: cell not in sweep", err=True)
            ok = False
            continue
        rate, bound = cell.success_rate, float(value)
        holds = rate < bound if op == "<" else rate > bound if op == ">" else None
        if holds is None:
            raise click.UsageError(f"bad bound op {op!r}; use < or >")
        click.echo(f"bound {spec}: rate={rate:.4f} -> {'ok' if holds else 'MISS'}", err=True)
        ok = ok and holds
    return ok


@bench.command("random-guess")
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_params_options
def bench_random_guess(trials, seed, psi, delta, nsol, pic_size, rotation, tolerance):
    """Monte Carlo pass rate of uniform random answers."""
    params = _build_params(psi, delta, nsol, pic_size, rotation, tolerance)
    rate = monte_carlo_random_guess(params, trials, Rng(seed))
    click.echo(f"random-guess success rate: {rate:.6f} over {trials} trials (tolerance {params.tolerance})")


@bench.command("profile")
@click.option("--n", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--pool", "pool_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@_params_options
def bench_profile(n, seed, pool_dir, out_path, psi, delta, nsol, pic_size, rotation, tolerance):
    """Per-phase generation timing and payload sizes."""
    params = _build_params(psi, delta, nsol, pic_size, rotation, tolerance)
    report = profile_generation(PicturePool(pool_dir), params, n, Rng(seed))
    if out_path:
        report.write_csv(Path(out_path))
    click.echo(report.summary())


@main.command("make-pool")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--count", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def make_pool(out_dir, count, seed):
    """Synthesize a pool of two-color icons (for demos and benches)."""
    pool = synthesize_pool(out_dir, count, Rng(seed))
    click.echo(f"wrote {len(pool)} icons to {out_dir}")


@main.command("golden-vectors")
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--pairs", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--pool", "pool_dir", type=click.Path(exists=True), required=True)
@_params_options
def golden_vectors(out_path, pairs, seed, pool_dir, psi, delta, nsol, pic_size, rotation, tolerance):
    """Emit (challenge, cursor) -> positions fixtures for client parity tests."""
    params = _build_params(psi, delta, nsol, pic_size, rotation, tolerance)
    pool = PicturePool(pool_dir)
    master = Rng(seed)
    per_challenge = 10
    groups = []
    total = 0
    for i in range(max(1, -(-pairs // per_challenge))):
        rng = master.child(i)
        challenge = generate_challenge(params, pool, rng)
        stars = challenge.stars
        cases = []
        for j in range(min(per_challenge, pairs - total)):
            cur_rng = master.child(i, j, 7)
            cx = float(cur_rng.uniform(0, 300))
            cy = float(cur_rng.uniform(0, 300))
            pos = positions_at(stars, Point(cx, cy))
            cases.append(
                {
                    "cursor": {"x": cx, "y": cy},
                    "positions": [{"x": float(x), "y": float(y)} for x, y in pos],
                }
            )
            total += 1
        groups.append(
            {
                "stars": [
                    {
                        "m_xx": s.m_xx, "m_xy": s.m_xy, "c_x": s.c_x,
                        "m_yx": s.m_yx, "m_yy": s.m_yy, "c_y": s.c_y,
                    }
                    for s in stars
                ],
                "cases": cases,
            }
        )
        if total >= pairs:
            break
    Path(out_path).parent.mkdir(parents=True, exist_ok=True)
    Path(out_path).write_text(json.dumps({"challenges": groups}))
    click.echo(f"wrote {total} parity cases across {len(groups)} challenges to {out_path}")


if __name__ == "__main__":
    main()
