"""Command-line entry point: ``maxwell-discovery discover`` and ``maxwell-discovery bench``."""

from __future__ import annotations

import logging

import click

from .discovery import bench_fast_slow, load_config, report_text, run_discovery, write_bench_csv, write_report
from .virtual_lab import MODES


def _load(config_path, **overrides):
    try:
        return load_config(config_path, **overrides)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc)) from None


@click.group()
def main():
    """Rediscover free-space Maxwell equations from simulated dipole data."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Run configuration file.")
@click.option("--q-max", type=int, help="Highest complexity level to march.")
@click.option("--seed", type=int, help="Seed for experiment sampling.")
@click.option("--mode", type=click.Choice(MODES), help="Experiment mode.")
@click.option("--eps-sv", type=float, help="Singular-value ratio threshold.")
@click.option("--output", "output_path", type=click.Path(dir_okay=False), help="JSON report path.")
@click.option("--verbose", is_flag=True, help="Print the text report and per-level progress.")
def discover(config_path, q_max, seed, mode, eps_sv, output_path, verbose):
    """March candidate theories and write the discovery report."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s")
    cfg = _load(config_path, q_max=q_max, seed=seed, mode=mode, eps_sv=eps_sv, output_path=output_path)
    report = run_discovery(cfg)
    json_path, text_path = write_report(report, cfg.output_path)
    if verbose:
        click.echo(report_text(report), nl=False)
    click.echo(f"{len(report.found)} theories -> {json_path} , {text_path}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Run configuration file.")
@click.option("--output", "output_path", required=True, type=click.Path(dir_okay=False), help="CSV output path.")
def bench(config_path, output_path):
    """Compare weighted (fast) and unit-weight (slow) enumeration sizes."""
    cfg = _load(config_path)
    rows = bench_fast_slow(cfg)
    write_bench_csv(rows, output_path)
    fast = max(r.cumulative_candidates for r in rows if r.mode == "fast")
    slow = max(r.cumulative_candidates for r in rows if r.mode == "slow")
    click.echo(f"fast: {fast} candidates to q={cfg.q_max}; slow: {slow} to size 12; ratio {slow / fast:.1f}x")
    click.echo(f"wrote {output_path}")


if __name__ == "__main__":
    main()
