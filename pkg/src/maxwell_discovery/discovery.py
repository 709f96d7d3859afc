"""Discovery driver: experiments -> march -> sub-theory pruning -> fits -> report."""

from __future__ import annotations

import configparser
import csv
import dataclasses
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .enumerator import base_cases, march_levels, squeeze
from .theory_lang import ALPHABET, Candidate, rank_homogeneous, render
from .validator import DEFAULT_EPS_SV, FitInconsistency, ValidatedTheory, derive_c, fit
from .virtual_lab import VARYING_OMEGA, ExperimentConfig, make_experiments

log = logging.getLogger(__name__)

TIMING_KEYS = frozenset({"runtime_seconds", "wall_seconds"})


@dataclass(frozen=True)
class RunConfig:
    mode: str = VARYING_OMEGA
    experiment_count: int = 5
    seed: int = 0
    q_max: int = 14
    eps_sv: float = DEFAULT_EPS_SV
    r_range: tuple[float, float] = (1e9, 1e10)
    r_unit: str = "wavelength"
    omega_range: tuple[float, float] = (1e8, 1e9)
    theta_range: tuple[float, float] = (0.2, math.pi - 0.2)
    phi_range: tuple[float, float] = (0.0, 2 * math.pi)
    p0: float = 1.0
    r_min_factor: float = 1e9
    output_path: str = "discovery.json"

    def __post_init__(self):
        if self.q_max < 1:
            raise ValueError("q_max must be at least 1")
        if not self.eps_sv > 0:
            raise ValueError("eps_sv must be positive")
        self.experiment_config().validate()

    def experiment_config(self) -> ExperimentConfig:
        return ExperimentConfig(
            count=self.experiment_count,
            mode=self.mode,
            omega_range=self.omega_range,
            r_range=self.r_range,
            r_unit=self.r_unit,
            theta_range=self.theta_range,
            phi_range=self.phi_range,
            p0=self.p0,
            r_min_factor=self.r_min_factor,
        )

    def to_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in dataclasses.asdict(self).items()}


def _parse_range(text: str) -> tuple[float, float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 2:
        raise ValueError(f"expected two numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


_PARSERS = {
    "mode": str,
    "experiment_count": int,
    "seed": int,
    "q_max": int,
    "eps_sv": float,
    "r_range": _parse_range,
    "r_unit": str,
    "omega_range": _parse_range,
    "theta_range": _parse_range,
    "phi_range": _parse_range,
    "p0": float,
    "r_min_factor": float,
    "output_path": str,
}


def parse_config(text: str, **overrides) -> RunConfig:
    """Parse flat ``key = value`` lines (``#`` comments, ranges as ``lo, hi``)."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    parser.read_string("[run]\n" + text)
    values = {}
    for key, raw in parser["run"].items():
        if key not in _PARSERS:
            raise ValueError(f"unknown config key {key!r}")
        try:
            values[key] = _PARSERS[key](raw.strip().strip('"'))
        except ValueError as exc:
            raise ValueError(f"bad value for {key}: {exc}") from None
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def load_config(path: str | Path | None, **overrides) -> RunConfig:
    text = Path(path).read_text(encoding="utf-8") if path else ""
    return parse_config(text, **overrides)


@dataclass(frozen=True)
class Discovery:
    q: int
    theory: ValidatedTheory

    @property
    def equation(self) -> str:
        return render(self.theory.candidate, self.theory.coefficients)


@dataclass(frozen=True)
class LevelStats:
    q: int
    enumerated: int
    validated: int
    accepted: int
    wall_seconds: float


@dataclass
class DiscoveryReport:
    config: RunConfig
    found: list[Discovery] = field(default_factory=list)
    c_estimates: list[tuple[Discovery, float]] = field(default_factory=list)
    candidates_examined: list[LevelStats] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    runtime_seconds: float = 0.0


def subtheory_filter(c: Candidate, found: Sequence[ValidatedTheory | Discovery]) -> bool:
    """True when ``c`` contains an already validated theory and should be skipped."""
    for f in found:
        theory = f.theory if isinstance(f, Discovery) else f
        if theory.candidate.issubset(c):
            return True
    return False


def _mixed_rank(c: Candidate) -> bool:
    return not rank_homogeneous(c)


def run_discovery(config: RunConfig) -> DiscoveryReport:
    start = time.perf_counter()
    experiments = make_experiments(config.experiment_config(), config.seed)
    report = DiscoveryReport(config=config)

    for q, level in march_levels(ALPHABET, config.q_max, prune=_mixed_rank):
        level_start = time.perf_counter()
        # theories found at this level only prune later levels
        known = tuple(report.found)
        new = []
        validated = 0
        for c in level:
            if subtheory_filter(c, known):
                continue
            validated += 1
            theory = fit(c, experiments, config.eps_sv)
            if theory is not None:
                new.append(Discovery(q, theory))
        report.found.extend(new)
        report.candidates_examined.append(
            LevelStats(q, len(level), validated, len(new), time.perf_counter() - level_start)
        )
        for d in new:
            log.info("q=%d  %s  (sv_ratio %.2e)", q, d.equation, d.theory.sv_ratio)
            try:
                value = derive_c(d.theory)
            except FitInconsistency as exc:
                report.warnings.append(str(exc))
                continue
            if value is not None:
                report.c_estimates.append((d, value))

    report.runtime_seconds = time.perf_counter() - start
    return report


# --- report output ----------------------------------------------------------


def _discovery_dict(d: Discovery) -> dict:
    t = d.theory
    try:
        c_value = derive_c(t)
    except FitInconsistency:
        c_value = None
    return {
        "q": d.q,
        "letters": t.candidate.letters,
        "terms": [{"letter": x.letter, "field": x.field.value, "operator": x.op.value} for x in t.candidate.terms],
        "equation": d.equation,
        "coefficients": list(t.coefficients),
        "sv_ratio": t.sv_ratio,
        "residual": t.residual,
        "c": c_value,
    }


def report_dict(r: DiscoveryReport) -> dict:
    return {
        "config": r.config.to_dict(),
        "found": [_discovery_dict(d) for d in r.found],
        "c_estimates": [
            {"source": d.theory.candidate.letters, "equation": d.equation, "value": v} for d, v in r.c_estimates
        ],
        "candidates_examined": [dataclasses.asdict(s) for s in r.candidates_examined],
        "warnings": list(r.warnings),
        "runtime_seconds": r.runtime_seconds,
    }


def strip_timing(obj):
    """Copy of a report dict with timing fields removed (for comparisons)."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def report_text(r: DiscoveryReport) -> str:
    lines = [
        f"mode={r.config.mode} experiments={r.config.experiment_count} seed={r.config.seed} "
        f"q_max={r.config.q_max} eps_sv={r.config.eps_sv:g}",
        "",
    ]
    for d in r.found:
        line = f"q={d.q:<3d} {d.equation}    [sv_ratio {d.theory.sv_ratio:.2e}]"
        c_value = next((v for src, v in r.c_estimates if src is d), None)
        if c_value is not None:
            line += f"  c ≈ {c_value:.6e} m/s"
        lines.append(line)
    if not r.found:
        lines.append("no theories found")
    lines.append("")
    for s in r.candidates_examined:
        lines.append(
            f"level {s.q:>2d}: {s.enumerated:>3d} enumerated, {s.validated:>3d} validated, "
            f"{s.accepted} accepted  ({s.wall_seconds * 1e3:.1f} ms)"
        )
    for w in r.warnings:
        lines.append(f"warning: {w}")
    lines.append(f"total runtime {r.runtime_seconds:.3f} s")
    return "\n".join(lines) + "\n"


def write_report(r: DiscoveryReport, path: str | Path) -> tuple[Path, Path]:
    """Write ``path`` as JSON and a text rendering next to it (``.txt``)."""
    json_path = Path(path)
    text_path = json_path.with_suffix(".txt")
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(json.dumps(report_dict(r), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    text_path.write_text(report_text(r), encoding="utf-8")
    return json_path, text_path


# --- fast / slow benchmark --------------------------------------------------

SLOW_MAX_DEPTH = 12


@dataclass(frozen=True)
class BenchRow:
    mode: str
    depth: int
    cumulative_candidates: int
    wall_seconds: float


def _bench_march(mode: str, alphabet, q_max: int) -> list[BenchRow]:
    # wall_seconds is cumulative up to and including each depth
    rows = []
    total = 0
    start = time.perf_counter()
    levels = base_cases(alphabet)
    for q in range(1, q_max + 1):
        total += len(squeeze(levels, q))
        rows.append(BenchRow(mode, q, total, time.perf_counter() - start))
    return rows


def bench_fast_slow(config: RunConfig) -> list[BenchRow]:
    """Cumulative candidates per depth for Table-weighted vs unit-weight marching."""
    fast = _bench_march("fast", ALPHABET, config.q_max)
    unit = [dataclasses.replace(t, weight=1) for t in ALPHABET]
    slow = _bench_march("slow", unit, SLOW_MAX_DEPTH)
    return fast + slow


def write_bench_csv(rows: Sequence[BenchRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mode", "depth", "cumulative_candidates", "wall_seconds"])
        for row in rows:
            writer.writerow([row.mode, row.depth, row.cumulative_candidates, f"{row.wall_seconds:.6f}"])
    return path
