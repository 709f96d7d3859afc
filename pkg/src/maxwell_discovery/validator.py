"""Fit constants to candidate theories by null-space detection.

A candidate sum(c_i * term_i) = 0 is valid when the matrix of its term
evaluations (rows: experiment x component, columns: terms) has a
one-dimensional null space. Columns are normalised to unit norm first:
raw term magnitudes span more than 30 orders of magnitude, and only after
normalisation are the singular values comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .svd import jacobi_svd
from .theory_lang import SCALAR, Candidate, Field, Op, Term, rank_homogeneous
from .virtual_lab import Experiment, evaluate_experiment

DEFAULT_EPS_SV = 1e-6

_COMPOUND_OPS = (Op.DIV, Op.CURL, Op.LAPLACIAN)


class FitInconsistency(ValueError):
    """A validated theory whose coefficients cannot yield a real c."""


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """Column-normalised data matrix of a candidate.

    ``entries`` has unit-norm columns; ``column_scales`` are the raw norms,
    so the raw matrix is ``entries * column_scales``.
    """

    entries: np.ndarray
    column_scales: np.ndarray
    row_index: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_raw(cls, raw, row_index: Sequence[tuple[int, int]] = ()) -> "DataMatrix":
        raw = np.asarray(raw, dtype=float)
        if raw.ndim != 2:
            raise ValueError("data matrix must be 2-D")
        scales = np.linalg.norm(raw, axis=0)
        if np.any(scales == 0.0):
            raise ValueError("data matrix has an all-zero column")
        return cls(raw / scales, scales, tuple(row_index))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def is_normalized(self) -> bool:
        return bool(np.allclose(np.linalg.norm(self.entries, axis=0), 1.0, rtol=1e-12, atol=0))


@dataclass(frozen=True)
class ValidatedTheory:
    candidate: Candidate
    # raw units, first canonical coefficient is +1
    coefficients: tuple[float, ...]
    sv_ratio: float
    residual: float
    # σ_i / σ_max, descending; (ratio,) for singletons
    sv_ratios: tuple[float, ...] = ()

    @property
    def second_sv_ratio(self) -> float:
        """Second-smallest singular value over the largest (1.0 if undefined)."""
        return self.sv_ratios[-2] if len(self.sv_ratios) >= 2 else 1.0


def _column(term: Term, experiments: Sequence[Experiment], magnitude: bool = False) -> np.ndarray:
    idx = 1 if magnitude else 0
    return np.concatenate([evaluate_experiment(e)[term][idx].array for e in experiments])


def assemble_matrix(c: Candidate, experiments: Sequence[Experiment]) -> DataMatrix:
    if not rank_homogeneous(c):
        raise ValueError(f"candidate {c} mixes scalar and vector terms")
    width = 1 if c.terms[0].rank == SCALAR else 3
    rows = width * len(experiments)
    if rows < len(c) + 1:
        raise ValueError(f"{rows} rows cannot test {len(c)} columns; add experiments")
    raw = np.column_stack([_column(t, experiments) for t in c.terms])
    row_index = [(i, k) for i in range(len(experiments)) for k in range(width)]
    return DataMatrix.from_raw(raw, row_index)


def null_space_test(m: DataMatrix, eps_sv: float = DEFAULT_EPS_SV) -> tuple[int, np.ndarray | None]:
    """Return ``(1, v)`` when σ_min/σ_max < eps_sv, else ``(0, None)``.

    ``v`` is the right singular vector of σ_min in normalised units.
    """
    if not m.is_normalized:
        raise ValueError("matrix columns must be normalised before the null-space test")
    if m.shape[1] < 2:
        raise ValueError("single-column matrices need singleton_cancellation_ratio")
    sv, v = jacobi_svd(m.entries)
    if sv[-1] / sv[0] < eps_sv:
        return 1, v[:, -1]
    return 0, None


def raw_coefficients(m: DataMatrix, null_vector: np.ndarray) -> np.ndarray:
    """Undo column normalisation and scale so the first coefficient is +1."""
    raw = np.asarray(null_vector) / m.column_scales
    return raw / raw[0]


def singleton_cancellation_ratio(term: Term, experiments: Sequence[Experiment]) -> float:
    """How close a single term is to vanishing on the data.

    For div, curl and Laplacian the reference is the same sum taken over
    absolute partial derivatives, so exact cancellation shows as a tiny
    ratio. For the other operators it is the plain relative norm (1, or 0
    if the column is identically zero).
    """
    col = _column(term, experiments)
    ref = _column(term, experiments, magnitude=True)
    ref_norm = float(np.linalg.norm(ref))
    if ref_norm == 0.0:
        return 0.0
    return float(np.linalg.norm(col)) / ref_norm


def fit(c: Candidate, experiments: Sequence[Experiment], eps_sv: float = DEFAULT_EPS_SV) -> ValidatedTheory | None:
    if len(c) == 1:
        ratio = singleton_cancellation_ratio(c.terms[0], experiments)
        if ratio < eps_sv:
            return ValidatedTheory(c, (1.0,), ratio, ratio, (ratio,))
        return None

    m = assemble_matrix(c, experiments)
    sv, v = jacobi_svd(m.entries)
    ratios = sv / sv[0]
    if ratios[-1] >= eps_sv:
        return None
    null_vector = v[:, -1]
    coeffs = raw_coefficients(m, null_vector)
    residual = float(np.linalg.norm(m.entries @ null_vector))
    return ValidatedTheory(
        candidate=c,
        coefficients=tuple(float(x) for x in coeffs),
        sv_ratio=float(ratios[-1]),
        residual=residual,
        sv_ratios=tuple(float(x) for x in ratios),
    )


def _c_bearing_pair(c: Candidate) -> tuple[int, int] | None:
    # (index of curl/laplacian term, index of its time-derivative partner)
    if len(c) != 2:
        return None
    by_key = {(t.field, t.op): i for i, t in enumerate(c.terms)}
    if (Field.B, Op.CURL) in by_key and (Field.E, Op.DT) in by_key:
        return by_key[(Field.B, Op.CURL)], by_key[(Field.E, Op.DT)]
    for f in Field:
        if (f, Op.LAPLACIAN) in by_key and (f, Op.DTT) in by_key:
            return by_key[(f, Op.LAPLACIAN)], by_key[(f, Op.DTT)]
    return None


def derive_c(t: ValidatedTheory) -> float | None:
    """Wave speed implied by a c-bearing theory, sqrt(-c1/c2).

    c1 multiplies the curl or Laplacian term, c2 its time-derivative partner.
    Returns None for theories that carry no speed.
    """
    pair = _c_bearing_pair(t.candidate)
    if pair is None:
        return None
    c1, c2 = t.coefficients[pair[0]], t.coefficients[pair[1]]
    radicand = -c1 / c2
    if not radicand > 0:
        raise FitInconsistency(f"{t.candidate}: -c1/c2 = {radicand:g} has no real square root")
    return math.sqrt(radicand)
