"""Virtual experiment: far-field radiation of an oscillating electric dipole.

The dipole moment points along +z. At a far point the fields are

    E = -A (sin θ / r) cos ψ  θ̂,        B = E_θ / c  φ̂,

with A = μ0 p0 ω² / 4π and phase ψ = ω (t - r/c). Every term of the
alphabet is evaluated from closed-form derivatives of these expressions,
never by runtime differencing: at r ~ 1e17 m the Cartesian coordinates
carry ~16 m of rounding. ``fd_oracle`` is a test device for moderate r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import ClassVar

import numpy as np

from .theory_lang import ALPHABET, SCALAR, VECTOR3, Field, Op, Term

MU0 = 4e-7 * math.pi
SPEED_OF_LIGHT = 2.99792458e8

_EZ = np.array([0.0, 0.0, 1.0])
# (ẑ × n)_i = W_ij n_j
_ZCROSS = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
_I3 = np.eye(3)


class DomainError(ValueError):
    """Raised for sample points outside the far-field model's domain."""


@dataclass(frozen=True)
class DipoleSource:
    p0: float
    omega: float
    c_sim: float = SPEED_OF_LIGHT
    # far-field admissibility: r >= r_min_factor * wavelength
    r_min_factor: float = 1e9
    mu0: ClassVar[float] = MU0

    def __post_init__(self):
        if not (self.p0 > 0 and self.omega > 0 and self.c_sim > 0):
            raise DomainError(f"p0, omega and c_sim must be positive: {self}")
        if self.r_min_factor < 0:
            raise DomainError("r_min_factor must be non-negative")

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi * self.c_sim / self.omega

    @property
    def wavenumber(self) -> float:
        return self.omega / self.c_sim

    @property
    def amplitude(self) -> float:
        return self.mu0 * self.p0 * self.omega**2 / (4.0 * math.pi)


@dataclass(frozen=True)
class SamplePoint:
    r: float
    theta: float
    phi: float
    t: float = 0.0

    @property
    def direction(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    @property
    def position(self) -> np.ndarray:
        return self.r * self.direction

    def theta_hat(self) -> np.ndarray:
        ct = math.cos(self.theta)
        return np.array([ct * math.cos(self.phi), ct * math.sin(self.phi), -math.sin(self.theta)])

    def phi_hat(self) -> np.ndarray:
        return np.array([-math.sin(self.phi), math.cos(self.phi), 0.0])


@dataclass(frozen=True)
class Experiment:
    source: DipoleSource
    point: SamplePoint


@dataclass(frozen=True)
class TermValue:
    rank: str
    value: tuple[float, ...]

    def __post_init__(self):
        expected = 1 if self.rank == SCALAR else 3
        if len(self.value) != expected:
            raise ValueError(f"{self.rank} term needs {expected} components, got {len(self.value)}")

    @classmethod
    def of(cls, rank: str, value) -> "TermValue":
        return cls(rank, tuple(float(v) for v in np.atleast_1d(value)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.value)


@dataclass(frozen=True)
class Phase:
    """cos and sin of ω(t - r/c), evaluated once per (source, point)."""

    cos: float
    sin: float


def check_admissible(source: DipoleSource, point: SamplePoint) -> None:
    if not point.r > 0:
        raise DomainError(f"r must be positive, got {point.r}")
    if not 0.0 <= point.theta <= math.pi:
        raise DomainError(f"theta outside [0, pi]: {point.theta}")
    if not 0.0 <= point.phi < 2.0 * math.pi:
        raise DomainError(f"phi outside [0, 2pi): {point.phi}")
    if point.r < source.r_min_factor * source.wavelength:
        raise DomainError(
            f"r = {point.r:g} m is not in the far field "
            f"(needs >= {source.r_min_factor:g} wavelengths of {source.wavelength:g} m)"
        )


@lru_cache(maxsize=4096)
def phase(source: DipoleSource, point: SamplePoint) -> Phase:
    psi = source.omega * point.t - source.wavenumber * point.r
    return Phase(math.cos(psi), math.sin(psi))


def far_fields(source: DipoleSource, point: SamplePoint) -> tuple[np.ndarray, np.ndarray]:
    """E and B at ``point`` in the Cartesian basis."""
    ph = phase(source, point)
    return (
        field_derivatives(Field.E, source, point, ph).value,
        field_derivatives(Field.B, source, point, ph).value,
    )


@dataclass(frozen=True)
class FieldDerivatives:
    """A field and its partials at one point, Cartesian basis.

    ``jacobian[i, j] = ∂F_i/∂x_j`` and ``second[i, j] = ∂²F_i/∂x_j²``.
    """

    value: np.ndarray
    jacobian: np.ndarray
    second: np.ndarray
    dt: np.ndarray
    dtt: np.ndarray


def _profile_e(amp: float, r: float, n: np.ndarray):
    # F = cos ψ · G(x) with G = A (ẑ - n_z n) / r
    nz = n[2]
    g = amp / r * (_EZ - nz * n)
    dg = amp / r**2 * (-np.outer(_EZ, n) - np.outer(n, _EZ) - nz * _I3 + 3.0 * nz * np.outer(n, n))
    nn = np.outer(n, n)
    n2 = n**2  # indexed by j
    ddg = amp / r**3 * (
        -np.outer(_EZ, 1.0 - 3.0 * n2)
        - _EZ[None, :] * (_I3 - 3.0 * nn)
        - _I3 * (_EZ - 3.0 * nz * n)[None, :]
        + 3.0 * (_EZ[None, :] * nn + nz * _I3 * n[None, :] + nz * n[:, None])
        - 15.0 * nz * n[:, None] * n2[None, :]
    )
    return g, dg, ddg


def _profile_b(amp: float, r: float, n: np.ndarray):
    # G = beta (ẑ × n) / r with beta = -A / c
    wn = _ZCROSS @ n
    g = amp / r * wn
    dg = amp / r**2 * (_ZCROSS - 2.0 * np.outer(wn, n))
    n2 = n**2
    ddg = amp / r**3 * (-4.0 * _ZCROSS * n[None, :] - 2.0 * wn[:, None] + 8.0 * wn[:, None] * n2[None, :])
    return g, dg, ddg


def field_derivatives(
    which: Field, source: DipoleSource, point: SamplePoint, ph: Phase | None = None
) -> FieldDerivatives:
    check_admissible(source, point)
    if ph is None:
        ph = phase(source, point)
    r, n = point.r, point.direction
    k, w = source.wavenumber, source.omega
    if which is Field.E:
        g, dg, ddg = _profile_e(source.amplitude, r, n)
    else:
        g, dg, ddg = _profile_b(-source.amplitude / source.c_sim, r, n)
    c, s = ph.cos, ph.sin
    n2 = n**2
    jac = k * s * np.outer(g, n) + c * dg
    second = (
        -(k**2) * c * np.outer(g, n2)
        + (k * s / r) * np.outer(g, 1.0 - n2)
        + 2.0 * k * s * dg * n[None, :]
        + c * ddg
    )
    return FieldDerivatives(
        value=c * g,
        jacobian=jac,
        second=second,
        dt=-w * s * g,
        dtt=-(w**2) * c * g,
    )


def _curl(j: np.ndarray) -> np.ndarray:
    return np.array([j[2, 1] - j[1, 2], j[0, 2] - j[2, 0], j[1, 0] - j[0, 1]])


def _apply(t: Term, d: FieldDerivatives) -> np.ndarray:
    if t.op is Op.IDENTITY:
        return d.value
    if t.op is Op.DIV:
        return np.array([np.trace(d.jacobian)])
    if t.op is Op.CURL:
        return _curl(d.jacobian)
    if t.op is Op.LAPLACIAN:
        return d.second.sum(axis=1)
    if t.op is Op.DT:
        return d.dt
    return d.dtt


def _magnitude(t: Term, d: FieldDerivatives) -> np.ndarray:
    j = np.abs(d.jacobian)
    if t.op is Op.DIV:
        return np.array([np.trace(j)])
    if t.op is Op.CURL:
        return np.array([j[2, 1] + j[1, 2], j[0, 2] + j[2, 0], j[1, 0] + j[0, 1]])
    if t.op is Op.LAPLACIAN:
        return np.abs(d.second).sum(axis=1)
    return np.abs(_apply(t, d))


def eval_term(term: Term, source: DipoleSource, point: SamplePoint, ph: Phase | None = None) -> TermValue:
    d = field_derivatives(term.field, source, point, ph)
    return TermValue.of(term.rank, _apply(term, d))


def term_magnitude(term: Term, source: DipoleSource, point: SamplePoint, ph: Phase | None = None) -> TermValue:
    """Sum of absolute partial-derivative contributions making up ``term``.

    For div, curl and Laplacian this is the scale the signed sum would have
    without cancellation; for the other operators it is |value|.
    """
    d = field_derivatives(term.field, source, point, ph)
    return TermValue.of(term.rank, _magnitude(term, d))


@lru_cache(maxsize=1024)
def evaluate_experiment(experiment: Experiment) -> dict[Term, tuple[TermValue, TermValue]]:
    """All alphabet terms at one experiment as ``term -> (value, magnitude)``.

    One phase evaluation is shared by every term so its rounding is common-mode.
    """
    src, pt = experiment.source, experiment.point
    ph = phase(src, pt)
    derivs = {f: field_derivatives(f, src, pt, ph) for f in Field}
    out = {}
    for t in ALPHABET:
        d = derivs[t.field]
        out[t] = (TermValue.of(t.rank, _apply(t, d)), TermValue.of(t.rank, _magnitude(t, d)))
    return out


# --- finite-difference oracle (tests only) ---------------------------------


def _cartesian_field(which: Field, source: DipoleSource, x: np.ndarray, t: float) -> np.ndarray:
    r = math.sqrt(float(x @ x))
    cos_psi = math.cos(source.omega * (t - r / source.c_sim))
    a = source.amplitude
    if which is Field.E:
        return a * cos_psi * (_EZ * r * r - x[2] * x) / r**3
    return -(a / source.c_sim) * cos_psi * np.cross(_EZ, x) / r**2


def _central(term: Term, source: DipoleSource, point: SamplePoint, step: float) -> np.ndarray:
    x0, t0 = point.position, point.t
    f = lambda x, t: _cartesian_field(term.field, source, x, t)  # noqa: E731

    if term.op is Op.DT:
        return (f(x0, t0 + step) - f(x0, t0 - step)) / (2 * step)
    if term.op is Op.DTT:
        return (f(x0, t0 + step) - 2 * f(x0, t0) + f(x0, t0 - step)) / step**2
    if term.op is Op.LAPLACIAN:
        centre = f(x0, t0)
        total = np.zeros(3)
        for j in range(3):
            e = np.zeros(3)
            e[j] = step
            total += (f(x0 + e, t0) - 2 * centre + f(x0 - e, t0)) / step**2
        return total
    jac = np.empty((3, 3))
    for j in range(3):
        e = np.zeros(3)
        e[j] = step
        jac[:, j] = (f(x0 + e, t0) - f(x0 - e, t0)) / (2 * step)
    if term.op is Op.DIV:
        return np.array([np.trace(jac)])
    return _curl(jac)


def fd_oracle(
    term: Term, source: DipoleSource, point: SamplePoint, h: float | None = None, richardson: bool = True
) -> TermValue:
    """Central-difference estimate of ``term`` at ``point``.

    ``h`` is in seconds for time operators and metres for spatial ones; by
    default it spans 0.01 rad of phase. With ``richardson`` the h and h/2
    estimates are combined to cancel the O(h²) error, which keeps the
    step large enough that rounding stays small near zeros of the field.
    """
    if term.op is Op.IDENTITY:
        return TermValue.of(VECTOR3, _cartesian_field(term.field, source, point.position, point.t))
    if h is None:
        h = 1e-2 / (source.omega if term.op in (Op.DT, Op.DTT) else source.wavenumber)
    coarse = _central(term, source, point, h)
    if not richardson:
        return TermValue.of(term.rank, coarse)
    fine = _central(term, source, point, h / 2)
    return TermValue.of(term.rank, (4.0 * fine - coarse) / 3.0)


# --- experiment generation --------------------------------------------------

VARYING_OMEGA = "varying-omega"
PAPER_FIXED_OMEGA = "paper-fixed-omega"
MODES = (VARYING_OMEGA, PAPER_FIXED_OMEGA)
MIN_EXPERIMENTS = 5


@dataclass(frozen=True)
class ExperimentConfig:
    count: int = 5
    mode: str = VARYING_OMEGA
    omega_range: tuple[float, float] = (1e8, 1e9)
    # in wavelengths when r_unit == "wavelength", else metres
    r_range: tuple[float, float] = (1e9, 1e10)
    r_unit: str = "wavelength"
    theta_range: tuple[float, float] = (0.2, math.pi - 0.2)
    phi_range: tuple[float, float] = (0.0, 2 * math.pi)
    p0: float = 1.0
    r_min_factor: float = 1e9

    def validate(self) -> None:
        if self.count < MIN_EXPERIMENTS:
            raise ValueError(f"need at least {MIN_EXPERIMENTS} experiments, got {self.count}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.r_unit not in ("wavelength", "meter"):
            raise ValueError(f"r_unit must be 'wavelength' or 'meter', got {self.r_unit!r}")
        for name in ("omega_range", "r_range", "theta_range", "phi_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError(f"{name} is empty: {(lo, hi)}")
        if self.omega_range[0] <= 0 or self.r_range[0] <= 0 or self.p0 <= 0:
            raise ValueError("omega_range, r_range and p0 must be positive")
        if self.theta_range[0] < 0 or self.theta_range[1] > math.pi:
            raise ValueError("theta_range must lie within [0, pi]")
        if self.phi_range[0] < 0 or self.phi_range[1] > 2 * math.pi:
            raise ValueError("phi_range must lie within [0, 2pi]")


def make_experiments(config: ExperimentConfig, seed: int) -> list[Experiment]:
    """Sample ``config.count`` experiments at t = 0, deterministically from ``seed``."""
    config.validate()
    rng = np.random.default_rng(seed)
    n = config.count
    if config.mode == VARYING_OMEGA:
        omegas = rng.uniform(*config.omega_range, size=n)
    else:
        omegas = np.full(n, rng.uniform(*config.omega_range))
    radii = rng.uniform(*config.r_range, size=n)
    thetas = rng.uniform(*config.theta_range, size=n)
    phis = rng.uniform(*config.phi_range, size=n) % (2 * math.pi)

    experiments = []
    for w, r, th, ph in zip(omegas, radii, thetas, phis):
        src = DipoleSource(p0=config.p0, omega=float(w), r_min_factor=config.r_min_factor)
        r_m = float(r) * src.wavelength if config.r_unit == "wavelength" else float(r)
        pt = SamplePoint(r=r_m, theta=float(th), phi=float(ph), t=0.0)
        check_admissible(src, pt)
        experiments.append(Experiment(src, pt))
    return experiments
