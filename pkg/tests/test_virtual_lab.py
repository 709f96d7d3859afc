import math

import numpy as np
import pytest

from conftest import fd_relative_error, random_moderate_points
from maxwell_discovery import virtual_lab
from maxwell_discovery.theory_lang import ALPHABET, term
from maxwell_discovery.virtual_lab import (
    PAPER_FIXED_OMEGA,
    SPEED_OF_LIGHT,
    DipoleSource,
    DomainError,
    Experiment,
    ExperimentConfig,
    SamplePoint,
    eval_term,
    evaluate_experiment,
    far_fields,
    fd_oracle,
    make_experiments,
    term_magnitude,
)

SRC = DipoleSource(p0=2.0, omega=5e8)


def far_point(rng):
    return SamplePoint(
        r=rng.uniform(1e9, 1e10) * SRC.wavelength,
        theta=rng.uniform(0.05, math.pi - 0.05),
        phi=rng.uniform(0, 2 * math.pi),
        t=rng.uniform(0, 1e-6),
    )


def test_on_axis_fields_vanish():
    e, b = far_fields(SRC, SamplePoint(r=1e10 * SRC.wavelength, theta=0.0, phi=0.3, t=1e-3))
    assert np.all(e == 0) and np.all(b == 0)


def test_broadside_amplitude_at_zero_phase():
    r = 3e9 * SRC.wavelength
    pt = SamplePoint(r=r, theta=math.pi / 2, phi=1.1, t=r / SRC.c_sim)
    e, b = far_fields(SRC, pt)
    expected = SRC.mu0 * SRC.p0 * SRC.omega**2 / (4 * math.pi * r)
    assert np.linalg.norm(e) == pytest.approx(expected, rel=1e-9)
    np.testing.assert_allclose(e, -expected * pt.theta_hat(), rtol=1e-9)
    np.testing.assert_allclose(b, -expected / SRC.c_sim * pt.phi_hat(), rtol=1e-9)


def test_field_ratio_and_orthogonality_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        e, b = far_fields(SRC, far_point(rng))
        assert np.linalg.norm(e) / np.linalg.norm(b) == pytest.approx(SRC.c_sim, rel=1e-12)
        assert abs(e @ b) <= 1e-14 * np.linalg.norm(e) * np.linalg.norm(b)


def test_identity_term_matches_far_fields():
    pt = far_point(np.random.default_rng(0))
    e, b = far_fields(SRC, pt)
    assert np.array_equal(eval_term(term("E", "identity"), SRC, pt).array, e)
    np.testing.assert_allclose(eval_term(term("B", "identity"), SRC, pt).array, b, rtol=1e-14)


@pytest.mark.parametrize("field", ["E", "B"])
def test_dtt_is_minus_omega_squared(field):
    rng = np.random.default_rng(1)
    for _ in range(20):
        pt = far_point(rng)
        f = eval_term(term(field, "identity"), SRC, pt).array
        dtt = eval_term(term(field, "dtt"), SRC, pt).array
        np.testing.assert_allclose(dtt, -(SRC.omega**2) * f, rtol=1e-12, atol=0)


def test_div_e_suppressed_in_far_field():
    rng = np.random.default_rng(2)
    for _ in range(20):
        pt = SamplePoint(1e9 * SRC.wavelength, rng.uniform(0.3, 2.8), rng.uniform(0, 6.28))
        e, _ = far_fields(SRC, pt)
        div = eval_term(term("E", "div"), SRC, pt).array[0]
        assert abs(div) <= 1e-6 * SRC.wavenumber * np.linalg.norm(e)


def test_div_e_moderate_r_matches_closed_form(near_source):
    # exact divergence of the far-field expression: -2 A cos(theta) cos(psi) / r^2
    pt = SamplePoint(37.0, 0.7, 2.0)
    psi = -near_source.wavenumber * pt.r
    expected = -2 * near_source.amplitude * math.cos(pt.theta) * math.cos(psi) / pt.r**2
    assert eval_term(term("E", "div"), near_source, pt).value[0] == pytest.approx(expected, rel=1e-9)


def test_fd_oracle_dt_at_ten_kilometres(near_source):
    pt = SamplePoint(1e4, 1.0, 0.5)
    t = term("E", "dt")
    fd = fd_oracle(t, near_source, pt, h=1e-4 / near_source.omega, richardson=False).array
    an = eval_term(t, near_source, pt).array
    assert np.linalg.norm(fd - an) / np.linalg.norm(an) < 1e-6


def test_fd_oracle_curl_b_at_ten_kilometres(near_source):
    pt = SamplePoint(1e4, 2.1, 4.0)
    t = term("B", "curl")
    fd = fd_oracle(t, near_source, pt).array
    an = eval_term(t, near_source, pt).array
    assert np.linalg.norm(fd - an) / np.linalg.norm(an) < 1e-6


def test_fd_oracle_identity_is_exact(near_source):
    pt = SamplePoint(50.0, 1.2, 0.1)
    for h in (1e-3, 1.0):
        fd = fd_oracle(term("E", "identity"), near_source, pt, h=h).array
        np.testing.assert_allclose(fd, eval_term(term("E", "identity"), near_source, pt).array, rtol=1e-13)


@pytest.mark.parametrize("t", ALPHABET, ids=lambda t: t.letter)
def test_all_terms_match_fd_oracle(t, near_source):
    for pt in random_moderate_points(10, seed=11):
        an = eval_term(t, near_source, pt).array
        fd = fd_oracle(t, near_source, pt).array
        mag = term_magnitude(t, near_source, pt).array
        assert fd_relative_error(an, fd, mag) < 1e-6


def test_shared_phase_evaluated_once(monkeypatch):
    calls = []
    original = virtual_lab.phase.__wrapped__

    def counting(source, point):
        calls.append(point)
        return original(source, point)

    monkeypatch.setattr(virtual_lab, "phase", counting)
    exp = Experiment(SRC, SamplePoint(4e9 * SRC.wavelength, 1.0, 1.0))
    evaluate_experiment.cache_clear()
    evaluate_experiment(exp)
    assert len(calls) == 1
    evaluate_experiment.cache_clear()


def test_domain_errors():
    with pytest.raises(DomainError):
        far_fields(SRC, SamplePoint(1e9 * SRC.wavelength, 3.5, 0.0))
    with pytest.raises(DomainError):
        far_fields(SRC, SamplePoint(1e9 * SRC.wavelength, 1.0, 2 * math.pi))
    with pytest.raises(DomainError):
        far_fields(SRC, SamplePoint(1e3, 1.0, 0.0))
    with pytest.raises(DomainError):
        DipoleSource(p0=-1.0, omega=1.0)


def test_make_experiments_deterministic():
    cfg = ExperimentConfig(count=7)
    assert make_experiments(cfg, 42) == make_experiments(cfg, 42)
    assert make_experiments(cfg, 42) != make_experiments(cfg, 43)


def test_paper_fixed_omega_shape():
    cfg = ExperimentConfig(mode=PAPER_FIXED_OMEGA, r_range=(1e17, 1e17), r_unit="meter")
    exps = make_experiments(cfg, 5)
    assert len(exps) == 5
    assert len({e.source.omega for e in exps}) == 1
    assert {e.point.r for e in exps} == {1e17}
    assert len({e.point.theta for e in exps}) == 5
    assert all(e.point.t == 0 for e in exps)


def test_varying_omega_distinct_and_admissible():
    exps = make_experiments(ExperimentConfig(), 9)
    assert len({e.source.omega for e in exps}) == 5
    for e in exps:
        assert e.point.r >= e.source.r_min_factor * e.source.wavelength
        assert e.source.c_sim == SPEED_OF_LIGHT


@pytest.mark.parametrize(
    "cfg",
    [
        ExperimentConfig(count=4),
        ExperimentConfig(omega_range=(2.0, 1.0)),
        ExperimentConfig(mode="bogus"),
        ExperimentConfig(theta_range=(0.0, 4.0)),
    ],
)
def test_make_experiments_config_errors(cfg):
    with pytest.raises(ValueError):
        make_experiments(cfg, 0)
