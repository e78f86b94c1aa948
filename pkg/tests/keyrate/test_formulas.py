"""Tests for `odqkd.keyrate.formulas`: entropy, link budget, yields, error rates and rates."""

from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError

from odqkd.core.alphabet import Basis, symbols_in_basis
from odqkd.core.errors import ParameterError, UndefinedRateError
from odqkd.detector.model import DetectorParams, EquivalentDetector, equivalent_detector
from odqkd.keyrate.formulas import (
    LinkBudget,
    binary_entropy,
    key_rate_conference,
    key_rate_ideal,
    key_rate_realistic,
    link_budget,
    phase_error_xx,
    qber_zz,
    yield_single_photon,
    yield_vanishes,
)
from odqkd.quantum.measurement import local_outcome_distribution, pauli_channel
from odqkd.quantum.states import basis_state, density, werner_ghz

PARAMS = DetectorParams()
EQUIV = equivalent_detector(PARAMS)
PERFECT = EquivalentDetector(eta_z=1.0, eta_x=1.0, dark=0.0)


def test_binary_entropy_values() -> None:
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.02) == pytest.approx(0.141441, abs=1e-6)
    with pytest.raises(ParameterError):
        binary_entropy(1.2)
    with pytest.raises(ParameterError):
        binary_entropy(-0.01)


def test_binary_entropy_symmetric_and_concave() -> None:
    xs = np.linspace(0.0, 1.0, 101)
    hs = np.array([binary_entropy(float(x)) for x in xs])
    assert np.allclose(hs, hs[::-1], atol=1e-12)
    # second differences of a concave function are nonpositive
    assert (np.diff(hs, n=2) <= 1e-12).all()


def test_link_budget_transmittance() -> None:
    link = link_budget(100.0, 0.2)
    assert link.transmittance == pytest.approx(0.1)
    assert link.arm_efficiency(0.08) == pytest.approx(0.008)
    assert link_budget(100.0, 0.2, relay_at_midpoint=True).transmittance == pytest.approx(
        10**-0.5
    )
    assert link_budget(0.0, 0.2).transmittance == 1.0
    with pytest.raises(ValidationError):
        LinkBudget(distance_km=-1.0, alpha=0.2)


@pytest.mark.parametrize("distance", [0.0, 12.5, 80.0, 333.0])
def test_doubling_alpha_squares_transmittance(distance: float) -> None:
    single = link_budget(distance, 0.2).transmittance
    double = link_budget(distance, 0.4).transmittance
    assert abs(double - single**2) < 1e-12


def test_transmittance_nonincreasing_in_distance() -> None:
    values = [link_budget(d, 0.2).transmittance for d in range(0, 701, 10)]
    assert all(b <= a for a, b in zip(values, values[1:], strict=False))


def test_yield_limits() -> None:
    assert yield_single_photon(link_budget(0.0, 0.2), PERFECT) == 1.0
    dead = EquivalentDetector(eta_z=0.0, eta_x=0.0, dark=0.0)
    assert yield_single_photon(link_budget(0.0, 0.2), dead) == 0.0
    expected = (1 - (1 - EQUIV.dark) * (1 - EQUIV.eta_z)) ** 2
    assert yield_single_photon(link_budget(0.0, 0.2), EQUIV) == pytest.approx(expected)
    assert expected == pytest.approx(6.4e-3, rel=1e-3)


def test_error_rates_limits() -> None:
    link = link_budget(0.0, 0.2)
    assert qber_zz(1.0, link, PERFECT, 0.02) == pytest.approx(0.02, abs=1e-15)
    assert phase_error_xx(1.0, link, PERFECT, 0.02) == pytest.approx(0.02, abs=1e-15)
    assert qber_zz(0.0, link, EQUIV, 0.02) == 0.5
    assert phase_error_xx(0.0, link, EQUIV, 0.02) == 0.5


def test_qber_nonincreasing_in_p() -> None:
    link = link_budget(200.0, 0.2)
    values = [qber_zz(float(p), link, EQUIV, 0.02) for p in np.linspace(0.0, 1.0, 11)]
    assert all(b <= a for a, b in zip(values, values[1:], strict=False))


def test_error_rate_contract() -> None:
    dead = EquivalentDetector(eta_z=0.0, eta_x=0.0, dark=0.0)
    with pytest.raises(UndefinedRateError):
        qber_zz(1.0, link_budget(0.0, 0.2), dead, 0.02)
    with pytest.raises(UndefinedRateError):
        phase_error_xx(1.0, link_budget(0.0, 0.2), dead, 0.02)
    with pytest.raises(ParameterError):
        phase_error_xx(1.5, link_budget(0.0, 0.2), EQUIV, 0.02)


def _exact_error(p: float, basis: Basis, link: LinkBudget, e_d: float) -> float:
    """Signal coincidences measured on the exact two-qubit state; others are random."""
    rho = pauli_channel(werner_ghz(2, p), 1, "Y", e_d)
    family = np.stack([density(basis_state(s)).matrix for s in symbols_in_basis(basis)])
    probs = local_outcome_distribution(rho, [family, family])
    signal_error = float(probs[0, 1] + probs[1, 0])
    eta = link.arm_efficiency(EQUIV.eta_z if basis is Basis.Z else EQUIV.eta_x)
    y11 = yield_single_photon(link, EQUIV, basis)
    return (eta * eta * signal_error + (y11 - eta * eta) * 0.5) / y11


def test_phase_error_matches_exact_state_at_zero_distance() -> None:
    link = link_budget(0.0, 0.2)
    got = phase_error_xx(0.99, link, EQUIV, 0.02)
    assert abs(got - _exact_error(0.99, Basis.X, link, 0.02)) < 1e-9


def test_error_rates_match_exact_state_on_random_points() -> None:
    rng = np.random.default_rng(5)
    for _ in range(20):
        p = float(rng.uniform(0.0, 1.0))
        link = link_budget(float(rng.uniform(0.0, 600.0)), 0.2)
        assert abs(qber_zz(p, link, EQUIV, 0.02) - _exact_error(p, Basis.Z, link, 0.02)) < 1e-9
        exact_x = _exact_error(p, Basis.X, link, 0.02)
        assert abs(phase_error_xx(p, link, EQUIV, 0.02) - exact_x) < 1e-9


def _chain(p: float, distance: float) -> float:
    t = 10 ** (-0.2 * distance / 20)
    pd = 2 * 8e-8 * (1 - 8e-8) ** 2 * 0.4
    eta_z = 0.5 * (1 - 8e-8) ** 2 * (
        2 * 8e-8 * (1 - (1 - 8e-8) * 0.6**2) + (1 - (1 - 8e-8) * 0.6) ** 2
    )
    eta_x = (1 - 8e-8) ** 2 * (1 - (1 - 8e-8) * 0.6) ** 2

    def err(eta: float) -> tuple[float, float]:
        y = (1 - (1 - pd) * (1 - eta * t)) ** 2
        return y, 0.5 - p * (eta * t) ** 2 * (0.5 - 0.02) / y

    def h(x: float) -> float:
        return -x * math.log2(x) - (1 - x) * math.log2(1 - x)

    q, ezz = err(eta_z)
    _, exx = err(eta_x)
    return q * (1 - h(exx)) - q * 1.16 * h(ezz)


@pytest.mark.parametrize("distance", [0.0, 150.0, 420.0])
def test_realistic_rate_matches_independent_chain(distance: float) -> None:
    point = key_rate_realistic(1.0, link_budget(distance, 0.2), EQUIV, PARAMS)
    assert point.rate == pytest.approx(_chain(1.0, distance), rel=1e-12)
    assert not point.clamped


def test_realistic_rate_clamps() -> None:
    point = key_rate_realistic(0.0, link_budget(10.0, 0.2), EQUIV, PARAMS)
    assert point.rate == 0.0
    assert point.clamped
    assert point.qber_zz == 0.5


@pytest.mark.parametrize(
    "equiv",
    [
        EquivalentDetector(eta_z=0.0, eta_x=0.0, dark=0.0),
        equivalent_detector(DetectorParams(eta_d=0.0, p_d=0.0)),
    ],
)
def test_realistic_rate_without_yield_is_zero(equiv: EquivalentDetector) -> None:
    link = link_budget(10.0, 0.2)
    assert yield_vanishes(link, equiv)

    point = key_rate_realistic(1.0, link, equiv, PARAMS)

    assert point.rate == 0.0
    assert point.clamped
    assert point.gain_zz == 0.0
    assert (point.qber_zz, point.phase_error_xx) == (0.5, 0.5)


def test_realistic_rate_rejects_bad_p_without_yield() -> None:
    dead = EquivalentDetector(eta_z=0.0, eta_x=0.0, dark=0.0)
    with pytest.raises(ParameterError):
        key_rate_realistic(1.5, link_budget(10.0, 0.2), dead, PARAMS)


def test_dark_free_yield_does_not_cancel_at_long_distance() -> None:
    dark_free = DetectorParams(p_d=0.0)
    equiv = equivalent_detector(dark_free)
    link = link_budget(2000.0, 0.2)

    assert not yield_vanishes(link, equiv)
    assert yield_single_photon(link, equiv) > 0.0
    assert qber_zz(1.0, link, equiv, 0.02) == pytest.approx(0.02)
    point = key_rate_realistic(1.0, link, equiv, dark_free)
    assert point.rate > 0.0 and not point.clamped


def test_rate_positive_at_hundred_db() -> None:
    # 500 km at 0.2 dB/km is 100 dB of total fiber loss
    point = key_rate_realistic(1.0, link_budget(500.0, 0.2), EQUIV, PARAMS)
    assert point.rate > 0


def test_key_rate_ideal() -> None:
    assert key_rate_ideal(1.0, 0.0, 0.0, 1.16) == 1.0
    assert key_rate_ideal(0.5, 0.5, 0.0, 1.16) == 0.0
    expected = 0.1 * (1 - binary_entropy(0.02) - 1.16 * binary_entropy(0.03))
    assert key_rate_ideal(0.1, 0.02, 0.03, 1.16) == pytest.approx(expected)


def test_key_rate_conference() -> None:
    assert key_rate_conference(1.0, 0.0, 0.0, 0.0, 1.16) == 1.0
    assert key_rate_conference(1.0, 0.0, 0.0, 0.5, 1.16) == 0.0
    sym = key_rate_conference(0.2, 0.03, 0.03, 0.02, 1.16)
    assert sym == key_rate_conference(0.2, 0.03, 0.01, 0.02, 1.16)
    assert sym == pytest.approx(0.2 * (1 - 1.16 * binary_entropy(0.03) - binary_entropy(0.02)))
