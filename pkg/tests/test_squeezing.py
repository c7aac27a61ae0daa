import numpy as np
import pytest

from spinlab.errors import DomainError
from spinlab.fock import (
    X,
    Y,
    Z,
    DensityOperator,
    DiagonalMixture,
    OrthogonalTriplet,
    PureState,
    number_state,
)
from spinlab.squeezing import (
    flat_peak_state,
    flat_peak_xi_w,
    gaussian_state,
    ineq3_delta,
    ineq3_threshold,
    toth_check,
    xi_parameters,
    xi_s_number_state,
    xi_w_diagonal_real,
)

# ξ²_W along (z, y, x), i.e. N Δ²k / ⟨Jx⟩²
ZYX = OrthogonalTriplet(Z, Y, X)


def test_bosons_saturate_first_inequality(rng):
    for n in (1, 3, 8):
        for state in (PureState.random(n, rng), DensityOperator.random(n, rng)):
            r = toth_check(state, OrthogonalTriplet.random(rng))
            assert abs(r.lhs1) <= 1e-9
            assert r.satisfied1


def test_coherent_state_saturates_second():
    r = toth_check(number_state(6, 0), OrthogonalTriplet.standard())
    assert r.lhs2 == pytest.approx(0.0, abs=1e-12)


def test_twin_fock_violates_third():
    r = toth_check(number_state(4, 2), OrthogonalTriplet.cyclic("z"))
    assert r.lhs3 == pytest.approx(4.0)
    assert not r.satisfied3
    assert not r.all_satisfied


def test_ineq3_delta_examples():
    assert ineq3_delta(number_state(4, 2), 1.0) == pytest.approx(4.0)
    assert ineq3_delta(number_state(4, 2), 0.0) == pytest.approx(-8.0)
    with pytest.raises(DomainError):
        ineq3_delta(number_state(4, 2), 1.5)


@pytest.mark.parametrize("n", [2, 4, 7, 12])
def test_ineq3_delta_matches_oracle(n, rng):
    for _ in range(25):
        mix = DiagonalMixture.random(n, rng)
        triplet = OrthogonalTriplet.random(rng)
        oracle = toth_check(mix, triplet).lhs3
        assert ineq3_delta(mix, triplet.n3.nz**2) == pytest.approx(oracle, abs=1e-9)


@pytest.mark.parametrize("n, k", [(4, 1), (4, 2), (9, 3), (20, 10)])
def test_ineq3_threshold_number_states(n, k):
    threshold = ineq3_threshold(number_state(n, k))
    assert threshold == pytest.approx(n / (n + 2))
    assert ineq3_delta(number_state(n, k), threshold) == pytest.approx(0.0, abs=1e-9)


def test_ineq3_needs_diagonal_state():
    psi = gaussian_state(4, 2, 0.6)
    with pytest.raises(DomainError):
        ineq3_delta(psi, 0.5)
    with pytest.raises(DomainError):
        ineq3_threshold(psi)
    rho = number_state(4, 2).density()
    assert ineq3_delta(rho, 1.0) == pytest.approx(4.0)


def test_ineq3_threshold_undefined():
    assert ineq3_threshold(number_state(4, 0)) is None
    assert ineq3_threshold(DiagonalMixture.uniform(2)) is None


def test_sign_change_at_threshold():
    t = 4 / 6
    below = toth_check(number_state(4, 2), OrthogonalTriplet.with_n3z(t - 1e-6))
    above = toth_check(number_state(4, 2), OrthogonalTriplet.with_n3z(t + 1e-6))
    assert below.lhs3 < 0 < above.lhs3


def test_mixture_violation_above_threshold():
    probs = 0.9 * np.eye(5)[2] + 0.1 / 5
    mix = DiagonalMixture(4, probs)
    threshold = ineq3_threshold(mix)
    assert threshold == pytest.approx(15.2 / 21.6)
    assert toth_check(mix, OrthogonalTriplet.with_n3z(0.5)).satisfied3
    assert not toth_check(mix, OrthogonalTriplet.with_n3z(0.85)).satisfied3


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4, 10, 30])
def test_separable_mixtures(n, rng):
    for _ in range(250):
        mix = DiagonalMixture.random(n, rng)
        triplet = OrthogonalTriplet.random(rng)
        r = toth_check(mix, triplet)
        assert abs(r.lhs1) <= 1e-9
        assert r.satisfied2 and r.satisfied4
        xi = xi_parameters(mix, triplet)
        if xi.xi_s_squared is not None:
            assert xi.xi_s_squared >= 1 - 1e-9
        if xi.xi_w_squared is not None:
            assert xi.xi_w_squared >= xi.xi_s_squared - 1e-12


def test_xi_number_states():
    r = xi_parameters(number_state(4, 1), OrthogonalTriplet.standard())
    assert r.xi_s_squared == pytest.approx(10.0)
    assert r.xi_w_squared == pytest.approx(10.0)
    assert xi_s_number_state(4, 1) == pytest.approx(10.0)
    for n in (1, 5, 12):
        r = xi_parameters(number_state(n, 0), OrthogonalTriplet.standard())
        assert r.xi_s_squared == pytest.approx(1.0)
    assert xi_s_number_state(4, 2) is None


@pytest.mark.parametrize("n", range(1, 41))
def test_xi_s_number_state_closed_form(n):
    triplet = OrthogonalTriplet.standard()
    for k in range(n + 1):
        if 2 * k == n:
            continue
        r = xi_parameters(number_state(n, k), triplet)
        assert r.xi_s_squared == pytest.approx(xi_s_number_state(n, k), rel=1e-10)


def test_xi_undefined_along_z():
    r = xi_parameters(number_state(4, 1), OrthogonalTriplet(Z, X, Y))
    assert r.xi_w_squared is None
    assert r.xi_s_squared is None
    r = xi_parameters(DiagonalMixture.uniform(2), OrthogonalTriplet.standard())
    assert r.xi_w_squared is None


def test_gaussian_state():
    psi = gaussian_state(4, 2, 1e-3)
    assert abs(psi.amplitudes[2]) ** 2 > 1 - 1e-10
    assert np.sum(psi.probabilities) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        gaussian_state(4, 2, 0.0)
    with pytest.raises(DomainError):
        gaussian_state(4, 5, 0.3)


def test_gaussian_squeezing():
    assert xi_w_diagonal_real(gaussian_state(4, 2, 0.3)) == pytest.approx(1 / 3, abs=1e-3)
    for center in (1, 2, 3):
        psi = gaussian_state(4, center, 0.3)
        xi = xi_w_diagonal_real(psi)
        assert xi < 1
        assert xi == pytest.approx(xi_parameters(psi, ZYX).xi_w_squared, rel=1e-9)


def test_flat_peak_amplitude_weighting():
    psi = flat_peak_state(10, 1e-6)
    assert abs(psi.amplitudes[5]) ** 2 > 1 - 1e-6
    assert xi_w_diagonal_real(psi) == pytest.approx(110 / 12, abs=1e-2)
    assert xi_parameters(psi, ZYX).xi_w_squared == pytest.approx(110 / 12, abs=1e-2)


@pytest.mark.parametrize("n, p", [(10, 0.01), (4, 0.2), (20, 1e-4)])
def test_flat_peak_probability_weighting(n, p):
    psi = flat_peak_state(n, p, weighting="probability")
    k = np.arange(n + 1)
    probs = psi.probabilities
    var_k = probs @ (k - probs @ k) ** 2
    assert var_k == pytest.approx(p * (n + 2) * (n + 1) / 12, rel=1e-9)
    assert xi_w_diagonal_real(psi) == pytest.approx(flat_peak_xi_w(n, p), rel=1e-9)


def test_flat_peak_validation():
    with pytest.raises(DomainError):
        flat_peak_state(5, 0.1)
    with pytest.raises(DomainError):
        flat_peak_state(4, 1.0)
    with pytest.raises(DomainError):
        flat_peak_state(4, 0.1, weighting="phase")


def test_squeezing_is_discontinuous_at_twin_fock():
    # Both states are within 1e-6 of |5⟩ but their ξ²_W differ by a factor 55.
    gauss, flat = gaussian_state(10, 5, 0.2), flat_peak_state(10, 1e-6)
    assert abs(gauss.amplitudes[5]) ** 2 > 1 - 1e-6
    assert abs(flat.amplitudes[5]) ** 2 > 1 - 1e-6
    assert xi_w_diagonal_real(gauss) == pytest.approx(1 / 6, abs=1e-3)
    assert xi_w_diagonal_real(flat) == pytest.approx(110 / 12, abs=1e-2)
