import numpy as np
import numpy.testing as npt
import pytest

from spinlab.errors import DomainError
from spinlab.fock import X, Y, Z, DensityOperator, Direction, OrthogonalTriplet
from spinlab.moments import spin_moments
from spinlab.oracle import (
    ProductState,
    antisymmetric_overlap,
    dicke_embedding_check,
    dicke_state,
    distinguishable_toth,
    product_variance,
    random_product_state,
    run_suite,
    tensor_spin,
)


def test_aligned_product_state_has_no_variance():
    ps = ProductState(3, [Z.vector] * 3)
    assert product_variance(ps, Z) == pytest.approx(0.0, abs=1e-12)
    assert product_variance(ps, X) == pytest.approx(3 / 4)


def test_product_state_vector():
    ps = ProductState(2, [Z.vector, -Z.vector])
    npt.assert_allclose(np.abs(ps.vector()), [0, 0, 1, 0], atol=1e-12)
    with pytest.raises(DomainError):
        ProductState(2, [Z.vector])
    with pytest.raises(DomainError):
        ProductState(1, [[1.0, 1.0, 0.0]])


@pytest.mark.parametrize("n", range(2, 7))
def test_product_variance_below_shot_noise(n, rng):
    for _ in range(200):
        ps = random_product_state(n, rng)
        d = Direction.random(rng)
        value = product_variance(ps, d)
        assert value <= n / 4 + 1e-10
        means = ps.bloch_vectors @ d.vector / 2
        assert value == pytest.approx(n / 4 - np.sum(means**2), abs=1e-10)


def test_tensor_spin_algebra():
    Jx, Jy, Jz = (tensor_spin(3, d) for d in (X, Y, Z))
    npt.assert_allclose(Jx @ Jy - Jy @ Jx, 1j * Jz, atol=1e-12)


def test_antisymmetric_overlap_is_determinant(rng):
    assert antisymmetric_overlap(np.eye(2) / 2) == pytest.approx(0.25)
    assert antisymmetric_overlap([[1.0, 0.0], [0.0, 0.0]]) == pytest.approx(0.0)
    for _ in range(50):
        rho = DensityOperator.random(1, rng).matrix
        assert antisymmetric_overlap(rho) == pytest.approx(np.linalg.det(rho).real, abs=1e-12)
    with pytest.raises(DomainError):
        antisymmetric_overlap([[0.7, 0.0], [0.0, 0.7]])


def test_dicke_state():
    npt.assert_allclose(dicke_state(2, 1), [0, 2**-0.5, 2**-0.5, 0])
    psi = dicke_state(4, 1)
    r = spin_moments(psi, tensor_spin(4, X))
    assert r.variance == pytest.approx(2.5)
    with pytest.raises(DomainError):
        dicke_state(3, 4)


def test_dicke_embedding(rng):
    for n in range(1, 7):
        for k in range(n + 1):
            for _ in range(20):
                assert dicke_embedding_check(n, k, Direction.random(rng)).passed
    with pytest.raises(DomainError):
        dicke_embedding_check(9, 1, Z)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_separable_qubits_satisfy_toth(n, rng):
    for _ in range(200):
        triplet = OrthogonalTriplet.random(rng)
        components = int(rng.integers(1, 5))
        assert distinguishable_toth(n, components, triplet, rng).all_satisfied


def test_run_suite():
    summary = run_suite(4, 20, seed=3)
    assert summary.passed
    assert summary == run_suite(4, 20, seed=3)
    with pytest.raises(DomainError):
        run_suite(9, 10, seed=3)
    with pytest.raises(DomainError):
        run_suite(4, 0, seed=3)
