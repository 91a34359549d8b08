import numpy as np
import pytest

from competing_chain import (ModelParams, hamiltonian_direct,
                             hamiltonian_from_transfer, monodromy,
                             transfer_matrix, transfer_and_derivative,
                             transfer_commutator_residual, crossing_residual,
                             transfer_identity_residual, apply_transfer,
                             a_bare, d_bare, max_norm)
from competing_chain.errors import ParameterError, SizeError


def test_monodromy_degree_and_leading_coefficient(params_small):
    # product of 2N affine factors: leading u^{2N} coefficient is the identity
    u = 1e8
    t0 = monodromy(u, params_small)
    lead = t0 / u ** params_small.two_n
    assert max_norm(lead - np.eye(t0.shape[0])) < 1e-6


def test_monodromy_reflected_is_transpose_at_zero_shifts():
    # at a = theta = 0 both monodromies multiply the same symmetric factors
    # in opposite order, so the reflected one is the plain transpose
    pr = ModelParams(two_n=4, a_bar=0.0, p=1.0, q=1.0, xi=0.0)
    u = 0.73
    t0 = monodromy(u, pr)
    th = monodromy(u, pr, reflected=True)
    assert max_norm(th - t0.T) < 1e-13


def test_monodromy_derivative_matches_finite_difference(params_small):
    u, h = 0.31, 1e-6
    _, dm = monodromy(u, params_small, derivative=True)
    fd = (monodromy(u + h, params_small) - monodromy(u - h, params_small)) / (2 * h)
    assert max_norm(dm - fd) < 1e-6


def test_monodromy_size_cap():
    pr = ModelParams(two_n=12, a_bar=0.1, p=1.0, q=1.0)
    with pytest.raises(SizeError):
        monodromy(0.1, pr, max_dim=2 ** 12)


def test_transfer_commutativity():
    # moderate spectral points: the entries grow like u^{4N+2}, so the
    # absolute max-norm threshold is meaningful for |u| of order one
    pr = ModelParams(two_n=6, a_bar=0.66, p=1.2, q=0.7, xi=1.2)
    assert transfer_commutator_residual(0.31, -0.77, pr) <= 1e-10
    assert transfer_commutator_residual(0.6, 0.05, pr) <= 1e-10
    assert transfer_commutator_residual(-0.4, 0.55, pr) <= 1e-10


def test_transfer_crossing():
    pr = ModelParams(two_n=6, a_bar=0.66, p=1.2, q=0.7, xi=1.2)
    assert crossing_residual(-0.5, pr) < 1e-12   # fixed point of u -> -u-1
    assert crossing_residual(0.123, pr) <= 1e-10
    assert crossing_residual(0.0, pr) <= 1e-10


def test_transfer_derivative_matches_finite_difference(params_small):
    u, h = -0.27, 1e-6
    _, dt = transfer_and_derivative(u, params_small)
    fd = (transfer_matrix(u + h, params_small)
          - transfer_matrix(u - h, params_small)) / (2 * h)
    assert max_norm(dt - fd) < 1e-5


def test_hamiltonian_equivalence_core_oracle(params_small):
    hd = hamiltonian_direct(params_small)
    ht = hamiltonian_from_transfer(params_small)
    assert max_norm(hd - ht) <= 1e-9


def test_hamiltonian_equivalence_heisenberg_2n6():
    pr = ModelParams(two_n=6, a_bar=0.0, p=1.3, q=0.8, xi=0.4)
    assert max_norm(hamiltonian_direct(pr) - hamiltonian_from_transfer(pr)) <= 1e-9


def test_hamiltonian_equivalence_random_draws(rng):
    for _ in range(3):
        pr = ModelParams(two_n=4,
                         a_bar=float(rng.uniform(0.1, 0.9)),
                         p=float(rng.uniform(0.5, 2.0)),
                         q=float(rng.uniform(0.5, 2.0)),
                         xi=float(rng.uniform(0.0, 2.0)))
        assert max_norm(hamiltonian_direct(pr) - hamiltonian_from_transfer(pr)) <= 1e-9


def test_hamiltonian_from_transfer_requires_homogeneous(params_small):
    pr = params_small.with_theta_bar([0.1, -0.1, 0.2, -0.2])
    with pytest.raises(ParameterError):
        hamiltonian_from_transfer(pr)


def test_broken_c2_breaks_equivalence(params_small):
    ht = hamiltonian_from_transfer(params_small, _flip_c2_sign=True)
    assert max_norm(hamiltonian_direct(params_small) - ht) > 1.0


def test_fusion_identity_homogeneous(params_small):
    for j in range(1, params_small.two_n + 1):
        assert transfer_identity_residual(j, params_small) <= 1e-8


def test_fusion_identity_inhomogeneous():
    prof = [0.1 * (j - 2 - 0.5) for j in range(1, 5)]
    pr = ModelParams(two_n=4, a_bar=0.6, p=1.0, q=0.5, xi=1.2, theta_bar=prof)
    residuals = [transfer_identity_residual(j, pr) for j in range(1, 5)]
    assert max(residuals) <= 1e-8


def test_fusion_identity_j_independent_at_equal_theta(params_small):
    res = [transfer_identity_residual(j, params_small)
           for j in range(1, params_small.two_n + 1)]
    assert np.ptp(res) < 1e-12  # identical equations at identical thetas


def test_scalar_function_symmetry(params_small):
    for u in (0.37, -1.2 + 0.4j, 2.2j):
        assert abs(d_bare(u, params_small) - a_bare(-u - 1.0, params_small)) == 0.0


def test_apply_transfer_matches_dense(params_small, rng):
    u = 0.29 - 0.11j
    t = transfer_matrix(u, params_small)
    v = rng.normal(size=t.shape[0]) + 1j * rng.normal(size=t.shape[0])
    assert np.max(np.abs(t @ v - apply_transfer(u, params_small, v))) < 1e-11
