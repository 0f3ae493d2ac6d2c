import math

import numpy as np
import pytest

from rtneq.errors import InvalidArgumentError, ResourceLimitError
from rtneq.contraction import batch_rtn_states, sample_rtn_state
from rtneq.dynamics import (
    DynamicsResult,
    HamiltonianSpec,
    analyze,
    build_hamiltonian,
    effdim_of_state,
    loschmidt_average,
    npoint_fluctuation,
    pauli_on,
)
from rtneq.effdim import inverse_effdim_rtt
from rtneq.geometry import build_rtt


def random_state(dim, seed):
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


class TestHamiltonians:
    def test_two_site_closed_matches_hand_expansion(self):
        h = build_hamiltonian(HamiltonianSpec(2, "ising_closed"))
        x = np.array([[0, 1], [1, 0]])
        z = np.diag([1, -1])
        manual = np.kron(x, x) + np.kron(z, np.eye(2)) + np.kron(np.eye(2), z)
        assert np.allclose(h, manual)

    def test_single_site(self):
        h = build_hamiltonian(HamiltonianSpec(1))
        assert np.allclose(np.linalg.eigvalsh(h), [-1.0, 1.0])

    def test_random_hermitian_distinct_gaps(self):
        h = build_hamiltonian(HamiltonianSpec(3, "dense_random_hermitian", seed=0))
        assert np.linalg.norm(h - h.conj().T) < 1e-12
        e = np.linalg.eigvalsh(h)
        assert np.diff(e).min() > 1e-8

    def test_hermitian_invariant(self):
        for model in ("ising_open", "ising_closed"):
            h = build_hamiltonian(HamiltonianSpec(4, model, disorder_eps=0.3, seed=2))
            assert np.linalg.norm(h - h.conj().T) < 1e-12

    def test_disorder_splits_spectrum(self):
        clean = np.linalg.eigvalsh(build_hamiltonian(HamiltonianSpec(4, "ising_closed")))
        noisy = np.linalg.eigvalsh(
            build_hamiltonian(HamiltonianSpec(4, "ising_closed", disorder_eps=0.2, seed=3))
        )
        assert np.diff(clean).min() < 1e-10
        assert np.diff(noisy).min() > 1e-10

    def test_size_cap(self):
        with pytest.raises(ResourceLimitError):
            build_hamiltonian(HamiltonianSpec(15))


class TestAnalyze:
    def test_eigenstate_is_stationary(self):
        h = build_hamiltonian(HamiltonianSpec(3, "dense_random_hermitian", seed=4))
        _, basis = np.linalg.eigh(h)
        obs = pauli_on("X", 0, 3)
        res = analyze(basis[:, 1], h, obs, t_max=50, n_points=300)
        assert res.fluct_exact < 1e-24
        assert res.time_std < 1e-12
        assert res.expvals.std() < 1e-12

    def test_grid_variance_matches_double_sum(self):
        h = build_hamiltonian(HamiltonianSpec(3, "dense_random_hermitian", seed=5))
        proj = np.diag([1.0, 1, 1, 1, 0, 0, 0, 0]).astype(complex)
        res = analyze(random_state(8, 6), h, proj, t_max=1e4, n_points=10000)
        assert res.time_std**2 == pytest.approx(res.fluct_exact, rel=0.05)

    def test_unitary_invariance(self):
        h = build_hamiltonian(HamiltonianSpec(3, "dense_random_hermitian", seed=7))
        obs = pauli_on("Z", 1, 3)
        psi = random_state(8, 8)
        rng = np.random.default_rng(9)
        g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        u, _ = np.linalg.qr(g)
        base = analyze(psi, h, obs, t_max=100, n_points=500)
        rot = analyze(u @ psi, u @ h @ u.conj().T, u @ obs @ u.conj().T, t_max=100, n_points=500)
        assert rot.fluct_exact == pytest.approx(base.fluct_exact, abs=1e-10)
        assert rot.inv_deff_state == pytest.approx(base.inv_deff_state, abs=1e-10)
        assert rot.a_infinity == pytest.approx(base.a_infinity, abs=1e-10)
        assert np.allclose(rot.expvals, base.expvals, atol=1e-8)

    def test_degenerate_flag_on_closed_ising(self):
        h = build_hamiltonian(HamiltonianSpec(5, "ising_closed"))
        res = analyze(random_state(32, 10), h, pauli_on("X", 0, 5), t_max=10, n_points=50)
        assert res.degenerate_gaps

    def test_validation(self):
        h = build_hamiltonian(HamiltonianSpec(2, "ising_open"))
        good = random_state(4, 11)
        with pytest.raises(InvalidArgumentError):
            analyze(good * 2.0, h, pauli_on("X", 0, 2))
        with pytest.raises(InvalidArgumentError):
            analyze(good, h, 3.0 * pauli_on("X", 0, 2))
        nonherm = np.array([[0, 1], [0, 0]], dtype=complex)
        with pytest.raises(InvalidArgumentError):
            analyze(good, h, np.kron(nonherm, np.eye(2)))

    def test_fluct_bounded_by_ipr(self):
        h = build_hamiltonian(HamiltonianSpec(3, "dense_random_hermitian", seed=12))
        psi = random_state(8, 13)
        res = analyze(psi, h, pauli_on("X", 1, 3), t_max=10, n_points=50)
        assert res.fluct_exact <= res.inv_deff_state + 1e-12


class TestEffDimOfState:
    def test_eigenstate(self):
        h = build_hamiltonian(HamiltonianSpec(2, "ising_open"))
        _, basis = np.linalg.eigh(h)
        assert effdim_of_state(basis[:, 0], h) == pytest.approx(1.0)

    def test_flat_superposition(self):
        h = np.diag(np.arange(8.0)).astype(complex)
        for m in (2, 4, 8):
            psi = np.zeros(8, dtype=complex)
            psi[:m] = 1 / math.sqrt(m)
            assert effdim_of_state(psi, h) == pytest.approx(m)

    def test_matches_coefficient_sum(self):
        h = build_hamiltonian(HamiltonianSpec(5, "dense_random_hermitian", seed=14))
        psi = random_state(32, 15)
        _, basis = np.linalg.eigh(h)
        ipr = float((np.abs(basis.conj().T @ psi) ** 4).sum())
        assert 1.0 / effdim_of_state(psi, h) == pytest.approx(ipr, rel=1e-14)

    def test_loschmidt_is_inverse_effdim(self):
        h = build_hamiltonian(HamiltonianSpec(3, "dense_random_hermitian", seed=16))
        psi = random_state(8, 17)
        assert loschmidt_average(psi, h) * effdim_of_state(psi, h) == pytest.approx(1.0, rel=1e-14)

    def test_rtt_sample_ipr_tracks_analytic_bound(self):
        # on-average normalized fourth moments in a product eigenbasis realize
        # the analytic value; per-sample normalization biases the mean low
        g = build_rtt(5, True, 2, 2, 1)
        states = batch_rtn_states(g, "cue", 200, seed=42)
        norms = (np.abs(states) ** 2).sum(axis=1)
        fourth = (np.abs(states) ** 4).sum(axis=1)
        bound = float(inverse_effdim_rtt(5, 2, 2, 1, closed=True))
        est = fourth.mean() / norms.mean() ** 2
        assert est == pytest.approx(bound, rel=0.15)
        h_product = np.diag(np.arange(32, dtype=float)).astype(complex)
        normalized = states / np.linalg.norm(states, axis=1, keepdims=True)
        mean_ipr = np.mean([1.0 / effdim_of_state(s, h_product) for s in normalized])
        assert mean_ipr <= bound


class TestNPoint:
    def test_bound_and_reduction(self):
        h = build_hamiltonian(HamiltonianSpec(5, "ising_closed", disorder_eps=0.1, seed=18))
        psi = sample_rtn_state(build_rtt(5, True, 2, 2, 1), seed=19).state
        psi = psi / np.linalg.norm(psi)
        x1 = pauli_on("X", 0, 5)
        x2 = pauli_on("X", 1, 5)
        two_point = npoint_fluctuation(psi, h, [x1, x2])
        ipr = 1.0 / effdim_of_state(psi, h)
        assert two_point <= ipr

    def test_single_matches_analyze(self):
        h = build_hamiltonian(HamiltonianSpec(3, "dense_random_hermitian", seed=20))
        psi = random_state(8, 21)
        obs = pauli_on("Z", 2, 3)
        assert npoint_fluctuation(psi, h, [obs]) == pytest.approx(
            analyze(psi, h, obs, t_max=10, n_points=50).fluct_exact, rel=1e-12
        )

    def test_identity_has_no_fluctuation(self):
        h = build_hamiltonian(HamiltonianSpec(2, "ising_open"))
        psi = random_state(4, 22)
        assert npoint_fluctuation(psi, h, [np.eye(4, dtype=complex)]) < 1e-24

    def test_norm_validation(self):
        h = build_hamiltonian(HamiltonianSpec(2, "ising_open"))
        psi = random_state(4, 23)
        with pytest.raises(InvalidArgumentError):
            npoint_fluctuation(psi, h, [2.0 * np.eye(4, dtype=complex)])
        with pytest.raises(InvalidArgumentError):
            npoint_fluctuation(psi, h, [])
