"""Exact-diagonalization time evolution and late-time fluctuation statistics.

For a normalized state with eigenbasis coefficients c_j, the late-time
variance of a bounded observable under non-degenerate gaps is the exact
double sum over |c_j|^2 |c_k|^2 |A_jk|^2; the grid time series provides the
independent long-time check.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

_MAX_SITES = 14
_DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class HamiltonianSpec:
    n_sites: int
    model: str = "ising_closed"
    coupling: float = 1.0
    field: float = 1.0
    disorder_eps: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class DynamicsResult:
    eigenvalues: np.ndarray
    coefficients: np.ndarray
    inv_deff_state: float
    fluct_exact: float
    a_infinity: float
    time_grid: np.ndarray
    expvals: np.ndarray
    time_avg: float
    time_std: float
    loschmidt_avg: float
    degenerate_gaps: bool


def pauli_on(op: str, site: int, n_sites: int) -> np.ndarray:
    """Pauli operator on one site of a qubit chain (sites indexed from 0)."""
    if op not in PAULI:
        raise InvalidArgumentError(f"unknown Pauli {op!r}")
    if not 0 <= site < n_sites:
        raise InvalidArgumentError(f"site {site} outside chain of {n_sites}")
    out = np.array([[1.0 + 0j]])
    for k in range(n_sites):
        out = np.kron(out, PAULI[op] if k == site else PAULI["I"])
    return out


def build_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    """Dense Hermitian matrix for an Ising chain or a Gaussian random matrix.

    Closed chains deduplicate the wrap-around bond (n=2 has a single XX
    term); disorder_eps > 0 adds site-random longitudinal fields drawn
    uniformly from [-eps, eps] to split degenerate gaps.
    """
    n = spec.n_sites
    if n < 1:
        raise InvalidArgumentError("need at least one site")
    if n > _MAX_SITES:
        raise ResourceLimitError(f"{n} sites exceed the dense-diagonalization cap {_MAX_SITES}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed)))
    dim = 2**n
    if spec.model == "dense_random_hermitian":
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return (a + a.conj().T) / 2.0
    if spec.model not in ("ising_closed", "ising_open"):
        raise InvalidArgumentError(f"unknown model {spec.model!r}")
    bonds = {(k, k + 1) for k in range(n - 1)}
    if spec.model == "ising_closed" and n >= 2:
        bonds.add(tuple(sorted((n - 1, 0))))
    h = np.zeros((dim, dim), dtype=np.complex128)
    for u, v in sorted(bonds):
        h += spec.coupling * (pauli_on("X", u, n) @ pauli_on("X", v, n))
    for k in range(n):
        h += spec.field * pauli_on("Z", k, n)
    if spec.disorder_eps > 0:
        eps = rng.uniform(-spec.disorder_eps, spec.disorder_eps, size=n)
        for k in range(n):
            h += eps[k] * pauli_on("Z", k, n)
    return h


def _validated_state(state: np.ndarray, dim: int) -> np.ndarray:
    state = np.asarray(state, dtype=np.complex128).reshape(-1)
    if state.shape != (dim,):
        raise InvalidArgumentError(f"state dimension {state.shape} does not match {dim}")
    if abs(np.linalg.norm(state) - 1.0) > 1e-9:
        raise InvalidArgumentError("state must be normalized")
    return state


def _operator_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


def analyze(
    state: np.ndarray,
    hamiltonian: np.ndarray,
    observable: np.ndarray,
    t_max: float = 1000.0,
    n_points: int = 2000,
) -> DynamicsResult:
    """Eigenbasis decomposition, exact fluctuation double sum, and grid series.

    The observable must be Hermitian with operator norm at most 1.  If the
    spectrum carries (near-)degenerate eigenvalues the double sum no longer
    equals the infinite-time variance and the result is flagged.
    """
    dim = hamiltonian.shape[0]
    state = _validated_state(state, dim)
    if np.linalg.norm(hamiltonian - hamiltonian.conj().T) > 1e-12 * max(1.0, np.linalg.norm(hamiltonian)):
        raise InvalidArgumentError("hamiltonian must be Hermitian")
    if np.linalg.norm(observable - observable.conj().T) > 1e-10:
        raise InvalidArgumentError("observable must be Hermitian")
    if _operator_norm(observable) > 1.0 + 1e-9:
        raise InvalidArgumentError("observable must have operator norm <= 1")

    energies, basis = np.linalg.eigh(hamiltonian)
    coeff = basis.conj().T @ state
    weights = np.abs(coeff) ** 2
    a_tilde = basis.conj().T @ observable @ basis
    off = a_tilde.copy()
    np.fill_diagonal(off, 0.0)
    fluct = float(weights @ (np.abs(off) ** 2) @ weights)
    a_inf = float(np.real(weights @ np.diag(a_tilde)))
    ipr = float(np.sum(weights**2))
    degenerate = bool(np.min(np.diff(energies)) < _DEGENERACY_TOL) if dim > 1 else False

    t_grid = np.linspace(0.0, t_max, n_points)
    # expval(t) = sum_jk conj(c_j) c_k A_jk e^{i(E_j - E_k) t}, evaluated in the eigenbasis
    ct = coeff[None, :] * np.exp(-1j * np.outer(t_grid, energies))
    expvals = np.real(np.einsum("pj,jk,pk->p", np.conj(ct), a_tilde, ct, optimize=True))
    return DynamicsResult(
        eigenvalues=energies,
        coefficients=coeff,
        inv_deff_state=ipr,
        fluct_exact=fluct,
        a_infinity=a_inf,
        time_grid=t_grid,
        expvals=expvals,
        time_avg=float(expvals.mean()),
        time_std=float(expvals.std()),
        loschmidt_avg=ipr,
        degenerate_gaps=degenerate,
    )


def effdim_of_state(state: np.ndarray, hamiltonian: np.ndarray) -> float:
    """Effective dimension 1 / sum_j |<j|psi>|^4 over the eigenbasis."""
    dim = hamiltonian.shape[0]
    state = _validated_state(state, dim)
    _, basis = np.linalg.eigh(hamiltonian)
    coeff = basis.conj().T @ state
    return float(1.0 / np.sum(np.abs(coeff) ** 4))


def loschmidt_average(state: np.ndarray, hamiltonian: np.ndarray) -> float:
    """Infinite-time average of the echo; equals the inverse effective dimension."""
    return 1.0 / effdim_of_state(state, hamiltonian)


def npoint_fluctuation(
    state: np.ndarray, hamiltonian: np.ndarray, observables: list[np.ndarray]
) -> float:
    """Exact late-time variance of the product observable A_1 A_2 ... A_m.

    Each factor must have operator norm at most 1; the result respects the
    bound prod ||A_i||^2 * sum |c_j|^4.
    """
    if not observables:
        raise InvalidArgumentError("need at least one observable")
    norms = [_operator_norm(a) for a in observables]
    if any(nm > 1.0 + 1e-9 for nm in norms):
        raise InvalidArgumentError("every factor must have operator norm <= 1")
    dim = hamiltonian.shape[0]
    state = _validated_state(state, dim)
    product = functools.reduce(np.matmul, observables)
    energies, basis = np.linalg.eigh(hamiltonian)
    coeff = basis.conj().T @ state
    weights = np.abs(coeff) ** 2
    b_tilde = basis.conj().T @ product @ basis
    off = b_tilde.copy()
    np.fill_diagonal(off, 0.0)
    fluct = float(weights @ (np.abs(off) ** 2) @ weights)
    bound = math.prod(nm**2 for nm in norms) * float(np.sum(weights**2))
    if fluct > bound + 1e-12:
        raise AssertionError("fluctuation exceeds its norm bound; double sum inconsistent")
    return fluct
