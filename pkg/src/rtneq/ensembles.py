"""Dyson circular ensemble sampling and exact low-order moment formulas.

Samplers return genuinely Haar-distributed matrices: unitaries via
phase-corrected QR of complex Gaussians (raw LAPACK QR alone is not Haar),
real orthogonals via sign-corrected QR, symmetric unitaries (COE) as U^T U,
and compact-symplectic unitaries via quaternionic Gram-Schmidt.

Moment conventions: the unconjugated pair/quadruple moment formulas used for
the "coe" panel are those of real orthogonal matrices; for the symmetric
unitary construction itself such moments vanish by global phase invariance,
and its conjugated column moments are biased toward the reference basis
(tested separately).  Symplectic columns are exactly Haar states, so their
panel is checked against the unitary-ensemble prediction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError

_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


@dataclass(frozen=True)
class UnitarySample:
    matrix: np.ndarray
    ensemble: str


@dataclass(frozen=True)
class MomentReport:
    ensemble: str
    dim: int
    samples: int
    labels: tuple[str, ...]
    predicted: np.ndarray
    estimated: np.ndarray
    std_error: np.ndarray
    max_sigma: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "ensemble": self.ensemble,
            "dim": self.dim,
            "samples": self.samples,
            "labels": list(self.labels),
            "predicted_re": [float(x.real) for x in self.predicted],
            "predicted_im": [float(x.imag) for x in self.predicted],
            "estimated_re": [float(x.real) for x in self.estimated],
            "estimated_im": [float(x.imag) for x in self.estimated],
            "std_error": [float(x) for x in self.std_error],
            "max_sigma": self.max_sigma,
            "passed": self.passed,
        }


# -- random number plumbing ----------------------------------------------------


def chunk_rngs(seed: int, n_chunks: int) -> list[np.random.Generator]:
    """Independent streams with fixed chunk boundaries.

    The chunk count is independent of any worker count, so reductions in
    chunk order give results that do not depend on threading.
    """
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(n_chunks)]


def _gaussian_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# -- batched samplers ------------------------------------------------------------


def cue_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise InvalidArgumentError("dimension must be >= 1")
    a = _gaussian_complex(rng, (count, n, n))
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r, axis1=1, axis2=2)
    phase = diag / np.abs(diag)
    return q * phase[:, None, :]


def orthogonal_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise InvalidArgumentError("dimension must be >= 1")
    a = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r, axis1=1, axis2=2)
    sign = np.where(diag < 0, -1.0, 1.0)
    return q * sign[:, None, :]


def coe_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    u = cue_batch(n, count, rng)
    return np.matmul(np.transpose(u, (0, 2, 1)), u)


def cse_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Haar on the compact symplectic group, as 2m x 2m quaternion-real unitaries."""
    if n % 2 != 0 or n < 2:
        raise InvalidArgumentError("symplectic ensemble needs even dimension >= 2")
    m = n // 2
    a = _gaussian_complex(rng, (count, m, m))
    b = _gaussian_complex(rng, (count, m, m))
    x = np.empty((count, n, n), dtype=np.complex128)
    x[:, :m, :m] = a
    x[:, :m, m:] = b
    x[:, m:, :m] = -np.conj(b)
    x[:, m:, m:] = np.conj(a)
    q = np.zeros_like(x)
    for j in range(m):
        v = x[:, :, j].copy()
        for _ in range(2):  # twice-is-enough re-orthogonalization
            for col in range(j):
                for idx in (col, col + m):
                    u = q[:, :, idx]
                    v -= np.einsum("si,si->s", np.conj(u), v)[:, None] * u
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        q[:, :, j] = v
        w = np.conj(v)
        q[:, :, j + m] = np.concatenate([-w[:, m:], w[:, :m]], axis=1)
    return q


def _single(batch_fn, n: int, seed: int, name: str) -> UnitarySample:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return UnitarySample(batch_fn(n, 1, rng)[0], name)


def sample_cue(n: int, seed: int) -> UnitarySample:
    return _single(cue_batch, n, seed, "cue")


def sample_coe(n: int, seed: int) -> UnitarySample:
    return _single(coe_batch, n, seed, "coe")


def sample_cse(n: int, seed: int) -> UnitarySample:
    return _single(cse_batch, n, seed, "cse")


def sample_orthogonal(n: int, seed: int) -> UnitarySample:
    return _single(orthogonal_batch, n, seed, "orthogonal")


_BATCHERS = {
    "cue": cue_batch,
    "coe": coe_batch,
    "cse": cse_batch,
    "orthogonal": orthogonal_batch,
}


def batch_sampler(ensemble: str):
    try:
        return _BATCHERS[ensemble]
    except KeyError:
        raise InvalidArgumentError(f"unknown ensemble {ensemble!r}") from None


# -- structural residuals --------------------------------------------------------


def unitarity_residual(matrix: np.ndarray) -> float:
    n = matrix.shape[-1]
    return float(np.linalg.norm(matrix.conj().T @ matrix - np.eye(n)))


def symmetry_residual(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix - matrix.T))


def quaternion_real_residual(matrix: np.ndarray) -> float:
    """|| J conj(U) J^-1 - U ||, zero for quaternion-real (symplectic) matrices."""
    n = matrix.shape[-1]
    m = n // 2
    j = np.zeros((n, n))
    j[:m, m:] = np.eye(m)
    j[m:, :m] = -np.eye(m)
    return float(np.linalg.norm(j @ np.conj(matrix) @ (-j) - matrix))


def symplectic_residual(matrix: np.ndarray) -> float:
    n = matrix.shape[-1]
    m = n // 2
    j = np.zeros((n, n))
    j[:m, m:] = np.eye(m)
    j[m:, :m] = -np.eye(m)
    return float(np.linalg.norm(matrix.T @ j @ matrix - j))


# -- exact moment formulas --------------------------------------------------------


def moment2_cue(i1: int, j1: int, i2: int, j2: int, n: int) -> float:
    """E[U_{i1 j1} conj(U_{i2 j2})] for Haar unitaries."""
    return (1.0 / n) if (i1 == i2 and j1 == j2) else 0.0


def moment4_cue_contraction(iidx: Sequence[int], jidx: Sequence[int], n: int) -> float:
    """E[U_{i1 j1} U_{i2 j2} conj(U_{i3 j3}) conj(U_{i4 j4})].

    At n=1 every entry is a pure phase and the moment is exactly 1.
    """
    i1, i2, i3, i4 = iidx
    j1, j2, j3, j4 = jidx
    if n == 1:
        return 1.0
    d = float(n)
    t_id_id = (i1 == i3) * (i2 == i4) * (j1 == j3) * (j2 == j4)
    t_id_fl = (i1 == i3) * (i2 == i4) * (j1 == j4) * (j2 == j3)
    t_fl_id = (i1 == i4) * (i2 == i3) * (j1 == j3) * (j2 == j4)
    t_fl_fl = (i1 == i4) * (i2 == i3) * (j1 == j4) * (j2 == j3)
    return (t_id_id + t_fl_fl - (t_id_fl + t_fl_id) / d) / (d * d - 1.0)


def moment2_coe(i1: int, j1: int, i2: int, j2: int, n: int) -> float:
    """E[O_{i1 j1} O_{i2 j2}] in the real orthogonal representation."""
    return (1.0 / n) if (i1 == i2 and j1 == j2) else 0.0


def moment4_coe_contraction(iidx: Sequence[int], jidx: Sequence[int], n: int) -> float:
    """E[O O O O] over pair contractions: weight A on matched row/column
    pairings, B on mismatched ones.  n=1 matrices are just +-1, moment 1."""
    if n == 1:
        return 1.0
    d = float(n)
    a_w = (d + 1.0) / (d * (d + 2.0) * (d - 1.0))
    b_w = -1.0 / (d * (d + 2.0) * (d - 1.0))
    total = 0.0
    for pi in _PAIRINGS:
        di = all(iidx[p] == iidx[q] for p, q in pi)
        if not di:
            continue
        for pj in _PAIRINGS:
            dj = all(jidx[p] == jidx[q] for p, q in pj)
            if dj:
                total += a_w if pi == pj else b_w
    return total


def state_moment2(i1: int, i2: int, n: int) -> float:
    """E[psi_i1 conj(psi_i2)] for Haar states."""
    return (1.0 / n) if i1 == i2 else 0.0


def state_moment4(i1: int, i2: int, i3: int, i4: int, n: int) -> float:
    """E[psi_i1 psi_i2 conj(psi_i3) conj(psi_i4)] for Haar states."""
    return ((i1 == i3) * (i2 == i4) + (i1 == i4) * (i2 == i3)) / (n * (n + 1.0))


def coe_column_moment2(i1: int, i2: int, n: int) -> float:
    """E[c_i1 conj(c_i2)] for the reference column c = U^T U e_0 of a symmetric
    unitary: (delta_{i1 i2} + delta_{i1 0} delta_{i2 0})/(n+1)."""
    return ((i1 == i2) + (i1 == 0) * (i2 == 0)) / (n + 1.0)


# -- Monte-Carlo verification -----------------------------------------------------


def _default_panel(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Fixed fourth-moment index patterns: matched pairings, swaps, and
    patterns with no matching permutation (expected zero)."""
    hi = n - 1
    mid = min(1, hi)
    panel = [
        ((0, 0, 0, 0), (0, 0, 0, 0)),
        ((0, mid, 0, mid), (0, hi, 0, hi)),
        ((0, mid, mid, 0), (0, hi, hi, 0)),
        ((0, mid, 0, mid), (0, 0, 0, 0)),
        ((0, 0, 0, 0), (0, hi, 0, hi)),
        ((0, mid, 0, mid), (hi, hi, hi, hi)),
    ]
    if n >= 4:
        panel.append(((0, 1, 2, 3), (0, 1, 2, 3)))
        panel.append(((0, 1, 1, 0), (2, 3, 3, 2)))
    return panel


def _accumulate(terms: np.ndarray, sums: np.ndarray, sq: np.ndarray) -> None:
    sums += terms.sum(axis=0)
    sq += (terms.real**2 + terms.imag**2).sum(axis=0)


def verify_moments(
    ensemble: str,
    dim: int,
    samples: int,
    seed: int,
    sigma: float = 5.0,
    n_chunks: int = 64,
    threads: int = 1,
) -> MomentReport:
    """Monte-Carlo estimates of second moments and a fourth-moment panel
    against the exact formulas; passes when every entry sits within ``sigma``
    standard errors.

    The unitary and orthogonal panels test matrix entries; the symplectic
    panel tests reference-column states against the Haar-state prediction.
    """
    if ensemble not in _BATCHERS:
        raise InvalidArgumentError(f"unknown ensemble {ensemble!r}")
    if samples < 1000:
        raise InvalidArgumentError("need at least 1e3 samples for stable errors")
    if dim > 8:
        raise InvalidArgumentError("verification panel capped at dimension 8")

    n = dim
    panel = _default_panel(n)
    if ensemble in ("cue", "coe"):
        labels = [f"m2[{i},{j};{k},{l}]" for i in range(n) for j in range(n) for k in range(n) for l in range(n)]
        labels += [f"m4[i={ii},j={jj}]" for ii, jj in panel]
        n2 = n**4
        predicted = np.zeros(n2 + len(panel), dtype=np.complex128)
        if ensemble == "cue":
            pred2 = np.array(
                [moment2_cue(i, j, k, l, n) for i in range(n) for j in range(n) for k in range(n) for l in range(n)]
            )
            pred4 = np.array([moment4_cue_contraction(ii, jj, n) for ii, jj in panel])
        else:
            pred2 = np.array(
                [moment2_coe(i, j, k, l, n) for i in range(n) for j in range(n) for k in range(n) for l in range(n)]
            )
            pred4 = np.array([moment4_coe_contraction(ii, jj, n) for ii, jj in panel])
        predicted[:n2] = pred2
        predicted[n2:] = pred4
    else:  # cse: state moments against the Haar-state prediction
        labels = [f"s2[{i};{k}]" for i in range(n) for k in range(n)]
        labels += [f"s4[{i},{j};{k},{l}]" for i in range(n) for j in range(n) for k in range(n) for l in range(n)]
        pred2 = np.array([state_moment2(i, k, n) for i in range(n) for k in range(n)])
        pred4 = np.array(
            [state_moment4(i, j, k, l, n) for i in range(n) for j in range(n) for k in range(n) for l in range(n)]
        )
        predicted = np.concatenate([pred2, pred4]).astype(np.complex128)

    total = len(predicted)
    sums = np.zeros(total, dtype=np.complex128)
    sq = np.zeros(total, dtype=np.float64)
    # The unconjugated "coe" formulas hold in the real orthogonal
    # representation; the symmetric-unitary construction has vanishing
    # unconjugated moments by phase invariance, so it cannot back this panel.
    batch_fn = orthogonal_batch if ensemble == "coe" else _BATCHERS[ensemble]
    rngs = chunk_rngs(seed, n_chunks)
    base, extra = divmod(samples, n_chunks)

    def chunk_terms(job) -> np.ndarray | None:
        count, rng = job
        if count == 0:
            return None
        mats = batch_fn(n, count, rng)
        if ensemble in ("cue", "coe"):
            conj = np.conj(mats)
            second = np.einsum("sij,skl->sijkl", mats, conj if ensemble == "cue" else mats)
            second = second.reshape(count, -1)
            fourth = np.stack(
                [
                    mats[:, ii[0], jj[0]] * mats[:, ii[1], jj[1]] * conj[:, ii[2], jj[2]] * conj[:, ii[3], jj[3]]
                    if ensemble == "cue"
                    else mats[:, ii[0], jj[0]] * mats[:, ii[1], jj[1]] * mats[:, ii[2], jj[2]] * mats[:, ii[3], jj[3]]
                    for ii, jj in panel
                ],
                axis=1,
            )
            return np.concatenate([second, fourth], axis=1)
        psi = mats[:, :, 0]
        cpsi = np.conj(psi)
        second = np.einsum("si,sk->sik", psi, cpsi).reshape(count, -1)
        fourth = np.einsum("si,sj,sk,sl->sijkl", psi, psi, cpsi, cpsi).reshape(count, -1)
        return np.concatenate([second, fourth], axis=1)

    from ._parallel import map_ordered

    jobs = [(base + (1 if c < extra else 0), rng) for c, rng in enumerate(rngs)]
    for terms in map_ordered(chunk_terms, jobs, threads):
        if terms is not None:
            _accumulate(terms, sums, sq)

    est = sums / samples
    var = np.maximum(sq / samples - (est.real**2 + est.imag**2), 0.0)
    std_error = np.sqrt(var / samples)
    dev = np.abs(est - predicted)
    floor = 1.0 / samples  # guards exact-zero estimators
    sigmas = dev / np.maximum(std_error, floor)
    max_sigma = float(sigmas.max())
    return MomentReport(
        ensemble=ensemble,
        dim=dim,
        samples=samples,
        labels=tuple(labels),
        predicted=predicted,
        estimated=est,
        std_error=std_error,
        max_sigma=max_sigma,
        passed=bool(max_sigma <= sigma),
    )
