"""Concrete random tensor network states and Monte-Carlo checks.

Each tensor is the first column of a Haar matrix of its total dimension,
reshaped to (external legs ascending, internal legs by edge id, logical leg
last); internal edges contract against unnormalized pair sums, and logical
legs project onto the bulk state (product |0..0> by default).  The reshape
order is load-bearing: changing it silently permutes the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .geometry import Geometry, tensor_dimension
from . import ensembles

_STATE_DIM_CAP = 1 << 26
_N_CHUNKS = 64


@dataclass(frozen=True)
class RtnSample:
    state: np.ndarray
    geometry: Geometry
    seed: int


@dataclass(frozen=True)
class McStats:
    mean: float
    second_moment: float
    variance_ratio: float
    std_error: float
    samples: int

    def __post_init__(self):
        if self.samples < 2:
            raise InvalidArgumentError("statistics need at least two samples")

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "second_moment": self.second_moment,
            "variance_ratio": self.variance_ratio,
            "std_error": self.std_error,
            "samples": self.samples,
        }


def _haar_columns(ensemble: str, q: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """First columns of Haar matrices.

    For the unitary and orthogonal groups the phase/sign-corrected QR leaves
    the first input column untouched up to normalization, so a normalized
    Gaussian vector is the exact first column; the symmetric-unitary and
    symplectic constructions need their full matrices.
    """
    if ensemble == "cue":
        g = rng.standard_normal((count, q)) + 1j * rng.standard_normal((count, q))
        return g / np.linalg.norm(g, axis=1, keepdims=True)
    if ensemble == "orthogonal":
        g = rng.standard_normal((count, q))
        return (g / np.linalg.norm(g, axis=1, keepdims=True)).astype(np.complex128)
    if ensemble in ("coe", "cse"):
        return ensembles.batch_sampler(ensemble)(q, count, rng)[:, :, 0]
    raise InvalidArgumentError(f"unknown ensemble {ensemble!r}")


def _vertex_axes(geometry: Geometry):
    """Per-vertex (leg ids, edge slots, dims) in the documented reshape order."""
    n = geometry.n_legs
    n_int = geometry.n_internal
    plan = []
    for v in geometry.vertices:
        legs = [i for i, leg in enumerate(geometry.external_legs) if leg.vertex == v.id]
        slots = []
        for e_id, e in enumerate(geometry.internal_edges):
            if e.u == v.id:
                slots.append(e_id)
            if e.v == v.id:
                slots.append(e_id)
        dims = [geometry.external_legs[i].a for i in legs] + [
            geometry.internal_edges[e].b for e in slots
        ] + [v.d]
        labels = [1 + i for i in legs] + [1 + n + e for e in slots] + [1 + n + n_int + v.id]
        plan.append((legs, slots, dims, labels))
    return plan


def batch_rtn_states(
    geometry: Geometry,
    ensemble: str,
    samples: int,
    seed: int,
    bulk_state: np.ndarray | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Stack of sampled boundary state vectors, shape (samples, prod of leg dims)."""
    dim = geometry.boundary_dim()
    if dim > _STATE_DIM_CAP:
        raise ResourceLimitError(f"state dimension {dim} exceeds the dense cap")
    bulk_dim = 1
    for v in geometry.vertices:
        bulk_dim *= v.d
    if bulk_state is not None:
        bulk_state = np.asarray(bulk_state, dtype=np.complex128)
        if bulk_state.shape != (bulk_dim,):
            raise InvalidArgumentError(f"bulk state must have dimension {bulk_dim}")
    plan = _vertex_axes(geometry)
    rngs = ensembles.chunk_rngs(seed, _N_CHUNKS)
    base, extra = divmod(samples, _N_CHUNKS)

    def chunk_states(job) -> np.ndarray | None:
        count, rng = job
        if count == 0:
            return None
        operands = []
        for v, (_, _, dims, labels) in zip(geometry.vertices, plan):
            q = tensor_dimension(geometry, v.id)
            cols = _haar_columns(ensemble, q, count, rng)
            tensor = cols.reshape([count] + dims)
            if bulk_state is None:
                tensor = tensor[..., 0]  # logical leg onto |0>
                operands.extend([tensor, [0] + labels[:-1]])
            else:
                operands.extend([tensor, [0] + labels])
        if bulk_state is not None:
            logical_labels = [
                1 + geometry.n_legs + geometry.n_internal + v.id for v in geometry.vertices
            ]
            operands.extend(
                [np.conj(bulk_state).reshape([v.d for v in geometry.vertices]), logical_labels]
            )
        out_labels = [0] + [1 + i for i in range(geometry.n_legs)]
        states = np.einsum(*operands, out_labels, optimize=True)
        return states.reshape(count, -1)

    from ._parallel import map_ordered

    jobs = [(base + (1 if c < extra else 0), rng) for c, rng in enumerate(rngs)]
    chunks = [s for s in map_ordered(chunk_states, jobs, threads) if s is not None]
    return np.concatenate(chunks, axis=0)


def sample_rtn_state(
    geometry: Geometry,
    ensemble: str = "cue",
    bulk_state: np.ndarray | None = None,
    seed: int = 0,
) -> RtnSample:
    state = batch_rtn_states(geometry, ensemble, 1, seed, bulk_state)[0]
    return RtnSample(state, geometry, seed)


def expected_norm(geometry: Geometry) -> Fraction:
    """Average squared norm of a sampled state: a^n prod(b) / prod(q_k)."""
    value = Fraction(geometry.boundary_dim())
    for e in geometry.internal_edges:
        value *= e.b
    for v in geometry.vertices:
        value /= tensor_dimension(geometry, v.id)
    return value


def mc_norm_stats(
    geometry: Geometry,
    samples: int = 10000,
    seed: int = 0,
    ensemble: str = "cue",
    threads: int = 1,
) -> McStats:
    """Monte-Carlo mean and second moment of <psi|psi>.

    variance_ratio is the variance of the norm normalized by its analytic
    expectation, the quantity whose decay controls on-average normalization.
    """
    states = batch_rtn_states(geometry, ensemble, samples, seed, threads=threads)
    norms = np.einsum("si,si->s", np.conj(states), states).real
    e_norm = float(expected_norm(geometry))
    normalized = norms / e_norm
    return McStats(
        mean=float(norms.mean()),
        second_moment=float((norms**2).mean()),
        variance_ratio=float(normalized.var()),
        std_error=float(norms.std(ddof=1) / math.sqrt(samples)),
        samples=samples,
    )


def mc_overlap4(
    geometry: Geometry,
    reference_state: np.ndarray | None = None,
    samples: int = 10000,
    seed: int = 0,
    ensemble: str = "cue",
    threads: int = 1,
) -> McStats:
    """Monte-Carlo estimate of a^n E|<psi|phi>|^4 / E[<psi|psi>]^2.

    The reference defaults to the product basis state |0..0>; the denominator
    uses the exact analytic norm expectation.  mean/std_error are the scaled
    estimate and its error; second_moment is the raw fourth-power average.
    """
    dim = geometry.boundary_dim()
    if reference_state is None:
        reference_state = np.zeros(dim, dtype=np.complex128)
        reference_state[0] = 1.0
    else:
        reference_state = np.asarray(reference_state, dtype=np.complex128)
        if reference_state.shape != (dim,):
            raise InvalidArgumentError(f"reference state must have dimension {dim}")
        if abs(np.linalg.norm(reference_state) - 1.0) > 1e-9:
            raise InvalidArgumentError("reference state must be normalized")
    states = batch_rtn_states(geometry, ensemble, samples, seed, threads=threads)
    overlaps = states.conj() @ reference_state
    x = np.abs(overlaps) ** 4
    scale = dim / float(expected_norm(geometry)) ** 2
    return McStats(
        mean=float(x.mean() * scale),
        second_moment=float((x**2).mean()),
        variance_ratio=float((x * scale).var()),
        std_error=float(x.std(ddof=1) * scale / math.sqrt(samples)),
        samples=samples,
    )
