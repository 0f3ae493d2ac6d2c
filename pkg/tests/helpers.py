"""Shared test utilities: random geometry generation and brute-force oracles.

The oracles enumerate spin configurations with plain Python loops and exact
rationals, independent of the library's histogram/elimination paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from rtneq.geometry import Edge, Geometry, Leg, Vertex


def random_connected_geometry(
    rng: np.random.Generator,
    max_vertices: int = 8,
    b_choices=(2, 3, 4),
    a_choices=(2,),
    d_choices=(1, 2),
    uniform_b: bool = True,
    extra_edge_factor: float = 1.0,
) -> Geometry:
    n_v = int(rng.integers(2, max_vertices + 1))
    shared_b = int(rng.choice(b_choices))
    edges = []
    for v in range(1, n_v):
        u = int(rng.integers(0, v))
        b = shared_b if uniform_b else int(rng.choice(b_choices))
        edges.append(Edge(u, v, b))
    for _ in range(int(rng.integers(0, max(1, int(n_v * extra_edge_factor)) + 1))):
        u, v = rng.integers(0, n_v, size=2)
        if u != v:
            b = shared_b if uniform_b else int(rng.choice(b_choices))
            edges.append(Edge(min(int(u), int(v)), max(int(u), int(v)), b))
    legs = []
    for v in range(n_v):
        for _ in range(int(rng.integers(0, 3))):
            legs.append(Leg(v, int(rng.choice(a_choices))))
    if not legs:
        legs.append(Leg(0, int(rng.choice(a_choices))))
    vertices = tuple(Vertex(v, int(rng.choice(d_choices))) for v in range(n_v))
    return Geometry(vertices, tuple(edges), tuple(legs))


def brute_partition(geometry: Geometry) -> Fraction:
    total = Fraction(0)
    n_v = geometry.n_vertices
    for spins in itertools.product((1, -1), repeat=n_v):
        weight = Fraction(1)
        for e in geometry.internal_edges:
            if spins[e.u] != spins[e.v]:
                weight /= e.b
        total += weight
    return total


def brute_partition_field(geometry: Geometry) -> Fraction:
    total = Fraction(0)
    n_v = geometry.n_vertices
    for spins in itertools.product((1, -1), repeat=n_v):
        weight = Fraction(1)
        for e in geometry.internal_edges:
            if spins[e.u] != spins[e.v]:
                weight /= e.b
        for leg in geometry.external_legs:
            if spins[leg.vertex] == -1:
                weight /= leg.a
        total += weight
    return total


def brute_inverse_effdim(geometry: Geometry) -> Fraction:
    """Partition value times the tensor-dimension product, over a^n."""
    from rtneq.geometry import tensor_dimension

    value = brute_partition(geometry) / geometry.boundary_dim()
    for v in geometry.vertices:
        q = tensor_dimension(geometry, v.id)
        value *= Fraction(q, q + 1)
    return value
