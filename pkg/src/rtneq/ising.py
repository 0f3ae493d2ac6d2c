"""Rescaled classical Ising partition functions on tensor network graphs.

Aligned spins contribute 1 per internal edge, anti-aligned spins 1/b; the
boundary-field variant additionally charges 1/a per external leg on a
spin-down vertex.  All values are exact rationals: enumeration bins
configurations by anti-aligned edge counts (one bin axis per distinct bond
dimension), so a single histogram serves every exact evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import InvalidArgumentError, ResourceLimitError, UnsupportedError
from .geometry import Geometry, fuse_vertices, tensor_dimension

ENUMERATION_CAP = 24
_KEY_SPACE_CAP = 1 << 22


@dataclass(frozen=True)
class PartitionValue:
    exact: Fraction
    log_value: float

    @staticmethod
    def from_fraction(z: Fraction) -> "PartitionValue":
        if z <= 0:
            raise InvalidArgumentError("partition value must be positive")
        return PartitionValue(z, math.log(z.numerator) - math.log(z.denominator))


@dataclass(frozen=True)
class BoundPair:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise InvalidArgumentError("lower bound exceeds upper bound")

    def contains(self, value: Fraction) -> bool:
        return self.lower <= value <= self.upper


def _class_setup(values: Sequence[int]) -> tuple[list[int], dict[int, int], list[int]]:
    """Distinct dimensions > 1, per-class multiplicities, and mixed-radix strides."""
    classes = sorted({v for v in values if v > 1})
    counts = {c: sum(1 for v in values if v == c) for c in classes}
    strides = []
    stride = 1
    for c in classes:
        strides.append(stride)
        stride *= counts[c] + 1
    return classes, counts, strides


def _histogram(geometry: Geometry, with_legs: bool, cap: int) -> tuple[np.ndarray, tuple, tuple]:
    n_v = geometry.n_vertices
    if n_v > cap:
        raise ResourceLimitError(
            f"{n_v} vertices exceed the enumeration cap {cap}; use the recursive bounds"
        )
    ecls, ecount, estride = _class_setup([e.b for e in geometry.internal_edges])
    stride_of_b = dict(zip(ecls, estride))
    edges = [e for e in geometry.internal_edges if e.b > 1]
    edge_u = np.array([e.u for e in edges], dtype=np.int64)
    edge_v = np.array([e.v for e in edges], dtype=np.int64)
    edge_stride = np.array([stride_of_b[e.b] for e in edges], dtype=np.int64)
    n_edge_keys = 1
    for c in ecls:
        n_edge_keys *= ecount[c] + 1

    leg_delta = np.zeros(n_v, dtype=np.int64)
    lcls: list[int] = []
    lcount: dict[int, int] = {}
    lstride: list[int] = []
    n_leg_keys = 1
    if with_legs:
        lcls, lcount, lstride = _class_setup([l.a for l in geometry.external_legs])
        stride_of_a = dict(zip(lcls, lstride))
        for leg in geometry.external_legs:
            if leg.a > 1:
                leg_delta[leg.vertex] += stride_of_a[leg.a]
        for c in lcls:
            n_leg_keys *= lcount[c] + 1
    if n_edge_keys * n_leg_keys > _KEY_SPACE_CAP:
        raise ResourceLimitError("too many distinct dimension combinations to bin exactly")
    hist = _kernels.gray_histogram(
        n_v, edge_u, edge_v, edge_stride, leg_delta, n_edge_keys, n_leg_keys
    )
    return hist, (ecls, ecount), (lcls, lcount)


def _assemble(hist: np.ndarray, eclasses: tuple, lclasses: tuple) -> Fraction:
    ecls, ecount = eclasses
    lcls, lcount = lclasses
    total = Fraction(0)
    for ekey, lkey in zip(*np.nonzero(hist)):
        count = int(hist[ekey, lkey])
        weight = Fraction(count)
        rem = int(ekey)
        for c in ecls:
            rem, k = rem // (ecount[c] + 1), rem % (ecount[c] + 1)
            weight /= Fraction(c) ** k
        rem = int(lkey)
        for c in lcls:
            rem, k = rem // (lcount[c] + 1), rem % (lcount[c] + 1)
            weight /= Fraction(c) ** k
        total += weight
    return total


def partition_exact(geometry: Geometry, cap: int = ENUMERATION_CAP) -> PartitionValue:
    """Sum over all spin configurations with factor 1/b per anti-aligned edge."""
    hist, ecl, lcl = _histogram(geometry, with_legs=False, cap=cap)
    return PartitionValue.from_fraction(_assemble(hist, ecl, lcl))


def partition_with_boundary_field(geometry: Geometry, cap: int = ENUMERATION_CAP) -> PartitionValue:
    """Partition sum with the extra 1/a charge per leg on spin-down vertices."""
    hist, ecl, lcl = _histogram(geometry, with_legs=True, cap=cap)
    return PartitionValue.from_fraction(_assemble(hist, ecl, lcl))


# -- exact evaluation by variable elimination ---------------------------------


def partition_exact_elimination(geometry: Geometry, max_scope: int = 20) -> PartitionValue:
    """Exact partition value via min-degree variable elimination.

    Handles graphs beyond the enumeration cap as long as the elimination
    frontier stays small (lattice discs, tiling patches).  Exact rational
    tables throughout.
    """
    n_v = geometry.n_vertices
    factors: dict[int, tuple[tuple[int, ...], list[Fraction]]] = {}
    next_id = 0
    for v in range(n_v):
        factors[next_id] = ((v,), [Fraction(1), Fraction(1)])
        next_id += 1
    for e in geometry.internal_edges:
        w = Fraction(1, e.b)
        lo, hi = min(e.u, e.v), max(e.u, e.v)
        factors[next_id] = ((lo, hi), [Fraction(1), w, w, Fraction(1)])
        next_id += 1

    adj: dict[int, set[int]] = {v: set() for v in range(n_v)}
    for e in geometry.internal_edges:
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    touching: dict[int, set[int]] = {v: set() for v in range(n_v)}
    for fid, (scope, _) in factors.items():
        for v in scope:
            touching[v].add(fid)

    remaining = set(range(n_v))
    scalar = Fraction(1)
    while remaining:
        v = min(remaining, key=lambda u: (len(adj[u] & remaining), u))
        fids = sorted(touching[v])
        scopes = [factors[f][0] for f in fids]
        union = sorted(set().union(*scopes))
        others = [u for u in union if u != v]
        if len(union) > max_scope:
            raise ResourceLimitError("elimination frontier too wide for exact evaluation")
        pos = {u: i for i, u in enumerate(union)}
        vbit = 1 << pos[v]
        width = len(union)
        table = [Fraction(1)] * (1 << width)
        for f in fids:
            scope, vals = factors[f]
            bits = [pos[u] for u in scope]
            for idx in range(1 << width):
                sub = 0
                for i, bpos in enumerate(bits):
                    if idx >> bpos & 1:
                        sub |= 1 << i
                table[idx] *= vals[sub]
        new_vals = []
        opos = [pos[u] for u in others]
        for oidx in range(1 << len(others)):
            base = 0
            for i, bpos in enumerate(opos):
                if oidx >> i & 1:
                    base |= 1 << bpos
            new_vals.append(table[base] + table[base | vbit])
        for f in fids:
            scope, _ = factors.pop(f)
            for u in scope:
                touching[u].discard(f)
        if others:
            factors[next_id] = (tuple(others), new_vals)
            for u in others:
                touching[u].add(next_id)
            next_id += 1
        else:
            scalar *= new_vals[0]
        nbrs = adj[v] & remaining
        for a in nbrs:
            adj[a] |= nbrs - {a}
            adj[a].discard(v)
        remaining.discard(v)

    for _, vals in factors.values():
        scalar *= vals[0]
    return PartitionValue.from_fraction(scalar)


# -- recursive vertex-removal bounds ------------------------------------------


def _uniform_b(geometry: Geometry) -> int | None:
    bs = {e.b for e in geometry.internal_edges}
    if len(bs) > 1:
        raise UnsupportedError("recursive bounds need a constant bond dimension")
    return bs.pop() if bs else None


def elimination_order(geometry: Geometry, kind: str = "natural") -> list[int]:
    if kind == "natural":
        return list(range(geometry.n_vertices))
    if kind == "min-degree":
        remaining = set(range(geometry.n_vertices))
        degree = {v: 0 for v in remaining}
        for e in geometry.internal_edges:
            degree[e.u] += 1
            degree[e.v] += 1
        order = []
        while remaining:
            v = min(remaining, key=lambda u: (degree[u], u))
            order.append(v)
            remaining.discard(v)
            for e in geometry.internal_edges:
                if e.u == v and e.v in remaining:
                    degree[e.v] -= 1
                elif e.v == v and e.u in remaining:
                    degree[e.u] -= 1
        return order
    raise InvalidArgumentError(f"unknown elimination order {kind!r}")


def bound_recursive(geometry: Geometry, order: Sequence[int]) -> BoundPair:
    """Sandwich the partition value by peeling vertices in the given order.

    Each removal of a vertex with m live bonds multiplies the lower bound by
    b^-ceil(m/2) + b^-floor(m/2) and the upper bound by 1 + b^-m; the two
    coincide for m <= 1.
    """
    if sorted(order) != list(range(geometry.n_vertices)):
        raise InvalidArgumentError("order must be a permutation of the vertex ids")
    b = _uniform_b(geometry)
    removed: set[int] = set()
    lower = Fraction(1)
    upper = Fraction(1)
    for k in order:
        m = 0
        for e in geometry.internal_edges:
            if e.u == k and e.v not in removed:
                m += 1
            elif e.v == k and e.u not in removed:
                m += 1
        if m == 0 or b is None:
            lower *= 2
            upper *= 2
        else:
            lower *= Fraction(1, b ** math.ceil(m / 2)) + Fraction(1, b ** (m // 2))
            upper *= 1 + Fraction(1, b**m)
        removed.add(k)
    return BoundPair(lower, upper)


def bound_square(L: int, b: int) -> BoundPair:
    """Row-by-row removal bounds for the L x L square lattice."""
    if L < 2:
        raise InvalidArgumentError("square lattice bounds need L >= 2")
    edge = Fraction(1 + Fraction(1, b)) ** (2 * (L - 1))
    lower = 2 * edge * Fraction(2, b) ** ((L - 1) ** 2)
    upper = 2 * edge * (1 + Fraction(1, b * b)) ** ((L - 1) ** 2)
    return BoundPair(lower, upper)


@dataclass(frozen=True)
class HyperbolicBound:
    value: float
    specific: float
    universal: float


def bound_hyperbolic(p: int, q: int, n: int, b: int) -> HyperbolicBound:
    """Large-patch upper bound on the partition value per boundary-site count n.

    Uses the layer-peeling exponents of the {p,q} tiling and the {4,5}
    worst case; both are asymptotic in n, and the tighter one is reported.
    The exponents are irrational in general, so values are floats.
    """
    if p <= 3 or q <= 3:
        raise InvalidArgumentError("hyperbolic bound needs p,q > 3")
    if 1.0 / p + 1.0 / q >= 0.5:
        raise InvalidArgumentError(f"{{{p},{q}}} is not hyperbolic")
    from .geometry import asymptotic_rate

    r = asymptotic_rate(p, q)
    gamma_exp = (r * (4 - p) + 1) / 2.0
    beta_exp = (r * (p - 2) - 1) / 2.0
    specific = ((1 + 1 / b) ** gamma_exp * (1 + 1 / b**2) ** beta_exp) ** n
    sqrt3 = math.sqrt(3.0)
    universal = ((1 + 1 / b) ** 0.5 * (1 + 1 / b**2) ** ((sqrt3 - 1) / 2.0)) ** n
    return HyperbolicBound(min(specific, universal), specific, universal)


# -- fusion ratio bound ---------------------------------------------------------


@dataclass(frozen=True)
class FusionDeltaBound:
    bound: Fraction
    delta_ratio: Fraction | None
    z: Fraction | None
    z_fused: Fraction | None


def fusion_delta_ratio_bound(
    geometry: Geometry, j: int, k: int, cap: int = ENUMERATION_CAP
) -> FusionDeltaBound:
    """Lower bound (q_j+q_k)/(B^2 + q_j q_k) on (Z - Z')/Z' for fusing j,k.

    B is the product of bond dimensions over all parallel ``(j,k)`` edges.
    When enumeration is feasible, the exact ratio is computed and checked
    against the bound.
    """
    bprod = 1
    found = False
    for e in geometry.internal_edges:
        if {e.u, e.v} == {j, k}:
            bprod *= e.b
            found = True
    if not found:
        raise InvalidArgumentError(f"no edge between {j} and {k}")
    qj = tensor_dimension(geometry, j)
    qk = tensor_dimension(geometry, k)
    bound = Fraction(qj + qk, bprod * bprod + qj * qk)
    if geometry.n_vertices > cap:
        return FusionDeltaBound(bound, None, None, None)
    z = partition_exact(geometry, cap).exact
    fused, _ = fuse_vertices(geometry, j, k)
    z_fused = partition_exact(fused, cap).exact
    ratio = (z - z_fused) / z_fused
    if ratio < bound:
        raise AssertionError(f"fusion ratio {ratio} violates its lower bound {bound}")
    return FusionDeltaBound(bound, ratio, z, z_fused)
