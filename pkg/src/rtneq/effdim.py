"""Inverse effective dimensions of random tensor network states.

The central quantity is the exact rational

    (1/D_eff) = Z / a^n * prod_k q_k / (q_k + 1),

the on-average-normalized fourth-power overlap with a product reference
state; it upper-bounds the value for entangled bulk/reference states.  Closed
forms cover chains and single tensors; general graphs go through the Ising
partition value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArgumentError, ResourceLimitError
from .geometry import (
    Geometry,
    TilingSpec,
    build_black_hole_center,
    build_hyperbolic_patch,
    build_rtt,
    build_single_tensor,
    build_square_patch,
    fuse_vertices,
    tensor_dimension,
)
from . import ising

METHOD_ENUMERATION = "enumeration"
METHOD_ELIMINATION = "elimination"
METHOD_RTT_OPEN = "closed_form_rtt_open"
METHOD_RTT_CLOSED = "closed_form_rtt_closed"
METHOD_SINGLE = "closed_form_single"


def geometry_summary(geometry: Geometry) -> dict:
    a, b, d = geometry.uniform_dims()
    return {
        "n": geometry.n_legs,
        "n_v": geometry.n_vertices,
        "n_int": geometry.n_internal,
        "a": a,
        "b": b,
        "d": d,
    }


@dataclass(frozen=True)
class EffDimReport:
    inv_deff: Fraction
    method: str
    geometry_summary: dict

    def __post_init__(self):
        # On-average normalization admits values above 1 when the boundary is
        # small relative to the bulk (norm fluctuations dominate); the hard
        # guarantees are positivity and the single-tensor floor.
        if self.inv_deff <= 0:
            raise AssertionError("inverse effective dimension must be positive")
        a_n = self.geometry_summary.get("boundary_dim")
        if a_n and self.inv_deff < Fraction(2, a_n + 1):
            raise AssertionError("inverse effective dimension below the single-tensor floor")


def product_term(geometry: Geometry) -> Fraction:
    prod = Fraction(1)
    for v in geometry.vertices:
        q = tensor_dimension(geometry, v.id)
        prod *= Fraction(q, q + 1)
    return prod


def _report(geometry: Geometry, z: Fraction, method: str) -> EffDimReport:
    if geometry.n_legs < 1:
        raise InvalidArgumentError("effective dimension needs at least one external leg")
    summary = geometry_summary(geometry)
    summary["boundary_dim"] = geometry.boundary_dim()
    inv = z * product_term(geometry) / geometry.boundary_dim()
    return EffDimReport(inv, method, summary)


def detect_closed_form(geometry: Geometry) -> tuple[str, tuple] | None:
    """Recognize single-tensor and uniform chain geometries.

    Returns (method, params) with params feeding the matching closed form, or
    None when no closed form applies.
    """
    a, b, d = geometry.uniform_dims()
    if d is None or a is None:
        return None
    if geometry.n_vertices == 1 and geometry.n_internal == 0:
        return METHOD_SINGLE, (geometry.n_legs, a, d)
    if b is None:
        return None
    n_v = geometry.n_vertices
    legs_per_vertex = [0] * n_v
    for leg in geometry.external_legs:
        legs_per_vertex[leg.vertex] += 1
    if any(c != 1 for c in legs_per_vertex):
        return None
    degree = [0] * n_v
    for e in geometry.internal_edges:
        degree[e.u] += 1
        degree[e.v] += 1
    if geometry.n_internal == n_v and all(dg == 2 for dg in degree):
        return METHOD_RTT_CLOSED, (n_v, a, b, d)
    if geometry.n_internal == n_v - 1 and sorted(degree)[:2] == [1, 1] and all(
        dg in (1, 2) for dg in degree
    ):
        return METHOD_RTT_OPEN, (n_v, a, b, d)
    return None


def inverse_effdim_closed_form(geometry: Geometry) -> EffDimReport:
    """Closed-form report for chains and single tensors; errors otherwise."""
    match = detect_closed_form(geometry)
    if match is None:
        raise InvalidArgumentError("no closed form for this geometry shape")
    method, params = match
    if method == METHOD_SINGLE:
        inv = inverse_effdim_single(*params)
    else:
        n, a, b, d = params
        inv = inverse_effdim_rtt(n, a, b, d, closed=method == METHOD_RTT_CLOSED)
    summary = geometry_summary(geometry)
    summary["boundary_dim"] = geometry.boundary_dim()
    return EffDimReport(inv, method, summary)


def inverse_effdim_bound(geometry: Geometry, cap: int = ising.ENUMERATION_CAP) -> EffDimReport:
    """Exact rational 1/D_eff of a geometry (equality for product bulk/reference).

    Falls back to exact variable elimination when the vertex count exceeds the
    enumeration cap but the graph is thin enough.
    """
    try:
        z = ising.partition_exact(geometry, cap).exact
        method = METHOD_ENUMERATION
    except ResourceLimitError:
        z = ising.partition_exact_elimination(geometry).exact
        method = METHOD_ELIMINATION
    return _report(geometry, z, method)


def inverse_effdim_rtt(n: int, a: int, b: int, d: int, closed: bool) -> Fraction:
    """Closed form for open/closed tensor trains."""
    if n < 2:
        raise InvalidArgumentError("tensor train needs n >= 2")
    one = Fraction(1)
    if closed:
        z = (one + Fraction(1, b)) ** n + (one - Fraction(1, b)) ** n
        q_mid = a * d * b * b
        prod = Fraction(q_mid, q_mid + 1) ** n
    else:
        z = 2 * (one + Fraction(1, b)) ** (n - 1)
        q_end = a * d * b
        q_mid = a * d * b * b
        prod = Fraction(q_end, q_end + 1) ** 2 * Fraction(q_mid, q_mid + 1) ** (n - 2)
    return z * prod / Fraction(a) ** n


def inverse_effdim_single(n: int, a: int, d: int) -> Fraction:
    """Single random tensor: 2/(a^n + 1/d), the d=1 case being the universal floor."""
    if n < 1:
        raise InvalidArgumentError("single tensor needs n >= 1")
    return Fraction(2 * d, d * a**n + 1)


def limit_large_b(geometry: Geometry) -> Fraction:
    """Zero-temperature limit 2/a^n; every tensor must touch an internal bond."""
    touched = set()
    for e in geometry.internal_edges:
        touched.add(e.u)
        touched.add(e.v)
    if len(touched) != geometry.n_vertices:
        raise InvalidArgumentError("large-b limit needs every vertex on an internal bond")
    return Fraction(2, geometry.boundary_dim())


def limit_large_d(geometry: Geometry, cap: int = ising.ENUMERATION_CAP) -> Fraction:
    """Large logical dimension limit Z/a^n (the tensor-dimension product drops out)."""
    z = ising.partition_exact(geometry, cap).exact
    return z / geometry.boundary_dim()


def fusion_ratio(geometry: Geometry, j: int, k: int, cap: int = ising.ENUMERATION_CAP) -> Fraction:
    """Exact D_eff/D_eff' for fusing the connected pair (j,k); always <= 1."""
    bprod = 1
    for e in geometry.internal_edges:
        if {e.u, e.v} == {j, k}:
            bprod *= e.b
    z = ising.partition_exact(geometry, cap).exact
    fused, prov = fuse_vertices(geometry, j, k)
    z_fused = ising.partition_exact(fused, cap).exact
    qj = tensor_dimension(geometry, j)
    qk = tensor_dimension(geometry, k)
    q_merged = tensor_dimension(fused, prov[j])
    ratio = (
        z_fused
        * (1 + Fraction(1, qj))
        * (1 + Fraction(1, qk))
        / (z * (1 + Fraction(1, q_merged)))
    )
    if ratio > 1:
        raise AssertionError(f"fusion ratio {ratio} exceeds 1")
    if bprod >= 2 and ratio == 1:
        raise AssertionError("fusion over a nontrivial bond must strictly grow D_eff")
    return ratio


# -- hierarchy experiment -------------------------------------------------------


@dataclass(frozen=True)
class HierarchyRow:
    geometry_name: str
    b: int
    a: int
    n: int
    inv_deff: Fraction
    inv_deff_scaled: Fraction

    def __post_init__(self):
        if self.inv_deff_scaled <= 1:
            raise AssertionError("scaled inverse effective dimension must exceed 1")

    @property
    def scaled_float(self) -> float:
        return float(self.inv_deff_scaled)


def _partition_profile(geometry: Geometry) -> list[int]:
    """Counts of configurations per anti-aligned edge count (uniform-b graphs).

    The profile is bond-dimension independent, so one enumeration serves every
    b in a hierarchy sweep.
    """
    bs = {e.b for e in geometry.internal_edges}
    if len(bs) != 1:
        raise InvalidArgumentError("partition profile needs a uniform bond dimension")
    probe = Geometry(
        geometry.vertices,
        tuple(type(e)(e.u, e.v, 2) for e in geometry.internal_edges),
        geometry.external_legs,
    )
    hist, _, _ = ising._histogram(probe, with_legs=False, cap=ising.ENUMERATION_CAP)
    return [int(c) for c in hist[:, 0]]


def _z_from_profile(profile: list[int], b: int) -> Fraction:
    return sum(Fraction(c, b**k) for k, c in enumerate(profile) if c)


_HIERARCHY_GEOMETRIES = ("rtt_closed", "square_disc", "hyperbolic_54", "black_hole_center", "single_tensor")


def hierarchy_table(
    n: int = 20,
    b_range: tuple[int, int] = (2, 10),
    geometries: tuple[str, ...] = _HIERARCHY_GEOMETRIES,
) -> list[HierarchyRow]:
    """Scaled inverse effective dimensions a^n/D_eff across geometries and b=a.

    All geometries use trivial logical dimension d=1.  The chain and the
    single tensor are built at exactly n boundary legs; the flat row is the
    L x L patch with 4(L-1) = n legs; the hyperbolic rows use the {5,4} patch
    and carry their own leg counts (recorded per row).
    """
    if n % 4 != 0:
        raise InvalidArgumentError("hierarchy needs n divisible by 4 for the flat row")
    b_lo, b_hi = b_range
    if not (2 <= b_lo <= b_hi):
        raise InvalidArgumentError("bond range must satisfy 2 <= lo <= hi")

    rows: list[HierarchyRow] = []
    profiles: dict[str, list[int]] = {}
    for name in geometries:
        if name in ("square_disc", "hyperbolic_54", "black_hole_center"):
            profiles[name] = None  # built lazily below
    for b in range(b_lo, b_hi + 1):
        a = b
        for name in geometries:
            if name == "rtt_closed":
                inv = inverse_effdim_rtt(n, a, b, 1, closed=True)
                legs = n
            elif name == "single_tensor":
                inv = inverse_effdim_single(n, a, 1)
                legs = n
            elif name == "square_disc":
                geo = build_square_patch(n // 4 + 1, a, b, 1)
                z = ising.partition_exact_elimination(geo).exact
                inv = z * product_term(geo) / geo.boundary_dim()
                legs = geo.n_legs
            elif name == "hyperbolic_54":
                geo = build_hyperbolic_patch(TilingSpec(5, 4, 1), a, b, 1)
                if profiles[name] is None:
                    profiles[name] = _partition_profile(geo)
                z = _z_from_profile(profiles[name], b)
                inv = z * product_term(geo) / geo.boundary_dim()
                legs = geo.n_legs
            elif name == "black_hole_center":
                geo = build_black_hole_center(TilingSpec(5, 4, 2), a, b, 1)
                if profiles[name] is None:
                    profiles[name] = _partition_profile(geo)
                z = _z_from_profile(profiles[name], b)
                inv = z * product_term(geo) / geo.boundary_dim()
                legs = geo.n_legs
            else:
                raise InvalidArgumentError(f"unknown hierarchy geometry {name!r}")
            rows.append(HierarchyRow(name, b, a, legs, inv, inv * Fraction(a) ** legs))
    return rows


def rtt_hyperbolic_crossover(tol: float = 1e-6) -> float:
    """Bond dimension above which the universal hyperbolic partition growth
    falls below the tensor-train growth, found by bisection."""
    sqrt3 = math.sqrt(3.0)

    def gap(b: float) -> float:
        lhs = (1 + 1 / b) ** 0.5 * (1 + 1 / b**2) ** ((sqrt3 - 1) / 2)
        rhs = (b + 1) / (b + 1 / (2 * b))
        return rhs - lhs

    lo, hi = 1.0, 3.0
    if not (gap(lo) < 0 < gap(hi)):
        raise AssertionError("crossover bracket lost; inequality shape changed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def coe_two_tensor_constant(a: int, b: int, d: int) -> tuple[Fraction, Fraction]:
    """Fourth-moment overlap constants of the two-tensor network, (CUE, COE)."""
    q = a * b * d
    cue = Fraction(2 * (b * b + b), q * q * (q + 1) ** 2)
    coe = Fraction(3 * b * b + 6 * b, q * q * (q + 2) ** 2)
    return cue, coe
