"""Tensor network graph geometries: builders, fusion, tilings, and minimal cuts.

A geometry is an undirected connected multigraph of tensors.  Every vertex
carries a logical (bulk) dimension, every internal edge a bond dimension, and
every external leg a physical dimension.  Geometries are immutable; all
transformations return new objects.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import networkx as nx

from .errors import InvalidArgumentError, UnsupportedError


@dataclass(frozen=True)
class Vertex:
    id: int
    d: int


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    b: int


@dataclass(frozen=True)
class Leg:
    vertex: int
    a: int


@dataclass(frozen=True)
class Geometry:
    """Annotated tensor network graph.

    External legs are stored in boundary-cyclic order where the builder has a
    natural boundary (chains, discs, tiling patches), so that contiguous leg
    ranges correspond to contiguous boundary regions.
    """

    vertices: tuple[Vertex, ...]
    internal_edges: tuple[Edge, ...]
    external_legs: tuple[Leg, ...]

    def __post_init__(self):
        ids = [v.id for v in self.vertices]
        if ids != list(range(len(ids))):
            raise InvalidArgumentError("vertex ids must be dense integers 0..n_v-1")
        if any(v.d < 1 for v in self.vertices):
            raise InvalidArgumentError("logical dimensions must be >= 1")
        idset = set(ids)
        for e in self.internal_edges:
            if e.u == e.v:
                raise InvalidArgumentError(f"self-loop edge on vertex {e.u}")
            if e.u not in idset or e.v not in idset:
                raise InvalidArgumentError(f"edge ({e.u},{e.v}) references unknown vertex")
            if e.b < 1:
                raise InvalidArgumentError("bond dimensions must be >= 1")
        for leg in self.external_legs:
            if leg.vertex not in idset:
                raise InvalidArgumentError(f"leg references unknown vertex {leg.vertex}")
            if leg.a < 1:
                raise InvalidArgumentError("physical dimensions must be >= 1")
        if not self._connected():
            raise InvalidArgumentError("geometry must be connected")

    def _connected(self) -> bool:
        n = len(self.vertices)
        if n <= 1:
            return True
        adj: dict[int, list[int]] = {v.id: [] for v in self.vertices}
        for e in self.internal_edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == n

    # -- simple queries ----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_internal(self) -> int:
        return len(self.internal_edges)

    @property
    def n_legs(self) -> int:
        return len(self.external_legs)

    def legs_of(self, k: int) -> list[int]:
        return [i for i, leg in enumerate(self.external_legs) if leg.vertex == k]

    def edges_of(self, k: int) -> list[int]:
        return [i for i, e in enumerate(self.internal_edges) if k in (e.u, e.v)]

    def boundary_dim(self) -> int:
        """Total physical Hilbert space dimension (product of leg dims)."""
        dim = 1
        for leg in self.external_legs:
            dim *= leg.a
        return dim

    def uniform_dims(self) -> tuple[int | None, int | None, int | None]:
        """Common (a, b, d) values, or None per slot when heterogeneous/absent."""
        def common(values):
            vals = set(values)
            return vals.pop() if len(vals) == 1 else None

        a = common(leg.a for leg in self.external_legs) if self.external_legs else None
        b = common(e.b for e in self.internal_edges) if self.internal_edges else None
        d = common(v.d for v in self.vertices)
        return a, b, d

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v.id, "d": v.d} for v in self.vertices],
            "internal_edges": [{"u": e.u, "v": e.v, "b": e.b} for e in self.internal_edges],
            "external_legs": [{"vertex": leg.vertex, "a": leg.a} for leg in self.external_legs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(data: dict) -> "Geometry":
        try:
            vertices = tuple(Vertex(int(v["id"]), int(v["d"])) for v in data["vertices"])
            edges = tuple(Edge(int(e["u"]), int(e["v"]), int(e["b"])) for e in data["internal_edges"])
            legs = tuple(Leg(int(l["vertex"]), int(l["a"])) for l in data["external_legs"])
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"malformed geometry JSON: {exc}") from exc
        return Geometry(vertices, edges, legs)

    @staticmethod
    def from_json(text: str) -> "Geometry":
        return Geometry.from_dict(json.loads(text))


def tensor_dimension(geometry: Geometry, k: int) -> int:
    """Total dimension of the k-th tensor: physical legs x bond legs x logical."""
    if k < 0 or k >= geometry.n_vertices:
        raise InvalidArgumentError(f"vertex {k} does not exist")
    q = geometry.vertices[k].d
    for leg in geometry.external_legs:
        if leg.vertex == k:
            q *= leg.a
    for e in geometry.internal_edges:
        if e.u == k:
            q *= e.b
        if e.v == k:
            q *= e.b
    return q


# -- builders ----------------------------------------------------------------


def build_rtt(n: int, closed: bool, a: int, b: int, d: int) -> Geometry:
    """Chain of n tensors, one physical and one logical leg each.

    Open chains have n-1 bonds; closed chains n (n=2 closed yields a double
    edge between the two tensors).
    """
    if n < 2:
        raise InvalidArgumentError(f"tensor train needs n >= 2, got {n}")
    vertices = tuple(Vertex(i, d) for i in range(n))
    edges = [Edge(i, i + 1, b) for i in range(n - 1)]
    if closed:
        edges.append(Edge(n - 1, 0, b))
    legs = tuple(Leg(i, a) for i in range(n))
    return Geometry(vertices, tuple(edges), legs)


def build_single_tensor(n: int, a: int, d: int) -> Geometry:
    """One tensor with n physical legs and a logical leg of dimension d."""
    if n < 1:
        raise InvalidArgumentError(f"single tensor needs n >= 1 legs, got {n}")
    return Geometry((Vertex(0, d),), (), tuple(Leg(0, a) for _ in range(n)))


def build_square_disc(n: int, a: int, b: int, d: int) -> tuple[Geometry, int]:
    """Diamond (L1-ball) cut of the square lattice with exactly n boundary legs.

    A radius-R diamond has 4R perimeter vertices, one leg each, so n must be a
    positive multiple of 4.  Returns the geometry and its vertex count.
    """
    if n < 4 or n % 4 != 0:
        nearest = max(4, 4 * round(n / 4))
        raise InvalidArgumentError(
            f"diamond discs realize n in 4,8,12,...; {n} unreachable, nearest is {nearest}"
        )
    radius = n // 4
    coords = [
        (x, y)
        for x in range(-radius, radius + 1)
        for y in range(-radius, radius + 1)
        if abs(x) + abs(y) <= radius
    ]
    index = {pos: i for i, pos in enumerate(sorted(coords))}
    edges = []
    for (x, y), i in index.items():
        for nb in ((x + 1, y), (x, y + 1)):
            j = index.get(nb)
            if j is not None:
                edges.append(Edge(i, j, b))
    perimeter = (
        [(radius - t, t) for t in range(radius + 1)]
        + [(-t, radius - t) for t in range(1, radius + 1)]
        + [(-radius + t, -t) for t in range(1, radius + 1)]
        + [(t, -radius + t) for t in range(1, radius)]
    )
    legs = tuple(Leg(index[pos], a) for pos in perimeter)
    vertices = tuple(Vertex(i, d) for i in range(len(coords)))
    geometry = Geometry(vertices, tuple(edges), legs)
    return geometry, len(coords)


def build_square_patch(L: int, a: int, b: int, d: int) -> Geometry:
    """L x L patch of the square lattice, one leg per perimeter vertex.

    Carries n = 4(L-1) boundary legs in perimeter order; the flat-geometry row
    of the hierarchy experiment uses this cut (the deeper diamond cut of
    :func:`build_square_disc` packs ~n^2/8 tensors behind n legs and overtakes
    the tensor-train row at small bond dimension).
    """
    if L < 2:
        raise InvalidArgumentError("square patch needs L >= 2")
    coords = sorted((x, y) for x in range(L) for y in range(L))
    index = {c: i for i, c in enumerate(coords)}
    edges = []
    for (x, y), i in index.items():
        for nb in ((x + 1, y), (x, y + 1)):
            j = index.get(nb)
            if j is not None:
                edges.append(Edge(i, j, b))
    perimeter = (
        [(t, 0) for t in range(L)]
        + [(L - 1, t) for t in range(1, L)]
        + [(L - 1 - t, L - 1) for t in range(1, L)]
        + [(0, L - 1 - t) for t in range(1, L - 1)]
    )
    legs = tuple(Leg(index[pos], a) for pos in perimeter)
    vertices = tuple(Vertex(i, d) for i in range(L * L))
    return Geometry(vertices, tuple(edges), legs)


# -- hyperbolic tilings -------------------------------------------------------


@dataclass(frozen=True)
class TilingSpec:
    p: int
    q: int
    layers: int

    def __post_init__(self):
        if self.p < 4 or self.q < 4:
            raise UnsupportedError(f"{{{self.p},{self.q}}} tilings unsupported; need p,q > 3")
        if Fraction(1, self.p) + Fraction(1, self.q) >= Fraction(1, 2):
            raise InvalidArgumentError(f"{{{self.p},{self.q}}} is not hyperbolic")
        if self.layers < 0:
            raise InvalidArgumentError("layers must be >= 0")


class _TilingPatch:
    """Combinatorial patch of a {p,q} tiling grown by whole vertex layers.

    Faces are vertex cycles; the outer boundary is maintained as a vertex
    cycle.  Growing one layer attaches, around every boundary vertex, all
    still-missing faces, so every previous boundary vertex becomes interior.
    Faces sharing an edge with the previous layer are classified ``beta``,
    faces sharing only a vertex ``gamma``.
    """

    def __init__(self, p: int, q: int):
        self.p = p
        self.q = q
        self.n_vertices = 0
        self.faces: list[list[int]] = []
        self.face_layer: list[int] = []
        self.face_type: list[str] = []
        self.face_count: list[int] = []
        self.edge_faces: dict[tuple[int, int], list[int]] = {}
        self.boundary: list[int] = []

    def _new_vertex(self) -> int:
        self.face_count.append(0)
        self.n_vertices += 1
        return self.n_vertices - 1

    def _add_face(self, cycle: list[int], layer: int, ftype: str) -> int:
        fid = len(self.faces)
        self.faces.append(list(cycle))
        self.face_layer.append(layer)
        self.face_type.append(ftype)
        for i, u in enumerate(cycle):
            v = cycle[(i + 1) % len(cycle)]
            key = (u, v) if u < v else (v, u)
            self.edge_faces.setdefault(key, []).append(fid)
            if len(self.edge_faces[key]) > 2:
                raise AssertionError(f"edge {key} attached to >2 faces")
            self.face_count[u] += 1
        return fid

    @classmethod
    def from_seed_tile(cls, p: int, q: int) -> "_TilingPatch":
        patch = cls(p, q)
        cycle = [patch._new_vertex() for _ in range(p)]
        patch._add_face(cycle, 0, "seed")
        patch.boundary = list(cycle)
        return patch

    @classmethod
    def from_seed_vertex(cls, p: int, q: int) -> "_TilingPatch":
        """Layer 1: the q faces around a central vertex."""
        patch = cls(p, q)
        seed = patch._new_vertex()
        spokes = [patch._new_vertex() for _ in range(q)]
        boundary = []
        for i in range(q):
            mids = [patch._new_vertex() for _ in range(p - 3)]
            cycle = [seed, spokes[i]] + mids + [spokes[(i + 1) % q]]
            patch._add_face(cycle, 1, "gamma")
            boundary.extend([spokes[i]] + mids)
        patch.boundary = boundary
        return patch

    def add_layer(self, layer: int) -> None:
        """Attach all faces still missing around the current boundary vertices."""
        p, q = self.p, self.q
        bnd = self.boundary
        m = len(bnd)
        start_count = {v: self.face_count[v] for v in bnd}
        gammas = {v: q - start_count[v] - 2 for v in bnd}
        if any(g < 0 for g in gammas.values()):
            raise AssertionError("boundary vertex already saturated; q>3 growth violated")

        # The face on boundary edge (u_j, u_{j+1}) is shared between the fans
        # of u_j and u_{j+1}.  Build the first edge face up front, then sweep
        # fans and edge faces around the cycle, closing u_0's fan last.
        first_outer = [self._new_vertex() for _ in range(p - 2)]
        self._add_face([bnd[0], bnd[1]] + first_outer, layer, "beta")
        lead_spoke_u0 = first_outer[-1]   # adjacent to u_0, reused when closing its fan
        trailing = first_outer[0]         # adjacent to u_1, seeds u_1's fan

        for j in range(1, m):
            u = bnd[j]
            for _ in range(gammas[u]):
                fresh = [self._new_vertex() for _ in range(p - 2)]
                self._add_face([u, trailing] + fresh, layer, "gamma")
                trailing = fresh[-1]
            nxt = bnd[(j + 1) % m]
            if j < m - 1:
                outer = [self._new_vertex() for _ in range(p - 3)]
                self._add_face([u, nxt] + outer + [trailing], layer, "beta")
                trailing = outer[0]
            elif gammas[bnd[0]] == 0:
                # Last edge face (u_{m-1}, u_0) with no gamma faces left at
                # u_0: it shares its u_0-side spoke with the first edge face.
                outer = [self._new_vertex() for _ in range(p - 4)]
                self._add_face([u, bnd[0], lead_spoke_u0] + outer + [trailing], layer, "beta")
            else:
                outer = [self._new_vertex() for _ in range(p - 3)]
                self._add_face([u, bnd[0]] + outer + [trailing], layer, "beta")
                trailing = outer[0]

        u0 = bnd[0]
        for t in range(gammas[u0]):
            if t < gammas[u0] - 1:
                fresh = [self._new_vertex() for _ in range(p - 2)]
                self._add_face([u0, trailing] + fresh, layer, "gamma")
                trailing = fresh[-1]
            else:
                fresh = [self._new_vertex() for _ in range(p - 3)]
                self._add_face([u0, trailing] + fresh + [lead_spoke_u0], layer, "gamma")

        self._rebuild_boundary()

    def _rebuild_boundary(self) -> None:
        adj: dict[int, list[int]] = {}
        for (u, v), fids in self.edge_faces.items():
            if len(fids) == 1:
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
        if any(len(nbs) != 2 for nbs in adj.values()):
            raise AssertionError("boundary is not a simple cycle")
        start = min(adj)
        cycle = [start]
        prev, cur = None, start
        while True:
            a, b = adj[cur]
            nxt = a if a != prev else b
            if nxt == start:
                break
            cycle.append(nxt)
            prev, cur = cur, nxt
        self.boundary = cycle

    # -- structural checks used by the test suite ---------------------------

    def interior_vertices(self) -> list[int]:
        return [v for v in range(self.n_vertices) if self.face_count[v] == self.q]

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edge_faces) + len(self.faces)

    def layer_type_counts(self) -> list[tuple[int, int]]:
        layers = max(self.face_layer) if self.faces else 0
        counts = []
        for layer in range(layers + 1):
            beta = sum(
                1 for f, l in enumerate(self.face_layer) if l == layer and self.face_type[f] == "beta"
            )
            gamma = sum(
                1 for f, l in enumerate(self.face_layer) if l == layer and self.face_type[f] == "gamma"
            )
            counts.append((beta, gamma))
        return counts


def _grow_patch(spec: TilingSpec) -> _TilingPatch:
    if spec.layers == 0:
        return _TilingPatch.from_seed_tile(spec.p, spec.q)
    patch = _TilingPatch.from_seed_vertex(spec.p, spec.q)
    for layer in range(2, spec.layers + 1):
        patch.add_layer(layer)
    return patch


def build_hyperbolic_patch(
    spec: TilingSpec, a: int, b: int, d: int, convention: str = "tile"
) -> Geometry:
    """Patch of a {p,q} tiling as a tensor network.

    The default ``tile`` convention places one tensor per tile, an internal
    edge per shared tile edge, and one external leg per unshared tile edge,
    legs ordered cyclically along the patch boundary.  The alternative
    ``vertex`` convention (one tensor per tiling vertex) is exposed for
    experimentation but not exercised by the bundled experiments.
    """
    patch = _grow_patch(spec)
    if convention == "tile":
        vertices = tuple(Vertex(i, d) for i in range(len(patch.faces)))
        edges = []
        for fids in patch.edge_faces.values():
            if len(fids) == 2:
                edges.append(Edge(min(fids), max(fids), b))
        edges.sort(key=lambda e: (e.u, e.v))
        legs = []
        bnd = patch.boundary
        for i, u in enumerate(bnd):
            v = bnd[(i + 1) % len(bnd)]
            key = (u, v) if u < v else (v, u)
            fids = patch.edge_faces[key]
            if len(fids) != 1:
                raise AssertionError("boundary edge must have exactly one face")
            legs.append(Leg(fids[0], a))
        return Geometry(vertices, tuple(edges), tuple(legs))
    if convention == "vertex":
        vertices = tuple(Vertex(i, d) for i in range(patch.n_vertices))
        edges = tuple(Edge(u, v, b) for (u, v) in sorted(patch.edge_faces))
        legs = tuple(Leg(v, a) for v in patch.boundary)
        return Geometry(vertices, edges, legs)
    raise InvalidArgumentError(f"unknown dual convention {convention!r}")


def hyperbolic_tile_census(spec: TilingSpec) -> list[tuple[int, int]]:
    """Per-layer (edge-sharing, vertex-sharing) tile counts of the built patch."""
    return _grow_patch(spec).layer_type_counts()


def build_black_hole_center(
    spec: TilingSpec, a: int, b: int, d: int, core_layers: int = 1
) -> Geometry:
    """Hyperbolic patch whose innermost ``core_layers`` tile layers are fused
    into a single high-dimensional tensor."""
    if spec.layers <= core_layers:
        raise InvalidArgumentError("patch must have more layers than the fused core")
    geometry = build_hyperbolic_patch(spec, a, b, d)
    patch = _grow_patch(spec)
    core = [f for f, layer in enumerate(patch.face_layer) if layer <= core_layers]
    ids = {k: k for k in range(geometry.n_vertices)}
    for k in core[1:]:
        geometry, prov = fuse_vertices(geometry, ids[core[0]], ids[k])
        ids = {orig: prov[cur] for orig, cur in ids.items()}
    return geometry


def inflation_counts(
    p: int, q: int, layers: int, seed: tuple[int, int] = (1, 0)
) -> tuple[list[tuple[int, int]], float]:
    """Layer-by-layer substitution counts (n_beta, n_gamma) and their asymptotic ratio.

    The substitution matrix maps the type counts of one tile layer to the
    next; the returned ratio n_beta/n_gamma is taken from its dominant
    eigenvector.
    """
    if q <= 3 or p <= 3:
        raise UnsupportedError("substitution counts need p,q > 3 (q=3 adds alpha vertices)")
    m11, m12 = p - 3, p - 2
    m21, m22 = (p - 3) * (q - 3) - 1, (p - 2) * (q - 3) - 1
    counts = [tuple(seed)]
    nb, ng = seed
    for _ in range(layers):
        nb, ng = m11 * nb + m12 * ng, m21 * nb + m22 * ng
        counts.append((nb, ng))
    trace = m11 + m22
    disc = trace * trace - 4 * (m11 * m22 - m12 * m21)
    lam = (trace + math.sqrt(disc)) / 2.0
    ratio = m12 / (lam - m11)
    return counts, ratio


def substitution_matrix(p: int, q: int) -> tuple[tuple[int, int], tuple[int, int]]:
    if q <= 3 or p <= 3:
        raise UnsupportedError("substitution matrix needs p,q > 3")
    return ((p - 3, p - 2), ((p - 3) * (q - 3) - 1, (p - 2) * (q - 3) - 1))


def asymptotic_rate(p: int, q: int) -> float:
    """Bulk-to-boundary rate of a {p,q} tiling in the many-layer limit."""
    if p <= 3:
        raise InvalidArgumentError("rate formula holds for p > 3")
    if Fraction(1, p) + Fraction(1, q) >= Fraction(1, 2):
        raise InvalidArgumentError(f"{{{p},{q}}} is not hyperbolic")
    return 1.0 / math.sqrt((p - 2) * (p - 2 * q / (q - 2)))


# -- fusion -------------------------------------------------------------------


def fuse_vertices(geometry: Geometry, j: int, k: int) -> tuple[Geometry, dict[int, int]]:
    """Merge two edge-connected tensors into one.

    The merged tensor keeps all edges and legs of both except the connecting
    bond(s), and its logical dimension is the product d_j * d_k.  Vertex ids
    are re-indexed densely; the returned map sends old ids to new ids (j and k
    both map to the merged id).
    """
    n = geometry.n_vertices
    if j == k or not (0 <= j < n) or not (0 <= k < n):
        raise InvalidArgumentError(f"invalid vertex pair ({j},{k})")
    if not any({e.u, e.v} == {j, k} for e in geometry.internal_edges):
        raise InvalidArgumentError(f"vertices {j} and {k} share no edge; fusion needs one")
    keep = [v.id for v in geometry.vertices if v.id != k]
    newid = {old: i for i, old in enumerate(keep)}
    newid[k] = newid[j]
    d_merged = geometry.vertices[j].d * geometry.vertices[k].d
    vertices = tuple(
        Vertex(newid[v.id], d_merged if v.id == j else v.d)
        for v in geometry.vertices
        if v.id != k
    )
    edges = tuple(
        Edge(newid[e.u], newid[e.v], e.b)
        for e in geometry.internal_edges
        if {e.u, e.v} != {j, k}
    )
    legs = tuple(Leg(newid[leg.vertex], leg.a) for leg in geometry.external_legs)
    return Geometry(vertices, edges, legs), newid


# -- minimal cuts -------------------------------------------------------------


@dataclass(frozen=True)
class MinCutResult:
    cut_weight: float
    cut_edges: tuple[dict, ...]


def min_cut(geometry: Geometry, region: Iterable[int]) -> MinCutResult:
    """Minimal total log-dimension separating a set of boundary legs from the rest.

    Internal edges weigh log(b), legs weigh log(a); parallel edges accumulate.
    Solved as max-flow on the leg-augmented graph.
    """
    region = sorted(set(region))
    n_legs = geometry.n_legs
    if not region or len(region) >= n_legs:
        raise InvalidArgumentError("region must be a proper nonempty subset of legs")
    if region[0] < 0 or region[-1] >= n_legs:
        raise InvalidArgumentError("region references unknown legs")

    graph = nx.Graph()
    for e in geometry.internal_edges:
        u, v = f"v{e.u}", f"v{e.v}"
        w = math.log(e.b)
        if graph.has_edge(u, v):
            graph[u][v]["capacity"] += w
        else:
            graph.add_edge(u, v, capacity=w)
    for i, leg in enumerate(geometry.external_legs):
        graph.add_edge(f"l{i}", f"v{leg.vertex}", capacity=math.log(leg.a))
    inregion = set(region)
    for i in range(n_legs):
        if i in inregion:
            graph.add_edge("S", f"l{i}", capacity=float("inf"))
        else:
            graph.add_edge(f"l{i}", "T", capacity=float("inf"))
    cut_value, (side_s, _) = nx.minimum_cut(graph, "S", "T")
    cut_edges = []
    for e in geometry.internal_edges:
        if (f"v{e.u}" in side_s) != (f"v{e.v}" in side_s):
            cut_edges.append({"kind": "internal", "u": e.u, "v": e.v, "b": e.b})
    for i, leg in enumerate(geometry.external_legs):
        if (f"l{i}" in side_s) != (f"v{leg.vertex}" in side_s):
            cut_edges.append({"kind": "leg", "leg": i, "a": leg.a})
    return MinCutResult(float(cut_value), tuple(cut_edges))
