import json
import math

import numpy as np
import pytest

from rtneq.errors import InvalidArgumentError, UnsupportedError
from rtneq.geometry import (
    Edge,
    Geometry,
    Leg,
    TilingSpec,
    Vertex,
    asymptotic_rate,
    build_black_hole_center,
    build_hyperbolic_patch,
    build_rtt,
    build_single_tensor,
    build_square_disc,
    build_square_patch,
    fuse_vertices,
    hyperbolic_tile_census,
    inflation_counts,
    min_cut,
    substitution_matrix,
    tensor_dimension,
)

from helpers import random_connected_geometry


class TestBuilders:
    def test_rtt_open(self):
        g = build_rtt(3, False, 2, 2, 1)
        assert (g.n_vertices, g.n_internal, g.n_legs) == (3, 2, 3)

    def test_rtt_closed_five(self):
        g = build_rtt(5, True, 2, 2, 1)
        assert (g.n_vertices, g.n_internal) == (5, 5)
        assert all(leg.a == 2 for leg in g.external_legs)

    def test_rtt_two_open(self):
        g = build_rtt(2, False, 2, 2, 1)
        assert g.n_internal == 1
        assert {g.internal_edges[0].u, g.internal_edges[0].v} == {0, 1}

    def test_rtt_closed_two_has_double_edge(self):
        g = build_rtt(2, True, 2, 3, 1)
        assert g.n_internal == 2
        assert all({e.u, e.v} == {0, 1} for e in g.internal_edges)

    def test_rtt_rejects_small(self):
        with pytest.raises(InvalidArgumentError):
            build_rtt(1, False, 2, 2, 1)

    def test_single_tensor(self):
        g = build_single_tensor(5, 2, 1)
        assert (g.n_vertices, g.n_legs, g.n_internal) == (1, 5, 0)
        g = build_single_tensor(20, 2, 2)
        assert g.n_legs == 20 and g.vertices[0].d == 2
        g = build_single_tensor(1, 3, 1)
        assert g.n_legs == 1 and g.external_legs[0].a == 3
        with pytest.raises(InvalidArgumentError):
            build_single_tensor(0, 2, 1)


class TestSquareDisc:
    @pytest.mark.parametrize("radius", [1, 2, 3, 4, 5])
    def test_perimeter_count_oracle(self, radius):
        # oracle: enumerate the L1 ball directly and count its rim
        ball = {(x, y) for x in range(-radius, radius + 1) for y in range(-radius, radius + 1)
                if abs(x) + abs(y) <= radius}
        rim = {p for p in ball if abs(p[0]) + abs(p[1]) == radius}
        g, n_v = build_square_disc(4 * radius, 2, 2, 1)
        assert n_v == len(ball)
        assert g.n_legs == len(rim) == 4 * radius

    def test_radius_one(self):
        g, n_v = build_square_disc(4, 2, 2, 1)
        assert (n_v, g.n_internal, g.n_legs) == (5, 4, 4)

    def test_radius_two(self):
        g, n_v = build_square_disc(8, 2, 2, 1)
        assert (n_v, g.n_legs) == (13, 8)

    def test_hierarchy_instance(self):
        g, n_v = build_square_disc(20, 2, 2, 1)
        assert (n_v, g.n_legs) == (61, 20)

    def test_unreachable_n(self):
        with pytest.raises(InvalidArgumentError, match="nearest"):
            build_square_disc(10, 2, 2, 1)

    def test_square_patch_counts(self):
        g = build_square_patch(6, 2, 2, 1)
        assert (g.n_vertices, g.n_legs, g.n_internal) == (36, 20, 60)
        g2 = build_square_patch(2, 2, 2, 1)
        assert (g2.n_vertices, g2.n_internal, g2.n_legs) == (4, 4, 4)


class TestHyperbolic:
    def test_five_four_one_layer(self):
        g = build_hyperbolic_patch(TilingSpec(5, 4, 1), 2, 2, 1)
        assert g.n_vertices == 4
        assert g.n_internal == 4
        assert g.n_legs == 12  # four pentagons share four edges
        degrees = [len(g.edges_of(k)) for k in range(4)]
        assert degrees == [2, 2, 2, 2]  # tile-adjacency ring

    def test_four_five_one_layer(self):
        g = build_hyperbolic_patch(TilingSpec(4, 5, 1), 2, 2, 1)
        assert g.n_vertices == 5
        assert g.n_internal == 5
        assert g.n_legs == 10

    def test_zero_layers_single_tile(self):
        g = build_hyperbolic_patch(TilingSpec(7, 4, 0), 2, 2, 1)
        assert (g.n_vertices, g.n_legs, g.n_internal) == (1, 7, 0)

    def test_q3_unsupported(self):
        with pytest.raises(UnsupportedError):
            TilingSpec(7, 3, 1)
        with pytest.raises(UnsupportedError):
            TilingSpec(3, 7, 1)

    def test_non_hyperbolic_rejected(self):
        with pytest.raises(InvalidArgumentError):
            TilingSpec(4, 4, 1)

    @pytest.mark.parametrize("p,q", [(5, 4), (4, 5), (6, 4), (4, 6), (7, 4)])
    def test_census_matches_substitution_matrix(self, p, q):
        census = hyperbolic_tile_census(TilingSpec(p, q, 3))
        m = substitution_matrix(p, q)
        for layer in range(1, 3):
            nb, ng = census[layer]
            predicted = (m[0][0] * nb + m[0][1] * ng, m[1][0] * nb + m[1][1] * ng)
            assert census[layer + 1] == predicted

    def test_vertex_convention_exposed(self):
        g = build_hyperbolic_patch(TilingSpec(5, 4, 1), 2, 2, 1, convention="vertex")
        assert g.n_vertices == 13  # seed + 4 spokes + 8 fan vertices

    def test_black_hole_center(self):
        spec = TilingSpec(5, 4, 2)
        patch = build_hyperbolic_patch(spec, 2, 2, 1)
        bh = build_black_hole_center(spec, 2, 2, 1)
        assert bh.n_vertices == patch.n_vertices - 3  # four core tiles fused into one
        assert bh.n_legs == patch.n_legs
        with pytest.raises(InvalidArgumentError):
            build_black_hole_center(TilingSpec(5, 4, 1), 2, 2, 1)


class TestInflation:
    def test_five_four_matrix_and_ratio(self):
        assert substitution_matrix(5, 4) == ((2, 3), (1, 2))
        counts, ratio = inflation_counts(5, 4, 2)
        assert counts[0] == (1, 0)
        # oracle: eigen-decomposition of the substitution matrix
        m = np.array([[2, 3], [1, 2]], dtype=float)
        evals, evecs = np.linalg.eig(m)
        lead = np.argmax(evals)
        assert evals[lead] == pytest.approx(2 + math.sqrt(3))
        expected_ratio = evecs[0, lead] / evecs[1, lead]
        assert ratio == pytest.approx(expected_ratio)
        assert ratio == pytest.approx(math.sqrt(3))

    def test_four_five_matrix(self):
        assert substitution_matrix(4, 5) == ((1, 2), (1, 3))

    def test_layer_zero_seed(self):
        counts, _ = inflation_counts(5, 4, 0)
        assert counts == [(1, 0)]

    def test_q3_unsupported(self):
        with pytest.raises(UnsupportedError):
            inflation_counts(7, 3, 2)


class TestRate:
    @pytest.mark.parametrize(
        "p,q,expected",
        [(5, 4, 1 / math.sqrt(3)), (4, 5, math.sqrt(3) / 2), (7, 3, 1 / math.sqrt(5))],
    )
    def test_values(self, p, q, expected):
        assert asymptotic_rate(p, q) == pytest.approx(expected, rel=1e-12)

    def test_subunit_for_hyperbolic(self):
        for p in range(4, 9):
            for q in range(4, 9):
                if 1 / p + 1 / q < 0.5:
                    assert asymptotic_rate(p, q) < 1

    def test_flat_rejected(self):
        with pytest.raises(InvalidArgumentError):
            asymptotic_rate(4, 4)
        with pytest.raises(InvalidArgumentError):
            asymptotic_rate(3, 7)


class TestFusion:
    def test_two_vertex_chain(self):
        g = build_rtt(2, False, 2, 2, 1)
        fused, prov = fuse_vertices(g, 0, 1)
        assert fused.n_vertices == 1
        assert fused.n_internal == 0
        assert fused.n_legs == 2
        assert fused.vertices[0].d == 1
        assert prov[0] == prov[1] == 0

    def test_closed_five_bookkeeping(self):
        g = build_rtt(5, True, 2, 2, 1)
        fused, _ = fuse_vertices(g, 0, 1)
        assert (fused.n_vertices, fused.n_internal, fused.n_legs) == (4, 4, 5)

    def test_iterated_fusion_reaches_single_tensor(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            g = random_connected_geometry(rng, max_vertices=6)
            total_d = math.prod(v.d for v in g.vertices)
            legs = sorted(leg.a for leg in g.external_legs)
            while g.n_vertices > 1:
                e = g.internal_edges[0]
                g, _ = fuse_vertices(g, e.u, e.v)
            assert g.n_vertices == 1 and g.n_internal == 0
            assert g.vertices[0].d == total_d
            assert sorted(leg.a for leg in g.external_legs) == legs

    def test_fused_dimension_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            g = random_connected_geometry(rng, max_vertices=6, uniform_b=False)
            e = g.internal_edges[int(rng.integers(0, g.n_internal))]
            j, k = e.u, e.v
            bprod = math.prod(x.b for x in g.internal_edges if {x.u, x.v} == {j, k})
            qj, qk = tensor_dimension(g, j), tensor_dimension(g, k)
            fused, prov = fuse_vertices(g, j, k)
            assert tensor_dimension(fused, prov[j]) * bprod**2 == qj * qk

    def test_unconnected_fusion_rejected(self):
        g = build_rtt(3, False, 2, 2, 1)
        with pytest.raises(InvalidArgumentError):
            fuse_vertices(g, 0, 2)


class TestTensorDimension:
    def test_examples(self):
        closed = build_rtt(5, True, 2, 2, 1)
        assert tensor_dimension(closed, 0) == 8
        open_chain = build_rtt(4, False, 2, 2, 1)
        assert tensor_dimension(open_chain, 0) == 4
        assert tensor_dimension(open_chain, 1) == 8
        single = build_single_tensor(5, 2, 3)
        assert tensor_dimension(single, 0) == 96


class TestMinCut:
    def test_rtt_contiguous_region(self):
        g = build_rtt(5, True, 2, 2, 1)
        result = min_cut(g, [1, 2])
        assert result.cut_weight == pytest.approx(2 * math.log(2))
        # complement symmetry
        comp = min_cut(g, [0, 3, 4])
        assert comp.cut_weight == pytest.approx(result.cut_weight)

    def test_single_tensor_cuts_legs(self):
        g = build_single_tensor(5, 2, 1)
        result = min_cut(g, [0, 1])
        assert result.cut_weight == pytest.approx(2 * math.log(2))
        assert all(ce["kind"] == "leg" for ce in result.cut_edges)

    def test_disc_cut_grows_with_region(self):
        g, _ = build_square_disc(20, 7, 7, 1)
        weights = [min_cut(g, list(range(k))).cut_weight for k in range(1, 8)]
        assert all(w2 >= w1 - 1e-9 for w1, w2 in zip(weights, weights[1:]))
        assert weights[4] > weights[0]

    def test_region_validation(self):
        g = build_rtt(3, False, 2, 2, 1)
        with pytest.raises(InvalidArgumentError):
            min_cut(g, [])
        with pytest.raises(InvalidArgumentError):
            min_cut(g, [0, 1, 2])


class TestSerialization:
    def test_round_trip(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            g = random_connected_geometry(rng, uniform_b=False, a_choices=(2, 3))
            assert Geometry.from_json(g.to_json()) == g

    def test_schema_shape(self):
        g = build_rtt(2, False, 2, 3, 4)
        data = json.loads(g.to_json())
        assert data["vertices"][0] == {"id": 0, "d": 4}
        assert data["internal_edges"][0] == {"u": 0, "v": 1, "b": 3}
        assert data["external_legs"][0] == {"vertex": 0, "a": 2}


class TestValidation:
    def test_self_loop(self):
        with pytest.raises(InvalidArgumentError):
            Geometry((Vertex(0, 1),), (Edge(0, 0, 2),), (Leg(0, 2),))

    def test_disconnected(self):
        with pytest.raises(InvalidArgumentError):
            Geometry((Vertex(0, 1), Vertex(1, 1)), (), (Leg(0, 2),))

    def test_unknown_leg_vertex(self):
        with pytest.raises(InvalidArgumentError):
            Geometry((Vertex(0, 1),), (), (Leg(3, 2),))

    def test_bad_dims(self):
        with pytest.raises(InvalidArgumentError):
            Geometry((Vertex(0, 0),), (), (Leg(0, 2),))
        with pytest.raises(InvalidArgumentError):
            Geometry((Vertex(0, 1), Vertex(1, 1)), (Edge(0, 1, 0),), (Leg(0, 2),))


def test_vertex_ids_must_be_dense():
    with pytest.raises(InvalidArgumentError):
        Geometry((Vertex(1, 1),), (), (Leg(1, 2),))


class TestTilingStructure:
    @pytest.mark.parametrize("p,q,layers", [(5, 4, 3), (4, 5, 3), (6, 4, 2), (4, 6, 2)])
    def test_interior_saturation_and_edge_face_counts(self, p, q, layers):
        from rtneq.geometry import _grow_patch

        patch = _grow_patch(TilingSpec(p, q, layers))
        boundary = set(patch.boundary)
        for v in range(patch.n_vertices):
            if v in boundary:
                assert 1 <= patch.face_count[v] < q
            else:
                assert patch.face_count[v] == q
        for fids in patch.edge_faces.values():
            assert len(fids) in (1, 2)
        # single-face edges are exactly the boundary cycle
        single = sum(1 for fids in patch.edge_faces.values() if len(fids) == 1)
        assert single == len(patch.boundary)
        assert patch.euler_characteristic() == 1
        for cycle in patch.faces:
            assert len(cycle) == p
            assert len(set(cycle)) == p

    def test_dual_graph_counts_consistent(self):
        spec = TilingSpec(5, 4, 2)
        from rtneq.geometry import _grow_patch

        patch = _grow_patch(spec)
        geo = build_hyperbolic_patch(spec, 2, 2, 1)
        shared = sum(1 for fids in patch.edge_faces.values() if len(fids) == 2)
        assert geo.n_internal == shared
        assert geo.n_legs == len(patch.boundary)


class TestMinCutConsistency:
    def test_cut_edges_weigh_the_cut_and_disconnect(self):
        rng = np.random.default_rng(99)
        for _ in range(15):
            g = random_connected_geometry(rng, max_vertices=6, a_choices=(2, 3))
            if g.n_legs < 2:
                continue
            k = int(rng.integers(1, g.n_legs))
            region = sorted(rng.choice(g.n_legs, size=k, replace=False).tolist())
            result = min_cut(g, region)
            total = sum(
                math.log(ce["b"]) if ce["kind"] == "internal" else math.log(ce["a"])
                for ce in result.cut_edges
            )
            assert total == pytest.approx(result.cut_weight, abs=1e-9)
            # removing the cut edges separates region legs from the rest
            import networkx as nx

            graph = nx.Graph()
            cut_internal = {(ce["u"], ce["v"]) for ce in result.cut_edges if ce["kind"] == "internal"}
            cut_legs = {ce["leg"] for ce in result.cut_edges if ce["kind"] == "leg"}
            for e in g.internal_edges:
                if (e.u, e.v) not in cut_internal and (e.v, e.u) not in cut_internal:
                    graph.add_edge(f"v{e.u}", f"v{e.v}")
            for i, leg in enumerate(g.external_legs):
                graph.add_node(f"l{i}")
                if i not in cut_legs:
                    graph.add_edge(f"l{i}", f"v{leg.vertex}")
            for i in region:
                for j in range(g.n_legs):
                    if j not in region and graph.has_node(f"l{i}") and graph.has_node(f"l{j}"):
                        assert not nx.has_path(graph, f"l{i}", f"l{j}")
