import math

import numpy as np
import pytest

from bmcc.grid import GridConfig
from bmcc.graph import (
    GraphConfigError,
    build_ball_tree,
    build_graph_indexed,
    build_graph_naive,
    connected_components,
    dataset_distance,
    min_sqdist_matrix,
    read_adjacency,
    write_adjacency,
)
from bmcc.marketplace import Marketplace, PricingFunction

from conftest import (
    brute_force_min_distance,
    make_dataset,
    make_market,
    random_market,
    union_find_components,
)


class TestDatasetDistance:
    def test_identical_sets_distance_zero(self):
        g = GridConfig(theta=3)
        a = make_dataset("a", [(1, 1), (2, 2)], g)
        b = make_dataset("b", [(1, 1), (2, 2)], g)
        assert dataset_distance(a, b) == 0.0

    def test_three_four_five(self):
        g = GridConfig(theta=3)
        a = make_dataset("a", [(0, 0)], g)
        b = make_dataset("b", [(3, 4)], g)
        assert dataset_distance(a, b) == 5.0

    def test_adjacent_cells_distance_one(self, example2_market):
        m = example2_market
        assert dataset_distance(m.dataset("d1"), m.dataset("d2")) == 1.0

    def test_mismatched_grids_rejected(self):
        a = make_dataset("a", [(0, 0)], GridConfig(theta=3))
        b = make_dataset("b", [(0, 0)], GridConfig(theta=4))
        with pytest.raises(GraphConfigError):
            dataset_distance(a, b)

    def test_symmetry_and_zero_iff_intersect(self):
        rng = np.random.default_rng(10)
        g = GridConfig(theta=5)
        for _ in range(50):
            pairs_a = sorted({(int(x), int(y)) for x, y in rng.integers(0, 12, size=(6, 2))})
            pairs_b = sorted({(int(x), int(y)) for x, y in rng.integers(0, 12, size=(6, 2))})
            a = make_dataset("a", pairs_a, g)
            b = make_dataset("b", pairs_b, g)
            dab = dataset_distance(a, b)
            assert dab == dataset_distance(b, a)
            intersects = bool(set(a.cells.tolist()) & set(b.cells.tolist()))
            assert (dab == 0.0) == intersects

    def test_matches_python_loop_oracle(self):
        rng = np.random.default_rng(11)
        g = GridConfig(theta=6)
        for _ in range(25):
            pairs_a = sorted({(int(x), int(y)) for x, y in rng.integers(0, 40, size=(8, 2))})
            pairs_b = sorted({(int(x), int(y)) for x, y in rng.integers(0, 40, size=(8, 2))})
            a = make_dataset("a", pairs_a, g)
            b = make_dataset("b", pairs_b, g)
            assert dataset_distance(a, b) == pytest.approx(
                brute_force_min_distance(a, b, 6), abs=1e-12)


class TestNaiveGraph:
    def test_identical_datasets_always_connect(self):
        m = make_market({"a": [(1, 1)], "b": [(1, 1)]}, theta=3)
        g = build_graph_naive(m, 0)
        assert g.adjacency == {"a": ("b",), "b": ("a",)}

    def test_threshold_exceeded_no_edge(self):
        m = make_market({"a": [(0, 0)], "b": [(3, 4)]}, theta=3)
        g = build_graph_naive(m, 2)
        assert g.n_edges == 0

    def test_example2_edge_structure(self, example2_market):
        g = build_graph_naive(example2_market, 2)
        assert g.adjacency == {
            "d1": ("d2",),
            "d2": ("d1", "d4"),
            "d3": ("d5",),
            "d4": ("d2",),
            "d5": ("d3",),
        }
        comp_members = [c.members for c in connected_components(g)]
        assert ("d1", "d2", "d4") in comp_members

    def test_matrix_against_pairwise_calls(self):
        rng = np.random.default_rng(12)
        m = random_market(rng, n_max=8)
        matrix = min_sqdist_matrix(m)
        for i, di in enumerate(m.ids):
            for j, dj in enumerate(m.ids):
                expected = dataset_distance(m.dataset(di), m.dataset(dj))
                assert math.sqrt(matrix[i, j]) == pytest.approx(expected, abs=1e-12)


class TestBallTree:
    def test_single_dataset_single_leaf(self):
        m = make_market({"a": [(0, 0), (2, 2)]}, theta=3)
        tree = build_ball_tree(m)
        assert tree.n_nodes == 1
        assert tree.is_leaf(0)
        assert tree.radii[0] == pytest.approx(math.hypot(1, 1))

    def test_one_cell_dataset_zero_radius(self):
        m = make_market({"a": [(5, 5)]}, theta=3)
        tree = build_ball_tree(m)
        assert tree.radii[0] == 0.0

    def test_leaves_partition_catalog(self):
        rng = np.random.default_rng(13)
        m = random_market(rng, n_max=12)
        tree = build_ball_tree(m)
        leaves = [n for n in range(tree.n_nodes) if tree.is_leaf(n)]
        seen = []
        for n in leaves:
            under = tree.datasets_under(n)
            assert len(under) == 1
            seen.extend(under)
        assert sorted(seen) == sorted(m.ids)

    def test_every_cell_inside_ancestor_balls(self):
        rng = np.random.default_rng(14)
        side = 64
        grid = GridConfig(theta=6)
        datasets = []
        for i in range(64):
            cx, cy = int(rng.integers(0, side)), int(rng.integers(0, side))
            pairs = sorted({(int(np.clip(cx + dx, 0, side - 1)),
                             int(np.clip(cy + dy, 0, side - 1)))
                            for dx, dy in rng.integers(-2, 3, size=(5, 2))})
            datasets.append(make_dataset(f"d{i:02d}", pairs, grid))
        m = Marketplace.build(grid, datasets, PricingFunction.usage_based())
        tree = build_ball_tree(m)
        index = {did: k for k, did in enumerate(m.ids)}
        for node in range(tree.n_nodes):
            centroid = tree.centroids[node]
            radius = tree.radii[node]
            for did in tree.datasets_under(node):
                coords = m.cell_coords(did)
                dist = np.sqrt(((coords - centroid) ** 2).sum(axis=1)).max()
                assert dist <= radius + 1e-9
        assert index  # catalog non-trivial


class TestIndexedGraph:
    def test_all_far_market_zero_edges(self):
        m = make_market({"a": [(0, 0)], "b": [(30, 0)], "c": [(0, 30)]}, theta=6)
        gn = build_graph_naive(m, 2)
        gi = build_graph_indexed(m, 2)
        assert gn.n_edges == 0
        assert gn.adjacency == gi.adjacency

    def test_identical_datasets_complete_graph(self):
        m = make_market({f"d{i}": [(3, 3), (4, 4)] for i in range(5)}, theta=4)
        gi = build_graph_indexed(m, 0)
        assert gi.n_edges == 5 * 4 // 2
        assert gi.adjacency == build_graph_naive(m, 0).adjacency

    @pytest.mark.parametrize("delta", [0, 5, 10])
    def test_random_markets_match_naive(self, delta):
        rng = np.random.default_rng(200 + delta)
        grid = GridConfig(theta=7)
        datasets = []
        for i in range(200):
            cx, cy = int(rng.integers(0, 100)), int(rng.integers(0, 100))
            pairs = sorted({(int(np.clip(cx + dx, 0, 127)), int(np.clip(cy + dy, 0, 127)))
                            for dx, dy in rng.integers(-3, 4, size=(6, 2))})
            datasets.append(make_dataset(f"d{i:03d}", pairs, grid))
        m = Marketplace.build(grid, datasets, PricingFunction.usage_based())
        tree = build_ball_tree(m)
        gn = build_graph_naive(m, delta)
        gi = build_graph_indexed(m, delta, tree)
        assert gn.adjacency == gi.adjacency

    def test_distance_exactly_delta_is_an_edge_in_both_paths(self):
        # 3-4-5 singletons: the pair distance equals the threshold exactly
        m = make_market({"a": [(0, 0)], "b": [(3, 4)], "c": [(20, 20)]}, theta=6)
        for delta in (5, 5.0):
            gn = build_graph_naive(m, delta)
            gi = build_graph_indexed(m, delta)
            assert gn.adjacency["a"] == ("b",)
            assert gn.adjacency == gi.adjacency
        # just below the boundary there is no edge
        assert build_graph_indexed(m, 4.999).n_edges == 0

    def test_tree_market_mismatch_rejected(self):
        rng = np.random.default_rng(15)
        m1 = random_market(rng, n_max=5)
        m2 = random_market(rng, n_max=5)
        tree = build_ball_tree(m1)
        with pytest.raises(GraphConfigError):
            build_graph_indexed(m2, 1.0, tree)


class TestComponents:
    def test_edgeless_graph_three_singletons(self):
        m = make_market({"a": [(0, 0)], "b": [(10, 0)], "c": [(0, 10)]}, theta=5)
        comps = connected_components(build_graph_naive(m, 1))
        assert [c.members for c in comps] == [("a",), ("b",), ("c",)]

    def test_path_is_one_component(self):
        m = make_market({"a": [(0, 0)], "b": [(1, 0)], "c": [(2, 0)]}, theta=3)
        comps = connected_components(build_graph_naive(m, 1))
        assert [c.members for c in comps] == [("a", "b", "c")]

    def test_component_count_matches_union_find(self):
        rng = np.random.default_rng(16)
        for _ in range(25):
            m = random_market(rng)
            delta = float(rng.choice([0, 1, 2, 3, 5]))
            g = build_graph_naive(m, delta)
            edges = [(u, v) for u, nbrs in g.adjacency.items() for v in nbrs if u < v]
            expected = union_find_components(g.nodes, edges)
            assert len(connected_components(g)) == expected

    def test_components_ordered_by_smallest_member(self):
        m = make_market({"z": [(0, 0)], "a": [(20, 20)], "b": [(21, 20)]}, theta=6)
        comps = connected_components(build_graph_naive(m, 1))
        assert [c.members[0] for c in comps] == ["a", "z"]


class TestThresholdMonotonicity:
    def test_edges_grow_with_delta(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            m = random_market(rng)
            deltas = [0, 1, 2, 4, 8]
            graphs = [build_graph_naive(m, d) for d in deltas]
            for g1, g2 in zip(graphs, graphs[1:]):
                e1 = {(u, v) for u, nbrs in g1.adjacency.items() for v in nbrs}
                e2 = {(u, v) for u, nbrs in g2.adjacency.items() for v in nbrs}
                assert e1 <= e2
            degrees = [g.stats().average_degree for g in graphs]
            assert all(a <= b for a, b in zip(degrees, degrees[1:]))
            comps = [g.stats().components for g in graphs]
            assert all(a >= b for a, b in zip(comps, comps[1:]))


class TestStatsAndExport:
    def test_stats_fields(self, example2_market):
        stats = build_graph_naive(example2_market, 2).stats()
        assert stats.nodes == 5
        assert stats.edges == 3
        assert stats.average_degree == pytest.approx(6 / 5)
        assert stats.components == 2

    def test_adjacency_round_trip(self, tmp_path, example2_market):
        g = build_graph_naive(example2_market, 2)
        path = tmp_path / "graph.txt"
        write_adjacency(g, path)
        back = read_adjacency(path)
        assert back.adjacency == g.adjacency
        assert back.prices == g.prices
        assert back.delta == g.delta

    def test_asymmetric_file_rejected(self, tmp_path):
        path = tmp_path / "graph.txt"
        path.write_text("CBGRAPH 1\ndelta 1.0\nnodes 2\na 1.00 1 b\nb 1.00 0\n")
        with pytest.raises(GraphConfigError):
            read_adjacency(path)
