"""Greedy GNN/NN construction: hand cases, linear-scan oracles, dominance."""

import numpy as np
import pytest

from efgtp import (
    CategoryAssignment,
    EfGtpQuery,
    GroupSpec,
    build_oracle,
    evaluate_route,
    group_nearest_neighbor,
    nearest_neighbor,
    parse_edge_list,
    solve_exact,
    solve_heuristic,
)

from support import (
    brute_force_solve,
    floyd_warshall,
    linear_network_gnn,
    linear_network_nn,
    random_network,
    random_query,
)


def unit_path(n=5):
    return parse_edge_list("\n".join(f"{i} {i + 1} 1" for i in range(n - 1)))


def query(net_unused, sources, destinations, cats, D):
    return EfGtpQuery(
        group=GroupSpec(sources=tuple(sources), destinations=tuple(destinations)),
        categories=CategoryAssignment(tuple(tuple(c) for c in cats)),
        envy_threshold=D,
    )


@pytest.fixture(scope="module")
def path_oracle():
    return build_oracle(unit_path())


class TestNearestNeighbor:
    def test_point_in_candidates(self, path_oracle):
        assert nearest_neighbor(2, [0, 2, 4], path_oracle) == 2

    def test_path_hand_case(self, path_oracle):
        assert nearest_neighbor(0, [2, 4], path_oracle) == 2

    def test_empty_candidates(self, path_oracle):
        with pytest.raises(ValueError, match="empty candidate"):
            nearest_neighbor(0, [], path_oracle)

    def test_matches_linear_scan(self):
        rng = np.random.default_rng(300)
        checks = 0
        while checks < 1000:
            net = random_network(rng, int(rng.integers(5, 30)))
            oracle = build_oracle(net)
            ref = floyd_warshall(net)
            for _ in range(25):
                point = int(rng.integers(0, net.vertex_count))
                size = int(rng.integers(1, net.vertex_count + 1))
                cands = [int(v) for v in rng.choice(net.vertex_count, size, replace=False)]
                assert nearest_neighbor(point, cands, oracle) == linear_network_nn(
                    point, cands, ref
                )
                checks += 1


class TestGroupNearestNeighbor:
    def test_single_point_identity(self, path_oracle):
        assert group_nearest_neighbor([3], [0, 3, 4], path_oracle) == 3

    def test_path_tie_prefers_smallest_id(self, path_oracle):
        # candidates 1, 2, 3 all sum to 4 for query points {0, 4}
        assert group_nearest_neighbor([0, 4], [1, 2, 3], path_oracle) == 1
        assert group_nearest_neighbor([0, 4], [3, 2], path_oracle) == 2

    def test_empty_inputs(self, path_oracle):
        with pytest.raises(ValueError, match="empty candidate"):
            group_nearest_neighbor([0], [], path_oracle)
        with pytest.raises(ValueError, match="query point"):
            group_nearest_neighbor([], [1], path_oracle)

    def test_matches_linear_scan(self):
        rng = np.random.default_rng(301)
        checks = 0
        while checks < 1000:
            net = random_network(rng, int(rng.integers(5, 30)))
            oracle = build_oracle(net)
            ref = floyd_warshall(net)
            for _ in range(25):
                m = int(rng.integers(1, 6))
                points = [int(v) for v in rng.integers(0, net.vertex_count, size=m)]
                size = int(rng.integers(1, net.vertex_count + 1))
                cands = [int(v) for v in rng.choice(net.vertex_count, size, replace=False)]
                assert group_nearest_neighbor(points, cands, oracle) == (
                    linear_network_gnn(points, cands, ref)
                )
                checks += 1

    def test_single_point_equals_nearest_neighbor(self):
        rng = np.random.default_rng(302)
        net = random_network(rng, 25)
        oracle = build_oracle(net)
        for _ in range(50):
            p = int(rng.integers(0, 25))
            cands = [int(v) for v in rng.choice(25, int(rng.integers(1, 26)), replace=False)]
            assert group_nearest_neighbor([p], cands, oracle) == nearest_neighbor(
                p, cands, oracle
            )


class TestSolveHeuristic:
    def test_query_counts_by_k(self):
        rng = np.random.default_rng(303)
        net = random_network(rng, 40)
        oracle = build_oracle(net)
        for k, expected_gnn, expected_nn in [(1, 1, 0), (2, 2, 0), (3, 2, 1), (4, 2, 2)]:
            q = random_query(rng, net, k=k, per_cat=3, b=2, threshold=100.0)
            res = solve_heuristic(q, oracle)
            assert (res.gnn_queries, res.nn_queries) == (expected_gnn, expected_nn)

    def test_route_is_valid_combination(self):
        rng = np.random.default_rng(304)
        for _ in range(30):
            net = random_network(rng, 30)
            oracle = build_oracle(net)
            k = int(rng.integers(1, 5))
            q = random_query(rng, net, k=k, per_cat=3, b=2, threshold=10.0)
            res = solve_heuristic(q, oracle)
            assert len(res.combination) == k
            for v, cat in zip(res.combination, q.categories.categories):
                assert v in cat

    def test_chain_construction_follows_definition(self):
        rng = np.random.default_rng(305)
        for _ in range(20):
            net = random_network(rng, 35)
            oracle = build_oracle(net)
            q = random_query(rng, net, k=3, per_cat=4, b=3, threshold=10.0)
            cats = q.categories.categories
            v1 = group_nearest_neighbor(q.group.sources, cats[0], oracle)
            v2 = nearest_neighbor(v1, cats[1], oracle)
            v3 = group_nearest_neighbor(q.group.destinations, cats[2], oracle)
            assert solve_heuristic(q, oracle).combination == (v1, v2, v3)

    def test_k1_joint_endpoint_aggregation(self):
        rng = np.random.default_rng(306)
        for _ in range(20):
            net = random_network(rng, 25)
            oracle = build_oracle(net)
            ref = floyd_warshall(net)
            q = random_query(rng, net, k=1, per_cat=5, b=3, threshold=10.0)
            res = solve_heuristic(q, oracle)
            expected = linear_network_gnn(
                list(q.group.sources) + list(q.group.destinations),
                q.categories.categories[0],
                ref,
            )
            assert res.combination == (expected,)
            assert res.gnn_queries == 1 and res.nn_queries == 0

    def test_singleton_categories_match_exact(self):
        rng = np.random.default_rng(307)
        for _ in range(20):
            net = random_network(rng, 25)
            oracle = build_oracle(net)
            q = random_query(rng, net, k=3, per_cat=1, b=2, threshold=30.0)
            heur = solve_heuristic(q, oracle)
            exact = solve_exact(q, oracle)
            assert heur.route.combination == exact.min_gap_witness
            if exact.feasible:
                assert heur.route == exact.optimal

    def test_never_beats_exact_optimum(self):
        rng = np.random.default_rng(308)
        compared = 0
        for _ in range(100):
            net = random_network(rng, 30)
            oracle = build_oracle(net)
            k = int(rng.integers(1, 4))
            q = random_query(rng, net, k=k, per_cat=3, b=2,
                             threshold=float(rng.integers(5, 40)))
            heur = solve_heuristic(q, oracle)
            exact = solve_exact(q, oracle)
            if exact.feasible and heur.route.feasible:
                compared += 1
                assert heur.route.aggregated >= exact.optimal.aggregated
        assert compared >= 30

    def test_route_evaluation_matches_reference(self):
        rng = np.random.default_rng(309)
        net = random_network(rng, 25)
        oracle = build_oracle(net)
        ref = floyd_warshall(net)
        q = random_query(rng, net, k=2, per_cat=4, b=3, threshold=12.0)
        res = solve_heuristic(q, oracle)
        again = evaluate_route(q, res.combination, oracle)
        assert res.route == again
        # feasibility flag agrees with the brute-force evaluation of that combo
        brute = brute_force_solve(
            q.__class__(
                group=q.group,
                categories=CategoryAssignment(tuple((v,) for v in res.combination)),
                envy_threshold=q.envy_threshold,
            ),
            ref,
        )
        assert (brute.feasible_count == 1) == res.route.feasible

    def test_unknown_index_mode(self, path_oracle):
        q = query(None, [0], [4], [(2,)], 1.0)
        with pytest.raises(ValueError, match="unknown index mode"):
            solve_heuristic(q, path_oracle, index="fancy")

    def test_indexed_mode_requires_coords(self, path_oracle):
        q = query(None, [0], [4], [(2,)], 1.0)
        with pytest.raises(ValueError, match="coordinates"):
            solve_heuristic(q, path_oracle, index="euclidean")


class TestIndexedMode:
    def test_line_embedding_matches_network_mode(self):
        # vertices on a line with weights equal to coordinate gaps: network
        # distance == Euclidean distance, so both modes pick identical POIs
        rng = np.random.default_rng(310)
        for _ in range(10):
            n = 30
            gaps = rng.integers(1, 5, size=n - 1)
            xs = np.concatenate([[0.0], np.cumsum(gaps)]).astype(float)
            text = "\n".join(f"{i} {i + 1} {int(g)}" for i, g in enumerate(gaps))
            net = parse_edge_list(text).with_coords(
                np.column_stack([xs, np.zeros(n)])
            )
            oracle = build_oracle(net)
            q = random_query(rng, net, k=3, per_cat=4, b=2, threshold=20.0)
            plain = solve_heuristic(q, oracle)
            indexed = solve_heuristic(q, oracle, index="euclidean")
            assert indexed.combination == plain.combination
            assert (indexed.gnn_queries, indexed.nn_queries) == (2, 1)

    def test_indexed_route_still_uses_network_distances(self):
        rng = np.random.default_rng(311)
        net = random_network(rng, 30).with_coords(rng.random((30, 2)) * 10)
        oracle = build_oracle(net)
        q = random_query(rng, net, k=2, per_cat=4, b=2, threshold=15.0)
        res = solve_heuristic(q, oracle, index="euclidean")
        assert res.route == evaluate_route(q, res.combination, oracle)
