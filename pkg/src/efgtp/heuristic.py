"""Greedy route construction via group-nearest-neighbor chaining.

Builds a POI combination in one forward pass: the first POI is the GNN of
the sources within category 1, each interior POI is the NN of its
predecessor, and the last POI is the GNN of the destinations — two GNN
queries and max(k - 2, 0) NN queries total. The result is evaluated with
the same machinery as the exhaustive solver; feasibility against the envy
threshold is reported, never enforced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .exact import EfGtpQuery, EvaluatedRoute, evaluate_route
from .oracle import DistanceOracle
from .rtree import DEFAULT_FANOUT, RTree, bulk_load

INDEX_MODES = (None, "euclidean")


@dataclass(frozen=True)
class HeuristicResult:
    """Constructed route plus the query-count bookkeeping."""

    route: EvaluatedRoute
    gnn_queries: int
    nn_queries: int

    @property
    def combination(self) -> tuple[int, ...]:
        return self.route.combination


def nearest_neighbor(
    point: int, candidates: Sequence[int], oracle: DistanceOracle
) -> int:
    """Candidate closest to point by network distance; ties -> smallest id."""
    cands = sorted(candidates)
    if not cands:
        raise ValueError("empty candidate set")
    row = oracle.row(point)
    best = cands[0]
    best_d = row[best]
    for c in cands[1:]:
        d = row[c]
        if d < best_d:
            best, best_d = c, d
    return best


def group_nearest_neighbor(
    points: Sequence[int], candidates: Sequence[int], oracle: DistanceOracle
) -> int:
    """Candidate minimizing the summed network distance to all points.

    The sum runs in the given point order; ties break to the smallest id.
    With a single point this coincides with nearest_neighbor.
    """
    cands = sorted(candidates)
    if not cands:
        raise ValueError("empty candidate set")
    if not points:
        raise ValueError("empty query point list")
    rows = [oracle.row(p) for p in points]
    best: Optional[int] = None
    best_d = 0.0
    for c in cands:
        d = sum(row[c] for row in rows)
        if best is None or d < best_d:
            best, best_d = c, d
    return best


def _category_tree(oracle: DistanceOracle, cat: Sequence[int], fanout: int) -> RTree:
    coords = oracle.net.coords
    return bulk_load([(v, coords[v, 0], coords[v, 1]) for v in cat], fanout=fanout)


def solve_heuristic(
    query: EfGtpQuery,
    oracle: DistanceOracle,
    index: Optional[str] = None,
    fanout: int = DEFAULT_FANOUT,
) -> HeuristicResult:
    """One-pass greedy route: GNN, chained NNs, GNN.

    index=None picks every POI by network distance; index="euclidean"
    swaps the picks for R-tree searches over vertex coordinates (requires
    coordinates on the network). Either way the returned route is
    evaluated with network distances, so the two modes are comparable.

    k = 1 degenerates to a single joint GNN over sources and destinations
    together (reported as gnn_queries = 1).
    """
    query.validate_against(oracle.net)
    if index not in INDEX_MODES:
        raise ValueError(f"unknown index mode {index!r}; expected one of {INDEX_MODES}")
    cats = query.categories.categories
    k = len(cats)
    sources = query.group.sources
    destinations = query.group.destinations

    if index == "euclidean":
        coords = oracle.net.coords
        if coords is None:
            raise ValueError("indexed mode requires vertex coordinates")

        def pts(vertices):
            return [(coords[v, 0], coords[v, 1]) for v in vertices]

        if k == 1:
            combo = [_category_tree(oracle, cats[0], fanout).gnn(pts(sources + destinations))]
            gnn, nn = 1, 0
        else:
            combo = [_category_tree(oracle, cats[0], fanout).gnn(pts(sources))]
            for i in range(1, k - 1):
                prev = combo[-1]
                combo.append(
                    _category_tree(oracle, cats[i], fanout).nn(coords[prev, 0], coords[prev, 1])
                )
            combo.append(_category_tree(oracle, cats[-1], fanout).gnn(pts(destinations)))
            gnn, nn = 2, k - 2
    else:
        if k == 1:
            combo = [group_nearest_neighbor(sources + destinations, cats[0], oracle)]
            gnn, nn = 1, 0
        else:
            combo = [group_nearest_neighbor(sources, cats[0], oracle)]
            for i in range(1, k - 1):
                combo.append(nearest_neighbor(combo[-1], cats[i], oracle))
            combo.append(group_nearest_neighbor(destinations, cats[-1], oracle))
            gnn, nn = 2, k - 2

    route = evaluate_route(query, tuple(combo), oracle)
    return HeuristicResult(route=route, gnn_queries=gnn, nn_queries=nn)
