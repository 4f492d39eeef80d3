"""Exhaustive solver for envy-constrained group trip queries.

A query fixes one POI category order; every member travels
source -> chosen POI chain -> destination. The solver enumerates POI
combinations, minimizes the group's aggregated distance subject to the
pairwise envy bound, and reports the minimum extra slack when no
combination satisfies the bound.

Summation order is pinned everywhere (source leg, chain legs left to
right, destination leg; members in index order) so results are bit-stable
and exact comparisons are meaningful. Because the chain term is shared by
all members, the envy gap of a combination depends only on its first and
last POIs; the default solve exploits that to scan first/last pairs, while
faithful mode evaluates every combination literally.
"""

from __future__ import annotations

import csv
import itertools
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import IO, Iterator, Optional

import numpy as np

from .network import CategoryAssignment, GroupSpec, RoadNetwork
from .oracle import CapacityError, DistanceOracle

logger = logging.getLogger(__name__)

PoiCombination = tuple[int, ...]

PROGRESS_EVERY = 1_000_000


@dataclass(frozen=True)
class EfGtpQuery:
    """Group itinerary query: members, ordered categories, envy threshold."""

    group: GroupSpec
    categories: CategoryAssignment
    envy_threshold: float

    def __post_init__(self):
        d = self.envy_threshold
        if math.isnan(d) or d < 0.0:
            raise ValueError(f"envy threshold must be nonnegative, got {d}")

    @property
    def b(self) -> int:
        return self.group.b

    @property
    def k(self) -> int:
        return self.categories.k

    def validate_against(self, net: RoadNetwork) -> None:
        self.group.validate_against(net)
        self.categories.validate_against(net)

    def with_threshold(self, threshold: float) -> "EfGtpQuery":
        return replace(self, envy_threshold=threshold)


@dataclass(frozen=True)
class EvaluatedRoute:
    """One POI combination with its per-member and group-level metrics."""

    combination: PoiCombination
    per_member: tuple[float, ...]
    aggregated: float
    max_gap: float
    feasible: bool


@dataclass(frozen=True)
class SolveOutcome:
    """Solver result: optimal route when feasible, slack report otherwise.

    min_gap is the smallest achievable envy gap over all combinations
    (always reported); epsilon = min_gap - threshold when infeasible and
    0.0 by convention when feasible. min_gap_witness is the first
    combination in enumeration order attaining min_gap.
    """

    optimal: Optional[EvaluatedRoute]
    feasible_count: int
    min_gap: float
    min_gap_witness: PoiCombination
    epsilon: float

    @property
    def feasible(self) -> bool:
        return self.optimal is not None


def enumerate_combinations(categories: CategoryAssignment) -> Iterator[PoiCombination]:
    """All POI combinations, lexicographic in per-category positions."""
    return itertools.product(*categories.categories)


def validate_combination(categories: CategoryAssignment, rho: PoiCombination) -> None:
    if len(rho) != categories.k:
        raise ValueError(f"expected {categories.k} POIs, got {len(rho)}")
    for i, (v, cat) in enumerate(zip(rho, categories.categories)):
        if v not in cat:
            raise ValueError(f"POI {v} is not in category {i}")


def _member_distances(
    query: EfGtpQuery, rho: PoiCombination, oracle: DistanceOracle
) -> list[float]:
    # Pinned order: source leg, chain legs left to right, destination leg.
    vals = [oracle.dist(s, rho[0]) for s in query.group.sources]
    for j in range(len(rho) - 1):
        leg = oracle.dist(rho[j], rho[j + 1])
        vals = [x + leg for x in vals]
    return [x + oracle.dist(rho[-1], d) for x, d in zip(vals, query.group.destinations)]


def individual_distance(
    query: EfGtpQuery, member_index: int, rho: PoiCombination, oracle: DistanceOracle
) -> float:
    """Trip length of one member through the POI chain."""
    if not (0 <= member_index < query.b):
        raise ValueError(f"member index {member_index} out of range [0, {query.b})")
    s = query.group.sources[member_index]
    d = query.group.destinations[member_index]
    total = oracle.dist(s, rho[0])
    for j in range(len(rho) - 1):
        total = total + oracle.dist(rho[j], rho[j + 1])
    return total + oracle.dist(rho[-1], d)


def aggregated_distance(
    query: EfGtpQuery, rho: PoiCombination, oracle: DistanceOracle
) -> float:
    """Total distance over all members (sum of individual trips, member order)."""
    return sum(_member_distances(query, rho, oracle))


def max_pair_gap(
    query: EfGtpQuery, rho: PoiCombination, oracle: DistanceOracle
) -> float:
    """Largest pairwise difference between members' individual distances."""
    vals = _member_distances(query, rho, oracle)
    best = 0.0
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            gap = abs(vals[i] - vals[j])
            if gap > best:
                best = gap
    return best


def evaluate_route(
    query: EfGtpQuery, rho: PoiCombination, oracle: DistanceOracle
) -> EvaluatedRoute:
    """Evaluate one combination: per-member trips, total, gap, feasibility."""
    validate_combination(query.categories, tuple(rho))
    vals = _member_distances(query, tuple(rho), oracle)
    gap = 0.0
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            g = abs(vals[i] - vals[j])
            if g > gap:
                gap = g
    return EvaluatedRoute(
        combination=tuple(rho),
        per_member=tuple(vals),
        aggregated=sum(vals),
        max_gap=gap,
        feasible=gap <= query.envy_threshold,
    )


# ---------------------------------------------------------------------------
# solver internals
# ---------------------------------------------------------------------------


@dataclass
class _Tables:
    """Precomputed leg lookups shared by all scan strategies."""

    cats: tuple[tuple[int, ...], ...]
    s_np: np.ndarray  # (n1, b): dist(source_i, first-category POI)
    t_np: np.ndarray  # (nk, b): dist(last-category POI, destination_i)
    s_cols: list[list[float]]
    t_cols: list[list[float]]
    chain_rows: dict[int, list[float]]  # full distance rows for chain-leg sources


def _prepare_tables(query: EfGtpQuery, oracle: DistanceOracle) -> _Tables:
    cats = query.categories.categories
    src_rows = np.stack([oracle.row(s) for s in query.group.sources])  # (b, n)
    dst_rows = np.stack([oracle.row(d) for d in query.group.destinations])
    first = np.asarray(cats[0], dtype=np.int64)
    last = np.asarray(cats[-1], dtype=np.int64)
    s_np = src_rows[:, first].T.copy()  # (n1, b)
    t_np = dst_rows[:, last].T.copy()  # (nk, b)
    chain_rows: dict[int, list[float]] = {}
    for cat in cats[:-1]:  # chain legs start in categories 1..k-1
        for v in cat:
            if v not in chain_rows:
                chain_rows[v] = oracle.row(v).tolist()
    return _Tables(
        cats=cats,
        s_np=s_np,
        t_np=t_np,
        s_cols=s_np.tolist(),
        t_cols=t_np.tolist(),
        chain_rows=chain_rows,
    )


def _pair_gaps(tables: _Tables, p1_range: range) -> np.ndarray:
    """Envy gap per (first POI, last POI) pair; the chain term cancels."""
    t_np = tables.t_np
    out = np.empty((len(p1_range), t_np.shape[0]))
    for i, p1 in enumerate(p1_range):
        ends = tables.s_np[p1] + t_np  # (nk, b) end-leg sums per member
        out[i] = ends.max(axis=1) - ends.min(axis=1)
    return out


@dataclass
class _Partial:
    """Reduction state for one slice of the first category."""

    best_agg: Optional[float] = None
    best_pos: Optional[tuple[int, ...]] = None
    best_combo: Optional[PoiCombination] = None
    feasible_count: int = 0
    min_gap: float = math.inf
    min_gap_pos: Optional[tuple[int, ...]] = None
    min_gap_combo: Optional[PoiCombination] = None


def _merge(partials: list[_Partial]) -> _Partial:
    out = _Partial()
    for p in partials:
        out.feasible_count += p.feasible_count
        if p.min_gap_pos is not None and (
            out.min_gap_pos is None
            or (p.min_gap, p.min_gap_pos) < (out.min_gap, out.min_gap_pos)
        ):
            out.min_gap = p.min_gap
            out.min_gap_pos = p.min_gap_pos
            out.min_gap_combo = p.min_gap_combo
        if p.best_pos is not None and (
            out.best_pos is None or (p.best_agg, p.best_pos) < (out.best_agg, out.best_pos)
        ):
            out.best_agg = p.best_agg
            out.best_pos = p.best_pos
            out.best_combo = p.best_combo
    return out


def _scan_faithful(
    query: EfGtpQuery,
    tables: _Tables,
    p1_range: range,
    progress_every: int,
    matrix_writer=None,
) -> _Partial:
    """Literal full enumeration: evaluate every combination one by one."""
    cats = tables.cats
    k = len(cats)
    threshold = query.envy_threshold
    part = _Partial()
    interior = cats[1:-1]
    interior_pos = [range(len(c)) for c in interior]
    chain_rows = tables.chain_rows
    total = len(p1_range) * math.prod(len(c) for c in cats[1:]) if k > 1 else len(p1_range)
    done = 0

    if k == 1:
        for p1 in p1_range:
            v1 = cats[0][p1]
            vals = [s + t for s, t in zip(tables.s_cols[p1], tables.t_cols[p1])]
            done += 1
            _consume(part, (p1,), (v1,), vals, threshold, matrix_writer)
            if progress_every and done % progress_every == 0:
                logger.info("evaluated %d/%d combinations", done, total)
        return part

    last_cat = cats[-1]
    for p1 in p1_range:
        v1 = cats[0][p1]
        s_col = tables.s_cols[p1]
        for mids in itertools.product(*(enumerate(c) for c in interior)):
            # one combination at a time; cost stays linear in the combination count
            for pk, vk in enumerate(last_cat):
                vals = s_col
                prev = v1
                for _, v in mids:
                    vals = [x + chain_rows[prev][v] for x in vals]
                    prev = v
                leg = chain_rows[prev][vk]
                vals = [(x + leg) + t for x, t in zip(vals, tables.t_cols[pk])]
                pos = (p1, *(p for p, _ in mids), pk)
                combo = (v1, *(v for _, v in mids), vk)
                done += 1
                _consume(part, pos, combo, vals, threshold, matrix_writer)
                if progress_every and done % progress_every == 0:
                    logger.info("evaluated %d/%d combinations", done, total)
    return part


def _consume(part, pos, combo, vals, threshold, matrix_writer):
    gap = max(vals) - min(vals)  # equals the pairwise max difference
    agg = sum(vals)
    feasible = gap <= threshold
    if feasible:
        part.feasible_count += 1
        if part.best_agg is None or agg < part.best_agg:
            part.best_agg = agg
            part.best_pos = pos
            part.best_combo = combo
    if gap < part.min_gap:
        part.min_gap = gap
        part.min_gap_pos = pos
        part.min_gap_combo = combo
    if matrix_writer is not None:
        matrix_writer(combo, agg, gap, feasible)


def _scan_fast(query: EfGtpQuery, tables: _Tables, p1_range: range) -> _Partial:
    """Pair-table scan: derive gap, count, and witness from (first, last)
    POI pairs; enumerate only combinations whose pair is feasible."""
    cats = tables.cats
    k = len(cats)
    threshold = query.envy_threshold
    part = _Partial()
    gaps = _pair_gaps(tables, p1_range)

    if k == 1:
        diag = gaps[np.arange(len(p1_range)), np.asarray(p1_range, dtype=np.int64)]
        for i, p1 in enumerate(p1_range):
            gap = float(diag[i])
            if gap < part.min_gap:
                part.min_gap = gap
                part.min_gap_pos = (p1,)
                part.min_gap_combo = (cats[0][p1],)
            if gap <= threshold:
                part.feasible_count += 1
                vals = [s + t for s, t in zip(tables.s_cols[p1], tables.t_cols[p1])]
                agg = sum(vals)
                if part.best_agg is None or agg < part.best_agg:
                    part.best_agg = agg
                    part.best_pos = (p1,)
                    part.best_combo = (cats[0][p1],)
        return part

    interior = cats[1:-1]
    interior_sizes = [len(c) for c in interior]
    interior_prod = math.prod(interior_sizes)
    chain_rows = tables.chain_rows
    last_cat = cats[-1]

    # min gap and its first attaining pair (row-major scan order = lexicographic)
    flat = int(np.argmin(gaps))
    r, pk_min = divmod(flat, gaps.shape[1])
    part.min_gap = float(gaps[r, pk_min])
    p1_min = p1_range[r]
    part.min_gap_pos = (p1_min, *(0,) * len(interior), pk_min)
    part.min_gap_combo = (
        cats[0][p1_min],
        *(c[0] for c in interior),
        last_cat[pk_min],
    )

    feasible_pairs = gaps <= threshold
    part.feasible_count = int(feasible_pairs.sum()) * interior_prod
    if part.feasible_count == 0:
        return part

    for r, p1 in enumerate(p1_range):
        row_mask = feasible_pairs[r]
        if not row_mask.any():
            continue
        v1 = cats[0][p1]
        s_col = tables.s_cols[p1]
        allowed = [pk for pk in range(len(last_cat)) if row_mask[pk]]
        for mids in itertools.product(*(enumerate(c) for c in interior)):
            vals0 = s_col
            prev = v1
            for _, v in mids:
                vals0 = [x + chain_rows[prev][v] for x in vals0]
                prev = v
            row_prev = chain_rows[prev]
            for pk in allowed:
                vk = last_cat[pk]
                leg = row_prev[vk]
                vals = [(x + leg) + t for x, t in zip(vals0, tables.t_cols[pk])]
                agg = sum(vals)
                if part.best_agg is None or agg < part.best_agg:
                    part.best_agg = agg
                    part.best_pos = (p1, *(p for p, _ in mids), pk)
                    part.best_combo = (v1, *(v for _, v in mids), vk)
    return part


def _split_ranges(n: int, workers: int) -> list[range]:
    workers = max(1, min(workers, n))
    bounds = np.linspace(0, n, workers + 1).astype(int)
    return [range(bounds[i], bounds[i + 1]) for i in range(workers) if bounds[i] < bounds[i + 1]]


def default_workers() -> int:
    env = os.environ.get("EFGTP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def solve_exact(
    query: EfGtpQuery,
    oracle: DistanceOracle,
    faithful: bool = False,
    workers: int = 1,
    debug_matrix: Optional[IO[str]] = None,
    progress_every: int = PROGRESS_EVERY,
) -> SolveOutcome:
    """Optimal feasible combination, or the minimum-slack report.

    Feasible: returns the combination minimizing aggregated distance
    (ties: lexicographically smallest per-category position tuple) plus
    the feasible-combination count. Infeasible: reports the minimum
    achievable gap, epsilon = gap - threshold, and the first witness.

    faithful=True evaluates every combination literally; the default
    prefilters by first/last POI pairs and yields identical outcomes.
    debug_matrix receives one CSV row per combination (forces faithful,
    single worker; limited to 1e6 combinations).
    """
    query.validate_against(oracle.net)
    n1 = len(query.categories.categories[0])
    total = query.categories.combination_count()

    writer_fn = None
    if debug_matrix is not None:
        if total > 1_000_000:
            raise CapacityError(
                f"debug matrix limited to 1e6 combinations, instance has {total}"
            )
        faithful = True
        workers = 1
        writer_fn = _matrix_writer(debug_matrix, query, oracle.net)

    tables = _prepare_tables(query, oracle)
    scan = (
        (lambda rng: _scan_faithful(query, tables, rng, progress_every, writer_fn))
        if faithful
        else (lambda rng: _scan_fast(query, tables, rng))
    )

    ranges = _split_ranges(n1, workers)
    if len(ranges) == 1:
        partials = [scan(ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            partials = list(pool.map(scan, ranges))
    part = _merge(partials)

    epsilon = 0.0 if part.feasible_count else part.min_gap - query.envy_threshold
    optimal = (
        evaluate_route(query, part.best_combo, oracle) if part.best_combo else None
    )
    return SolveOutcome(
        optimal=optimal,
        feasible_count=part.feasible_count,
        min_gap=part.min_gap,
        min_gap_witness=part.min_gap_combo,
        epsilon=epsilon,
    )


def gap_distribution(query: EfGtpQuery, oracle: DistanceOracle) -> np.ndarray:
    """Envy gaps of all (first, last) POI pairs (k = 1: one per POI).

    Over full combinations each pair's gap repeats once per interior
    choice, so quantiles of this array equal quantiles of the gap over
    the whole combination space.
    """
    query.validate_against(oracle.net)
    tables = _prepare_tables(query, oracle)
    g = _pair_gaps(tables, range(len(query.categories.categories[0])))
    if query.k == 1:
        return np.diagonal(g).copy()
    return g.ravel()


def min_additional_distance(
    query: EfGtpQuery, oracle: DistanceOracle
) -> tuple[float, float, PoiCombination]:
    """Minimum achievable gap d, epsilon = d - threshold, and a witness.

    Only meaningful when the query has no feasible combination; calling it
    on a feasible instance raises. Re-solving with threshold + epsilon is
    guaranteed feasible, and every newly feasible combination attains d.
    """
    query.validate_against(oracle.net)
    tables = _prepare_tables(query, oracle)
    part = _scan_fast(query, tables, range(len(query.categories.categories[0])))
    if part.feasible_count:
        raise ValueError(
            "query already has feasible combinations; no additional distance needed"
        )
    return part.min_gap, part.min_gap - query.envy_threshold, part.min_gap_combo


# ---------------------------------------------------------------------------
# external formats
# ---------------------------------------------------------------------------


def _matrix_writer(stream: IO[str], query: EfGtpQuery, net: RoadNetwork):
    k = query.k
    w = csv.writer(stream, lineterminator="\n")
    w.writerow([f"v{i + 1}" for i in range(k)] + ["aggregated", "max_gap", "feasible"])

    def emit(combo, agg, gap, feasible):
        w.writerow(
            [net.external_ids[v] for v in combo] + [repr(agg), repr(gap), int(feasible)]
        )

    return emit


def load_query(text: str, net: RoadNetwork) -> EfGtpQuery:
    """Parse the JSON query format (external vertex ids)."""
    doc = json.loads(text)
    for key in ("sources", "destinations", "categories", "D"):
        if key not in doc:
            raise ValueError(f"query file missing {key!r}")

    def to_internal(values):
        return tuple(net.internal_id(str(v)) for v in values)

    group = GroupSpec(
        sources=to_internal(doc["sources"]),
        destinations=to_internal(doc["destinations"]),
    )
    categories = CategoryAssignment(
        tuple(to_internal(cat) for cat in doc["categories"])
    )
    query = EfGtpQuery(
        group=group, categories=categories, envy_threshold=float(doc["D"])
    )
    query.validate_against(net)
    return query


def dump_query(query: EfGtpQuery, net: RoadNetwork) -> str:
    ext = net.external_ids
    doc = {
        "sources": [ext[v] for v in query.group.sources],
        "destinations": [ext[v] for v in query.group.destinations],
        "categories": [[ext[v] for v in cat] for cat in query.categories.categories],
        "D": query.envy_threshold,
    }
    return json.dumps(doc, indent=2) + "\n"
