"""Road-network datasets: parsing, validation, and category labeling.

Networks are undirected weighted graphs with dense 0-based vertex ids.
Internal ids are assigned in first-appearance order over the edge
sequence, which keeps parse -> serialize -> parse an exact round trip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

Edge = tuple[int, int, float]


@dataclass(eq=False)
class RoadNetwork:
    """Undirected graph of POIs with positive edge lengths.

    edges hold (u, v, w) with u < v, no self-loops, no parallel edges.
    external_ids[i] is the original dataset token for internal id i.
    coords, when present, is an (n, 2) float64 array of planar positions.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    external_ids: tuple[str, ...]
    coords: Optional[np.ndarray] = None
    _ext_index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex_count must be nonnegative")
        if len(self.external_ids) != n:
            raise ValueError("external_ids must have one entry per vertex")
        seen_pairs: set[tuple[int, int]] = set()
        for u, v, w in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) endpoint out of range [0, {n})")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if u > v:
                raise ValueError(f"edge ({u}, {v}) not normalized to u < v")
            if (u, v) in seen_pairs:
                raise ValueError(f"parallel edge ({u}, {v})")
            seen_pairs.add((u, v))
            if not (w > 0.0) or not math.isfinite(w):
                raise ValueError(f"edge ({u}, {v}) has nonpositive weight {w}")
        if self.coords is not None:
            coords = np.asarray(self.coords, dtype=np.float64)
            if coords.shape != (n, 2):
                raise ValueError(f"coords must have shape ({n}, 2), got {coords.shape}")
            self.coords = coords
        self._ext_index = {ext: i for i, ext in enumerate(self.external_ids)}
        if len(self._ext_index) != n:
            raise ValueError("external ids must be distinct")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def internal_id(self, external_id: str) -> int:
        try:
            return self._ext_index[str(external_id)]
        except KeyError:
            raise KeyError(f"unknown vertex id {external_id!r}") from None

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.vertex_count)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def with_coords(self, coords: np.ndarray) -> "RoadNetwork":
        return replace(self, coords=coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RoadNetwork):
            return NotImplemented
        if (self.vertex_count, self.edges, self.external_ids) != (
            other.vertex_count,
            other.edges,
            other.external_ids,
        ):
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        return self.coords is None or bool(np.array_equal(self.coords, other.coords))


@dataclass(frozen=True)
class CategoryAssignment:
    """Ordered POI categories; position within a category is significant
    for enumeration order and tie-breaking."""

    categories: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for i, cat in enumerate(self.categories):
            if not cat:
                raise ValueError(f"category {i} is empty")
            for v in cat:
                if v < 0:
                    raise ValueError(f"category {i} has negative vertex id {v}")
                if v in seen:
                    raise ValueError(f"vertex {v} appears in more than one category")
                seen.add(v)

    @property
    def k(self) -> int:
        return len(self.categories)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.categories)

    def combination_count(self) -> int:
        return math.prod(self.sizes())

    def validate_against(self, net: RoadNetwork) -> None:
        for cat in self.categories:
            for v in cat:
                if v >= net.vertex_count:
                    raise ValueError(f"category vertex {v} not in network")


@dataclass(frozen=True)
class GroupSpec:
    """Group members' source and destination vertices, index-aligned."""

    sources: tuple[int, ...]
    destinations: tuple[int, ...]

    def __post_init__(self):
        if len(self.sources) != len(self.destinations):
            raise ValueError("sources and destinations must have equal length")
        if not self.sources:
            raise ValueError("group must have at least one member")

    @property
    def b(self) -> int:
        return len(self.sources)

    def validate_against(self, net: RoadNetwork) -> None:
        for v in self.sources + self.destinations:
            if not (0 <= v < net.vertex_count):
                raise ValueError(f"group vertex {v} not in network")


def parse_edge_list(text: str, weighted: bool = True) -> RoadNetwork:
    """Parse a line-oriented edge list (`u v` or `u v w`) into a RoadNetwork.

    Lines starting with '%' or '#' are comments. A MatrixMarket banner makes
    the following size line be skipped. Vertex tokens are remapped to dense
    0-based ids in first-appearance order; parallel edges collapse to the
    minimum weight; self-loops are dropped. With weighted=False every edge
    gets unit weight and any third column is ignored.
    """
    ids: dict[str, int] = {}
    ext: list[str] = []
    edges: list[list] = []  # [u, v, w], mutable for the min-weight rule
    edge_pos: dict[tuple[int, int], int] = {}
    size_line_pending = False

    def intern(token: str) -> int:
        i = ids.get(token)
        if i is None:
            i = len(ext)
            ids[token] = i
            ext.append(token)
        return i

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%") or line.startswith("#"):
            if line.lower().startswith("%%matrixmarket"):
                size_line_pending = True
            continue
        if size_line_pending:
            # MatrixMarket coordinate size line: "rows cols nnz"
            size_line_pending = False
            continue
        parts = line.split()
        if len(parts) < 2 or len(parts) > 3:
            raise ValueError(f"line {lineno}: malformed edge line {line!r}")
        u_tok, v_tok = parts[0], parts[1]
        if u_tok == v_tok:
            continue  # self-loop
        if weighted:
            if len(parts) < 3:
                raise ValueError(f"line {lineno}: missing edge weight in {line!r}")
            try:
                w = float(parts[2])
            except ValueError:
                raise ValueError(
                    f"line {lineno}: malformed weight {parts[2]!r}"
                ) from None
            if not math.isfinite(w) or w <= 0.0:
                raise ValueError(f"line {lineno}: nonpositive weight {parts[2]}")
        else:
            w = 1.0
        u, v = intern(u_tok), intern(v_tok)
        a, b = (u, v) if u < v else (v, u)
        pos = edge_pos.get((a, b))
        if pos is None:
            edge_pos[(a, b)] = len(edges)
            edges.append([a, b, w])
        elif w < edges[pos][2]:
            edges[pos][2] = w
    if not edges:
        raise ValueError("empty input: no edges found")
    return RoadNetwork(
        vertex_count=len(ext),
        edges=tuple((u, v, w) for u, v, w in edges),
        external_ids=tuple(ext),
    )


def format_edge_list(net: RoadNetwork) -> str:
    """Serialize to `u v w` lines using external ids; inverse of parse."""
    lines = []
    for u, v, w in net.edges:
        lines.append(f"{net.external_ids[u]} {net.external_ids[v]} {float(w)!r}")
    return "\n".join(lines) + "\n"


def parse_coords(text: str, net: RoadNetwork) -> np.ndarray:
    """Parse `id x y` lines into an (n, 2) array aligned with internal ids.

    Lines for ids not in the network are ignored; every network vertex
    must receive a coordinate pair.
    """
    coords = np.full((net.vertex_count, 2), np.nan)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%") or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'id x y', got {line!r}")
        i = net._ext_index.get(parts[0])
        if i is None:
            continue
        try:
            coords[i, 0] = float(parts[1])
            coords[i, 1] = float(parts[2])
        except ValueError:
            raise ValueError(f"line {lineno}: malformed coordinates {line!r}") from None
    missing = np.flatnonzero(np.isnan(coords[:, 0]))
    if missing.size:
        first = net.external_ids[int(missing[0])]
        raise ValueError(
            f"{missing.size} vertices have no coordinates (first missing id: {first})"
        )
    return coords


def format_coords(net: RoadNetwork) -> str:
    if net.coords is None:
        raise ValueError("network has no coordinates")
    lines = []
    for i in range(net.vertex_count):
        x, y = float(net.coords[i, 0]), float(net.coords[i, 1])
        lines.append(f"{net.external_ids[i]} {x!r} {y!r}")
    return "\n".join(lines) + "\n"


def parse_categories(text: str, net: RoadNetwork) -> CategoryAssignment:
    """Parse a category file: line i holds the external ids of category i."""
    cats: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%") or line.startswith("#"):
            continue
        members = []
        for tok in line.split():
            i = net._ext_index.get(tok)
            if i is None:
                raise ValueError(f"line {lineno}: unknown vertex id {tok!r}")
            members.append(i)
        cats.append(tuple(members))
    if not cats:
        raise ValueError("empty category file")
    assignment = CategoryAssignment(tuple(cats))
    assignment.validate_against(net)
    return assignment


def with_euclidean_weights(net: RoadNetwork) -> RoadNetwork:
    """Replace every edge weight with the Euclidean endpoint distance."""
    if net.coords is None:
        raise ValueError("Euclidean weights require vertex coordinates")
    new_edges = []
    for u, v, _ in net.edges:
        dx = net.coords[u, 0] - net.coords[v, 0]
        dy = net.coords[u, 1] - net.coords[v, 1]
        w = math.hypot(dx, dy)
        if w <= 0.0:
            raise ValueError(
                f"edge ({net.external_ids[u]}, {net.external_ids[v]}) has coincident "
                "endpoints; Euclidean weight would not be positive"
            )
        new_edges.append((u, v, w))
    return replace(net, edges=tuple(new_edges))


def component_labels(net: RoadNetwork) -> tuple[np.ndarray, int]:
    """Label connected components by BFS; labels follow smallest-contained-id order."""
    n = net.vertex_count
    adj = net.adjacency()
    labels = np.full(n, -1, dtype=np.int64)
    count = 0
    for start in range(n):
        if labels[start] != -1:
            continue
        labels[start] = count
        stack = [start]
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if labels[v] == -1:
                    labels[v] = count
                    stack.append(v)
        count += 1
    return labels, count


def is_connected(net: RoadNetwork) -> bool:
    if net.vertex_count == 0:
        return False
    _, count = component_labels(net)
    return count == 1


def largest_connected_component(net: RoadNetwork) -> RoadNetwork:
    """Induced subgraph on the largest component, ids re-densified.

    Ties go to the component containing the smallest original vertex id
    (the first one discovered by the scan). Already-connected networks
    are returned unchanged.
    """
    if net.vertex_count == 0:
        raise ValueError("empty network")
    labels, count = component_labels(net)
    if count == 1:
        return net
    sizes = np.bincount(labels, minlength=count)
    best = int(np.argmax(sizes))  # argmax keeps the first (smallest-id) winner on ties
    keep = labels == best

    remap: dict[int, int] = {}
    new_edges: list[Edge] = []
    for u, v, w in net.edges:
        if keep[u] and keep[v]:
            for x in (u, v):
                if x not in remap:
                    remap[x] = len(remap)
            a, b = remap[u], remap[v]
            if a > b:
                a, b = b, a  # remap order follows edge scan, renormalize
            new_edges.append((a, b, w))
    # component vertices untouched by any edge (possible only for size-1 components)
    for old in np.flatnonzero(keep):
        old = int(old)
        if old not in remap:
            remap[old] = len(remap)

    order = sorted(remap, key=remap.get)
    new_ext = tuple(net.external_ids[old] for old in order)
    new_coords = net.coords[order] if net.coords is not None else None
    return RoadNetwork(
        vertex_count=len(order),
        edges=tuple(new_edges),
        external_ids=new_ext,
        coords=new_coords,
    )


def assign_categories(
    net: RoadNetwork, k: int, per_category: int, seed: int
) -> CategoryAssignment:
    """Sample k disjoint categories of per_category vertices each.

    Deterministic for a fixed seed: k * per_category distinct vertices are
    drawn uniformly without replacement and split into k equal blocks.
    """
    if k < 1 or per_category < 1:
        raise ValueError("k and per_category must be positive")
    total = k * per_category
    if total > net.vertex_count:
        raise ValueError(
            f"insufficient vertices: need {total}, network has {net.vertex_count}"
        )
    rng = np.random.default_rng(seed)
    chosen = rng.choice(net.vertex_count, size=total, replace=False)
    cats = tuple(
        tuple(int(v) for v in chosen[i * per_category : (i + 1) * per_category])
        for i in range(k)
    )
    return CategoryAssignment(cats)
