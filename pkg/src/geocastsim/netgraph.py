"""Unit-disk connectivity, Gabriel planar overlay, backbone selection and face bookkeeping."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Optional, Sequence

import numpy as np

from .geometry import (
    COLLINEAR,
    Point,
    Rect,
    Segment,
    dist2,
    orientation,
    segment_intersects_rect,
    segments_intersect,
)

DeviceId = int


class DuplicatePointsError(ValueError):
    """Two devices share coordinates; the scenario must be regenerated."""


class ScenarioFormatError(ValueError):
    """A scenario file is malformed; the message names the offending field."""


class Network:
    """Immutable embedded graph: positions plus adjacency sorted counter-clockwise.

    The angular order starts at the positive x axis; ties (collinear neighbors)
    order nearer-first, then by id.  `neighbor_points` caches each adjacency
    list as Points for the traversal sweeps.
    """

    __slots__ = ("positions", "adjacency", "radius", "neighbor_points")

    def __init__(self, positions: Sequence[Point], adjacency: Sequence[Sequence[int]], radius: float):
        self.positions: tuple[Point, ...] = tuple(positions)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in adjacency)
        self.radius = float(radius)
        self.neighbor_points: tuple[tuple[Point, ...], ...] = tuple(
            tuple(self.positions[u] for u in nbrs) for nbrs in self.adjacency
        )

    @property
    def n(self) -> int:
        return len(self.positions)

    def degree(self, d: DeviceId) -> int:
        return len(self.adjacency[d])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def edges(self) -> Iterable[tuple[DeviceId, DeviceId]]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2


def _ccw_sorted(positions: Sequence[Point], d: DeviceId, nbrs: Iterable[DeviceId]) -> tuple[int, ...]:
    at = positions[d]

    def half(u: DeviceId) -> int:
        p = positions[u]
        vx, vy = p.x - at.x, p.y - at.y
        return 0 if (vy > 0.0 or (vy == 0.0 and vx > 0.0)) else 1

    def cmp(u: DeviceId, v: DeviceId) -> int:
        hu, hv = half(u), half(v)
        if hu != hv:
            return -1 if hu < hv else 1
        c = cross_ids(positions, at, u, v)
        if c > 0.0:
            return -1
        if c < 0.0:
            return 1
        du = dist2(at, positions[u])
        dv = dist2(at, positions[v])
        if du != dv:
            return -1 if du < dv else 1
        return -1 if u < v else (1 if u > v else 0)

    return tuple(sorted(nbrs, key=cmp_to_key(cmp)))


def cross_ids(positions: Sequence[Point], at: Point, u: DeviceId, v: DeviceId) -> float:
    pu, pv = positions[u], positions[v]
    return (pu.x - at.x) * (pv.y - at.y) - (pu.y - at.y) * (pv.x - at.x)


def build_unit_disk(points: Sequence[Point], radius: float) -> Network:
    """Connect every pair at Euclidean distance <= radius (closed threshold)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    pts = list(points)
    if len(set((p.x, p.y) for p in pts)) != len(pts):
        raise DuplicatePointsError("device coordinates must be pairwise distinct")
    n = len(pts)
    if n == 0:
        return Network((), (), radius)
    arr = np.array([(p.x, p.y) for p in pts], dtype=np.float64)
    diff = arr[:, None, :] - arr[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    within = d2 <= radius * radius
    np.fill_diagonal(within, False)
    adjacency = [_ccw_sorted(pts, d, np.flatnonzero(within[d]).tolist()) for d in range(n)]
    return Network(pts, adjacency, radius)


def from_edges(points: Sequence[Point], edges: Iterable[tuple[int, int]], radius: float = 1.0) -> Network:
    """Build a network from an explicit edge list (for crafted topologies)."""
    pts = list(points)
    nbrs: list[set[int]] = [set() for _ in pts]
    for u, v in edges:
        if u == v:
            raise ValueError("self-loops are not allowed")
        if dist2(pts[u], pts[v]) > radius * radius:
            raise ValueError(f"edge ({u},{v}) longer than radius {radius}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    adjacency = [_ccw_sorted(pts, d, ns) for d, ns in enumerate(nbrs)]
    return Network(pts, adjacency, radius)


def gabriel_subgraph(net: Network) -> Network:
    """Keep edge (u,v) iff no third device lies strictly inside the disk with
    diameter uv.  Witnesses are necessarily common unit-disk neighbors, so the
    test stays local."""
    pos = net.positions
    adjacency: list[tuple[int, ...]] = []
    for u in range(net.n):
        kept = []
        pu = pos[u]
        for v in net.adjacency[u]:
            pv = pos[v]
            mx = (pu.x + pv.x) / 2.0
            my = (pu.y + pv.y) / 2.0
            r2 = ((pu.x - pv.x) ** 2 + (pu.y - pv.y) ** 2) / 4.0
            open_disk_empty = True
            for w in net.adjacency[u]:
                if w == v:
                    continue
                pw = pos[w]
                if (pw.x - mx) ** 2 + (pw.y - my) ** 2 < r2:
                    open_disk_empty = False
                    break
            if open_disk_empty:
                kept.append(v)
        adjacency.append(tuple(kept))  # subset of a ccw-sorted list stays sorted
    return Network(pos, adjacency, net.radius)


def induced_subgraph(net: Network, keep: Iterable[DeviceId]) -> Network:
    """Same id space; devices outside `keep` become isolated."""
    keep_set = set(keep)
    adjacency = [
        tuple(v for v in net.adjacency[d] if v in keep_set) if d in keep_set else ()
        for d in range(net.n)
    ]
    return Network(net.positions, adjacency, net.radius)


def bfs_hops(net: Network, src: DeviceId) -> list[Optional[int]]:
    hops: list[Optional[int]] = [None] * net.n
    hops[src] = 0
    queue = deque([src])
    while queue:
        d = queue.popleft()
        nd = hops[d] + 1  # type: ignore[operator]
        for u in net.adjacency[d]:
            if hops[u] is None:
                hops[u] = nd
                queue.append(u)
    return hops


def connected_components(net: Network) -> list[list[DeviceId]]:
    seen = [False] * net.n
    comps = []
    for s in range(net.n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        queue = deque([s])
        while queue:
            d = queue.popleft()
            for u in net.adjacency[d]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        comps.append(sorted(comp))
    return comps


def component_of(net: Network, src: DeviceId) -> set[DeviceId]:
    return {d for d, h in enumerate(bfs_hops(net, src)) if h is not None}


def cds_backbone(net: Network) -> set[DeviceId]:
    """Connected dominating set, one per component.

    Greedy cover by descending degree, then BFS connectors until the chosen
    set induces a connected subgraph within every component.  The contract is
    dominating + induced-connected, not minimality.
    """
    n = net.n
    chosen: set[int] = set()
    covered = [False] * n
    for d in sorted(range(n), key=lambda d: (-net.degree(d), d)):
        if not covered[d] or any(not covered[u] for u in net.adjacency[d]):
            chosen.add(d)
            covered[d] = True
            for u in net.adjacency[d]:
                covered[u] = True
    for comp in connected_components(net):
        comp_set = set(comp)
        while True:
            parts = _induced_parts(net, chosen & comp_set)
            if len(parts) <= 1:
                break
            chosen |= _connector_path(net, parts[0], set().union(*parts[1:]), comp_set)
    return chosen


def _induced_parts(net: Network, nodes: set[int]) -> list[set[int]]:
    remaining = set(nodes)
    parts = []
    while remaining:
        s = min(remaining)
        part = {s}
        queue = deque([s])
        while queue:
            d = queue.popleft()
            for u in net.adjacency[d]:
                if u in nodes and u not in part:
                    part.add(u)
                    queue.append(u)
        parts.append(part)
        remaining -= part
    return sorted(parts, key=min)


def _connector_path(net: Network, start: set[int], goal: set[int], universe: set[int]) -> set[int]:
    prev: dict[int, int] = {d: d for d in start}
    queue = deque(sorted(start))
    while queue:
        d = queue.popleft()
        for u in net.adjacency[d]:
            if u not in universe or u in prev:
                continue
            prev[u] = d
            if u in goal:
                interior = set()
                at = prev[u]
                while at not in start:
                    interior.add(at)
                    at = prev[at]
                return interior
            queue.append(u)
    raise RuntimeError("connector search failed inside a connected component")


@dataclass(frozen=True)
class GeocastInstance:
    """One geocast request: source device, its coordinates, the target region,
    and the line from the source to the region center."""

    source: DeviceId
    source_point: Point
    region: Rect
    center_line: Segment

    @classmethod
    def create(cls, source: DeviceId, source_point: Point, region: Rect) -> "GeocastInstance":
        return cls(source, source_point, region, Segment(source_point, region.center))


def local_faces(net: Network, d: DeviceId) -> list[tuple[DeviceId, DeviceId]]:
    """Wedges at d: consecutive neighbor pairs in ccw order, one per local face.

    A degree-1 device has the single self-wedge (u, u); an isolated device has
    none.
    """
    nbrs = net.adjacency[d]
    k = len(nbrs)
    if k == 0:
        return []
    return [(nbrs[i], nbrs[(i + 1) % k]) for i in range(k)]


def edge_qualifies(net: Network, u: DeviceId, v: DeviceId, inst: GeocastInstance) -> bool:
    """True iff edge (u,v) meets the geocast region or the source-center line.

    Region membership is closed.  The line test ignores contact that happens
    only at the source point itself, otherwise every edge at the source would
    qualify spuriously; an edge pointing along the line past the source still
    counts.
    """
    pu, pv = net.positions[u], net.positions[v]
    if segment_intersects_rect(Segment(pu, pv), inst.region):
        return True
    line = inst.center_line
    if line.degenerate:
        return False
    s, c = line.a, line.b
    if pu == s or pv == s:
        other = pv if pu == s else pu
        if orientation(s, c, other) != COLLINEAR:
            return False
        return (other.x - s.x) * (c.x - s.x) + (other.y - s.y) * (c.y - s.y) > 0.0
    return segments_intersect(Segment(pu, pv), line)


def wedge_qualifies(net: Network, d: DeviceId, wedge: tuple[DeviceId, DeviceId], inst: GeocastInstance) -> bool:
    u, w = wedge
    return edge_qualifies(net, d, u, inst) or edge_qualifies(net, d, w, inst)


def is_juncture(net: Network, d: DeviceId, inst: GeocastInstance) -> bool:
    if inst.region.contains(net.positions[d]):
        return True
    return any(edge_qualifies(net, d, u, inst) for u in net.adjacency[d])


@dataclass(frozen=True)
class Scenario:
    """The immutable world of one simulation: geometry, source, region, seed."""

    radius: float
    field: tuple[float, float]
    devices: tuple[Point, ...]
    source: DeviceId
    region: Rect
    seed: int

    def instance(self) -> GeocastInstance:
        return GeocastInstance.create(self.source, self.devices[self.source], self.region)

    def in_region(self) -> set[DeviceId]:
        return {d for d, p in enumerate(self.devices) if self.region.contains(p)}


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "radius": sc.radius,
        "field": [sc.field[0], sc.field[1]],
        "devices": [[p.x, p.y] for p in sc.devices],
        "source": sc.source,
        "region": list(sc.region.bounds),
        "seed": sc.seed,
    }


def scenario_from_dict(data: dict) -> Scenario:
    def fail(field: str, why: str) -> ScenarioFormatError:
        return ScenarioFormatError(f"scenario field '{field}': {why}")

    if not isinstance(data, dict):
        raise ScenarioFormatError("scenario must be a JSON object")
    for key in ("radius", "field", "devices", "source", "region", "seed"):
        if key not in data:
            raise fail(key, "missing")
    try:
        radius = float(data["radius"])
    except (TypeError, ValueError):
        raise fail("radius", "not a number") from None
    if radius <= 0:
        raise fail("radius", "must be positive")
    field = data["field"]
    if not (isinstance(field, list) and len(field) == 2):
        raise fail("field", "expected [width, height]")
    fw, fh = float(field[0]), float(field[1])
    if fw <= 0 or fh <= 0:
        raise fail("field", "dimensions must be positive")
    devices = data["devices"]
    if not isinstance(devices, list) or not devices:
        raise fail("devices", "expected a non-empty list of [x, y] pairs")
    pts = []
    for i, xy in enumerate(devices):
        if not (isinstance(xy, list) and len(xy) == 2):
            raise fail("devices", f"entry {i} is not an [x, y] pair")
        pts.append(Point(float(xy[0]), float(xy[1])))
    if len(set((p.x, p.y) for p in pts)) != len(pts):
        raise fail("devices", "coordinates must be pairwise distinct")
    source = data["source"]
    if not isinstance(source, int) or not (0 <= source < len(pts)):
        raise fail("source", f"must be an index in [0, {len(pts) - 1}]")
    region = data["region"]
    if not (isinstance(region, list) and len(region) == 4):
        raise fail("region", "expected [xmin, ymin, xmax, ymax]")
    xmin, ymin, xmax, ymax = (float(v) for v in region)
    if xmin > xmax or ymin > ymax:
        raise fail("region", "min corner exceeds max corner")
    if xmin < 0 or ymin < 0 or xmax > fw or ymax > fh:
        raise fail("region", "must lie within the field")
    seed = data["seed"]
    if not isinstance(seed, int):
        raise fail("seed", "must be an integer")
    return Scenario(radius, (fw, fh), tuple(pts), source, Rect.from_bounds(xmin, ymin, xmax, ymax), seed)


def save_scenario(sc: Scenario, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(sc), fh)
        fh.write("\n")


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return scenario_from_dict(data)
