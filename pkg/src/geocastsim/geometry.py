"""Planar predicates and angular sweeps that the routing graph and face traversal build on.

All comparisons are exact sign tests on float cross/dot products; no angles are
ever extracted, so traversal decisions are deterministic and consistent with
the counter-clockwise adjacency order used elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

COUNTERCLOCKWISE = 1
CLOCKWISE = -1
COLLINEAR = 0

LEFT = "L"
RIGHT = "R"


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    @property
    def degenerate(self) -> bool:
        return self.a == self.b


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle with closed membership (the boundary is inside)."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        if self.lo.x > self.hi.x or self.lo.y > self.hi.y:
            raise ValueError("rectangle corners out of order")

    @classmethod
    def from_bounds(cls, xmin: float, ymin: float, xmax: float, ymax: float) -> "Rect":
        return cls(Point(xmin, ymin), Point(xmax, ymax))

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.lo.x, self.lo.y, self.hi.x, self.hi.y)

    @property
    def center(self) -> Point:
        return Point((self.lo.x + self.hi.x) / 2.0, (self.lo.y + self.hi.y) / 2.0)

    def contains(self, p: Point) -> bool:
        return self.lo.x <= p.x <= self.hi.x and self.lo.y <= p.y <= self.hi.y

    def sides(self) -> tuple[Segment, Segment, Segment, Segment]:
        a, b = self.lo, self.hi
        c = Point(b.x, a.y)
        d = Point(a.x, b.y)
        return (Segment(a, c), Segment(c, b), Segment(b, d), Segment(d, a))


def cross(o: Point, a: Point, b: Point) -> float:
    """Cross product of (a - o) with (b - o)."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def dist2(a: Point, b: Point) -> float:
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy


def orientation(p: Point, q: Point, r: Point) -> int:
    """Turn direction of the path p -> q -> r.

    Returns COUNTERCLOCKWISE (+1), CLOCKWISE (-1) or COLLINEAR (0); exactly
    zero cross product counts as collinear.
    """
    area = cross(p, q, r)
    if area > 0.0:
        return COUNTERCLOCKWISE
    if area < 0.0:
        return CLOCKWISE
    return COLLINEAR


def _within_box(p: Point, q: Point, r: Point) -> bool:
    # q assumed collinear with p-r; closed bounding-box membership
    return (min(p.x, r.x) <= q.x <= max(p.x, r.x)
            and min(p.y, r.y) <= q.y <= max(p.y, r.y))


def segments_intersect(s1: Segment, s2: Segment) -> bool:
    """Closed-segment intersection; touching endpoints count."""
    p1, q1 = s1.a, s1.b
    p2, q2 = s2.a, s2.b
    o1 = orientation(p1, q1, p2)
    o2 = orientation(p1, q1, q2)
    o3 = orientation(p2, q2, p1)
    o4 = orientation(p2, q2, q1)
    if o1 != o2 and o3 != o4 and o1 != COLLINEAR and o2 != COLLINEAR:
        return True
    if o1 == COLLINEAR and _within_box(p1, p2, q1):
        return True
    if o2 == COLLINEAR and _within_box(p1, q2, q1):
        return True
    if o3 == COLLINEAR and _within_box(p2, p1, q2):
        return True
    if o4 == COLLINEAR and _within_box(p2, q1, q2):
        return True
    return False


def segment_intersects_rect(seg: Segment, rect: Rect) -> bool:
    """True iff the closed segment meets the closed rectangle."""
    if rect.contains(seg.a) or rect.contains(seg.b):
        return True
    return any(segments_intersect(seg, side) for side in rect.sides())


def _sweep_phase(cr: float, dt: float, rule: str) -> int:
    # Order of encounter when sweeping away from the reference ray:
    # 0 = strictly on the sweep side, 1 = exactly opposite, 2 = far side,
    # 3 = aligned with the reference ray (a full turn away).
    if cr == 0.0:
        return 3 if dt > 0.0 else 1
    if rule == RIGHT:
        return 0 if cr < 0.0 else 2
    return 0 if cr > 0.0 else 2


def next_hop_index(at: Point, prev: Point, neighbors: Sequence[Point], rule: str) -> int:
    """Index of the first neighbor met when sweeping from the ray at->prev.

    Rule RIGHT sweeps clockwise, LEFT counter-clockwise.  A neighbor exactly in
    the direction of `prev` is considered last (full sweep), which makes a
    dead-end bounce back to its only neighbor.  Angular ties break by distance,
    nearer first.
    """
    if not neighbors:
        raise ValueError("next_hop needs at least one neighbor")
    dx = prev.x - at.x
    dy = prev.y - at.y
    best = -1
    b_phase = 0
    b_wx = b_wy = b_d2 = 0.0
    for i, p in enumerate(neighbors):
        wx = p.x - at.x
        wy = p.y - at.y
        cr = dx * wy - dy * wx
        dt = dx * wx + dy * wy
        phase = _sweep_phase(cr, dt, rule)
        d2 = wx * wx + wy * wy
        if best < 0:
            earlier = True
        elif phase != b_phase:
            earlier = phase < b_phase
        elif phase in (1, 3):
            earlier = d2 < b_d2
        else:
            c2 = wx * b_wy - wy * b_wx  # cross(candidate, best)
            if c2 == 0.0:
                earlier = d2 < b_d2
            elif rule == RIGHT:
                earlier = c2 < 0.0
            else:
                earlier = c2 > 0.0
        if earlier:
            best, b_phase, b_wx, b_wy, b_d2 = i, phase, wx, wy, d2
    return best


def next_hop(at: Point, prev: Point, neighbors: Sequence[Point], rule: str) -> Point:
    return neighbors[next_hop_index(at, prev, neighbors, rule)]


def wedge_contains_direction(at: Point, u: Point, w: Point, toward: Point) -> bool:
    """True iff the direction at->toward lies in the closed ccw sector from
    at->u to at->w.  A self-wedge (u == w) spans the full circle."""
    if u == w:
        return True
    ux, uy = u.x - at.x, u.y - at.y
    wx, wy = w.x - at.x, w.y - at.y
    cx, cy = toward.x - at.x, toward.y - at.y
    c_uw = ux * wy - uy * wx
    c_uc = ux * cy - uy * cx
    c_cw = cx * wy - cy * wx
    if c_uw > 0.0:
        return c_uc >= 0.0 and c_cw >= 0.0
    if c_uw < 0.0:
        return c_uc >= 0.0 or c_cw >= 0.0
    if ux * wx + uy * wy > 0.0:
        # distinct neighbors in exactly the same direction: zero-width sector
        return c_uc == 0.0 and ux * cx + uy * cy > 0.0
    return c_uc >= 0.0
