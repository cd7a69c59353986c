"""Shared fixtures, crafted topologies, and independent oracles for the suite."""

from __future__ import annotations

import math
from itertools import combinations

import pytest

from geocastsim.geometry import Point, Rect, dist2
from geocastsim.netgraph import GeocastInstance, Network, from_edges
from geocastsim.protocol import RoutingNets


def P(x: float, y: float) -> Point:
    return Point(float(x), float(y))


def nets_from_edges(points, edges, radius: float = 1.5) -> RoutingNets:
    """Crafted topology where the planar overlay equals the full graph."""
    net = from_edges(points, edges, radius)
    return RoutingNets(net, net)


# --- the documented splitting walkthrough ------------------------------------
# A crafted planar graph: source s starts a traversal of the face toward the
# region; juncture b forwards and splits into one qualifying face while the
# face on its far side receives nothing; juncture a splits twice (four
# messages); the returning traversal meets its mate at a.

WALK_S, WALK_A, WALK_B, WALK_C, WALK_A1, WALK_A3 = range(6)

WALK_POINTS = (
    P(0.0, 0.0),     # s
    P(0.5, 0.45),    # a
    P(0.5, -0.45),   # b
    P(-0.3, -0.85),  # c
    P(1.25, 0.6),    # a1 (pendant off a, away from everything)
    P(0.85, -0.4),   # a3 (pendant off a, its edge crosses the guide line)
)

WALK_EDGES = (
    (WALK_S, WALK_A), (WALK_S, WALK_B), (WALK_A, WALK_B),
    (WALK_S, WALK_C), (WALK_B, WALK_C),
    (WALK_A, WALK_A1), (WALK_A, WALK_A3),
)

WALK_REGION = Rect.from_bounds(2.1, -0.3, 2.7, 0.3)


@pytest.fixture
def walkthrough():
    nets = nets_from_edges(WALK_POINTS, WALK_EDGES)
    inst = GeocastInstance.create(WALK_S, WALK_POINTS[WALK_S], WALK_REGION)
    return nets, inst


# --- independent oracles ------------------------------------------------------

def next_hop_oracle(at: Point, prev: Point, neighbors, rule: str) -> Point:
    """Angle-extraction sweep, independent of the exact-arithmetic version."""
    ref = math.atan2(prev.y - at.y, prev.x - at.x)
    two_pi = 2.0 * math.pi

    def key(p: Point):
        ang = math.atan2(p.y - at.y, p.x - at.x)
        delta = (ref - ang) % two_pi if rule == "R" else (ang - ref) % two_pi
        if delta == 0.0:
            delta = two_pi
        return (delta, dist2(at, p))

    return min(neighbors, key=key)


def gabriel_oracle_keeps(points, u: int, v: int) -> bool:
    """Diametral-disk test by the obtuse-angle form, scanning every device."""
    pu, pv = points[u], points[v]
    for w, pw in enumerate(points):
        if w in (u, v):
            continue
        if dist2(pu, pw) + dist2(pw, pv) < dist2(pu, pv):
            return False
    return True


def minimum_cds_oracle(net: Network) -> set[int]:
    """Smallest connected dominating set by exhaustive search (n <= 8 or so).

    Assumes a connected input with at least one vertex.
    """
    n = net.n
    if n == 1:
        return {0}

    def dominating(sub: set[int]) -> bool:
        return all(d in sub or any(u in sub for u in net.adjacency[d]) for d in range(n))

    def connected(sub: set[int]) -> bool:
        start = next(iter(sub))
        seen = {start}
        stack = [start]
        while stack:
            d = stack.pop()
            for u in net.adjacency[d]:
                if u in sub and u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen == sub

    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            sub = set(combo)
            if dominating(sub) and connected(sub):
                return sub
    raise AssertionError("no CDS found")


def exhaustive_sf_outcomes(adjacency, source):
    """Every fair schedule of stateless flooding, by exhaustive search.

    Independent re-implementation of the flood rules over immutable states;
    returns the set of (transmissions, visited frozenset) at quiescence.
    """
    init = tuple(
        tuple((source, u) for u in adjacency[d]) if d == source else ()
        for d in range(len(adjacency))
    )
    outcomes = set()
    seen_states = set()

    def explore(queues, visited, sent):
        state = (queues, visited, sent)
        if state in seen_states:
            return
        seen_states.add(state)
        pending = [(d, i) for d, q in enumerate(queues) for i in range(len(q))]
        if not pending:
            outcomes.add((sent, visited))
            return
        for d, i in pending:
            sender, receiver = queues[d][i]
            q2 = list(list(q) for q in queues)
            del q2[d][i]
            visited2 = visited | {receiver}
            mate = None
            for j, (ms, mr) in enumerate(q2[receiver]):
                if mr == sender:
                    mate = j
                    break
            if mate is not None:
                del q2[receiver][mate]
            else:
                for u in adjacency[receiver]:
                    if u != sender:
                        q2[receiver].append((receiver, u))
            explore(tuple(tuple(q) for q in q2), visited2, sent + 1)

    explore(init, frozenset({source}), 0)
    return outcomes


def sf_border_violations(sim) -> list[str]:
    """Check the flooding frontier invariant on the current state: a visited
    device queues exactly one message per unused incident edge and none per
    used edge; unvisited devices queue nothing."""
    net = sim.nets.full
    st = sim.state
    violations = []
    for d in range(net.n):
        queued = [m.receiver for m in st.queues[d] if m.alive]
        if d not in st.arrival:
            if queued:
                violations.append(f"unvisited device {d} holds {queued}")
            continue
        for u in net.adjacency[d]:
            edge = (d, u) if d < u else (u, d)
            count = queued.count(u)
            if edge in st.used_edges:
                if count != 0:
                    violations.append(f"device {d} queues over used edge {edge}")
            elif count != 1:
                violations.append(f"device {d} queues {count} messages over unused edge {edge}")
        extras = set(queued) - set(net.adjacency[d])
        if extras:
            violations.append(f"device {d} queues to non-neighbors {extras}")
    return violations
