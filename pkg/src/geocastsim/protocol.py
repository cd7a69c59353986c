"""The routing algorithms as pure handler functions.

Each handler maps (networks, receiving device, delivered message, that
device's queue snapshot) to queue mutations: either one mate to annihilate or
a batch of messages to enqueue.  Devices keep no other protocol state; the
engine owns all mutation and additionally reports whether the device has
already fired its one-shot emissions (face splitting outside the region, the
flood-plus-pair burst inside it), which keeps the stateless rules terminating.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .geometry import LEFT, RIGHT, dist2, next_hop_index, wedge_contains_direction
from .netgraph import (
    DeviceId,
    GeocastInstance,
    Network,
    local_faces,
    wedge_qualifies,
)

FLOOD = "flood"
PLANAR = "planar"
GREEDY = "greedy"


class Message:
    """One queued or in-flight message.  `dir` is L/R for planar mode, else None."""

    __slots__ = ("mode", "dir", "sender", "receiver", "inst", "depth", "alive")

    def __init__(self, mode: str, dir: Optional[str], sender: DeviceId,
                 receiver: DeviceId, inst: GeocastInstance, depth: int):
        if sender == receiver:
            raise ValueError("a message cannot be addressed to its sender")
        if depth < 1:
            raise ValueError("depth starts at 1")
        self.mode = mode
        self.dir = dir
        self.sender = sender
        self.receiver = receiver
        self.inst = inst
        self.depth = depth
        self.alive = False

    def __repr__(self) -> str:  # debugging aid
        tag = self.dir if self.mode == PLANAR else self.mode[0].upper()
        return f"{tag}({self.sender}->{self.receiver})@{self.depth}"


class Mutations(NamedTuple):
    """Handler outcome: a mate to remove from the queue, or messages to add.
    `split` reports that the one-shot face splitting fired at this device."""

    mate: Optional[Message]
    sends: list
    split: bool = False


@dataclass(frozen=True)
class RoutingNets:
    """The graphs an algorithm routes on: full unit-disk and planar overlay."""

    full: Network
    planar: Network


def opposite(direction: str) -> str:
    return LEFT if direction == RIGHT else RIGHT


def mate_matches(m1: Message, m2: Message) -> bool:
    """Mates: same instance, each one's sender is the other's receiver, and
    either both flood or both planar with opposite traversal directions."""
    if m1.sender != m2.receiver or m1.receiver != m2.sender:
        return False
    if m1.inst != m2.inst:
        return False
    if m1.mode == FLOOD and m2.mode == FLOOD:
        return True
    if m1.mode == PLANAR and m2.mode == PLANAR:
        return m1.dir != m2.dir
    return False


def find_mate(queue: list, m: Message) -> Optional[Message]:
    """Oldest queued mate of m, if any."""
    for q in queue:
        if q.alive and mate_matches(m, q):
            return q
    return None


def _in_region(nets: RoutingNets, inst: GeocastInstance, d: DeviceId) -> bool:
    return inst.region.contains(nets.full.positions[d])


# --- stateless flooding -----------------------------------------------------

def sf_initiate(nets: RoutingNets, inst: GeocastInstance) -> list:
    src = inst.source
    return [Message(FLOOD, None, src, u, inst, 1) for u in nets.full.adjacency[src]]


def sf_handle(nets: RoutingNets, d: DeviceId, m: Message, queue: list,
              split_done: bool = False, seen_any: bool = False) -> Mutations:
    mate = find_mate(queue, m)
    if mate is not None:
        return Mutations(mate, [])
    sends = [Message(FLOOD, None, d, u, m.inst, m.depth + 1)
             for u in nets.full.adjacency[d] if u != m.sender]
    return Mutations(None, sends)


# --- planar geocast ---------------------------------------------------------

def _pair_into_wedge(d: DeviceId, wedge: tuple[DeviceId, DeviceId],
                     inst: GeocastInstance, depth: int) -> list:
    # Into wedge (u, w) with w the ccw successor of u: the left-hand message
    # goes to w and the right-hand message to u, so both traverse the face
    # spanned by the wedge, in opposite directions.
    u, w = wedge
    return [Message(PLANAR, LEFT, d, w, inst, depth),
            Message(PLANAR, RIGHT, d, u, inst, depth)]


def _bracketing_wedge(net: Network, at: DeviceId, inst: GeocastInstance) -> Optional[tuple[DeviceId, DeviceId]]:
    """The wedge at `at` containing the direction toward the region center.

    With the device exactly at the center the direction is undefined; fall
    back to the first qualifying wedge in angular order (any wedge whose edge
    meets the region), then to the first wedge.
    """
    wedges = local_faces(net, at)
    if not wedges:
        return None
    pos = net.positions
    center = inst.region.center
    if pos[at] == center:
        for wedge in wedges:
            if wedge_qualifies(net, at, wedge, inst):
                return wedge
        return wedges[0]
    for wedge in wedges:
        if wedge_contains_direction(pos[at], pos[wedge[0]], pos[wedge[1]], center):
            return wedge
    return wedges[0]  # unreachable: wedges cover the full angle


def spg_initiate(nets: RoutingNets, inst: GeocastInstance, depth: int = 1) -> list:
    wedge = _bracketing_wedge(nets.planar, inst.source, inst)
    if wedge is None:
        return []
    return _pair_into_wedge(inst.source, wedge, inst, depth)


def _continuation(net: Network, d: DeviceId, m: Message) -> tuple[DeviceId, tuple[DeviceId, DeviceId]]:
    """Next hop of a planar message at d, plus the wedge of the face it is
    traversing (the face between the incoming edge and the continuation)."""
    idx = next_hop_index(net.positions[d], net.positions[m.sender],
                         net.neighbor_points[d], m.dir)
    nxt = net.adjacency[d][idx]
    current = (nxt, m.sender) if m.dir == RIGHT else (m.sender, nxt)
    return nxt, current


def spg_handle(nets: RoutingNets, d: DeviceId, m: Message, queue: list,
               split_done: bool = False, seen_any: bool = False) -> Mutations:
    mate = find_mate(queue, m)
    if mate is not None:
        return Mutations(mate, [])
    net = nets.planar
    nxt, current = _continuation(net, d, m)
    sends: list = []
    split = False
    if not split_done and wedge_qualifies(net, d, current, m.inst):
        split = True
        for wedge in local_faces(net, d):
            if wedge != current and wedge_qualifies(net, d, wedge, m.inst):
                sends.extend(_pair_into_wedge(d, wedge, m.inst, m.depth + 1))
    sends.append(Message(PLANAR, m.dir, d, nxt, m.inst, m.depth + 1))
    return Mutations(None, sends, split)


# --- flood inside the region, planar outside --------------------------------

def _region_burst(nets: RoutingNets, inst: GeocastInstance, d: DeviceId,
                  exclude: Optional[DeviceId], depth: int) -> list:
    """One flood message per in-region neighbor and one L/R pair per
    out-of-region planar neighbor, skipping `exclude`."""
    sends: list = []
    for u in nets.full.adjacency[d]:
        if u != exclude and _in_region(nets, inst, u):
            sends.append(Message(FLOOD, None, d, u, inst, depth))
    for u in nets.planar.adjacency[d]:
        if u != exclude and not _in_region(nets, inst, u):
            sends.append(Message(PLANAR, LEFT, d, u, inst, depth))
            sends.append(Message(PLANAR, RIGHT, d, u, inst, depth))
    return sends


def combined_initiate(nets: RoutingNets, inst: GeocastInstance) -> list:
    if _in_region(nets, inst, inst.source):
        return _region_burst(nets, inst, inst.source, None, 1)
    return spg_initiate(nets, inst)


def combined_handle(nets: RoutingNets, d: DeviceId, m: Message, queue: list,
                    split_done: bool = False, seen_any: bool = False) -> Mutations:
    if not _in_region(nets, inst := m.inst, d):
        return spg_handle(nets, d, m, queue, split_done, seen_any)
    mate = find_mate(queue, m)
    if mate is not None:
        return Mutations(mate, [])
    sends: list = []
    if not seen_any:
        # a greedy arrival has no partner walker and gets no reply, so the
        # faces flanking its arrival edge are explored via a pair to the
        # sender; flood and planar arrivals keep the sender exclusion
        exclude = None if m.mode == GREEDY else m.sender
        sends.extend(_region_burst(nets, inst, d, exclude, m.depth + 1))
        if m.mode == PLANAR:
            # reply with the exact mate of the arriving message so the
            # sender-side face traversal annihilates
            sends.append(Message(PLANAR, opposite(m.dir), d, m.sender, inst, m.depth + 1))
    return Mutations(None, sends)


# --- greedy approach, then the combined algorithm ---------------------------

def _closest_to_center(nets: RoutingNets, inst: GeocastInstance, d: DeviceId) -> Optional[DeviceId]:
    # greedy forwards on the planar overlay, like the rest of the planar
    # machinery it switches into
    net = nets.planar
    center = inst.region.center
    here = dist2(net.positions[d], center)
    best: Optional[DeviceId] = None
    best_d2 = here
    for u in net.adjacency[d]:
        d2 = dist2(net.positions[u], center)
        if d2 < best_d2 or (best is not None and d2 == best_d2 and u < best):
            best = u
            best_d2 = d2
    return best  # None means local minimum (ties count as no progress)


def greedy_initiate(nets: RoutingNets, inst: GeocastInstance) -> list:
    src = inst.source
    if _in_region(nets, inst, src):
        return combined_initiate(nets, inst)
    target = _closest_to_center(nets, inst, src)
    if target is not None:
        return [Message(GREEDY, None, src, target, inst, 1)]
    return spg_initiate(nets, inst)


def greedy_handle(nets: RoutingNets, d: DeviceId, m: Message, queue: list,
                  split_done: bool = False, seen_any: bool = False) -> Mutations:
    if m.mode != GREEDY:
        return combined_handle(nets, d, m, queue, split_done, seen_any)
    if _in_region(nets, m.inst, d):
        # the greedy phase ends here: re-anchor the guide line at the switch
        # device, then apply the in-region rule
        anchored = GeocastInstance.create(d, nets.full.positions[d], m.inst.region)
        handoff = Message(GREEDY, None, m.sender, d, anchored, m.depth)
        return combined_handle(nets, d, handoff, queue, split_done, seen_any)
    target = _closest_to_center(nets, m.inst, d)
    if target is not None:
        return Mutations(None, [Message(GREEDY, None, d, target, m.inst, m.depth + 1)])
    # local minimum: the other switch point, re-anchored the same way
    anchored = GeocastInstance.create(d, nets.full.positions[d], m.inst.region)
    return Mutations(None, spg_initiate(nets, anchored, depth=m.depth + 1))


@dataclass(frozen=True)
class Algorithm:
    name: str
    initiate: Callable[[RoutingNets, GeocastInstance], list]
    handle: Callable[..., Mutations]


ALGORITHMS: dict[str, Algorithm] = {
    "sf": Algorithm("sf", sf_initiate, sf_handle),
    "spg": Algorithm("spg", spg_initiate, spg_handle),
    "sf-spg": Algorithm("sf-spg", combined_initiate, combined_handle),
    "sf-spg-g": Algorithm("sf-spg-g", greedy_initiate, greedy_handle),
}
