"""Fair atomic-step scheduler over per-device send queues, plus metrics.

One transmission per step: a queued message is selected by the scheduling
policy, removed from its sender's queue, delivered, and the algorithm handler
is applied atomically.  Annihilated mates are removed without ever counting as
transmissions.  Everything is deterministic for a fixed (scenario, algorithm,
policy, seed).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .netgraph import DeviceId, GeocastInstance, Network, bfs_hops
from .protocol import ALGORITHMS, Algorithm, Message, RoutingNets

BUDGET_FACTOR = 50


class SimulationFault(RuntimeError):
    """Step budget exhausted: the run did not reach quiescence."""

    def __init__(self, steps: int, queued: int, budget: int):
        super().__init__(
            f"no quiescence after {steps} steps (budget {budget}, {queued} messages still queued)")
        self.steps = steps
        self.queued = queued
        self.budget = budget


@dataclass(frozen=True)
class TransmissionEvent:
    step: int
    mode: str
    dir: Optional[str]
    sender: DeviceId
    receiver: DeviceId
    depth: int


class _FifoPool:
    """Oldest enqueued message across all devices."""

    def __init__(self) -> None:
        self._items: deque = deque()
        self._alive = 0

    def add(self, m: Message) -> None:
        self._items.append(m)
        self._alive += 1

    def discard(self, m: Message) -> None:
        self._alive -= 1

    def pop(self) -> Optional[Message]:
        while self._items:
            m = self._items.popleft()
            if m.alive:
                self._alive -= 1
                return m
        return None


class _LifoPool(_FifoPool):
    def pop(self) -> Optional[Message]:
        while self._items:
            m = self._items.pop()
            if m.alive:
                self._alive -= 1
                return m
        return None


class _RandomPool:
    """Uniform choice over all queued messages, from a seeded stream."""

    def __init__(self, rng: np.random.Generator) -> None:
        self._items: list = []
        self._alive = 0
        self._rng = rng

    def add(self, m: Message) -> None:
        self._items.append(m)
        self._alive += 1

    def discard(self, m: Message) -> None:
        self._alive -= 1

    def pop(self) -> Optional[Message]:
        items = self._items
        while self._alive > 0:
            i = int(self._rng.integers(len(items)))
            m = items[i]
            items[i] = items[-1]
            items.pop()
            if m.alive:
                self._alive -= 1
                return m
        return None


class SimState:
    """Queues plus the transcript; the only mutable state of a run."""

    def __init__(self, n: int):
        self.queues: list[list] = [[] for _ in range(n)]
        self.transcript: list[TransmissionEvent] = []
        self.arrival: dict[DeviceId, int] = {}
        self.used_edges: set[tuple[DeviceId, DeviceId]] = set()
        self.received: set[DeviceId] = set()
        self.split_done: set[DeviceId] = set()
        self.enqueued = 0
        self.annihilated = 0

    @property
    def steps(self) -> int:
        return len(self.transcript)

    def queued_messages(self) -> int:
        return sum(len(q) for q in self.queues)


def _seeded_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


class Simulation:
    """A single run: initiate, then step to quiescence."""

    def __init__(self, nets: RoutingNets, inst: GeocastInstance,
                 algorithm: Union[str, Algorithm] = "sf", policy: str = "fifo",
                 seed: int = 0, step_budget: Optional[int] = None):
        self.nets = nets
        self.inst = inst
        self.algorithm = ALGORITHMS[algorithm] if isinstance(algorithm, str) else algorithm
        n = nets.full.n
        if step_budget is None:
            step_budget = BUDGET_FACTOR * n * max(1, nets.full.max_degree())
        self.step_budget = step_budget
        if policy == "fifo":
            self.pool = _FifoPool()
        elif policy == "lifo":
            self.pool = _LifoPool()
        elif policy == "random":
            self.pool = _RandomPool(_seeded_rng(seed, 0))
        else:
            raise ValueError(f"unknown policy {policy!r}")
        self.policy = policy
        self.state = SimState(n)
        self.state.arrival[inst.source] = 0
        # the source has already participated: its one-shot emissions happen
        # at initiation, so later receipts only forward or annihilate
        self.state.received.add(inst.source)
        self.state.split_done.add(inst.source)
        for m in self.algorithm.initiate(nets, inst):
            self._enqueue(m)

    def _enqueue(self, m: Message) -> None:
        m.alive = True
        self.state.queues[m.sender].append(m)
        self.pool.add(m)
        self.state.enqueued += 1

    def _apply(self, m: Message) -> TransmissionEvent:
        st = self.state
        st.queues[m.sender].remove(m)
        m.alive = False
        event = TransmissionEvent(st.steps + 1, m.mode, m.dir, m.sender, m.receiver, m.depth)
        st.transcript.append(event)
        e = (m.sender, m.receiver) if m.sender < m.receiver else (m.receiver, m.sender)
        st.used_edges.add(e)
        d = m.receiver
        seen_any = d in st.received
        st.received.add(d)
        prev = st.arrival.get(d)
        if prev is None or m.depth < prev:
            st.arrival[d] = m.depth
        mutation = self.algorithm.handle(self.nets, d, m, st.queues[d],
                                         split_done=d in st.split_done,
                                         seen_any=seen_any)
        if mutation.split:
            st.split_done.add(d)
        if mutation.mate is not None:
            mate = mutation.mate
            st.queues[d].remove(mate)
            mate.alive = False
            self.pool.discard(mate)
            st.annihilated += 1
        else:
            for out in mutation.sends:
                self._enqueue(out)
        return event

    def step(self) -> Optional[TransmissionEvent]:
        """Transmit one message; None means all queues are empty (quiescent)."""
        m = self.pool.pop()
        if m is None:
            return None
        if self.state.steps >= self.step_budget:
            m.alive = True  # leave evidence of the stuck message
            self.pool.add(m)
            raise SimulationFault(self.state.steps, self.state.queued_messages(), self.step_budget)
        return self._apply(m)

    def run_to_quiescence(self) -> SimState:
        while self.step() is not None:
            pass
        return self.state


@dataclass(frozen=True)
class Metrics:
    message_cost: int
    visited: frozenset
    region_covered: frozenset
    latency: Optional[int]
    path_stretch: Optional[float]
    normalized_cost: Optional[float]
    delivery_rate: Optional[float]
    target_count: int


def compute_metrics(state: SimState, net_full: Network, inst: GeocastInstance) -> Metrics:
    """Cost, coverage, and latency of a quiescent run.

    The furthest target is the reachable in-region device with the greatest
    hop distance from the source on the full unit-disk graph (ties break to
    the lowest id); in-region devices of other components are not counted.
    """
    cost = len(state.transcript)
    visited = frozenset(state.arrival)
    region = inst.region
    in_region = {d for d in range(net_full.n) if region.contains(net_full.positions[d])}
    covered = frozenset(visited & in_region)
    hops = bfs_hops(net_full, inst.source)
    targets = {d for d in in_region if hops[d] is not None}
    if not targets:
        return Metrics(cost, visited, covered, None, None, None, None, 0)
    far = max(targets, key=lambda d: (hops[d], -d))
    latency = state.arrival.get(far)
    stretch = None
    if latency is not None and hops[far] > 0:
        stretch = latency / hops[far]
    return Metrics(
        message_cost=cost,
        visited=visited,
        region_covered=covered,
        latency=latency,
        path_stretch=stretch,
        normalized_cost=cost / len(targets),
        delivery_rate=len(covered & targets) / len(targets),
        target_count=len(targets),
    )


def run(nets: RoutingNets, inst: GeocastInstance, algorithm: Union[str, Algorithm] = "sf",
        policy: str = "fifo", seed: int = 0,
        step_budget: Optional[int] = None) -> tuple[SimState, Metrics]:
    sim = Simulation(nets, inst, algorithm, policy, seed, step_budget)
    state = sim.run_to_quiescence()
    return state, compute_metrics(state, nets.full, inst)


def deliver_dominated(state: SimState, net_full: Network, inst: GeocastInstance,
                      backbone: set) -> int:
    """Backbone mode epilogue: one-hop delivery from visited backbone devices
    to dominated in-region neighbors that routing never reached."""
    extra = 0
    region = inst.region
    for d in range(net_full.n):
        if d in backbone or d in state.arrival or not region.contains(net_full.positions[d]):
            continue
        dominators = [u for u in net_full.adjacency[d] if u in backbone and u in state.arrival]
        if not dominators:
            continue
        u = min(dominators, key=lambda v: (state.arrival[v], v))
        depth = state.arrival[u] + 1
        event = TransmissionEvent(state.steps + 1, "flood", None, u, d, depth)
        state.transcript.append(event)
        e = (u, d) if u < d else (d, u)
        state.used_edges.add(e)
        state.arrival[d] = depth
        state.received.add(d)
        extra += 1
    return extra


def replay(nets: RoutingNets, inst: GeocastInstance, algorithm: Union[str, Algorithm],
           transcript: Iterable[TransmissionEvent]) -> SimState:
    """Re-apply a transcript to a fresh state; raises if any event cannot be
    matched to a queued message."""
    sim = Simulation(nets, inst, algorithm, policy="fifo", step_budget=None)
    for event in transcript:
        queue = sim.state.queues[event.sender]
        match = None
        for m in queue:
            if (m.alive and m.mode == event.mode and m.dir == event.dir
                    and m.receiver == event.receiver and m.depth == event.depth):
                match = m
                break
        if match is None:
            raise ValueError(f"transcript event {event} has no queued counterpart")
        sim._apply(match)
    return sim.state
