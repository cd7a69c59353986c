"""Scenario generation and parameter sweeps with reproducible aggregation.

All randomness flows from one root seed through counter-based substreams keyed
by (trial, purpose), so results are identical across machines and across runs.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .engine import Metrics, Simulation, SimulationFault, compute_metrics, deliver_dominated
from .netgraph import (
    Network,
    Point,
    Rect,
    Scenario,
    build_unit_disk,
    cds_backbone,
    gabriel_subgraph,
    induced_subgraph,
)
from .protocol import ALGORITHMS, RoutingNets

_PURPOSE_SCENARIO = 1
_PURPOSE_RUN_SEED = 2


def substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


@dataclass(frozen=True)
class ExperimentConfig:
    field_side: float = 10.0
    density: float = 7.0
    region_side: float = 3.0
    algorithms: tuple[str, ...] = ("sf", "spg", "sf-spg", "sf-spg-g")
    trials: int = 100
    seed: int = 0
    policy: str = "fifo"
    cds: bool = False

    def __post_init__(self) -> None:
        if self.region_side > self.field_side:
            raise ValueError("region side must not exceed field side")
        if self.trials < 1:
            raise ValueError("at least one trial is required")
        if self.density <= 0:
            raise ValueError("density must be positive")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {alg!r}")


def device_count(density: float, field_side: float) -> int:
    """Number of devices: field area divided by the unit-circle area, times
    the density, rounded to the nearest integer (at least one device)."""
    return max(1, round(density * field_side * field_side / math.pi))


def gen_scenario(cfg: ExperimentConfig, trial_index: int) -> Scenario:
    rng = substream(cfg.seed, trial_index, _PURPOSE_SCENARIO)
    side = cfg.field_side
    n = device_count(cfg.density, side)
    while True:
        coords = rng.uniform(0.0, side, size=(n, 2))
        pts = tuple(Point(float(x), float(y)) for x, y in coords)
        if len(set((p.x, p.y) for p in pts)) == n:
            break
    source = int(rng.integers(n))
    span = side - cfg.region_side
    ox = float(rng.uniform(0.0, span)) if span > 0 else 0.0
    oy = float(rng.uniform(0.0, span)) if span > 0 else 0.0
    region = Rect.from_bounds(ox, oy, ox + cfg.region_side, oy + cfg.region_side)
    run_seed = int(substream(cfg.seed, trial_index, _PURPOSE_RUN_SEED).integers(2 ** 62))
    return Scenario(1.0, (side, side), pts, source, region, run_seed)


@dataclass(frozen=True)
class NetBundle:
    nets: RoutingNets
    full: Network  # the unrestricted unit-disk graph (metrics reference)
    backbone: Optional[frozenset]


def build_nets(scenario: Scenario, cds: bool = False) -> NetBundle:
    full = build_unit_disk(scenario.devices, scenario.radius)
    if not cds:
        return NetBundle(RoutingNets(full, gabriel_subgraph(full)), full, None)
    backbone = cds_backbone(full)
    backbone.add(scenario.source)
    restricted = induced_subgraph(full, backbone)
    # planarize the restricted graph itself so the backbone overlay keeps its
    # connectivity component-wise
    planar = gabriel_subgraph(restricted)
    return NetBundle(RoutingNets(restricted, planar), full, frozenset(backbone))


@dataclass(frozen=True)
class TrialResult:
    algorithm: str
    fault: bool
    metrics: Optional[Metrics]


def run_trial(scenario: Scenario, algorithm: str, policy: str = "fifo",
              cds: bool = False, step_budget: Optional[int] = None,
              bundle: Optional[NetBundle] = None) -> TrialResult:
    if bundle is None:
        bundle = build_nets(scenario, cds)
    inst = scenario.instance()
    sim = Simulation(bundle.nets, inst, algorithm, policy,
                     seed=scenario.seed, step_budget=step_budget)
    try:
        state = sim.run_to_quiescence()
    except SimulationFault:
        return TrialResult(algorithm, True, None)
    if bundle.backbone is not None:
        deliver_dominated(state, bundle.full, inst, set(bundle.backbone))
    return TrialResult(algorithm, False, compute_metrics(state, bundle.full, inst))


RESULT_COLUMNS = (
    "axis", "value", "algorithm", "trials", "faults",
    "mean_cost", "ci_cost", "mean_norm_cost", "ci_norm_cost",
    "mean_stretch", "ci_stretch", "median_cost", "delivery_rate",
)


@dataclass(frozen=True)
class ResultRow:
    axis: str
    value: float
    algorithm: str
    trials: int
    faults: int
    mean_cost: Optional[float]
    ci_cost: Optional[float]
    mean_norm_cost: Optional[float]
    ci_norm_cost: Optional[float]
    mean_stretch: Optional[float]
    ci_stretch: Optional[float]
    median_cost: Optional[float]
    delivery_rate: Optional[float]


def mean_ci(values: Sequence[float]) -> tuple[Optional[float], Optional[float]]:
    """Sample mean and 95% half-width under the normal approximation."""
    if not values:
        return None, None
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    if len(arr) < 2:
        return mean, 0.0
    half = float(1.96 * arr.std(ddof=1) / math.sqrt(len(arr)))
    return mean, half


def _with_axis_value(cfg: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    if axis == "density":
        return replace(cfg, density=value)
    if axis == "region":
        return replace(cfg, region_side=value)
    if axis == "field":
        return replace(cfg, field_side=value)
    raise ValueError(f"unknown sweep axis {axis!r}")


def aggregate(axis: str, value: float, algorithm: str, results: Sequence[TrialResult]) -> ResultRow:
    ok = [r.metrics for r in results if not r.fault]
    faults = sum(1 for r in results if r.fault)
    costs = [float(m.message_cost) for m in ok]
    norm = [m.normalized_cost for m in ok if m.normalized_cost is not None]
    stretch = [m.path_stretch for m in ok if m.path_stretch is not None]
    rates = [m.delivery_rate for m in ok if m.delivery_rate is not None]
    mean_cost, ci_cost = mean_ci(costs)
    mean_norm, ci_norm = mean_ci(norm)
    mean_stretch, ci_stretch = mean_ci(stretch)
    return ResultRow(
        axis=axis, value=value, algorithm=algorithm, trials=len(ok), faults=faults,
        mean_cost=mean_cost, ci_cost=ci_cost,
        mean_norm_cost=mean_norm, ci_norm_cost=ci_norm,
        mean_stretch=mean_stretch, ci_stretch=ci_stretch,
        median_cost=float(np.median(costs)) if costs else None,
        delivery_rate=float(np.mean(rates)) if rates else None,
    )


def sweep(cfg: ExperimentConfig, axis: str, values: Sequence[float]) -> list[ResultRow]:
    """For each value on the axis, run cfg.trials trials of every algorithm
    with the other two parameters held at their configured defaults.  All
    algorithms see the same scenarios."""
    if not values:
        raise ValueError("sweep needs at least one value")
    rows = []
    for value in values:
        point_cfg = _with_axis_value(cfg, axis, value)
        per_alg: dict[str, list[TrialResult]] = {alg: [] for alg in cfg.algorithms}
        for trial in range(cfg.trials):
            scenario = gen_scenario(point_cfg, trial)
            bundle = build_nets(scenario, cfg.cds)
            for alg in cfg.algorithms:
                per_alg[alg].append(run_trial(scenario, alg, cfg.policy,
                                              cds=cfg.cds, bundle=bundle))
        for alg in cfg.algorithms:
            rows.append(aggregate(axis, value, alg, per_alg[alg]))
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for r in rows:
        writer.writerow([_cell(getattr(r, col)) for col in RESULT_COLUMNS])
    return buf.getvalue()


def write_results_csv(rows: Sequence[ResultRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
