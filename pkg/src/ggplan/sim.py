"""Discrete-time execution of a robot coverage policy against the human
occupancy trace, with room-level disturbance and coverage metrics."""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .activity import OccupancyTrace
from .errors import BackendError, GGError
from .narrator import DEFAULT_WINDOW, ObservationHistory, narrate
from .policy import PolicyContext, PolicyKind, restart_rng, select_next_partition
from .reasoner import DEFAULT_BINDING_SEQUENCE, PromptSpec, compute_relevancy
from .scoring import Backend
from .semantic_map import SemanticMap

DEFAULT_HORIZON = 500
HISTOGRAM_BIN_WIDTH = 10


@dataclass(frozen=True)
class SimConfig:
    room_time: int
    horizon: int = DEFAULT_HORIZON
    master_seed: int = 0
    template: str = "activity-history"
    binding_sequence: str = DEFAULT_BINDING_SEQUENCE
    window_size: int = DEFAULT_WINDOW

    def __post_init__(self):
        if not 1 <= self.room_time <= self.horizon:
            raise GGError(
                f"room time {self.room_time} must satisfy 1 <= T_r <= horizon")


@dataclass(frozen=True)
class RunMetrics:
    restart_index: int
    disturbance: int            # D_T, same-room steps summed over the horizon
    coverage_time: int | None   # t_c, steps until every room reached T_r
    failed: bool
    robot_rooms: tuple[int, ...] = ()

    def __post_init__(self):
        assert self.failed == (self.coverage_time is None)


class _ScoreCache:
    """Per-batch memo of narration text -> partition scores. The human
    trace and replan times are shared across restarts, so most prompts
    repeat; scoring each unique prompt once keeps batches fast."""

    def __init__(self):
        self._cache: dict[str, dict[int, float]] = {}
        self._lock = threading.Lock()

    def partition_scores(self, smap, prompt: PromptSpec, backend: Backend):
        key = prompt.text
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        scores = compute_relevancy(smap, prompt, backend).partition_scores
        with self._lock:
            self._cache.setdefault(key, scores)
        return scores


def run_once(smap: SemanticMap, trace: OccupancyTrace, policy: PolicyKind,
             backend: Backend | None, config: SimConfig, restart_index: int,
             score_cache: _ScoreCache | None = None,
             record_rooms: bool = False) -> RunMetrics:
    """Simulate one restart: the robot starts in a uniformly random room,
    stays ``room_time`` steps per room, and replans on each room completion."""
    n_rooms = smap.n_rooms
    horizon, room_time = config.horizon, config.room_time
    if len(trace.rooms) < horizon + 1:
        raise GGError("human trace does not cover the horizon")
    if policy is not PolicyKind.NAIVE and backend is None:
        raise GGError(f"policy {policy.value} needs a scoring backend")

    cache = score_cache or _ScoreCache()
    rng = restart_rng(config.master_seed, restart_index)
    room_of_partition = {p.partition_id: p.room_index for p in smap.partitions}

    robot_room = int(rng.integers(n_rooms))
    timer = room_time
    per_room = [0] * n_rooms
    disturbance = 0
    coverage_time = None
    rooms_log = [] if record_rooms else None

    for t in range(horizon + 1):
        if rooms_log is not None:
            rooms_log.append(robot_room)
        if robot_room == trace.rooms[t]:
            disturbance += 1
        per_room[robot_room] += 1
        if coverage_time is None and all(c >= room_time for c in per_room):
            coverage_time = t + 1
        timer -= 1
        if timer == 0 and t < horizon:
            if policy is PolicyKind.NAIVE:
                # the naive policy ignores scores; skip the backend round trip
                robot_room = int(rng.integers(n_rooms))
            else:
                history = ObservationHistory.from_log(
                    trace.completed_before(t), window_size=config.window_size)
                prompt = PromptSpec(
                    narration=narrate(history, config.template),
                    binding_sequence=config.binding_sequence,
                )
                scores = cache.partition_scores(smap, prompt, backend)
                ctx = PolicyContext(partition_scores=scores, rng=rng)
                robot_room = room_of_partition[select_next_partition(policy, ctx)]
            timer = room_time

    return RunMetrics(
        restart_index=restart_index,
        disturbance=disturbance,
        coverage_time=coverage_time,
        failed=coverage_time is None,
        robot_rooms=tuple(rooms_log) if rooms_log is not None else (),
    )


@dataclass
class BatchResult:
    metrics: list[RunMetrics]
    aborted: list[tuple[int, str]]  # (restart index, error message)
    summary: dict


def _population_stats(values):
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std())


def _histogram(values, horizon):
    edges = list(range(0, horizon + HISTOGRAM_BIN_WIDTH + 1, HISTOGRAM_BIN_WIDTH))
    counts = [0] * (len(edges) - 1)
    for v in values:
        counts[min(v // HISTOGRAM_BIN_WIDTH, len(counts) - 1)] += 1
    return {"bin_width": HISTOGRAM_BIN_WIDTH, "edges": edges, "counts": counts}


def run_batch(smap: SemanticMap, trace: OccupancyTrace, policy: PolicyKind,
              backend: Backend | None, config: SimConfig, restarts: int,
              jobs: int = 1) -> BatchResult:
    """Execute seeded restarts; restart index i uses the stream derived
    from (master_seed, i), so results are identical at any job count."""
    if restarts < 1:
        raise GGError("restarts must be >= 1")
    cache = _ScoreCache()

    def one(i):
        return run_once(smap, trace, policy, backend, config, i, score_cache=cache)

    results: dict[int, RunMetrics] = {}
    aborted: list[tuple[int, str]] = []
    if jobs <= 1:
        for i in range(restarts):
            try:
                results[i] = one(i)
            except BackendError as exc:
                aborted.append((i, str(exc)))
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {i: pool.submit(one, i) for i in range(restarts)}
            for i, fut in futures.items():
                try:
                    results[i] = fut.result()
                except BackendError as exc:
                    aborted.append((i, str(exc)))

    metrics = [results[i] for i in sorted(results)]
    d_ts = [m.disturbance for m in metrics]
    t_cs = [m.coverage_time for m in metrics if m.coverage_time is not None]
    d_mean, d_std = _population_stats(d_ts)
    t_mean, t_std = _population_stats(t_cs)
    failures = sum(m.failed for m in metrics)
    summary = {
        "policy": policy.value,
        "room_time": config.room_time,
        "horizon": config.horizon,
        "master_seed": config.master_seed,
        "restarts": restarts,
        "completed": len(metrics),
        "aborted": len(aborted),
        "disturbance_mean": d_mean,
        "disturbance_std": d_std,
        "coverage_time_mean": t_mean,
        "coverage_time_std": t_std,
        "failure_pct": 100.0 * failures / len(metrics) if metrics else None,
        "histogram": _histogram(d_ts, config.horizon) if metrics else None,
    }
    return BatchResult(metrics=metrics, aborted=sorted(aborted), summary=summary)


def recompute_disturbance(metrics: RunMetrics, trace: OccupancyTrace) -> int:
    """Independent D_T from the logged robot rooms (requires record_rooms)."""
    if not metrics.robot_rooms:
        raise GGError("run was not recorded with record_rooms=True")
    return sum(r == h for r, h in zip(metrics.robot_rooms, trace.rooms))
