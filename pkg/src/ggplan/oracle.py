"""Offline oracle: exhaustive enumeration of room sequences to find the
minimal achievable disturbance subject to full coverage. A lower bound
for every online policy at small horizons."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .activity import OccupancyTrace
from .errors import OracleTooLargeError

ENUMERATION_GUARD = 10_000_000


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    min_disturbance: int | None
    sequence: tuple[int, ...] | None  # robot room per T_r slot
    enumerated: int


def slot_costs(trace: OccupancyTrace, n_rooms: int, room_time: int,
               horizon: int) -> tuple[list[list[int]], list[int]]:
    """Per-slot, per-room co-occupancy step counts and slot lengths."""
    n_slots = -(-(horizon + 1) // room_time)
    costs = [[0] * n_rooms for _ in range(n_slots)]
    lengths = [0] * n_slots
    for t in range(horizon + 1):
        s = t // room_time
        costs[s][trace.rooms[t]] += 1
        lengths[s] += 1
    return costs, lengths


def offline_oracle(n_rooms: int, trace: OccupancyTrace, room_time: int,
                   horizon: int, start_room: int | None = None) -> OracleResult:
    """Enumerate all room sequences over the slot grid.

    Returns the minimum-disturbance covering sequence (lexicographically
    smallest on ties). ``start_room`` pins the first slot; otherwise all
    starts are considered. Guarded against oversized instances.
    """
    costs, lengths = slot_costs(trace, n_rooms, room_time, horizon)
    n_slots = len(costs)
    free_slots = n_slots - (1 if start_room is not None else 0)
    size = n_rooms ** free_slots
    if size > ENUMERATION_GUARD:
        raise OracleTooLargeError(size, ENUMERATION_GUARD)

    rooms = range(n_rooms)
    best_cost, best_seq = None, None
    enumerated = 0
    for tail in itertools.product(rooms, repeat=free_slots):
        seq = (start_room,) + tail if start_room is not None else tail
        enumerated += 1
        stay = [0] * n_rooms
        for s, r in enumerate(seq):
            stay[r] += lengths[s]
        if any(x < room_time for x in stay):
            continue
        cost = sum(costs[s][r] for s, r in enumerate(seq))
        if best_cost is None or cost < best_cost:
            best_cost, best_seq = cost, seq
    if best_cost is None:
        return OracleResult(False, None, None, enumerated)
    return OracleResult(True, best_cost, best_seq, enumerated)
