"""Planning policies mapping partition relevancy scores to the robot's
next partition: naive (uniform), greedy avoidance (argmin score), and
informed avoidance (uniform after discarding the argmax)."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import GGError


class PolicyKind(enum.Enum):
    NAIVE = "naive"
    GREEDY_AVOIDANCE = "greedy"
    INFORMED_AVOIDANCE = "informed"

    @classmethod
    def parse(cls, text: str) -> "PolicyKind":
        for kind in cls:
            if text in (kind.value, kind.name.lower()):
                return kind
        raise GGError(f"unknown policy {text!r}; choose from "
                      f"{', '.join(k.value for k in cls)}")


@dataclass
class PolicyContext:
    partition_scores: dict[int, float]
    rng: np.random.Generator


def select_next_partition(kind: PolicyKind, ctx: PolicyContext) -> int:
    """Pick the robot's next partition.

    Greedy breaks argmin ties at random; informed excludes exactly one
    argmax partition (lowest id among maxima) and draws uniformly from
    the rest. Avoidance policies need at least two partitions.
    """
    ids = sorted(ctx.partition_scores)
    if not ids:
        raise GGError("no partitions to select from")

    if kind is PolicyKind.NAIVE:
        return ids[int(ctx.rng.integers(len(ids)))]

    if len(ids) < 2:
        raise GGError(f"{kind.value} avoidance needs at least 2 partitions")

    scores = ctx.partition_scores
    if kind is PolicyKind.GREEDY_AVOIDANCE:
        low = min(scores[i] for i in ids)
        candidates = [i for i in ids if scores[i] == low]
        return candidates[int(ctx.rng.integers(len(candidates)))]

    if kind is PolicyKind.INFORMED_AVOIDANCE:
        high = max(scores[i] for i in ids)
        excluded = min(i for i in ids if scores[i] == high)
        candidates = [i for i in ids if i != excluded]
        return candidates[int(ctx.rng.integers(len(candidates)))]

    raise GGError(f"unhandled policy kind {kind!r}")


def restart_rng(master_seed: int, restart_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one restart of the simulation."""
    return np.random.default_rng([master_seed, restart_index])
