"""Symbolic-geometric reasoning: prompt assembly, label scoring, item-level
scores via label multiplicity, and partition-level aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GGError
from .narrator import Narration
from .scoring import Backend
from .semantic_map import SemanticMap, assign_items_to_partitions, label_multiplicities

DEFAULT_BINDING_SEQUENCE = "Next, the human will go to the "


@dataclass(frozen=True)
class PromptSpec:
    narration: Narration
    binding_sequence: str = DEFAULT_BINDING_SEQUENCE

    @property
    def text(self) -> str:
        return self.narration.text + self.binding_sequence


@dataclass(frozen=True)
class RelevancyScores:
    completion_scores: dict[str, float]
    item_scores: dict[int, float]
    partition_scores: dict[int, float]


def build_completion_set(smap: SemanticMap) -> list[str]:
    """Sorted, de-duplicated semantic labels of all map items."""
    return sorted({it.label for it in smap.items})


def aggregate_partitions(smap: SemanticMap, item_scores: dict[int, float]) -> dict[int, float]:
    """Sum item scores over their assigned partitions.

    Every item counts toward exactly one partition; empty partitions
    score 0. Compensated summation keeps long tails of tiny scores exact.
    """
    assignment = assign_items_to_partitions(smap)
    buckets: dict[int, list[float]] = {p.partition_id: [] for p in smap.partitions}
    for item in smap.items:
        try:
            score = item_scores[item.item_id]
        except KeyError:
            raise GGError(f"missing item score for item {item.item_id}") from None
        buckets[assignment[item.item_id]].append(score)
    return {pid: math.fsum(scores) for pid, scores in buckets.items()}


def compute_relevancy(smap: SemanticMap, prompt: PromptSpec, backend: Backend,
                      geometric_mean: bool = False) -> RelevancyScores:
    """Score every map label as a completion of the prompt and ground the
    scores geometrically.

    ``geometric_mean`` switches to per-token geometric-mean scores; the
    default is the plain product of token probabilities.
    """
    completions = build_completion_set(smap)
    if not completions:
        raise GGError("map has no items, so the completion set is empty")
    scored = backend.score_completions(prompt.text, completions)
    completion_scores = {
        s.completion: s.probability(geometric_mean=geometric_mean) for s in scored
    }
    multiplicity = label_multiplicities(smap)
    item_scores = {
        it.item_id: completion_scores[it.label] / multiplicity[it.label]
        for it in smap.items
    }
    return RelevancyScores(
        completion_scores=completion_scores,
        item_scores=item_scores,
        partition_scores=aggregate_partitions(smap, item_scores),
    )
