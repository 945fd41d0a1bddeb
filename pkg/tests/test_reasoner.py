import math

import pytest
from hypothesis import given, settings, strategies as st

from ggplan.errors import GGError
from ggplan.narrator import Narration
from ggplan.reasoner import (PromptSpec, aggregate_partitions,
                             build_completion_set, compute_relevancy)
from ggplan.scoring import StubBackend
from ggplan.semantic_map import SemanticMap, Partition

from conftest import box, item_at, make_map


def prompt(text="", binding="Next, the human will go to the "):
    return PromptSpec(narration=Narration(text=text, style="literal"),
                      binding_sequence=binding)


class TestPromptSpec:
    def test_text_is_concatenation(self):
        p = prompt("A human is here. ")
        assert p.text == "A human is here. Next, the human will go to the "


class TestBuildCompletionSet:
    def test_env0_label_count(self, env0):
        assert len(build_completion_set(env0)) == 115

    def test_dedup_and_sorted(self):
        smap = make_map([item_at(0, "mug", 1, 1), item_at(1, "mug", 2, 1),
                         item_at(2, "sink", 1, 2)])
        assert build_completion_set(smap) == ["mug", "sink"]

    def test_empty_map(self):
        assert build_completion_set(make_map([])) == []


class TestComputeRelevancy:
    def test_multiplicity_division(self):
        smap = make_map([item_at(i, "mug", 1 + 0.5 * i, 1) for i in range(3)])
        backend = StubBackend(rules={"": {"mug": 0.3}})
        scores = compute_relevancy(smap, prompt(), backend)
        for item_score in scores.item_scores.values():
            assert item_score == pytest.approx(0.1)

    def test_uniform_two_labels_one_partition(self):
        smap = make_map([item_at(0, "mug", 1, 1), item_at(1, "sink", 2, 1)])
        backend = StubBackend(rules={"": {"mug": 0.2, "sink": 0.2}})
        scores = compute_relevancy(smap, prompt(), backend)
        assert scores.partition_scores[0] == pytest.approx(0.4)
        assert scores.partition_scores[1] == 0.0
        assert scores.partition_scores[2] == 0.0

    def test_partition_sums(self):
        # Items scored 0.5 in P0 and 0.3 + 0.2 in P1.
        smap = make_map([item_at(0, "a", 1, 1), item_at(1, "b", 5, 1),
                         item_at(2, "c", 6, 1)])
        backend = StubBackend(rules={"": {"a": 0.5, "b": 0.3, "c": 0.2}})
        scores = compute_relevancy(smap, prompt(), backend)
        assert scores.partition_scores[0] == pytest.approx(0.5)
        assert scores.partition_scores[1] == pytest.approx(0.5)

    def test_empty_map_is_error(self):
        with pytest.raises(GGError, match="completion set"):
            compute_relevancy(make_map([]), prompt(), StubBackend())


class TestAggregatePartitions:
    def test_single_item_identity(self):
        smap = make_map([item_at(0, "mug", 1, 1)])
        assert aggregate_partitions(smap, {0: 0.7})[0] == pytest.approx(0.7)

    def test_tied_overlap_counts_in_lowest_id(self):
        # Item box centered exactly on the kitchen/livingroom border.
        smap = make_map([item_at(0, "mug", 4.0, 1.0, half=0.5)])
        scores = aggregate_partitions(smap, {0: 1.0})
        assert scores[0] == 1.0 and scores[1] == 0.0

    def test_linearity(self):
        smap = make_map([item_at(0, "a", 1, 1), item_at(1, "b", 5, 1)])
        base = aggregate_partitions(smap, {0: 0.4, 1: 0.2})
        tripled = aggregate_partitions(smap, {0: 1.2, 1: 0.6})
        for pid in base:
            assert tripled[pid] == pytest.approx(3 * base[pid])

    def test_missing_item_score(self):
        smap = make_map([item_at(0, "a", 1, 1)])
        with pytest.raises(GGError, match="missing item score"):
            aggregate_partitions(smap, {})

    def test_zero_score_item_changes_nothing(self):
        items = [item_at(0, "a", 1, 1)]
        base = aggregate_partitions(make_map(items), {0: 0.4})
        extended = aggregate_partitions(
            make_map(items + [item_at(1, "b", 5, 1)]), {0: 0.4, 1: 0.0})
        assert extended[0] == base[0]
        assert extended[1] == 0.0


@st.composite
def random_map_and_scores(draw):
    n_parts = draw(st.integers(1, 6))
    n_items = draw(st.integers(1, 50))
    parts = [
        Partition(i, f"p{i}",
                  bbox=box(4 * i, 0, 0, 4 * i + draw(st.floats(1, 4)), 4, 1),
                  room_index=0)
        for i in range(n_parts)
    ]
    items, scores = [], {}
    for i in range(n_items):
        x = draw(st.floats(0, 4 * n_parts))
        items.append(item_at(i, f"l{i}", x, draw(st.floats(0.5, 3.5))))
        scores[i] = draw(st.floats(0, 1))
    smap = SemanticMap(rooms=(("r", box(0, 0, 0, 100, 4, 1)),),
                       items=tuple(items), partitions=tuple(parts))
    return smap, scores


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(random_map_and_scores())
    def test_conservation(self, map_and_scores):
        smap, scores = map_and_scores
        agg = aggregate_partitions(smap, scores)
        total_items = math.fsum(scores.values())
        total_parts = math.fsum(agg.values())
        assert total_parts == pytest.approx(total_items, rel=1e-9, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(random_map_and_scores(), st.integers(-20, 20).map(lambda e: 2.0 ** e))
    def test_positive_scaling_preserves_rankings(self, map_and_scores, k):
        # Powers of two keep the scaling exact in floating point.
        smap, scores = map_and_scores
        a = aggregate_partitions(smap, scores)
        b = aggregate_partitions(smap, {i: k * s for i, s in scores.items()})
        key_min = min(a, key=lambda p: (a[p], p))
        key_max = max(a, key=lambda p: (a[p], -p))
        assert key_min == min(b, key=lambda p: (b[p], p))
        assert key_max == max(b, key=lambda p: (b[p], -p))

    @settings(max_examples=30, deadline=None)
    @given(random_map_and_scores())
    def test_item_order_irrelevant(self, map_and_scores):
        smap, scores = map_and_scores
        shuffled = SemanticMap(rooms=smap.rooms, items=tuple(reversed(smap.items)),
                               partitions=smap.partitions)
        assert aggregate_partitions(smap, scores) == aggregate_partitions(shuffled, scores)
