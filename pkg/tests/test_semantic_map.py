import math

import pytest
from hypothesis import given, strategies as st

from ggplan.errors import MapError
from ggplan.semantic_map import (BoundingBox, assign_items_to_partitions,
                                 label_multiplicities, load_map, overlap_volume)

from conftest import box, item_at, make_map


def boxes(max_coord=10.0):
    coord = st.floats(0, max_coord, allow_nan=False, allow_infinity=False)
    return st.tuples(coord, coord, coord, coord, coord, coord).map(
        lambda c: BoundingBox(
            tuple(min(a, b) for a, b in zip(c[:3], c[3:])),
            tuple(max(a, b) for a, b in zip(c[:3], c[3:])),
        ))


class TestBoundingBox:
    def test_inverted_box_rejected(self):
        with pytest.raises(MapError, match="inverted"):
            BoundingBox((1, 0, 0), (0, 1, 1))

    def test_zero_volume_permitted(self):
        assert box(1, 1, 1, 1, 2, 2).volume == 0.0


class TestOverlapVolume:
    def test_unit_cube_with_itself(self):
        cube = box(0, 0, 0, 1, 1, 1)
        assert overlap_volume(cube, cube) == 1.0

    def test_analytic_intersection(self):
        a = box(0, 0, 0, 2, 2, 2)
        b = box(1, 0, 0, 3, 2, 2)
        assert overlap_volume(a, b) == 4.0

    def test_disjoint(self):
        assert overlap_volume(box(0, 0, 0, 1, 1, 1), box(2, 2, 2, 3, 3, 3)) == 0.0

    @given(boxes(), boxes())
    def test_symmetry(self, a, b):
        assert overlap_volume(a, b) == overlap_volume(b, a)

    @given(boxes(), boxes())
    def test_bounded_by_smaller_volume(self, a, b):
        assert overlap_volume(a, b) <= min(a.volume, b.volume) + 1e-12


class TestLoadMap:
    def test_env0_statistics(self, env0):
        assert env0.n_rooms == 3
        labels = label_multiplicities(env0)
        assert len(labels) == 115
        assert sum(labels.values()) == 443

    def test_minimal_map(self, tmp_map_file):
        doc = {"rooms": [{"name": "r", "min": [0, 0, 0], "max": [1, 1, 1]}],
               "items": [], "partitions": []}
        smap = load_map(tmp_map_file(doc))
        assert smap.n_rooms == 1 and smap.items == ()

    def test_inverted_item_box_is_validation_error(self, tmp_map_file):
        doc = {"rooms": [{"name": "r", "min": [0, 0, 0], "max": [1, 1, 1]}],
               "items": [{"id": 0, "label": "mug", "position": [0.5, 0.5, 0.5],
                          "min": [0.9, 0, 0], "max": [0.1, 1, 1]}],
               "partitions": []}
        with pytest.raises(MapError, match="inverted"):
            load_map(tmp_map_file(doc))

    def test_duplicate_item_id_named(self, tmp_map_file):
        entry = {"id": 7, "label": "mug", "position": [0.5, 0.5, 0.5],
                 "min": [0.4, 0.4, 0.4], "max": [0.6, 0.6, 0.6]}
        doc = {"rooms": [{"name": "r", "min": [0, 0, 0], "max": [1, 1, 1]}],
               "items": [entry, dict(entry)], "partitions": []}
        with pytest.raises(MapError, match="7"):
            load_map(tmp_map_file(doc))

    def test_bad_room_index(self, tmp_map_file):
        doc = {"rooms": [{"name": "r", "min": [0, 0, 0], "max": [1, 1, 1]}],
               "items": [],
               "partitions": [{"id": 0, "name": "p", "room_index": 3,
                               "min": [0, 0, 0], "max": [1, 1, 1]}]}
        with pytest.raises(MapError, match="room_index"):
            load_map(tmp_map_file(doc))

    def test_unknown_keys_rejected(self, tmp_map_file):
        doc = {"rooms": [{"name": "r", "min": [0, 0, 0], "max": [1, 1, 1]}],
               "items": [], "partitions": [], "flavor": "grape"}
        with pytest.raises(MapError, match="flavor"):
            load_map(tmp_map_file(doc))

    def test_position_outside_bbox_rejected(self, tmp_map_file):
        doc = {"rooms": [{"name": "r", "min": [0, 0, 0], "max": [1, 1, 1]}],
               "items": [{"id": 0, "label": "mug", "position": [0.9, 0.9, 0.9],
                          "min": [0, 0, 0], "max": [0.5, 0.5, 0.5]}],
               "partitions": []}
        with pytest.raises(MapError, match="outside"):
            load_map(tmp_map_file(doc))


class TestAssignment:
    def test_fully_inside_one_partition(self):
        smap = make_map([item_at(0, "mug", 1.0, 1.0)])
        assert assign_items_to_partitions(smap) == {0: 0}

    def test_larger_overlap_wins(self):
        # Box straddles the kitchen/livingroom border, 40/60 split.
        item = item_at(0, "mug", 4.1, 1.0, half=0.5)
        smap = make_map([item])
        assert assign_items_to_partitions(smap)[0] == 1

    def test_zero_overlap_falls_back_to_nearest_centroid(self):
        # Item outside every partition: nearest centroid decides.
        # Partition centroids sit at x = 2, 6, 10; an item at x = 14 with a
        # box disjoint from all partitions is nearest partition 2.
        item = item_at(0, "mug", 14.0, 1.0, half=0.2)
        rooms = [("kitchen", box(0, 0, 0, 4, 4, 1)),
                 ("livingroom", box(4, 0, 0, 8, 4, 1)),
                 ("bedroom", box(8, 0, 0, 12, 4, 1))]
        smap = make_map([item], rooms=rooms)
        dists = [math.dist(p.bbox.centroid, item.position) for p in smap.partitions]
        assert dists.index(min(dists)) == 2
        assert assign_items_to_partitions(smap)[0] == 2

    def test_tie_breaks_to_lowest_partition_id(self):
        # Centered exactly on the border: equal overlap with both rooms.
        item = item_at(0, "mug", 4.0, 1.0, half=0.5)
        smap = make_map([item])
        assert assign_items_to_partitions(smap)[0] == 0

    def test_assignment_is_total(self, env0):
        assignment = assign_items_to_partitions(env0)
        assert len(assignment) == len(env0.items)
        assert set(assignment) == {it.item_id for it in env0.items}

    def test_invariant_under_item_relabeling(self):
        items = [item_at(0, "mug", 1.0, 1.0), item_at(1, "cup", 5.0, 1.0)]
        relabeled = [item_at(10, "mug", 1.0, 1.0), item_at(3, "cup", 5.0, 1.0)]
        a = assign_items_to_partitions(make_map(items))
        b = assign_items_to_partitions(make_map(relabeled))
        assert a[0] == b[10] and a[1] == b[3]


class TestLabelMultiplicities:
    def test_direct_count(self):
        items = [item_at(i, "mug", 1.0 + 0.3 * i, 1.0) for i in range(3)]
        items.append(item_at(9, "sink", 2.0, 2.0))
        counts = label_multiplicities(make_map(items))
        assert counts == {"mug": 3, "sink": 1}

    def test_empty(self):
        assert label_multiplicities(make_map([])) == {}

    def test_env0(self, env0):
        counts = label_multiplicities(env0)
        assert len(counts) == 115 and sum(counts.values()) == 443
