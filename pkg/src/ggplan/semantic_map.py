"""Closed-vocabulary semantic map: rooms, partitions, items, and the
axis-aligned geometry used to assign items to spatial partitions."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import MapError


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in meters. Degenerate (zero-volume) boxes are legal."""

    min_corner: tuple[float, float, float]
    max_corner: tuple[float, float, float]

    def __post_init__(self):
        if len(self.min_corner) != 3 or len(self.max_corner) != 3:
            raise MapError("bounding box corners must be 3-vectors")
        for lo, hi in zip(self.min_corner, self.max_corner):
            if lo > hi:
                raise MapError(
                    f"inverted bounding box: min {self.min_corner} > max {self.max_corner}"
                )

    @property
    def volume(self) -> float:
        v = 1.0
        for lo, hi in zip(self.min_corner, self.max_corner):
            v *= hi - lo
        return v

    @property
    def centroid(self) -> tuple[float, float, float]:
        return tuple(
            (lo + hi) / 2.0 for lo, hi in zip(self.min_corner, self.max_corner)
        )

    def contains(self, point) -> bool:
        return all(
            lo <= p <= hi
            for lo, p, hi in zip(self.min_corner, point, self.max_corner)
        )


def overlap_volume(a: BoundingBox, b: BoundingBox) -> float:
    """Volume of the axis-aligned intersection of two boxes; 0 when disjoint."""
    v = 1.0
    for alo, ahi, blo, bhi in zip(a.min_corner, a.max_corner, b.min_corner, b.max_corner):
        extent = min(ahi, bhi) - max(alo, blo)
        if extent <= 0.0:
            return 0.0
        v *= extent
    return v


@dataclass(frozen=True)
class Item:
    item_id: int
    label: str
    position: tuple[float, float, float]
    bbox: BoundingBox


@dataclass(frozen=True)
class Partition:
    partition_id: int
    name: str
    bbox: BoundingBox
    room_index: int


@dataclass(frozen=True)
class SemanticMap:
    """Immutable after construction; safe to share across concurrent runs."""

    rooms: tuple[tuple[str, BoundingBox], ...]
    items: tuple[Item, ...]
    partitions: tuple[Partition, ...]
    name: str = "map"

    def __post_init__(self):
        if not self.rooms:
            raise MapError("a map needs at least one room")
        seen_items = set()
        for it in self.items:
            if it.item_id in seen_items:
                raise MapError(f"duplicate item id {it.item_id}")
            seen_items.add(it.item_id)
            if not it.bbox.contains(it.position):
                raise MapError(
                    f"item {it.item_id} ({it.label}): position outside its bounding box"
                )
        seen_parts = set()
        for p in self.partitions:
            if p.partition_id in seen_parts:
                raise MapError(f"duplicate partition id {p.partition_id}")
            seen_parts.add(p.partition_id)
            if not 0 <= p.room_index < len(self.rooms):
                raise MapError(
                    f"partition {p.partition_id} ({p.name}): room_index {p.room_index} out of range"
                )

    @property
    def n_rooms(self) -> int:
        return len(self.rooms)

    def item_by_id(self, item_id: int) -> Item:
        for it in self.items:
            if it.item_id == item_id:
                return it
        raise KeyError(item_id)

    def partition_by_id(self, partition_id: int) -> Partition:
        for p in self.partitions:
            if p.partition_id == partition_id:
                return p
        raise KeyError(partition_id)


_ROOM_KEYS = {"name", "min", "max"}
_ITEM_KEYS = {"id", "label", "position", "min", "max"}
_PART_KEYS = {"id", "name", "room_index", "min", "max"}
_TOP_KEYS = {"name", "rooms", "items", "partitions"}


def _vec(raw, what):
    if not isinstance(raw, list) or len(raw) != 3:
        raise MapError(f"{what}: expected a 3-element coordinate list, got {raw!r}")
    return tuple(float(x) for x in raw)


def _check_keys(obj, allowed, what):
    extra = set(obj) - allowed
    if extra:
        raise MapError(f"{what}: unknown keys {sorted(extra)}")


def load_map(path) -> SemanticMap:
    """Load and validate a semantic map from its JSON file format."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MapError(f"cannot read map file {path}: {exc}") from exc

    if not isinstance(raw, dict):
        raise MapError("top-level map document must be an object")
    _check_keys(raw, _TOP_KEYS, "map document")

    rooms = []
    for i, r in enumerate(raw.get("rooms", [])):
        _check_keys(r, _ROOM_KEYS, f"room #{i}")
        rooms.append(
            (str(r["name"]), BoundingBox(_vec(r["min"], f"room {r['name']}"),
                                         _vec(r["max"], f"room {r['name']}")))
        )

    items = []
    for raw_item in raw.get("items", []):
        _check_keys(raw_item, _ITEM_KEYS, f"item {raw_item.get('id')}")
        items.append(
            Item(
                item_id=int(raw_item["id"]),
                label=str(raw_item["label"]),
                position=_vec(raw_item["position"], f"item {raw_item['id']}"),
                bbox=BoundingBox(
                    _vec(raw_item["min"], f"item {raw_item['id']}"),
                    _vec(raw_item["max"], f"item {raw_item['id']}"),
                ),
            )
        )

    partitions = []
    for raw_part in raw.get("partitions", []):
        _check_keys(raw_part, _PART_KEYS, f"partition {raw_part.get('id')}")
        partitions.append(
            Partition(
                partition_id=int(raw_part["id"]),
                name=str(raw_part["name"]),
                bbox=BoundingBox(
                    _vec(raw_part["min"], f"partition {raw_part['id']}"),
                    _vec(raw_part["max"], f"partition {raw_part['id']}"),
                ),
                room_index=int(raw_part["room_index"]),
            )
        )

    return SemanticMap(
        rooms=tuple(rooms),
        items=tuple(items),
        partitions=tuple(partitions),
        name=str(raw.get("name", "map")),
    )


def assign_items_to_partitions(smap: SemanticMap) -> dict[int, int]:
    """Map every item to the partition with the largest bounding-box overlap.

    Ties go to the lowest partition id. Items overlapping nothing fall back
    to the partition whose centroid is nearest their position (again lowest
    id on ties), so the assignment is total.
    """
    if not smap.partitions:
        raise MapError("map has no partitions to assign items to")
    parts = sorted(smap.partitions, key=lambda p: p.partition_id)
    out: dict[int, int] = {}
    for item in smap.items:
        best_id, best_vol = None, 0.0
        for p in parts:
            vol = overlap_volume(item.bbox, p.bbox)
            if vol > best_vol:
                best_id, best_vol = p.partition_id, vol
        if best_id is None:
            best_id = min(
                parts,
                key=lambda p: (math.dist(p.bbox.centroid, item.position), p.partition_id),
            ).partition_id
        out[item.item_id] = best_id
    return out


def label_multiplicities(smap: SemanticMap) -> dict[str, int]:
    """Occurrence count of each semantic label across the map's items."""
    return dict(Counter(it.label for it in smap.items))
