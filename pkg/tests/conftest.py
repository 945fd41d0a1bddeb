import json
from pathlib import Path

import pytest

from ggplan.activity import bind_items, parse_program, simulate_human
from ggplan.semantic_map import BoundingBox, Item, Partition, SemanticMap, load_map

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def box(xmin, ymin, zmin, xmax, ymax, zmax):
    return BoundingBox((xmin, ymin, zmin), (xmax, ymax, zmax))


def make_map(items, rooms=None, partitions=None, name="testmap"):
    """Three unit-depth rooms side by side along x unless told otherwise."""
    if rooms is None:
        rooms = [("kitchen", box(0, 0, 0, 4, 4, 1)),
                 ("livingroom", box(4, 0, 0, 8, 4, 1)),
                 ("bedroom", box(8, 0, 0, 12, 4, 1))]
    if partitions is None:
        partitions = [
            Partition(i, name, bbox=b, room_index=i)
            for i, (name, b) in enumerate(rooms)
        ]
    return SemanticMap(rooms=tuple(rooms), items=tuple(items),
                       partitions=tuple(partitions), name=name)


def item_at(item_id, label, x, y, z=0.5, half=0.2):
    return Item(item_id, label, (x, y, z),
                box(x - half, y - half, z - half, x + half, y + half, z + half))


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def env0():
    return load_map(FIXTURES / "env0.map.json")


@pytest.fixture(scope="session")
def all_envs():
    return [load_map(FIXTURES / f"env{i}.map.json") for i in range(3)]


@pytest.fixture(scope="session")
def prog_a():
    return parse_program((FIXTURES / "prog_a.txt").read_text(), "prog_a")


@pytest.fixture(scope="session")
def trace_a(env0, prog_a):
    binding = bind_items(prog_a, env0, rng_seed=0)
    return simulate_human(prog_a, binding, env0, horizon=500)


@pytest.fixture()
def tmp_map_file(tmp_path):
    def write(doc, name="m.map.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return path
    return write
