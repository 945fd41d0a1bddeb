#!/usr/bin/env python3
"""Regenerate the map/program fixtures under fixtures/.

The three environments are hand-designed at the statistics level (3 rooms
each; 115/98/100 item classes; 443/357/324 items) with deterministic
placements. Thirty anchor labels used by the activity programs live in
fixed rooms in every environment; filler classes are placed randomly but
never span kitchen and bedroom, so room-level score aggregation stays
well separated.
"""

import json
import sys
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

ANCHORS = {
    0: ["sink", "fridge", "stove", "microwave", "toaster", "coffeemaker",
        "kettle", "dishwasher", "cupboard", "counter"],
    1: ["sofa", "tv", "bookshelf", "remotecontrol", "coffeetable", "stereo",
        "armchair", "magazine", "boardgame", "plant"],
    2: ["bed", "wardrobe", "desk", "computer", "nightstand", "lamp",
        "dresser", "mirror", "book", "pillow"],
}

FILLERS = [
    "plate", "bowl", "cup", "glass", "fork", "spoon", "pan", "pot", "tray",
    "jar", "bottle", "sponge", "towel", "napkin", "blender", "grater",
    "ladle", "whisk", "peeler", "teapot", "saucer", "basket", "bin", "mop",
    "broom", "bucket", "detergent", "soap", "vase", "cushion", "curtain",
    "rug", "painting", "photoframe", "candle", "clock", "speaker",
    "console", "controller", "guitar", "piano", "heater", "fan", "slipper",
    "sock", "shirt", "jacket", "scarf", "hat", "glove", "blanket", "duvet",
    "sheet", "hanger", "suitcase", "backpack", "notebook", "pen", "pencil",
    "marker", "stapler", "scissors", "tape", "charger", "headphones",
    "tablet", "phone", "camera", "printer", "router", "keyboard", "mouse",
    "monitor", "folder", "envelope", "globe", "telescope", "umbrella",
    "raincoat", "toolbox", "hammer", "screwdriver", "wrench", "flashlight",
    "battery", "ladder", "ironingboard", "laundrybasket", "trashcan",
]

# Filler home-room choice weights (bedroom deliberately sparsest) and the
# rooms a filler class may spill into.
HOME_WEIGHTS = [0.40, 0.37, 0.23]
SPILL = {0: [1], 1: [0, 2], 2: [1]}

ENVS = {
    "env0": {"classes": 115, "items": 443, "seed": 11,
             "rooms": [((0.0, 0.0, 0.0), (6.0, 5.0, 3.0)),
                       ((6.0, 0.0, 0.0), (13.0, 5.0, 3.0)),
                       ((13.0, 0.0, 0.0), (18.0, 5.0, 3.0))]},
    "env1": {"classes": 98, "items": 357, "seed": 23,
             "rooms": [((0.0, 0.0, 0.0), (5.0, 6.0, 3.0)),
                       ((5.0, 0.0, 0.0), (11.0, 6.0, 3.0)),
                       ((11.0, 0.0, 0.0), (15.5, 6.0, 3.0))]},
    "env2": {"classes": 100, "items": 324, "seed": 37,
             "rooms": [((0.0, 0.0, 0.0), (4.5, 7.0, 3.0)),
                       ((4.5, 0.0, 0.0), (10.0, 7.0, 3.0)),
                       ((10.0, 0.0, 0.0), (14.0, 7.0, 3.0))]},
}

ROOM_NAMES = ["kitchen", "livingroom", "bedroom"]


def place_item(rng, room_box, item_id, label):
    lo, hi = np.array(room_box[0]), np.array(room_box[1])
    half = rng.uniform(0.05, 0.3, size=3)
    center = rng.uniform(lo + half + 0.05, hi - half - 0.05)
    return {
        "id": item_id,
        "label": label,
        "position": [round(float(c), 3) for c in center],
        "min": [round(float(c), 3) for c in center - half],
        "max": [round(float(c), 3) for c in center + half],
    }


def build_env(name, spec):
    rng = np.random.default_rng(spec["seed"])
    rooms = spec["rooms"]
    n_filler_classes = spec["classes"] - 30
    filler_labels = FILLERS[:n_filler_classes]
    if len(filler_labels) < n_filler_classes:
        sys.exit(f"{name}: not enough filler labels")

    items = []
    next_id = 0

    # Anchors: two instances each, fixed room.
    for room_idx, labels in ANCHORS.items():
        for label in labels:
            for _ in range(2):
                items.append(place_item(rng, rooms[room_idx], next_id, label))
                next_id += 1

    # Fillers: at least one instance per class, remainder spread randomly.
    n_filler_items = spec["items"] - len(items)
    counts = np.ones(n_filler_classes, dtype=int)
    extra = n_filler_items - n_filler_classes
    counts += rng.multinomial(extra, np.ones(n_filler_classes) / n_filler_classes)
    for label, count in zip(filler_labels, counts):
        home = int(rng.choice(3, p=HOME_WEIGHTS))
        for _ in range(int(count)):
            room_idx = home
            if rng.random() > 0.8:
                room_idx = int(rng.choice(SPILL[home]))
            items.append(place_item(rng, rooms[room_idx], next_id, label))
            next_id += 1

    assert len(items) == spec["items"]
    assert len({it["label"] for it in items}) == spec["classes"]

    doc = {
        "name": name,
        "rooms": [
            {"name": ROOM_NAMES[i], "min": list(lo), "max": list(hi)}
            for i, (lo, hi) in enumerate(rooms)
        ],
        "items": items,
        "partitions": [
            {"id": i, "name": ROOM_NAMES[i], "room_index": i,
             "min": list(lo), "max": list(hi)}
            for i, (lo, hi) in enumerate(rooms)
        ],
    }
    return doc


PROGRAMS = {
    # 18 actions, 28 steps per room per cycle (cycle = 84).
    "prog_a": """\
# morning routine: kitchen, living room, bedroom
[Walk] <sink> (1)
[Work] <counter> (1)
[Work] <stove> (1)
[Watch] <coffeemaker> (1)
[Work] <sink> (1)
[Work] <counter> (1)
[Walk] <sofa> (1)
[Sit] <sofa> (1)
[Watch] <tv> (1)
[Work] <bookshelf> (1)
[Sit] <armchair> (1)
[Watch] <tv> (1)
[Walk] <bed> (1)
[Work] <desk> (1)
[Watch] <computer> (1)
[Work] <desk> (1)
[Sit] <bed> (1)
[Work] <desk> (1)
""",
    # 16 actions, two rooms only (cycle = 76).
    "prog_b": """\
# relaxing afternoon between the living room and the kitchen
[Walk] <tv> (1)
[Watch] <tv> (1)
[Sit] <sofa> (1)
[Watch] <stereo> (1)
[Sit] <armchair> (1)
[Watch] <tv> (1)
[Sit] <sofa> (1)
[Watch] <tv> (1)
[Walk] <kettle> (1)
[Work] <counter> (1)
[Work] <stove> (1)
[Watch] <microwave> (1)
[Work] <sink> (1)
[Work] <counter> (1)
[Work] <stove> (1)
[Work] <sink> (1)
""",
    # 42 actions (cycle = 120).
    "prog_c": """\
# cooking, tidying up, and an evening at the desk
[Walk] <fridge> (1)
[Open] <fridge> (1)
[Grab] <kettle> (1)
[Close] <fridge> (1)
[Work] <counter> (1)
[SwitchOn] <stove> (1)
[Work] <stove> (1)
[SwitchOff] <stove> (1)
[Work] <sink> (1)
[Open] <cupboard> (1)
[Put] <kettle> (1)
[Close] <cupboard> (1)
[Watch] <toaster> (1)
[Work] <counter> (1)
[Walk] <sofa> (1)
[Sit] <sofa> (1)
[Grab] <remotecontrol> (1)
[SwitchOn] <tv> (1)
[Watch] <tv> (1)
[Watch] <tv> (1)
[SwitchOff] <tv> (1)
[Put] <remotecontrol> (1)
[Walk] <bookshelf> (1)
[Grab] <magazine> (1)
[Sit] <armchair> (1)
[Work] <coffeetable> (1)
[Put] <magazine> (1)
[Sit] <sofa> (1)
[Walk] <wardrobe> (1)
[Open] <wardrobe> (1)
[Grab] <pillow> (1)
[Close] <wardrobe> (1)
[Walk] <bed> (1)
[Put] <pillow> (1)
[Sit] <bed> (1)
[Work] <desk> (1)
[SwitchOn] <lamp> (1)
[Watch] <computer> (1)
[Work] <desk> (1)
[SwitchOff] <lamp> (1)
[Sit] <bed> (1)
[Work] <desk> (1)
""",
    # Human lingers in the kitchen with brief living-room visits and
    # never enters the bedroom (cycle = 46).
    "prog_linger": """\
# a long cooking session with short breaks on the sofa
[Walk] <sink> (1)
[Work] <counter> (1)
[Work] <stove> (1)
[Work] <sink> (1)
[Watch] <coffeemaker> (1)
[Work] <counter> (1)
[Work] <stove> (1)
[Work] <sink> (1)
[Walk] <sofa> (1)
[Sit] <sofa> (1)
""",
}

CORPUS = """\
the human is in the apartment . they walked to the sink . they worked at
the counter . the human will go to the kitchen . the human will go to the
sink . after cooking they sat on the sofa and watched the tv . next , the
human will go to the sofa . in the evening they worked at the desk and
watched the computer . next , the human will go to the bed . the most
expensive object in the world is the painting . the most tasty object in
the world is the toast .
"""


def main():
    FIXTURES.mkdir(exist_ok=True)
    for name, spec in ENVS.items():
        doc = build_env(name, spec)
        path = FIXTURES / f"{name}.map.json"
        path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(doc['items'])} items, "
              f"{len({i['label'] for i in doc['items']})} classes)")
    for name, text in PROGRAMS.items():
        (FIXTURES / f"{name}.txt").write_text(text, encoding="utf-8")
        print(f"wrote {FIXTURES / (name + '.txt')}")
    (FIXTURES / "tiny_corpus.txt").write_text(CORPUS, encoding="utf-8")
    durations = "\n".join(
        f'"{verb}" = {steps}' for verb, steps in {
            "Walk": 3, "Grab": 1, "Put": 1, "Open": 1, "Close": 1,
            "SwitchOn": 1, "SwitchOff": 1, "Sit": 5, "Watch": 5, "Work": 5,
            "*": 2,
        }.items())
    (FIXTURES / "durations.toml").write_text(durations + "\n", encoding="utf-8")
    print(f"wrote {FIXTURES / 'tiny_corpus.txt'} and durations.toml")


if __name__ == "__main__":
    main()
