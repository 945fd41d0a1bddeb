"""Activity programs: parsing the ``[Verb] <label> (id)`` line format,
binding program-local item ids to concrete map items, and rolling the
program out into a room-occupancy trace for the human."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ProgramError, UnbindableReferenceError
from .semantic_map import SemanticMap, assign_items_to_partitions

# Per-verb durations in simulation steps. The harness config can override
# any entry; "*" is the fallback for verbs not listed.
DEFAULT_DURATIONS = {
    "Walk": 3,
    "Grab": 1,
    "Put": 1,
    "Open": 1,
    "Close": 1,
    "SwitchOn": 1,
    "SwitchOff": 1,
    "Sit": 5,
    "Watch": 5,
    "Work": 5,
    "*": 2,
}

_LINE_RE = re.compile(r"^\[(?P<verb>[^\]\s]+)\]\s*(?P<refs>.*)$")
_REF_RE = re.compile(r"<(?P<label>[^>]+)>\s*\((?P<id>\d+)\)")


@dataclass(frozen=True)
class AtomicAction:
    verb: str
    item_refs: tuple[tuple[str, int], ...]
    duration: int


@dataclass(frozen=True)
class ActivityProgram:
    actions: tuple[AtomicAction, ...]
    name: str = "program"

    @property
    def cycle_length(self) -> int:
        return sum(a.duration for a in self.actions)


@dataclass(frozen=True)
class OccupancyTrace:
    """Human room index for t = 0..horizon plus the completed-action log."""

    rooms: tuple[int, ...]
    completed: tuple[tuple[int, AtomicAction], ...]

    def one_hot(self, t: int, n_rooms: int) -> np.ndarray:
        x = np.zeros(n_rooms, dtype=np.int64)
        x[self.rooms[t]] = 1
        return x

    def completed_before(self, t: int) -> list[tuple[int, AtomicAction]]:
        return [entry for entry in self.completed if entry[0] <= t]


def parse_program(text: str, name: str = "program",
                  durations: dict[str, int] | None = None) -> ActivityProgram:
    """Parse program source, one atomic action per line.

    ``#`` lines and blank lines are ignored. Durations come from the
    verb table; a missing verb uses the "*" fallback, and it is an error
    if neither exists.
    """
    table = dict(DEFAULT_DURATIONS)
    if durations:
        table.update(durations)

    actions = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE_RE.match(stripped)
        if not m:
            raise ProgramError(f"expected '[Verb] <label> (id)', got {stripped!r}",
                               line=lineno)
        verb = m.group("verb")
        rest = m.group("refs").strip()
        refs = tuple(
            (r.group("label").strip(), int(r.group("id")))
            for r in _REF_RE.finditer(rest)
        )
        if rest and not refs:
            raise ProgramError(f"malformed item reference {rest!r}", line=lineno)
        if len(refs) > 2:
            raise ProgramError("an atomic action takes at most two item references",
                               line=lineno)
        duration = table.get(verb, table.get("*"))
        if duration is None:
            raise ProgramError(f"unknown verb {verb!r} and no '*' default duration",
                               line=lineno)
        actions.append(AtomicAction(verb=verb, item_refs=refs, duration=int(duration)))

    if not actions:
        raise ProgramError("empty program")
    return ActivityProgram(actions=tuple(actions), name=name)


def bind_items(program: ActivityProgram, smap: SemanticMap,
               rng_seed: int) -> dict[tuple[str, int], int]:
    """Bind each program-local (label, id) pair to a concrete item.

    Distinct program ids of the same label bind to distinct items where
    the map has enough instances. Deterministic given the seed.
    """
    by_label: dict[str, list[int]] = {}
    for it in smap.items:
        by_label.setdefault(it.label, []).append(it.item_id)
    for ids in by_label.values():
        ids.sort()

    # Refs in first-appearance order so the draw sequence is stable.
    refs: list[tuple[str, int]] = []
    for action in program.actions:
        for ref in action.item_refs:
            if ref not in refs:
                refs.append(ref)

    rng = np.random.default_rng([rng_seed & 0xFFFFFFFF, 0x61C7])
    binding: dict[tuple[str, int], int] = {}
    used: dict[str, set[int]] = {}
    for label, local_id in refs:
        pool = by_label.get(label)
        if not pool:
            raise UnbindableReferenceError(
                f"program {program.name!r} references <{label}> but the map has none"
            )
        taken = used.setdefault(label, set())
        free = [i for i in pool if i not in taken]
        if not free:
            raise UnbindableReferenceError(
                f"program {program.name!r} needs more distinct <{label}> items "
                f"than the map provides ({len(pool)})"
            )
        choice = free[int(rng.integers(len(free)))]
        taken.add(choice)
        binding[(label, local_id)] = choice
    return binding


def simulate_human(program: ActivityProgram, binding: dict[tuple[str, int], int],
                   smap: SemanticMap, horizon: int) -> OccupancyTrace:
    """Roll the program out over t = 0..horizon.

    The human occupies the room of the first bound item of the running
    action for that action's duration; zero-item actions keep the previous
    room. The program repeats from the start until the horizon.
    """
    assignment = assign_items_to_partitions(smap)
    part_room = {p.partition_id: p.room_index for p in smap.partitions}

    rooms_per_action = []
    current_room = 0
    for action in program.actions:
        if action.item_refs:
            ref = action.item_refs[0]
            if ref not in binding:
                raise UnbindableReferenceError(
                    f"binding does not cover reference {ref!r}"
                )
            current_room = part_room[assignment[binding[ref]]]
        rooms_per_action.append(current_room)

    cycle = program.cycle_length
    rooms = []
    completed = []
    t = 0
    while t <= horizon:
        for action, room in zip(program.actions, rooms_per_action):
            for _ in range(action.duration):
                if t > horizon:
                    break
                rooms.append(room)
                t += 1
            finish = t  # cumulative duration of the prefix, mod looping
            if finish <= horizon:
                completed.append((finish, action))
            if t > horizon:
                break
    assert len(rooms) == horizon + 1
    return OccupancyTrace(rooms=tuple(rooms), completed=tuple(completed))
