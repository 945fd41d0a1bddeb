"""Turn the completed-action history into a natural-language narration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .activity import AtomicAction
from .errors import TemplateError

DEFAULT_WINDOW = 10

# Past-tense phrases for the verbs the fixtures use; anything else is
# lowercased verbatim.
PAST_TENSE = {
    "Walk": "walked to",
    "Grab": "grabbed",
    "Put": "put down",
    "Open": "opened",
    "Close": "closed",
    "SwitchOn": "switched on",
    "SwitchOff": "switched off",
    "Sit": "sat on",
    "Watch": "watched",
    "Work": "worked at",
    "Sleep": "slept",
    "Read": "read",
    "Drink": "drank",
    "Eat": "ate",
}


@dataclass(frozen=True)
class ObservationHistory:
    """Sliding window over completed actions, most recent last."""

    window: tuple[tuple[int, AtomicAction], ...]
    window_size: int = DEFAULT_WINDOW
    appliance_states: tuple[tuple[str, str, int], ...] = ()

    def __post_init__(self):
        if len(self.window) > self.window_size:
            raise ValueError("history window exceeds its configured size")
        times = [t for t, _ in self.window]
        if times != sorted(times):
            raise ValueError("history timestamps must be non-decreasing")

    @classmethod
    def from_log(cls, log, window_size: int = DEFAULT_WINDOW,
                 appliance_states=()):
        return cls(window=tuple(log[-window_size:]) if window_size else (),
                   window_size=window_size,
                   appliance_states=tuple(appliance_states))


@dataclass(frozen=True)
class Narration:
    text: str
    style: str


@dataclass(frozen=True)
class Template:
    """Sentence patterns for one narration style.

    ``action_pattern`` is used when the action references an item and may
    contain ``{verb}`` and ``{label}``; ``bare_pattern`` when it does not.
    """

    preamble: str = "A human is in the apartment. "
    action_pattern: str = "They {verb} the {label}. "
    bare_pattern: str = "They {verb}. "
    appliance_pattern: str = "The {appliance} switched {state} {minutes} minutes ago. "
    empty: bool = False


_TEMPLATES: dict[str, Template] = {
    "activity-history": Template(),
    "none": Template(preamble="", action_pattern="", bare_pattern="",
                     appliance_pattern="", empty=True),
}


def register_template(template_id: str, template: Template) -> None:
    _TEMPLATES[template_id] = template


def available_templates() -> list[str]:
    return sorted(_TEMPLATES)


def past_tense(verb: str) -> str:
    return PAST_TENSE.get(verb, verb.lower())


def narrate(history: ObservationHistory, template: str = "activity-history") -> Narration:
    """Expand the history into text; pure and deterministic."""
    try:
        tpl = _TEMPLATES[template]
    except KeyError:
        raise TemplateError(
            f"unknown narration template {template!r}; "
            f"available: {', '.join(available_templates())}"
        ) from None

    if tpl.empty:
        return Narration(text="", style=template)

    parts = [tpl.preamble]
    for _, action in history.window:
        verb = past_tense(action.verb)
        if action.item_refs:
            label = action.item_refs[0][0]
            parts.append(tpl.action_pattern.format(verb=verb, label=label))
        else:
            parts.append(tpl.bare_pattern.format(verb=verb))
    for appliance, state, minutes in history.appliance_states:
        parts.append(tpl.appliance_pattern.format(
            appliance=appliance, state=state, minutes=minutes))
    return Narration(text="".join(parts), style=template)
