import pytest

from ggplan.activity import AtomicAction
from ggplan.errors import TemplateError
from ggplan.narrator import (ObservationHistory, Template, narrate,
                             register_template)


def act(verb, label=None, t=0):
    refs = ((label, 1),) if label else ()
    return (t, AtomicAction(verb=verb, item_refs=refs, duration=1))


class TestNarrate:
    def test_golden_default_template(self):
        history = ObservationHistory(window=(act("Walk", "mug", 3),
                                             act("Grab", "mug", 4)))
        n = narrate(history)
        assert n.text == ("A human is in the apartment. "
                          "They walked to the mug. They grabbed the mug. ")

    def test_empty_history(self):
        assert narrate(ObservationHistory(window=())).text == "A human is in the apartment. "

    def test_none_template_is_empty(self):
        history = ObservationHistory(window=(act("Walk", "mug"),))
        assert narrate(history, "none").text == ""

    def test_unknown_template(self):
        with pytest.raises(TemplateError, match="sonnet"):
            narrate(ObservationHistory(window=()), "sonnet")

    def test_pure(self):
        history = ObservationHistory(window=(act("Walk", "tv", 1), act("Sit", "sofa", 2)))
        assert narrate(history).text == narrate(history).text

    def test_every_action_mentioned_once_in_order(self):
        labels = ["sink", "stove", "sofa", "bed"]
        history = ObservationHistory(
            window=tuple(act("Walk", l, t) for t, l in enumerate(labels)))
        text = narrate(history).text
        positions = [text.index(l) for l in labels]
        assert positions == sorted(positions)
        for label in labels:
            assert text.count(label) == 1

    def test_zero_item_action_uses_bare_pattern(self):
        history = ObservationHistory(window=(act("Sleep"),))
        assert narrate(history).text.endswith("They slept. ")

    def test_unlisted_verb_lowercased(self):
        history = ObservationHistory(window=(act("Juggle", "mug"),))
        assert "They juggle the mug." in narrate(history).text

    def test_appliance_state_sentence(self):
        history = ObservationHistory(window=(),
                                     appliance_states=(("dishwasher", "on", 5),))
        assert "The dishwasher switched on 5 minutes ago. " in narrate(history).text

    def test_custom_template_registration(self):
        register_template("terse", Template(preamble="", action_pattern="{verb} {label}; "))
        history = ObservationHistory(window=(act("Walk", "mug"),))
        assert narrate(history, "terse").text == "walked to mug; "


class TestObservationHistory:
    def test_window_cap_enforced(self):
        with pytest.raises(ValueError):
            ObservationHistory(window=tuple(act("Walk", "mug", t) for t in range(3)),
                               window_size=2)

    def test_from_log_keeps_most_recent(self):
        log = [act("Walk", f"l{i}", t=i) for i in range(20)]
        history = ObservationHistory.from_log(log, window_size=10)
        assert len(history.window) == 10
        assert history.window[-1] == log[-1]

    def test_timestamps_must_be_sorted(self):
        with pytest.raises(ValueError):
            ObservationHistory(window=(act("Walk", "a", 5), act("Walk", "b", 3)))
