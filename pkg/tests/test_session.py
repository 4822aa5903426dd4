import random

import pytest

from lexix.exercise import GapFillItem
from lexix.session import (Session, SessionConfig, SessionStateError,
                           start_session)


def _items(n):
    return [GapFillItem(stem=f"item {i} ____", answer=f"mot{i}",
                        distractors=(), source=(str(i), 0, 0),
                        answer_mode="as-written") for i in range(n)]


def _remedial_marker(item):
    return GapFillItem(stem="remedial " + item.stem, answer=item.answer,
                       distractors=(), source=("R",) + item.source[1:],
                       answer_mode=item.answer_mode)


def test_start_session_state():
    session = start_session(_items(5), SessionConfig(mode="linear"))
    assert session.cursor == 0 and session.streak == 0
    assert not session.finished
    assert session.answered_log == []
    assert session.current_item == session.items[0]


def test_start_requires_items():
    with pytest.raises(ValueError):
        start_session([], SessionConfig())


def test_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(mode="holographic")
    with pytest.raises(ValueError):
        SessionConfig(shortcut_streak=1)
    with pytest.raises(ValueError):
        SessionConfig(skip_count=0)
    with pytest.raises(ValueError):
        SessionConfig(error_rate_threshold=0.0)


def test_linear_wrong_then_right():
    session = start_session(_items(3), SessionConfig(mode="linear"))
    feedback = session.submit_answer("nope")
    assert not feedback.correct
    assert session.cursor == 0  # stays on the failed item
    feedback = session.submit_answer("mot0")
    assert feedback.correct
    assert session.cursor == 1
    assert len(session.answered_log) == 2
    assert session.report().error_count == 1


def test_linear_completeness_in_order():
    items = _items(6)
    session = start_session(items, SessionConfig(mode="linear"))
    rng = random.Random(4)
    correct_order = []
    while not session.finished:
        item = session.current_item
        if rng.random() < 0.4:
            session.submit_answer("faux")
        else:
            session.submit_answer(item.answer)
            correct_order.append(item.source)
    assert correct_order == [i.source for i in items]


def test_branched_all_correct_shortcut_order():
    items = _items(10)
    session = start_session(
        items, SessionConfig(mode="branched", shortcut_streak=3, skip_count=1))
    presented = []
    while not session.finished:
        item = session.current_item
        presented.append(session.items.index(item) + 1)  # 1-based
        session.submit_answer(item.answer)
    assert presented == [1, 2, 3, 5, 6, 7, 9, 10]


def test_branched_wrong_goes_remedial_then_returns():
    items = _items(4)
    session = start_session(
        items, SessionConfig(mode="branched"), _remedial_marker)
    session.submit_answer(items[0].answer)
    failed = session.current_item
    assert failed == items[1]
    feedback = session.submit_answer("faux")
    assert not feedback.correct
    remedial = session.current_item
    assert remedial.source[0] == "R"
    assert feedback.next_item == remedial
    session.submit_answer(remedial.answer)
    assert session.current_item == items[1]  # back to the failed item


def test_branched_no_remedial_recursion():
    items = _items(2)
    session = start_session(items, SessionConfig(mode="branched"),
                            _remedial_marker)
    session.submit_answer("faux")  # fail item 0 -> remedial pending
    assert session.current_item.source[0] == "R"
    session.submit_answer("faux encore")  # fail the remedial too
    assert session.current_item == items[0]  # no remedial-of-remedial


def test_default_remedial_is_failed_item():
    items = _items(2)
    session = start_session(items, SessionConfig(mode="branched"))
    session.submit_answer("faux")
    record = session.answered_log[-1]
    assert not record.correct and not record.remedial
    assert session.current_item == items[0]
    session.submit_answer(items[0].answer)
    assert session.answered_log[-1].remedial
    assert session.current_item == items[0]


def test_shortcut_resets_streak_and_skips():
    items = _items(10)
    session = start_session(
        items, SessionConfig(mode="branched", shortcut_streak=2, skip_count=2))
    presented = []
    while not session.finished:
        item = session.current_item
        presented.append(session.items.index(item))
        session.submit_answer(item.answer)
    # Streak of 2 skips 2: 0,1 then jump to 4, 4,5 jump to 8, 8,9 done.
    assert presented == [0, 1, 4, 5, 8, 9]
    skipped = set(range(10)) - set(presented)
    assert skipped == {2, 3, 6, 7}


def test_shortcut_overshoot_finishes():
    items = _items(3)
    session = start_session(
        items, SessionConfig(mode="branched", shortcut_streak=2, skip_count=5))
    session.submit_answer(items[0].answer)
    feedback = session.submit_answer(items[1].answer)
    assert feedback.finished
    assert feedback.report is not None


def test_report_threshold_is_strict():
    items = _items(20)
    session = start_session(items, SessionConfig(mode="linear",
                                                 error_rate_threshold=0.10))
    wrong_at = {3, 11}
    answered = 0
    while answered < 20:
        item = session.current_item
        if session.cursor in wrong_at:
            session.submit_answer("faux")
            wrong_at.discard(session.cursor)
        else:
            session.submit_answer(item.answer)
        answered += 1
    report = session.report()
    assert report.total_responses == 20
    assert report.error_count == 2
    assert report.error_rate == pytest.approx(0.10)
    assert not report.threshold_exceeded  # exactly 10% is allowed


def test_report_rates():
    session = start_session(_items(12), SessionConfig(mode="linear"))
    for _ in range(3):
        session.submit_answer("faux")
    for i in range(9):
        session.submit_answer(session.current_item.answer)
    report = session.report()
    assert report.total_responses == 12
    assert report.error_rate == pytest.approx(0.25)
    assert report.threshold_exceeded


def test_report_empty_session():
    session = start_session(_items(2), SessionConfig())
    report = session.report()
    assert report.total_responses == 0
    assert report.error_rate == 0.0
    assert not report.threshold_exceeded


def test_submit_after_finish_raises():
    session = start_session(_items(1), SessionConfig())
    feedback = session.submit_answer("mot0")
    assert feedback.finished
    assert feedback.next_item is None
    with pytest.raises(SessionStateError):
        session.submit_answer("encore")


def test_log_append_only_random_script():
    rng = random.Random(11)
    session = start_session(
        _items(8), SessionConfig(mode="branched", shortcut_streak=3),
        _remedial_marker)
    length = 0
    while not session.finished and length < 200:
        answer = session.current_item.answer if rng.random() < 0.6 else "faux"
        session.submit_answer(answer)
        length += 1
        assert len(session.answered_log) == length


def test_answer_comparison_modes():
    items = _items(2)
    strict = start_session(items, SessionConfig(case_sensitive=True))
    assert not strict.submit_answer("MOT0").correct
    assert strict.submit_answer("  mot0  ").correct  # trimmed
    relaxed = start_session(items, SessionConfig(case_sensitive=False))
    assert relaxed.submit_answer("MOT0").correct


def test_session_roundtrip_mid_flight():
    session = start_session(
        _items(5), SessionConfig(mode="branched", shortcut_streak=3),
        _remedial_marker)
    session.submit_answer(session.current_item.answer)
    session.submit_answer("faux")  # remedial pending
    plain = session.to_plain()
    revived = Session.from_plain(plain, _remedial_marker)
    assert revived.cursor == session.cursor
    assert revived.streak == session.streak
    assert revived.current_item == session.current_item
    assert revived.answered_log == session.answered_log
    assert revived.to_plain() == plain
