"""Programmed-instruction sequencing of gap-fill items.

Two historical modes are supported. Linear: the learner advances only on a
correct answer and otherwise retries the same item. Branched: a wrong
answer detours to a remedial item and then returns to the failed one,
while a streak of correct answers earns a short cut that skips ahead.
The report tracks the error rate against a configurable threshold
(default: more than 10% wrong flags the session).

A session is single-writer: submissions must be serialized by the caller;
distinct sessions are independent.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .exercise import GapFillItem

MODES = ("linear", "branched")

RemedialProvider = Callable[[GapFillItem], GapFillItem]


class SessionStateError(Exception):
    """Raised when answers are submitted to a finished session."""


@dataclass(frozen=True, slots=True)
class SessionConfig:
    mode: str = "linear"
    shortcut_streak: int = 3
    skip_count: int = 1
    error_rate_threshold: float = 0.10
    case_sensitive: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown session mode {self.mode!r}")
        if self.shortcut_streak < 2:
            raise ValueError("shortcut_streak must be at least 2")
        if self.skip_count < 1:
            raise ValueError("skip_count must be at least 1")
        if not 0 < self.error_rate_threshold <= 1:
            raise ValueError("error_rate_threshold must be in (0, 1]")


@dataclass(frozen=True, slots=True)
class AnswerRecord:
    item_source: tuple[str, int, int]
    given_answer: str
    correct: bool
    remedial: bool
    timestamp: float


@dataclass(frozen=True, slots=True)
class SessionReport:
    total_responses: int
    error_count: int
    error_rate: float
    threshold_exceeded: bool
    history: tuple[AnswerRecord, ...]


@dataclass(frozen=True, slots=True)
class Feedback:
    correct: bool
    finished: bool
    next_item: GapFillItem | None
    report: SessionReport | None


class Session:
    """Mutable state of one learner working through an item sequence."""

    def __init__(self, items: list[GapFillItem] | tuple[GapFillItem, ...],
                 config: SessionConfig | None = None,
                 remedial_provider: RemedialProvider | None = None,
                 clock: Callable[[], float] = time.time):
        if not items:
            raise ValueError("a session needs at least one item")
        self.items: tuple[GapFillItem, ...] = tuple(items)
        self.config = config or SessionConfig()
        self.remedial_provider = remedial_provider
        self.clock = clock
        self.cursor = 0
        self.pending_remedial: tuple[GapFillItem, int] | None = None
        self.answered_log: list[AnswerRecord] = []
        self.streak = 0
        self.finished = False

    @property
    def current_item(self) -> GapFillItem | None:
        if self.finished:
            return None
        if self.pending_remedial is not None:
            return self.pending_remedial[0]
        return self.items[self.cursor]

    def submit_answer(self, answer: str) -> Feedback:
        """Score one answer and advance the state machine.

        Comparison is exact after trimming (case-insensitive when
        configured). Linear mode repeats a failed item; branched mode
        presents its remedial item once and then returns to it, and a
        streak of ``shortcut_streak`` correct answers skips
        ``skip_count`` items.
        """
        if self.finished:
            raise SessionStateError("session is already finished")
        item = self.current_item
        assert item is not None
        on_remedial = self.pending_remedial is not None
        correct = self._compare(answer, item.answer)
        self.answered_log.append(AnswerRecord(
            item_source=item.source, given_answer=answer, correct=correct,
            remedial=on_remedial, timestamp=self.clock()))
        self.streak = self.streak + 1 if correct else 0

        if on_remedial:
            # One remedial per failure, then back to the failed item.
            self.pending_remedial = None
        elif correct:
            if (self.config.mode == "branched"
                    and self.streak >= self.config.shortcut_streak):
                self.cursor += 1 + self.config.skip_count
                self.streak = 0
            else:
                self.cursor += 1
        elif self.config.mode == "branched":
            self.pending_remedial = (self._remedial_for(item), self.cursor)
        # linear + wrong: stay on the same item.

        if self.cursor >= len(self.items):
            self.finished = True
        return Feedback(correct=correct, finished=self.finished,
                        next_item=self.current_item,
                        report=self.report() if self.finished else None)

    def report(self) -> SessionReport:
        total = len(self.answered_log)
        errors = sum(1 for r in self.answered_log if not r.correct)
        rate = errors / total if total else 0.0
        return SessionReport(
            total_responses=total,
            error_count=errors,
            error_rate=rate,
            threshold_exceeded=rate > self.config.error_rate_threshold,
            history=tuple(self.answered_log))

    def _compare(self, given: str, expected: str) -> bool:
        a, b = given.strip(), expected.strip()
        if self.config.case_sensitive:
            return a == b
        return a.casefold() == b.casefold()

    def _remedial_for(self, item: GapFillItem) -> GapFillItem:
        if self.remedial_provider is not None:
            return self.remedial_provider(item)
        return item  # no provider: the failed item doubles as its remedial

    # -- persistence --------------------------------------------------------

    def to_plain(self) -> dict:
        return {
            "config": {
                "mode": self.config.mode,
                "shortcutStreak": self.config.shortcut_streak,
                "skipCount": self.config.skip_count,
                "errorRateThreshold": self.config.error_rate_threshold,
                "caseSensitive": self.config.case_sensitive,
            },
            "items": [_item_to_plain(i) for i in self.items],
            "cursor": self.cursor,
            "pendingRemedial": None if self.pending_remedial is None else {
                "item": _item_to_plain(self.pending_remedial[0]),
                "returnIndex": self.pending_remedial[1],
            },
            "log": [{
                "source": list(r.item_source), "answer": r.given_answer,
                "correct": r.correct, "remedial": r.remedial,
                "timestamp": r.timestamp,
            } for r in self.answered_log],
            "streak": self.streak,
            "finished": self.finished,
        }

    @classmethod
    def from_plain(cls, plain: dict,
                   remedial_provider: RemedialProvider | None = None) -> "Session":
        cfg = plain["config"]
        session = cls(
            items=[_item_from_plain(i) for i in plain["items"]],
            config=SessionConfig(
                mode=cfg["mode"], shortcut_streak=cfg["shortcutStreak"],
                skip_count=cfg["skipCount"],
                error_rate_threshold=cfg["errorRateThreshold"],
                case_sensitive=cfg["caseSensitive"]),
            remedial_provider=remedial_provider)
        session.cursor = plain["cursor"]
        pending = plain.get("pendingRemedial")
        if pending is not None:
            session.pending_remedial = (_item_from_plain(pending["item"]),
                                        pending["returnIndex"])
        session.answered_log = [AnswerRecord(
            item_source=tuple(r["source"]), given_answer=r["answer"],
            correct=r["correct"], remedial=r["remedial"],
            timestamp=r["timestamp"]) for r in plain["log"]]
        session.streak = plain["streak"]
        session.finished = plain["finished"]
        return session


def start_session(items, config: SessionConfig | None = None,
                  remedial_provider: RemedialProvider | None = None) -> Session:
    """Create a session positioned on the first item with an empty log."""
    return Session(items, config, remedial_provider)


def _item_to_plain(item: GapFillItem) -> dict:
    return {
        "stem": item.stem,
        "answer": item.answer,
        "distractors": list(item.distractors),
        "source": list(item.source),
        "answerMode": item.answer_mode,
    }


def _item_from_plain(plain: dict) -> GapFillItem:
    return GapFillItem(
        stem=plain["stem"], answer=plain["answer"],
        distractors=tuple(plain["distractors"]),
        source=(plain["source"][0], plain["source"][1], plain["source"][2]),
        answer_mode=plain["answerMode"])
