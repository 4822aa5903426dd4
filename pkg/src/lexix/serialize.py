"""Wire-format payload builders shared by the HTTP service and the CLI.

Everything the service returns is built here as plain dicts and rendered
with ``canonical_json``, so a CLI run with ``--format json`` and the
corresponding endpoint produce byte-identical output.
"""

from __future__ import annotations

import json

from .concordance import ResultPage
from .corpus import Corpus
from .exercise import ExerciseSet, GapFillItem
from .pattern import PatternQuery, query_to_plain, to_dsl
from .session import Feedback, SessionReport
from .stats import ErrorProfile, frequent_errors


def canonical_json(payload) -> str:
    """Deterministic JSON: sorted keys, compact separators, real UTF-8."""
    return json.dumps(payload, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"))


def corpus_summary_payload(corpus_id: str, corpus: Corpus) -> dict:
    return {
        "id": corpus_id,
        "name": corpus.name,
        "textCount": len(corpus.texts),
        "tokenCount": corpus.token_count(),
        "catalog": {
            "pos": sorted(corpus.catalog.pos_labels),
            "traits": sorted(corpus.catalog.trait_labels),
            "categories": sorted(corpus.catalog.error_categories),
            "l1": sorted(corpus.catalog.l1_tags),
            "levels": sorted(corpus.catalog.level_tags),
        },
    }


def page_payload(page: ResultPage, query: PatternQuery) -> dict:
    return {
        "total": page.total_matches,
        "offset": page.offset,
        "limit": page.limit,
        "query": query_to_plain(query),
        "dsl": to_dsl(query),
        "lines": [{
            "no": line.row_number,
            "textId": line.text_id,
            "left": line.left_context,
            "keyword": line.keyword,
            "right": line.right_context,
            "sentenceIndex": line.sentence_index,
            "tokenIndex": line.token_index,
            "matchStart": line.match_start,
            "matchEnd": line.match_end,
        } for line in page.lines],
    }


def item_payload(item: GapFillItem) -> dict:
    return {
        "stem": item.stem,
        "answer": item.answer,
        "distractors": list(item.distractors),
        "source": {
            "textId": item.source[0],
            "sentenceIndex": item.source[1],
            "tokenIndex": item.source[2],
        },
        "answerMode": item.answer_mode,
    }


def exercise_set_payload(exercise_set: ExerciseSet) -> dict:
    return {
        "generator": exercise_set.generator,
        "seed": exercise_set.seed,
        "answerMode": exercise_set.answer_mode,
        "distractorPolicy": exercise_set.distractor_policy,
        "distractorCount": exercise_set.distractor_count,
        "noExamples": exercise_set.no_examples,
        "query": query_to_plain(exercise_set.query),
        "dsl": to_dsl(exercise_set.query),
        "items": [item_payload(i) for i in exercise_set.items],
    }


def report_payload(report: SessionReport) -> dict:
    return {
        "totalResponses": report.total_responses,
        "errorCount": report.error_count,
        "errorRate": report.error_rate,
        "thresholdExceeded": report.threshold_exceeded,
        "history": [{
            "source": list(r.item_source),
            "answer": r.given_answer,
            "correct": r.correct,
            "remedial": r.remedial,
            "timestamp": r.timestamp,
        } for r in report.history],
    }


def feedback_payload(feedback: Feedback) -> dict:
    return {
        "correct": feedback.correct,
        "finished": feedback.finished,
        "nextItem": None if feedback.next_item is None
        else item_payload(feedback.next_item),
        "report": None if feedback.report is None
        else report_payload(feedback.report),
    }


def stats_payload(profile: ErrorProfile, l1: str | None, level: str | None,
                  min_count: int) -> dict:
    rows = frequent_errors(profile, l1=l1, level=level, min_count=min_count)
    return {
        "depth": profile.depth,
        "l1": l1,
        "level": level,
        "minCount": min_count,
        "totalSpans": profile.total_spans,
        "totalTokens": profile.total_tokens,
        "rows": [{
            "category": category,
            "count": count,
            "relativeFrequency": rel,
        } for category, count, rel in rows],
    }
