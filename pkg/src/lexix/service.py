"""HTTP API over the corpus, query, exercise, session and stats modules.

All bodies are JSON (UTF-8) except corpus ingestion, which takes the raw
XML document. Failure responses carry exactly one error object::

    {"status": 404, "code": "corpus_not_found", "message": "...", "location": null}

Corpus ids are short content hashes, so re-uploading an identical document
returns the existing id. Query results, exercise sets and stats tables are
rendered through the same canonical serializer as the CLI's JSON output,
which keeps identical requests byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import uuid
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .concordance import run_query
from .corpus import Corpus, CorpusParseError, CorpusValidationError, parse_corpus
from .exercise import generate_items, same_lemma_remedial
from .index import CorpusIndex, build_index
from .pattern import (PatternQuery, QueryParseError, QuerySemanticsError,
                      parse_query, query_from_plain)
from .serialize import (canonical_json, corpus_summary_payload,
                        exercise_set_payload, feedback_payload, item_payload,
                        page_payload, stats_payload)
from .session import Session, SessionConfig, SessionStateError
from .stats import build_profile

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 50
MAX_LIMIT = 1000


class ApiError(Exception):
    """Carries the one error body a failure response is allowed."""

    def __init__(self, status: int, code: str, message: str,
                 location: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.location = location

    def payload(self) -> dict:
        return {"status": self.status, "code": self.code,
                "message": self.message, "location": self.location}


@dataclass
class ServiceConfig:
    data_dir: str | None = None
    session_store_path: str | None = None
    max_upload_bytes: int = 32 * 1024 * 1024


class CorpusRegistry:
    """Uploaded corpora by content hash; insertions are atomic."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[str, tuple[Corpus, CorpusIndex]] = {}
        self._id_by_name: dict[str, str] = {}

    @staticmethod
    def content_id(xml_bytes: bytes) -> str:
        return hashlib.sha256(xml_bytes).hexdigest()[:12]

    def add(self, xml_bytes: bytes) -> tuple[str, Corpus, CorpusIndex, bool]:
        corpus_id = self.content_id(xml_bytes)
        with self._lock:
            if corpus_id in self._entries:
                corpus, index = self._entries[corpus_id]
                return corpus_id, corpus, index, False
        corpus = parse_corpus(xml_bytes)
        index = build_index(corpus)
        with self._lock:
            if corpus_id in self._entries:
                corpus, index = self._entries[corpus_id]
                return corpus_id, corpus, index, False
            existing = self._id_by_name.get(corpus.name)
            if existing is not None and existing != corpus_id:
                raise ApiError(409, "corpus_name_conflict",
                               f"a different corpus named {corpus.name!r} "
                               f"is already registered as {existing}")
            self._entries[corpus_id] = (corpus, index)
            self._id_by_name[corpus.name] = corpus_id
            return corpus_id, corpus, index, True

    def get(self, corpus_id: str) -> tuple[Corpus, CorpusIndex]:
        try:
            return self._entries[corpus_id]
        except KeyError:
            raise ApiError(404, "corpus_not_found",
                           f"no corpus with id {corpus_id!r}") from None

    def ids(self) -> list[str]:
        return list(self._entries)


class MemorySessionStore:
    def __init__(self):
        self._sessions: dict[str, dict] = {}
        self._lock = threading.Lock()

    def load(self, session_id: str) -> dict | None:
        with self._lock:
            return self._sessions.get(session_id)

    def save(self, session_id: str, record: dict) -> None:
        with self._lock:
            self._sessions[session_id] = record


class FileSessionStore(MemorySessionStore):
    """Single-file persistence: the whole session map as one JSON document."""

    def __init__(self, path: str):
        super().__init__()
        self.path = path
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                self._sessions = json.load(fh)

    def save(self, session_id: str, record: dict) -> None:
        with self._lock:
            self._sessions[session_id] = record
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(self._sessions, fh, ensure_ascii=False)
            os.replace(tmp, self.path)


def _json_response(payload, status: int = 200) -> Response:
    return Response(content=canonical_json(payload), status_code=status,
                    media_type="application/json")


def _query_from_body(body: dict) -> PatternQuery:
    """Accept either {"dsl": ...} or the structured {docFilters, slots} form."""
    if not isinstance(body, dict):
        raise ApiError(400, "invalid_request", "request body must be a JSON object")
    try:
        if body.get("dsl") is not None:
            return parse_query(body["dsl"])
        if "slots" in body:
            return query_from_plain({"docFilters": body.get("docFilters"),
                                     "slots": body["slots"]})
        if isinstance(body.get("query"), dict):
            return query_from_plain(body["query"])
    except QuerySemanticsError as exc:
        raise ApiError(422, "query_invalid", str(exc),
                       location=None if exc.column is None
                       else f"column {exc.column}") from exc
    except QueryParseError as exc:
        raise ApiError(400, "query_syntax", str(exc),
                       location=None if exc.column is None
                       else f"column {exc.column}") from exc
    except ValueError as exc:
        raise ApiError(400, "invalid_request", str(exc)) from exc
    raise ApiError(400, "invalid_request",
                   "request needs a 'dsl' string or structured 'slots'")


def _int_field(body: dict, name: str, default: int) -> int:
    value = body.get(name, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ApiError(400, "invalid_request", f"{name!r} must be an integer")
    return value


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="lexix", version="0.1.0")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    registry = CorpusRegistry()
    sessions = (FileSessionStore(config.session_store_path)
                if config.session_store_path else MemorySessionStore())
    app.state.registry = registry
    app.state.sessions = sessions

    if config.data_dir:
        for name in sorted(os.listdir(config.data_dir)):
            if name.endswith(".xml"):
                path = os.path.join(config.data_dir, name)
                with open(path, "rb") as fh:
                    corpus_id, corpus, _, _ = registry.add(fh.read())
                logger.info("preloaded corpus %s from %s", corpus_id, path)

    @app.exception_handler(ApiError)
    async def handle_api_error(_request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.payload())

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content=ApiError(
            400, "invalid_request", str(exc)).payload())

    @app.post("/corpora")
    async def upload_corpus(request: Request) -> Response:
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            raise ApiError(413, "corpus_too_large",
                           f"upload exceeds {config.max_upload_bytes} bytes")
        try:
            corpus_id, corpus, _, created = registry.add(body)
        except CorpusParseError as exc:
            raise ApiError(400, "corpus_malformed", str(exc),
                           location=None if exc.line is None
                           else f"line {exc.line}") from exc
        except CorpusValidationError as exc:
            raise ApiError(400, "corpus_invalid", str(exc.findings[0]),
                           location=str(exc.findings[0])) from exc
        return _json_response(corpus_summary_payload(corpus_id, corpus),
                              status=201 if created else 200)

    @app.get("/corpora")
    async def list_corpora() -> Response:
        return _json_response([
            corpus_summary_payload(cid, registry.get(cid)[0])
            for cid in registry.ids()])

    @app.get("/corpora/{corpus_id}")
    async def corpus_summary(corpus_id: str) -> Response:
        corpus, _ = registry.get(corpus_id)
        return _json_response(corpus_summary_payload(corpus_id, corpus))

    @app.get("/corpora/{corpus_id}/texts/{text_id}/sentences/{sentence_index}")
    async def sentence_detail(corpus_id: str, text_id: str,
                              sentence_index: int) -> Response:
        corpus, _ = registry.get(corpus_id)
        text = corpus.text_by_id(text_id)
        if text is None or not 0 <= sentence_index < len(text.sentences):
            raise ApiError(404, "sentence_not_found",
                           f"no sentence {sentence_index} in text {text_id!r}")
        return _json_response({
            "textId": text_id,
            "sentenceIndex": sentence_index,
            "l1": text.mothertongue,
            "level": text.level,
            "tokens": [{
                "tokenIndex": t.token_index,
                "surface": t.surface,
                "lemma": t.lemma,
                "pos": t.pos,
                "traits": sorted(t.traits),
            } for t in text.sentences[sentence_index]],
            "spans": [{
                "category": s.category,
                "firstToken": s.first_token,
                "lastToken": s.last_token,
                "correctedForm": s.corrected_form,
            } for s in text.spans_for(sentence_index)],
        })

    @app.post("/corpora/{corpus_id}/query")
    async def query_corpus(corpus_id: str, body: dict) -> Response:
        _, index = registry.get(corpus_id)
        query = _query_from_body(body)
        offset = _int_field(body, "offset", 0)
        limit = _int_field(body, "limit", DEFAULT_LIMIT)
        if limit > MAX_LIMIT:
            raise ApiError(400, "invalid_request",
                           f"limit must not exceed {MAX_LIMIT}")
        try:
            page = run_query(index, query, offset=offset, limit=limit)
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc)) from exc
        return _json_response(page_payload(page, query))

    @app.post("/corpora/{corpus_id}/exercises")
    async def corpus_exercises(corpus_id: str, body: dict) -> Response:
        _, index = registry.get(corpus_id)
        exercise_set = _generate_from_request(index, body)
        return _json_response(exercise_set_payload(exercise_set))

    @app.post("/sessions")
    async def create_session(body: dict) -> Response:
        corpus_id = body.get("corpusId")
        if not isinstance(corpus_id, str):
            raise ApiError(400, "invalid_request", "'corpusId' must be a string")
        corpus, index = registry.get(corpus_id)
        exercise_request = body.get("exerciseRequest")
        if not isinstance(exercise_request, dict):
            raise ApiError(400, "invalid_request",
                           "'exerciseRequest' must be an object")
        exercise_set = _generate_from_request(index, exercise_request)
        if not exercise_set.items:
            raise ApiError(422, "no_examples",
                           "the query matched nothing to practice on")
        try:
            session_config = _session_config(body.get("config") or {})
            session = Session(list(exercise_set.items), session_config,
                              remedial_provider=lambda item:
                              same_lemma_remedial(corpus, item))
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc)) from exc
        session_id = uuid.uuid4().hex[:16]
        sessions.save(session_id,
                      {"corpusId": corpus_id, "session": session.to_plain()})
        return _json_response({
            "sessionId": session_id,
            "firstItem": item_payload(session.current_item),
            "itemCount": len(session.items),
        }, status=201)

    @app.post("/sessions/{session_id}/answer")
    async def answer_session(session_id: str, body: dict) -> Response:
        record = sessions.load(session_id)
        if record is None:
            raise ApiError(404, "session_not_found",
                           f"no session with id {session_id!r}")
        answer = body.get("answer")
        if not isinstance(answer, str):
            raise ApiError(400, "invalid_request", "'answer' must be a string")
        corpus, _ = registry.get(record["corpusId"])
        session = Session.from_plain(
            record["session"],
            remedial_provider=lambda item: same_lemma_remedial(corpus, item))
        try:
            feedback = session.submit_answer(answer)
        except SessionStateError as exc:
            raise ApiError(409, "session_finished", str(exc)) from exc
        sessions.save(session_id,
                      {"corpusId": record["corpusId"],
                       "session": session.to_plain()})
        return _json_response(feedback_payload(feedback))

    @app.get("/corpora/{corpus_id}/stats/errors")
    async def corpus_error_stats(corpus_id: str, depth: int = 1,
                                 l1: str | None = None,
                                 level: str | None = None,
                                 min: int = 1) -> Response:
        corpus, _ = registry.get(corpus_id)
        try:
            profile = build_profile(corpus, depth)
            payload = stats_payload(profile, l1, level, min)
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc)) from exc
        return _json_response(payload)

    return app


def _generate_from_request(index: CorpusIndex, body: dict):
    query = _query_from_body(body)
    count = _int_field(body, "count", 10)
    seed = _int_field(body, "seed", 0)
    answer_mode = body.get("answerMode", "as-written")
    distractor_policy = body.get("distractorPolicy", "none")
    k = _int_field(body, "k", 3)
    try:
        return generate_items(index, query, count=count, seed=seed,
                              answer_mode=answer_mode,
                              distractor_policy=distractor_policy,
                              distractor_count=k)
    except ValueError as exc:
        raise ApiError(400, "invalid_request", str(exc)) from exc


def _session_config(plain: dict) -> SessionConfig:
    return SessionConfig(
        mode=plain.get("mode", "linear"),
        shortcut_streak=plain.get("shortcutStreak", 3),
        skip_count=plain.get("skipCount", 1),
        error_rate_threshold=plain.get("errorRateThreshold", 0.10),
        case_sensitive=plain.get("caseSensitive", True))
