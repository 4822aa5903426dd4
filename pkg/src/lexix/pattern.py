"""Token-pattern queries: a small DSL, compilation to a finite automaton,
and matching against annotated sentences.

A query is an ordered sequence of constraint slots, one marked as the
keyword, optionally preceded by document filters::

    @l1="dutch" [lemma="avoir"] ![pos="verbe" & trait="participe passé" & error="yes"]

Grammar::

    query      := docfilter* slot+
    docfilter  := '@' ('l1'|'level') '=' STRING
    slot       := '!'? '[' conj ']' quant?
    conj       := constraint ('&' constraint)*
    constraint := KEY ('='|'!=') STRING
    quant      := '?' | '*' | '{' INT ',' INT '}'

STRING is double-quoted with a backslash escape for the quote; exactly one
slot carries ``!``. Keys are surface, lemma, pos, trait, error, cat, corr.
Surface and corrected forms match case-sensitively; lemma, pos, trait and
category values are normalized vocabulary and match case-insensitively.
``cat`` matches by segment prefix against any span covering the token,
``error="yes"`` means covered by at least one span.

Compiled automata are plain NFAs (Thompson construction, no
determinization) and are matched by set simulation; parsed queries and
automata are immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .corpus import ErrorSpan, MorphoToken

CONSTRAINT_KEYS = ("surface", "lemma", "pos", "trait", "error", "cat", "corr")
DOC_FILTER_KEYS = ("l1", "level")


class QueryParseError(ValueError):
    """Query text that does not follow the grammar. ``column`` is 1-based."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message if column is None
                         else f"column {column}: {message}")
        self.column = column


class QuerySemanticsError(QueryParseError):
    """Grammatical query with an invalid meaning (unknown key, two keyword
    markers, keyword under a non-unit quantifier, bad range)."""


@dataclass(frozen=True, slots=True)
class Constraint:
    key: str
    op: str  # "eq" | "neq"
    value: str

    def __post_init__(self):
        if self.key not in CONSTRAINT_KEYS:
            raise ValueError(f"unknown constraint key {self.key!r}")
        if self.op not in ("eq", "neq"):
            raise ValueError(f"unknown operator {self.op!r}")
        if not self.value:
            raise ValueError("constraint value must be non-empty")
        if self.key == "error" and self.value.casefold() not in ("yes", "no"):
            raise ValueError("error status value must be 'yes' or 'no'")


@dataclass(frozen=True, slots=True)
class Quantifier:
    """Occurrence bounds for one slot; ``max`` is None for unbounded."""

    min: int
    max: int | None

    def __post_init__(self):
        if self.min < 0 or (self.max is not None and self.max < self.min):
            raise ValueError(f"invalid quantifier range ({self.min},{self.max})")

    @property
    def kind(self) -> str:
        if (self.min, self.max) == (1, 1):
            return "one"
        if (self.min, self.max) == (0, 1):
            return "optional"
        if (self.min, self.max) == (0, None):
            return "star"
        return "range"


EXACTLY_ONE = Quantifier(1, 1)
OPTIONAL = Quantifier(0, 1)
STAR = Quantifier(0, None)


@dataclass(frozen=True, slots=True)
class Slot:
    """A conjunction of constraints on consecutive tokens."""

    constraints: tuple[Constraint, ...]
    quantifier: Quantifier = EXACTLY_ONE
    keyword: bool = False

    def __post_init__(self):
        if not self.constraints:
            raise ValueError("slot needs at least one constraint")
        if self.keyword and self.quantifier != EXACTLY_ONE:
            raise ValueError("the keyword slot must match exactly one token")


@dataclass(frozen=True, slots=True)
class DocFilters:
    """Optional value sets restricting texts by mother tongue and level."""

    l1: frozenset[str] | None = None
    level: frozenset[str] | None = None

    def admits(self, mothertongue: str, level: str) -> bool:
        if self.l1 is not None and mothertongue.casefold() not in {
                v.casefold() for v in self.l1}:
            return False
        if self.level is not None and level.casefold() not in {
                v.casefold() for v in self.level}:
            return False
        return True


@dataclass(frozen=True, slots=True)
class PatternQuery:
    slots: tuple[Slot, ...]
    doc_filters: DocFilters = field(default_factory=DocFilters)

    def __post_init__(self):
        if not self.slots:
            raise ValueError("query needs at least one slot")
        if sum(1 for s in self.slots if s.keyword) != 1:
            raise ValueError("query must mark exactly one keyword slot")

    @property
    def keyword_index(self) -> int:
        return next(i for i, s in enumerate(self.slots) if s.keyword)


# --- DSL parsing -----------------------------------------------------------

class _Token(NamedTuple):
    kind: str
    value: str
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        col = i + 1
        if ch.isspace():
            i += 1
        elif ch == '"':
            value, i = _scan_string(text, i)
            tokens.append(_Token("STRING", value, col))
        elif ch == "!" and i + 1 < n and text[i + 1] == "=":
            tokens.append(_Token("NEQ", "!=", col))
            i += 2
        elif ch in "@![]&?*{},=":
            kind = {"@": "AT", "!": "BANG", "[": "LBRACKET", "]": "RBRACKET",
                    "&": "AMP", "?": "QMARK", "*": "STAR", "{": "LBRACE",
                    "}": "RBRACE", ",": "COMMA", "=": "EQ"}[ch]
            tokens.append(_Token(kind, ch, col))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], col))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_-"):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], col))
            i = j
        else:
            raise QueryParseError(f"unexpected character {ch!r}", col)
    tokens.append(_Token("EOF", "", n + 1))
    return tokens


def _scan_string(text: str, start: int) -> tuple[str, int]:
    out: list[str] = []
    i = start + 1
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text) and text[i + 1] in ('"', "\\"):
            out.append(text[i + 1])
            i += 2
        elif ch == '"':
            return "".join(out), i + 1
        else:
            out.append(ch)
            i += 1
    raise QueryParseError("unterminated string", start + 1)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str, what: str | None = None) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != kind:
            shown = tok.value or "end of query"
            raise QueryParseError(
                f"expected {what or kind}, got {shown!r}", tok.column)
        self.pos += 1
        return tok

    def parse(self) -> PatternQuery:
        l1: set[str] = set()
        level: set[str] = set()
        while self.peek().kind == "AT":
            self.take("AT")
            name = self.take("IDENT", "document filter name")
            if name.value not in DOC_FILTER_KEYS:
                raise QuerySemanticsError(
                    f"unknown document filter {name.value!r} "
                    f"(expected one of {', '.join(DOC_FILTER_KEYS)})", name.column)
            self.take("EQ", "'='")
            value = self.take("STRING", "a quoted value")
            (l1 if name.value == "l1" else level).add(value.value)

        slots: list[Slot] = []
        keyword_column: int | None = None
        while self.peek().kind in ("BANG", "LBRACKET"):
            slot, column = self.parse_slot()
            if slot.keyword:
                if keyword_column is not None:
                    raise QuerySemanticsError(
                        "query marks two keyword slots", column)
                keyword_column = column
            slots.append(slot)
        tok = self.peek()
        if tok.kind != "EOF":
            raise QueryParseError(f"unexpected {tok.value!r}", tok.column)
        if not slots:
            raise QueryParseError("query needs at least one slot", tok.column)
        if keyword_column is None:
            raise QuerySemanticsError(
                "query must mark exactly one keyword slot with '!'", tok.column)
        return PatternQuery(
            slots=tuple(slots),
            doc_filters=DocFilters(l1=frozenset(l1) if l1 else None,
                                   level=frozenset(level) if level else None))

    def parse_slot(self) -> tuple[Slot, int]:
        keyword = False
        column = self.peek().column
        if self.peek().kind == "BANG":
            keyword = True
            self.take("BANG")
        self.take("LBRACKET", "'['")
        constraints = [self.parse_constraint()]
        while self.peek().kind == "AMP":
            self.take("AMP")
            constraints.append(self.parse_constraint())
        self.take("RBRACKET", "']'")
        quantifier = self.parse_quantifier()
        if keyword and quantifier != EXACTLY_ONE:
            raise QuerySemanticsError(
                "the keyword slot cannot take a quantifier", column)
        return Slot(tuple(constraints), quantifier, keyword), column

    def parse_constraint(self) -> Constraint:
        key = self.take("IDENT", "a constraint key")
        if key.value not in CONSTRAINT_KEYS:
            raise QuerySemanticsError(
                f"unknown constraint key {key.value!r} "
                f"(expected one of {', '.join(CONSTRAINT_KEYS)})", key.column)
        op_tok = self.peek()
        if op_tok.kind == "EQ":
            op = "eq"
        elif op_tok.kind == "NEQ":
            op = "neq"
        else:
            raise QueryParseError("expected '=' or '!='", op_tok.column)
        self.pos += 1
        value = self.take("STRING", "a quoted value")
        if not value.value:
            raise QuerySemanticsError("constraint value must be non-empty",
                                      value.column)
        if key.value == "error" and value.value.casefold() not in ("yes", "no"):
            raise QuerySemanticsError(
                f"error status must be \"yes\" or \"no\", got {value.value!r}",
                value.column)
        return Constraint(key.value, op, value.value)

    def parse_quantifier(self) -> Quantifier:
        tok = self.peek()
        if tok.kind == "QMARK":
            self.pos += 1
            return OPTIONAL
        if tok.kind == "STAR":
            self.pos += 1
            return STAR
        if tok.kind == "LBRACE":
            self.take("LBRACE")
            lo = int(self.take("INT", "a number").value)
            self.take("COMMA", "','")
            hi_tok = self.take("INT", "a number")
            hi = int(hi_tok.value)
            self.take("RBRACE", "'}'")
            if lo > hi:
                raise QuerySemanticsError(
                    f"quantifier range {{{lo},{hi}}} has min > max", tok.column)
            return Quantifier(lo, hi)
        return EXACTLY_ONE


def parse_query(text: str) -> PatternQuery:
    """Parse the query DSL; raises QueryParseError with a column position."""
    return _Parser(text).parse()


def to_dsl(query: PatternQuery) -> str:
    """Render a query back to canonical DSL text (re-parses to an equal query)."""
    parts: list[str] = []
    if query.doc_filters.l1:
        parts += [f'@l1={_quote(v)}' for v in sorted(query.doc_filters.l1)]
    if query.doc_filters.level:
        parts += [f'@level={_quote(v)}' for v in sorted(query.doc_filters.level)]
    for slot in query.slots:
        conj = " & ".join(
            f"{c.key}{'=' if c.op == 'eq' else '!='}{_quote(c.value)}"
            for c in slot.constraints)
        text = f"[{conj}]"
        if slot.keyword:
            text = "!" + text
        q = slot.quantifier
        if q == OPTIONAL:
            text += "?"
        elif q == STAR:
            text += "*"
        elif q != EXACTLY_ONE:
            text += f"{{{q.min},{q.max}}}"
        parts.append(text)
    return " ".join(parts)


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


# --- structured (JSON) form -------------------------------------------------

def query_to_plain(query: PatternQuery) -> dict:
    """The normalized structured form served and accepted over the wire."""
    return {
        "docFilters": {
            "l1": sorted(query.doc_filters.l1) if query.doc_filters.l1 else None,
            "level": sorted(query.doc_filters.level) if query.doc_filters.level else None,
        },
        "slots": [{
            "constraints": [{"key": c.key, "op": c.op, "value": c.value}
                            for c in slot.constraints],
            "quantifier": {"kind": slot.quantifier.kind,
                           "min": slot.quantifier.min,
                           "max": slot.quantifier.max},
            "keyword": slot.keyword,
        } for slot in query.slots],
    }


_QUANTIFIER_KINDS = {"one": (1, 1), "optional": (0, 1), "star": (0, None)}


def query_from_plain(plain: dict) -> PatternQuery:
    """Build a query from its structured form; raises QuerySemanticsError
    for invalid meaning and ValueError for malformed structure."""
    if not isinstance(plain, dict) or "slots" not in plain:
        raise ValueError("structured query must be an object with 'slots'")
    filters = plain.get("docFilters") or {}
    l1 = filters.get("l1")
    level = filters.get("level")
    slots = []
    try:
        for s in plain["slots"]:
            constraints = tuple(
                Constraint(c["key"], c.get("op", "eq"), c["value"])
                for c in s["constraints"])
            q = s.get("quantifier") or {"kind": "one"}
            if isinstance(q, str):
                q = {"kind": q}
            if q.get("kind") in _QUANTIFIER_KINDS:
                lo, hi = _QUANTIFIER_KINDS[q["kind"]]
            else:
                lo, hi = int(q["min"]), q["max"]
                hi = None if hi is None else int(hi)
            slots.append(Slot(constraints, Quantifier(lo, hi),
                              bool(s.get("keyword", False))))
        return PatternQuery(
            slots=tuple(slots),
            doc_filters=DocFilters(l1=frozenset(l1) if l1 else None,
                                   level=frozenset(level) if level else None))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed structured query: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, QueryParseError):
            raise
        raise QuerySemanticsError(str(exc)) from exc


# --- automaton --------------------------------------------------------------

class Transition(NamedTuple):
    constraints: tuple[Constraint, ...]
    is_keyword: bool
    target: int


@dataclass(frozen=True)
class TokenAutomaton:
    """NFA over tokens; every accepting path crosses the keyword transition
    exactly once (guaranteed by construction from a PatternQuery)."""

    n_states: int
    transitions: tuple[tuple[Transition, ...], ...]  # by source state
    epsilon: tuple[tuple[int, ...], ...]
    start: int
    accept: int

    def closure(self, states: Iterable[tuple[int, int | None]]) -> set[tuple[int, int | None]]:
        seen = set(states)
        stack = list(seen)
        while stack:
            state, kw = stack.pop()
            for target in self.epsilon[state]:
                thread = (target, kw)
                if thread not in seen:
                    seen.add(thread)
                    stack.append(thread)
        return seen


def compile_query(query: PatternQuery) -> TokenAutomaton:
    """Thompson-style construction: optional adds an epsilon bypass, star a
    consuming self-loop, range(m,n) m copies plus (n-m) optionals."""
    transitions: list[list[Transition]] = [[]]
    epsilon: list[list[int]] = [[]]

    def new_state() -> int:
        transitions.append([])
        epsilon.append([])
        return len(transitions) - 1

    cur = 0
    for slot in query.slots:
        q = slot.quantifier
        for _ in range(q.min):
            nxt = new_state()
            transitions[cur].append(Transition(slot.constraints, slot.keyword, nxt))
            cur = nxt
        if q.max is None:
            nxt = new_state()
            transitions[cur].append(Transition(slot.constraints, False, cur))
            epsilon[cur].append(nxt)
            cur = nxt
        else:
            for _ in range(q.max - q.min):
                nxt = new_state()
                transitions[cur].append(Transition(slot.constraints, False, nxt))
                epsilon[cur].append(nxt)
                cur = nxt
    return TokenAutomaton(
        n_states=len(transitions),
        transitions=tuple(tuple(t) for t in transitions),
        epsilon=tuple(tuple(e) for e in epsilon),
        start=0,
        accept=cur)


# --- matching ---------------------------------------------------------------

class Match(NamedTuple):
    start_token: int
    end_token: int
    keyword_token: int


def constraint_holds(constraint: Constraint, token: MorphoToken,
                     covering: Sequence[ErrorSpan]) -> bool:
    key, value = constraint.key, constraint.value
    if key == "surface":
        hit = token.surface == value
    elif key == "lemma":
        hit = token.lemma.casefold() == value.casefold()
    elif key == "pos":
        hit = token.pos.casefold() == value.casefold()
    elif key == "trait":
        wanted = value.casefold()
        hit = any(t.casefold() == wanted for t in token.traits)
    elif key == "error":
        hit = bool(covering) == (value.casefold() == "yes")
    elif key == "cat":
        wanted = tuple(value.casefold().split("-"))
        hit = any(tuple(s.casefold() for s in span.segments[:len(wanted)]) == wanted
                  for span in covering)
    elif key == "corr":
        hit = any(span.corrected_form == value for span in covering)
    else:  # unreachable: Constraint validates its key
        raise ValueError(f"unknown constraint key {key!r}")
    return hit if constraint.op == "eq" else not hit


def spans_covering(sentence: Sequence[MorphoToken],
                   spans: Iterable[ErrorSpan]) -> list[list[ErrorSpan]]:
    """Per-token lists of covering spans, innermost (narrowest) first."""
    cover: list[list[ErrorSpan]] = [[] for _ in sentence]
    for span in spans:
        for i in range(max(span.first_token, 0),
                       min(span.last_token, len(sentence) - 1) + 1):
            cover[i].append(span)
    for lists in cover:
        lists.sort(key=lambda s: (s.last_token - s.first_token, s.first_token))
    return cover


def match_sentence(automaton: TokenAutomaton, sentence: Sequence[MorphoToken],
                   spans: Iterable[ErrorSpan] = (),
                   starts: Iterable[int] | None = None) -> list[Match]:
    """All matches of the automaton inside one sentence.

    Matches are enumerated exhaustively, ordered leftmost-start then
    shortest-first, and never cross the sentence boundary. ``starts``
    optionally restricts the attempted start offsets (used by indexed
    retrieval); the default tries every offset.
    """
    n = len(sentence)
    if n == 0:
        return []
    cover = spans_covering(sentence, spans)
    memo: dict[tuple[int, int], bool] = {}

    def conj_holds(constraints: tuple[Constraint, ...], j: int) -> bool:
        key = (id(constraints), j)
        hit = memo.get(key)
        if hit is None:
            hit = all(constraint_holds(c, sentence[j], cover[j])
                      for c in constraints)
            memo[key] = hit
        return hit

    results: set[Match] = set()
    start_list = sorted(set(starts)) if starts is not None else range(n)
    for s in start_list:
        if s < 0 or s >= n:
            continue
        threads = automaton.closure([(automaton.start, None)])
        for j in range(s, n):
            stepped: set[tuple[int, int | None]] = set()
            for state, kw in threads:
                for constraints, is_kw, target in automaton.transitions[state]:
                    if conj_holds(constraints, j):
                        stepped.add((target, j if is_kw else kw))
            threads = automaton.closure(stepped)
            if not threads:
                break
            for state, kw in threads:
                if state == automaton.accept and kw is not None:
                    results.add(Match(s, j, kw))
    return sorted(results)
