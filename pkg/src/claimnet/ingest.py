"""Corpus, gold-annotation, and CoNLL-U ingestion plus the keyword query
engine that defines the article universe.

The corpus is UTF-8 JSONL (one document per line). NLP pre-annotations are
consumed from per-document CoNLL-U files; NER spans travel either in the MISC
column (``NER=B-PER`` etc.) or in a sibling ``<doc_id>.spans.tsv``. Sentence
character spans are recovered by strict left-to-right alignment of token
surfaces against the document text -- a mismatch is an error, never a silent
skip, because a drifted offset would corrupt every downstream span.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AlignmentError, InputError, QueryParseError

_WORD_RE = re.compile(r"\w+", re.UNICODE)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    index: int  # 1-based within sentence
    surface: str
    lemma: str
    upos: str
    head: int  # 0 = root
    deprel: str


@dataclass(frozen=True)
class EntitySpan:
    first: int  # 1-based token indices, inclusive
    last: int
    label: str  # "PER" | "ORG" | "other"
    surface: str


@dataclass
class SentenceAnnotation:
    index: int  # 0-based sentence ordinal
    char_span: tuple[int, int]  # [start, end) into Document.text
    tokens: list[Token]
    entities: list[EntitySpan] = field(default_factory=list)


@dataclass
class Document:
    id: str
    date: dt.date
    newspaper: str
    section: str
    title: str
    text: str
    sentences: list[SentenceAnnotation] = field(default_factory=list)

    def sentence_text(self, index: int) -> str:
        s = self.sentences[index]
        return self.text[s.char_span[0] : s.char_span[1]]


@dataclass(frozen=True)
class GoldDyad:
    article_id: str
    date: dt.date
    actor: str
    category_code: int
    polarity: int  # +1 or -1

    @property
    def code(self) -> int:
        return self.category_code


@dataclass(frozen=True)
class QueryTerm:
    text: str  # lower-cased, '*' stripped
    prefix: bool  # True when the raw term ended in '*'


@dataclass(frozen=True)
class KeywordQuery:
    """Conjunction of OR-groups plus one (possibly empty) NOT-group."""

    groups: tuple[tuple[QueryTerm, ...], ...]
    not_group: tuple[QueryTerm, ...] = ()


# ---------------------------------------------------------------------------
# Corpus and gold loading
# ---------------------------------------------------------------------------

_REQUIRED_FIELDS = ("id", "date", "newspaper", "section", "title", "text")


def _parse_date(value: str, where: str) -> dt.date:
    try:
        return dt.date.fromisoformat(value)
    except (TypeError, ValueError):
        raise InputError(f"{where}: unparseable date {value!r}") from None


def load_corpus(path: str | Path) -> list[Document]:
    """Load a JSONL corpus, rejecting duplicate ids and malformed records."""
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"line {lineno}: malformed JSON ({exc.msg})") from None
            for key in _REQUIRED_FIELDS:
                if key not in rec:
                    raise InputError(f"line {lineno}: missing field {key!r}")
            doc_id = str(rec["id"])
            if doc_id in seen:
                raise InputError(f"line {lineno}: duplicate document id {doc_id!r}")
            seen.add(doc_id)
            if not rec["text"]:
                raise InputError(f"line {lineno}: empty text for document {doc_id!r}")
            docs.append(
                Document(
                    id=doc_id,
                    date=_parse_date(rec["date"], f"line {lineno}"),
                    newspaper=str(rec["newspaper"]),
                    section=str(rec["section"]),
                    title=str(rec["title"]),
                    text=str(rec["text"]),
                )
            )
    return docs


def load_gold(path: str | Path, codebook) -> list[GoldDyad]:
    """Load the gold dyad CSV, validating codes and the polarity domain."""
    import csv

    gold: list[GoldDyad] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"article_id", "date", "actor", "category_code", "polarity"}
        if reader.fieldnames is None or not expected.issubset(set(reader.fieldnames)):
            raise InputError(f"gold file must have columns {sorted(expected)}")
        for lineno, row in enumerate(reader, start=2):
            raw_pol = row["polarity"].strip().replace("−", "-")
            if raw_pol in ("1", "+1"):
                pol = 1
            elif raw_pol == "-1":
                pol = -1
            else:
                raise InputError(f"line {lineno}: polarity {row['polarity']!r} not in {{+1, -1}}")
            try:
                code = int(row["category_code"])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer category code") from None
            if not codebook.knows(code):
                raise InputError(f"line {lineno}: unknown category code {code}")
            gold.append(
                GoldDyad(
                    article_id=row["article_id"],
                    date=_parse_date(row["date"], f"line {lineno}"),
                    actor=row["actor"],
                    category_code=code,
                    polarity=pol,
                )
            )
    return gold


# ---------------------------------------------------------------------------
# Keyword query: GROUP (AND GROUP)* (NOT GROUP)? ; GROUP = ( TERM (OR TERM)* )
# ---------------------------------------------------------------------------


def _tokenize_query(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, ch, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append(("WORD", text[i:j], i))
            i = j
    return tokens


def parse_query(text: str) -> KeywordQuery:
    """Parse a boolean keyword query; AND/OR/NOT are case-insensitive."""
    tokens = _tokenize_query(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, len(text))

    def take(expected: str):
        nonlocal pos
        kind, value, at = peek()
        if kind != expected:
            raise QueryParseError(f"expected {expected!r}, found {value!r}", at)
        pos += 1
        return value, at

    def parse_term() -> QueryTerm:
        value, at = take("WORD")
        if value.upper() in ("AND", "OR", "NOT"):
            raise QueryParseError(f"unexpected keyword {value!r} in group", at)
        prefix = value.endswith("*")
        body = value[:-1] if prefix else value
        if not body:
            raise QueryParseError("empty term", at)
        return QueryTerm(body.lower(), prefix)

    def parse_group() -> tuple[QueryTerm, ...]:
        take("(")
        terms = [parse_term()]
        while True:
            kind, value, _ = peek()
            if kind == "WORD" and value.upper() == "OR":
                take("WORD")
                terms.append(parse_term())
            elif kind == ")":
                take(")")
                return tuple(terms)
            else:
                raise QueryParseError(f"expected OR or ')', found {value!r}", peek()[2])

    groups = [parse_group()]
    not_group: tuple[QueryTerm, ...] = ()
    while pos < len(tokens):
        kind, value, at = peek()
        if kind == "WORD" and value.upper() == "AND":
            take("WORD")
            groups.append(parse_group())
        elif kind == "WORD" and value.upper() == "NOT":
            take("WORD")
            not_group = parse_group()
            if pos < len(tokens):
                raise QueryParseError("trailing input after NOT group", peek()[2])
        else:
            raise QueryParseError(f"expected AND or NOT, found {value!r}", at)
    return KeywordQuery(tuple(groups), not_group)


def _term_matches(term: QueryTerm, token: str) -> bool:
    # Starred terms are token-initial prefixes; bare terms match inside the
    # token as well, so 'bombe' catches German compounds like 'Atombombe'.
    if term.prefix:
        return token.startswith(term.text)
    return term.text in token


def _group_matches(group: tuple[QueryTerm, ...], doc_tokens: list[str]) -> bool:
    return any(_term_matches(t, tok) for t in group for tok in doc_tokens)


def document_tokens(doc: Document, fields: tuple[str, ...] = ("title", "text")) -> list[str]:
    parts = [getattr(doc, f) for f in fields]
    return _WORD_RE.findall(" ".join(parts).lower())


def matches_query(doc: Document, q: KeywordQuery, fields: tuple[str, ...] = ("title", "text")) -> bool:
    toks = document_tokens(doc, fields)
    if q.not_group and _group_matches(q.not_group, toks):
        return False
    return all(_group_matches(g, toks) for g in q.groups)


def keyword_filter(
    docs: list[Document], q: KeywordQuery, fields: tuple[str, ...] = ("title", "text")
) -> list[Document]:
    """Keep documents where every positive group matches and the NOT-group does not."""
    return [d for d in docs if matches_query(d, q, fields)]


def exclude_sections(docs: list[Document], section_patterns: list[str]) -> list[Document]:
    """Drop documents whose section contains any pattern (case-insensitive)."""
    pats = [p.lower() for p in section_patterns]
    return [d for d in docs if not any(p in d.section.lower() for p in pats)]


# ---------------------------------------------------------------------------
# CoNLL-U
# ---------------------------------------------------------------------------


def _parse_conllu_sentences(path: Path):
    """Yield (token_rows, mwt_ranges) per sentence.

    token_rows are the 10-column lists for ordinary integer-id tokens; empty
    nodes (decimal ids) are dropped; multiword-token ranges are kept for
    surface alignment only.
    """
    sentences = []
    rows: list[list[str]] = []
    mwts: list[tuple[int, int, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                if rows:
                    sentences.append((rows, mwts))
                    rows, mwts = [], []
                continue
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise InputError(f"{path.name}:{lineno}: expected 10 columns, got {len(cols)}")
            tid = cols[0]
            if "." in tid:
                continue  # empty node
            if "-" in tid:
                try:
                    start, end = (int(x) for x in tid.split("-"))
                except ValueError:
                    raise InputError(f"{path.name}:{lineno}: bad token id {tid!r}") from None
                mwts.append((start, end, cols[1]))
                continue
            rows.append(cols)
    if rows:
        sentences.append((rows, mwts))
    return sentences


def _rows_to_tokens(rows: list[list[str]], where: str) -> list[Token]:
    tokens = []
    for cols in rows:
        try:
            idx = int(cols[0])
            head = int(cols[6]) if cols[6] != "_" else 0
        except ValueError:
            raise InputError(f"{where}: non-integer id or head in row {cols[0]!r}") from None
        tokens.append(
            Token(index=idx, surface=cols[1], lemma=cols[2], upos=cols[3], head=head, deprel=cols[7])
        )
    n = len(tokens)
    roots = [t for t in tokens if t.head == 0]
    if len(roots) != 1:
        raise InputError(f"{where}: expected exactly one root, found {len(roots)}")
    for t in tokens:
        if not (0 <= t.head <= n):
            raise InputError(f"{where}: head {t.head} out of range for {n} tokens")
    return tokens


def _misc_ner_tag(cols: list[str]) -> str:
    for part in cols[9].split("|"):
        if part.startswith("NER="):
            return part[4:]
    return "O"


def _collapse_label(raw: str) -> str:
    return raw if raw in ("PER", "ORG") else "other"


def _bio_spans(tags: list[str], tokens: list[Token]) -> list[EntitySpan]:
    """Reconstruct entity spans from BIO tags; spans open only at B tags."""
    spans: list[EntitySpan] = []
    start = None
    label = None
    for i, tag in enumerate(tags, start=1):
        if tag.startswith("B-"):
            if start is not None:
                spans.append(_make_span(start, i - 1, label, tokens))
            start, label = i, tag[2:]
        elif tag.startswith("I-") and start is not None and tag[2:] == label:
            continue
        else:
            if start is not None:
                spans.append(_make_span(start, i - 1, label, tokens))
                start, label = None, None
    if start is not None:
        spans.append(_make_span(start, len(tags), label, tokens))
    return spans


def _make_span(first: int, last: int, raw_label: str, tokens: list[Token]) -> EntitySpan:
    surface = " ".join(t.surface for t in tokens[first - 1 : last])
    return EntitySpan(first=first, last=last, label=_collapse_label(raw_label), surface=surface)


def _load_spans_file(path: Path, sentences: list[SentenceAnnotation]) -> None:
    import csv

    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        required = {"sent_index", "first_token", "last_token", "label"}
        if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
            raise InputError(f"{path.name}: spans file must have columns {sorted(required)}")
        for lineno, row in enumerate(reader, start=2):
            si = int(row["sent_index"])
            first, last = int(row["first_token"]), int(row["last_token"])
            if not (0 <= si < len(sentences)):
                raise InputError(f"{path.name}:{lineno}: sentence index {si} out of range")
            toks = sentences[si].tokens
            if not (1 <= first <= last <= len(toks)):
                raise InputError(f"{path.name}:{lineno}: token range out of range")
            sentences[si].entities.append(_make_span(first, last, row["label"], toks))


def _align(units: list[str], text: str, start: int, where: str) -> tuple[int, int]:
    """Align surfaces left-to-right against text, tolerating any whitespace.

    Returns the [first_char, end_char) span covered by the units.
    """
    pos = start
    span_start = None
    for i, surface in enumerate(units):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if not text.startswith(surface, pos):
            raise AlignmentError(
                f"{where}: token {i + 1} {surface!r} not found at text offset {pos}"
            )
        if span_start is None:
            span_start = pos
        pos += len(surface)
    return (span_start if span_start is not None else pos, pos)


def _alignment_units(rows: list[list[str]], mwts: list[tuple[int, int, str]]) -> list[str]:
    covered: set[int] = set()
    by_start = {s: (e, surf) for s, e, surf in mwts}
    units: list[str] = []
    for cols in rows:
        idx = int(cols[0])
        if idx in covered:
            continue
        if idx in by_start:
            end, surf = by_start[idx]
            covered.update(range(idx, end + 1))
            units.append(surf)
        else:
            units.append(cols[1])
    return units


def load_conllu(path: str | Path, doc: Document) -> list[SentenceAnnotation]:
    """Parse a CoNLL-U file and align its sentences to ``doc.text``.

    NER spans come from a sibling ``<stem>.spans.tsv`` when present, otherwise
    from ``NER=`` sub-fields of the MISC column.
    """
    path = Path(path)
    parsed = _parse_conllu_sentences(path)
    sentences: list[SentenceAnnotation] = []
    cursor = 0
    for si, (rows, mwts) in enumerate(parsed):
        where = f"{path.name} sentence {si}"
        tokens = _rows_to_tokens(rows, where)
        units = _alignment_units(rows, mwts)
        span = _align(units, doc.text, cursor, where)
        cursor = span[1]
        sentences.append(SentenceAnnotation(index=si, char_span=span, tokens=tokens))
    spans_path = path.with_suffix(".spans.tsv")
    if spans_path.exists():
        _load_spans_file(spans_path, sentences)
    else:
        for (rows, _), sent in zip(parsed, sentences):
            tags = [_misc_ner_tag(cols) for cols in rows]
            sent.entities = _bio_spans(tags, sent.tokens)
    return sentences
