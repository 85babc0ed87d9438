"""Actor identification for claim candidates: inside/outside case detection
via verb cues and dependency subjects, entity-to-claim linking, and
corpus-wide actor-name normalization (longest attested match, genitive-s
stripping).

Only inside cases -- a named PER/ORG entity acting as subject of a cue verb
in the claim sentence itself -- produce links. Pronoun subjects mark outside
cases and are dropped; coreference resolution is out of scope.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .claims import ClaimCandidate
from .errors import InputError
from .ingest import Document, SentenceAnnotation

SUBJECT_DEPRELS = {"nsubj", "nsubj:pass"}

INSIDE = "inside"
OUTSIDE = "outside"
NONE = "none"

_DEFAULT_INSIDE = frozenset(
    {"fordern", "plädieren", "verlangen", "ankündigen", "kritisieren", "warnen", "wollen"}
)
_DEFAULT_OUTSIDE = frozenset({"sagen", "betonen", "kritisieren", "erklären"})


@dataclass(frozen=True)
class VerbCueLexicon:
    inside: frozenset[str] = _DEFAULT_INSIDE
    outside: frozenset[str] = _DEFAULT_OUTSIDE

    @property
    def all_cues(self) -> frozenset[str]:
        return self.inside | self.outside


def default_cue_lexicon() -> VerbCueLexicon:
    """The cue lexicon shipped with the package."""
    from importlib import resources

    with resources.as_file(resources.files("claimnet") / "data" / "verb_cues.txt") as p:
        return load_cue_file(p)


def load_cue_file(path: str | Path) -> VerbCueLexicon:
    """Read a cue lexicon: one lemma per line under [inside] / [outside]."""
    inside: set[str] = set()
    outside: set[str] = set()
    current: set[str] | None = None
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[inside]":
            current = inside
        elif line == "[outside]":
            current = outside
        elif line.startswith("["):
            raise InputError(f"{path}:{lineno}: unknown section {line!r}")
        else:
            if current is None:
                raise InputError(f"{path}:{lineno}: lemma before any section header")
            current.add(line)
    if not inside and not outside:
        raise InputError(f"{path}: cue lexicon is empty")
    return VerbCueLexicon(frozenset(inside), frozenset(outside))


@dataclass(frozen=True)
class ActorMention:
    surface: str
    normalized: str
    entity_type: str  # "PER" | "ORG"
    doc_id: str
    sentence_index: int
    token_range: tuple[int, int]


@dataclass(frozen=True)
class ActorClaimLink:
    actor: ActorMention
    candidate: ClaimCandidate
    cue_verb_lemma: str


def _subject_tokens(s: SentenceAnnotation, cues: frozenset[str]) -> dict[int, str]:
    """Map token index -> cue-verb lemma for subjects of cue verbs,
    expanding coordinated subjects through conj chains."""
    by_index = {t.index: t for t in s.tokens}
    subjects: dict[int, str] = {}
    for t in s.tokens:
        if t.deprel in SUBJECT_DEPRELS:
            head = by_index.get(t.head)
            if head is not None and head.lemma in cues:
                subjects[t.index] = head.lemma
    changed = True
    while changed:
        changed = False
        for t in s.tokens:
            if t.deprel == "conj" and t.head in subjects and t.index not in subjects:
                subjects[t.index] = subjects[t.head]
                changed = True
    return subjects


def detect_case(s: SentenceAnnotation, lex: VerbCueLexicon) -> str:
    """Classify a sentence as inside, outside, or none.

    Inside: a PER/ORG entity is subject of a cue verb. Outside: a pronoun is.
    Inside takes precedence when both patterns occur.
    """
    subjects = _subject_tokens(s, lex.all_cues)
    if subjects:
        for ent in s.entities:
            if ent.label in ("PER", "ORG") and any(
                ent.first <= idx <= ent.last for idx in subjects
            ):
                return INSIDE
        by_index = {t.index: t for t in s.tokens}
        if any(by_index[idx].upos == "PRON" for idx in subjects):
            return OUTSIDE
    return NONE


def extract_links(
    s: SentenceAnnotation,
    candidates: list[ClaimCandidate],
    lex: VerbCueLexicon,
    attested: Mapping[str, int] | set[str] | None = None,
) -> list[ActorClaimLink]:
    """One link per (entity-subject, cue-verb) pair for each candidate in this
    sentence. Outside cases yield no links; coordinated subjects yield one
    link each."""
    subjects = _subject_tokens(s, lex.all_cues)
    if not subjects:
        return []
    links: list[ActorClaimLink] = []
    for cand in candidates:
        if cand.sentence_index != s.index:
            continue
        for ent in s.entities:
            if ent.label not in ("PER", "ORG"):
                continue
            lemmas = {subjects[idx] for idx in subjects if ent.first <= idx <= ent.last}
            for lemma in sorted(lemmas):
                normalized = (
                    normalize_actor(ent.surface, attested) if attested is not None else ent.surface
                )
                links.append(
                    ActorClaimLink(
                        actor=ActorMention(
                            surface=ent.surface,
                            normalized=normalized,
                            entity_type=ent.label,
                            doc_id=cand.doc_id,
                            sentence_index=s.index,
                            token_range=(ent.first, ent.last),
                        ),
                        candidate=cand,
                        cue_verb_lemma=lemma,
                    )
                )
    return links


# ---------------------------------------------------------------------------
# Name normalization
# ---------------------------------------------------------------------------


def build_attested_index(docs: Iterable[Document]) -> Counter:
    """Count every PER/ORG entity surface in the corpus."""
    counts: Counter = Counter()
    for doc in docs:
        for s in doc.sentences:
            for ent in s.entities:
                if ent.label in ("PER", "ORG"):
                    counts[ent.surface] += 1
    return counts


def _counts(attested) -> Mapping[str, int]:
    if isinstance(attested, Mapping):
        return attested
    return {name: 1 for name in attested}


def _contains_token_seq(hay: list[str], needle: list[str]) -> bool:
    n = len(needle)
    return any(hay[i : i + n] == needle for i in range(len(hay) - n + 1))


def resolve_actor(surface: str, attested) -> tuple[str, list[str]]:
    """Resolve a surface to its canonical attested form.

    Strips a trailing genitive 's' when the stripped form is attested, then
    picks the longest attested name -- most tokens -- containing the surface
    at token boundaries ('Merkel' extends to 'Angela Merkel' but never to
    'Merkelismus'). Length ties break by corpus frequency, then
    lexicographically; co-finalists are returned for ambiguity logging.
    """
    if not surface:
        raise InputError("cannot normalize an empty actor surface")
    counts = _counts(attested)
    stripped = surface
    if surface.endswith("s") and surface[:-1] in counts:
        stripped = surface[:-1]
    needle = stripped.split()
    matches = [
        name
        for name in counts
        if len(name.split()) > len(needle) and _contains_token_seq(name.split(), needle)
    ]
    if not matches:
        return stripped, []
    longest = max(len(name.split()) for name in matches)
    finalists = sorted(
        (name for name in matches if len(name.split()) == longest),
        key=lambda name: (-counts[name], name),
    )
    return finalists[0], finalists[1:]


def normalize_actor(surface: str, attested) -> str:
    """Canonical form of an actor surface given the attested-name index."""
    return resolve_actor(surface, attested)[0]
