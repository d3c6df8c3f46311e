"""Rule-based actor extraction and event-kind classification.

The diary's formal style gives two reliable cues: surnames of the people the
President meets are written ALL-CAPS, and names are introduced by a closed
vocabulary of honorific titles ("On.", "Sen.", ...). A mention is

    (honorific tokens)* (capitalized given-name tokens)* (ALL-CAPS surname)+

followed, when a comma comes next, by a role phrase running to the next
top-level delimiter (", e " or " e " joining conjunction, a semicolon, or
the end of the text). Bare ALL-CAPS runs with neither honorific nor given
name are checked against an organization stop-list so acronyms like FAO do
not become people.

All rules are data: they live in a user-editable vocabulary file, so the
approach transfers to other corpora with a different vocabulary.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .ingest import DiaryRecord

MEETING = "meeting"
CEREMONY = "ceremony_or_speech"
UNCLASSIFIED = "unclassified"

# Reason codes attached to flagged events.
FLAG_UNCLASSIFIED = "unclassified"
FLAG_NO_HONORIFIC = "no_honorific"
FLAG_NO_ROLE_PHRASE = "no_role_phrase"
FLAG_UNRESOLVED = "unresolved_actor"
FLAG_AMBIGUOUS = "ambiguous_name"

# A lone particle never forms a surname by itself; a leading particle merges
# into a longer ALL-CAPS run (DELLA VALLE).
_PARTICLES = frozenset(
    {"DI", "DEL", "DELLA", "DELLE", "DEI", "DEGLI", "DE", "DA", "DAL", "DALLA", "LA", "LE", "LO"}
)

_TOKEN_RE = re.compile(r"[^\s,;]+")
_ROLE_TERMINATORS = (", e ", " e ", ";")


def _nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


class VocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class RoleVocabulary:
    """The closed vocabularies driving extraction.

    ``honorifics`` maps each title token to a category hint (e.g. "On." is a
    member of Parliament); ``ceremony_markers`` are phrase prefixes that mark
    non-meeting events; ``org_stoplist`` suppresses bare ALL-CAPS acronyms;
    ``meeting_verb`` is the canonical verb coded for meetings.
    """

    honorifics: tuple[tuple[str, str], ...]
    ceremony_markers: tuple[str, ...]
    org_stoplist: tuple[str, ...] = ()
    meeting_verb: str = "incontra"

    def __post_init__(self):
        object.__setattr__(
            self,
            "honorifics",
            tuple((_nfc(t).strip(), _nfc(h).strip()) for t, h in self.honorifics),
        )
        object.__setattr__(
            self, "ceremony_markers", tuple(_nfc(m).strip() for m in self.ceremony_markers)
        )
        object.__setattr__(
            self, "org_stoplist", tuple(_nfc(s).strip() for s in self.org_stoplist)
        )
        problems = []
        if not self.honorifics:
            problems.append("honorifics list is empty")
        if not self.ceremony_markers:
            problems.append("ceremony_markers list is empty")
        for label, items in (
            ("honorifics", [t for t, _ in self.honorifics]),
            ("ceremony_markers", self.ceremony_markers),
            ("org_stoplist", self.org_stoplist),
        ):
            if len(set(items)) != len(items):
                problems.append(f"{label} contains duplicates")
            if any(not t for t in items):
                problems.append(f"{label} contains an empty token")
        if not self.meeting_verb.strip():
            problems.append("meeting_verb is empty")
        if problems:
            raise VocabularyError("; ".join(problems))
        object.__setattr__(self, "_hon_set", frozenset(t for t, _ in self.honorifics))
        object.__setattr__(self, "_stop_set", frozenset(self.org_stoplist))

    def hint_for(self, token: str) -> str | None:
        for t, h in self.honorifics:
            if t == _nfc(token):
                return h
        return None

    def is_honorific(self, token: str) -> bool:
        return _nfc(token) in self._hon_set

    def is_stoplisted(self, text: str) -> bool:
        return _nfc(text) in self._stop_set


@dataclass(frozen=True)
class ActorMention:
    """One extracted person.

    ``surname`` keeps the original ALL-CAPS source form; ``surname_title`` is
    the title-cased form used for knowledge-base matching. ``span`` is the
    character range of the surname inside the description, so slicing the
    description at it reproduces the matched surname exactly.
    """

    honorifics: tuple[str, ...]
    given_name: str
    surname: str
    role_phrase: str
    span: tuple[int, int]
    confidence: str  # "high" | "low"

    @property
    def surname_title(self) -> str:
        return self.surname.title()

    @property
    def display_name(self) -> str:
        parts = list(self.honorifics)
        if self.given_name:
            parts.append(self.given_name)
        parts.append(self.surname)
        return " ".join(parts)


def _is_allcaps(token: str) -> bool:
    letters = [c for c in token if c.isalpha()]
    if len(letters) < 2:
        return False
    if not all(c.isupper() for c in letters):
        return False
    return all(c.isalpha() or c in "'’-" for c in token)


def _is_given(token: str) -> bool:
    letters = [c for c in token if c.isalpha()]
    if not letters:
        return False
    if not letters[0].isupper() or not all(c.islower() for c in letters[1:]):
        return False
    return token[0].isalpha() and all(c.isalpha() or c in "'’-." for c in token)


def _is_particle(token: str) -> bool:
    return token.upper().rstrip("'’") in _PARTICLES or token.upper() in {"D'", "D’"}


def extract_actors(description: str, vocab: RoleVocabulary) -> list[ActorMention]:
    """Extract every actor mention, in left-to-right span order.

    Zero mentions is a normal result (ceremonies, speeches). Confidence is
    low when the mention lacks any honorific or its role phrase is empty.
    """
    tokens = [(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(description)]
    n = len(tokens)

    def clean_sep(a: int, b: int) -> bool:
        # Tokens a and b may join into one mention only across plain space.
        gap = description[tokens[a][2] : tokens[b][1]]
        return "," not in gap and ";" not in gap

    mentions: list[ActorMention] = []
    i = 0
    while i < n:
        j = i
        hons: list[str] = []
        while j < n and vocab.is_honorific(tokens[j][0]) and (j == i or clean_sep(j - 1, j)):
            hons.append(tokens[j][0])
            j += 1
        givens: list[str] = []
        while (
            j < n
            and not vocab.is_honorific(tokens[j][0])
            and _is_given(tokens[j][0])
            and (j == i or clean_sep(j - 1, j))
        ):
            givens.append(tokens[j][0])
            j += 1
        caps: list[int] = []
        while j < n and _is_allcaps(tokens[j][0]) and (j == i or clean_sep(j - 1, j)):
            caps.append(j)
            j += 1
        while caps and _is_particle(tokens[caps[-1]][0]):
            caps.pop()
        if not caps or all(_is_particle(tokens[k][0]) for k in caps):
            i += 1
            continue

        span = (tokens[caps[0]][1], tokens[caps[-1]][2])
        surname = description[span[0] : span[1]]
        if not hons and not givens and vocab.is_stoplisted(surname):
            i = caps[-1] + 1
            continue

        role_phrase = ""
        resume_char = span[1]
        pos = span[1]
        while pos < len(description) and description[pos] == " ":
            pos += 1
        if pos < len(description) and description[pos] == ",":
            role_start = pos + 1
            cut = len(description)
            cut_len = 0
            for term in _ROLE_TERMINATORS:
                at = description.find(term, role_start)
                if at != -1 and at < cut:
                    cut, cut_len = at, len(term)
            role_phrase = description[role_start:cut].strip()
            resume_char = cut + cut_len

        confidence = "high" if hons and role_phrase else "low"
        mentions.append(
            ActorMention(
                honorifics=tuple(hons),
                given_name=" ".join(givens),
                surname=surname,
                role_phrase=role_phrase,
                span=span,
                confidence=confidence,
            )
        )
        i = caps[-1] + 1
        while i < n and tokens[i][1] < resume_char:
            i += 1
    return mentions


def classify_event(description: str, mentions: list[ActorMention], vocab: RoleVocabulary) -> str:
    """Meeting iff at least one mention; else ceremony/speech when the text
    opens with a ceremony marker; else unclassified."""
    if mentions:
        return MEETING
    lead = _nfc(description.strip())
    for marker in vocab.ceremony_markers:
        if lead.startswith(marker):
            return CEREMONY
    return UNCLASSIFIED


def flag_reasons(mentions: list[ActorMention], kind: str) -> list[str]:
    """Reason codes that force human review, before knowledge-base lookup."""
    reasons: list[str] = []
    if kind == UNCLASSIFIED:
        reasons.append(FLAG_UNCLASSIFIED)
    for m in mentions:
        if m.confidence == "low":
            if not m.honorifics and FLAG_NO_HONORIFIC not in reasons:
                reasons.append(FLAG_NO_HONORIFIC)
            if not m.role_phrase and FLAG_NO_ROLE_PHRASE not in reasons:
                reasons.append(FLAG_NO_ROLE_PHRASE)
    return reasons


def flag_for_review(record: DiaryRecord, mentions: list[ActorMention], kind: str) -> str:
    """"auto" or "flagged". Knowledge-base lookup failures escalate later,
    during enrichment; this covers the extraction-local rules."""
    return "flagged" if flag_reasons(mentions, kind) else "auto"


# ---------------------------------------------------------------------------
# Vocabulary file: JSON with honorifics (token + hint), ceremony_markers,
# org_stoplist, meeting_verb.
# ---------------------------------------------------------------------------


def vocabulary_from_json(text: str) -> RoleVocabulary:
    import json

    obj = json.loads(text)
    return RoleVocabulary(
        honorifics=tuple((h["token"], h.get("hint", "")) for h in obj.get("honorifics", ())),
        ceremony_markers=tuple(obj.get("ceremony_markers", ())),
        org_stoplist=tuple(obj.get("org_stoplist", ())),
        meeting_verb=obj.get("meeting_verb", "incontra"),
    )


def load_vocabulary(path) -> RoleVocabulary:
    with open(path, encoding="utf-8") as f:
        return vocabulary_from_json(f.read())
