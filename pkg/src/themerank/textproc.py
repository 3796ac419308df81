"""Sentence segmentation, tokenization and noise removal for long legal documents.

Noise removal targets the artifacts that pollute Brazilian appeal texts:
docket-style process numbers, registry numbers that identify people or
companies, monetary amounts, long digit runs and street addresses, followed
by whole-word stopword removal.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

TokenSequence = list[str]

_TERMINALS = ".!?…"
_WORD_RE = re.compile(r"[^\W_]+")

# Sentence-final abbreviations that must not end a sentence, stored without
# their trailing period.
DEFAULT_ABBREVIATIONS = frozenset(
    {
        "art",
        "arts",
        "av",
        "fl",
        "fls",
        "nº",
        "n°",
        "inc",
        "incs",
        "§",
        "§§",
        "dr",
        "dra",
        "min",
        "rel",
        "proc",
    }
)


@dataclass(frozen=True)
class Sentence:
    """A sentence with its 0-based position in the source document."""

    index: int
    text: str


@dataclass(frozen=True)
class RemovalRule:
    """A named regular-expression rule applied during noise removal."""

    name: str
    pattern: re.Pattern

    @classmethod
    def compile(cls, name: str, pattern: str) -> "RemovalRule":
        try:
            return cls(name, re.compile(pattern))
        except re.error as exc:
            raise ValueError(f"removal pattern {name!r} is not a valid regex: {exc}") from exc


def default_removal_rules() -> tuple[RemovalRule, ...]:
    """Ordered default removal rules; each may be overridden in the run config."""
    return (
        # CNJ-style docket mask NNNNNNN-NN.NNNN.N.NN.NNNN
        RemovalRule.compile("process_number", r"\b\d{7}-\d{2}\.\d{4}\.\d\.\d{2}\.\d{4}\b"),
        # CPF and CNPJ masks, the registry numbers naming people and companies
        RemovalRule.compile(
            "registry_number",
            r"\b\d{3}\.\d{3}\.\d{3}-\d{2}\b|\b\d{2}\.\d{3}\.\d{3}/\d{4}-\d{2}\b",
        ),
        RemovalRule.compile("monetary_value", r"R\$\s*\d[\d.,]*"),
        # standalone digit runs of length >= 4 (years, docket fragments, zip codes)
        RemovalRule.compile("digit_run", r"\b\d{4,}\b"),
        # street address prefixes, consumed to end of line or sentence;
        # CSV-loaded documents are often one physical line, so stopping only
        # at newlines would swallow everything after the first street name
        RemovalRule.compile(
            "address",
            r"\b(?:Rua|Avenida|Av\.|Travessa|Alameda|Praça|Rodovia)\b[^\n.!?…]*",
        ),
    )


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one lowercase token per line, # starts a comment."""
    words = set()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            word = line.split("#", 1)[0].strip()
            if word:
                words.add(unicodedata.normalize("NFC", word.lower()))
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    ref = resources.files("themerank").joinpath("data/stopwords_pt.txt")
    with resources.as_file(ref) as path:
        return load_stopwords(path)


@dataclass(frozen=True)
class PreprocessConfig:
    """Noise-removal settings shared by the whole pipeline.

    ``remove_terms`` is the with/without-removal experiment axis; when false
    :func:`remove_noise` is the identity. Patterns run in declared order,
    stopword matching is case-insensitive and whole-word.
    """

    remove_terms: bool = True
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    removal_patterns: tuple[RemovalRule, ...] = field(default_factory=default_removal_rules)
    core_start_markers: tuple[str, ...] = ()
    core_end_markers: tuple[str, ...] = ()
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS


def extract_core(raw_text: str, config: PreprocessConfig | None = None) -> str:
    """Cut the document down to the span between its core section markers.

    The span runs from the end of the first start marker to the beginning of
    the last end marker found after it. When no marker pair is present the
    text is returned unchanged.
    """
    if not raw_text:
        raise ValueError("extract_core requires non-empty input")
    config = config or PreprocessConfig()
    if not config.core_start_markers or not config.core_end_markers:
        return raw_text

    start_at = None
    for marker in config.core_start_markers:
        pos = raw_text.find(marker)
        if pos >= 0 and (start_at is None or pos < start_at[0]):
            start_at = (pos, pos + len(marker))
    if start_at is None:
        return raw_text

    end_at = None
    for marker in config.core_end_markers:
        pos = raw_text.rfind(marker)
        if pos >= start_at[1] and (end_at is None or pos > end_at):
            end_at = pos
    if end_at is None:
        return raw_text

    core = raw_text[start_at[1] : end_at]
    return core if core.strip() else raw_text


def segment_sentences(
    text: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
) -> list[Sentence]:
    """Split text into sentences at terminal punctuation.

    A split happens after a run of ``. ! ? …`` followed by whitespace and an
    uppercase letter or digit, unless the token carrying the punctuation is an
    abbreviation from the guard list. Empty fragments are dropped and indices
    reassigned contiguously.
    """
    if not text:
        raise ValueError("segment_sentences requires non-empty text")
    boundaries = []
    n = len(text)
    i = 0
    while i < n:
        if text[i] not in _TERMINALS:
            i += 1
            continue
        j = i + 1
        while j < n and text[j] in _TERMINALS:
            j += 1
        k = j
        while k < n and text[k].isspace():
            k += 1
        if k > j and k < n and (text[k].isupper() or text[k].isdigit()):
            t = i
            while t > 0 and not text[t - 1].isspace():
                t -= 1
            token = text[t:j].lower().rstrip(_TERMINALS)
            if token not in abbreviations:
                boundaries.append((j, k))
        i = j

    pieces = []
    start = 0
    for cut, resume in boundaries:
        pieces.append(text[start:cut])
        start = resume
    pieces.append(text[start:])

    sentences = []
    for piece in pieces:
        stripped = piece.strip()
        if stripped:
            sentences.append(Sentence(len(sentences), stripped))
    return sentences


def tokenize(text: str) -> TokenSequence:
    """NFC-normalize, lowercase and split on non-alphanumeric boundaries.

    Digits survive as tokens; pure-punctuation fragments are dropped.
    """
    if not text:
        return []
    normalized = unicodedata.normalize("NFC", text).lower()
    return _WORD_RE.findall(normalized)


@lru_cache(maxsize=16)
def _stopword_regex(words: frozenset[str]) -> re.Pattern | None:
    if not words:
        return None
    alternatives = "|".join(re.escape(w) for w in sorted(words, key=len, reverse=True))
    # custom word boundary: underscore counts as a separator, unlike \b
    return re.compile(rf"(?<![^\W_])(?:{alternatives})(?![^\W_])", re.IGNORECASE)


def remove_noise(text: str, config: PreprocessConfig) -> str:
    """Strip noise patterns and stopwords when removal is enabled.

    With ``remove_terms`` false the input is returned unchanged. Otherwise the
    removal patterns run in declared order, stopwords are removed as whole
    words, and the result is whitespace-collapsed.
    """
    if not config.remove_terms:
        return text
    cleaned = unicodedata.normalize("NFC", text)
    for rule in config.removal_patterns:
        cleaned = rule.pattern.sub(" ", cleaned)
    stopword_re = _stopword_regex(config.stopwords)
    if stopword_re is not None:
        cleaned = stopword_re.sub(" ", cleaned)
    return re.sub(r"\s+", " ", cleaned).strip()
