"""Loading, validation and description of the appeal and theme corpora.

Both corpora live in delimited UTF-8 text files with a header row; the
column mapping and delimiter are configurable. Loaded corpora are immutable
and safe to share across workers.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator


class CorpusError(ValueError):
    """Raised for malformed corpus files: schema, duplicate ids, empty text."""


@dataclass(frozen=True)
class AppealRecord:
    """A long source document, optionally labeled with an expert theme id."""

    id: str
    raw_text: str
    label_theme_id: str | None = None


@dataclass(frozen=True)
class ThemeRecord:
    """A short catalog entry describing one recurring controversy."""

    id: str
    text: str


class ThemeCatalog:
    """Ordered, id-unique collection of themes."""

    def __init__(self, themes: Iterable[ThemeRecord]):
        self.themes: tuple[ThemeRecord, ...] = tuple(themes)
        self._by_id: dict[str, ThemeRecord] = {}
        for theme in self.themes:
            if theme.id in self._by_id:
                raise CorpusError(f"duplicate theme id {theme.id!r}")
            self._by_id[theme.id] = theme

    def __len__(self) -> int:
        return len(self.themes)

    def __iter__(self) -> Iterator[ThemeRecord]:
        return iter(self.themes)

    def __contains__(self, theme_id: str) -> bool:
        return theme_id in self._by_id

    def get(self, theme_id: str) -> ThemeRecord:
        return self._by_id[theme_id]

    def ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.themes)


@dataclass(frozen=True)
class StatsReport:
    """Whitespace-split word-count summary of a document collection."""

    doc_count: int
    mean_words: float
    median_words: float
    min_words: int
    max_words: int


def _open_reader(path: str | Path, delimiter: str):
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"corpus file not found: {path}")
    handle = open(path, encoding="utf-8", newline="")
    return handle, csv.reader(handle, delimiter=delimiter)


def _column_index(header: list[str], name: str, path: str | Path) -> int:
    try:
        return header.index(name)
    except ValueError:
        raise CorpusError(f"{path}: missing column {name!r} in header {header}") from None


def load_appeals(
    path: str | Path,
    *,
    delimiter: str = ",",
    id_col: str = "id",
    text_col: str = "text",
    theme_col: str | None = "theme",
) -> list[AppealRecord]:
    """Load appeal records from a delimited file with a header row.

    The theme column is optional: when it is absent from the header all
    records load unlabeled. Duplicate ids and empty text fields are errors
    reported with their row number.
    """
    handle, reader = _open_reader(path, delimiter)
    with handle:
        header = next(reader, None)
        if header is None:
            raise CorpusError(f"{path}: empty file, expected a header row")
        id_idx = _column_index(header, id_col, path)
        text_idx = _column_index(header, text_col, path)
        theme_idx = header.index(theme_col) if theme_col and theme_col in header else None

        records: list[AppealRecord] = []
        seen: set[str] = set()
        for row in reader:
            if not row:
                continue
            line = reader.line_num
            try:
                doc_id = row[id_idx].strip()
                text = row[text_idx]
            except IndexError:
                raise CorpusError(f"{path}: row {line}: too few fields") from None
            if not doc_id:
                raise CorpusError(f"{path}: row {line}: empty id")
            if doc_id in seen:
                raise CorpusError(f"{path}: row {line}: duplicate id {doc_id!r}")
            if not text.split():
                raise CorpusError(f"{path}: row {line}: empty text for id {doc_id!r}")
            seen.add(doc_id)
            label = None
            if theme_idx is not None and theme_idx < len(row):
                label = row[theme_idx].strip() or None
            records.append(AppealRecord(doc_id, text, label))
    return records


def load_themes(
    path: str | Path,
    *,
    delimiter: str = ",",
    id_col: str = "id",
    text_col: str = "text",
) -> ThemeCatalog:
    """Load the theme catalog, preserving file order and enforcing unique ids."""
    handle, reader = _open_reader(path, delimiter)
    with handle:
        header = next(reader, None)
        if header is None:
            raise CorpusError(f"{path}: empty file, expected a header row")
        id_idx = _column_index(header, id_col, path)
        text_idx = _column_index(header, text_col, path)

        themes: list[ThemeRecord] = []
        seen: set[str] = set()
        for row in reader:
            if not row:
                continue
            line = reader.line_num
            try:
                theme_id = row[id_idx].strip()
                text = row[text_idx]
            except IndexError:
                raise CorpusError(f"{path}: row {line}: too few fields") from None
            if not theme_id:
                raise CorpusError(f"{path}: row {line}: empty id")
            if theme_id in seen:
                raise CorpusError(f"{path}: row {line}: duplicate theme id {theme_id!r}")
            if not text.split():
                raise CorpusError(f"{path}: row {line}: empty text for theme {theme_id!r}")
            seen.add(theme_id)
            themes.append(ThemeRecord(theme_id, text))
    return ThemeCatalog(themes)


def write_appeals(
    path: str | Path,
    appeals: Iterable[AppealRecord],
    *,
    delimiter: str = ",",
    id_col: str = "id",
    text_col: str = "text",
    theme_col: str = "theme",
) -> None:
    """Write appeals back to the delimited format accepted by load_appeals."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
        writer.writerow([id_col, text_col, theme_col])
        for record in appeals:
            writer.writerow([record.id, record.raw_text, record.label_theme_id or ""])


def write_themes(
    path: str | Path,
    themes: Iterable[ThemeRecord],
    *,
    delimiter: str = ",",
    id_col: str = "id",
    text_col: str = "text",
) -> None:
    """Write a theme catalog back to the delimited format accepted by load_themes."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
        writer.writerow([id_col, text_col])
        for theme in themes:
            writer.writerow([theme.id, theme.text])


def unresolvable_labels(appeals: Iterable[AppealRecord], catalog: ThemeCatalog) -> list[str]:
    """Ids of labeled appeals whose label does not resolve in the catalog.

    Flagged appeals are kept in the corpus; evaluation skips them and reports
    the skip count rather than silently altering the gold set.
    """
    return [a.id for a in appeals if a.label_theme_id is not None and a.label_theme_id not in catalog]


def gold_labels(appeals: Iterable[AppealRecord], catalog: ThemeCatalog) -> dict[str, str]:
    """Mapping appeal id -> gold theme id, restricted to resolvable labels."""
    return {
        a.id: a.label_theme_id
        for a in appeals
        if a.label_theme_id is not None and a.label_theme_id in catalog
    }


def _word_count(record: AppealRecord | ThemeRecord) -> int:
    text = record.raw_text if isinstance(record, AppealRecord) else record.text
    return len(text.split())


def corpus_stats(docs: Iterable[AppealRecord | ThemeRecord]) -> StatsReport:
    """Word-count statistics over a non-empty document collection.

    Counting splits on Unicode whitespace with no punctuation stripping; the
    median is the middle element, or the mean of the two middle elements for
    even counts.
    """
    counts = [_word_count(d) for d in docs]
    if not counts:
        raise CorpusError("corpus_stats requires at least one document")
    return StatsReport(
        doc_count=len(counts),
        mean_words=statistics.fmean(counts),
        median_words=float(statistics.median(counts)),
        min_words=min(counts),
        max_words=max(counts),
    )
