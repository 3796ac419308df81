"""Scoring an appeal representation against every theme in the catalog.

Two routes: the representation's tokens as a BM25 query against a theme
index, or cosine similarity over vector representations. Vectors come either
from a precomputed embedding file or from the built-in TF-IDF vectorizer;
this package never runs an embedding model itself.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .bm25 import Bm25Index, scores_for_all


@dataclass(frozen=True)
class EmbeddingTable:
    """Fixed-dimension vectors keyed by document id."""

    dimension: int
    vectors: dict[str, np.ndarray]


@dataclass(frozen=True)
class ThemeScores:
    """Per-theme relatedness scores for one appeal representation."""

    scores: dict[str, float]
    method: str


def score_by_bm25(summary_tokens: Sequence[str], theme_index: Bm25Index) -> ThemeScores:
    """Score the representation as a BM25 query against every indexed theme."""
    totals = scores_for_all(theme_index, summary_tokens)
    return ThemeScores(
        scores={doc_id: float(totals[i]) for i, doc_id in enumerate(theme_index.doc_ids)},
        method="bm25",
    )


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine of the angle between two non-zero vectors of equal dimension."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine is undefined for zero-norm vectors")
    value = float(np.dot(u, v) / (nu * nv))
    return min(1.0, max(-1.0, value))


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Parse an embedding file.

    Format: a header line ``id<TAB><dimension>`` followed by one line per
    vector, ``id<TAB>v1,v2,...``. All vectors must match the declared
    dimension and ids must be unique.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"embedding file not found: {path}")
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n")
        parts = header.split("\t")
        if len(parts) != 2 or parts[0] != "id":
            raise ValueError(f"{path}: bad header {header!r}, expected 'id<TAB><dimension>'")
        try:
            dimension = int(parts[1])
        except ValueError:
            raise ValueError(f"{path}: bad dimension {parts[1]!r} in header") from None
        if dimension < 1:
            raise ValueError(f"{path}: dimension must be >= 1, got {dimension}")

        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                doc_id, values = line.split("\t")
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: expected 'id<TAB>v1,v2,...'") from None
            if doc_id in vectors:
                raise ValueError(f"{path}: line {lineno}: duplicate id {doc_id!r}")
            try:
                vector = np.array([float(x) for x in values.split(",")])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric component") from None
            if vector.size != dimension:
                raise ValueError(
                    f"{path}: line {lineno}: vector has {vector.size} components, "
                    f"expected {dimension}"
                )
            vectors[doc_id] = vector

    if not vectors:
        raise ValueError(f"{path}: no vectors found")
    if all(np.linalg.norm(v) == 0.0 for v in vectors.values()):
        raise ValueError(f"{path}: every vector has zero norm")
    return EmbeddingTable(dimension=dimension, vectors=vectors)


def write_embeddings(path: str | Path, table: EmbeddingTable) -> None:
    """Write a table in the format accepted by load_embeddings."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"id\t{table.dimension}\n")
        for doc_id, vector in table.vectors.items():
            values = ",".join(repr(float(x)) for x in vector)
            handle.write(f"{doc_id}\t{values}\n")


def tfidf_vectors(texts: Sequence[tuple[str, Sequence[str]]]) -> EmbeddingTable:
    """TF-IDF vectors over a shared vocabulary built from all inputs.

    Component for term ``w`` is ``tf(w, text) * (ln(N / df(w)) + 1)``; the
    dimension equals the vocabulary size.
    """
    if not texts:
        raise ValueError("tfidf_vectors requires at least one text")
    counts: dict[str, Counter] = {}
    for doc_id, tokens in texts:
        if doc_id in counts:
            raise ValueError(f"duplicate id {doc_id!r}")
        counts[doc_id] = Counter(tokens)

    df: Counter = Counter()
    for c in counts.values():
        df.update(c.keys())
    if not df:
        raise ValueError("all texts are empty")

    vocab = {term: i for i, term in enumerate(sorted(df))}
    n_texts = len(counts)
    idf = np.empty(len(vocab))
    for term, col in vocab.items():
        idf[col] = math.log(n_texts / df[term]) + 1.0

    vectors = {}
    for doc_id, c in counts.items():
        vector = np.zeros(len(vocab))
        for term, tf in c.items():
            col = vocab[term]
            vector[col] = tf * idf[col]
        vectors[doc_id] = vector
    return EmbeddingTable(dimension=len(vocab), vectors=vectors)
