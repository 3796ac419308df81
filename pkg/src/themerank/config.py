"""Declarative run configuration: one YAML/JSON file plus flag overrides.

The file is a nested key-value document; every knob has a default, so an
empty config is valid. Command-line flags always win over file values.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Any, Iterator

import yaml

from .bm25 import Bm25Params
from .lexrank import SummaryConfig
from .ranking import REPRESENTATIONS, SIMILARITY_METHODS, TFIDF_FALLBACK, PipelineConfig
from .textproc import (
    DEFAULT_ABBREVIATIONS,
    PreprocessConfig,
    RemovalRule,
    default_removal_rules,
    default_stopwords,
    load_stopwords,
)


class ConfigError(ValueError):
    """Raised for unreadable or inconsistent run configuration."""


DEFAULT_CONFIG: dict[str, Any] = {
    "delimiter": ",",
    "appeal_columns": {"id": "id", "text": "text", "theme": "theme"},
    "theme_columns": {"id": "id", "text": "text"},
    "preprocess": {
        "remove_terms": True,
        "stopwords": None,
        "removal_patterns": None,
        "core_start_markers": [],
        "core_end_markers": [],
        "abbreviations": None,
    },
    "representation": "guided_lexrank",
    "summary": {
        "size": 15,
        "alpha": 1.0,
        "beta": 1.0,
        "centrality": "degree",
        "threshold": 0.1,
        "damping": 0.85,
        "tolerance": 1e-8,
        "max_iterations": 1000,
    },
    "bm25": {
        "k1": 1.5,
        "b": 0.75,
        "idf_variant": "nonnegative",
        "epsilon": 0.25,
    },
    "similarity": "bm25",
    "k": 6,
    "embeddings": None,
    "grid": {
        "preprocess": ["remove"],
        "representations": ["guided_lexrank"],
        "summary_sizes": [15],
        "similarity_methods": ["bm25"],
    },
}


def _deep_merge(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_run_config(path: str | None = None) -> dict[str, Any]:
    """Read the run file (YAML, of which JSON is a subset) over the defaults."""
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    try:
        with open(path, encoding="utf-8") as handle:
            loaded = yaml.safe_load(handle)
    except FileNotFoundError:
        raise FileNotFoundError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: cannot parse config: {exc}") from exc
    if loaded is None:
        loaded = {}
    if not isinstance(loaded, dict):
        raise ConfigError(f"{path}: config root must be a mapping")
    return _deep_merge(DEFAULT_CONFIG, loaded)


def apply_overrides(config: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Overlay non-None flag values onto a loaded config; flags win."""
    config = copy.deepcopy(config)
    paths = {
        "k": ("k",),
        "representation": ("representation",),
        "summary_size": ("summary", "size"),
        "alpha": ("summary", "alpha"),
        "beta": ("summary", "beta"),
        "similarity": ("similarity",),
        "remove_terms": ("preprocess", "remove_terms"),
        "embeddings": ("embeddings",),
        "delimiter": ("delimiter",),
    }
    for name, value in overrides.items():
        if value is None:
            continue
        node = config
        *parents, leaf = paths[name]
        for parent in parents:
            node = node.setdefault(parent, {})
        node[leaf] = value
    return config


def build_preprocess(config: dict[str, Any]) -> PreprocessConfig:
    section = config.get("preprocess", {})
    stopword_path = section.get("stopwords")
    stopwords = load_stopwords(stopword_path) if stopword_path else default_stopwords()

    raw_patterns = section.get("removal_patterns")
    if raw_patterns is None:
        patterns = default_removal_rules()
    else:
        patterns = []
        for entry in raw_patterns:
            try:
                name, pattern = entry["name"], entry["pattern"]
            except (TypeError, KeyError):
                raise ConfigError(
                    "each removal_patterns entry needs 'name' and 'pattern' keys"
                ) from None
            try:
                patterns.append(RemovalRule.compile(name, pattern))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        patterns = tuple(patterns)

    abbreviations = section.get("abbreviations")
    return PreprocessConfig(
        remove_terms=bool(section.get("remove_terms", True)),
        stopwords=stopwords,
        removal_patterns=patterns,
        core_start_markers=tuple(section.get("core_start_markers") or ()),
        core_end_markers=tuple(section.get("core_end_markers") or ()),
        abbreviations=(
            frozenset(abbreviations) if abbreviations is not None else DEFAULT_ABBREVIATIONS
        ),
    )


def build_pipeline(config: dict[str, Any]) -> PipelineConfig:
    """Materialize a validated PipelineConfig from a merged config dict."""
    summary_section = config.get("summary", {})
    bm25_section = config.get("bm25", {})
    similarity = config.get("similarity", "bm25")
    embeddings = config.get("embeddings")
    if similarity == "cosine" and embeddings is None:
        embeddings = TFIDF_FALLBACK
    try:
        return PipelineConfig(
            preprocess=build_preprocess(config),
            representation=config.get("representation", "guided_lexrank"),
            summary=SummaryConfig(
                mode="guided",
                size=int(summary_section.get("size", 15)),
                alpha=float(summary_section.get("alpha", 1.0)),
                beta=float(summary_section.get("beta", 1.0)),
                centrality_variant=summary_section.get("centrality", "degree"),
                threshold=float(summary_section.get("threshold", 0.1)),
                damping=float(summary_section.get("damping", 0.85)),
                tolerance=float(summary_section.get("tolerance", 1e-8)),
                max_iterations=int(summary_section.get("max_iterations", 1000)),
            ),
            similarity_method=similarity,
            bm25=Bm25Params(
                k1=float(bm25_section.get("k1", 1.5)),
                b=float(bm25_section.get("b", 0.75)),
                idf_variant=bm25_section.get("idf_variant", "nonnegative"),
                epsilon=float(bm25_section.get("epsilon", 0.25)),
            ),
            k=int(config.get("k", 6)),
            embedding_source=embeddings,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


_PREPROCESS_NAMES = {"remove": True, "keep": False, True: True, False: False}


@dataclass(frozen=True)
class GridCell:
    """One grid point; ``summary_size`` is None for fulltext cells."""

    remove_terms: bool
    representation: str
    summary_size: int | None
    similarity_method: str

    @property
    def descriptor(self) -> str:
        size = self.summary_size if self.summary_size is not None else "na"
        preprocess = "remove" if self.remove_terms else "keep"
        return (
            f"preprocess={preprocess},representation={self.representation},"
            f"size={size},similarity={self.similarity_method}"
        )


@dataclass(frozen=True)
class ExperimentGrid:
    """The axes swept by the grid runner; fulltext ignores summary sizes."""

    preprocess_options: tuple[bool, ...]
    representations: tuple[str, ...]
    summary_sizes: tuple[int, ...]
    similarity_methods: tuple[str, ...]

    def __post_init__(self):
        for name in ("preprocess_options", "representations", "summary_sizes", "similarity_methods"):
            if not getattr(self, name):
                raise ConfigError(f"grid axis {name!r} must be non-empty")
        for rep in self.representations:
            if rep not in REPRESENTATIONS:
                raise ConfigError(f"unknown representation {rep!r} in grid")
        for method in self.similarity_methods:
            if method not in SIMILARITY_METHODS:
                raise ConfigError(f"unknown similarity method {method!r} in grid")
        for size in self.summary_sizes:
            if size < 1:
                raise ConfigError(f"summary sizes must be positive, got {size}")

    def cells(self) -> Iterator[GridCell]:
        """Cells in declared order; fulltext yields once per (preprocess, method)."""
        for remove_terms in self.preprocess_options:
            for representation in self.representations:
                sizes = (None,) if representation == "fulltext" else self.summary_sizes
                for size in sizes:
                    for method in self.similarity_methods:
                        yield GridCell(remove_terms, representation, size, method)


def build_grid(config: dict[str, Any]) -> ExperimentGrid:
    section = config.get("grid", {})
    options = []
    for value in section.get("preprocess", ["remove"]):
        if value not in _PREPROCESS_NAMES:
            raise ConfigError(f"grid preprocess values must be 'remove' or 'keep', got {value!r}")
        options.append(_PREPROCESS_NAMES[value])
    return ExperimentGrid(
        preprocess_options=tuple(options),
        representations=tuple(section.get("representations", ["guided_lexrank"])),
        summary_sizes=tuple(int(s) for s in section.get("summary_sizes", [15])),
        similarity_methods=tuple(section.get("similarity_methods", ["bm25"])),
    )


def cell_config(base: PipelineConfig, cell: GridCell) -> PipelineConfig:
    """Specialize a base pipeline config to one grid cell."""
    from dataclasses import replace

    preprocess = replace(base.preprocess, remove_terms=cell.remove_terms)
    summary = base.summary
    if cell.summary_size is not None:
        summary = replace(summary, size=cell.summary_size)
    embedding_source = base.embedding_source
    if cell.similarity_method == "cosine" and embedding_source is None:
        embedding_source = TFIDF_FALLBACK
    return replace(
        base,
        preprocess=preprocess,
        representation=cell.representation,
        summary=summary,
        similarity_method=cell.similarity_method,
        embedding_source=embedding_source,
    )
