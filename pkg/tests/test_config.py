from __future__ import annotations

import pytest

from themerank.config import (
    ConfigError,
    ExperimentGrid,
    GridCell,
    apply_overrides,
    build_grid,
    build_pipeline,
    build_preprocess,
    cell_config,
    load_run_config,
)
from themerank.textproc import load_stopwords


class TestLoadRunConfig:
    def test_defaults_without_file(self):
        config = load_run_config(None)
        assert config["k"] == 6
        assert config["representation"] == "guided_lexrank"
        assert config["summary"]["size"] == 15

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_run_config(str(tmp_path / "none.yaml"))

    def test_partial_file_merges_over_defaults(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("k: 3\nsummary:\n  alpha: 2.5\n", encoding="utf-8")
        config = load_run_config(str(path))
        assert config["k"] == 3
        assert config["summary"]["alpha"] == 2.5
        assert config["summary"]["size"] == 15  # untouched default

    def test_json_is_accepted(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{"k": 2}', encoding="utf-8")
        assert load_run_config(str(path))["k"] == 2

    def test_non_mapping_root_rejected(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="mapping"):
            load_run_config(str(path))


class TestOverrides:
    def test_flags_win(self):
        config = load_run_config(None)
        merged = apply_overrides(config, {"k": 2, "summary_size": 9, "remove_terms": False})
        assert merged["k"] == 2
        assert merged["summary"]["size"] == 9
        assert merged["preprocess"]["remove_terms"] is False

    def test_none_values_ignored(self):
        config = load_run_config(None)
        merged = apply_overrides(config, {"k": None})
        assert merged["k"] == 6


class TestBuildPipeline:
    def test_defaults(self):
        pipeline = build_pipeline(load_run_config(None))
        assert pipeline.k == 6
        assert pipeline.representation == "guided_lexrank"
        assert pipeline.summary.size == 15
        assert pipeline.bm25.k1 == 1.5

    def test_bm25_section(self):
        config = load_run_config(None)
        config["bm25"].update({"k1": 1.2, "b": 0.5, "idf_variant": "epsilon_floor"})
        pipeline = build_pipeline(config)
        assert (pipeline.bm25.k1, pipeline.bm25.b) == (1.2, 0.5)
        assert pipeline.bm25.idf_variant == "epsilon_floor"

    def test_cosine_defaults_to_tfidf_fallback(self):
        config = load_run_config(None)
        config["similarity"] = "cosine"
        pipeline = build_pipeline(config)
        assert pipeline.embedding_source == "tfidf"

    def test_invalid_values_become_config_errors(self):
        config = load_run_config(None)
        config["representation"] = "nonsense"
        with pytest.raises(ConfigError):
            build_pipeline(config)

    def test_custom_removal_patterns(self):
        config = load_run_config(None)
        config["preprocess"]["removal_patterns"] = [
            {"name": "caps", "pattern": r"[A-Z]{3,}"}
        ]
        preprocess = build_preprocess(config)
        assert [rule.name for rule in preprocess.removal_patterns] == ["caps"]

    def test_invalid_pattern_reported_at_load(self):
        config = load_run_config(None)
        config["preprocess"]["removal_patterns"] = [{"name": "bad", "pattern": "["}]
        with pytest.raises(ConfigError, match="bad"):
            build_preprocess(config)

    def test_malformed_pattern_entry(self):
        config = load_run_config(None)
        config["preprocess"]["removal_patterns"] = ["oops"]
        with pytest.raises(ConfigError, match="name"):
            build_preprocess(config)

    def test_stopword_file_with_comments(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("# comment line\num\ndois  # trailing comment\n\n", encoding="utf-8")
        assert load_stopwords(path) == frozenset({"um", "dois"})

    def test_custom_stopword_file_used(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("xpto\n", encoding="utf-8")
        config = load_run_config(None)
        config["preprocess"]["stopwords"] = str(path)
        preprocess = build_preprocess(config)
        assert preprocess.stopwords == frozenset({"xpto"})


class TestGrid:
    def test_cells_in_declared_order(self):
        grid = ExperimentGrid(
            preprocess_options=(True, False),
            representations=("lexrank",),
            summary_sizes=(5, 10),
            similarity_methods=("bm25",),
        )
        descriptors = [cell.descriptor for cell in grid.cells()]
        assert descriptors == [
            "preprocess=remove,representation=lexrank,size=5,similarity=bm25",
            "preprocess=remove,representation=lexrank,size=10,similarity=bm25",
            "preprocess=keep,representation=lexrank,size=5,similarity=bm25",
            "preprocess=keep,representation=lexrank,size=10,similarity=bm25",
        ]

    def test_fulltext_collapses_sizes(self):
        grid = ExperimentGrid(
            preprocess_options=(True,),
            representations=("fulltext",),
            summary_sizes=(5, 10, 15),
            similarity_methods=("bm25", "cosine"),
        )
        assert len(list(grid.cells())) == 2

    def test_empty_axis_rejected(self):
        with pytest.raises(ConfigError, match="non-empty"):
            ExperimentGrid((), ("lexrank",), (5,), ("bm25",))

    def test_unknown_representation_rejected(self):
        with pytest.raises(ConfigError, match="representation"):
            ExperimentGrid((True,), ("magic",), (5,), ("bm25",))

    def test_build_grid_accepts_remove_keep_names(self):
        config = load_run_config(None)
        config["grid"]["preprocess"] = ["keep", "remove"]
        grid = build_grid(config)
        assert grid.preprocess_options == (False, True)

    def test_build_grid_rejects_unknown_preprocess(self):
        config = load_run_config(None)
        config["grid"]["preprocess"] = ["maybe"]
        with pytest.raises(ConfigError, match="remove"):
            build_grid(config)

    def test_cell_config_specializes_base(self):
        base = build_pipeline(load_run_config(None))
        cell = GridCell(False, "lexrank", 7, "cosine")
        specialized = cell_config(base, cell)
        assert specialized.preprocess.remove_terms is False
        assert specialized.representation == "lexrank"
        assert specialized.summary.size == 7
        assert specialized.similarity_method == "cosine"
        assert specialized.embedding_source == "tfidf"

    def test_cell_config_fulltext_keeps_base_size(self):
        base = build_pipeline(load_run_config(None))
        cell = GridCell(True, "fulltext", None, "bm25")
        assert cell_config(base, cell).summary.size == base.summary.size
