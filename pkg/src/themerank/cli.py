"""Command-line interface: classify, evaluate, grid and stats subcommands.

Data goes to standard output and files; progress goes to standard error.
All reports are machine-readable: flat JSON for metrics, delimited text for
rankings, grid summaries and scatter data.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import config as cfgmod
from . import corpus as corpusmod
from .config import ConfigError, ExperimentGrid, GridCell, build_grid, build_pipeline, cell_config
from .metrics import MetricReport, evaluate_run
from .ranking import PipelineConfig, PipelineError, classify_appeal, classify_corpus, prepare_themes, write_rankings

# Recorded in every metric report: noise removal runs before sentence
# segmentation throughout this pipeline.
PREPROCESS_ORDER = "noise_removal_before_segmentation"


def _bool_flag(value: str) -> bool:
    lowered = value.lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {value!r}")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="run-configuration file (YAML or JSON)")
    parser.add_argument("--k", type=int, help="suggestion list length (default 6)")
    parser.add_argument(
        "--representation",
        choices=("fulltext", "lexrank", "guided_lexrank"),
        help="appeal representation fed to the similarity stage",
    )
    parser.add_argument("--summary-size", type=int, help="sentences kept in the summary")
    parser.add_argument("--alpha", type=float, help="centrality weight in guided summaries")
    parser.add_argument("--beta", type=float, help="guidance weight in guided summaries")
    parser.add_argument("--similarity", choices=("bm25", "cosine"), help="theme scoring method")
    parser.add_argument(
        "--remove-terms",
        type=_bool_flag,
        metavar="BOOL",
        help="enable/disable noise and stopword removal",
    )
    parser.add_argument(
        "--embeddings",
        help="embedding file for the cosine path, or 'tfidf' for the built-in fallback",
    )
    parser.add_argument("--out", help="output directory")
    parser.add_argument(
        "--parallel", type=int, default=1, help="worker processes over appeals (default 1)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="themerank",
        description="Rank catalog themes for long appeal documents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="rank themes for one appeal or a whole file")
    p_classify.add_argument("--appeals", help="delimited appeals file")
    p_classify.add_argument("--appeal-id", help="classify only this appeal id")
    p_classify.add_argument("--text", help="inline appeal text instead of a file")
    p_classify.add_argument("--themes", required=True, help="delimited theme catalog file")
    _add_common_flags(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_eval = sub.add_parser("evaluate", help="run one configuration over a labeled corpus")
    p_eval.add_argument("--appeals", required=True)
    p_eval.add_argument("--themes", required=True)
    _add_common_flags(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_grid = sub.add_parser("grid", help="sweep the experiment grid from the config file")
    p_grid.add_argument("--appeals", required=True)
    p_grid.add_argument("--themes", required=True)
    p_grid.add_argument(
        "--cell-parallel", type=int, default=1, help="cells run concurrently (default 1)"
    )
    _add_common_flags(p_grid)
    p_grid.set_defaults(func=cmd_grid)

    p_stats = sub.add_parser("stats", help="word-count statistics of a corpus file")
    p_stats.add_argument("--input", required=True, help="delimited corpus file")
    p_stats.add_argument("--id-col", default="id")
    p_stats.add_argument("--text-col", default="text")
    p_stats.add_argument("--delimiter", default=",")
    p_stats.set_defaults(func=cmd_stats)

    return parser


def _merged_config(args) -> dict:
    loaded = cfgmod.load_run_config(getattr(args, "config", None))
    overrides = {
        "k": getattr(args, "k", None),
        "representation": getattr(args, "representation", None),
        "summary_size": getattr(args, "summary_size", None),
        "alpha": getattr(args, "alpha", None),
        "beta": getattr(args, "beta", None),
        "similarity": getattr(args, "similarity", None),
        "remove_terms": getattr(args, "remove_terms", None),
        "embeddings": getattr(args, "embeddings", None),
    }
    return cfgmod.apply_overrides(loaded, overrides)


def _load_appeals(args, merged: dict):
    columns = merged["appeal_columns"]
    return corpusmod.load_appeals(
        args.appeals,
        delimiter=merged["delimiter"],
        id_col=columns.get("id", "id"),
        text_col=columns.get("text", "text"),
        theme_col=columns.get("theme", "theme"),
    )


def _load_themes(args, merged: dict):
    columns = merged["theme_columns"]
    return corpusmod.load_themes(
        args.themes,
        delimiter=merged["delimiter"],
        id_col=columns.get("id", "id"),
        text_col=columns.get("text", "text"),
    )


def _pipeline_descriptor(pipeline: PipelineConfig) -> str:
    size = pipeline.summary.size if pipeline.representation != "fulltext" else "na"
    preprocess = "remove" if pipeline.preprocess.remove_terms else "keep"
    return (
        f"preprocess={preprocess},representation={pipeline.representation},"
        f"size={size},similarity={pipeline.similarity_method}"
    )


def _report_document(report: MetricReport, failures: int, extra: dict | None = None) -> dict:
    document = report.as_dict()
    document["failures"] = failures
    document["preprocess_order"] = PREPROCESS_ORDER
    if extra:
        document.update(extra)
    return document


def _write_atomic(path: Path, content: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def cmd_classify(args) -> int:
    merged = _merged_config(args)
    pipeline = build_pipeline(merged)
    catalog = _load_themes(args, merged)

    if args.text is not None:
        appeals = [corpusmod.AppealRecord(id="inline", raw_text=args.text)]
    elif args.appeals:
        appeals = _load_appeals(args, merged)
        if args.appeal_id is not None:
            appeals = [a for a in appeals if a.id == args.appeal_id]
            if not appeals:
                raise PipelineError(f"appeal id {args.appeal_id!r} not found in {args.appeals}")
    else:
        raise ConfigError("classify needs --text or --appeals")

    prepared = prepare_themes(catalog, pipeline)
    results = []
    for appeal in appeals:
        ranked = classify_appeal(appeal, catalog, pipeline, prepared)
        results.append(ranked)
        print(f"appeal {ranked.appeal_id}")
        print(f"{'rank':>4}  {'theme_id':<16}  score")
        for position, (theme_id, score) in enumerate(ranked.entries, start=1):
            print(f"{position:>4}  {theme_id:<16}  {score:.6f}")

    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        gold = corpusmod.gold_labels(appeals, catalog)
        write_rankings(outdir / "rankings.csv", results, gold)
        print(f"wrote {outdir / 'rankings.csv'}", file=sys.stderr)
    return 0


def _evaluate_once(
    appeals, catalog, pipeline: PipelineConfig, k: int, parallel: int
) -> tuple[MetricReport, list, list[str]]:
    results, failures = classify_corpus(appeals, catalog, pipeline, parallel=parallel)
    gold = corpusmod.gold_labels(appeals, catalog)
    report = evaluate_run(results, gold, k)
    return report, results, failures


def cmd_evaluate(args) -> int:
    merged = _merged_config(args)
    pipeline = build_pipeline(merged)
    catalog = _load_themes(args, merged)
    appeals = _load_appeals(args, merged)

    started = time.perf_counter()
    report, results, failures = _evaluate_once(appeals, catalog, pipeline, pipeline.k, args.parallel)
    elapsed = time.perf_counter() - started
    print(
        f"evaluated {report.query_count} appeals "
        f"({report.skipped} skipped, {len(failures)} failed) in {elapsed:.1f}s",
        file=sys.stderr,
    )
    for failure in failures:
        print(f"failure: {failure}", file=sys.stderr)

    document = _report_document(report, len(failures), {"config": _pipeline_descriptor(pipeline)})
    print(json.dumps(document, sort_keys=True))

    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        gold = corpusmod.gold_labels(appeals, catalog)
        write_rankings(outdir / "rankings.csv", results, gold)
        _write_atomic(outdir / "metrics.json", json.dumps(document, sort_keys=True) + "\n")
    return 0


def _slug(descriptor: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in descriptor)


def _run_cell(cell: GridCell, appeals, catalog, base: PipelineConfig, args, outdir: Path | None):
    started = time.perf_counter()
    try:
        pipeline = cell_config(base, cell)
        report, results, failures = _evaluate_once(
            appeals, catalog, pipeline, pipeline.k, args.parallel
        )
    except (ValueError, PipelineError) as exc:
        seconds = time.perf_counter() - started
        print(f"cell {cell.descriptor}: FAILED after {seconds:.1f}s: {exc}", file=sys.stderr)
        return cell, None, 0, seconds
    seconds = time.perf_counter() - started
    if outdir is not None:
        gold = corpusmod.gold_labels(appeals, catalog)
        slug = _slug(cell.descriptor)
        rankings_path = outdir / f"rankings_{slug}.csv"
        tmp_path = rankings_path.with_suffix(".csv.tmp")
        write_rankings(tmp_path, results, gold)
        os.replace(tmp_path, rankings_path)
        document = _report_document(report, len(failures), {"cell": cell.descriptor})
        _write_atomic(outdir / f"metrics_{slug}.json", json.dumps(document, sort_keys=True) + "\n")
    print(f"cell {cell.descriptor}: done in {seconds:.1f}s", file=sys.stderr)
    return cell, report, len(failures), seconds


GRID_SUMMARY_HEADER = (
    "cell",
    "preprocess",
    "representation",
    "summary_size",
    "similarity",
    "recall_at_k",
    "precision_at_k",
    "map_at_k",
    "f1",
    "ndcg_at_k",
    "query_count",
    "skipped",
    "failures",
    "seconds",
)


@dataclass(frozen=True)
class GridReport:
    """One (descriptor, metrics, wall-clock seconds) row per executed cell.

    Metrics are None for cells that failed; descriptors must be unique.
    """

    rows: tuple[tuple[str, MetricReport | None, float], ...]

    def __post_init__(self):
        descriptors = [descriptor for descriptor, _, _ in self.rows]
        if len(set(descriptors)) != len(descriptors):
            raise ValueError("grid cell descriptors must be unique")


def cmd_grid(args) -> int:
    merged = _merged_config(args)
    base = build_pipeline(merged)
    grid: ExperimentGrid = build_grid(merged)
    catalog = _load_themes(args, merged)
    appeals = _load_appeals(args, merged)

    outdir = Path(args.out) if args.out else None
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)

    cells = list(grid.cells())
    print(f"grid: {len(cells)} cells over {len(appeals)} appeals", file=sys.stderr)
    if args.cell_parallel > 1:
        with ThreadPoolExecutor(max_workers=args.cell_parallel) as pool:
            rows = list(
                pool.map(lambda c: _run_cell(c, appeals, catalog, base, args, outdir), cells)
            )
    else:
        rows = [_run_cell(cell, appeals, catalog, base, args, outdir) for cell in cells]

    GridReport(rows=tuple((cell.descriptor, report, seconds) for cell, report, _, seconds in rows))

    summary_lines = [",".join(GRID_SUMMARY_HEADER)]
    scatter_lines = ["cell,recall_at_k,map_at_k,ndcg_at_k"]
    for cell, report, failures, seconds in rows:
        if report is None:
            # failed cell stays in the summary with empty metric fields
            summary_lines.append(
                ",".join(
                    [
                        f'"{cell.descriptor}"',
                        "remove" if cell.remove_terms else "keep",
                        cell.representation,
                        str(cell.summary_size) if cell.summary_size is not None else "na",
                        cell.similarity_method,
                        "", "", "", "", "", "", "",
                        str(failures),
                        f"{seconds:.3f}",
                    ]
                )
            )
            continue
        summary_lines.append(
            ",".join(
                [
                    f'"{cell.descriptor}"',
                    "remove" if cell.remove_terms else "keep",
                    cell.representation,
                    str(cell.summary_size) if cell.summary_size is not None else "na",
                    cell.similarity_method,
                    repr(report.recall_at_k),
                    repr(report.precision_at_k),
                    repr(report.map_at_k),
                    repr(report.f1),
                    repr(report.ndcg_at_k),
                    str(report.query_count),
                    str(report.skipped),
                    str(failures),
                    f"{seconds:.3f}",
                ]
            )
        )
        scatter_lines.append(
            ",".join(
                [
                    f'"{cell.descriptor}"',
                    repr(report.recall_at_k),
                    repr(report.map_at_k),
                    repr(report.ndcg_at_k),
                ]
            )
        )

    summary_text = "\n".join(summary_lines) + "\n"
    print(summary_text, end="")
    if outdir is not None:
        _write_atomic(outdir / "grid_summary.csv", summary_text)
        _write_atomic(outdir / "scatter.csv", "\n".join(scatter_lines) + "\n")
        print(f"wrote {outdir / 'grid_summary.csv'} and {outdir / 'scatter.csv'}", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    records = corpusmod.load_appeals(
        args.input,
        delimiter=args.delimiter,
        id_col=args.id_col,
        text_col=args.text_col,
        theme_col=None,
    )
    stats = corpusmod.corpus_stats(records)
    print(
        json.dumps(
            {
                "doc_count": stats.doc_count,
                "mean_words": stats.mean_words,
                "median_words": stats.median_words,
                "min_words": stats.min_words,
                "max_words": stats.max_words,
            },
            sort_keys=True,
        )
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, corpusmod.CorpusError, PipelineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
