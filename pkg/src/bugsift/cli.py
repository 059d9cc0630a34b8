"""Command-line entry point.

Subcommands: index, locate, evaluate, sweep. Every flag can also be set
through an environment variable with the BUGSIFT_ prefix (e.g.
BUGSIFT_ALPHA=2.5); explicit flags win over the environment, which wins
over a --config file, which wins over the preset.

Exit codes: 0 success, 1 evaluation found nothing, 2 usage/input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import corpus as corpus_mod
from . import evaluation, index as index_mod, sifter, variants
from .corpus import CorpusError
from .evaluation import EvalError
from .preprocess import FilterLists, default_filter_lists, load_term_file
from .query import QueryError, boost_from_counts, field_term_counts, grand_query, load_bug_reports
from .index import score

ENV_PREFIX = "BUGSIFT_"

_OVERRIDE_KEYS = ("alpha", "beta", "gamma", "k", "b", "sift_mode", "grand_mode",
                  "truncate_fraction")


class CliError(Exception):
    pass


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name.upper())


def _build_config(args) -> variants.PipelineConfig:
    preset_name = getattr(args, "preset", None) or _env("preset") or "boostnsift"
    config = variants.preset(preset_name)
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise CliError(f"config file not found: {path}")
        config = variants.apply_overrides(config, json.loads(path.read_text(encoding="utf-8")))
    env_overrides = {}
    for key in _OVERRIDE_KEYS:
        value = _env(key)
        if value is not None:
            env_overrides[key] = value
    config = variants.apply_overrides(config, env_overrides)
    flag_overrides = {}
    for key, attr in (("alpha", "alpha"), ("beta", "beta"), ("gamma", "gamma"),
                      ("k", "k"), ("b", "b"), ("sift_mode", "sift_mode"),
                      ("grand_mode", "grand_mode"), ("truncate_fraction", "top_fraction")):
        value = getattr(args, attr, None)
        if value is not None:
            flag_overrides[key] = value
    return variants.apply_overrides(config, flag_overrides)


def _filter_lists(args) -> FilterLists:
    lists = default_filter_lists()
    stop_path = getattr(args, "stopwords", None) or _env("stopwords")
    key_path = getattr(args, "keywords", None) or _env("keywords")
    stop = load_term_file(stop_path) if stop_path else lists.stop_words
    keys = load_term_file(key_path) if key_path else lists.language_keywords
    return FilterLists(stop_words=stop, language_keywords=keys)


def _load_corpus_arg(path_str: str) -> corpus_mod.Corpus:
    path = Path(path_str)
    if path.is_dir():
        if (path / "corpus.jsonl").is_file():
            return corpus_mod.load_corpus(path / "corpus.jsonl")
        diagnostics: list[str] = []
        c = corpus_mod.extract_methods(path, diagnostics=diagnostics)
        for d in diagnostics:
            print(d, file=sys.stderr)
        return c
    if path.is_file():
        return corpus_mod.load_corpus(path)
    raise CliError(f"path not found: {path}")


def _out_dir(args) -> Path:
    out = Path(getattr(args, "out", None) or _env("out") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_index(args) -> int:
    out = _out_dir(args)
    corpus = _load_corpus_arg(args.source)
    lists = _filter_lists(args)
    idx = index_mod.build_index(corpus, lists)
    corpus_mod.save_corpus(corpus, out / "corpus.jsonl")
    index_mod.save_index(idx, out / "index.json")
    print(f"{idx.doc_count} methods indexed")
    print(f"vocabulary size: {idx.vocabulary_size()}")
    print(f"average method length: {idx.avg_len:.2f} terms")
    print(f"corpus hash: {corpus_mod.corpus_digest(corpus)}")
    return 0


def cmd_locate(args) -> int:
    out = _out_dir(args)
    config = _build_config(args)
    lists = _filter_lists(args)
    t_start = time.perf_counter()
    corpus = _load_corpus_arg(args.index)
    reports = load_bug_reports(args.bugs)
    run = variants.run_pipeline(corpus, reports, config, lists)
    for bug_id in run.skipped_bugs:
        print(f"warning: bug {bug_id} produced an empty query; skipped", file=sys.stderr)
    results_path = out / "results.tsv"
    sifter.write_results(run.results, results_path)
    total_ms = (time.perf_counter() - t_start) * 1000
    manifest = {
        "config": config.to_dict(),
        "corpus_hash": corpus_mod.corpus_digest(corpus),
        "bug_file": str(args.bugs),
        "gold_file": None,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "elapsed_ms": {**run.timings_ms, "eval": 0.0},
        "total_ms": total_ms,
        "bugs_located": len(run.results),
        "bugs_skipped": run.skipped_bugs,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"{len(run.results)} ranked lists written to {results_path}")
    return 0


def cmd_evaluate(args) -> int:
    ns = tuple(int(n) for n in args.top_n.split(","))
    results = sifter.read_results(args.results)
    gold = evaluation.load_gold_set(args.gold)
    report = evaluation.evaluate(results, gold, ns)
    print(evaluation.format_report_table(report))
    out = getattr(args, "out", None) or _env("out")
    if out:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(
            json.dumps(evaluation.report_to_dict(report), indent=2) + "\n", encoding="utf-8"
        )
    found_nothing = report.mrr == 0 and report.map == 0 and all(
        c == 0 for c in report.top_n.values()
    )
    return 1 if found_nothing else 0


def cmd_sweep(args) -> int:
    from .query import sweep_weights

    out = _out_dir(args)
    if not Path(args.gold).is_file():
        raise CliError(f"gold file not found: {args.gold}")
    config = _build_config(args)
    lists = _filter_lists(args)
    corpus = _load_corpus_arg(args.index)
    reports = load_bug_reports(args.bugs)
    gold = evaluation.load_gold_set(args.gold)
    idx = index_mod.build_index(corpus, lists)
    counts = {r.bug_id: field_term_counts(r, lists) for r in reports}
    ns = tuple(int(n) for n in args.top_n.split(","))

    rows = []
    for weights in sweep_weights(args.range_lo, args.range_hi, args.step):
        queries = []
        for r in reports:
            try:
                queries.append(boost_from_counts(r.bug_id, counts[r.bug_id], weights))
            except QueryError:
                continue
        if not queries:
            continue
        grand = grand_query(queries, config.grand_mode)
        global_scores = dict(score(grand, idx, config.bm25))
        results = {}
        for q in queries:
            ranked = sifter.sift(q.origin, score(q, idx, config.bm25),
                                 global_scores, config.sift_mode)
            if config.truncate_fraction is not None:
                ranked = sifter.truncate_top_fraction(ranked, config.truncate_fraction)
            results[q.origin] = ranked
        report = evaluation.evaluate(results, gold, ns)
        rows.append((weights.alpha, weights.beta, weights.gamma, report.mrr, report.map))

    rows.sort(key=lambda r: (-r[3], -r[4], r[0], r[1], r[2]))
    sweep_path = out / "sweep.tsv"
    with open(sweep_path, "w", encoding="utf-8") as fh:
        fh.write("alpha\tbeta\tgamma\tmrr\tmap\n")
        for a, b, g, mrr, map_ in rows:
            fh.write(f"{a:g}\t{b:g}\t{g:g}\t{mrr:.6f}\t{map_:.6f}\n")
    print(f"{len(rows)} configurations written to {sweep_path}")

    def show(tag, sel):
        print(tag)
        for a, b, g, mrr, map_ in sel:
            print(f"  alpha={a:g} beta={b:g} gamma={g:g}  MRR={mrr:.3f} MAP={map_:.3f}")

    show("best 3:", rows[:3])
    show("worst 3:", rows[-3:])
    return 0


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=variants.preset_names(), default=None)
    p.add_argument("--config", help="JSON file overriding preset fields")
    p.add_argument("--alpha", type=float, default=None, help="title weight")
    p.add_argument("--beta", type=float, default=None, help="description weight")
    p.add_argument("--gamma", type=float, default=None, help="comments weight")
    p.add_argument("--k", type=float, default=None, help="TF saturation parameter")
    p.add_argument("--b", type=float, default=None, help="length normalization strength")
    p.add_argument("--sift-mode", choices=[m.value for m in sifter.SiftMode], default=None)
    p.add_argument("--grand-mode", choices=["mean", "sum"], default=None)
    p.add_argument("--top-fraction", type=float, default=None,
                   help="keep only the top fraction of each ranked list")


def _add_list_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stopwords", help="stop-word list file (one term per line)")
    p.add_argument("--keywords", help="language keyword list file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bugsift",
        description="Method-level IR bug localization: boosted queries, "
                    "saturating-TF ranking, local/global score sifting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="extract or load a corpus and build the index")
    p.add_argument("source", help="source tree, corpus file, or directory with corpus.jsonl")
    p.add_argument("--out", help="output directory")
    _add_list_flags(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("locate", help="rank methods for every bug report")
    p.add_argument("index", help="corpus file or directory produced by `bugsift index`")
    p.add_argument("bugs", help="line-delimited JSON bug reports")
    p.add_argument("--out", help="output directory")
    _add_config_flags(p)
    _add_list_flags(p)
    p.set_defaults(func=cmd_locate)

    p = sub.add_parser("evaluate", help="score a results file against a gold set")
    p.add_argument("results", help="results.tsv from `bugsift locate`")
    p.add_argument("gold", help="line-delimited JSON gold sets")
    p.add_argument("--top-n", default="1,5,10,20")
    p.add_argument("--out", help="directory for the machine-readable report")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="evaluate every boost-weight triple in a range")
    p.add_argument("index", help="corpus file or directory produced by `bugsift index`")
    p.add_argument("bugs")
    p.add_argument("gold")
    p.add_argument("--range-lo", type=float, default=0.5)
    p.add_argument("--range-hi", type=float, default=4.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--top-n", default="1,5,10,20")
    p.add_argument("--out", help="output directory")
    _add_config_flags(p)
    _add_list_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, CorpusError, EvalError, QueryError,
            index_mod.IndexError_, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
