"""Method-level IR bug localization toolkit."""

from .corpus import Corpus, CorpusError, MethodDocument, extract_methods, load_corpus, save_corpus
from .evaluation import EvalReport, cliffs_delta, effect_size_label, evaluate, wilcoxon_rank_sum
from .index import Bm25Params, Index, build_index, score, tf_component
from .preprocess import FilterLists, default_filter_lists, preprocess_text, split_identifier, stem
from .query import BoostWeights, BoostedQuery, BugReport, GrandMode, boost, grand_query, sweep_weights
from .sifter import RankedList, SiftMode, sift, truncate_top_fraction
from .variants import PipelineConfig, preset, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "Bm25Params", "BoostWeights", "BoostedQuery", "BugReport", "Corpus",
    "CorpusError", "EvalReport", "FilterLists", "GrandMode", "Index",
    "MethodDocument", "PipelineConfig", "RankedList", "SiftMode",
    "boost", "build_index", "cliffs_delta", "default_filter_lists",
    "effect_size_label", "evaluate", "extract_methods", "grand_query",
    "load_corpus", "preprocess_text", "preset", "run_pipeline",
    "save_corpus", "score", "sift", "split_identifier", "stem",
    "sweep_weights", "tf_component", "truncate_top_fraction",
    "wilcoxon_rank_sum",
]
