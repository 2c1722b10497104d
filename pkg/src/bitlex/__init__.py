"""bitlex: word-to-word translation lexicon induction from aligned bitexts.

The pipeline counts same-class co-occurrences over aligned segments, links
tokens greedily under a one-to-one assumption, fits two hidden link rates
per class by maximum likelihood, and iterates until the total link
probability stops improving.  Surviving link types form a translation
lexicon whose precision/recall balance is set by one threshold.
"""

__version__ = "0.1.0"

from .bitext import (
    Bitext,
    SegmentPair,
    TokenizerOptions,
    Vocab,
    WordType,
    assign_class,
    build_bitext,
    load_bitext,
    load_function_words,
    tokenize,
)
from .cooc import CoocTable, build_cooc, dump_cooc_tsv
from .errors import (
    BitlexError,
    ConfigError,
    EstimationError,
    InductionError,
    InputError,
    SchemaError,
)
from .estimation import (
    ClassParams,
    PairCounts,
    SearchConfig,
    derive_translation_prior,
    empirical_link_rate,
    estimate_params,
    mixture_log_likelihood,
)
from .estimator import LexiconInducer, check_aligned_pairs
from .induction import (
    InduceConfig,
    IterationRecord,
    Model,
    ModelEntry,
    induce,
    load_model,
    save_model,
    score_table_for,
    write_entries_tsv,
)
from .lexicon import Lexicon, export_lexicon, read_lexicon_tsv, recall, write_lexicon_tsv
from .linking import LinkStats, TokenLink, link_bitext, link_segment, write_links_tsv
from .scoring import (
    ScoreTable,
    build_initial_scores,
    g2_score,
    likelihood_ratio,
    log_binomial_pmf,
    rebuild_scores,
)

__all__ = [
    "Bitext",
    "BitlexError",
    "ClassParams",
    "ConfigError",
    "CoocTable",
    "EstimationError",
    "InduceConfig",
    "InductionError",
    "InputError",
    "IterationRecord",
    "Lexicon",
    "LexiconInducer",
    "LinkStats",
    "Model",
    "ModelEntry",
    "PairCounts",
    "SchemaError",
    "ScoreTable",
    "SearchConfig",
    "SegmentPair",
    "TokenLink",
    "TokenizerOptions",
    "Vocab",
    "WordType",
    "assign_class",
    "build_bitext",
    "build_cooc",
    "build_initial_scores",
    "check_aligned_pairs",
    "derive_translation_prior",
    "dump_cooc_tsv",
    "empirical_link_rate",
    "estimate_params",
    "export_lexicon",
    "g2_score",
    "induce",
    "likelihood_ratio",
    "link_bitext",
    "link_segment",
    "load_bitext",
    "load_function_words",
    "load_model",
    "log_binomial_pmf",
    "mixture_log_likelihood",
    "read_lexicon_tsv",
    "rebuild_scores",
    "recall",
    "save_model",
    "score_table_for",
    "tokenize",
    "write_entries_tsv",
    "write_lexicon_tsv",
    "write_links_tsv",
]
