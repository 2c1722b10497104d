"""Scikit-learn style facade over the induction pipeline.

The underlying pipeline is perfectly usable on its own; this wrapper
exists so the inducer composes with the wider ecosystem (get_params /
set_params, clone, fit attributes with trailing underscores).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .bitext import Bitext, TokenizerOptions, build_bitext
from .estimation import SearchConfig
from .induction import InduceConfig, induce, score_table_for
from .scoring import INITIAL_SCORE_FLOOR
from .lexicon import Lexicon, export_lexicon
from .linking import TokenLink, link_segment


def check_aligned_pairs(X) -> list[tuple[str, str]]:
    """Validate fit/predict input: an iterable of (source, target) text pairs."""
    if isinstance(X, Bitext):
        raise TypeError("pass raw aligned text pairs; Bitext objects are not accepted here")
    if isinstance(X, str):
        raise TypeError("X must be an iterable of (source, target) pairs, not a string")
    pairs = []
    for i, row in enumerate(X):
        if isinstance(row, str) or not isinstance(row, Sequence) or len(row) != 2:
            raise ValueError(f"X[{i}] is not a (source, target) pair: {row!r}")
        src, tgt = row
        if not isinstance(src, str) or not isinstance(tgt, str):
            raise ValueError(f"X[{i}] must contain two strings, got {row!r}")
        pairs.append((src, tgt))
    if not pairs:
        raise ValueError("X is empty; need at least one aligned pair")
    return pairs


class LexiconInducer(BaseEstimator):
    """Induce a word-to-word translation lexicon from aligned text pairs.

    Parameters
    ----------
    cutoff : float, default=1.0
        Likelihood-ratio threshold applied when re-scoring link types each
        iteration.  Raising it trades recall for precision.
    initial_score_floor : float, default=10.83
        Significance floor on first-pass association scores; pairs without
        real evidence of association never enter the first linking round.
    max_iters : int, default=20
        Upper bound on linking/re-estimation rounds.
    max_segment_len : int, default=100
        Segments longer than this on either side are skipped.
    lowercase, split_hyphens : bool
        Tokenizer behavior; must match between fit and predict, which the
        fitted model guarantees by re-using its stored options.
    function_words_source, function_words_target : iterable of str or None
        Per-side function-word surfaces, folded like tokens.
    workers : int, default=1
        Thread partitions used during linking.
    search : SearchConfig or None
        Rate-estimation search schedule; None selects the defaults.
    seed : int, default=0
        Recorded in the model for provenance; induction is deterministic.

    Attributes
    ----------
    model_ : Model
        The induced translation model.
    class_params_ : dict
        Fitted per-class link rates.
    history_ : list of IterationRecord
        Objective trajectory up to the returned iteration.
    """

    def __init__(
        self,
        cutoff: float = 1.0,
        initial_score_floor: float = INITIAL_SCORE_FLOOR,
        max_iters: int = 20,
        max_segment_len: int = 100,
        lowercase: bool = True,
        split_hyphens: bool = True,
        function_words_source: Iterable[str] | None = None,
        function_words_target: Iterable[str] | None = None,
        workers: int = 1,
        search: SearchConfig | None = None,
        seed: int = 0,
    ):
        self.cutoff = cutoff
        self.initial_score_floor = initial_score_floor
        self.max_iters = max_iters
        self.max_segment_len = max_segment_len
        self.lowercase = lowercase
        self.split_hyphens = split_hyphens
        self.function_words_source = function_words_source
        self.function_words_target = function_words_target
        self.workers = workers
        self.search = search
        self.seed = seed

    def _options(self) -> TokenizerOptions:
        return TokenizerOptions(lowercase=self.lowercase, split_hyphens=self.split_hyphens)

    def _build_bitext(self, pairs: list[tuple[str, str]], drop_empty: bool) -> Bitext:
        return build_bitext(
            pairs,
            self._options(),
            function_words_source=self.function_words_source or (),
            function_words_target=self.function_words_target or (),
            drop_empty=drop_empty,
        )

    def fit(self, X, y=None):
        """Induce the model from aligned (source, target) text pairs."""
        pairs = check_aligned_pairs(X)
        bitext = self._build_bitext(pairs, drop_empty=True)
        config = InduceConfig(
            lowercase=self.lowercase,
            split_hyphens=self.split_hyphens,
            cutoff=self.cutoff,
            initial_score_floor=self.initial_score_floor,
            max_iters=self.max_iters,
            max_segment_len=self.max_segment_len,
            seed=self.seed,
            workers=self.workers,
            search=self.search or SearchConfig(),
        )
        self.model_ = induce(bitext, config)
        self.class_params_ = self.model_.class_params
        self.history_ = self.model_.history
        return self

    def predict(self, X) -> list[list[TokenLink]]:
        """Link tokens in aligned pairs using the fitted model.

        Returns one list of token links per input pair (empty when a side
        tokenizes to nothing or no link type survives).
        """
        check_is_fitted(self, "model_")
        pairs = check_aligned_pairs(X)
        bitext = self._build_bitext(pairs, drop_empty=False)
        table = score_table_for(self.model_, bitext)
        return [
            link_segment(seg, table, bitext.vocab_source, bitext.vocab_target)
            for seg in bitext.segments
        ]

    def lexicon(self, threshold: float | None = None) -> Lexicon:
        """Export the fitted lexicon at a threshold (default: the cutoff)."""
        check_is_fitted(self, "model_")
        return export_lexicon(self.model_, threshold)
