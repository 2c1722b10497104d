"""The outer training loop: alternate linking and re-estimation to convergence."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Callable

from .bitext import Bitext, TokenizerOptions
from .cooc import DEFAULT_MAX_SEGMENT_LEN, CoocTable, build_cooc
from .errors import InductionError, SchemaError
from .estimation import ClassParams, SearchConfig, estimate_params
from .linking import LinkStats, link_bitext
from .scoring import (
    INITIAL_SCORE_FLOOR,
    ScoreTable,
    build_initial_scores,
    rebuild_scores,
)

logger = logging.getLogger(__name__)

MODEL_FORMAT_VERSION = 1
MODEL_KIND = "bitlex-model"


@dataclass(frozen=True)
class InduceConfig:
    """Everything that affects an induction run; serialized into the model.

    `seed` is recorded for provenance only: induction itself is
    deterministic and draws no randomness.
    """

    lowercase: bool = True
    split_hyphens: bool = True
    function_words_source_path: str | None = None
    function_words_target_path: str | None = None
    cutoff: float = 1.0
    initial_score_floor: float = INITIAL_SCORE_FLOOR
    max_iters: int = 20
    max_segment_len: int = DEFAULT_MAX_SEGMENT_LEN
    seed: int = 0
    workers: int = 1
    search: SearchConfig = field(default_factory=SearchConfig)

    def tokenizer_options(self) -> TokenizerOptions:
        return TokenizerOptions(lowercase=self.lowercase, split_hyphens=self.split_hyphens)

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "split_hyphens": self.split_hyphens,
            "function_words_source_path": self.function_words_source_path,
            "function_words_target_path": self.function_words_target_path,
            "cutoff": self.cutoff,
            "initial_score_floor": self.initial_score_floor,
            "max_iters": self.max_iters,
            "max_segment_len": self.max_segment_len,
            "seed": self.seed,
            "workers": self.workers,
            "search": self.search.to_dict(),
        }


@dataclass(frozen=True)
class ModelEntry:
    """One surviving link type, by surface for portability."""

    link_class: str
    source: str
    target: str
    cooc_count: int
    link_count: int
    log_score: float


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    links_total: int
    cooc_total: int
    class_params: dict[str, ClassParams]
    objective: float
    score_table_size: int

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "links_total": self.links_total,
            "cooc_total": self.cooc_total,
            "class_params": {c: p.to_dict() for c, p in sorted(self.class_params.items())},
            "objective": self.objective,
            "score_table_size": self.score_table_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IterationRecord":
        return cls(
            iteration=d["iteration"],
            links_total=d["links_total"],
            cooc_total=d["cooc_total"],
            class_params={c: ClassParams.from_dict(p) for c, p in d["class_params"].items()},
            objective=d["objective"],
            score_table_size=d["score_table_size"],
        )


@dataclass
class Model:
    """The induced translation model.

    `history` ends at the iteration whose snapshot is returned: when the
    objective dips, the best-scoring iteration wins and later records are
    dropped.  `iterations_run` keeps the true count and `non_monotonic`
    flags the dip.
    """

    config: dict
    class_params: dict[str, ClassParams]
    entries: list[ModelEntry]
    history: list[IterationRecord]
    iterations_run: int
    non_monotonic: bool

    @property
    def cutoff(self) -> float:
        return self.config["cutoff"]

    def tokenizer_options(self) -> TokenizerOptions:
        return TokenizerOptions(
            lowercase=self.config["lowercase"],
            split_hyphens=self.config["split_hyphens"],
        )

    def function_words(self) -> tuple[frozenset[str], frozenset[str]]:
        return (
            frozenset(self.config.get("function_words_source", ())),
            frozenset(self.config.get("function_words_target", ())),
        )


def _snapshot_entries(
    bitext: Bitext, cooc: CoocTable, stats: LinkStats, table: ScoreTable
) -> list[ModelEntry]:
    vs, vt = bitext.vocab_source, bitext.vocab_target
    entries: list[ModelEntry] = []
    for cls in sorted(table.scores):
        pair_counts = cooc.counts[cls]
        links = stats.counts.get(cls, {})
        for (u, v), log_score in table.scores[cls].items():
            entries.append(
                ModelEntry(
                    cls,
                    vs.surface_of(u),
                    vt.surface_of(v),
                    pair_counts[(u, v)],
                    links.get((u, v), 0),
                    log_score,
                )
            )
    entries.sort(key=lambda e: (e.link_class, e.source, e.target))
    return entries


def induce(
    bitext: Bitext,
    config: InduceConfig | None = None,
    trace: Callable[[str, int, float, float, float], None] | None = None,
) -> Model:
    """Induce a translation model from a bitext.

    The loop: count co-occurrences once, seed scores with signed G2, then
    alternate linking, per-class rate estimation, and re-scoring at the
    cutoff.  The run stops when the total link log-probability fails to
    increase, or at max_iters.  Because linking dynamics can move the
    objective non-monotonically, the returned model is the best-scoring
    iteration's snapshot.

    `trace`, when given, receives (class, iteration, true rate, false rate,
    objective) for every point the estimator evaluates.

    Raises:
        InductionError: if no class can be estimated in some iteration.
    """
    config = config or InduceConfig()
    cooc = build_cooc(bitext, max_segment_len=config.max_segment_len)
    scores = build_initial_scores(
        cooc, cutoff=config.cutoff, score_floor=config.initial_score_floor
    )

    history: list[IterationRecord] = []
    best: tuple[float, int, dict[str, ClassParams], ScoreTable, LinkStats] | None = None
    prev_objective = -math.inf
    non_monotonic = False
    iterations_run = 0

    for iteration in range(1, config.max_iters + 1):
        iterations_run = iteration
        stats, _ = link_bitext(
            bitext, scores, max_segment_len=config.max_segment_len, workers=config.workers
        )
        params: dict[str, ClassParams] = {}
        for label in cooc.classes():
            class_trace = None
            if trace is not None:
                class_trace = lambda tr, fr, ll, _l=label, _i=iteration: trace(_l, _i, tr, fr, ll)
            try:
                params[label] = estimate_params(
                    stats, cooc, label, search=config.search, trace=class_trace
                )
            except Exception as exc:  # noqa: BLE001 - per-class failures are survivable
                logger.warning("iteration %d: class %r skipped: %s", iteration, label, exc)
        if not params:
            raise InductionError(
                f"iteration {iteration}: no class could be estimated "
                f"(classes seen: {cooc.classes()})"
            )

        objective = sum(p.log_likelihood for p in params.values())
        new_scores = rebuild_scores(cooc, stats, params, cutoff=config.cutoff)
        history.append(
            IterationRecord(
                iteration,
                stats.total,
                cooc.total,
                params,
                objective,
                new_scores.size(),
            )
        )
        logger.info(
            "iteration %d: %d links, objective %.6f, %d surviving types",
            iteration,
            stats.total,
            objective,
            new_scores.size(),
        )
        if best is None or objective > best[0]:
            best = (objective, iteration, params, new_scores, stats)
        if objective <= prev_objective:
            if objective < prev_objective:
                non_monotonic = True
                logger.warning(
                    "objective decreased (%.6f -> %.6f); returning the best iteration",
                    prev_objective,
                    objective,
                )
            break
        prev_objective = objective
        scores = new_scores

    assert best is not None
    _, best_iter, best_params, best_table, best_stats = best
    config_dict = config.to_dict()
    config_dict["function_words_source"] = sorted(bitext.vocab_source.function_words)
    config_dict["function_words_target"] = sorted(bitext.vocab_target.function_words)
    return Model(
        config=config_dict,
        class_params=best_params,
        entries=_snapshot_entries(bitext, cooc, best_stats, best_table),
        history=history[:best_iter],
        iterations_run=iterations_run,
        non_monotonic=non_monotonic,
    )


def score_table_for(model: Model, bitext: Bitext) -> ScoreTable:
    """Project the model's surviving link types onto a bitext's id space.

    Entries whose surfaces are absent from the bitext vocabulary are
    dropped; they cannot participate in linking that bitext.
    """
    vs, vt = bitext.vocab_source, bitext.vocab_target
    scores: dict[str, dict[tuple[int, int], float]] = {}
    for entry in model.entries:
        u = vs.id_of(entry.source)
        v = vt.id_of(entry.target)
        if u is None or v is None:
            continue
        scores.setdefault(entry.link_class, {})[(u, v)] = entry.log_score
    return ScoreTable(scores=scores, cutoff=model.cutoff)


def write_entries_tsv(model: Model, fh: IO[str]) -> None:
    """Score dump: `class<TAB>u<TAB>v<TAB>n<TAB>k<TAB>logL` rows."""
    for e in model.entries:
        fh.write(
            f"{e.link_class}\t{e.source}\t{e.target}\t{e.cooc_count}\t"
            f"{e.link_count}\t{e.log_score!r}\n"
        )


def model_to_dict(model: Model) -> dict:
    return {
        "kind": MODEL_KIND,
        "format_version": MODEL_FORMAT_VERSION,
        "config": model.config,
        "class_params": {c: p.to_dict() for c, p in sorted(model.class_params.items())},
        "entries": [
            [e.link_class, e.source, e.target, e.cooc_count, e.link_count, e.log_score]
            for e in model.entries
        ],
        "history": [r.to_dict() for r in model.history],
        "iterations_run": model.iterations_run,
        "non_monotonic": model.non_monotonic,
    }


def model_from_dict(doc: dict) -> Model:
    if not isinstance(doc, dict) or doc.get("kind") != MODEL_KIND:
        raise SchemaError("not a model file (missing or wrong 'kind')")
    version = doc.get("format_version")
    if not isinstance(version, int) or version < 1:
        raise SchemaError(f"bad model format version: {version!r}")
    if version > MODEL_FORMAT_VERSION:
        raise SchemaError(
            f"model format version {version} is newer than supported "
            f"({MODEL_FORMAT_VERSION})"
        )
    try:
        return Model(
            config=doc["config"],
            class_params={
                c: ClassParams.from_dict(p) for c, p in doc["class_params"].items()
            },
            entries=[ModelEntry(*row) for row in doc["entries"]],
            history=[IterationRecord.from_dict(r) for r in doc["history"]],
            iterations_run=doc["iterations_run"],
            non_monotonic=doc["non_monotonic"],
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed model file: {exc}") from exc


def save_model(model: Model, path: str | Path) -> None:
    """Write the model as a versioned JSON document (deterministic bytes)."""
    text = json.dumps(model_to_dict(model), ensure_ascii=False, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_model(path: str | Path) -> Model:
    """Read a model written by save_model.

    Raises:
        SchemaError: on malformed JSON, a wrong kind, or an unsupported
            format version.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"malformed model file {path}: {exc}") from exc
    return model_from_dict(doc)
