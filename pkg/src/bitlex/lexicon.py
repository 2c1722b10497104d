"""Thresholded translation lexicons and vocabulary recall."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import IO

from .bitext import Bitext
from .induction import Model, ModelEntry

logger = logging.getLogger(__name__)

TSV_HEADER = "u\tv\tclass\tn\tk\tlogL"


@dataclass
class Lexicon:
    """Link types surviving a likelihood threshold, best first.

    Sorted by log score descending, then source surface, then target
    surface, which makes the order total.
    """

    entries: list[ModelEntry]
    threshold: float  # in likelihood-ratio units (may be inf)
    log_threshold: float


def export_lexicon(
    model: Model,
    threshold: float | None = None,
    log_threshold: float | None = None,
) -> Lexicon:
    """Filter the model's link types at a threshold and sort them.

    The threshold is in likelihood-ratio units; pass log_threshold instead
    when the ratio would overflow a float.  Types discarded during
    induction are gone for good, so thresholds below the induction cutoff
    cannot add entries; such requests are capped with a warning.
    """
    if threshold is not None and log_threshold is not None:
        raise ValueError("pass either threshold or log_threshold, not both")
    if threshold is None and log_threshold is None:
        threshold = model.cutoff
    if log_threshold is None:
        if threshold <= 0.0:
            raise ValueError(f"threshold must be positive, got {threshold}")
        log_threshold = math.log(threshold)
    induction_floor = math.log(model.cutoff)
    if log_threshold < induction_floor:
        logger.warning(
            "threshold %.6g is below the induction cutoff %.6g; types under the "
            "cutoff were discarded during training, capping",
            math.exp(log_threshold),
            model.cutoff,
        )
        log_threshold = induction_floor
    entries = [e for e in model.entries if e.log_score >= log_threshold]
    entries.sort(key=lambda e: (-e.log_score, e.source, e.target))
    try:
        ratio = math.exp(log_threshold)
    except OverflowError:
        ratio = math.inf
    return Lexicon(entries, ratio, log_threshold)


def recall(lexicon: Lexicon, bitext: Bitext) -> float:
    """Fraction of the bitext vocabulary covered by at least one entry.

    Both sides are pooled: the denominator is the number of source types
    plus the number of target types, singletons included.
    """
    vocab_size = len(bitext.vocab_source) + len(bitext.vocab_target)
    if vocab_size == 0:
        return 0.0
    covered_src = set()
    covered_tgt = set()
    for e in lexicon.entries:
        if bitext.vocab_source.id_of(e.source) is not None:
            covered_src.add(e.source)
        if bitext.vocab_target.id_of(e.target) is not None:
            covered_tgt.add(e.target)
    return (len(covered_src) + len(covered_tgt)) / vocab_size


def write_lexicon_tsv(lexicon: Lexicon, fh: IO[str]) -> None:
    """Write the lexicon as TSV: a header line, then one row per entry."""
    fh.write(TSV_HEADER + "\n")
    for e in lexicon.entries:
        fh.write(
            f"{e.source}\t{e.target}\t{e.link_class}\t{e.cooc_count}\t"
            f"{e.link_count}\t{e.log_score!r}\n"
        )


def read_lexicon_tsv(fh: IO[str]) -> list[ModelEntry]:
    """Read entries written by write_lexicon_tsv (floats round-trip exactly)."""
    header = fh.readline().rstrip("\n")
    if header != TSV_HEADER:
        raise ValueError(f"unexpected lexicon header: {header!r}")
    entries = []
    for line in fh:
        u, v, cls, n, k, log_score = line.rstrip("\n").split("\t")
        entries.append(ModelEntry(cls, u, v, int(n), int(k), float(log_score)))
    return entries
