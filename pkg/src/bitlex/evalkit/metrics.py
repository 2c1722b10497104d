"""Automated scoring against ground truth, interval arithmetic, and curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO

from ..cooc import CoocTable
from ..induction import Model
from ..lexicon import Lexicon, export_lexicon
from ..linking import LinkStats
from .generator import GroundTruth

# two-sided 95% normal quantile
Z95 = 1.959963984540054


def wilson_interval(successes: int, total: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Chosen over the normal approximation because it stays sane at the
    extreme proportions this evaluation lives in (99%+ precision).
    """
    if total <= 0:
        raise ValueError("total must be positive")
    if not 0 <= successes <= total:
        raise ValueError(f"successes must lie in [0, {total}], got {successes}")
    p = successes / total
    z2 = z * z
    denom = 1.0 + z2 / total
    center = (p + z2 / (2.0 * total)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / total + z2 / (4.0 * total * total))
    low = max(0.0, center - half)
    high = min(1.0, center + half)
    # the boundary cases are exact; do not let float residue blur them
    if successes == 0:
        low = 0.0
    if successes == total:
        high = 1.0
    return (low, high)


@dataclass(frozen=True)
class TruthScore:
    """Lexicon quality against a known lexicon.

    `empty` flags the no-entries case, where precision is reported as 1.0
    by convention (an empty lexicon makes no false claims).
    """

    precision: float
    recall: float
    empty: bool = False


def score_against_truth(lexicon: Lexicon, truth: GroundTruth) -> TruthScore:
    """Type-level precision and recall against the generator's lexicon.

    Recall is measured against the truth pairs that co-occur at least once
    in the training bitext; pairs that never co-occurred are unlearnable by
    construction.
    """
    entry_pairs = {(e.source, e.target) for e in lexicon.entries}
    truth_pairs = set(truth.pairs)
    reachable = set(truth.cooccurring)
    hits = len(entry_pairs & truth_pairs)
    if not entry_pairs:
        return TruthScore(1.0, 0.0, empty=True)
    rec = len(entry_pairs & reachable) / len(reachable) if reachable else 0.0
    return TruthScore(hits / len(entry_pairs), rec, empty=False)


@dataclass(frozen=True)
class CurvePoint:
    log_threshold: float
    recall: float
    precision: float


def precision_recall_curve(
    model: Model, truth: GroundTruth, points: int = 10
) -> list[CurvePoint]:
    """Sweep thresholds over the model's score range and score each lexicon.

    Thresholds are taken at evenly spaced quantiles of the surviving
    entries' log scores, lowest first, so each step peels off a comparable
    slice of the lexicon.
    """
    if points < 2:
        raise ValueError("need at least 2 curve points")
    scores = sorted(e.log_score for e in model.entries if math.isfinite(e.log_score))
    if not scores:
        raise ValueError("model has no finite-scored entries")
    thresholds = []
    for i in range(points):
        idx = round(i * (len(scores) - 1) / (points - 1))
        thresholds.append(scores[idx])
    curve = []
    for log_t in thresholds:
        lex = export_lexicon(model, log_threshold=log_t)
        score = score_against_truth(lex, truth)
        curve.append(CurvePoint(log_t, score.recall, score.precision))
    return curve


def write_curve_csv(curve: list[CurvePoint], fh: IO[str]) -> None:
    """CSV for plotting; thresholds are in log likelihood-ratio units."""
    fh.write("threshold,recall,precision\n")
    for pt in curve:
        fh.write(f"{pt.log_threshold!r},{pt.recall!r},{pt.precision!r}\n")


def midband_fraction(
    cooc: CoocTable,
    stats: LinkStats,
    min_n: int = 5,
    band: tuple[float, float] = (0.2, 0.6),
) -> float:
    """Fraction of well-observed pair types whose link ratio is mid-range.

    A small value means the k/n distribution is sharply bimodal: pairs
    either link nearly every co-occurrence or nearly never.
    """
    lo, hi = band
    total = 0
    mid = 0
    for cls, pair_counts in cooc.counts.items():
        links = stats.counts.get(cls, {})
        for pair, n in pair_counts.items():
            if n < min_n:
                continue
            total += 1
            ratio = links.get(pair, 0) / n
            if lo <= ratio <= hi:
                mid += 1
    return mid / total if total else 0.0
