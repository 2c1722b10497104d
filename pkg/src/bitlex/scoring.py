"""Association and likelihood scores.

Iteration 1 ranks co-occurring pairs by a signed G2 statistic; later
iterations use the log ratio of two binomial likelihoods under the fitted
class parameters.  Everything is kept in log space, since co-occurrence
counts in the thousands underflow raw probabilities.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .cooc import CoocTable

logger = logging.getLogger(__name__)

NEG_INF = float("-inf")
POS_INF = float("inf")

# chi-square(1) critical value near p = 0.001; G2 is asymptotically
# chi-square(1) under independence, so this demands real evidence of
# association before a pair may compete in the first linking pass
INITIAL_SCORE_FLOOR = 10.83


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


def g2_score(n_uv: int, n_u: int, n_v: int, total: int) -> float:
    """Signed log-likelihood-ratio statistic of the 2x2 co-occurrence table.

    The magnitude is G2 for the contingency table
    [n_uv, n_u - n_uv; n_v - n_uv, total - n_u - n_v + n_uv], computed in
    the row/column entropy form with 0*log(0) = 0.  The sign is flipped to
    negative when the pair co-occurs less often than independence predicts,
    so that positively associated pairs sort high.
    """
    if total <= 0:
        raise ValueError(f"total co-occurrence count must be positive, got {total}")
    if n_uv < 0:
        raise ValueError(f"cell n(u,v) is negative: {n_uv}")
    if n_u - n_uv < 0:
        raise ValueError(f"cell n(u)-n(u,v) is negative: n_uv={n_uv} exceeds n_u={n_u}")
    if n_v - n_uv < 0:
        raise ValueError(f"cell n(v)-n(u,v) is negative: n_uv={n_uv} exceeds n_v={n_v}")
    remainder = total - n_u - n_v + n_uv
    if remainder < 0:
        raise ValueError(
            f"cell N-n(u)-n(v)+n(u,v) is negative: n_u={n_u}, n_v={n_v}, "
            f"n_uv={n_uv}, N={total}"
        )
    # integer arithmetic makes the independence test and the sign exact
    if n_uv * total == n_u * n_v:
        return 0.0
    cells = (n_uv, n_u - n_uv, n_v - n_uv, remainder)
    magnitude = 2.0 * (
        sum(_xlogx(c) for c in cells)
        - _xlogx(n_u)
        - _xlogx(total - n_u)
        - _xlogx(n_v)
        - _xlogx(total - n_v)
        + _xlogx(total)
    )
    # float cancellation can leave a tiny negative residue near independence
    magnitude = max(magnitude, 0.0)
    return -magnitude if n_uv * total < n_u * n_v else magnitude


def log_binomial_pmf(k: int, n: int, p: float) -> float:
    """log B(k | n, p), with the coefficient via log-gamma.

    Degenerate success probabilities follow the usual conventions: p == 0
    puts all mass on k == 0, and p == 1 on k == n.
    """
    if not 0 <= k <= n:
        raise ValueError(f"k must satisfy 0 <= k <= n, got k={k}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if p == 0.0:
        return 0.0 if k == 0 else NEG_INF
    if p == 1.0:
        return 0.0 if k == n else NEG_INF
    out = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    if k:
        out += k * math.log(p)
    if n - k:
        out += (n - k) * math.log1p(-p)
    return out


def likelihood_ratio(k: int, n: int, true_link_rate: float, false_link_rate: float) -> float:
    """log B(k | n, true rate) - log B(k | n, false rate).

    The binomial coefficients cancel, so only the success/failure terms are
    computed.  A false rate of exactly zero with k > 0 saturates to +inf:
    the false-positive hypothesis assigns the observation probability zero.
    (The estimator keeps the false rate above its floor, so the sentinel
    only appears with hand-built parameters.)
    """
    if not 0 <= k <= n:
        raise ValueError(f"k must satisfy 0 <= k <= n, got k={k}, n={n}")
    if not true_link_rate > false_link_rate:
        raise ValueError(
            f"true link rate must exceed false link rate, got "
            f"{true_link_rate} <= {false_link_rate}"
        )
    if false_link_rate == 0.0:
        if k > 0:
            return POS_INF
        return n * math.log1p(-true_link_rate) if n else 0.0
    if true_link_rate == 1.0 and k < n:
        return NEG_INF
    out = 0.0
    if k:
        out += k * (math.log(true_link_rate) - math.log(false_link_rate))
    if n - k:
        out += (n - k) * (math.log1p(-true_link_rate) - math.log1p(-false_link_rate))
    return out


@dataclass
class ScoreTable:
    """Surviving pair scores per class, keyed by (source id, target id).

    Iteration 1 stores signed G2 values (non-negative after filtering);
    later iterations store log likelihood ratios at or above log(cutoff).
    """

    scores: dict[str, dict[tuple[int, int], float]] = field(default_factory=dict)
    cutoff: float = 1.0

    def size(self) -> int:
        return sum(len(m) for m in self.scores.values())

    def get(self, link_class: str, u: int, v: int) -> float | None:
        return self.scores.get(link_class, {}).get((u, v))


def build_initial_scores(
    cooc: CoocTable,
    cutoff: float = 1.0,
    score_floor: float = INITIAL_SCORE_FLOOR,
) -> ScoreTable:
    """Score every co-occurring pair by signed G2 and keep significant ones.

    Class-local marginals and totals are used: each class is its own event
    space.  A pair must clear the significance floor to compete in the
    first linking pass; coincidental one-off co-occurrences otherwise seed
    links that the likelihood model can never disown (a pair linked once
    out of one co-occurrence looks perfect at any cutoff).  When a class
    has no significant pair at all (a single segment pair repeated puts
    every pair at exact independence), the floor falls back to non-negative
    association so linking can still bootstrap on tie-breaks.

    The likelihood cutoff does not apply to this first table (G2 magnitudes
    are not likelihood ratios); it takes effect from the first re-scoring
    onward.
    """
    table = ScoreTable(cutoff=cutoff)
    for cls in cooc.classes():
        total = cooc.class_totals[cls]
        src_marg = cooc.source_marginals[cls]
        tgt_marg = cooc.target_marginals[cls]
        scored: dict[tuple[int, int], float] = {}
        for (u, v), n in cooc.counts[cls].items():
            scored[(u, v)] = g2_score(n, src_marg[u], tgt_marg[v], total)
        kept = {pair: s for pair, s in scored.items() if s >= score_floor}
        if not kept:
            kept = {pair: s for pair, s in scored.items() if s >= 0.0}
        table.scores[cls] = kept
    return table


def rebuild_scores(
    cooc: CoocTable,
    link_stats,
    params_by_class: dict,
    cutoff: float = 1.0,
) -> ScoreTable:
    """Re-score every co-occurring pair under fitted class parameters.

    Pairs absent from the link statistics are scored with k = 0.  Only
    pairs whose likelihood ratio is at least the cutoff survive; classes
    without fitted parameters are excluded entirely.
    """
    if cutoff <= 0.0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    log_cut = math.log(cutoff)
    table = ScoreTable(cutoff=cutoff)
    for cls in cooc.classes():
        params = params_by_class.get(cls)
        if params is None:
            continue
        links = link_stats.counts.get(cls, {})
        kept: dict[tuple[int, int], float] = {}
        true_rate = params.true_link_rate
        false_rate = params.false_link_rate
        for pair, n in cooc.counts[cls].items():
            k = links.get(pair, 0)
            score = likelihood_ratio(k, n, true_rate, false_rate)
            if score >= log_cut:
                kept[pair] = score
        table.scores[cls] = kept
    return table
