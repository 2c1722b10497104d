"""Hidden-parameter estimation for the two-rate binomial mixture.

Each link class is modeled by two link rates: one for co-occurrences of
mutual translations (high) and one for everything else (low).  The mixture
weight is not free; it is pinned algebraically to the empirical link rate,
leaving exactly two degrees of freedom, which are fitted by maximum
likelihood over a coarse grid followed by coordinate-descent refinement.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .cooc import CoocTable
from .errors import EstimationError
from .linking import LinkStats

logger = logging.getLogger(__name__)

Trace = Callable[[float, float, float], None]


@dataclass(frozen=True)
class SearchConfig:
    """Search schedule for the rate fit.

    The coarse grid plays the role of a large hill-climbing step (small
    local ripples in the objective are invisible at grid resolution); the
    refinement recovers precision around the best grid point.
    """

    true_rate_points: int = 25
    false_rate_points: int = 25
    false_rate_floor: float = 1e-8
    true_rate_cap: float = 1.0 - 1e-6
    refine_tol: float = 1e-9
    max_refine_steps: int = 200

    def to_dict(self) -> dict:
        return {
            "true_rate_points": self.true_rate_points,
            "false_rate_points": self.false_rate_points,
            "false_rate_floor": self.false_rate_floor,
            "true_rate_cap": self.true_rate_cap,
            "refine_tol": self.refine_tol,
            "max_refine_steps": self.max_refine_steps,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchConfig":
        return cls(**d)


@dataclass(frozen=True)
class ClassParams:
    """Fitted hidden parameters for one link class."""

    label: str
    true_link_rate: float  # Pr(link | co-occurrence of mutual translations)
    false_link_rate: float  # Pr(link | co-occurrence of non-translations)
    link_rate: float  # empirical: total links / total co-occurrences
    translation_prior: float  # Pr(mutual translations | co-occurrence)
    log_likelihood: float  # mixture objective at the fitted rates

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "true_link_rate": self.true_link_rate,
            "false_link_rate": self.false_link_rate,
            "link_rate": self.link_rate,
            "translation_prior": self.translation_prior,
            "log_likelihood": self.log_likelihood,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassParams":
        return cls(**d)


class PairCounts:
    """Grouped (links, co-occurrences) observations with multiplicities.

    Many pair types share the same (k, n), so grouping keeps the mixture
    objective cheap to re-evaluate across hundreds of candidate rate
    settings.  Binomial coefficients depend only on (k, n) and are
    precomputed once.
    """

    def __init__(self, ks: Iterable[int], ns: Iterable[int], weights: Iterable[int]):
        self.ks = np.asarray(list(ks), dtype=np.float64)
        self.ns = np.asarray(list(ns), dtype=np.float64)
        self.weights = np.asarray(list(weights), dtype=np.float64)
        if self.ks.shape != self.ns.shape or self.ks.shape != self.weights.shape:
            raise ValueError("ks, ns and weights must have equal lengths")
        if np.any(self.ks < 0) or np.any(self.ks > self.ns):
            raise ValueError("every observation must satisfy 0 <= k <= n")
        self.log_coefs = np.array(
            [
                math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
                for k, n in zip(self.ks, self.ns)
            ],
            dtype=np.float64,
        )
        self.links = int(round(float((self.ks * self.weights).sum())))
        self.coocs = int(round(float((self.ns * self.weights).sum())))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "PairCounts":
        grouped = Counter(pairs)
        items = sorted(grouped.items())
        return cls(
            [k for (k, _), _ in items],
            [n for (_, n), _ in items],
            [w for _, w in items],
        )

    @classmethod
    def from_stats(cls, link_stats: LinkStats, cooc: CoocTable, label: str) -> "PairCounts":
        """Statistics for one class: every co-occurring pair, k = 0 if unlinked."""
        links = link_stats.counts.get(label, {})
        grouped: Counter = Counter()
        for pair, n in cooc.counts.get(label, {}).items():
            grouped[(links.get(pair, 0), n)] += 1
        items = sorted(grouped.items())
        return cls(
            [k for (k, _), _ in items],
            [n for (_, n), _ in items],
            [w for _, w in items],
        )

    def __len__(self) -> int:
        return len(self.ks)


def empirical_link_rate(link_stats: LinkStats, cooc: CoocTable, label: str) -> float:
    """The class's observed link rate: total links over total co-occurrences."""
    n_total = cooc.class_totals.get(label, 0)
    if n_total == 0:
        raise EstimationError(f"class {label!r} has no co-occurrences")
    return link_stats.class_totals.get(label, 0) / n_total

def derive_translation_prior(
    true_link_rate: float, false_link_rate: float, link_rate: float
) -> float:
    """Mixture weight implied by pinning the blended rate to the empirical one.

    Clamped into [0, 1] with a warning when the empirical rate falls outside
    the open interval between the two rates (the search forbids that region,
    so a clamp signals misuse).
    """
    if not true_link_rate > false_link_rate:
        raise EstimationError(
            f"degenerate rates: true {true_link_rate} <= false {false_link_rate}"
        )
    prior = (link_rate - false_link_rate) / (true_link_rate - false_link_rate)
    if prior < 0.0 or prior > 1.0:
        logger.warning(
            "translation prior %.6g outside [0, 1]; clamping "
            "(link rate %.6g not between the class rates)",
            prior,
            link_rate,
        )
        prior = min(max(prior, 0.0), 1.0)
    return prior


def _binom_log_terms(pc: PairCounts, rate: float) -> np.ndarray:
    """log B(k | n, rate) for every grouped observation, coefficient included."""
    if rate == 0.0:
        return np.where(pc.ks == 0, 0.0, -np.inf)
    if rate == 1.0:
        return np.where(pc.ks == pc.ns, 0.0, -np.inf)
    return pc.log_coefs + pc.ks * math.log(rate) + (pc.ns - pc.ks) * math.log1p(-rate)


def _objective(pc: PairCounts, true_rate: float, false_rate: float, link_rate: float) -> float:
    prior = derive_translation_prior(true_rate, false_rate, link_rate)
    log_true = _binom_log_terms(pc, true_rate)
    log_false = _binom_log_terms(pc, false_rate)
    if prior == 0.0:
        per_pair = log_false
    elif prior == 1.0:
        per_pair = log_true
    else:
        per_pair = np.logaddexp(math.log(prior) + log_true, math.log1p(-prior) + log_false)
    return float((per_pair * pc.weights).sum())


def mixture_log_likelihood(
    pairs: PairCounts | Iterable[tuple[int, int]],
    true_link_rate: float,
    false_link_rate: float,
    link_rate: float,
) -> float:
    """Total log probability of the observed link counts under the mixture.

    Each pair type contributes log of a prior-weighted sum of two binomial
    likelihoods; the sum of two exponentials is computed stably from the
    log terms.
    """
    pc = pairs if isinstance(pairs, PairCounts) else PairCounts.from_pairs(pairs)
    return _objective(pc, true_link_rate, false_link_rate, link_rate)


def estimate_params(
    link_stats: LinkStats,
    cooc: CoocTable,
    label: str,
    search: SearchConfig | None = None,
    trace: Trace | None = None,
) -> ClassParams:
    """Fit the two hidden rates for one class by maximum likelihood.

    The empirical link rate is held fixed, constraining the search to
    1 > true rate > empirical rate > false rate > floor.  A coarse grid
    (linear in the true rate, geometric in the false rate) locates the
    basin of the single visible maximum; coordinate descent with shrinking
    steps then polishes the point until gains drop below the tolerance.

    Raises:
        EstimationError: when the class has no co-occurrences or no links,
            or the empirical rate leaves no feasible region.
    """
    search = search or SearchConfig()
    pc = PairCounts.from_stats(link_stats, cooc, label)
    if pc.coocs == 0:
        raise EstimationError(f"class {label!r} has no co-occurrences")
    if pc.links == 0:
        raise EstimationError(f"class {label!r} has no links; cannot estimate")
    link_rate = pc.links / pc.coocs
    cap = search.true_rate_cap
    floor = search.false_rate_floor
    if link_rate >= cap:
        # every co-occurrence linked: pin the fit just below the cap so the
        # feasible region stays open; the true rate will land on the cap
        pinned = 2.0 * cap - 1.0
        logger.warning(
            "class %r: empirical link rate %.6g is at the upper boundary; "
            "fitting with %.6g",
            label,
            link_rate,
            pinned,
        )
        link_rate = pinned
    if link_rate <= floor:
        raise EstimationError(
            f"class {label!r}: empirical link rate {link_rate:.6g} leaves no "
            f"room above the floor {floor:.6g}"
        )

    def evaluate(tr: float, fr: float) -> float:
        value = _objective(pc, tr, fr, link_rate)
        if trace is not None:
            trace(tr, fr, value)
        return value

    true_grid = np.clip(
        np.linspace(link_rate, 1.0, search.true_rate_points + 2)[1:-1], None, cap
    )
    false_grid = np.geomspace(floor, link_rate, search.false_rate_points + 1)[:-1]

    best_ll = -math.inf
    best_tr = best_fr = 0.0
    for tr in true_grid:
        for fr in false_grid:
            ll = evaluate(float(tr), float(fr))
            if ll > best_ll:
                best_ll, best_tr, best_fr = ll, float(tr), float(fr)

    tr, fr, ll = best_tr, best_fr, best_ll
    tr_step = (1.0 - link_rate) / (search.true_rate_points + 1)
    fr_ratio = (link_rate / floor) ** (1.0 / search.false_rate_points)
    for _ in range(search.max_refine_steps):
        best_gain = 0.0
        best_move: tuple[float, float, float] | None = None
        for cand in (min(tr + tr_step, cap), tr - tr_step):
            if cand <= link_rate or cand == tr:
                continue
            cand_ll = evaluate(cand, fr)
            if cand_ll - ll > best_gain:
                best_gain, best_move = cand_ll - ll, (cand, fr, cand_ll)
        for cand in (min(fr * fr_ratio, link_rate * (1.0 - 1e-12)), max(fr / fr_ratio, floor)):
            if cand >= link_rate or cand == fr:
                continue
            cand_ll = evaluate(tr, cand)
            if cand_ll - ll > best_gain:
                best_gain, best_move = cand_ll - ll, (tr, cand, cand_ll)
        if best_move is not None and best_gain >= search.refine_tol:
            tr, fr, ll = best_move
        else:
            tr_step /= 2.0
            fr_ratio = math.sqrt(fr_ratio)
            if tr_step < 1e-15 and fr_ratio - 1.0 < 1e-12:
                break

    if tr >= cap:
        logger.warning(
            "class %r: true link rate capped at %.6g (all observed ratios at "
            "the upper boundary)",
            label,
            cap,
        )
    prior = derive_translation_prior(tr, fr, link_rate)
    return ClassParams(label, tr, fr, link_rate, prior, ll)
