"""Per-class sparse co-occurrence counts over aligned segment pairs."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import IO

from .bitext import Bitext
from .errors import InputError

logger = logging.getLogger(__name__)

STRICT = "strict"
DEFAULT_MAX_SEGMENT_LEN = 100


@dataclass
class CoocTable:
    """Sparse co-occurrence statistics, partitioned by link class.

    A segment holding `a` tokens of source type u and `b` tokens of target
    type v (same class) contributes a*b to counts[cls][(u, v)]: every token
    pair counts.  Marginals are accumulated independently during the same
    pass, so sum_v n(u,v) == source_marginals[cls][u] is a real consistency
    check, not a tautology.
    """

    counts: dict[str, dict[tuple[int, int], int]] = field(default_factory=dict)
    source_marginals: dict[str, dict[int, int]] = field(default_factory=dict)
    target_marginals: dict[str, dict[int, int]] = field(default_factory=dict)
    class_totals: dict[str, int] = field(default_factory=dict)
    total: int = 0
    skipped_segments: int = 0

    def classes(self) -> list[str]:
        return sorted(self.counts)

    def n(self, link_class: str, u: int, v: int) -> int:
        return self.counts.get(link_class, {}).get((u, v), 0)


def build_cooc(
    bitext: Bitext,
    policy: str = STRICT,
    max_segment_len: int = DEFAULT_MAX_SEGMENT_LEN,
) -> CoocTable:
    """Count co-occurrences for every same-class token pair in the bitext.

    Cross-class pairs are never counted (`strict` is the only policy).
    Segments longer than max_segment_len on either side are skipped and
    reported, since each segment costs O(l*m).
    """
    if policy != STRICT:
        raise ValueError(f"unknown class policy: {policy!r}")
    if not bitext.segments:
        raise InputError("cannot count co-occurrences over an empty bitext")

    table = CoocTable()
    src_class = bitext.vocab_source.class_of
    tgt_class = bitext.vocab_target.class_of
    for seg in bitext.segments:
        if len(seg.source_ids) > max_segment_len or len(seg.target_ids) > max_segment_len:
            table.skipped_segments += 1
            continue
        src_groups: dict[str, Counter] = {}
        for wid in seg.source_ids:
            src_groups.setdefault(src_class(wid), Counter())[wid] += 1
        tgt_groups: dict[str, Counter] = {}
        for wid in seg.target_ids:
            tgt_groups.setdefault(tgt_class(wid), Counter())[wid] += 1

        for cls, src_counts in src_groups.items():
            tgt_counts = tgt_groups.get(cls)
            if tgt_counts is None:
                continue
            src_total = sum(src_counts.values())
            tgt_total = sum(tgt_counts.values())
            pair_counts = table.counts.setdefault(cls, {})
            src_marg = table.source_marginals.setdefault(cls, {})
            tgt_marg = table.target_marginals.setdefault(cls, {})
            for u, a in src_counts.items():
                src_marg[u] = src_marg.get(u, 0) + a * tgt_total
                for v, b in tgt_counts.items():
                    key = (u, v)
                    pair_counts[key] = pair_counts.get(key, 0) + a * b
            for v, b in tgt_counts.items():
                tgt_marg[v] = tgt_marg.get(v, 0) + b * src_total
            table.class_totals[cls] = table.class_totals.get(cls, 0) + src_total * tgt_total

    table.total = sum(table.class_totals.values())
    if table.skipped_segments:
        logger.warning(
            "skipped %d segments longer than %d tokens on a side",
            table.skipped_segments,
            max_segment_len,
        )
    return table


def dump_cooc_tsv(table: CoocTable, bitext: Bitext, fh: IO[str]) -> None:
    """Write `class<TAB>u<TAB>v<TAB>n` rows, sorted for reproducible diffs."""
    rows = []
    for cls in table.classes():
        for (u, v), n in table.counts[cls].items():
            rows.append((cls, bitext.vocab_source.surface_of(u), bitext.vocab_target.surface_of(v), n))
    rows.sort()
    for cls, u, v, n in rows:
        fh.write(f"{cls}\t{u}\t{v}\t{n}\n")
