"""Competitive linking: greedy one-to-one token linking within aligned segments."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO

from .bitext import Bitext, SegmentPair, Vocab
from .cooc import DEFAULT_MAX_SEGMENT_LEN
from .scoring import ScoreTable


@dataclass(frozen=True)
class TokenLink:
    """One linked token pair inside a segment."""

    segment: int
    source_pos: int
    target_pos: int
    source_type: int
    target_type: int
    link_class: str
    score: float


@dataclass
class LinkStats:
    """Link-type counts produced by one linking pass over the bitext."""

    counts: dict[str, dict[tuple[int, int], int]] = field(default_factory=dict)
    class_totals: dict[str, int] = field(default_factory=dict)
    total: int = 0

    def k(self, link_class: str, u: int, v: int) -> int:
        return self.counts.get(link_class, {}).get((u, v), 0)


def link_segment(
    pair: SegmentPair,
    scores: ScoreTable,
    vocab_source: Vocab,
    vocab_target: Vocab,
) -> list[TokenLink]:
    """Greedily link tokens within one aligned segment pair.

    Candidates are position pairs whose type pair carries a surviving score
    in its (shared) class.  The highest-scoring candidate whose tokens are
    both still free is linked; linked tokens are removed from further
    competition, and the process repeats until no eligible candidate
    remains.  Ties on score break by source position, then target position,
    which makes the outcome deterministic and pairs repeated tokens
    leftmost-first.

    Candidate collection is O(l*m); the sort adds a log factor over the
    competitive-linking ideal, which is acceptable at bounded segment
    lengths.
    """
    src_ids = pair.source_ids
    tgt_ids = pair.target_ids
    src_classes = [vocab_source.class_of(u) for u in src_ids]
    tgt_classes = [vocab_target.class_of(v) for v in tgt_ids]

    candidates: list[tuple[float, int, int]] = []
    for i, u in enumerate(src_ids):
        table = scores.scores.get(src_classes[i])
        if not table:
            continue
        cls = src_classes[i]
        for j, v in enumerate(tgt_ids):
            if tgt_classes[j] != cls:
                continue
            score = table.get((u, v))
            if score is not None:
                candidates.append((-score, i, j))
    candidates.sort()

    links: list[TokenLink] = []
    src_used = bytearray(len(src_ids))
    tgt_used = bytearray(len(tgt_ids))
    for neg_score, i, j in candidates:
        if src_used[i] or tgt_used[j]:
            continue
        src_used[i] = 1
        tgt_used[j] = 1
        links.append(
            TokenLink(pair.index, i, j, src_ids[i], tgt_ids[j], src_classes[i], -neg_score)
        )
    return links


def _link_range(
    bitext: Bitext,
    scores: ScoreTable,
    start: int,
    stop: int,
    max_segment_len: int,
    collect: bool,
) -> tuple[dict[str, dict[tuple[int, int], int]], list[TokenLink]]:
    counts: dict[str, dict[tuple[int, int], int]] = {}
    collected: list[TokenLink] = []
    vs, vt = bitext.vocab_source, bitext.vocab_target
    for seg in bitext.segments[start:stop]:
        if len(seg.source_ids) > max_segment_len or len(seg.target_ids) > max_segment_len:
            continue
        for link in link_segment(seg, scores, vs, vt):
            per_class = counts.setdefault(link.link_class, {})
            key = (link.source_type, link.target_type)
            per_class[key] = per_class.get(key, 0) + 1
            if collect:
                collected.append(link)
    return counts, collected


def link_bitext(
    bitext: Bitext,
    scores: ScoreTable,
    max_segment_len: int = DEFAULT_MAX_SEGMENT_LEN,
    workers: int = 1,
    collect_links: bool = False,
) -> tuple[LinkStats, list[TokenLink] | None]:
    """Link every segment and aggregate link-type counts per class.

    Segments over the length cap are skipped, mirroring the co-occurrence
    pass (the cap must match for k <= n to hold).  With workers > 1 the
    segments are partitioned into contiguous ranges linked concurrently;
    results merge by segment order, so the output is identical to the
    single-threaded path.
    """
    n = len(bitext.segments)
    if workers <= 1 or n < 2 * workers:
        partials = [_link_range(bitext, scores, 0, n, max_segment_len, collect_links)]
    else:
        chunk = (n + workers - 1) // workers
        bounds = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(
                pool.map(
                    lambda b: _link_range(
                        bitext, scores, b[0], b[1], max_segment_len, collect_links
                    ),
                    bounds,
                )
            )

    stats = LinkStats()
    links: list[TokenLink] = []
    for counts, collected in partials:
        for cls, pairs in counts.items():
            merged = stats.counts.setdefault(cls, {})
            for key, k in pairs.items():
                merged[key] = merged.get(key, 0) + k
        links.extend(collected)
    stats.class_totals = {cls: sum(m.values()) for cls, m in sorted(stats.counts.items())}
    stats.total = sum(stats.class_totals.values())
    return stats, (links if collect_links else None)


def write_links_tsv(links: list[TokenLink], bitext: Bitext, fh: IO[str]) -> None:
    """Write token links as `segment<TAB>src_pos<TAB>tgt_pos<TAB>u<TAB>v<TAB>class<TAB>logL`."""
    vs, vt = bitext.vocab_source, bitext.vocab_target
    for link in links:
        fh.write(
            f"{link.segment}\t{link.source_pos}\t{link.target_pos}\t"
            f"{vs.surface_of(link.source_type)}\t{vt.surface_of(link.target_type)}\t"
            f"{link.link_class}\t{link.score!r}\n"
        )
