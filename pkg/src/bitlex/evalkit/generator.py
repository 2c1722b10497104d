"""Synthetic bitext generation with a known one-to-one lexicon.

The generator is the testing stand-in for hand evaluation: because the
true lexicon is known, precision and recall can be scored automatically.
It can also manufacture indirect associations on demand, by injecting
source-side collocations (a partner word that only ever appears adjacent
to its anchor).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..bitext import Bitext, TokenizerOptions, build_bitext
from ..errors import SchemaError

TRUTH_KIND = "bitlex-truth"
TRUTH_FORMAT_VERSION = 1


@dataclass(frozen=True)
class GenerationSpec:
    """Shape of the synthetic corpus.

    Source words are drawn Zipf-style over the vocabulary ranks; the most
    frequent ranks are designated function words, mirroring real text.
    """

    vocab_pairs: int = 500
    segments: int = 5000
    min_len: int = 5
    max_len: int = 15
    zipf_exponent: float = 1.0
    noise: float = 0.0
    function_fraction: float = 0.1
    collocations: int = 0
    collocation_rate: float = 0.5

    def validate(self) -> None:
        if self.vocab_pairs < 10:
            raise ValueError(f"vocab_pairs must be >= 10, got {self.vocab_pairs}")
        if self.segments < 1:
            raise ValueError(f"segments must be >= 1, got {self.segments}")
        if not 1 <= self.min_len <= self.max_len:
            raise ValueError(f"bad length range [{self.min_len}, {self.max_len}]")
        if not 0.0 <= self.noise < 1.0:
            raise ValueError(f"noise must lie in [0, 1), got {self.noise}")
        if not 0.0 <= self.function_fraction < 1.0:
            raise ValueError(f"bad function fraction {self.function_fraction}")
        n_function = int(round(self.vocab_pairs * self.function_fraction))
        if self.collocations < 0 or n_function + self.collocations > self.vocab_pairs:
            raise ValueError(f"too many collocations: {self.collocations}")
        if not 0.0 < self.collocation_rate <= 1.0:
            raise ValueError(f"bad collocation rate {self.collocation_rate}")

    def to_dict(self) -> dict:
        return {
            "vocab_pairs": self.vocab_pairs,
            "segments": self.segments,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "zipf_exponent": self.zipf_exponent,
            "noise": self.noise,
            "function_fraction": self.function_fraction,
            "collocations": self.collocations,
            "collocation_rate": self.collocation_rate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationSpec":
        return cls(**d)


@dataclass
class GroundTruth:
    """The generator's lexicon plus everything needed to score against it."""

    pairs: list[tuple[str, str]]  # one-to-one: each surface appears once per side
    cooccurring: list[tuple[str, str]]  # truth pairs that co-occur >= 1 time
    collocation_pairs: list[tuple[str, str]]  # (anchor, partner) source surfaces
    function_words_source: list[str]
    function_words_target: list[str]
    generation: GenerationSpec = field(default_factory=GenerationSpec)
    seed: int = 0

    def translation_of(self, source_surface: str) -> str | None:
        for u, v in self.pairs:
            if u == source_surface:
                return v
        return None


def generate_synthetic_bitext(
    spec: GenerationSpec, seed: int
) -> tuple[Bitext, GroundTruth]:
    """Build an aligned corpus from a known one-to-one lexicon.

    Every segment samples source words by rank frequency, translates each
    through the lexicon, then (optionally) replaces target words with
    random vocabulary at the noise rate and shuffles the target order.
    Collocation partners never occur independently; they are inserted right
    after their anchor at the collocation rate.  The anchor also appearing
    alone is what gives the anchor's own translation the stronger direct
    association, so the induced indirect association (partner against the
    anchor's translation) has something to lose to.
    """
    spec.validate()
    rng = np.random.default_rng(seed)
    vocab = spec.vocab_pairs
    n_function = int(round(vocab * spec.function_fraction))

    src_words = [f"s{i:04d}" for i in range(vocab)]
    tgt_words = [f"t{i:04d}" for i in range(vocab)]
    fw_src = frozenset(src_words[:n_function])
    fw_tgt = frozenset(tgt_words[:n_function])

    # partners are extra types appended past the sampled ranks
    partner_of: dict[int, int] = {}
    collocation_pairs: list[tuple[str, str]] = []
    for offset in range(spec.collocations):
        anchor = n_function + offset
        partner = vocab + offset
        src_words.append(f"s{partner:04d}")
        tgt_words.append(f"t{partner:04d}")
        partner_of[anchor] = partner
        collocation_pairs.append((src_words[anchor], src_words[partner]))

    weights = 1.0 / np.arange(1, vocab + 1, dtype=np.float64) ** spec.zipf_exponent
    probs = weights / weights.sum()
    total_vocab = len(src_words)

    src_lines: list[str] = []
    tgt_lines: list[str] = []
    for _ in range(spec.segments):
        length = int(rng.integers(spec.min_len, spec.max_len + 1))
        ranks = rng.choice(vocab, size=length, p=probs)
        src_tokens: list[int] = []
        for rank in ranks:
            rank = int(rank)
            src_tokens.append(rank)
            partner = partner_of.get(rank)
            if partner is not None and rng.random() < spec.collocation_rate:
                src_tokens.append(partner)
        tgt_tokens = list(src_tokens)
        if spec.noise > 0.0:
            mask = rng.random(len(tgt_tokens)) < spec.noise
            for pos in np.flatnonzero(mask):
                tgt_tokens[pos] = int(rng.integers(0, total_vocab))
        order = rng.permutation(len(tgt_tokens))
        tgt_tokens = [tgt_tokens[i] for i in order]
        src_lines.append(" ".join(src_words[i] for i in src_tokens))
        tgt_lines.append(" ".join(tgt_words[i] for i in tgt_tokens))

    bitext = build_bitext(
        zip(src_lines, tgt_lines),
        TokenizerOptions(),
        function_words_source=fw_src,
        function_words_target=fw_tgt,
    )
    pairs = [(src_words[i], tgt_words[i]) for i in range(total_vocab)]
    truth = GroundTruth(
        pairs=pairs,
        cooccurring=_cooccurring_pairs(bitext, pairs),
        collocation_pairs=collocation_pairs,
        function_words_source=sorted(fw_src),
        function_words_target=sorted(fw_tgt),
        generation=spec,
        seed=seed,
    )
    return bitext, truth


def _cooccurring_pairs(bitext: Bitext, pairs: list[tuple[str, str]]) -> list[tuple[str, str]]:
    partner: dict[int, int] = {}
    surface_pairs: dict[int, tuple[str, str]] = {}
    for u_surface, v_surface in pairs:
        u = bitext.vocab_source.id_of(u_surface)
        v = bitext.vocab_target.id_of(v_surface)
        if u is None or v is None:
            continue
        partner[u] = v
        surface_pairs[u] = (u_surface, v_surface)
    seen: set[int] = set()
    for seg in bitext.segments:
        tgt_set = set(seg.target_ids)
        for u in set(seg.source_ids):
            if u in seen or u not in partner:
                continue
            if partner[u] in tgt_set:
                seen.add(u)
    return sorted(surface_pairs[u] for u in seen)


def save_truth(truth: GroundTruth, path: str | Path) -> None:
    doc = {
        "kind": TRUTH_KIND,
        "format_version": TRUTH_FORMAT_VERSION,
        "pairs": [list(p) for p in truth.pairs],
        "cooccurring": [list(p) for p in truth.cooccurring],
        "collocation_pairs": [list(p) for p in truth.collocation_pairs],
        "function_words_source": truth.function_words_source,
        "function_words_target": truth.function_words_target,
        "generation": truth.generation.to_dict(),
        "seed": truth.seed,
    }
    text = json.dumps(doc, ensure_ascii=False, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_truth(path: str | Path) -> GroundTruth:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"malformed truth file {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("kind") != TRUTH_KIND:
        raise SchemaError("not a truth file (missing or wrong 'kind')")
    if doc.get("format_version") != TRUTH_FORMAT_VERSION:
        raise SchemaError(f"unsupported truth format version: {doc.get('format_version')!r}")
    try:
        return GroundTruth(
            pairs=[tuple(p) for p in doc["pairs"]],
            cooccurring=[tuple(p) for p in doc["cooccurring"]],
            collocation_pairs=[tuple(p) for p in doc["collocation_pairs"]],
            function_words_source=list(doc["function_words_source"]),
            function_words_target=list(doc["function_words_target"]),
            generation=GenerationSpec.from_dict(doc["generation"]),
            seed=doc["seed"],
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed truth file: {exc}") from exc
