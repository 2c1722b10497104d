"""Aligned bitext ingestion: tokenization, word-type interning, link classes."""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import InputError

logger = logging.getLogger(__name__)

SOURCE = "source"
TARGET = "target"

CONTENT = "content"
FUNCTION = "function"


@dataclass(frozen=True)
class TokenizerOptions:
    """Knobs that change what counts as a token.

    Both defaults are deliberate choices (lowercasing folds case variants
    together, hyphen splitting breaks compounds apart) and are recorded in
    every model file, because tokenization visibly affects linking quality.
    """

    lowercase: bool = True
    split_hyphens: bool = True

    def to_dict(self) -> dict:
        return {"lowercase": self.lowercase, "split_hyphens": self.split_hyphens}

    @classmethod
    def from_dict(cls, d: dict) -> "TokenizerOptions":
        return cls(lowercase=bool(d["lowercase"]), split_hyphens=bool(d["split_hyphens"]))


def _strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(line: str, options: TokenizerOptions | None = None) -> list[str]:
    """Whitespace-split a line, then normalize each chunk.

    Normalization order: optional lowercasing, optional hyphen splitting,
    then stripping of leading/trailing punctuation from every piece.
    Pieces that end up empty are dropped.
    """
    options = options or TokenizerOptions()
    out: list[str] = []
    for chunk in line.split():
        if options.lowercase:
            chunk = chunk.lower()
        pieces = chunk.split("-") if options.split_hyphens else (chunk,)
        for piece in pieces:
            piece = _strip_punct(piece)
            if piece:
                out.append(piece)
    return out


def assign_class(surface: str, side: str, function_words: frozenset[str] | set[str]) -> str:
    """Classify one word type by table look-up.

    The shipped classifier ignores `side` beyond the caller passing the
    side's own function-word list: a surface is a function word exactly
    when it appears on that list, and a content word otherwise.
    """
    return FUNCTION if surface in function_words else CONTENT


@dataclass(frozen=True)
class WordType:
    id: int
    surface: str
    side: str
    link_class: str


class Vocab:
    """Interning table for one side of the bitext.

    Ids are dense, assigned in first-seen order, so the same text loaded
    with the same options always produces the same numbering.
    """

    def __init__(self, side: str, function_words: Iterable[str] = ()):
        self.side = side
        self.function_words = frozenset(function_words)
        self._ids: dict[str, int] = {}
        self.surfaces: list[str] = []
        self.classes: list[str] = []

    def intern(self, surface: str) -> int:
        wid = self._ids.get(surface)
        if wid is None:
            wid = len(self.surfaces)
            self._ids[surface] = wid
            self.surfaces.append(surface)
            self.classes.append(assign_class(surface, self.side, self.function_words))
        return wid

    def id_of(self, surface: str) -> int | None:
        return self._ids.get(surface)

    def surface_of(self, wid: int) -> str:
        return self.surfaces[wid]

    def class_of(self, wid: int) -> str:
        return self.classes[wid]

    def word(self, wid: int) -> WordType:
        return WordType(wid, self.surfaces[wid], self.side, self.classes[wid])

    def __len__(self) -> int:
        return len(self.surfaces)

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "surfaces": list(self.surfaces),
            "classes": list(self.classes),
            "function_words": sorted(self.function_words),
        }


@dataclass(frozen=True)
class SegmentPair:
    """One aligned segment pair, as interned token ids."""

    index: int
    source_ids: tuple[int, ...]
    target_ids: tuple[int, ...]


@dataclass
class Bitext:
    """An aligned, tokenized, interned parallel corpus.

    Immutable once built; safe to share across threads.
    """

    segments: list[SegmentPair]
    vocab_source: Vocab
    vocab_target: Vocab
    options: TokenizerOptions
    dropped_pairs: int = 0

    def to_dict(self) -> dict:
        """Canonical structure, used for serialization-identity tests."""
        return {
            "options": self.options.to_dict(),
            "segments": [
                [list(s.source_ids), list(s.target_ids)] for s in self.segments
            ],
            "vocab_source": self.vocab_source.to_dict(),
            "vocab_target": self.vocab_target.to_dict(),
            "dropped_pairs": self.dropped_pairs,
        }


def build_bitext(
    pairs: Iterable[tuple[str, str]],
    options: TokenizerOptions | None = None,
    function_words_source: Iterable[str] = (),
    function_words_target: Iterable[str] = (),
    drop_empty: bool = True,
) -> Bitext:
    """Construct a Bitext from already aligned (source line, target line) pairs.

    Pairs where either side tokenizes to nothing are dropped and counted
    (co-occurrence is undefined for empty segments).  Pass drop_empty=False
    to keep them, which preserves one output segment per input pair; this
    is what prediction-style callers need to keep alignment with their
    inputs.
    """
    options = options or TokenizerOptions()
    vocab_src = Vocab(SOURCE, function_words_source)
    vocab_tgt = Vocab(TARGET, function_words_target)
    segments: list[SegmentPair] = []
    dropped = 0
    for sline, tline in pairs:
        src = tokenize(sline, options)
        tgt = tokenize(tline, options)
        if drop_empty and (not src or not tgt):
            dropped += 1
            continue
        segments.append(
            SegmentPair(
                len(segments),
                tuple(vocab_src.intern(t) for t in src),
                tuple(vocab_tgt.intern(t) for t in tgt),
            )
        )
    if dropped:
        logger.warning(
            "dropped %d aligned pairs that were empty after tokenization", dropped
        )
    return Bitext(segments, vocab_src, vocab_tgt, options, dropped)


def _read_lines(path: str | Path) -> list[str]:
    raw = Path(path).read_bytes()
    chunks = raw.split(b"\n")
    if chunks and chunks[-1] == b"":
        chunks.pop()
    lines: list[str] = []
    for num, chunk in enumerate(chunks, start=1):
        try:
            lines.append(chunk.decode("utf-8").rstrip("\r"))
        except UnicodeDecodeError as exc:
            raise InputError(f"{path}: line {num} is not valid UTF-8 ({exc.reason})") from exc
    return lines


def load_bitext(
    source_path: str | Path,
    target_path: str | Path,
    options: TokenizerOptions | None = None,
    function_words_source: Iterable[str] = (),
    function_words_target: Iterable[str] = (),
) -> Bitext:
    """Load two line-aligned UTF-8 files into a Bitext.

    Line i of the source file is treated as a translation of line i of
    the target file.

    Raises:
        InputError: if the line counts differ (the message names both
            counts) or either file contains undecodable bytes (the message
            names the line).
    """
    src_lines = _read_lines(source_path)
    tgt_lines = _read_lines(target_path)
    if len(src_lines) != len(tgt_lines):
        raise InputError(
            f"line count mismatch: {source_path} has {len(src_lines)} lines, "
            f"{target_path} has {len(tgt_lines)}"
        )
    return build_bitext(
        zip(src_lines, tgt_lines),
        options,
        function_words_source,
        function_words_target,
    )


def load_function_words(path: str | Path, options: TokenizerOptions | None = None) -> frozenset[str]:
    """Read a one-surface-per-line function-word list.

    Surfaces are folded the same way the tokenizer folds tokens, so that
    membership tests line up with interned surfaces.
    """
    options = options or TokenizerOptions()
    words = set()
    for line in _read_lines(path):
        word = line.strip()
        if not word:
            continue
        if options.lowercase:
            word = word.lower()
        words.add(word)
    return frozenset(words)
