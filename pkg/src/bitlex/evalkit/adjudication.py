"""Sampling, bilingual concordances, and the adjudication round trip.

The bundle and judgment documents are the wire contract with the browser
adjudicator; both are validated against the JSON Schemas shipped under
``bitlex/schemas``.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from ..bitext import Bitext
from ..errors import InputError, SchemaError
from ..lexicon import Lexicon
from .metrics import wilson_interval

BUNDLE_KIND = "adjudication-bundle"
JUDGMENTS_KIND = "judgment-set"
FORMAT_VERSION = 1

VERDICTS = ("correct", "incomplete", "incorrect")


def _load_schema(name: str) -> dict:
    path = resources.files("bitlex") / "schemas" / name
    return json.loads(path.read_text(encoding="utf-8"))


def _validate(doc: dict, schema_name: str) -> None:
    try:
        jsonschema.validate(doc, _load_schema(schema_name))
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{exc.json_path}: {exc.message}") from exc


def sample_link_types(lexicon: Lexicon, sets: int, size: int, seed: int) -> list[list]:
    """Draw `sets` independent samples of `size` entries, each without replacement.

    Sampling is seeded and therefore reproducible; different sets may
    overlap (they are independent draws from the whole lexicon).
    """
    if size > len(lexicon.entries):
        raise InputError(
            f"cannot sample {size} link types from a lexicon of {len(lexicon.entries)}"
        )
    rng = random.Random(seed)
    return [rng.sample(lexicon.entries, size) for _ in range(sets)]


@dataclass(frozen=True)
class Concordance:
    """One aligned segment where the pair co-occurs, with token positions."""

    segment: int
    source_text: str
    target_text: str
    source_positions: tuple[int, ...]
    target_positions: tuple[int, ...]


def concordances(
    bitext: Bitext, u_surface: str, v_surface: str, max_contexts: int = 5
) -> list[Concordance]:
    """Up to max_contexts segments containing u on the source side and v on
    the target side, lowest segment index first.

    Texts are reconstructed from tokens (space-joined), so the recorded
    positions index directly into the displayed words.
    """
    u = bitext.vocab_source.id_of(u_surface)
    v = bitext.vocab_target.id_of(v_surface)
    if u is None or v is None:
        return []
    out: list[Concordance] = []
    vs, vt = bitext.vocab_source, bitext.vocab_target
    for seg in bitext.segments:
        if u not in seg.source_ids or v not in seg.target_ids:
            continue
        out.append(
            Concordance(
                seg.index,
                " ".join(vs.surface_of(t) for t in seg.source_ids),
                " ".join(vt.surface_of(t) for t in seg.target_ids),
                tuple(i for i, t in enumerate(seg.source_ids) if t == u),
                tuple(j for j, t in enumerate(seg.target_ids) if t == v),
            )
        )
        if len(out) >= max_contexts:
            break
    return out


def build_bundle(
    lexicon: Lexicon,
    bitext: Bitext,
    sets: int = 5,
    size: int = 100,
    seed: int = 0,
    max_contexts: int = 5,
    recall_level: float | None = None,
) -> dict:
    """Assemble the adjudication bundle document for the sampled link types."""
    samples = []
    for drawn in sample_link_types(lexicon, sets, size, seed):
        items = []
        for e in drawn:
            items.append(
                {
                    "u": e.source,
                    "v": e.target,
                    "class": e.link_class,
                    "n": e.cooc_count,
                    "k": e.link_count,
                    "logL": e.log_score,
                    "concordances": [
                        {
                            "segment": c.segment,
                            "source": c.source_text,
                            "target": c.target_text,
                            "source_positions": list(c.source_positions),
                            "target_positions": list(c.target_positions),
                        }
                        for c in concordances(bitext, e.source, e.target, max_contexts)
                    ],
                }
            )
        samples.append({"items": items})
    doc = {
        "kind": BUNDLE_KIND,
        "format_version": FORMAT_VERSION,
        "seed": seed,
        "log_threshold": lexicon.log_threshold,
        "recall_level": recall_level,
        "lexicon_size": len(lexicon.entries),
        "samples": samples,
    }
    digest = hashlib.sha256(
        json.dumps(doc, ensure_ascii=False, sort_keys=True).encode("utf-8")
    ).hexdigest()
    doc["bundle_id"] = digest[:16]
    _validate(doc, "adjudication_bundle.schema.json")
    return doc


def save_bundle(doc: dict, path: str | Path) -> None:
    _validate(doc, "adjudication_bundle.schema.json")
    Path(path).write_text(
        json.dumps(doc, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_bundle(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"malformed bundle file {path}: {exc}") from exc
    _validate(doc, "adjudication_bundle.schema.json")
    return doc


@dataclass(frozen=True)
class Judgment:
    sample: int
    index: int
    source: str
    target: str
    verdict: str | None  # None marks an item exported unjudged
    note: str = ""


@dataclass
class JudgmentSet:
    """Verdicts for one bundle, as produced by the adjudication UI."""

    bundle_id: str
    judge: str = "anonymous"
    judgments: list[Judgment] = field(default_factory=list)

    def judged(self) -> list[Judgment]:
        return [j for j in self.judgments if j.verdict is not None]


def judgment_set_to_dict(js: JudgmentSet) -> dict:
    return {
        "kind": JUDGMENTS_KIND,
        "format_version": FORMAT_VERSION,
        "bundle_id": js.bundle_id,
        "judge": js.judge,
        "judgments": [
            {
                "sample": j.sample,
                "index": j.index,
                "u": j.source,
                "v": j.target,
                "verdict": j.verdict,
                "note": j.note,
            }
            for j in js.judgments
        ],
    }


def judgment_set_from_dict(doc: dict) -> JudgmentSet:
    _validate(doc, "judgment_set.schema.json")
    return JudgmentSet(
        bundle_id=doc["bundle_id"],
        judge=doc["judge"],
        judgments=[
            Judgment(j["sample"], j["index"], j["u"], j["v"], j["verdict"], j.get("note", ""))
            for j in doc["judgments"]
        ],
    )


def save_judgments(js: JudgmentSet, path: str | Path) -> None:
    doc = judgment_set_to_dict(js)
    _validate(doc, "judgment_set.schema.json")
    Path(path).write_text(
        json.dumps(doc, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_judgments(path: str | Path) -> JudgmentSet:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"malformed judgment file {path}: {exc}") from exc
    return judgment_set_from_dict(doc)


def precision_ci(
    judgments: JudgmentSet, incomplete_policy: str
) -> tuple[float, float, float]:
    """Precision over the judged items with a 95% Wilson interval.

    `incomplete_policy` decides whether "incomplete" verdicts count as
    correct; computing both policies gives the upper and lower precision
    readings.
    """
    if incomplete_policy not in ("correct", "incorrect"):
        raise ValueError(f"incomplete_policy must be correct|incorrect, got {incomplete_policy!r}")
    judged = judgments.judged()
    if not judged:
        raise InputError("judgment set contains no judged items")
    successes = sum(
        1
        for j in judged
        if j.verdict == "correct" or (j.verdict == "incomplete" and incomplete_policy == "correct")
    )
    total = len(judged)
    low, high = wilson_interval(successes, total)
    return (successes / total, low, high)


def score_judgments(bundle: dict, judgments: JudgmentSet) -> dict:
    """Adjudication report: verdict counts plus precision under both policies.

    Every bundle item must receive exactly one verdict, or be explicitly
    marked unjudged; the report carries the unjudged count either way.
    """
    if judgments.bundle_id != bundle["bundle_id"]:
        raise SchemaError(
            f"judgments reference bundle {judgments.bundle_id!r}, "
            f"expected {bundle['bundle_id']!r}"
        )
    expected = {
        (si, ii)
        for si, sample in enumerate(bundle["samples"])
        for ii in range(len(sample["items"]))
    }
    seen: dict[tuple[int, int], Judgment] = {}
    for j in judgments.judgments:
        key = (j.sample, j.index)
        if key not in expected:
            raise SchemaError(f"judgment for unknown item sample={j.sample} index={j.index}")
        seen[key] = j  # latest verdict wins
    unjudged = len(expected) - len([j for j in seen.values() if j.verdict is not None])
    counts = {v: 0 for v in VERDICTS}
    for j in seen.values():
        if j.verdict is not None:
            counts[j.verdict] += 1
    # deduplicated view, so re-judged items count once
    effective = JudgmentSet(judgments.bundle_id, judgments.judge, list(seen.values()))
    report: dict = {
        "bundle_id": bundle["bundle_id"],
        "items": len(expected),
        "judged": len(expected) - unjudged,
        "unjudged": unjudged,
        "counts": counts,
        "precision": {},
    }
    for policy in ("correct", "incorrect"):
        p, low, high = precision_ci(effective, policy)
        report["precision"][f"incomplete_{policy}"] = {
            "precision": p,
            "ci_low": low,
            "ci_high": high,
        }
    return report
