"""Evaluation toolkit: synthetic corpora, sampling, adjudication, metrics."""

from .adjudication import (
    Concordance,
    Judgment,
    JudgmentSet,
    build_bundle,
    concordances,
    judgment_set_from_dict,
    judgment_set_to_dict,
    load_bundle,
    load_judgments,
    precision_ci,
    sample_link_types,
    save_bundle,
    save_judgments,
    score_judgments,
)
from .generator import (
    GenerationSpec,
    GroundTruth,
    generate_synthetic_bitext,
    load_truth,
    save_truth,
)
from .metrics import (
    CurvePoint,
    TruthScore,
    midband_fraction,
    precision_recall_curve,
    score_against_truth,
    wilson_interval,
    write_curve_csv,
)

__all__ = [
    "Concordance",
    "CurvePoint",
    "GenerationSpec",
    "GroundTruth",
    "Judgment",
    "JudgmentSet",
    "TruthScore",
    "build_bundle",
    "concordances",
    "generate_synthetic_bitext",
    "judgment_set_from_dict",
    "judgment_set_to_dict",
    "load_bundle",
    "load_judgments",
    "load_truth",
    "midband_fraction",
    "precision_ci",
    "precision_recall_curve",
    "sample_link_types",
    "save_bundle",
    "save_judgments",
    "save_truth",
    "score_against_truth",
    "score_judgments",
    "wilson_interval",
    "write_curve_csv",
]
