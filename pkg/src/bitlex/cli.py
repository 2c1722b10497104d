"""Command-line surface: synthesize, induce, export, link, evaluate.

Every run echoes the configuration it resolved (defaults included) to
stderr, so any result can be reproduced from its log.  Failures print one
machine-parseable line, `error[category]: message`, and exit nonzero.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path

from . import __version__, evalkit
from .bitext import Bitext, TokenizerOptions, load_bitext, load_function_words
from .errors import (
    ConfigError,
    EstimationError,
    InductionError,
    InputError,
    SchemaError,
)
from .estimation import SearchConfig
from .induction import InduceConfig, induce, load_model, save_model, score_table_for
from .scoring import INITIAL_SCORE_FLOOR
from .lexicon import export_lexicon, recall, write_lexicon_tsv
from .linking import link_bitext, write_links_tsv

logger = logging.getLogger(__name__)

# every key a config file may carry; commands pick the subset they use
CONFIG_KEYS = {
    "lowercase",
    "split_hyphens",
    "function_words_source",
    "function_words_target",
    "cutoff",
    "initial_score_floor",
    "max_iters",
    "max_segment_len",
    "workers",
    "seed",
    "entries",
    "segments",
    "min_len",
    "max_len",
    "zipf_exponent",
    "noise",
    "function_fraction",
    "collocations",
    "collocation_rate",
    "threshold",
    "log_threshold",
    "sets",
    "size",
    "max_contexts",
    "points",
    "search_true_rate_points",
    "search_false_rate_points",
    "search_false_rate_floor",
    "search_refine_tol",
    "search_max_refine_steps",
}


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = sorted(set(doc) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return doc


def _resolve(args: argparse.Namespace, config: dict, defaults: dict) -> dict:
    """Flags win over the config file, which wins over built-in defaults."""
    resolved = {}
    for key, default in defaults.items():
        value = getattr(args, key, None)
        if value is None:
            value = config.get(key, default)
        resolved[key] = value
    return resolved


def _echo_config(command: str, resolved: dict) -> None:
    print(
        f"config[{command}]: " + json.dumps(resolved, sort_keys=True, default=str),
        file=sys.stderr,
    )


@contextlib.contextmanager
def _out_stream(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        fh = open(path, "w", encoding="utf-8")
        try:
            yield fh
        finally:
            fh.close()


def _tokenizer_options(resolved: dict) -> TokenizerOptions:
    return TokenizerOptions(
        lowercase=resolved["lowercase"], split_hyphens=resolved["split_hyphens"]
    )


def _search_config(resolved: dict) -> SearchConfig:
    return SearchConfig(
        true_rate_points=resolved["search_true_rate_points"],
        false_rate_points=resolved["search_false_rate_points"],
        false_rate_floor=resolved["search_false_rate_floor"],
        refine_tol=resolved["search_refine_tol"],
        max_refine_steps=resolved["search_max_refine_steps"],
    )


def _bitext_for_model(model, source: str, target: str) -> Bitext:
    fw_src, fw_tgt = model.function_words()
    return load_bitext(source, target, model.tokenizer_options(), fw_src, fw_tgt)


TOKENIZER_DEFAULTS = {"lowercase": True, "split_hyphens": True}
SEARCH_DEFAULTS = {
    "search_true_rate_points": 25,
    "search_false_rate_points": 25,
    "search_false_rate_floor": 1e-8,
    "search_refine_tol": 1e-9,
    "search_max_refine_steps": 200,
}


def cmd_synth(args: argparse.Namespace, config: dict) -> None:
    resolved = _resolve(
        args,
        config,
        {
            "entries": 500,
            "segments": 5000,
            "min_len": 5,
            "max_len": 15,
            "zipf_exponent": 1.0,
            "noise": 0.0,
            "function_fraction": 0.1,
            "collocations": 0,
            "collocation_rate": 0.5,
            "seed": 0,
        },
    )
    resolved["out_dir"] = args.out_dir
    _echo_config("synth", resolved)
    spec = evalkit.GenerationSpec(
        vocab_pairs=resolved["entries"],
        segments=resolved["segments"],
        min_len=resolved["min_len"],
        max_len=resolved["max_len"],
        zipf_exponent=resolved["zipf_exponent"],
        noise=resolved["noise"],
        function_fraction=resolved["function_fraction"],
        collocations=resolved["collocations"],
        collocation_rate=resolved["collocation_rate"],
    )
    bitext, truth = evalkit.generate_synthetic_bitext(spec, resolved["seed"])
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    vs, vt = bitext.vocab_source, bitext.vocab_target
    with open(out / "source.txt", "w", encoding="utf-8") as sf:
        for seg in bitext.segments:
            sf.write(" ".join(vs.surface_of(t) for t in seg.source_ids) + "\n")
    with open(out / "target.txt", "w", encoding="utf-8") as tf:
        for seg in bitext.segments:
            tf.write(" ".join(vt.surface_of(t) for t in seg.target_ids) + "\n")
    (out / "function_words.source.txt").write_text(
        "".join(w + "\n" for w in truth.function_words_source), encoding="utf-8"
    )
    (out / "function_words.target.txt").write_text(
        "".join(w + "\n" for w in truth.function_words_target), encoding="utf-8"
    )
    evalkit.save_truth(truth, out / "truth.json")
    print(f"synthetic bitext written to {out}", file=sys.stderr)


def cmd_induce(args: argparse.Namespace, config: dict) -> None:
    resolved = _resolve(
        args,
        config,
        {
            **TOKENIZER_DEFAULTS,
            "function_words_source": None,
            "function_words_target": None,
            "cutoff": 1.0,
            "initial_score_floor": INITIAL_SCORE_FLOOR,
            "max_iters": 20,
            "max_segment_len": 100,
            "workers": 1,
            "seed": 0,
            **SEARCH_DEFAULTS,
        },
    )
    resolved.update(
        {"source": args.source, "target": args.target, "model": args.model, "trace": args.trace}
    )
    _echo_config("induce", resolved)
    options = _tokenizer_options(resolved)
    fw_src = (
        load_function_words(resolved["function_words_source"], options)
        if resolved["function_words_source"]
        else frozenset()
    )
    fw_tgt = (
        load_function_words(resolved["function_words_target"], options)
        if resolved["function_words_target"]
        else frozenset()
    )
    bitext = load_bitext(args.source, args.target, options, fw_src, fw_tgt)
    induce_config = InduceConfig(
        lowercase=resolved["lowercase"],
        split_hyphens=resolved["split_hyphens"],
        function_words_source_path=resolved["function_words_source"],
        function_words_target_path=resolved["function_words_target"],
        cutoff=resolved["cutoff"],
        initial_score_floor=resolved["initial_score_floor"],
        max_iters=resolved["max_iters"],
        max_segment_len=resolved["max_segment_len"],
        seed=resolved["seed"],
        workers=resolved["workers"],
        search=_search_config(resolved),
    )
    trace_fh = None
    trace_fn = None
    if args.trace:
        trace_fh = open(args.trace, "w", encoding="utf-8")

        def trace_fn(label, iteration, tr, fr, ll):
            trace_fh.write(f"{label}\t{iteration}\t{tr!r}\t{fr!r}\t{ll!r}\n")

    try:
        model = induce(bitext, induce_config, trace=trace_fn)
    finally:
        if trace_fh:
            trace_fh.close()
    save_model(model, args.model)
    print(
        f"model: {args.model} ({len(model.entries)} link types, "
        f"{model.iterations_run} iterations)",
        file=sys.stderr,
    )


def cmd_lexicon(args: argparse.Namespace, config: dict) -> None:
    resolved = _resolve(args, config, {"threshold": None, "log_threshold": None})
    resolved.update({"model": args.model, "out": args.out})
    _echo_config("lexicon", resolved)
    model = load_model(args.model)
    lex = export_lexicon(
        model, threshold=resolved["threshold"], log_threshold=resolved["log_threshold"]
    )
    with _out_stream(args.out) as fh:
        write_lexicon_tsv(lex, fh)
    if args.out and args.out != "-":
        print(f"lexicon: {args.out} ({len(lex.entries)} entries)", file=sys.stderr)


def cmd_link(args: argparse.Namespace, config: dict) -> None:
    resolved = _resolve(args, config, {"workers": 1})
    resolved.update(
        {"model": args.model, "source": args.source, "target": args.target, "out": args.out}
    )
    _echo_config("link", resolved)
    model = load_model(args.model)
    bitext = _bitext_for_model(model, args.source, args.target)
    table = score_table_for(model, bitext)
    _, links = link_bitext(
        bitext,
        table,
        max_segment_len=model.config["max_segment_len"],
        workers=resolved["workers"],
        collect_links=True,
    )
    with _out_stream(args.out) as fh:
        write_links_tsv(links, bitext, fh)
    if args.out and args.out != "-":
        print(f"links: {args.out} ({len(links)} token links)", file=sys.stderr)


def cmd_eval_sample(args: argparse.Namespace, config: dict) -> None:
    resolved = _resolve(
        args,
        config,
        {
            "threshold": None,
            "log_threshold": None,
            "sets": 5,
            "size": 100,
            "seed": 0,
            "max_contexts": 5,
        },
    )
    resolved.update(
        {"model": args.model, "source": args.source, "target": args.target, "out": args.out}
    )
    _echo_config("eval sample", resolved)
    model = load_model(args.model)
    bitext = _bitext_for_model(model, args.source, args.target)
    lex = export_lexicon(
        model, threshold=resolved["threshold"], log_threshold=resolved["log_threshold"]
    )
    bundle = evalkit.build_bundle(
        lex,
        bitext,
        sets=resolved["sets"],
        size=resolved["size"],
        seed=resolved["seed"],
        max_contexts=resolved["max_contexts"],
        recall_level=recall(lex, bitext),
    )
    evalkit.save_bundle(bundle, args.out)
    print(
        f"bundle: {args.out} (id {bundle['bundle_id']}, "
        f"{resolved['sets']}x{resolved['size']} items)",
        file=sys.stderr,
    )


def cmd_eval_score(args: argparse.Namespace, config: dict) -> None:
    resolved = {"bundle": args.bundle, "judgments": args.judgments, "out": args.out}
    _echo_config("eval score", resolved)
    bundle = evalkit.load_bundle(args.bundle)
    judgments = evalkit.load_judgments(args.judgments)
    report = evalkit.score_judgments(bundle, judgments)
    text = json.dumps(report, sort_keys=True, indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")


def cmd_eval_curve(args: argparse.Namespace, config: dict) -> None:
    resolved = _resolve(args, config, {"points": 10})
    resolved.update({"model": args.model, "truth": args.truth, "out": args.out})
    _echo_config("eval curve", resolved)
    model = load_model(args.model)
    truth = evalkit.load_truth(args.truth)
    curve = evalkit.precision_recall_curve(model, truth, points=resolved["points"])
    with _out_stream(args.out) as fh:
        evalkit.write_curve_csv(curve, fh)
    if args.out and args.out != "-":
        print(f"curve: {args.out} ({len(curve)} points)", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitlex",
        description="Induce word-to-word translation lexicons from aligned bitexts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON config file (flat object); explicit flags win")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("synth", help="generate a synthetic bitext with known ground truth")
    p.add_argument("--entries", type=int, help="one-to-one lexicon size (default 500)")
    p.add_argument("--segments", type=int, help="aligned segment count (default 5000)")
    p.add_argument("--min-len", type=int, dest="min_len", help="minimum segment length (default 5)")
    p.add_argument("--max-len", type=int, dest="max_len", help="maximum segment length (default 15)")
    p.add_argument(
        "--zipf-exponent", type=float, dest="zipf_exponent", help="rank-frequency exponent (default 1.0)"
    )
    p.add_argument("--noise", type=float, help="target word replacement rate (default 0)")
    p.add_argument(
        "--function-fraction",
        type=float,
        dest="function_fraction",
        help="fraction of the vocabulary treated as function words (default 0.1)",
    )
    p.add_argument(
        "--collocations",
        type=int,
        help="number of injected source collocations (default 0)",
    )
    p.add_argument(
        "--collocation-rate",
        type=float,
        dest="collocation_rate",
        help="chance a partner accompanies its anchor (default 0.5)",
    )
    p.add_argument("--seed", type=int, help="generator seed (default 0)")
    p.add_argument("--out-dir", required=True, dest="out_dir", help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("induce", help="induce a translation model from a bitext")
    p.add_argument("--source", required=True, help="source-side text, one segment per line")
    p.add_argument("--target", required=True, help="target-side text, aligned line by line")
    p.add_argument(
        "--function-words-source",
        dest="function_words_source",
        help="source-side function word list (one surface per line)",
    )
    p.add_argument(
        "--function-words-target",
        dest="function_words_target",
        help="target-side function word list",
    )
    p.add_argument("--cutoff", type=float, help="likelihood-ratio cutoff (default 1.0)")
    p.add_argument(
        "--initial-score-floor",
        type=float,
        dest="initial_score_floor",
        help="significance floor for first-pass association scores (default 10.83)",
    )
    p.add_argument("--max-iters", type=int, dest="max_iters", help="iteration cap (default 20)")
    p.add_argument(
        "--max-segment-len",
        type=int,
        dest="max_segment_len",
        help="skip segments longer than this (default 100)",
    )
    p.add_argument("--workers", type=int, help="linking thread partitions (default 1)")
    p.add_argument("--seed", type=int, help="recorded in the model (default 0)")
    p.add_argument(
        "--lowercase",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="lowercase tokens (default on)",
    )
    p.add_argument(
        "--split-hyphens",
        action=argparse.BooleanOptionalAction,
        default=None,
        dest="split_hyphens",
        help="split hyphenated words (default on)",
    )
    p.add_argument("--trace", help="write estimator trace lines to this file")
    p.add_argument("--model", required=True, help="output model file (JSON)")
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("lexicon", help="export a thresholded lexicon as TSV")
    p.add_argument("--model", required=True)
    p.add_argument("--threshold", type=float, help="likelihood-ratio threshold")
    p.add_argument(
        "--log-threshold",
        type=float,
        dest="log_threshold",
        help="threshold in log units (for ratios too large for a float)",
    )
    p.add_argument("--out", default="-", help="output TSV path, '-' for stdout")
    p.set_defaults(func=cmd_lexicon)

    p = sub.add_parser("link", help="link tokens of a bitext with an induced model")
    p.add_argument("--model", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--workers", type=int, help="linking thread partitions (default 1)")
    p.add_argument("--out", default="-", help="output TSV path, '-' for stdout")
    p.set_defaults(func=cmd_link)

    pe = sub.add_parser("eval", help="evaluation workflows")
    esub = pe.add_subparsers(dest="eval_command", required=True, metavar="subcommand")

    p = esub.add_parser("sample", help="sample link types into an adjudication bundle")
    p.add_argument("--model", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--threshold", type=float)
    p.add_argument("--log-threshold", type=float, dest="log_threshold")
    p.add_argument("--sets", type=int, help="number of samples (default 5)")
    p.add_argument("--size", type=int, help="link types per sample (default 100)")
    p.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p.add_argument(
        "--max-contexts",
        type=int,
        dest="max_contexts",
        help="concordances per item (default 5)",
    )
    p.add_argument("--out", required=True, help="output bundle JSON")
    p.set_defaults(func=cmd_eval_sample)

    p = esub.add_parser("score", help="score a judged bundle (precision with 95% CI)")
    p.add_argument("--bundle", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--out", help="also write the report JSON here")
    p.set_defaults(func=cmd_eval_score)

    p = esub.add_parser("curve", help="precision/recall curve against ground truth")
    p.add_argument("--model", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--points", type=int, help="threshold grid size (default 10)")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    p.set_defaults(func=cmd_eval_curve)

    return parser


def _fail(category: str, exc: Exception) -> int:
    print(f"error[{category}]: {exc}", file=sys.stderr)
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _load_config(args.config)
        args.func(args, config)
    except ConfigError as exc:
        return _fail("config", exc)
    except InputError as exc:
        return _fail("input", exc)
    except SchemaError as exc:
        return _fail("schema", exc)
    except (EstimationError, InductionError) as exc:
        return _fail("model", exc)
    except OSError as exc:
        return _fail("io", exc)
    except ValueError as exc:
        return _fail("usage", exc)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
