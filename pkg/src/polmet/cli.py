"""Command-line entry point binding the pipeline stages.

Subcommands: train, eval, extract, score, study-usage, study-engagement,
study-wordlevel, report.  Every run writes a ``manifest.json`` into the
output directory recording the subcommand, its options, and SHA-256
hashes of all inputs, so identical configurations are verifiably
identical runs.  Exit codes: 0 success, 1 missing/invalid input,
2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import polmet
from polmet import conllu, data, engagement, net, pairs, scoring, studies
from polmet.embeddings import load_embeddings


class CliError(Exception):
    """A structured user-facing error; message printed to stderr, exit 1."""


def _require(path: str | None, what: str) -> Path:
    if path is None:
        raise CliError(f"missing required flag for {what}")
    p = Path(path)
    if not p.is_file():
        raise CliError(f"missing input: {p} ({what})")
    return p


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


_SKIP_MANIFEST_KEYS = ("func", "subcommand")


def _write_manifest(out: Path, args, inputs: dict[str, Path],
                    outputs: list[str]) -> None:
    options = {key: value for key, value in sorted(vars(args).items())
               if key not in _SKIP_MANIFEST_KEYS}
    payload = {
        "tool": {"name": "polmet", "version": polmet.__version__},
        "command": args.subcommand,
        "options": options,
        "inputs": {name: {"path": str(path), "sha256": _sha256(path)}
                   for name, path in sorted(inputs.items())},
        "outputs": sorted(outputs),
    }
    with open(out / "manifest.json", "w", encoding="utf-8",
              newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _embeddings_ref(path: Path, store) -> dict:
    return {"path": str(path), "dim": store.dim, "vocab_size": len(store),
            "sha256": _sha256(path)}


def _resolve_embeddings(args, saved_models: list[tuple[Path, net.SavedModel]]
                        ) -> tuple[Path, object]:
    """Locate the embedding table: an explicit flag wins, otherwise the
    reference stored in the model file(s)."""
    if getattr(args, "embeddings", None):
        path = _require(args.embeddings, "embedding table")
        return path, load_embeddings(path)

    refs = [(model_path, m.embeddings_ref) for model_path, m in saved_models
            if m.embeddings_ref]
    if not refs:
        raise CliError("no --embeddings flag and the model file(s) carry "
                       "no embedding reference")
    hashes = {ref["sha256"] for _, ref in refs if "sha256" in ref}
    if len(hashes) > 1:
        raise CliError("model files reference different embedding tables; "
                       "pass --embeddings explicitly")
    model_path, ref = refs[0]
    candidates = [Path(ref["path"]),
                  model_path.parent / ref["path"],
                  Path.cwd() / ref["path"]]
    for candidate in candidates:
        if candidate.is_file():
            if "sha256" in ref and _sha256(candidate) != ref["sha256"]:
                continue
            store = load_embeddings(candidate,
                                    expected_dim=ref.get("dim"))
            return candidate, store
    raise CliError(f"embedding table {ref['path']!r} referenced by "
                   f"{model_path} not found; pass --embeddings")


# ---------------------------------------------------------------------------
# Subcommands


_CONSTRUCTION_FILTERS = {
    "verb": "verb", "adj": "adj-noun",
    "adj-noun": "adj-noun", "verb-subj": "verb-subj", "verb-obj": "verb-obj",
}


def _cmd_train(args) -> int:
    train_path = _require(args.train, "training pairs")
    dev_path = _require(args.dev, "development pairs")
    emb_path = _require(args.embeddings, "embedding table")

    family = "adj" if args.construction in ("adj", "adj-noun") else "verb"
    pair_filter = _CONSTRUCTION_FILTERS[args.construction]
    train_set = data.load_pair_dataset(train_path, pair_filter)
    dev_set = data.load_pair_dataset(dev_path, pair_filter)
    if not train_set or not dev_set:
        raise CliError(f"no {pair_filter!r} pairs in the given datasets")
    store = load_embeddings(emb_path)

    dev_metric = args.dev_metric or ("f1" if family == "adj" else "accuracy")
    config = net.TrainConfig(
        margin=args.margin, max_epochs=args.epochs, patience=args.patience,
        batch_size=args.batch_size, seed=args.seed, dev_metric=dev_metric)
    trained = net.train(train_set, dev_set, store, config)

    out = _out_dir(args)
    model_name = f"model_{family}.json"
    log_name = f"training_log_{family}.jsonl"
    net.save_model(out / model_name, trained.params,
                   threshold_default=args.threshold,
                   construction=family,
                   embeddings_ref=_embeddings_ref(emb_path, store))
    net.write_training_log(out / log_name, trained.log)
    _write_manifest(out, args,
                    {"train": train_path, "dev": dev_path,
                     "embeddings": emb_path},
                    [model_name, log_name])
    print(f"trained {family} model: best epoch {trained.best_epoch}, "
          f"dev {trained.dev_metric_name} {trained.best_dev_metric:.4f}")
    return 0


def _cmd_eval(args) -> int:
    model_path = _require(args.model, "model file")
    test_path = _require(args.test, "test pairs")
    saved = net.load_model(model_path)
    emb_path, store = _resolve_embeddings(args, [(model_path, saved)])

    pair_filter = (_CONSTRUCTION_FILTERS[args.construction]
                   if args.construction else
                   ("adj-noun" if saved.construction == "adj"
                    else "verb" if saved.construction == "verb" else None))
    test_set = data.load_pair_dataset(test_path, pair_filter)
    if not test_set:
        raise CliError("no evaluation pairs after construction filtering")
    metrics = net.evaluate(saved.params, test_set, store,
                           threshold=args.threshold)

    out = _out_dir(args)
    _write_json(out / "metrics.json", {
        "threshold": args.threshold,
        "n_pairs": len(test_set),
        "accuracy": metrics.accuracy, "precision": metrics.precision,
        "recall": metrics.recall, "f1": metrics.f1,
        "tp": metrics.tp, "fp": metrics.fp,
        "fn": metrics.fn, "tn": metrics.tn,
    })
    _write_manifest(out, args,
                    {"model": model_path, "test": test_path,
                     "embeddings": emb_path},
                    ["metrics.json"])
    print(f"accuracy {metrics.accuracy:.4f}  f1 {metrics.f1:.4f} "
          f"on {len(test_set)} pairs")
    return 0


def _cmd_extract(args) -> int:
    parses_path = _require(args.parses, "CoNLL-U parses")
    sentences = conllu.parse_conllu(parses_path)
    extracted = pairs.extract_corpus_pairs(
        sentences, include_pronouns=args.include_pronouns)
    out = _out_dir(args)
    pairs.write_pairs_tsv(out / "pairs.tsv", extracted)
    _write_manifest(out, args, {"parses": parses_path}, ["pairs.tsv"])
    print(f"extracted {len(extracted)} candidate pairs "
          f"from {len(sentences)} sentences")
    return 0


def _cmd_score(args) -> int:
    adj_path = _require(args.model_adj, "adjective-noun model")
    verb_path = _require(args.model_verb, "verb model")
    parses_path = _require(args.parses, "CoNLL-U parses")
    corpus_path = _require(args.corpus, "post corpus")

    adj_saved = net.load_model(adj_path)
    verb_saved = net.load_model(verb_path)
    emb_path, store = _resolve_embeddings(
        args, [(adj_path, adj_saved), (verb_path, verb_saved)])

    posts = data.load_posts(corpus_path)
    sentences = conllu.parse_conllu(parses_path)
    by_post = conllu.sentences_by_post(sentences)
    scored = scoring.score_corpus(
        posts, by_post, adj_saved.params, verb_saved.params, store,
        threshold=args.threshold, jobs=args.jobs)

    out = _out_dir(args)
    scoring.write_scored_corpus(out / "scored.jsonl", scored)
    _write_json(out / "summary.json", scoring.corpus_summary(scored))
    _write_manifest(out, args,
                    {"model_adj": adj_path, "model_verb": verb_path,
                     "parses": parses_path, "corpus": corpus_path,
                     "embeddings": emb_path},
                    ["scored.jsonl", "summary.json"])
    summary = scoring.corpus_summary(scored)
    print(f"scored {summary['n_posts']} posts: "
          f"{summary['total_metaphorical_pairs']} metaphorical pairs, "
          f"nonzero share {summary['nonzero_share']:.3f}")
    return 0


def _load_study_inputs(args):
    scored_path = _require(args.scored, "scored corpus")
    corpus_path = _require(args.corpus, "post corpus")
    politicians_path = _require(args.politicians, "politician table")
    config = (studies.config_from_json(_require(args.config, "study config"))
              if args.config else studies.DEFAULT_CONFIG)
    scored = scoring.read_scored_corpus(scored_path)
    posts, politicians = data.load_post_corpus(corpus_path, politicians_path)
    inputs = {"scored": scored_path, "corpus": corpus_path,
              "politicians": politicians_path}
    if args.config:
        inputs["config"] = Path(args.config)
    return scored, posts, politicians, config, inputs


def _cmd_study_usage(args) -> int:
    scored, posts, politicians, config, inputs = _load_study_inputs(args)
    report = studies.run_usage_study(scored, posts, politicians, config)
    out = _out_dir(args)
    written = studies.emit_report(out, usage=report)
    _write_manifest(out, args, inputs, [p.name for p in written])
    print(f"usage study over {report.n_posts_in_window} posts "
          f"({report.n_out_of_window} outside the window)")
    return 0


def _cmd_study_engagement(args) -> int:
    scored, posts, politicians, config, inputs = _load_study_inputs(args)
    seed = args.seed if args.seed is not None else config.sample_seed
    quota = (args.per_politician if args.per_politician is not None
             else config.per_politician)
    sample = studies.balanced_sample(scored, posts, per_politician=quota,
                                     seed=seed)
    if not sample:
        raise CliError(f"no politician has {quota} scored posts; "
                       "lower --per-politician")
    options = studies.EngagementOptions(
        pre_election_only=args.pre_election_only,
        post_election_control=args.post_election_control,
        party_interaction=args.party_interaction,
        election_interaction=args.election_interaction,
        pre_election_cutoff=args.pre_election_cutoff)
    report = studies.run_post_engagement_study(sample, posts, politicians,
                                               options, config)
    out = _out_dir(args)
    written = studies.emit_report(out, engagement=report)
    _write_manifest(out, args, inputs, [p.name for p in written])
    print(f"engagement study: {report.n_sample} sampled posts, "
          f"{sum(1 for f in report.fits.values() if f.result)} metric fits")
    return 0


def _cmd_study_wordlevel(args) -> int:
    scored, posts, politicians, config, inputs = _load_study_inputs(args)
    inventory, instances = studies.select_lemmas(
        scored, posts, politicians, min_metaphorical=args.min_metaphorical,
        min_literal=args.min_literal, config=config)
    report = studies.run_word_level_study(
        instances, group_by=args.group_by, top_n=args.top_n, config=config)
    out = _out_dir(args)
    written = studies.emit_report(out, wordlevel=report)
    _write_json(out / "wordlevel_inventory.json", inventory)
    _write_manifest(out, args, inputs,
                    [p.name for p in written] + ["wordlevel_inventory.json"])
    n_lemmas = sum(len(v) for v in inventory.values())
    print(f"word-level study: {n_lemmas} qualifying lemmas, "
          f"{len(instances)} instances")
    return 0


def _cmd_report(args) -> int:
    scored_path = _require(args.scored, "scored corpus")
    scored = scoring.read_scored_corpus(scored_path)
    summary = scoring.corpus_summary(scored)
    inputs = {"scored": scored_path}
    if args.corpus and args.politicians:
        corpus_path = _require(args.corpus, "post corpus")
        politicians_path = _require(args.politicians, "politician table")
        posts, politicians = data.load_post_corpus(corpus_path,
                                                   politicians_path)
        summary["politicians"] = data.politician_tallies(politicians)
        eligible = sum(engagement.reactions_eligible(p) for p in posts)
        summary["n_reaction_eligible_posts"] = int(eligible)
        inputs.update({"corpus": corpus_path,
                       "politicians": politicians_path})
    out = _out_dir(args)
    written = studies.emit_report(out, summary=summary)
    _write_manifest(out, args, inputs, [p.name for p in written])
    print(f"corpus summary over {summary['n_posts']} scored posts")
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polmet",
        description="Metaphor detection and engagement studies "
                    "over political social-media posts.")
    parser.add_argument("--version", action="version",
                        version=f"polmet {polmet.__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    default_out = os.environ.get("POLMET_OUT", ".")

    def add_out(p):
        p.add_argument("--out", default=default_out,
                       help="output directory (default: $POLMET_OUT or .)")

    p = sub.add_parser("train", help="train a word-pair metaphor classifier")
    p.add_argument("--construction", required=True,
                   choices=sorted(_CONSTRUCTION_FILTERS))
    p.add_argument("--train", required=True, help="training pair TSV")
    p.add_argument("--dev", required=True, help="development pair TSV")
    p.add_argument("--embeddings", required=True, help="embedding text file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--margin", type=float, default=0.4)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--patience", type=int, default=7)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--threshold", type=float, default=0.7,
                   help="default scoring threshold stored in the model file")
    p.add_argument("--dev-metric", choices=("accuracy", "f1"), default=None,
                   help="model-selection metric (default: accuracy for "
                        "verb models, f1 for adjective models)")
    add_out(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on labeled pairs")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True, help="test pair TSV")
    p.add_argument("--embeddings", default=None,
                   help="embedding table (default: the model's reference)")
    p.add_argument("--construction", default=None,
                   choices=sorted(_CONSTRUCTION_FILTERS))
    p.add_argument("--threshold", type=float, default=0.5,
                   help="decision threshold for classification metrics")
    add_out(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("extract",
                       help="extract candidate pairs from CoNLL-U parses")
    p.add_argument("--parses", required=True)
    p.add_argument("--include-pronouns", action="store_true")
    add_out(p)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("score", help="score a parsed corpus for metaphor")
    p.add_argument("--model-adj", required=True)
    p.add_argument("--model-verb", required=True)
    p.add_argument("--parses", required=True)
    p.add_argument("--corpus", required=True, help="post CSV")
    p.add_argument("--embeddings", default=None,
                   help="embedding table (default: the models' reference)")
    p.add_argument("--threshold", type=float, default=0.7)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    add_out(p)
    p.set_defaults(func=_cmd_score)

    def add_study_inputs(p):
        p.add_argument("--scored", required=True, help="scored corpus JSONL")
        p.add_argument("--corpus", required=True, help="post CSV")
        p.add_argument("--politicians", required=True,
                       help="politician CSV")
        p.add_argument("--config", default=None,
                       help="study configuration JSON")
        add_out(p)

    p = sub.add_parser("study-usage",
                       help="metaphor usage by gender, party, and quarter")
    add_study_inputs(p)
    p.set_defaults(func=_cmd_study_usage)

    p = sub.add_parser("study-engagement",
                       help="post-level engagement mixed models")
    add_study_inputs(p)
    p.add_argument("--seed", type=int, default=None,
                   help="sampling seed (default: from config)")
    p.add_argument("--per-politician", type=int, default=None,
                   help="posts sampled per politician (default: from config)")
    p.add_argument("--pre-election-only", action="store_true")
    p.add_argument("--post-election-control", action="store_true")
    p.add_argument("--party-interaction", action="store_true")
    p.add_argument("--election-interaction", action="store_true")
    p.add_argument("--pre-election-cutoff",
                   choices=("election-day", "quarter-start"),
                   default="election-day")
    p.set_defaults(func=_cmd_study_engagement)

    p = sub.add_parser("study-wordlevel",
                       help="word-level engagement mixed models")
    add_study_inputs(p)
    p.add_argument("--group-by", choices=("lemma", "politician"),
                   default="lemma")
    p.add_argument("--min-metaphorical", type=int, default=10)
    p.add_argument("--min-literal", type=int, default=10)
    p.add_argument("--top-n", type=int, default=10)
    p.set_defaults(func=_cmd_study_wordlevel)

    p = sub.add_parser("report", help="summarize a scored corpus")
    p.add_argument("--scored", required=True)
    p.add_argument("--corpus", default=None)
    p.add_argument("--politicians", default=None)
    add_out(p)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (data.DatasetFormatError, conllu.ConlluFormatError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
