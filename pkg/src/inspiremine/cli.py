"""Command-line pipeline driver.

One executable with subcommands covering the whole flow: ingest NDJSON
dumps, run heuristic weak labeling, filter posts, serve the annotation
API, aggregate annotations, train/evaluate/apply the classifier, and run
the corpus analyses into a report directory.

Exit codes: 0 success, 1 usage error, 2 data error. Every run appends a
JSON line (command, config hash, seed, outputs) to the run log. Settings
come from defaults, then an optional key=value config file, then flags.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys

from . import __version__, analysis, classifier, preprocess, service, weak_label
from .annotate import (
    AnnotationStore,
    UndefinedAgreementError,
    aggregate_labels,
    agreement_counts,
    effect_emotion_tables,
    fleiss_kappa,
    inspiring_rating_matrix,
    write_agreement_csv,
    write_effect_emotion_csv,
)
from .corpus import (
    CorpusStore,
    build_balanced_split,
    extract_hashtags,
    ingest_ndjson,
    read_split_csv,
    write_split_csv,
)

__all__ = ["run", "entrypoint"]

LABEL_INSPIRING = "inspiring"
LABEL_OTHER = "non_inspiring"


class _CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliUsageError(message)


def _coerce(value: str):
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    for kind in (int, float):
        try:
            return kind(value)
        except ValueError:
            continue
    return value


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_number}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = _coerce(value.strip())
    return values


def _config_hash(args: argparse.Namespace) -> str:
    payload = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("handler",)
    }
    canonical = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _append_run_log(args: argparse.Namespace, outputs: list[str]) -> None:
    entry = {
        "command": args.command,
        "config_hash": _config_hash(args),
        "seed": getattr(args, "seed", None),
        "outputs": [os.fspath(o) for o in outputs],
    }
    with open(args.run_log, "a", encoding="utf-8") as handle:
        handle.write(json.dumps(entry, sort_keys=True) + "\n")


def _common_flags(parser: argparse.ArgumentParser, *, seed: bool = False) -> None:
    parser.add_argument("--config", help="key=value settings file; flags win")
    parser.add_argument(
        "--run-log",
        default="inspiremine_runs.ndjson",
        help="NDJSON file receiving one line per run",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker threads (recorded; processing is single-threaded for reproducibility)",
    )
    if seed:
        parser.add_argument("--seed", type=int, default=0)


def read_labels_csv(path) -> dict[str, str]:
    """CSV whose first two columns are post_id,label (extras ignored)."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or header[:2] != ["post_id", "label"]:
            raise ValueError(f"{path}: expected a header starting post_id,label")
        labels = {}
        for row in reader:
            if not row:
                continue
            labels[row[0]] = row[1]
    return labels


def _classifier_text(post) -> str:
    return preprocess.clean_text(post.full_text())


def _labeled_texts(store: CorpusStore, labels: dict[str, str], ids) -> tuple[list[str], list[str]]:
    texts, gold = [], []
    for post_id in ids:
        post = store.get(post_id)
        if post is None:
            raise ValueError(f"post {post_id!r} not in corpus")
        texts.append(_classifier_text(post))
        gold.append(labels[post_id])
    return texts, gold


# ---------------------------------------------------------------- ingest


def _cmd_ingest(args) -> list[str]:
    store = CorpusStore(args.corpus)
    try:
        field_map = None
        if args.field_map:
            with open(args.field_map, encoding="utf-8") as handle:
                field_map = json.load(handle)
        if args.input == "-":
            added, skipped = ingest_ndjson(
                store, sys.stdin, field_map=field_map, strict=args.strict,
                source=args.source, origin="stdin",
            )
        else:
            with open(args.input, encoding="utf-8") as handle:
                added, skipped = ingest_ndjson(
                    store, handle, field_map=field_map, strict=args.strict,
                    source=args.source, origin=os.path.basename(args.input),
                )
        print(f"ingested {added} posts, skipped {skipped} lines -> {args.corpus}")
    finally:
        store.close()
    return [args.corpus]


# ------------------------------------------------------------ weak-label


def _cmd_weak_label(args) -> list[str]:
    ruleset = (
        weak_label.load_ruleset(args.rules) if args.rules else weak_label.default_ruleset()
    )
    store = CorpusStore(args.corpus)
    try:
        reports = [weak_label.match_rules(post, ruleset) for post in store]
        candidates, controls = weak_label.select_candidates(
            store, ruleset, args.control_size, args.seed
        )
    finally:
        store.close()
    outputs = []
    if args.out_report:
        weak_label.write_rule_report_csv(reports, ruleset, args.out_report)
        outputs.append(args.out_report)
    with open(args.out_candidates, "w", encoding="utf-8") as handle:
        handle.writelines(c + "\n" for c in candidates)
    outputs.append(args.out_candidates)
    with open(args.out_controls, "w", encoding="utf-8") as handle:
        handle.writelines(c + "\n" for c in controls)
    outputs.append(args.out_controls)
    print(f"{len(candidates)} candidates, {len(controls)} controls")
    return outputs


# ------------------------------------------------------------ preprocess


def _cmd_preprocess(args) -> list[str]:
    profanity_terms = None
    if args.profanity:
        with open(args.profanity, encoding="utf-8") as handle:
            profanity_terms = frozenset(
                line.strip() for line in handle if line.strip()
            )
    store = CorpusStore(args.corpus)
    kept = 0
    rejected: dict[str, int] = {}
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["post_id", "keep", "reason"])
            for post in store:
                result = preprocess.preprocess_post(
                    post,
                    language=args.language,
                    max_language_score=args.max_lang_score,
                    profanity_terms=profanity_terms,
                    minimum_words=args.min_words,
                    maximum_words=args.max_words,
                )
                writer.writerow(
                    [result.post_id, "true" if result.keep else "false", result.reason]
                )
                if result.keep:
                    kept += 1
                else:
                    rejected[result.reason] = rejected.get(result.reason, 0) + 1
    finally:
        store.close()
    summary = ", ".join(f"{k}={v}" for k, v in sorted(rejected.items()))
    print(f"kept {kept}, rejected {sum(rejected.values())} ({summary}) -> {args.out}")
    return [args.out]


# ----------------------------------------------------------------- serve


def _cmd_serve(args) -> list[str]:
    with open(args.tokens, encoding="utf-8") as handle:
        tokens = json.load(handle)
    post_ids = None
    if args.posts:
        with open(args.posts, encoding="utf-8") as handle:
            post_ids = [line.strip() for line in handle if line.strip()]
    config = service.ServiceConfig(
        corpus_path=args.corpus,
        store_path=args.store,
        tokens=tokens,
        guidelines_path=args.guidelines,
        host=args.host,
        port=args.port,
        post_ids=post_ids,
    )
    _append_run_log(args, [args.store])
    service.serve(config)
    return [args.store]


# ------------------------------------------------------------- aggregate


def _cmd_aggregate(args) -> list[str]:
    if not os.path.exists(args.store):
        raise FileNotFoundError(f"annotation store not found: {args.store}")
    store = AnnotationStore(args.store)
    records = store.records()
    labels = aggregate_labels(records)
    os.makedirs(args.out, exist_ok=True)
    outputs = []

    labels_path = os.path.join(args.out, "aggregate_labels.csv")
    with open(labels_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["post_id", "label", "agreement", "num_annotations"])
        for label in labels:
            writer.writerow(
                [
                    label.post_id,
                    LABEL_INSPIRING if label.inspiring else LABEL_OTHER,
                    label.agreement,
                    label.num_annotations,
                ]
            )
    outputs.append(labels_path)

    agreement_path = os.path.join(args.out, "agreement.csv")
    write_agreement_csv(labels, agreement_path)
    outputs.append(agreement_path)

    influence_table, emotion_table = effect_emotion_tables(records)
    effects_path = os.path.join(args.out, "effects_emotions.csv")
    write_effect_emotion_csv(influence_table, emotion_table, effects_path)
    outputs.append(effects_path)

    matrix, post_ids = inspiring_rating_matrix(records)
    kappa_path = os.path.join(args.out, "kappa.json")
    kappa_info: dict = {"num_items": len(post_ids), "raters": 3}
    if len(post_ids) == 0:
        kappa_info["kappa"] = None
        kappa_info["note"] = "no fully-annotated posts"
    else:
        try:
            kappa_info["kappa"] = fleiss_kappa(matrix)
        except UndefinedAgreementError as exc:
            kappa_info["kappa"] = None
            kappa_info["note"] = str(exc)
    with open(kappa_path, "w", encoding="utf-8") as handle:
        json.dump(kappa_info, handle, indent=2, sort_keys=True)
        handle.write("\n")
    outputs.append(kappa_path)

    counts = agreement_counts(labels)
    print(
        f"{len(labels)} posts aggregated: {counts['non_inspiring']} non-inspiring, "
        f"{counts['agreement_1']}/{counts['agreement_2']}/{counts['agreement_3']} "
        f"at agreement 1/2/3; kappa={kappa_info['kappa']} over {len(post_ids)} posts"
    )
    return outputs


# ----------------------------------------------------------------- train


def _train_config_from_args(args) -> classifier.TrainConfig:
    return classifier.TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        word_ngrams=args.word_ngrams,
        min_count=args.min_count,
        dim=args.dim,
        seed=args.seed,
        bucket_count=args.buckets,
        holdout_fraction=args.holdout_fraction,
        patience=args.patience,
    )


def _cmd_train(args) -> list[str]:
    labels = read_labels_csv(args.labels)
    outputs = []
    if args.split:
        with open(args.split, encoding="utf-8", newline="") as handle:
            split = read_split_csv(handle)
        train_ids = [post_id for post_id, _ in split.train]
    elif args.test_fraction is not None:
        split = build_balanced_split(sorted(labels.items()), args.test_fraction, args.seed)
        split_path = args.split_out or (os.path.splitext(args.out)[0] + "_split.csv")
        with open(split_path, "w", encoding="utf-8", newline="") as handle:
            write_split_csv(split, handle)
        outputs.append(split_path)
        train_ids = [post_id for post_id, _ in split.train]
        print(f"balanced split: {len(split.train)} train / {len(split.test)} test -> {split_path}")
    else:
        train_ids = sorted(labels)
    store = CorpusStore(args.corpus)
    try:
        texts, gold = _labeled_texts(store, labels, train_ids)
    finally:
        store.close()
    model = classifier.train(texts, gold, _train_config_from_args(args))
    classifier.save_model(model, args.out)
    outputs.append(args.out)
    print(f"trained on {len(texts)} posts ({len(model.classes)} classes) -> {args.out}")
    return outputs


# ------------------------------------------------------------------ eval


def _cmd_eval(args) -> list[str]:
    labels = read_labels_csv(args.labels)
    if args.split:
        with open(args.split, encoding="utf-8", newline="") as handle:
            ids = [post_id for post_id, _ in read_split_csv(handle).test]
    else:
        ids = sorted(labels)
    outputs = []
    if args.predictions:
        gold = [labels[i] for i in ids]
        result = classifier.import_external_predictions(
            args.predictions, ids, gold,
            positive_label=args.positive_label, f1_average=args.f1_average,
        )
    else:
        if not args.model:
            raise ValueError("eval needs --model or --predictions")
        model = classifier.load_model(args.model)
        store = CorpusStore(args.corpus)
        try:
            texts, gold = _labeled_texts(store, labels, ids)
        finally:
            store.close()
        result = classifier.evaluate(
            model, texts, gold,
            positive_label=args.positive_label, f1_average=args.f1_average,
        )
        if args.predictions_out:
            predictions = classifier.predict(model, texts)
            classifier.write_predictions_csv(
                (
                    (post_id, p.label, p.probability)
                    for post_id, p in zip(ids, predictions)
                ),
                args.predictions_out,
            )
            outputs.append(args.predictions_out)
    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(result.to_json_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")
    outputs.append(args.out)
    print(
        f"accuracy={result.accuracy:.4f} f1={result.f1:.4f} "
        f"confusion={result.confusion} -> {args.out}"
    )
    return outputs


# ---------------------------------------------------------------- select


def _cmd_select(args) -> list[str]:
    model = classifier.load_model(args.model)
    if args.positive_label not in model.classes:
        raise ValueError(
            f"positive label {args.positive_label!r} not among model classes {model.classes}"
        )
    with open(args.candidates, encoding="utf-8") as handle:
        candidate_ids = [line.strip() for line in handle if line.strip()]
    store = CorpusStore(args.corpus)
    try:
        scored = []
        for post_id in candidate_ids:
            post = store.get(post_id)
            if post is None:
                raise ValueError(f"candidate post {post_id!r} not in corpus")
            prediction = classifier.predict(model, _classifier_text(post))
            scored.append((post_id, prediction.probs[args.positive_label]))
    finally:
        store.close()
    scored.sort(key=lambda item: (-item[1], item[0]))
    top = scored[: args.top] if args.top else scored
    classifier.write_predictions_csv(
        ((post_id, args.positive_label, prob) for post_id, prob in top), args.out
    )
    print(f"ranked {len(scored)} candidates, wrote top {len(top)} -> {args.out}")
    return [args.out]


# --------------------------------------------------------------- analyze


def _hash_file_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _cmd_analyze(args) -> list[str]:
    labels = read_labels_csv(args.labels)
    store = CorpusStore(args.corpus)
    try:
        inspiring_docs, other_docs = [], []
        inspiring_raw = []
        for post_id, label in sorted(labels.items()):
            post = store.get(post_id)
            if post is None:
                raise ValueError(f"labeled post {post_id!r} not in corpus")
            doc = preprocess.tokenize_post(post)
            if label == args.positive_label:
                inspiring_docs.append(doc)
                inspiring_raw.append(post.full_text())
            else:
                other_docs.append(doc)
    finally:
        store.close()
    if not inspiring_docs:
        raise ValueError(f"no posts labeled {args.positive_label!r}")

    scores = analysis.tfidf_scores(
        inspiring_docs,
        other_docs=other_docs if args.tfidf_mode == "megadoc" else None,
        mode=args.tfidf_mode,
    )
    tfidf_top = analysis.ranked_terms(scores, args.top_words)
    distinctive = (
        analysis.distinctive_terms(inspiring_docs, other_docs) if other_docs else None
    )
    bigrams = analysis.top_ngrams(inspiring_docs, 2, args.top_ngrams)
    trigrams = analysis.top_ngrams(inspiring_docs, 3, args.top_ngrams)

    hashtag_counts: dict[str, int] = {}
    for text in inspiring_raw:
        for tag in extract_hashtags(text):
            hashtag_counts[tag] = hashtag_counts.get(tag, 0) + 1
    hashtags = sorted(hashtag_counts.items(), key=lambda item: (-item[1], item[0]))

    polarity_scores = [
        analysis.polarity_score(" ".join(doc.tokens)) for doc in inspiring_docs
    ]
    histogram = analysis.polarity_histogram(polarity_scores)

    cluster_items = cluster_result = coords = elbow = None
    if args.embeddings:
        vocab = {term for term, _ in tfidf_top}
        table = analysis.load_embeddings(args.embeddings, vocab)
        cluster_items = [term for term, _ in tfidf_top if term in table]
        if len(cluster_items) >= 4:
            matrix = table.matrix_for(cluster_items)
            if args.clusters:
                k = args.clusters
            else:
                k_max = min(args.k_max, len(cluster_items))
                elbow = analysis.select_k_elbow(
                    matrix, (args.k_min, k_max), seed=args.seed, restarts=args.restarts
                )
                k = elbow.k
                if elbow.warning:
                    print(f"warning: {elbow.warning}; using k={k}")
            cluster_result = analysis.kmeans(
                matrix, k, seed=args.seed, restarts=args.restarts
            )
            perplexity = min(args.perplexity, (len(cluster_items) - 1) / 3.0)
            coords = analysis.tsne_2d(
                matrix,
                perplexity=max(perplexity, 1.0),
                iterations=args.tsne_iters,
                seed=args.seed,
            )
        else:
            print("warning: fewer than 4 embedded words; skipping clustering")
            cluster_items = None

    emotion_deltas = None
    if args.emotions_inspiring and args.emotions_other:
        pred_inspiring = analysis.read_emotion_csv(args.emotions_inspiring)
        pred_other = analysis.read_emotion_csv(args.emotions_other)
        emotion_deltas = analysis.emotion_freq_diff(pred_inspiring, pred_other)

    from . import resources

    metadata = {
        "seed": args.seed,
        "positive_label": args.positive_label,
        "top_words": args.top_words,
        "tfidf_mode": args.tfidf_mode,
        "polarity_bin_width": 0.25,
        "polarity_lexicon_sha256": _hash_file_bytes(
            resources._read_text("polarity_lexicon.tsv").encode("utf-8")
        ),
        "stopwords_sha256": _hash_file_bytes(
            resources._read_text("stopwords.txt").encode("utf-8")
        ),
        "num_inspiring_docs": len(inspiring_docs),
        "num_other_docs": len(other_docs),
    }

    report = analysis.build_report(
        args.out,
        tfidf_top=tfidf_top,
        distinctive=distinctive,
        bigrams=bigrams,
        trigrams=trigrams,
        hashtags=hashtags,
        cluster_items=cluster_items,
        cluster_result=cluster_result,
        coords_2d=coords,
        elbow=elbow,
        polarity_histogram=histogram,
        emotion_deltas=emotion_deltas,
        metadata=metadata,
    )
    print(f"wrote {len(report.files)} report files -> {args.out}")
    return [report.manifest_path] + [os.path.join(args.out, f) for f in report.files]


# ---------------------------------------------------------------- report


def _cmd_report(args) -> list[str]:
    manifest_path = os.path.join(args.dir, "manifest.json")
    with open(manifest_path, encoding="utf-8") as handle:
        manifest = json.load(handle)
    bad = []
    for entry in manifest.get("files", []):
        path = os.path.join(args.dir, entry["name"])
        with open(path, "rb") as handle:
            digest = hashlib.sha256(handle.read()).hexdigest()
        status = "ok" if digest == entry["sha256"] else "HASH MISMATCH"
        if status != "ok":
            bad.append(entry["name"])
        print(f"{status:>14}  {entry['name']}")
    if bad:
        raise ValueError(f"manifest hash mismatch: {', '.join(bad)}")
    print(f"manifest verified: {len(manifest.get('files', []))} files")
    return [manifest_path]


# ---------------------------------------------------------------- parser


def build_parser() -> _Parser:
    parser = _Parser(prog="inspiremine", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)

    p = sub.add_parser("ingest", help="load an NDJSON dump into a corpus database")
    p.add_argument("--input", required=True, help="NDJSON file, or - for stdin")
    p.add_argument("--corpus", required=True, help="corpus database path")
    p.add_argument("--source", default="generic", choices=["generic", "reddit_like"])
    p.add_argument("--strict", action="store_true", help="fail on the first bad line")
    p.add_argument("--field-map", help="JSON file mapping input fields to canonical ones")
    _common_flags(p)
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("weak-label", help="apply candidate heuristics and sample controls")
    p.add_argument("--corpus", required=True)
    p.add_argument("--rules", help="ruleset JSON (default: built-in rules)")
    p.add_argument("--control-size", type=int, default=0)
    p.add_argument("--out-report", help="per-post fired-rule CSV")
    p.add_argument("--out-candidates", required=True)
    p.add_argument("--out-controls", required=True)
    _common_flags(p, seed=True)
    p.set_defaults(handler=_cmd_weak_label)

    p = sub.add_parser("preprocess", help="run language/length/profanity filters")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="post_id,keep,reason CSV")
    p.add_argument("--language", default="en")
    p.add_argument("--max-lang-score", type=float, default=None)
    p.add_argument("--min-words", type=int, default=10)
    p.add_argument("--max-words", type=int, default=200)
    p.add_argument("--profanity", help="custom profanity lexicon, one term per line")
    _common_flags(p)
    p.set_defaults(handler=_cmd_preprocess)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--corpus", required=True)
    p.add_argument("--store", required=True, help="annotation NDJSON store")
    p.add_argument("--tokens", required=True, help="JSON {annotator_id: token}")
    p.add_argument("--guidelines", help="guidelines document (default: bundled)")
    p.add_argument("--posts", help="file with one post id per line to annotate")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    _common_flags(p)
    p.set_defaults(handler=_cmd_serve)

    p = sub.add_parser("aggregate", help="aggregate annotations into labels and tables")
    p.add_argument("--store", required=True, help="annotation NDJSON store")
    p.add_argument("--out", required=True, help="output directory")
    _common_flags(p)
    p.set_defaults(handler=_cmd_aggregate)

    p = sub.add_parser("train", help="train the text classifier")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", required=True, help="post_id,label CSV")
    p.add_argument("--split", help="existing split CSV; train rows are used")
    p.add_argument("--test-fraction", type=float, default=None,
                   help="build a balanced split instead of using --split")
    p.add_argument("--split-out", help="where to write the built split")
    p.add_argument("--out", required=True, help="model file path")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--word-ngrams", type=int, default=2)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--buckets", type=int, default=100_000)
    p.add_argument("--holdout-fraction", type=float, default=0.1)
    p.add_argument("--patience", type=int, default=2)
    _common_flags(p, seed=True)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("eval", help="score a model or an external prediction file")
    p.add_argument("--corpus")
    p.add_argument("--labels", required=True, help="post_id,label CSV")
    p.add_argument("--split", help="split CSV; test rows are scored")
    p.add_argument("--model", help="model file")
    p.add_argument("--predictions", help="external post_id,label,probability CSV")
    p.add_argument("--predictions-out", help="write model predictions CSV here")
    p.add_argument("--out", required=True, help="metrics JSON path")
    p.add_argument("--positive-label", default=None)
    p.add_argument("--f1-average", default="positive", choices=["positive", "macro"])
    _common_flags(p)
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("select", help="rank unlabeled candidates by predicted probability")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--candidates", required=True, help="file with one post id per line")
    p.add_argument("--top", type=int, default=0, help="keep only the top N (0 = all)")
    p.add_argument("--positive-label", default=LABEL_INSPIRING)
    p.add_argument("--out", required=True, help="ranked predictions CSV")
    _common_flags(p)
    p.set_defaults(handler=_cmd_select)

    p = sub.add_parser("analyze", help="run corpus analyses into a report directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", required=True, help="post_id,label CSV")
    p.add_argument("--out", required=True, help="report directory")
    p.add_argument("--positive-label", default=LABEL_INSPIRING)
    p.add_argument("--top-words", type=int, default=200)
    p.add_argument("--top-ngrams", type=int, default=20)
    p.add_argument("--tfidf-mode", default="per_post", choices=["per_post", "megadoc"])
    p.add_argument("--embeddings", help="word-vector text file for clustering")
    p.add_argument("--clusters", type=int, default=0, help="fixed k (0 = elbow search)")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=15)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--tsne-iters", type=int, default=1000)
    p.add_argument("--emotions-inspiring", help="post_id,emotion CSV for the positive class")
    p.add_argument("--emotions-other", help="post_id,emotion CSV for the rest")
    _common_flags(p, seed=True)
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("report", help="verify a report directory against its manifest")
    p.add_argument("--dir", required=True)
    _common_flags(p)
    p.set_defaults(handler=_cmd_report)

    parser.subcommands = sub.choices
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    config_path = None
    for i, token in enumerate(raw_argv):
        if token == "--config" and i + 1 < len(raw_argv):
            config_path = raw_argv[i + 1]
        elif token.startswith("--config="):
            config_path = token[len("--config="):]
    try:
        if config_path:
            overrides = _load_config_file(config_path)
            command = raw_argv[0] if raw_argv and not raw_argv[0].startswith("-") else None
            target = parser.subcommands.get(command)
            if target is not None:
                known = {action.dest for action in target._actions}
                unknown = sorted(set(overrides) - known)
                if unknown:
                    raise _CliUsageError(
                        f"unknown setting {unknown[0]!r} in config file {config_path}"
                    )
                target.set_defaults(**overrides)
                for action in target._actions:
                    if action.required and action.dest in overrides:
                        action.required = False
        args = parser.parse_args(raw_argv)
    except _CliUsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not getattr(args, "handler", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        outputs = args.handler(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command != "serve":
        _append_run_log(args, outputs)
    return 0


def entrypoint() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entrypoint()
