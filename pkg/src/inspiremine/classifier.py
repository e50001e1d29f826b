"""Linear text classifier over hashed bag-of-n-gram features.

Documents are lowercased whitespace tokens; unigrams and word n-grams are
hashed with 64-bit FNV-1a (offset 14695981039346656037, prime
1099511628211) folded modulo `bucket_count`, so feature ids are stable
across runs and platforms. A document is the average of its feature
embeddings; a single linear layer plus softmax gives class probabilities.
Training is mini-batch SGD on cross-entropy with a linearly decaying
learning rate and holdout-based early stopping. With a fixed seed,
single-threaded training is fully deterministic.
"""

from __future__ import annotations

import csv
import json
import struct
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

__all__ = [
    "MAGIC",
    "FORMAT_VERSION",
    "TrainConfig",
    "TextClassifierModel",
    "Prediction",
    "EvalResult",
    "ModelFormatError",
    "NonFiniteLossError",
    "fnv1a_64",
    "hashed_features",
    "initialize_model",
    "batch_gradients",
    "dataset_loss",
    "train",
    "predict",
    "evaluate",
    "confusion_counts",
    "save_model",
    "load_model",
    "import_external_predictions",
    "write_predictions_csv",
    "read_predictions_csv",
]

MAGIC = b"INSPMDL1"
FORMAT_VERSION = 1

_FNV_OFFSET = 14695981039346656037
_FNV_PRIME = 1099511628211
_U64 = (1 << 64) - 1

_NGRAM_JOIN = " "


class ModelFormatError(ValueError):
    pass


class NonFiniteLossError(ValueError):
    pass


def fnv1a_64(data: bytes) -> int:
    value = _FNV_OFFSET
    for byte in data:
        value = ((value ^ byte) * _FNV_PRIME) & _U64
    return value


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 5
    batch_size: int = 64
    learning_rate: float = 0.5
    word_ngrams: int = 2
    min_count: int = 1
    dim: int = 100
    seed: int = 0
    bucket_count: int = 100_000
    holdout_fraction: float = 0.1
    patience: int = 2

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.word_ngrams < 1:
            raise ValueError("word_ngrams must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.dim < 1 or self.bucket_count < 1:
            raise ValueError("dim and bucket_count must be >= 1")
        if not 0 <= self.holdout_fraction < 1:
            raise ValueError("holdout_fraction must be in [0, 1)")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")

    def to_json_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, data: dict) -> "TrainConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass
class TextClassifierModel:
    bucket_count: int
    dim: int
    input_embeddings: np.ndarray
    output_weights: np.ndarray
    classes: tuple[str, ...]
    hyperparams: TrainConfig
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        self.classes = tuple(self.classes)
        if len(self.classes) < 2:
            raise ValueError("model needs at least 2 classes")
        if self.input_embeddings.shape != (self.bucket_count, self.dim):
            raise ValueError("input_embeddings shape mismatch")
        if self.output_weights.shape != (self.dim, len(self.classes)):
            raise ValueError("output_weights shape mismatch")
        if not np.all(np.isfinite(self.input_embeddings)) or not np.all(
            np.isfinite(self.output_weights)
        ):
            raise ValueError("model weights must be finite")

    def equals(self, other: "TextClassifierModel") -> bool:
        return (
            self.bucket_count == other.bucket_count
            and self.dim == other.dim
            and self.classes == other.classes
            and self.format_version == other.format_version
            and self.hyperparams == other.hyperparams
            and self.input_embeddings.tobytes() == other.input_embeddings.tobytes()
            and self.output_weights.tobytes() == other.output_weights.tobytes()
        )


@dataclass(frozen=True)
class Prediction:
    label: str
    probability: float
    probs: dict[str, float] = field(compare=False)


@dataclass(frozen=True)
class EvalResult:
    accuracy: float
    f1: float
    confusion: dict[str, int]

    def to_json_dict(self) -> dict:
        return {"accuracy": self.accuracy, "f1": self.f1, "confusion": dict(self.confusion)}


def _tokens(text: str) -> list[str]:
    return text.lower().split()


def hashed_features(
    text: str,
    bucket_count: int,
    word_ngrams: int = 2,
    vocab: frozenset[str] | set[str] | None = None,
) -> np.ndarray:
    """Bucket ids for a document's unigrams and 2..word_ngrams n-grams.
    `vocab`, when given, drops tokens outside it before n-gram formation
    (training-time min_count filter; prediction hashes everything)."""
    tokens = _tokens(text)
    if vocab is not None:
        tokens = [t for t in tokens if t in vocab]
    ids = [fnv1a_64(t.encode("utf-8")) % bucket_count for t in tokens]
    for n in range(2, word_ngrams + 1):
        for i in range(len(tokens) - n + 1):
            gram = _NGRAM_JOIN.join(tokens[i : i + n])
            ids.append(fnv1a_64(gram.encode("utf-8")) % bucket_count)
    return np.asarray(ids, dtype=np.int64)


def _doc_vector(embeddings: np.ndarray, features: np.ndarray) -> np.ndarray:
    if features.size == 0:
        return np.zeros(embeddings.shape[1], dtype=embeddings.dtype)
    return embeddings[features].mean(axis=0)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


def initialize_model(classes, config: TrainConfig) -> TextClassifierModel:
    """Fresh model: uniform(-1/dim, 1/dim) input embeddings from the seed,
    zero output weights (so an untrained model predicts uniformly)."""
    classes = tuple(classes)
    rng = np.random.default_rng(config.seed)
    embeddings = rng.uniform(
        -1.0 / config.dim, 1.0 / config.dim, size=(config.bucket_count, config.dim)
    )
    weights = np.zeros((config.dim, len(classes)), dtype=np.float64)
    return TextClassifierModel(
        bucket_count=config.bucket_count,
        dim=config.dim,
        input_embeddings=embeddings,
        output_weights=weights,
        classes=classes,
        hyperparams=config,
    )


def batch_gradients(embeddings, output_weights, features_list, class_indices):
    """Mean cross-entropy over one batch plus its gradients.

    Returns (loss, d_output_weights, per_doc_dvec) where per_doc_dvec[i]
    is the gradient w.r.t. document i's averaged vector; spreading it over
    the document's feature rows (divided by the feature count) gives the
    input-embedding gradient. Both the SGD loop and the finite-difference
    check go through here.
    """
    batch = len(features_list)
    d_output = np.zeros_like(output_weights)
    per_doc_dvec = []
    total_loss = 0.0
    for features, y in zip(features_list, class_indices):
        vec = _doc_vector(embeddings, features)
        probs = _softmax(vec @ output_weights)
        total_loss += -np.log(max(probs[y], 1e-300))
        dlogits = probs.copy()
        dlogits[y] -= 1.0
        d_output += np.outer(vec, dlogits) / batch
        per_doc_dvec.append((output_weights @ dlogits) / batch)
    return total_loss / batch, d_output, per_doc_dvec


def dataset_loss(embeddings, output_weights, features_list, class_indices) -> float:
    """Mean cross-entropy without gradients (for checkpoints/holdout)."""
    total = 0.0
    for features, y in zip(features_list, class_indices):
        vec = _doc_vector(embeddings, features)
        probs = _softmax(vec @ output_weights)
        total += -np.log(max(probs[y], 1e-300))
    return total / len(features_list)


def train(
    texts,
    labels,
    config: TrainConfig = TrainConfig(),
    *,
    history: list | None = None,
) -> TextClassifierModel:
    """Mini-batch SGD with linear learning-rate decay to zero and early
    stopping on a seeded holdout (best weights restored). When `history`
    is a list, a per-batch diagnostic dict with the full-training-set loss
    is appended (slow; for inspection only)."""
    texts = list(texts)
    labels = list(labels)
    if not texts or len(texts) != len(labels):
        raise ValueError("texts and labels must be non-empty and parallel")
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise ValueError("training data must contain at least 2 classes")
    class_index = {c: i for i, c in enumerate(classes)}
    y_all = np.asarray([class_index[l] for l in labels], dtype=np.int64)

    rng = np.random.default_rng(config.seed)
    n = len(texts)
    order = rng.permutation(n)
    n_holdout = int(round(n * config.holdout_fraction))
    if n - n_holdout < 1:
        n_holdout = 0
    holdout_idx = order[:n_holdout]
    train_idx = order[n_holdout:]

    counts = Counter()
    for i in train_idx:
        counts.update(_tokens(texts[i]))
    vocab = None
    if config.min_count > 1:
        vocab = frozenset(t for t, c in counts.items() if c >= config.min_count)

    def features_of(i: int) -> np.ndarray:
        return hashed_features(texts[i], config.bucket_count, config.word_ngrams, vocab)

    train_feats = [features_of(i) for i in train_idx]
    train_y = y_all[train_idx]
    holdout_feats = [features_of(i) for i in holdout_idx]
    holdout_y = y_all[holdout_idx]

    model = initialize_model(classes, config)
    embeddings = model.input_embeddings  # float64 during training
    output_weights = model.output_weights

    n_train = len(train_feats)
    batches_per_epoch = (n_train + config.batch_size - 1) // config.batch_size
    total_steps = max(config.epochs * batches_per_epoch, 1)
    step = 0
    best_loss = np.inf
    best_weights = None
    stale = 0

    for epoch in range(config.epochs):
        epoch_order = rng.permutation(n_train)
        for b in range(batches_per_epoch):
            chunk = epoch_order[b * config.batch_size : (b + 1) * config.batch_size]
            if chunk.size == 0:
                continue
            lr = config.learning_rate * (1.0 - step / total_steps)
            step += 1
            feats = [train_feats[i] for i in chunk]
            ys = train_y[chunk]
            loss, d_output, per_doc_dvec = batch_gradients(
                embeddings, output_weights, feats, ys
            )
            if not np.isfinite(loss):
                raise NonFiniteLossError(
                    f"non-finite loss at epoch {epoch} batch {b}"
                )
            output_weights -= lr * d_output
            for features, dvec in zip(feats, per_doc_dvec):
                if features.size:
                    np.add.at(
                        embeddings, features, -lr * dvec / features.size
                    )
            if history is not None:
                history.append(
                    {
                        "epoch": epoch,
                        "batch": b,
                        "learning_rate": lr,
                        "train_loss": dataset_loss(
                            embeddings, output_weights, train_feats, train_y
                        ),
                    }
                )
        if holdout_feats:
            holdout_loss = dataset_loss(
                embeddings, output_weights, holdout_feats, holdout_y
            )
            if history is not None:
                history.append({"epoch": epoch, "holdout_loss": holdout_loss})
            if holdout_loss < best_loss - 1e-12:
                best_loss = holdout_loss
                best_weights = (embeddings.copy(), output_weights.copy())
                stale = 0
            else:
                stale += 1
                if stale >= config.patience:
                    break
    if best_weights is not None:
        embeddings, output_weights = best_weights

    return TextClassifierModel(
        bucket_count=config.bucket_count,
        dim=config.dim,
        input_embeddings=embeddings.astype(np.float32),
        output_weights=output_weights.astype(np.float32),
        classes=classes,
        hyperparams=config,
    )


def _predict_one(model: TextClassifierModel, text: str) -> Prediction:
    features = hashed_features(
        text, model.bucket_count, model.hyperparams.word_ngrams
    )
    embeddings = model.input_embeddings.astype(np.float64, copy=False)
    weights = model.output_weights.astype(np.float64, copy=False)
    vec = _doc_vector(embeddings, features)
    probs = _softmax(vec @ weights)
    best = int(np.argmax(probs))
    return Prediction(
        label=model.classes[best],
        probability=float(probs[best]),
        probs={c: float(p) for c, p in zip(model.classes, probs)},
    )


def predict(model: TextClassifierModel, texts):
    """Single string -> Prediction; sequence of strings -> list of them."""
    if isinstance(texts, str):
        return _predict_one(model, texts)
    return [_predict_one(model, t) for t in texts]


def confusion_counts(gold, predicted, positive_label: str) -> dict[str, int]:
    counts = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    for g, p in zip(gold, predicted):
        if p == positive_label:
            counts["tp" if g == positive_label else "fp"] += 1
        else:
            counts["fn" if g == positive_label else "tn"] += 1
    return counts


def _f1_from_counts(tp: int, fp: int, fn: int) -> float:
    denominator = 2 * tp + fp + fn
    return 2 * tp / denominator if denominator else 0.0


def _eval_from_labels(gold, predicted, positive_label: str, f1_average: str) -> EvalResult:
    counts = confusion_counts(gold, predicted, positive_label)
    total = len(gold)
    accuracy = (counts["tp"] + counts["tn"]) / total
    positive_f1 = _f1_from_counts(counts["tp"], counts["fp"], counts["fn"])
    if f1_average == "macro":
        negative_f1 = _f1_from_counts(counts["tn"], counts["fn"], counts["fp"])
        f1 = (positive_f1 + negative_f1) / 2
    else:
        f1 = positive_f1
    return EvalResult(accuracy=accuracy, f1=f1, confusion=counts)


def _positive_label(classes, positive_label: str | None) -> str:
    if positive_label is not None:
        if positive_label not in classes:
            raise ValueError(f"positive label {positive_label!r} not among classes")
        return positive_label
    return "inspiring" if "inspiring" in classes else classes[0]


def evaluate(
    model: TextClassifierModel,
    texts,
    labels,
    *,
    positive_label: str | None = None,
    f1_average: str = "positive",
) -> EvalResult:
    """Accuracy, F1 (positive-class by default, macro on request), and the
    2x2 confusion counts for a binary model."""
    texts = list(texts)
    labels = list(labels)
    if not texts or len(texts) != len(labels):
        raise ValueError("test texts and labels must be non-empty and parallel")
    if len(model.classes) != 2:
        raise ValueError("evaluate supports binary models only")
    positive = _positive_label(model.classes, positive_label)
    predicted = [p.label for p in predict(model, texts)]
    return _eval_from_labels(labels, predicted, positive, f1_average)


def save_model(model: TextClassifierModel, sink) -> None:
    """Layout: magic INSPMDL1; u32 LE format_version, bucket_count, dim,
    num_classes; length-prefixed JSON class list; length-prefixed JSON
    hyperparams; input embeddings then output weights as row-major little-
    endian float32."""
    own = isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__")
    handle = open(sink, "wb") if own else sink
    try:
        handle.write(MAGIC)
        handle.write(struct.pack("<IIII", model.format_version, model.bucket_count,
                                 model.dim, len(model.classes)))
        for blob in (
            json.dumps(list(model.classes)).encode("utf-8"),
            json.dumps(model.hyperparams.to_json_dict()).encode("utf-8"),
        ):
            handle.write(struct.pack("<I", len(blob)))
            handle.write(blob)
        handle.write(np.ascontiguousarray(model.input_embeddings, dtype="<f4").tobytes())
        handle.write(np.ascontiguousarray(model.output_weights, dtype="<f4").tobytes())
    finally:
        if own:
            handle.close()


def _read_exact(handle, count: int, what: str) -> bytes:
    data = handle.read(count)
    if len(data) != count:
        raise ModelFormatError(f"truncated model file while reading {what}")
    return data


def load_model(source) -> TextClassifierModel:
    own = isinstance(source, (str, bytes)) or hasattr(source, "__fspath__")
    handle = open(source, "rb") if own else source
    try:
        magic = handle.read(len(MAGIC))
        if magic != MAGIC:
            raise ModelFormatError("bad magic; not a model file")
        version, bucket_count, dim, num_classes = struct.unpack(
            "<IIII", _read_exact(handle, 16, "header")
        )
        if version != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format version {version}")
        (classes_len,) = struct.unpack("<I", _read_exact(handle, 4, "class table size"))
        classes = tuple(json.loads(_read_exact(handle, classes_len, "class table")))
        if len(classes) != num_classes:
            raise ModelFormatError("class table length disagrees with header")
        (hp_len,) = struct.unpack("<I", _read_exact(handle, 4, "hyperparams size"))
        hyperparams = TrainConfig.from_json_dict(
            json.loads(_read_exact(handle, hp_len, "hyperparams"))
        )
        emb_bytes = _read_exact(handle, bucket_count * dim * 4, "input embeddings")
        out_bytes = _read_exact(handle, dim * num_classes * 4, "output weights")
        if handle.read(1):
            raise ModelFormatError("trailing data after model payload")
        embeddings = np.frombuffer(emb_bytes, dtype="<f4").reshape(bucket_count, dim).copy()
        weights = np.frombuffer(out_bytes, dtype="<f4").reshape(dim, num_classes).copy()
        return TextClassifierModel(
            bucket_count=bucket_count,
            dim=dim,
            input_embeddings=embeddings,
            output_weights=weights,
            classes=classes,
            hyperparams=hyperparams,
            format_version=version,
        )
    finally:
        if own:
            handle.close()


def write_predictions_csv(rows, path) -> None:
    """rows: iterable of (post_id, label, probability)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["post_id", "label", "probability"])
        for post_id, label, probability in rows:
            writer.writerow([post_id, label, f"{probability:.6f}"])


def read_predictions_csv(source) -> list[tuple[str, str, float]]:
    own = isinstance(source, (str, bytes)) or hasattr(source, "__fspath__")
    handle = open(source, encoding="utf-8", newline="") if own else source
    try:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["post_id", "label", "probability"]:
            raise ValueError("predictions file must start with post_id,label,probability")
        rows = []
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"malformed predictions row at line {line_number}")
            probability = float(row[2])
            if not 0.0 <= probability <= 1.0:
                raise ValueError(
                    f"probability out of [0, 1] at line {line_number}: {probability}"
                )
            rows.append((row[0], row[1], probability))
        return rows
    finally:
        if own:
            handle.close()


def import_external_predictions(
    source,
    test_ids,
    test_labels,
    *,
    positive_label: str | None = None,
    f1_average: str = "positive",
) -> EvalResult:
    """Score a post_id,label,probability file against gold labels. The
    file must cover every test post exactly once, no extras."""
    rows = read_predictions_csv(source)
    by_id: dict[str, str] = {}
    for post_id, label, _ in rows:
        if post_id in by_id:
            raise ValueError(f"duplicate prediction for post {post_id!r}")
        by_id[post_id] = label
    test_ids = list(test_ids)
    test_labels = list(test_labels)
    missing = [i for i in test_ids if i not in by_id]
    if missing:
        raise ValueError(f"missing prediction for post {missing[0]!r}")
    extra = set(by_id) - set(test_ids)
    if extra:
        raise ValueError(f"prediction for unknown post {sorted(extra)[0]!r}")
    classes = tuple(sorted(set(test_labels) | set(by_id.values())))
    positive = _positive_label(classes, positive_label)
    predicted = [by_id[i] for i in test_ids]
    return _eval_from_labels(test_labels, predicted, positive, f1_average)
