"""Training pipeline: from runtime tables to one cost classifier per
expansion-ordering configuration, plus the priority scheme that turns the
twelve classifiers' verdicts into a single chosen ordering.

Per configuration the pipeline is: mutual-information feature selection on
the raw features, standardization of the selected columns, PCA, then a
binary SVM predicting whether the configuration solves an ontology cheaply
("good", cost at most the global threshold) or not.  Hyperparameters are
chosen by stratified k-fold cross-validation over an ordered grid; ties
resolve toward the earlier grid point.  Classifier priorities rank the
configurations by cross-validated accuracy (ties toward the lower
configuration number), and selection trusts the highest-priority positive
verdict — or falls back to the lowest-priority configuration when every
classifier votes negative.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..features import FEATURE_NAMES, FeatureVector
from ..heuristics import CONFIG_NUMBERS
from ..runtimes import FINISHED, RuntimeRow, rows_by_config
from .svm import SingleClass, SvmModel, svm_predict, svm_train
from .transforms import (
    apply_scaler,
    fit_scaler,
    mutual_information,
    pca_fit,
    pca_transform,
    select_top_k,
)

MODEL_FORMAT_VERSION = 1

GOOD = 1.0
BAD = -1.0


class VersionMismatch(ValueError):
    """Raised when a saved model bundle has a different format version."""


class CorruptModel(ValueError):
    """Raised when a saved model bundle cannot be decoded."""


# ------------------------------------------------------------- threshold


def combine_threshold_stats(stats: list[tuple[float, float]]) -> float:
    """Global cost threshold from per-configuration (mean, std) cost pairs:
    the average over configurations of mean + one standard deviation."""
    if not stats:
        raise ValueError("no per-configuration statistics")
    return sum(m + s for m, s in stats) / len(stats)


def compute_threshold(rows: list[RuntimeRow], configs: tuple[str, ...] = CONFIG_NUMBERS) -> float:
    """Threshold from a runtime table: per configuration take mean plus
    population std of the finished costs, then average over configurations.
    Configurations with no finished run contribute nothing."""
    by_config = rows_by_config(rows)
    stats: list[tuple[float, float]] = []
    for label in configs:
        costs = [r.cost for r in by_config.get(label, ()) if r.outcome == FINISHED]
        if costs:
            arr = np.asarray(costs, dtype=float)
            stats.append((float(arr.mean()), float(arr.std())))
    return combine_threshold_stats(stats)


def label_examples(
    rows: list[RuntimeRow], threshold: float, configs: tuple[str, ...] = CONFIG_NUMBERS
) -> dict[str, dict[str, float]]:
    """Per configuration, map ontology id to GOOD/BAD: good means the run
    finished within the cost threshold."""
    out: dict[str, dict[str, float]] = {label: {} for label in configs}
    for r in rows:
        if r.config in out:
            good = r.outcome == FINISHED and r.cost <= threshold
            out[r.config][r.ontology_id] = GOOD if good else BAD
    return out


# ------------------------------------------------------ fitted pipelines


@dataclass(frozen=True)
class GridPoint:
    k: int
    n_components: int
    kernel: str
    c: float
    gamma: float | None = None


@dataclass(frozen=True)
class FittedPipeline:
    selected: tuple[int, ...]
    scaler_mean: np.ndarray = field(repr=False)
    scaler_std: np.ndarray = field(repr=False)
    pca_mean: np.ndarray = field(repr=False)
    pca_components: np.ndarray = field(repr=False)
    model: SvmModel | None
    constant: float | None = None

    def transform(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))[:, self.selected]
        x = apply_scaler(x, self.scaler_mean, self.scaler_std)
        return pca_transform(x, self.pca_mean, self.pca_components)

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.constant is not None:
            return np.full(x.shape[0], self.constant)
        return svm_predict(self.model, self.transform(x))


def fit_config_pipeline(x: np.ndarray, y: np.ndarray, params: GridPoint) -> FittedPipeline:
    """Fit selection, scaling, PCA, and the SVM on one training set."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(np.unique(y)) < 2:
        raise SingleClass("training labels contain a single class")
    scores = mutual_information(x, y)
    selected = tuple(select_top_k(scores, params.k))
    sub = x[:, selected]
    mean, std = fit_scaler(sub)
    scaled = apply_scaler(sub, mean, std)
    n_comp = min(params.n_components, len(selected), x.shape[0] - 1)
    pmean, comps = pca_fit(scaled, max(n_comp, 1))
    reduced = pca_transform(scaled, pmean, comps)
    model = svm_train(reduced, y, kernel=params.kernel, c=params.c, gamma=params.gamma)
    return FittedPipeline(
        selected=selected,
        scaler_mean=mean,
        scaler_std=std,
        pca_mean=pmean,
        pca_components=comps,
        model=model,
    )


# -------------------------------------------------------- cross-validation


def stratified_folds(y: np.ndarray, n_folds: int, seed: int) -> np.ndarray:
    """Fold index per sample: each class is shuffled with the seeded
    generator and dealt round-robin, so fold class balance is within one."""
    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(seed)
    fold = np.empty(len(y), dtype=int)
    for cls in (GOOD, BAD):
        idx = np.flatnonzero(y == cls)
        perm = rng.permutation(len(idx))
        for pos, p in enumerate(perm):
            fold[idx[p]] = pos % n_folds
    return fold


def cross_validate(
    x: np.ndarray, y: np.ndarray, params: GridPoint, n_folds: int = 10, seed: int = 0
) -> float:
    """Pooled accuracy over stratified folds.  All transforms are fit on the
    training folds only.  Folds with an empty validation side or a
    single-class training side are skipped; returns 0.0 if nothing could be
    validated."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    fold = stratified_folds(y, n_folds, seed)
    correct = 0
    total = 0
    for f in range(n_folds):
        val = fold == f
        train = ~val
        if not val.any() or not train.any():
            continue
        if len(np.unique(y[train])) < 2:
            continue
        fitted = fit_config_pipeline(x[train], y[train], params)
        pred = fitted.predict(x[val])
        correct += int(np.count_nonzero(pred == y[val]))
        total += int(val.sum())
    return correct / total if total else 0.0


# ------------------------------------------------------------ grid search


def default_grid(n_features: int = len(FEATURE_NAMES)) -> list[GridPoint]:
    """Ordered hyperparameter grid: selection size x component count x
    kernel settings.  Duplicate points after clamping keep their first
    position only."""
    points: list[GridPoint] = []
    seen: set[tuple] = set()
    for k in (5, 10, 20, 39):
        k_eff = min(k, n_features)
        for nc in (2, 5, 10, "all"):
            nc_eff = k_eff if nc == "all" else min(nc, k_eff)
            kernel_settings: list[tuple[str, float, float | None]] = []
            for c in (0.1, 1.0, 10.0, 100.0):
                kernel_settings.append(("linear", c, None))
            for c in (0.1, 1.0, 10.0, 100.0):
                for gamma in (1.0 / nc_eff, 0.1, 1.0):
                    kernel_settings.append(("rbf", c, gamma))
            for kernel, c, gamma in kernel_settings:
                key = (k_eff, nc_eff, kernel, c, gamma)
                if key in seen:
                    continue
                seen.add(key)
                points.append(GridPoint(k=k_eff, n_components=nc_eff, kernel=kernel, c=c, gamma=gamma))
    return points


def grid_search(
    x: np.ndarray,
    y: np.ndarray,
    grid: list[GridPoint] | None = None,
    n_folds: int = 10,
    seed: int = 0,
) -> tuple[GridPoint, float]:
    """Best grid point by cross-validated accuracy; earlier point wins ties."""
    if grid is None:
        grid = default_grid(np.asarray(x).shape[1])
    if not grid:
        raise ValueError("empty hyperparameter grid")
    best: GridPoint | None = None
    best_acc = -1.0
    for point in grid:
        acc = cross_validate(x, y, point, n_folds=n_folds, seed=seed)
        if acc > best_acc:
            best, best_acc = point, acc
    return best, best_acc


# ------------------------------------------------------------- the bundle


@dataclass(frozen=True)
class ConfigModel:
    params: GridPoint | None
    accuracy: float
    pipeline: FittedPipeline


@dataclass(frozen=True)
class ModelBundle:
    threshold: float
    models: dict[str, ConfigModel]
    priorities: dict[str, int]

    def configs(self) -> tuple[str, ...]:
        return tuple(self.models)


def assign_priorities(accuracies: dict[str, float]) -> dict[str, int]:
    """Priority 1 goes to the most accurate classifier; accuracy ties are
    broken toward the lower configuration number."""
    order = sorted(accuracies, key=lambda label: (-accuracies[label], int(label)))
    return {label: rank for rank, label in enumerate(order, start=1)}


def train_model_bundle(
    feature_rows: list[tuple[str, FeatureVector]],
    runtime_rows: list[RuntimeRow],
    grid: list[GridPoint] | None = None,
    n_folds: int = 10,
    seed: int = 0,
    configs: tuple[str, ...] = CONFIG_NUMBERS,
) -> ModelBundle:
    """Train the full bundle: threshold, per-configuration classifier with
    grid-searched hyperparameters refit on all data, and priorities.

    A configuration whose labels are single-class gets a constant predictor
    with accuracy equal to that class's share (1.0), recorded without grid
    parameters.
    """
    threshold = compute_threshold(runtime_rows, configs)
    labels = label_examples(runtime_rows, threshold, configs)
    feat_by_id = dict(feature_rows)
    order = [oid for oid, _ in feature_rows]
    models: dict[str, ConfigModel] = {}
    for label in configs:
        lab = labels[label]
        ids = [oid for oid in order if oid in lab]
        if not ids:
            raise ValueError(f"no runtime rows for configuration {label}")
        x = np.asarray([feat_by_id[oid].values for oid in ids], dtype=float)
        y = np.asarray([lab[oid] for oid in ids], dtype=float)
        if len(np.unique(y)) < 2:
            const = float(y[0])
            pipeline = FittedPipeline(
                selected=(),
                scaler_mean=np.zeros(0),
                scaler_std=np.zeros(0),
                pca_mean=np.zeros(0),
                pca_components=np.zeros((0, 0)),
                model=None,
                constant=const,
            )
            models[label] = ConfigModel(params=None, accuracy=1.0, pipeline=pipeline)
            continue
        point, acc = grid_search(x, y, grid=grid, n_folds=n_folds, seed=seed)
        fitted = fit_config_pipeline(x, y, point)
        models[label] = ConfigModel(params=point, accuracy=acc, pipeline=fitted)
    priorities = assign_priorities({label: m.accuracy for label, m in models.items()})
    return ModelBundle(threshold=threshold, models=models, priorities=priorities)


# --------------------------------------------------------------- selection


def predict_labels(bundle: ModelBundle, fv: FeatureVector) -> dict[str, float]:
    x = np.asarray(fv.values, dtype=float)[None, :]
    return {label: float(m.pipeline.predict(x)[0]) for label, m in bundle.models.items()}


def select_heuristic(bundle: ModelBundle, fv: FeatureVector) -> str:
    """The highest-priority configuration predicted good; when every
    classifier predicts bad, the lowest-priority configuration."""
    preds = predict_labels(bundle, fv)
    good = [label for label, p in preds.items() if p == GOOD]
    if good:
        return min(good, key=lambda label: bundle.priorities[label])
    return max(preds, key=lambda label: bundle.priorities[label])


def f_score(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """F1 with the good class as positive; 0 when precision and recall are
    both undefined or zero."""
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    tp = int(np.count_nonzero((y_pred == GOOD) & (y_true == GOOD)))
    fp = int(np.count_nonzero((y_pred == GOOD) & (y_true == BAD)))
    fn = int(np.count_nonzero((y_pred == BAD) & (y_true == GOOD)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


# ------------------------------------------------------------ persistence


def _pipeline_to_json(p: FittedPipeline) -> dict:
    d: dict = {
        "selected": list(p.selected),
        "scaler_mean": p.scaler_mean.tolist(),
        "scaler_std": p.scaler_std.tolist(),
        "pca_mean": p.pca_mean.tolist(),
        "pca_components": p.pca_components.tolist(),
        "constant": p.constant,
    }
    if p.model is not None:
        d["svm"] = {
            "kernel": p.model.kernel,
            "c": p.model.c,
            "gamma": p.model.gamma,
            "x": p.model.x.tolist(),
            "y": p.model.y.tolist(),
            "alpha": p.model.alpha.tolist(),
            "bias": p.model.bias,
        }
    else:
        d["svm"] = None
    return d


def _pipeline_from_json(d: dict) -> FittedPipeline:
    svm = d["svm"]
    model = None
    if svm is not None:
        model = SvmModel(
            kernel=svm["kernel"],
            c=svm["c"],
            gamma=svm["gamma"],
            x=np.asarray(svm["x"], dtype=float),
            y=np.asarray(svm["y"], dtype=float),
            alpha=np.asarray(svm["alpha"], dtype=float),
            bias=svm["bias"],
        )
    comps = np.asarray(d["pca_components"], dtype=float)
    if comps.size == 0:
        comps = comps.reshape((0, 0))
    return FittedPipeline(
        selected=tuple(d["selected"]),
        scaler_mean=np.asarray(d["scaler_mean"], dtype=float),
        scaler_std=np.asarray(d["scaler_std"], dtype=float),
        pca_mean=np.asarray(d["pca_mean"], dtype=float),
        pca_components=comps,
        model=model,
        constant=d["constant"],
    )


def save_bundle(bundle: ModelBundle, path: str) -> None:
    doc = {
        "version": MODEL_FORMAT_VERSION,
        "feature_names": list(FEATURE_NAMES),
        "threshold": bundle.threshold,
        "priorities": bundle.priorities,
        "models": {
            label: {
                "params": None
                if m.params is None
                else {
                    "k": m.params.k,
                    "n_components": m.params.n_components,
                    "kernel": m.params.kernel,
                    "c": m.params.c,
                    "gamma": m.params.gamma,
                },
                "accuracy": m.accuracy,
                "pipeline": _pipeline_to_json(m.pipeline),
            }
            for label, m in bundle.models.items()
        },
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_bundle(path: str) -> ModelBundle:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptModel(f"cannot read model bundle: {exc}") from exc
    if not isinstance(doc, dict) or "version" not in doc:
        raise CorruptModel("model bundle lacks a version field")
    if doc["version"] != MODEL_FORMAT_VERSION:
        raise VersionMismatch(
            f"model format {doc['version']!r}, expected {MODEL_FORMAT_VERSION!r}"
        )
    try:
        if doc["feature_names"] != list(FEATURE_NAMES):
            raise CorruptModel("model bundle was trained on a different feature schema")
        models: dict[str, ConfigModel] = {}
        for label, m in doc["models"].items():
            params = None
            if m["params"] is not None:
                pd = m["params"]
                params = GridPoint(
                    k=pd["k"],
                    n_components=pd["n_components"],
                    kernel=pd["kernel"],
                    c=pd["c"],
                    gamma=pd["gamma"],
                )
            models[label] = ConfigModel(
                params=params,
                accuracy=m["accuracy"],
                pipeline=_pipeline_from_json(m["pipeline"]),
            )
        priorities = {label: int(v) for label, v in doc["priorities"].items()}
        bundle = ModelBundle(
            threshold=float(doc["threshold"]), models=models, priorities=priorities
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (VersionMismatch, CorruptModel)):
            raise
        raise CorruptModel(f"malformed model bundle: {exc}") from exc
    if not math.isfinite(bundle.threshold):
        raise CorruptModel("model bundle threshold is not finite")
    return bundle
