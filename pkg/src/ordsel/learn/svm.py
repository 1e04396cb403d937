"""A small deterministic soft-margin SVM.

Training uses sequential minimal optimization with a fully deterministic
working-set choice: scan the first multiplier in index order, pick the
partner maximizing |E1 - E2| (lower index on ties).  No randomness is
involved anywhere, so training the same data twice yields bit-identical
models.  Intended for the few-hundred-sample problems produced by the
benchmark harness, not for large-scale use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LINEAR = "linear"
RBF = "rbf"

_TOL = 1e-3
_EPS = 1e-8
_MAX_UPDATES = 100_000


class SingleClass(ValueError):
    """Raised when training labels contain only one class."""


class TooFewExamples(ValueError):
    """Raised when there are not enough examples to train."""


@dataclass(frozen=True)
class SvmModel:
    kernel: str
    c: float
    gamma: float | None
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)
    bias: float


def _kernel_matrix(kernel: str, gamma: float | None, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if kernel == LINEAR:
        return a @ b.T
    if kernel == RBF:
        if gamma is None:
            raise ValueError("rbf kernel requires gamma")
        sq = (a * a).sum(axis=1)[:, None] + (b * b).sum(axis=1)[None, :] - 2.0 * (a @ b.T)
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ValueError(f"unknown kernel {kernel!r}")


def svm_train(
    x: np.ndarray,
    y: np.ndarray,
    kernel: str = LINEAR,
    c: float = 1.0,
    gamma: float | None = None,
) -> SvmModel:
    """Fit a binary SVM on labels in {-1, +1}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[0]
    if n < 2:
        raise TooFewExamples(f"need at least 2 examples, got {n}")
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise ValueError("labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise SingleClass("training labels contain a single class")

    k = _kernel_matrix(kernel, gamma, x, x)
    alpha = np.zeros(n)
    bias = 0.0
    updates = 0

    while updates < _MAX_UPDATES:
        changed = 0
        # Fresh error vector each pass; kept incrementally within the pass.
        e = (alpha * y) @ k + bias - y
        for i in range(n):
            ei = e[i]
            if not ((y[i] * ei < -_TOL and alpha[i] < c) or (y[i] * ei > _TOL and alpha[i] > 0)):
                continue
            gaps = np.abs(ei - e)
            gaps[i] = -1.0
            j = int(np.argmax(gaps))  # argmax takes the lowest index on ties
            if j == i:
                continue
            ej = e[j]
            ai_old, aj_old = alpha[i], alpha[j]
            if y[i] != y[j]:
                lo, hi = max(0.0, aj_old - ai_old), min(c, c + aj_old - ai_old)
            else:
                lo, hi = max(0.0, ai_old + aj_old - c), min(c, ai_old + aj_old)
            if hi - lo < _EPS:
                continue
            eta = 2.0 * k[i, j] - k[i, i] - k[j, j]
            if eta >= 0:
                continue
            aj = np.clip(aj_old - y[j] * (ei - ej) / eta, lo, hi)
            if abs(aj - aj_old) < _EPS:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)
            alpha[i], alpha[j] = ai, aj
            db = -bias
            b1 = bias - ei - y[i] * (ai - ai_old) * k[i, i] - y[j] * (aj - aj_old) * k[i, j]
            b2 = bias - ej - y[i] * (ai - ai_old) * k[i, j] - y[j] * (aj - aj_old) * k[j, j]
            if 0.0 < ai < c:
                bias = b1
            elif 0.0 < aj < c:
                bias = b2
            else:
                bias = (b1 + b2) / 2.0
            db += bias
            e = e + y[i] * (ai - ai_old) * k[i] + y[j] * (aj - aj_old) * k[j] + db
            changed += 1
            updates += 1
            if updates >= _MAX_UPDATES:
                break
        if changed == 0:
            break

    return SvmModel(kernel=kernel, c=c, gamma=gamma, x=x, y=y, alpha=alpha, bias=bias)


def svm_decision(model: SvmModel, x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    k = _kernel_matrix(model.kernel, model.gamma, x, model.x)
    return k @ (model.alpha * model.y) + model.bias


def svm_predict(model: SvmModel, x: np.ndarray) -> np.ndarray:
    """Class labels in {-1, +1}; the decision boundary itself maps to +1."""
    return np.where(svm_decision(model, x) >= 0.0, 1.0, -1.0)
