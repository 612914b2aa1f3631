"""Cluster quality measures: prototype-relative errors and label accuracy."""

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import backend
from .clustering import FuzzyModel, as_matrix, hard_assign
from .errors import ValidationError

ERROR_SSE = "sse"
ERROR_SUM_DIST = "sumdist"


def prototype_errors(data, labels, prototypes):
    """(sum of squared distances, sum of distances) of each datum to its
    assigned prototype."""
    data = as_matrix(data)
    prototypes = as_matrix(prototypes, name="prototypes")
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    if labels.shape != (data.shape[0],):
        raise ValidationError(
            f"labels must have shape ({data.shape[0]},), got {labels.shape}"
        )
    sse, sum_dist = backend.kernels().assignment_errors(data, labels, prototypes)
    return float(sse), float(sum_dist)


def model_assignments(model) -> np.ndarray:
    """Hard labels of a fitted model; fuzzy memberships are defuzzified."""
    if isinstance(model, FuzzyModel):
        return hard_assign(model.memberships)
    return model.assignments


def clustering_error(data, model, kind: str = ERROR_SSE) -> float:
    """Error of a fitted model on data. kind selects squared ('sse') or
    plain ('sumdist') distance sums."""
    if kind not in (ERROR_SSE, ERROR_SUM_DIST):
        raise ValidationError(f"kind must be 'sse' or 'sumdist', got {kind!r}")
    sse, sum_dist = prototype_errors(data, model_assignments(model), model.prototypes)
    return sse if kind == ERROR_SSE else sum_dist


def accuracy(assignments, true_labels, n_clusters=None, n_classes=None) -> float:
    """Classification accuracy in percent under the best one-to-one matching
    of clusters to classes. Unmatched clusters (or classes) contribute zero."""
    a = np.asarray(assignments, dtype=np.int64)
    t = np.asarray(true_labels, dtype=np.int64)
    if a.ndim != 1 or t.ndim != 1 or a.shape != t.shape:
        raise ValidationError(
            f"assignments and labels must be equal-length 1-d, got {a.shape} and {t.shape}"
        )
    if a.size == 0:
        raise ValidationError("need at least one datum")
    if a.min() < 0 or t.min() < 0:
        raise ValidationError("assignments and labels must be nonnegative")
    kc = int(a.max()) + 1 if n_clusters is None else int(n_clusters)
    nc = int(t.max()) + 1 if n_classes is None else int(n_classes)
    if a.max() >= kc or t.max() >= nc:
        raise ValidationError("label value outside the declared range")
    cont = np.zeros((kc, nc), dtype=np.int64)
    np.add.at(cont, (a, t), 1)
    rows, cols = linear_sum_assignment(cont, maximize=True)
    matched = int(cont[rows, cols].sum())
    return 100.0 * matched / a.size
