"""Pure-numpy implementations of the clustering hot kernels.

This is the fallback backend; `pocsclust._kernels_cy` implements the same
signatures in Cython. Both backends are deterministic on their own, and they
agree to ~1e-12 relative (summation order differs, so results are not
guaranteed bit-identical across backends).

Conventions shared by both backends:
  * X is (n, d) float64 C-contiguous, prototypes are (k, d) float64.
  * nearest-prototype ties break to the lowest prototype index.
  * per-cluster accumulations run in datum order.
"""

import numpy as np

NAME = "numpy"

# below this total member distance a cluster's distance weights degenerate
# to uniform (the prototype already coincides with its members)
DEGENERATE_DIST_SUM = 1e-15


def _sq_dists(X, C):
    """Squared Euclidean distances, shape (n, k), computed as sum((x-c)^2)."""
    n = X.shape[0]
    k = C.shape[0]
    out = np.empty((n, k))
    for j in range(k):
        diff = X - C[j]
        out[:, j] = np.einsum("nd,nd->n", diff, diff)
    return out


def assign_labels(X, C):
    """Nearest prototype per datum.

    Returns (labels int64 (n,), min_sq float64 (n,)); ties go to the lowest
    prototype index (argmin keeps the first minimum).
    """
    d2 = _sq_dists(X, C)
    labels = np.argmin(d2, axis=1).astype(np.int64)
    return labels, d2[np.arange(X.shape[0]), labels]


def sq_dists_to_point(X, c):
    """Squared Euclidean distance from every row of X to the point c."""
    diff = X - c
    return np.einsum("nd,nd->n", diff, diff)


def centroid_sums(X, labels, k):
    """Per-cluster coordinate sums and member counts (for mean updates)."""
    d = X.shape[1]
    sums = np.zeros((k, d))
    counts = np.zeros(k, dtype=np.int64)
    np.add.at(sums, labels, X)
    np.add.at(counts, labels, 1)
    return sums, counts


def pocs_update_all(X, labels, prototypes):
    """One distance-weighted prototype update per cluster.

    Each member's weight is its Euclidean distance to the cluster prototype
    divided by the cluster's total member distance, and the new prototype is
    the weighted member sum: sum_i (dist_i * x_i) / sum_i dist_i. A cluster
    whose total distance falls below DEGENERATE_DIST_SUM gets uniform weights
    (plain mean); an empty cluster keeps its prototype.
    """
    k = prototypes.shape[0]
    new = prototypes.copy()
    for j in range(k):
        members = X[labels == j]
        if members.shape[0] == 0:
            continue
        diff = members - prototypes[j]
        dists = np.sqrt(np.einsum("nd,nd->n", diff, diff))
        total = float(np.sum(dists))
        if total < DEGENERATE_DIST_SUM:
            new[j] = np.einsum("n,nd->d", np.full(members.shape[0], 1.0 / members.shape[0]), members)
        else:
            new[j] = np.einsum("n,nd->d", dists, members) / total
    return new


def pocs_objective(X, labels, prototypes):
    """Distance-weighted squared-distance objective over all clusters.

    Per cluster: sum_i w_i * dist_i^2 with w_i = dist_i / sum dist, which
    reduces to sum(dist^3) / sum(dist); degenerate clusters contribute 0.
    """
    total = 0.0
    for j in range(prototypes.shape[0]):
        members = X[labels == j]
        if members.shape[0] == 0:
            continue
        diff = members - prototypes[j]
        dists = np.sqrt(np.einsum("nd,nd->n", diff, diff))
        den = float(np.sum(dists))
        if den < DEGENERATE_DIST_SUM:
            continue
        total += float(np.sum(dists**3)) / den
    return total


def assignment_errors(X, labels, prototypes):
    """(sum of squared distances, sum of distances) to assigned prototypes."""
    diff = X - prototypes[labels]
    sq = np.einsum("nd,nd->n", diff, diff)
    return float(np.sum(sq)), float(np.sum(np.sqrt(sq)))


def fcm_memberships(X, V, m):
    """Fuzzy membership matrix (n, k) for prototypes V and fuzzifier m.

    u[i, a] = 1 / sum_b (d_ia / d_ib)^(2/(m-1)). A datum at zero distance
    from one or more prototypes splits membership 1 uniformly across exactly
    those prototypes.
    """
    d = np.sqrt(_sq_dists(X, V))
    zero_rows = d <= 0.0
    any_zero = zero_rows.any(axis=1)
    expo = 2.0 / (m - 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        ratios = (d[:, :, None] / d[:, None, :]) ** expo
        U = 1.0 / np.sum(ratios, axis=2)
    if any_zero.any():
        for i in np.nonzero(any_zero)[0]:
            hits = zero_rows[i]
            U[i] = 0.0
            U[i, hits] = 1.0 / np.count_nonzero(hits)
    return U


def fcm_centers(X, U, m, V_old):
    """Prototype update v_a = sum_i u_ia^m x_i / sum_i u_ia^m.

    A cluster with zero total fuzzified membership keeps its old prototype.
    """
    um = U**m
    den = np.einsum("nk->k", um)
    num = np.einsum("nk,nd->kd", um, X)
    V = V_old.copy()
    ok = den > 0.0
    V[ok] = num[ok] / den[ok, None]
    return V


def fcm_objective(X, V, U, m):
    """sum_{i,a} u_ia^m * ||x_i - v_a||^2."""
    d2 = _sq_dists(X, V)
    return float(np.einsum("nk,nk->", U**m, d2))
