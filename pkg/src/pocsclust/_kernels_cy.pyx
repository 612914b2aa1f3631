# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled clustering hot kernels.

Same signatures and semantics as `pocsclust._kernels_np`; plain C loops with
left-to-right accumulation over the datum index. Nearest-prototype ties break
to the lowest prototype index (strict `<` comparison keeps the first minimum).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, pow, sqrt

cnp.import_array()

NAME = "compiled"

cdef double DEGENERATE_DIST_SUM = 1e-15


def assign_labels(double[:, ::1] X, double[:, ::1] C):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = C.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] labels = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] min_sq = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j, t, best
    cdef double s, bestd, diff
    for i in range(n):
        best = 0
        bestd = INFINITY
        for j in range(k):
            s = 0.0
            for t in range(d):
                diff = X[i, t] - C[j, t]
                s += diff * diff
            if s < bestd:
                bestd = s
                best = j
        labels[i] = best
        min_sq[i] = bestd
    return labels, min_sq


def sq_dists_to_point(double[:, ::1] X, double[::1] c):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, t
    cdef double s, diff
    for i in range(n):
        s = 0.0
        for t in range(d):
            diff = X[i, t] - c[t]
            s += diff * diff
        out[i] = s
    return out


def centroid_sums(double[:, ::1] X, cnp.int64_t[::1] labels, Py_ssize_t k):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] sums = np.zeros((k, d), dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t i, t
    cdef cnp.int64_t j
    for i in range(n):
        j = labels[i]
        for t in range(d):
            sums[j, t] += X[i, t]
        counts[j] += 1
    return sums, counts


def pocs_update_all(double[:, ::1] X, cnp.int64_t[::1] labels, double[:, ::1] prototypes):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = prototypes.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] new = np.array(prototypes, copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] num = np.zeros((k, d), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] den = np.zeros(k, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] mean_sum = np.zeros((k, d), dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t i, t
    cdef cnp.int64_t j
    cdef double s, diff, dist
    for i in range(n):
        j = labels[i]
        s = 0.0
        for t in range(d):
            diff = X[i, t] - prototypes[j, t]
            s += diff * diff
        dist = sqrt(s)
        for t in range(d):
            num[j, t] += dist * X[i, t]
            mean_sum[j, t] += X[i, t]
        den[j] += dist
        counts[j] += 1
    for j in range(k):
        if counts[j] == 0:
            continue
        if den[j] < DEGENERATE_DIST_SUM:
            for t in range(d):
                new[j, t] = mean_sum[j, t] / counts[j]
        else:
            for t in range(d):
                new[j, t] = num[j, t] / den[j]
    return new


def pocs_objective(double[:, ::1] X, cnp.int64_t[::1] labels, double[:, ::1] prototypes):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = prototypes.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] num = np.zeros(k, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] den = np.zeros(k, dtype=np.float64)
    cdef Py_ssize_t i, t
    cdef cnp.int64_t j
    cdef double s, diff, dist, total
    for i in range(n):
        j = labels[i]
        s = 0.0
        for t in range(d):
            diff = X[i, t] - prototypes[j, t]
            s += diff * diff
        dist = sqrt(s)
        num[j] += dist * dist * dist
        den[j] += dist
    total = 0.0
    for j in range(k):
        if den[j] >= DEGENERATE_DIST_SUM:
            total += num[j] / den[j]
    return total


def assignment_errors(double[:, ::1] X, cnp.int64_t[::1] labels, double[:, ::1] prototypes):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, t
    cdef cnp.int64_t j
    cdef double s, diff, sse = 0.0, sumdist = 0.0
    for i in range(n):
        j = labels[i]
        s = 0.0
        for t in range(d):
            diff = X[i, t] - prototypes[j, t]
            s += diff * diff
        sse += s
        sumdist += sqrt(s)
    return sse, sumdist


def fcm_memberships(double[:, ::1] X, double[:, ::1] V, double m):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = V.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] U = np.empty((n, k), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dist = np.empty(k, dtype=np.float64)
    cdef Py_ssize_t i, a, b, t, nzero
    cdef double s, diff, expo, acc
    expo = 2.0 / (m - 1.0)
    for i in range(n):
        nzero = 0
        for a in range(k):
            s = 0.0
            for t in range(d):
                diff = X[i, t] - V[a, t]
                s += diff * diff
            dist[a] = sqrt(s)
            if dist[a] <= 0.0:
                nzero += 1
        if nzero > 0:
            for a in range(k):
                U[i, a] = (1.0 / nzero) if dist[a] <= 0.0 else 0.0
        else:
            for a in range(k):
                acc = 0.0
                for b in range(k):
                    acc += pow(dist[a] / dist[b], expo)
                U[i, a] = 1.0 / acc
    return U


def fcm_centers(double[:, ::1] X, double[:, ::1] U, double m, double[:, ::1] V_old):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = U.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] V = np.array(V_old, copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] num = np.zeros((k, d), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] den = np.zeros(k, dtype=np.float64)
    cdef Py_ssize_t i, a, t
    cdef double um
    for i in range(n):
        for a in range(k):
            um = pow(U[i, a], m)
            den[a] += um
            for t in range(d):
                num[a, t] += um * X[i, t]
    for a in range(k):
        if den[a] > 0.0:
            for t in range(d):
                V[a, t] = num[a, t] / den[a]
    return V


def fcm_objective(double[:, ::1] X, double[:, ::1] V, double[:, ::1] U, double m):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = V.shape[0]
    cdef Py_ssize_t i, a, t
    cdef double s, diff, total = 0.0
    for i in range(n):
        for a in range(k):
            s = 0.0
            for t in range(d):
                diff = X[i, t] - V[a, t]
                s += diff * diff
            total += pow(U[i, a], m) * s
    return total
