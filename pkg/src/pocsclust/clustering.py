"""Prototype-based clustering: distance-weighted projection updates alongside
the classic Lloyd iteration and a fuzzy-membership variant.

The projection-based method treats every datum as a one-point convex set and
moves each prototype by a convex combination of its members, with weights
proportional to (not inversely proportional to) member distance. Far members
therefore pull harder than near ones, which is what separates this update
from a plain centroid step.

All fits are deterministic given a seed, validate their inputs up front, and
run their hot loops on the active kernel backend.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import backend
from .errors import NumericError, ValidationError
from .pocs_core import as_point

DEGENERATE_DIST_SUM = 1e-15

INIT_KMEANSPP = "kmeans++"
INIT_RANDOM = "random"


def as_matrix(data, name="data"):
    """Coerce to a finite 2-d float64 C-contiguous array with n >= 1 rows."""
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-d, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValidationError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class ClusterConfig:
    """Shared fit options.

    init: None picks the algorithm's own default, 'kmeans++' or 'random'
    force a seeding rule, and an explicit (k, d) array is used verbatim.
    """

    k: int
    max_iter: int = 300
    tol: float = 1e-6
    rng_seed: Optional[int] = None
    init: Union[None, str, np.ndarray] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if self.max_iter < 1:
            raise ValidationError(f"max_iter must be >= 1, got {self.max_iter}")
        if not (np.isfinite(self.tol) and self.tol >= 0.0):
            raise ValidationError(f"tol must be finite and >= 0, got {self.tol}")
        if isinstance(self.init, str) and self.init not in (INIT_KMEANSPP, INIT_RANDOM):
            raise ValidationError(
                f"init must be None, {INIT_KMEANSPP!r}, {INIT_RANDOM!r}, or an array, got {self.init!r}"
            )


@dataclass
class ClusterModel:
    """Result of a hard-assignment fit."""

    prototypes: np.ndarray
    assignments: np.ndarray
    sse: float
    own_objective: float
    iterations: int
    converged: bool

    @property
    def k(self) -> int:
        return self.prototypes.shape[0]


@dataclass
class FuzzyModel:
    """Result of a fuzzy fit. memberships is (n, k) with rows summing to 1."""

    prototypes: np.ndarray
    memberships: np.ndarray
    fuzzifier: float
    objective: float
    iterations: int
    converged: bool

    @property
    def k(self) -> int:
        return self.prototypes.shape[0]


@dataclass
class MemberWeights:
    """Normalized member weights of one cluster, paired with the rows they
    refer to. weights sums to 1 unless the cluster is empty."""

    weights: np.ndarray
    member_indices: np.ndarray


def random_seed(data, k, seed=None):
    """k distinct rows of data, chosen uniformly."""
    data = as_matrix(data)
    n = data.shape[0]
    if not 1 <= k <= n:
        raise ValidationError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(n, size=k, replace=False)
    return data[idx].copy()


def kmeanspp_seed(data, k, seed=None):
    """D^2 seeding: first prototype uniform, later ones drawn with
    probability proportional to squared distance from the nearest chosen one."""
    data = as_matrix(data)
    n = data.shape[0]
    if not 1 <= k <= n:
        raise ValidationError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    protos = np.empty((k, data.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    protos[0] = data[first]
    if k == 1:
        return protos
    diff = data - protos[0]
    d2 = np.einsum("ij,ij->i", diff, diff)
    for j in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            # every datum coincides with a chosen prototype
            probs = np.full(n, 1.0 / n)
        else:
            probs = d2 / total
        nxt = int(rng.choice(n, p=probs))
        protos[j] = data[nxt]
        if j + 1 < k:
            diff = data - protos[j]
            d2 = np.minimum(d2, np.einsum("ij,ij->i", diff, diff))
    return protos


def _resolve_init(data, config: ClusterConfig, default: str) -> np.ndarray:
    init = config.init if config.init is not None else default
    if isinstance(init, str):
        if init == INIT_KMEANSPP:
            return kmeanspp_seed(data, config.k, config.rng_seed)
        return random_seed(data, config.k, config.rng_seed)
    protos = np.ascontiguousarray(init, dtype=np.float64)
    if protos.ndim != 2 or protos.shape != (config.k, data.shape[1]):
        raise ValidationError(
            f"init array must have shape ({config.k}, {data.shape[1]}), got {protos.shape}"
        )
    if not np.all(np.isfinite(protos)):
        raise ValidationError("init array contains non-finite values")
    return protos.copy()


def assign_step(data, prototypes) -> np.ndarray:
    """Nearest-prototype labels; ties go to the lowest prototype index."""
    data = as_matrix(data)
    prototypes = as_matrix(prototypes, name="prototypes")
    if prototypes.shape[1] != data.shape[1]:
        raise ValidationError(
            f"prototypes have dimension {prototypes.shape[1]}, data has {data.shape[1]}"
        )
    labels, _ = backend.kernels().assign_labels(data, prototypes)
    return labels


def distance_weights(points, prototype) -> MemberWeights:
    """Weights proportional to each member's Euclidean distance from the
    prototype, normalized to sum 1. An all-coincident cluster falls back to
    uniform weights so the update stays defined."""
    points = as_matrix(points, name="points")
    prototype = as_point(prototype, dim=points.shape[1], name="prototype")
    dists = np.sqrt(np.einsum("ij,ij->i", points - prototype, points - prototype))
    total = float(dists.sum())
    if total < DEGENERATE_DIST_SUM:
        w = np.full(points.shape[0], 1.0 / points.shape[0])
    else:
        w = dists / total
    return MemberWeights(weights=w, member_indices=np.arange(points.shape[0]))


def pocs_update_step(points, prototype) -> np.ndarray:
    """One prototype update: the distance-weighted convex combination of the
    members. Equivalent to sum_i d_i x_i / sum_i d_i."""
    points = as_matrix(points, name="points")
    mw = distance_weights(points, prototype)
    return mw.weights @ points


def pocs_objective(data, labels, prototypes=None) -> float:
    """Fit objective: per cluster, sum of cubed member distances over the sum
    of member distances. Equals sum_i w_i d_i^2 under the distance weights.
    Accepts (data, model) or (data, labels, prototypes)."""
    data = as_matrix(data)
    if prototypes is None:
        model = labels
        labels, prototypes = model.assignments, model.prototypes
    prototypes = as_matrix(prototypes, name="prototypes")
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    if labels.ndim != 1 or labels.shape[0] != data.shape[0]:
        raise ValidationError(
            f"labels must be 1-d with {data.shape[0]} entries, got shape {labels.shape}"
        )
    if labels.size and (labels.min() < 0 or labels.max() >= prototypes.shape[0]):
        raise ValidationError("labels reference clusters outside the prototype range")
    return float(backend.kernels().pocs_objective(data, labels, prototypes))


def _repair_empty(prototypes, counts, data, min_sq):
    """Reseed empty clusters to the data farthest from their own prototype.

    min_sq is consumed: a datum used for one repair is zeroed so later empty
    clusters pick distinct rows. Returns True if anything changed.
    """
    empties = np.flatnonzero(counts == 0)
    if empties.size == 0:
        return False
    for j in empties:
        i = int(np.argmax(min_sq))
        prototypes[j] = data[i]
        min_sq[i] = 0.0
    return True


def _check_finite_model(prototypes, sse):
    if not (np.all(np.isfinite(prototypes)) and np.isfinite(sse)):
        raise NumericError("fit produced non-finite prototypes or error")


def pocs_fit(data, config: ClusterConfig) -> ClusterModel:
    """Alternate nearest-prototype assignment with the distance-weighted
    update. Stops when assignments repeat, when every prototype moves less
    than tol, or at max_iter. Default seeding matches the D^2 rule."""
    data = as_matrix(data)
    kern = backend.kernels()
    prototypes = _resolve_init(data, config, default=INIT_KMEANSPP)
    prev_labels = None
    labels = None
    converged = False
    iterations = 0
    stale = False
    for it in range(1, config.max_iter + 1):
        iterations = it
        labels, min_sq = kern.assign_labels(data, prototypes)
        stale = False
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            converged = True
            break
        prev_labels = labels
        new_protos = kern.pocs_update_all(data, labels, prototypes)
        counts = np.bincount(labels, minlength=config.k)
        _repair_empty(new_protos, counts, data, min_sq.copy())
        disp = float(np.max(np.sqrt(np.einsum("ij,ij->i", new_protos - prototypes, new_protos - prototypes))))
        prototypes = new_protos
        stale = True
        if disp < config.tol:
            converged = True
            break
    if stale:
        labels, _ = kern.assign_labels(data, prototypes)
    sse, _ = kern.assignment_errors(data, labels, prototypes)
    own = float(kern.pocs_objective(data, labels, prototypes))
    _check_finite_model(prototypes, sse)
    return ClusterModel(
        prototypes=prototypes,
        assignments=labels,
        sse=float(sse),
        own_objective=own,
        iterations=iterations,
        converged=converged,
    )


def kmeans_fit(data, config: ClusterConfig) -> ClusterModel:
    """Lloyd iteration: assign to the nearest prototype, recenter on the
    member mean. Stops when assignments repeat or at max_iter. Default
    seeding picks k distinct rows uniformly; pass init='kmeans++' for the
    D^2 rule."""
    data = as_matrix(data)
    kern = backend.kernels()
    prototypes = _resolve_init(data, config, default=INIT_RANDOM)
    prev_labels = None
    labels = None
    converged = False
    iterations = 0
    stale = False
    for it in range(1, config.max_iter + 1):
        iterations = it
        labels, min_sq = kern.assign_labels(data, prototypes)
        stale = False
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            converged = True
            break
        prev_labels = labels
        sums, counts = kern.centroid_sums(data, labels, config.k)
        new_protos = prototypes.copy()
        nonzero = counts > 0
        new_protos[nonzero] = sums[nonzero] / counts[nonzero, None]
        _repair_empty(new_protos, counts, data, min_sq.copy())
        prototypes = new_protos
        stale = True
    if stale:
        labels, _ = kern.assign_labels(data, prototypes)
    sse, _ = kern.assignment_errors(data, labels, prototypes)
    _check_finite_model(prototypes, sse)
    return ClusterModel(
        prototypes=prototypes,
        assignments=labels,
        sse=float(sse),
        own_objective=float(sse),
        iterations=iterations,
        converged=converged,
    )


def fcm_fit(data, config: ClusterConfig, m: float = 2.0) -> FuzzyModel:
    """Fuzzy fit: alternate membership and prototype updates until the
    largest membership change drops below tol. m > 1 is the fuzzifier."""
    data = as_matrix(data)
    if not (np.isfinite(m) and m > 1.0):
        raise ValidationError(f"fuzzifier m must be > 1, got {m}")
    kern = backend.kernels()
    prototypes = _resolve_init(data, config, default=INIT_RANDOM)
    U = kern.fcm_memberships(data, prototypes, m)
    converged = False
    iterations = 0
    for it in range(1, config.max_iter + 1):
        iterations = it
        prototypes = kern.fcm_centers(data, U, m, prototypes)
        U_new = kern.fcm_memberships(data, prototypes, m)
        delta = float(np.max(np.abs(U_new - U)))
        U = U_new
        if delta < config.tol:
            converged = True
            break
    objective = float(kern.fcm_objective(data, prototypes, U, m))
    if not (np.all(np.isfinite(prototypes)) and np.all(np.isfinite(U)) and np.isfinite(objective)):
        raise NumericError("fit produced non-finite prototypes or memberships")
    return FuzzyModel(
        prototypes=prototypes,
        memberships=U,
        fuzzifier=float(m),
        objective=objective,
        iterations=iterations,
        converged=converged,
    )


def hard_assign(fuzzy) -> np.ndarray:
    """Defuzzify by row argmax; ties go to the lowest cluster index.
    Accepts a FuzzyModel or a raw membership matrix."""
    memberships = fuzzy.memberships if isinstance(fuzzy, FuzzyModel) else fuzzy
    U = np.asarray(memberships, dtype=np.float64)
    if U.ndim != 2:
        raise ValidationError(f"memberships must be 2-d, got shape {U.shape}")
    return np.argmax(U, axis=1).astype(np.int64)
