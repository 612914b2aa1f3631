"""Convex sets, metric projections, and POCS iterations.

The building blocks here are deliberately small: a handful of convex set
types that know how to project a point onto themselves, plus the sequential
(cyclic) and parallel (weighted simultaneous) projection loops. Everything
operates on 1-d float64 points.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 1000


def as_point(x, dim=None, name="point"):
    """Coerce to a finite 1-d float64 vector, optionally of fixed length."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be 1-d, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    if dim is not None and arr.size != dim:
        raise ValidationError(f"{name} has dimension {arr.size}, expected {dim}")
    return arr


class ConvexSet(ABC):
    """A closed convex set with a metric projection."""

    @property
    @abstractmethod
    def dim(self) -> int:
        """Ambient dimension."""

    @abstractmethod
    def contains(self, x, tol: float = 1e-12) -> bool:
        """Membership test with a small numeric slack."""

    @abstractmethod
    def project(self, x) -> np.ndarray:
        """Nearest point of the set to x. Points already inside map to themselves."""


@dataclass(frozen=True)
class Singleton(ConvexSet):
    """A single point treated as a convex set."""

    point: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", as_point(self.point, name="point"))

    @property
    def dim(self) -> int:
        return self.point.size

    def contains(self, x, tol: float = 1e-12) -> bool:
        x = as_point(x, dim=self.dim, name="x")
        return float(np.linalg.norm(x - self.point)) <= tol

    def project(self, x) -> np.ndarray:
        as_point(x, dim=self.dim, name="x")
        return self.point.copy()


@dataclass(frozen=True)
class Ball(ConvexSet):
    """Closed Euclidean ball of given center and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center, name="center"))
        r = float(self.radius)
        if not np.isfinite(r) or r <= 0.0:
            raise ValidationError(f"radius must be finite and positive, got {r}")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.size

    def contains(self, x, tol: float = 1e-12) -> bool:
        x = as_point(x, dim=self.dim, name="x")
        return float(np.linalg.norm(x - self.center)) <= self.radius + tol

    def project(self, x) -> np.ndarray:
        x = as_point(x, dim=self.dim, name="x")
        gap = x - self.center
        dist = float(np.linalg.norm(gap))
        if dist <= self.radius:
            return x.copy()
        return self.center + (self.radius / dist) * gap


@dataclass(frozen=True)
class Halfspace(ConvexSet):
    """Halfspace {x : normal . x <= offset}. The normal need not be unit length."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = as_point(self.normal, name="normal")
        if float(np.linalg.norm(n)) == 0.0:
            raise ValidationError("normal must be nonzero")
        b = float(self.offset)
        if not np.isfinite(b):
            raise ValidationError(f"offset must be finite, got {b}")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", b)

    @property
    def dim(self) -> int:
        return self.normal.size

    def contains(self, x, tol: float = 1e-12) -> bool:
        x = as_point(x, dim=self.dim, name="x")
        # signed distance so the slack does not depend on the normal's scale
        signed = (float(self.normal @ x) - self.offset) / float(np.linalg.norm(self.normal))
        return signed <= tol

    def project(self, x) -> np.ndarray:
        x = as_point(x, dim=self.dim, name="x")
        viol = float(self.normal @ x) - self.offset
        if viol <= 0.0:
            return x.copy()
        return x - (viol / float(self.normal @ self.normal)) * self.normal


def is_convex_combination(x, x1, x2, tol: float = 1e-9):
    """Return lam with x ~= lam*x1 + (1-lam)*x2 and lam in [0,1], else None.

    Degenerate endpoints (x1 == x2) admit lam = 1.0 whenever x matches them.
    """
    x = as_point(x, name="x")
    x1 = as_point(x1, dim=x.size, name="x1")
    x2 = as_point(x2, dim=x.size, name="x2")
    d = x1 - x2
    dd = float(d @ d)
    if dd == 0.0:
        return 1.0 if float(np.linalg.norm(x - x1)) <= tol else None
    lam = float((x - x2) @ d) / dd
    lam = min(1.0, max(0.0, lam))
    resid = float(np.linalg.norm(x - (lam * x1 + (1.0 - lam) * x2)))
    return lam if resid <= tol else None


def validate_weights(weights, count=None):
    """Check weights are finite, nonnegative, and sum to 1 within 1e-12."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValidationError(f"weights must be a non-empty 1-d array, got shape {w.shape}")
    if count is not None and w.size != count:
        raise ValidationError(f"expected {count} weights, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("weights contain non-finite values")
    if np.any(w < 0.0):
        raise ValidationError("weights must be nonnegative")
    total = float(w.sum())
    if abs(total - 1.0) > 1e-12:
        raise ValidationError(f"weights must sum to 1, got {total!r}")
    return w


def _validate_sets(sets, dim):
    if len(sets) == 0:
        raise ValidationError("need at least one convex set")
    for i, s in enumerate(sets):
        if s.dim != dim:
            raise ValidationError(f"set {i} has dimension {s.dim}, expected {dim}")


@dataclass
class PocsTrace:
    """Iterate history of a projection run.

    iterates[0] is the starting point; each later row is the point after one
    full iteration (a cycle for the sequential method, a combined step for
    the parallel one). final_residual is the Euclidean displacement between
    the last two recorded iterates, 0 when only the start was recorded.
    """

    iterates: list = field(default_factory=list)
    converged: bool = False
    final_residual: float = 0.0

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def iterations(self) -> int:
        return len(self.iterates) - 1

    def to_csv(self) -> str:
        lines = [",".join(f"{v:.17g}" for v in it) for it in self.iterates]
        return "\n".join(lines) + "\n"


def sequential_pocs(x0, sets, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER):
    """Cyclic projections: project onto each set in order, repeat.

    The stopping rule charges a cycle with its largest single-projection
    displacement, so a limit cycle between disjoint sets keeps registering
    movement and is reported as not converged, even though its recorded
    cycle-end iterates settle down.
    """
    x = as_point(x0, name="x0")
    _validate_sets(sets, x.size)
    if max_iter < 1:
        raise ValidationError(f"max_iter must be >= 1, got {max_iter}")
    trace = PocsTrace(iterates=[x.copy()])
    for _ in range(max_iter):
        moved = 0.0
        prev = x
        for s in sets:
            x_next = s.project(x)
            moved = max(moved, float(np.linalg.norm(x_next - x)))
            x = x_next
        trace.iterates.append(x.copy())
        trace.final_residual = float(np.linalg.norm(x - prev))
        if moved < tol:
            trace.converged = True
            break
    return trace


def parallel_pocs(x0, sets, weights, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER):
    """Weighted simultaneous projections: x <- x + sum_i w_i (P_i(x) - x)."""
    x = as_point(x0, name="x0")
    _validate_sets(sets, x.size)
    w = validate_weights(weights, count=len(sets))
    if max_iter < 1:
        raise ValidationError(f"max_iter must be >= 1, got {max_iter}")
    trace = PocsTrace(iterates=[x.copy()])
    for _ in range(max_iter):
        step = np.zeros_like(x)
        for wi, s in zip(w, sets):
            step += wi * (s.project(x) - x)
        x = x + step
        trace.iterates.append(x.copy())
        trace.final_residual = float(np.linalg.norm(step))
        if trace.final_residual < tol:
            trace.converged = True
            break
    return trace


def weighted_sq_distance(x, sets, weights) -> float:
    """Objective sum_i w_i * ||x - P_i(x)||^2 driven to a minimum by the parallel method."""
    x = as_point(x, name="x")
    _validate_sets(sets, x.size)
    w = validate_weights(weights, count=len(sets))
    total = 0.0
    for wi, s in zip(w, sets):
        gap = x - s.project(x)
        total += float(wi) * float(gap @ gap)
    return total
