"""Projection-based clustering with baselines, data tooling, a small dense
autoencoder, and a benchmark harness."""

from .autoencoder import (
    DEFAULT_DIMS,
    AdamState,
    AeModel,
    DenseLayer,
    TrainConfig,
    adam_step,
    embed,
    forward,
    init_model,
    load_checkpoint,
    loss_and_gradients,
    save_checkpoint,
    train,
)
from .backend import HAVE_COMPILED, active_backend, available_backends, set_backend
from .bench import (
    ALGORITHMS,
    CONDITION_INDEPENDENT,
    CONDITION_SHARED,
    BenchmarkReport,
    RunResult,
    aggregate,
    benchmark,
    build_records,
    run_once,
)
from .clustering import (
    ClusterConfig,
    ClusterModel,
    FuzzyModel,
    MemberWeights,
    assign_step,
    distance_weights,
    fcm_fit,
    hard_assign,
    kmeans_fit,
    kmeanspp_seed,
    pocs_fit,
    pocs_objective,
    pocs_update_step,
    random_seed,
)
from .data_io import (
    EmbeddingDataset,
    MixtureSpec,
    gen_mixture,
    load_csv,
    load_idx,
    read_idx,
    save_csv,
    standardize,
)
from .errors import DataFormatError, NumericError, ValidationError
from .metrics import accuracy, clustering_error, prototype_errors
from .pocs_core import (
    Ball,
    ConvexSet,
    Halfspace,
    PocsTrace,
    Singleton,
    is_convex_combination,
    parallel_pocs,
    sequential_pocs,
    validate_weights,
    weighted_sq_distance,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_DIMS",
    "AdamState",
    "AeModel",
    "DenseLayer",
    "TrainConfig",
    "adam_step",
    "embed",
    "forward",
    "init_model",
    "load_checkpoint",
    "loss_and_gradients",
    "save_checkpoint",
    "train",
    "HAVE_COMPILED",
    "active_backend",
    "available_backends",
    "set_backend",
    "ALGORITHMS",
    "CONDITION_INDEPENDENT",
    "CONDITION_SHARED",
    "BenchmarkReport",
    "RunResult",
    "aggregate",
    "benchmark",
    "build_records",
    "run_once",
    "ClusterConfig",
    "ClusterModel",
    "FuzzyModel",
    "MemberWeights",
    "assign_step",
    "distance_weights",
    "fcm_fit",
    "hard_assign",
    "kmeans_fit",
    "kmeanspp_seed",
    "pocs_fit",
    "pocs_objective",
    "pocs_update_step",
    "random_seed",
    "EmbeddingDataset",
    "MixtureSpec",
    "gen_mixture",
    "load_csv",
    "load_idx",
    "read_idx",
    "save_csv",
    "standardize",
    "DataFormatError",
    "NumericError",
    "ValidationError",
    "accuracy",
    "clustering_error",
    "prototype_errors",
    "Ball",
    "ConvexSet",
    "Halfspace",
    "PocsTrace",
    "Singleton",
    "is_convex_combination",
    "parallel_pocs",
    "sequential_pocs",
    "validate_weights",
    "weighted_sq_distance",
    "__version__",
]
