"""Command line front end.

Subcommands: gen (synthetic mixture to CSV), cluster (single fit),
bench (repeated comparison), train-ae (autoencoder training + embeddings).

Exit codes: 0 success, 2 bad arguments or configuration, 3 unreadable or
malformed data, 4 numeric failure.
"""

import argparse
import os
import sys

from . import backend
from .autoencoder import TrainConfig, embed, init_model, save_checkpoint, train
from .bench import (
    ALGORITHMS,
    CONDITION_INDEPENDENT,
    CONDITION_SHARED,
    BenchmarkReport,
    benchmark,
    build_records,
    run_once,
)
from .clustering import ClusterConfig, hard_assign
from .data_io import (
    EmbeddingDataset,
    MixtureSpec,
    gen_mixture,
    load_csv,
    load_idx,
    save_csv,
    standardize,
)
from .errors import DataFormatError, NumericError, ValidationError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _add_common(p):
    p.add_argument("--seed", type=int, default=None, help="rng seed")
    p.add_argument("--out-dir", default=".", help="directory for output files")
    p.add_argument(
        "--format",
        choices=("table", "csv"),
        default="table",
        help="report format (used by bench)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pocsclust",
        description="projection-based clustering, baselines, and a benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a Gaussian mixture CSV")
    _add_common(p)
    p.add_argument("--clusters", type=int, required=True, help="number of clusters")
    p.add_argument("--dim", type=int, required=True, help="dimensionality")
    p.add_argument("--points-per-cluster", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0, help="cluster spread")
    p.add_argument("--center-low", type=float, default=0.0)
    p.add_argument("--center-high", type=float, default=20.0)
    p.add_argument("--out", default=None, help="output csv path (default: auto name in --out-dir)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cluster", help="fit one algorithm to one dataset")
    _add_common(p)
    p.add_argument("--data", required=True, help="input csv")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=300)
    p.add_argument("--fuzzifier", type=float, default=2.0, help="fcm only")
    p.add_argument("--standardize", action="store_true", help="z-score columns first")
    p.add_argument("--backend", choices=("compiled", "numpy"), default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("bench", help="repeated-run comparison over datasets")
    _add_common(p)
    p.add_argument("--data", required=True, nargs="+", help="input csv files")
    p.add_argument(
        "--algos",
        default=",".join(ALGORITHMS),
        help="comma-separated subset of: " + ",".join(ALGORITHMS),
    )
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument(
        "--condition",
        choices=(CONDITION_SHARED, CONDITION_INDEPENDENT),
        default=CONDITION_INDEPENDENT,
    )
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=300)
    p.add_argument("--fuzzifier", type=float, default=2.0)
    p.add_argument("--reuse-first-init", action="store_true",
                   help="freeze the repetition-0 shared seeding for all repetitions")
    p.add_argument("--no-time", action="store_true", help="omit timing from the report")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--backend", choices=("compiled", "numpy"), default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("train-ae", help="train the autoencoder and export embeddings")
    _add_common(p)
    p.add_argument("--mnist-images", required=True, help="idx image file")
    p.add_argument("--mnist-labels", default=None, help="idx label file")
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch", type=int, default=256)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--subset", type=int, default=None, help="use only the first N rows")
    p.add_argument("--out-model", default=None, help="checkpoint path")
    p.add_argument("--out-embeddings", default=None, help="embedding csv path")
    p.set_defaults(func=cmd_train_ae)

    return parser


def cmd_gen(args) -> int:
    spec = MixtureSpec(
        k=args.clusters,
        dim=args.dim,
        points_per_cluster=args.points_per_cluster,
        sigma=args.sigma,
        center_low=args.center_low,
        center_high=args.center_high,
        seed=args.seed,
    )
    ds = gen_mixture(spec)
    out = args.out
    if out is None:
        out = os.path.join(args.out_dir, f"{ds.name}.csv")
    save_csv(out, ds)
    print(f"wrote {out} n={ds.n} dim={ds.dim} k={spec.k}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    if args.backend:
        backend.set_backend(args.backend)
    ds = load_csv(args.data)
    if args.standardize:
        ds = standardize(ds)
    config = ClusterConfig(
        k=args.k, max_iter=args.max_iter, tol=args.tol, rng_seed=args.seed
    )
    res, model = run_once(
        args.algo,
        ds.features,
        config,
        true_labels=ds.labels,
        fuzzifier=args.fuzzifier,
        return_model=True,
    )
    if args.algo == "fcm":
        assignments = hard_assign(model.memberships)
    else:
        assignments = model.assignments
    os.makedirs(args.out_dir, exist_ok=True)
    proto_path = os.path.join(args.out_dir, "prototypes.csv")
    assign_path = os.path.join(args.out_dir, "assignments.csv")
    save_csv(proto_path, EmbeddingDataset(model.prototypes, None, name="prototypes"))
    with open(assign_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("assignment\n")
        for v in assignments:
            fh.write(f"{int(v)}\n")
    parts = [
        f"algo={res.algorithm}",
        f"k={args.k}",
        f"sse={res.error_sse:.6f}",
        f"sumdist={res.error_sum_dist:.6f}",
        f"objective={res.own_objective:.6f}",
        f"iterations={res.iterations}",
        f"converged={res.converged}",
        f"time_ms={res.elapsed_ms:.3f}",
    ]
    if res.accuracy_pct is not None:
        parts.append(f"accuracy={res.accuracy_pct:.2f}")
    print(" ".join(parts))
    print(f"wrote {proto_path} and {assign_path}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.backend:
        backend.set_backend(args.backend)
    algos = tuple(a.strip() for a in args.algos.split(",") if a.strip())
    if not algos:
        raise ValidationError("no algorithms given")
    report = BenchmarkReport()
    base = ClusterConfig(
        k=args.k, max_iter=args.max_iter, tol=args.tol, rng_seed=args.seed
    )
    for path in args.data:
        ds = load_csv(path)
        log = None
        if args.condition == CONDITION_SHARED:
            log = lambda msg, _p=path: print(f"[{_p}] {msg}", file=sys.stderr)
        results = benchmark(
            ds.features,
            base,
            algorithms=algos,
            repetitions=args.reps,
            condition=args.condition,
            true_labels=ds.labels,
            fuzzifier=args.fuzzifier,
            reuse_first_init=args.reuse_first_init,
            log=log,
        )
        report.extend(build_records(ds.name, args.condition, results))
    include_time = not args.no_time
    text = report.to_table(include_time) if args.format == "table" else report.to_csv(include_time)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_train_ae(args) -> int:
    ds = load_idx(args.mnist_images, args.mnist_labels)
    if args.subset is not None:
        if args.subset < 1 or args.subset > ds.n:
            raise ValidationError(f"--subset must be in [1, {ds.n}], got {args.subset}")
        ds = EmbeddingDataset(
            ds.features[: args.subset].copy(),
            None if ds.labels is None else ds.labels[: args.subset].copy(),
            name=ds.name,
        )
    config = TrainConfig(epochs=args.epochs, batch_size=args.batch, rng_seed=args.seed)
    model = init_model(seed=args.seed)
    model, curve = train(model, ds, config, lr=args.lr)
    for i, loss in enumerate(curve):
        print(f"epoch {i + 1}/{len(curve)} loss={loss:.6f}")
    os.makedirs(args.out_dir, exist_ok=True)
    out_model = args.out_model or os.path.join(args.out_dir, "ae-model.bin")
    save_checkpoint(out_model, model)
    out_emb = args.out_embeddings or os.path.join(args.out_dir, f"{ds.name}-embeddings.csv")
    emb = embed(model, ds)
    save_csv(out_emb, emb)
    print(
        f"trained epochs={config.epochs} final_loss={curve[-1]:.6f} "
        f"params={model.param_count} wrote {out_model} {out_emb}"
    )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
