"""Compare the compiled kernel backend against the numpy fallback.

Times the individual kernels and two full fits on a synthetic mixture, then
reports per-kernel speedups and the largest numeric deviation between the
backends. Run as: python benchmarks/bench_backends.py [--n 20000] [--d 32] [--k 10]
"""

import argparse
import time

import numpy as np

from pocsclust import ClusterConfig, MixtureSpec, gen_mixture, kmeanspp_seed
from pocsclust import backend
from pocsclust.clustering import kmeans_fit, pocs_fit


def time_call(fn, *args, repeats=5):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def max_dev(a, b):
    if isinstance(a, tuple):
        return max(max_dev(x, y) for x, y in zip(a, b))
    return float(np.max(np.abs(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64))))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--d", type=int, default=32)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if not backend.HAVE_COMPILED:
        print("compiled backend not installed; nothing to compare")
        return

    ppc = max(1, args.n // args.k)
    ds = gen_mixture(
        MixtureSpec(k=args.k, dim=args.d, points_per_cluster=ppc, sigma=2.0, seed=args.seed)
    )
    X = ds.features
    n = X.shape[0]
    C = kmeanspp_seed(X, args.k, seed=args.seed)
    labels, _ = backend.kernels().assign_labels(X, C)
    U0 = np.abs(np.random.default_rng(args.seed).standard_normal((n, args.k)))
    U0 /= U0.sum(axis=1, keepdims=True)

    from pocsclust import _kernels_cy, _kernels_np

    kernel_cases = [
        ("assign_labels", lambda k: k.assign_labels(X, C)),
        ("pocs_update_all", lambda k: k.pocs_update_all(X, labels, C)),
        ("pocs_objective", lambda k: k.pocs_objective(X, labels, C)),
        ("assignment_errors", lambda k: k.assignment_errors(X, labels, C)),
        ("centroid_sums", lambda k: k.centroid_sums(X, labels, args.k)),
        ("fcm_memberships", lambda k: k.fcm_memberships(X, C, 2.0)),
        ("fcm_centers", lambda k: k.fcm_centers(X, U0, 2.0, C)),
        ("fcm_objective", lambda k: k.fcm_objective(X, C, U0, 2.0)),
    ]

    print(f"n={n} d={args.d} k={args.k}")
    print(f"{'kernel':<20} {'numpy ms':>10} {'compiled ms':>12} {'speedup':>8} {'max dev':>10}")
    for name, fn in kernel_cases:
        t_np, out_np = time_call(fn, _kernels_np)
        t_cy, out_cy = time_call(fn, _kernels_cy)
        dev = max_dev(out_np, out_cy)
        print(f"{name:<20} {t_np * 1e3:>10.3f} {t_cy * 1e3:>12.3f} {t_np / t_cy:>8.2f} {dev:>10.2e}")

    cfg = ClusterConfig(k=args.k, rng_seed=args.seed, init=C)
    for fit_name, fit in (("pocs_fit", pocs_fit), ("kmeans_fit", kmeans_fit)):
        backend.set_backend("numpy")
        t_np, m_np = time_call(fit, X, cfg, repeats=3)
        backend.set_backend("compiled")
        t_cy, m_cy = time_call(fit, X, cfg, repeats=3)
        dev = max_dev(m_np.prototypes, m_cy.prototypes)
        print(
            f"{fit_name:<20} {t_np * 1e3:>10.3f} {t_cy * 1e3:>12.3f} "
            f"{t_np / t_cy:>8.2f} {dev:>10.2e}  (iters {m_np.iterations}/{m_cy.iterations})"
        )


if __name__ == "__main__":
    main()
