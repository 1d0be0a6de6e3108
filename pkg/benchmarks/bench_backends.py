"""Timing comparison of the compiled extension against the NumPy fallback.

Runs the three hot kernels (product-SE Gram assembly, elementwise chain
recurrences, re-orthogonalized small-matrix products) through both
implementations in one process and prints a table with the speedups.
Verifies agreement before timing so a broken build cannot post numbers.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import time

import numpy as np

from deep_prior_lab import _purepy

try:
    from deep_prior_lab import _fastcore
except ImportError:
    _fastcore = None


def best_of(repeat, fn, *args, **kwargs):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args, **kwargs)
        times.append(time.perf_counter() - t0)
    return min(times)


def make_cases(rng, threads):
    # The compiled kernels take an explicit thread count; the comparison
    # here is pinned to one thread so it measures the code, not OpenMP.
    cases = []
    for n in (512, 2048):
        pts = rng.uniform(-3.0, 3.0, (n, 2))
        ls = np.array([0.7, 1.3])
        cases.append((f"gram N={n}", "gram_product_se",
                      (pts, ls, 1.0), (pts, ls, 1.0, threads)))
    # Two chain regimes: kernel evaluation hits the recurrence pointwise
    # (call overhead rules, the compiled loop wins big), while bulk
    # arrays favor NumPy's vectorized exp. Both are reported.
    one = np.array([np.exp(-0.5)])
    cases.append(("se chain 1 x 16384", "se_chain",
                  (one, 16384), (one, 16384, threads)))
    values = np.exp(-0.5 * rng.uniform(0.0, 9.0, 40_000))
    cases.append(("se chain 40k x 500", "se_chain",
                  (values, 500), (values, 500, threads)))
    sq = rng.uniform(0.0, 9.0, 40_000)
    cases.append(("connected chain 40k x 500", "se_chain_connected",
                  (values, sq, 500), (values, sq, 500, threads)))
    factors = rng.standard_normal((2000, 5, 5)) / np.sqrt(5.0)
    cases.append(("reorth product D=5 L=2000", "reorth_product",
                  (factors,), (factors, 10)))
    return cases


def check_agreement(name, a, b):
    if isinstance(a, tuple):
        for x, y in zip(a, b):
            check_agreement(name, x, y)
        return
    if not np.allclose(a, b, rtol=1e-12, atol=1e-12):
        raise SystemExit(f"backend mismatch on {name}; not timing a wrong answer")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repeats per case, best is reported")
    args = parser.parse_args()

    if _fastcore is None:
        raise SystemExit("compiled extension not importable; build it first "
                         "(pip install -e . --no-build-isolation)")

    cases = make_cases(np.random.default_rng(42), threads=1)
    print(f"{'case':<28} {'python':>10} {'cython':>10} {'speedup':>8}")
    for label, fn_name, pure_args, fast_args in cases:
        pure_fn = getattr(_purepy, fn_name)
        fast_fn = getattr(_fastcore, fn_name)
        check_agreement(label, pure_fn(*pure_args), fast_fn(*fast_args))
        t_pure = best_of(args.repeat, pure_fn, *pure_args)
        t_fast = best_of(args.repeat, fast_fn, *fast_args)
        print(f"{label:<28} {t_pure * 1e3:>8.2f}ms {t_fast * 1e3:>8.2f}ms "
              f"{t_pure / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
