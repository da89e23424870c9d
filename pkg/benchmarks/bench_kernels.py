"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the three hot operations behind the minimax search (risk curves,
discrete-prior Bayes tables, discrete-prior Bayes risk) plus the composite
objective evaluated inside the least-favorable-prior inner optimizer.

Run from the repository root:

    python benchmarks/bench_kernels.py [--repeats 200]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from bhatbayes._kernels import _pure
from bhatbayes.specfun import log_binomial_row

try:
    from bhatbayes._kernels import _speedups
except ImportError:
    _speedups = None


def time_call(fn, repeats: int) -> float:
    fn()  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def build_cases():
    n_trials = 10
    log_binom = log_binomial_row(n_trials)
    grid = np.linspace(0.0, 1.0, 2001)
    rng = np.random.default_rng(0)
    est0 = np.sort(rng.uniform(0.0, 1.0, n_trials + 1))
    support = np.sort(rng.uniform(0.01, 0.99, 8))
    weights = rng.dirichlet(np.ones(8))

    def cases_for(impl):
        table = impl.discrete_bayes_table(support, weights, n_trials, 2)

        def objective():
            est = impl.discrete_bayes_table(support, weights, n_trials, 2)
            return impl.discrete_bayes_risk(support, weights, est, log_binom, 2)

        return {
            "risk_curve (2001 pts, N=10)": lambda: impl.risk_curve(est0, grid, log_binom, 2),
            "discrete_bayes_table (M=8, N=10)": lambda: impl.discrete_bayes_table(
                support, weights, n_trials, 2
            ),
            "discrete_bayes_risk (M=8, N=10)": lambda: impl.discrete_bayes_risk(
                support, weights, table, log_binom, 2
            ),
            "lfp inner objective (table+risk)": objective,
        }

    return cases_for


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    cases_for = build_cases()
    pure_cases = cases_for(_pure)
    compiled_cases = cases_for(_speedups) if _speedups is not None else None

    name_width = max(len(name) for name in pure_cases)
    header = f"{'kernel':<{name_width}}  {'pure':>12}  {'compiled':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, pure_fn in pure_cases.items():
        pure_t = time_call(pure_fn, args.repeats)
        if compiled_cases is None:
            print(f"{name:<{name_width}}  {pure_t * 1e6:>10.1f}us  {'n/a':>12}  {'n/a':>8}")
            continue
        comp_t = time_call(compiled_cases[name], args.repeats)
        print(
            f"{name:<{name_width}}  {pure_t * 1e6:>10.1f}us  {comp_t * 1e6:>10.1f}us  "
            f"{pure_t / comp_t:>7.1f}x"
        )
    if compiled_cases is None:
        print("\ncompiled extension not available; showing pure lane only")


if __name__ == "__main__":
    main()
