"""Compare the numba kernel, the numpy fallback, and the recursive evaluator.

Two workloads:
  * validity sweep: all ten canonical scheme instances evaluated on a
    population of seeded random frame models
  * countermodel scan: the full three-world search space for a factivity
    query

Run:  python benchmarks/bench_backends.py [--models N]
"""

import argparse
import time

from s5bke import fasteval, frames
from s5bke.kernel import scheme_examples
from s5bke.search import SearchBounds, find_countermodel, random_model
from s5bke.syntax import parse

VARS = ("x", "y")


def timed(label, fn, repeat=3):
    best = min(timeit_once(fn) for _ in range(repeat))
    print(f"  {label:<28} {best * 1000:10.1f} ms")
    return best


def timeit_once(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def bench_validity_sweep(n_models: int) -> None:
    print(f"validity sweep: 10 instances x {n_models} models")
    population = [
        random_model(seed, SearchBounds(max_worlds=4), VARS) for seed in range(n_models)
    ]
    batches = fasteval.batch_models(population, VARS)
    instances = list(scheme_examples().values())
    programs = [fasteval.compile_formula(f, VARS) for f in instances]

    def run_kernel(backend):
        def go():
            for program in programs:
                for batch in batches:
                    fasteval.eval_batch(program, batch, backend=backend)

        return go

    def run_reference():
        for f in instances:
            for km in population:
                frames.denote(km, f)

    if fasteval.HAS_NUMBA:
        run_kernel("numba")()  # JIT warmup outside the timing
        t_numba = timed("numba kernel", run_kernel("numba"))
    else:
        t_numba = None
        print("  numba unavailable; skipping")
    t_numpy = timed("numpy fallback", run_kernel("numpy"))
    t_ref = timed("recursive reference", run_reference, repeat=1)
    if t_numba:
        print(f"  speedup over reference: numba {t_ref / t_numba:6.0f}x, "
              f"numpy {t_ref / t_numpy:6.0f}x")
    else:
        print(f"  speedup over reference: numpy {t_ref / t_numpy:6.0f}x")


def bench_countermodel_scan() -> None:
    print("countermodel scan: 'K x -> x' over every frame with at most 3 worlds")
    goal = parse("K x -> x")
    bounds = SearchBounds(max_worlds=3)
    if fasteval.HAS_NUMBA:
        find_countermodel([], goal, bounds, backend="numba")  # warmup
        timed("numba kernel", lambda: find_countermodel([], goal, bounds, backend="numba"))
    timed("numpy fallback", lambda: find_countermodel([], goal, bounds, backend="numpy"))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--models", type=int, default=5000)
    args = parser.parse_args()
    bench_validity_sweep(args.models)
    print()
    bench_countermodel_scan()


if __name__ == "__main__":
    main()
