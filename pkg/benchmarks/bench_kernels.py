"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --docs 600 --replicates 10000
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from camir_eval import _kernels


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_assignment(backend, matrices) -> float:
    def run():
        for cost in matrices:
            backend.min_cost_assignment(cost)
    return run


def bench_bootstrap(backend, a, b, samples):
    return lambda: backend.bootstrap_deltas(a, b, samples)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=600, help="documents per bootstrap replicate")
    parser.add_argument("--replicates", type=int, default=10_000)
    parser.add_argument("--matrices", type=int, default=300, help="assignment problems to solve")
    parser.add_argument("--size", type=int, default=8, help="rows/columns per assignment problem")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _kernels.compiled_backend is None:
        parser.error("compiled extension is not built; reinstall with Cython available")

    rng = random.Random(args.seed)
    matrices = [[[rng.randint(-50, 0) for _ in range(args.size)] for _ in range(args.size)]
                for _ in range(args.matrices)]
    nrng = np.random.default_rng(args.seed)
    a = nrng.integers(0, 30, size=(args.docs, 3))
    b = nrng.integers(0, 30, size=(args.docs, 3))
    samples = nrng.integers(0, args.docs, size=(args.replicates, args.docs))

    backends = {"python": _kernels.python_backend, "compiled": _kernels.compiled_backend}
    rows = []
    for task, make in (
        (f"assignment {args.matrices}x({args.size}x{args.size})", lambda be: bench_assignment(be, matrices)),
        (f"bootstrap {args.replicates}x{args.docs} docs", lambda be: bench_bootstrap(be, a, b, samples)),
    ):
        t = {name: best_of(make(be), args.repeat) for name, be in backends.items()}
        rows.append((task, t["python"], t["compiled"]))

    same = np.array_equal(_kernels.python_backend.bootstrap_deltas(a, b, samples[:200]),
                          _kernels.compiled_backend.bootstrap_deltas(a, b, samples[:200]))
    print(f"{'kernel':<34}{'python s':>10}{'compiled s':>12}{'speedup':>9}")
    for task, py, c in rows:
        print(f"{task:<34}{py:>10.4f}{c:>12.4f}{py / c:>8.1f}x")
    print(f"bootstrap outputs identical across backends: {same}")


if __name__ == "__main__":
    main()
