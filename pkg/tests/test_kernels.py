import itertools
import random

import numpy as np
import pytest

from camir_eval import _kernels
from oracles import f1

BACKENDS = [_kernels.python_backend] + ([_kernels.compiled_backend] if _kernels.compiled_backend else [])


def brute_assignment_cost(cost):
    n, m = len(cost), len(cost[0])
    return min(sum(cost[i][c] for i, c in enumerate(cols)) for cols in itertools.permutations(range(m), n))


@pytest.mark.parametrize("kernel", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def test_assignment_optimal(kernel):
    rng = random.Random(2)
    for _ in range(300):
        n = rng.randint(1, 5)
        m = rng.randint(n, 6)
        cost = [[rng.randint(-20, 20) for _ in range(m)] for _ in range(n)]
        cols = list(kernel.min_cost_assignment(cost))
        assert len(cols) == n and len(set(cols)) == n
        assert sum(cost[i][c] for i, c in enumerate(cols)) == brute_assignment_cost(cost)


@pytest.mark.parametrize("kernel", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def test_bootstrap_deltas_against_direct_sum(kernel):
    rng = np.random.default_rng(0)
    a = rng.integers(0, 6, size=(7, 3))
    b = rng.integers(0, 6, size=(7, 3))
    a[0] = 0
    b[0] = 0
    samples = rng.integers(0, 7, size=(50, 7))
    samples[0] = 0  # only the all-zero document: F1 is 1 on both sides
    got = kernel.bootstrap_deltas(a, b, samples)
    for row, idx in zip(got, samples):
        want = f1(*a[idx].sum(axis=0)) - f1(*b[idx].sum(axis=0))
        assert row == pytest.approx(want, abs=1e-12)


def test_backends_agree():
    if _kernels.compiled_backend is None:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(1)
    a, b = rng.integers(0, 9, size=(20, 3)), rng.integers(0, 9, size=(20, 3))
    s = rng.integers(0, 20, size=(200, 20))
    np.testing.assert_array_equal(_kernels.compiled_backend.bootstrap_deltas(a, b, s),
                                  _kernels.python_backend.bootstrap_deltas(a, b, s))
