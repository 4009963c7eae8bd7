import os

import numpy as np
import pytest

import twbiclust as tb


def jobs() -> int:
    return min(2, os.cpu_count() or 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def planted_block_matrix(n, p, rows, cols, value, noise, seed):
    """Background-zero matrix with one planted constant block plus noise."""
    gen = np.random.default_rng(seed)
    x = noise * gen.standard_normal((n, p))
    x[np.ix_(rows, cols)] += value
    return tb.ObservedMatrix(x)


def rand_index(g1: np.ndarray, g2: np.ndarray) -> float:
    """Rand index between two entry-level partitions (label-permutation safe)."""
    a = np.asarray(g1).ravel()
    b = np.asarray(g2).ravel()
    if a.shape != b.shape:
        raise ValueError("partitions must have matching size")
    n = a.size
    k1, k2 = int(a.max()) + 1, int(b.max()) + 1
    cont = np.zeros((k1, k2), dtype=np.int64)
    np.add.at(cont, (a, b), 1)
    comb = lambda x: x * (x - 1) // 2
    sum_cells = comb(cont).sum()
    sum_rows = comb(cont.sum(axis=1)).sum()
    sum_cols = comb(cont.sum(axis=0)).sum()
    total = comb(np.int64(n))
    return float((total + 2 * sum_cells - sum_rows - sum_cols) / total)
