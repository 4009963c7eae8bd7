import numpy as np
import pytest

import twbiclust as tb
from twbiclust.errors import NoConvergenceError
from twbiclust.model import ResidualMatrix


def dense_oracle(x):
    """Full symmetric eigendecomposition of the materialized Gram matrix."""
    return float(np.linalg.eigvalsh(x.T @ x)[-1])


def test_identity_2x2():
    res = tb.max_eigenvalue(ResidualMatrix(np.eye(2)))
    assert res.lambda1 == pytest.approx(1.0, rel=1e-12)


def test_diagonal_squared():
    res = tb.max_eigenvalue(ResidualMatrix(np.diag([3.0, 4.0])))
    assert res.lambda1 == pytest.approx(16.0, rel=1e-10)


def test_random_50x40_matches_oracle(rng):
    x = rng.standard_normal((50, 40))
    res = tb.max_eigenvalue(ResidualMatrix(x))
    assert res.lambda1 == pytest.approx(dense_oracle(x), rel=1e-8)


def test_oracle_agreement_various_shapes(rng):
    for _ in range(30):
        n = int(rng.integers(2, 101))
        p = int(rng.integers(2, 101))
        x = rng.standard_normal((n, p))
        res = tb.max_eigenvalue(ResidualMatrix(x))
        assert res.lambda1 == pytest.approx(dense_oracle(x), rel=1e-8)


def test_eigenvector_residual_invariant(rng):
    for n, p in [(60, 80), (80, 60)]:
        x = rng.standard_normal((n, p))
        res = tb.max_eigenvalue(ResidualMatrix(x))
        assert res.v1 is not None
        assert np.linalg.norm(res.v1) == pytest.approx(1.0, abs=1e-10)
        r = np.linalg.norm(x.T @ (x @ res.v1) - res.lambda1 * res.v1)
        assert r <= 1e-10 * res.lambda1


def test_lambda_bounded_by_frobenius(rng):
    for _ in range(10):
        x = rng.standard_normal((20, 30))
        z = ResidualMatrix(x)
        assert tb.max_eigenvalue(z).lambda1 <= tb.frobenius_norm_sq(z) * (1 + 1e-12)


def test_permutation_and_transpose_invariance(rng):
    x = rng.standard_normal((25, 25))
    lam = tb.max_eigenvalue(ResidualMatrix(x)).lambda1
    perm = x[rng.permutation(25)][:, rng.permutation(25)]
    assert tb.max_eigenvalue(ResidualMatrix(perm)).lambda1 == pytest.approx(lam, rel=1e-9)
    assert tb.max_eigenvalue(ResidualMatrix(x.T)).lambda1 == pytest.approx(lam, rel=1e-9)


def test_scaling_quadratic(rng):
    x = rng.standard_normal((30, 20))
    lam = tb.max_eigenvalue(ResidualMatrix(x)).lambda1
    lam_scaled = tb.max_eigenvalue(ResidualMatrix(3.0 * x)).lambda1
    assert lam_scaled == pytest.approx(9.0 * lam, rel=1e-10)


def test_zero_matrix():
    res = tb.max_eigenvalue(ResidualMatrix(np.zeros((3, 3))))
    assert res.lambda1 == 0.0 and res.residual == 0.0


def test_no_convergence_raises(rng):
    x = rng.standard_normal((200, 180))
    with pytest.raises(NoConvergenceError):
        tb.max_eigenvalue(ResidualMatrix(x), max_iter=3)


def test_tol_validation(rng):
    x = rng.standard_normal((5, 5))
    with pytest.raises(ValueError):
        tb.max_eigenvalue(ResidualMatrix(x), tol=0.5)


def test_deterministic(rng):
    x = rng.standard_normal((40, 30))
    a = tb.max_eigenvalue(ResidualMatrix(x))
    b = tb.max_eigenvalue(ResidualMatrix(x))
    assert a.lambda1 == b.lambda1 and a.iterations == b.iterations


class TestFrobenius:
    def test_zero(self):
        assert tb.frobenius_norm_sq(ResidualMatrix(np.zeros((3, 3)))) == 0.0

    def test_direct_sum(self):
        assert tb.frobenius_norm_sq(ResidualMatrix(np.array([[1.0, 2.0], [2.0, 1.0]]))) == 10.0

    def test_standardized_matrix_equals_np(self):
        # fro^2 of standardized residuals is exactly the entry count
        a, g = tb.generate(tb.GeneratorSpec(
            kind="gaussian", b=(0.2, 0.5, 0.6, 0.7), s=(0.03, 0.04, 0.06, 0.07),
            layout=tb.LayoutSpec(3, 50, 40), seed=2))
        z = tb.standardize(a, g)
        np_total = 50 * 40
        assert abs(tb.frobenius_norm_sq(z) - np_total) <= 1e-8 * np_total
