import numpy as np
import pytest

from blocklab import ConvergenceError, SymmetryError, jacobi_eigh


def residual_ok(a, values, vectors):
    bound = 1e-8 * (1.0 + np.linalg.norm(a))
    return float(np.max(np.abs(a @ vectors - vectors * values[None, :]))) <= bound


def test_two_by_two():
    values, vectors = jacobi_eigh(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(values, [3.0, 1.0], atol=1e-12)
    expected = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    for i in range(2):
        v = vectors[:, i]
        assert np.allclose(v, expected[:, i], atol=1e-12) or np.allclose(
            v, -expected[:, i], atol=1e-12
        )


def test_identity():
    values, vectors = jacobi_eigh(np.eye(5))
    assert np.allclose(values, np.ones(5))
    assert np.allclose(vectors @ vectors.T, np.eye(5), atol=1e-12)


def test_diagonal_sorted_descending():
    values, _ = jacobi_eigh(np.diag([5.0, 2.0, 9.0]))
    assert values.tolist() == [9.0, 5.0, 2.0]


def test_zero_matrix():
    values, vectors = jacobi_eigh(np.zeros((4, 4)))
    assert not values.any()
    assert np.array_equal(vectors, np.eye(4))


def test_one_by_one():
    values, vectors = jacobi_eigh(np.array([[3.5]]))
    assert values.tolist() == [3.5]
    assert vectors.tolist() == [[1.0]]


def test_rejects_asymmetric():
    with pytest.raises(SymmetryError):
        jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(SymmetryError):
        jacobi_eigh(np.zeros((2, 3)))


def test_sweep_cap_raises_with_residual():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    with pytest.raises(ConvergenceError) as info:
        jacobi_eigh(a, max_sweeps=0)
    assert info.value.residual > 0.0


@pytest.mark.parametrize("d", [2, 3, 5, 8, 16, 33, 64])
def test_random_symmetric_residuals(d):
    rng = np.random.default_rng(d)
    m = rng.standard_normal((d, d))
    a = (m + m.T) / 2.0
    values, vectors = jacobi_eigh(a)
    assert residual_ok(a, values, vectors)
    assert np.max(np.abs(vectors @ vectors.T - np.eye(d))) <= 1e-9
    assert np.all(np.diff(values) <= 1e-12)
    # independent check of the spectrum against LAPACK
    expected = np.sort(np.linalg.eigvalsh(a))[::-1]
    assert np.allclose(values, expected, atol=1e-8 * (1.0 + np.linalg.norm(a)))


def test_blocked_path_above_cutoff():
    d = 160  # exercises the block-cyclic schedule
    rng = np.random.default_rng(99)
    x = rng.standard_normal((64, d))
    a = (x.T @ x) / 64.0
    a = (a + a.T) / 2.0
    values, vectors = jacobi_eigh(a)
    assert residual_ok(a, values, vectors)
    assert np.max(np.abs(vectors @ vectors.T - np.eye(d))) <= 1e-9
    expected = np.sort(np.linalg.eigvalsh(a))[::-1]
    assert np.allclose(values, expected, atol=1e-8 * (1.0 + np.linalg.norm(a)))


def test_deterministic():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((40, 40))
    a = (m + m.T) / 2.0
    v1, w1 = jacobi_eigh(a)
    v2, w2 = jacobi_eigh(a)
    assert np.array_equal(v1, v2)
    assert np.array_equal(w1, w2)
