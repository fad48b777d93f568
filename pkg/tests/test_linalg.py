import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mirs.errors import DegenerateInput, DimensionMismatch, SizeOverflow
from mirs.linalg import (
    MatrixSet,
    as_matrix,
    block_upper,
    jordan_block,
    kron,
    op_norm,
    rotation,
    spectral_radius,
)

PHI = (1 + 5 ** 0.5) / 2
finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def mats(r, c=None):
    return arrays(np.float64, (r, c or r), elements=finite)


def test_op_norm_examples():
    assert op_norm(np.eye(3)) == pytest.approx(1.0, rel=1e-12)
    assert op_norm(rotation(0.7)) == pytest.approx(1.0, rel=1e-12)
    assert op_norm([[1, 1], [0, 1]]) == pytest.approx(PHI, rel=1e-12)
    assert op_norm(np.zeros((2, 3))) == 0.0


def test_spectral_radius_examples():
    assert spectral_radius(rotation(0.7)) == pytest.approx(1.0, rel=1e-8)
    assert spectral_radius(np.diag([0.5, -2])) == pytest.approx(2.0, rel=1e-8)
    assert spectral_radius([[1, 1], [0, 1]]) == pytest.approx(1.0, rel=1e-8)
    with pytest.raises(DimensionMismatch):
        spectral_radius(np.ones((2, 3)))
    with pytest.raises(DegenerateInput):
        spectral_radius([[np.inf, 0], [0, 1]])


def test_kron_examples():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    b = np.array([[1.0, 2], [3, 4]])
    np.testing.assert_array_equal(kron([[3.0]], b), 3 * b)
    j = [[1, 1], [0, 1]]
    assert op_norm(kron(j, np.diag([2, 1]))) == pytest.approx(2 * PHI, rel=1e-12)
    with pytest.raises(SizeOverflow):
        kron(np.eye(8), np.eye(9))


def test_block_upper_examples():
    np.testing.assert_array_equal(block_upper([[1]], [[0]], [[1]]), np.eye(2))
    assert op_norm(block_upper([[2]], [[0]], [[3]])) == pytest.approx(3)
    assert 5 <= op_norm(block_upper([[1]], [[5]], [[1]])) <= 6
    with pytest.raises(DimensionMismatch):
        block_upper(np.eye(2), np.zeros((2, 2)), np.eye(3))


def test_matrices_are_readonly():
    m = as_matrix([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        m[0, 0] = 5
    with pytest.raises(DegenerateInput):
        as_matrix([[np.nan]])


def test_matrix_set_validation():
    s = MatrixSet.of([np.eye(2), 2 * np.eye(2)], claimed_jsr=1.0)
    assert s.dim == 2 and len(s) == 2 and s.labels == ("A0", "A1")
    with pytest.raises(DimensionMismatch):
        MatrixSet.of([np.eye(2), np.eye(3)])
    with pytest.raises(DegenerateInput):
        MatrixSet.of([np.eye(2), np.eye(2)], labels=["a", "a"])
    with pytest.raises(DegenerateInput):
        MatrixSet.of([])


def test_jordan_block():
    np.testing.assert_array_equal(jordan_block(2), [[1, 1], [0, 1]])


@given(mats(3), mats(3))
def test_submultiplicative(a, b):
    assert op_norm(a @ b) <= op_norm(a) * op_norm(b) * (1 + 1e-10) + 1e-300


@given(mats(2, 3))
def test_transpose_invariant(a):
    assert abs(op_norm(a) - op_norm(a.T)) <= 1e-10 * max(1.0, op_norm(a))


@given(mats(2), mats(2), mats(2), mats(2))
def test_kron_mixed_product(a, b, a2, b2):
    lhs = kron(a, b) @ kron(a2, b2)
    rhs = kron(a @ a2, b @ b2)
    scale = max(1.0, np.abs(rhs).max())
    assert np.abs(lhs - rhs).max() <= 1e-10 * scale


@given(mats(2), mats(2, 3), mats(3))
def test_block_triangular_sandwich(a, d, b):
    z = op_norm(block_upper(a, d, b))
    lo = max(op_norm(a), op_norm(b))
    slack = 1e-10 * max(1.0, z)
    assert lo - slack <= z <= lo + op_norm(d) + slack


@given(mats(3))
def test_spectral_radius_below_norm(m):
    assert spectral_radius(m) <= op_norm(m) * (1 + 1e-8) + 1e-12
