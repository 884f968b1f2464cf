import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kmeansmf import (
    ShapeError,
    dense,
    frobenius_norm_sq,
    matmul,
    relative_difference,
    sub,
    trace,
    transpose,
)

finite_entries = st.floats(min_value=-10.0, max_value=10.0)
small_dim = st.integers(min_value=1, max_value=5)


def square(side, seed):
    return dense(np.random.default_rng(seed).uniform(-10, 10, (side, side)))


class TestConstruction:
    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="row 0, column 1"):
            dense([[1.0, float("nan")]])

    def test_rejects_infinity(self):
        with pytest.raises(ValueError, match="non-finite"):
            dense([[float("inf")], [0.0]])

    def test_rejects_non_2d(self):
        with pytest.raises(ShapeError):
            dense([1.0, 2.0])

    def test_rejects_empty(self):
        with pytest.raises(ShapeError):
            dense(np.zeros((0, 3)))

    def test_result_is_read_only(self):
        a = dense([[1.0, 2.0]])
        with pytest.raises(ValueError):
            a[0, 0] = 9.0


class TestMatmul:
    def test_identity(self):
        a = dense([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(matmul(dense(np.eye(2)), a), a)

    def test_zero_annihilator(self):
        a = dense([[1.0, 2.0], [3.0, 4.0]])
        z = dense(np.zeros((2, 2)))
        np.testing.assert_array_equal(matmul(a, z), z)

    def test_inner_product(self):
        np.testing.assert_array_equal(
            matmul(dense([[1.0, 2.0]]), dense([[3.0], [5.0]])), [[13.0]]
        )

    def test_dimension_mismatch_reports_shapes(self):
        with pytest.raises(ShapeError, match=r"\(1, 2\).*\(3, 1\)"):
            matmul(dense([[1.0, 2.0]]), dense([[1.0], [2.0], [3.0]]))


class TestFrobenius:
    def test_hand_value(self):
        assert frobenius_norm_sq(dense([[1.0, 2.0], [3.0, 4.0]])) == 30.0

    def test_zero_matrix(self):
        assert frobenius_norm_sq(dense(np.zeros((3, 2)))) == 0.0

    def test_identity(self):
        assert frobenius_norm_sq(dense(np.eye(3))) == 3.0


class TestTrace:
    def test_identity(self):
        assert trace(dense(np.eye(4))) == 4.0

    def test_hand_value(self):
        assert trace(dense([[2.0, 9.0], [7.0, 5.0]])) == 7.0

    def test_zero(self):
        assert trace(dense([[0.0]])) == 0.0

    def test_non_square_fails(self):
        with pytest.raises(ShapeError, match="square"):
            trace(dense([[1.0, 2.0]]))


class TestTransposeSub:
    def test_hand_transpose(self):
        np.testing.assert_array_equal(
            transpose(dense([[1.0, 2.0], [3.0, 4.0]])), [[1.0, 3.0], [2.0, 4.0]]
        )

    def test_involution(self):
        a = square(4, seed=3)
        np.testing.assert_array_equal(transpose(transpose(a)), a)

    def test_column_becomes_row(self):
        np.testing.assert_array_equal(
            transpose(dense([[1.0], [2.0], [3.0]])), [[1.0, 2.0, 3.0]]
        )

    def test_self_cancellation(self):
        a = square(3, seed=5)
        np.testing.assert_array_equal(sub(a, a), np.zeros((3, 3)))

    def test_subtract_zero(self):
        a = square(3, seed=7)
        np.testing.assert_array_equal(sub(a, dense(np.zeros((3, 3)))), a)

    def test_scalar_case(self):
        np.testing.assert_array_equal(sub(dense([[3.0]]), dense([[1.0]])), [[2.0]])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            sub(dense([[1.0]]), dense([[1.0, 2.0]]))


@settings(max_examples=100, deadline=None)
@given(
    rows=small_dim,
    cols=small_dim,
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_norm_equals_trace_of_gram(rows, cols, seed):
    a = dense(np.random.default_rng(seed).uniform(-10, 10, (rows, cols)))
    norm = frobenius_norm_sq(a)
    via_trace = trace(matmul(transpose(a), a))
    assert abs(norm - via_trace) <= 1e-12 * (1.0 + norm)


@settings(max_examples=100, deadline=None)
@given(
    p=small_dim,
    q=small_dim,
    r=small_dim,
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_trace_is_cyclic(p, q, r, seed):
    rng = np.random.default_rng(seed)
    a = dense(rng.uniform(-10, 10, (p, q)))
    b = dense(rng.uniform(-10, 10, (q, r)))
    c = dense(rng.uniform(-10, 10, (r, p)))
    lhs = trace(matmul(a, matmul(b, c)))
    rhs = trace(matmul(c, matmul(a, b)))
    assert relative_difference(lhs, rhs) < 1e-10


@settings(max_examples=100, deadline=None)
@given(
    p=small_dim,
    q=small_dim,
    r=small_dim,
    s=small_dim,
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_matmul_is_associative(p, q, r, s, seed):
    rng = np.random.default_rng(seed)
    a = dense(rng.uniform(-10, 10, (p, q)))
    b = dense(rng.uniform(-10, 10, (q, r)))
    c = dense(rng.uniform(-10, 10, (r, s)))
    left = matmul(matmul(a, b), c)
    right = matmul(a, matmul(b, c))
    scale = 1.0 + float(np.max(np.abs(left)))
    assert float(np.max(np.abs(left - right))) <= 1e-10 * scale


def test_relative_difference_is_scaled():
    assert relative_difference(1.0, 1.0) == 0.0
    assert relative_difference(0.0, 1e-12) == pytest.approx(1e-12)
    assert relative_difference(1e6, 1e6 * (1 + 1e-12)) < 1e-11
