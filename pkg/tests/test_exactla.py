"""Exact linear algebra against a sympy oracle and by hand."""

import random

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from eimod.exactla import (
    ExactMatrix,
    Q,
    block_diag,
    hstack,
    kernel_of_rows,
    solve,
    vstack,
)


def _mat(rows):
    return ExactMatrix.from_rows([[Q(x) for x in r] for r in rows])


def _to_sympy(m):
    return sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(str(m[i, j])))


small = st.integers(min_value=-4, max_value=4)


def matrices(max_dim=5):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def test_identity_and_matmul():
    a = _mat([[1, 2], [3, 4]])
    assert ExactMatrix.identity(2) @ a == a
    assert a @ ExactMatrix.identity(2) == a
    b = _mat([[0, 1], [1, 0]])
    assert a @ b == _mat([[2, 1], [4, 3]])


def test_rank_and_kernel_by_hand():
    a = _mat([[1, 2, 3], [2, 4, 6]])
    assert a.rank() == 1
    k = a.kernel_basis()
    assert k.cols == 2
    assert (a @ k).is_zero()


def test_inverse_by_hand():
    a = _mat([[2, 1], [1, 1]])
    assert a.is_invertible()
    assert a.inverse() @ a == ExactMatrix.identity(2)


def test_solve_consistent_and_inconsistent():
    a = _mat([[1, 0], [0, 0]])
    sol = solve(a, _mat([[3], [0]]))
    assert sol is not None
    assert a @ sol.particular == _mat([[3], [0]])
    assert solve(a, _mat([[0], [1]])) is None


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_matches_sympy(rows):
    a = _mat(rows)
    assert a.rank() == _to_sympy(a).rank()


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_matches_sympy(rows):
    a = _mat(rows)
    k = a.kernel_basis()
    assert (a @ k).is_zero()
    assert k.rank() == k.cols  # columns independent
    assert k.cols == a.cols - _to_sympy(a).rank()


@given(matrices())
@settings(max_examples=40, deadline=None)
def test_rref_is_projection_invariant(rows):
    a = _mat(rows)
    r, pivots = a.rref()
    assert len(pivots) == a.rank()
    ref, spivots = _to_sympy(a).rref()
    assert list(spivots) == pivots
    assert ref == _to_sympy(r)


@given(matrices(max_dim=4), matrices(max_dim=4))
@settings(max_examples=40, deadline=None)
def test_solve_agrees_with_membership(rows_a, rows_b):
    a = _mat(rows_a)
    if len(rows_b[0]) != 1:
        rows_b = [[r[0]] for r in rows_b]
    if len(rows_b) != a.rows:
        rows_b = (rows_b * a.rows)[: a.rows]
    b = _mat(rows_b)
    sol = solve(a, b)
    sa, sb = _to_sympy(a), _to_sympy(b)
    solvable = sa.rank() == sa.row_join(sb).rank()
    assert (sol is not None) == solvable
    if sol is not None:
        assert a @ sol.particular == b


def test_kernel_of_rows_dense_sparse_agree():
    rng = random.Random(5)
    for _ in range(30):
        nrows = rng.randint(1, 6)
        ncols = rng.randint(1, 6)
        dense = [[Q(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(nrows)]
        sparse = [
            {j: v for j, v in enumerate(row) if v != 0} for row in dense
        ]
        kd, rd, fd = kernel_of_rows(dense, ncols)
        ks, rs, fs = kernel_of_rows(sparse, ncols)
        assert kd == ks and rd == rs and fd == fs


def test_kernel_of_rows_is_canonical_under_row_order():
    rows = [[Q(1), Q(2), Q(0)], [Q(0), Q(1), Q(1)], [Q(1), Q(3), Q(1)]]
    k1, r1, f1 = kernel_of_rows(rows, 3)
    k2, r2, f2 = kernel_of_rows(rows[::-1], 3)
    assert k1 == k2 and r1 == r2 and f1 == f2
    # each kernel column has a 1 at its own free coordinate
    for t, c in enumerate(f1):
        assert k1[c, t] == Q(1)


def test_kernel_of_rows_empty_and_zero():
    k, rank, free = kernel_of_rows([], 3)
    assert rank == 0 and free == [0, 1, 2]
    assert k == ExactMatrix.identity(3)
    k, rank, free = kernel_of_rows([{}, {}], 2)
    assert rank == 0 and k == ExactMatrix.identity(2)


def test_stack_helpers():
    a = _mat([[1]])
    b = _mat([[2]])
    assert hstack([a, b]) == _mat([[1, 2]])
    assert vstack([a, b]) == _mat([[1], [2]])
    assert block_diag([a, b]) == _mat([[1, 0], [0, 2]])


def test_string_roundtrip():
    a = _mat([[1, -2], [3, 4]]).scale(Q(1) / Q(3))
    back = ExactMatrix.from_strings(a.rows, a.cols, a.to_strings())
    assert back == a
