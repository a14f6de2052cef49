import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermsub.exact_linalg import (
    MatrixF, matmul, nullspace, pack_bits, rank, rank_gf2_packed, rref_rank, row_space_equal,
    stack, unpack_bits,
)
from hermsub.ff_tower import FieldError, gf


def rand_matrix(F, rows, cols, rng, density=1.0):
    A = rng.integers(0, F.order, size=(rows, cols))
    if density < 1.0:
        A[rng.random((rows, cols)) > density] = 0
    return MatrixF(F, A)


def naive_rank(F, A):
    """Textbook elimination on Python lists using scalar field ops only."""
    A = [list(map(int, row)) for row in A]
    rk, cols = 0, len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(rk, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        inv = F.e_inv(A[rk][c])
        A[rk] = [F.e_mul(inv, v) for v in A[rk]]
        for i in range(len(A)):
            if i != rk and A[i][c]:
                f = A[i][c]
                A[i] = [F.e_sub(a, F.e_mul(f, b)) for a, b in zip(A[i], A[rk])]
        rk += 1
    return rk


def test_identity_and_zero_rank():
    assert rank(MatrixF.identity(gf(3), 5)) == 5
    assert rank(MatrixF.zeros(gf(3), 4, 7)) == 0


def test_rank_matches_transpose_and_naive_f9():
    F, rng = gf(9), np.random.default_rng(0)
    for _ in range(50):
        A = rand_matrix(F, 20, 30, rng, density=rng.uniform(0.05, 1.0))
        r = rank(A)
        assert r == rank(A.T) == naive_rank(F, A.data)


def test_nullspace_trivial_cases():
    F = gf(5)
    assert nullspace(MatrixF.identity(F, 6)).rows == 0
    N = nullspace(MatrixF.zeros(F, 3, 6))
    assert N.rows == 6 and rank(N) == 6


def test_rank_nullity_f4():
    F, rng = gf(4), np.random.default_rng(1)
    for _ in range(50):
        rows, cols = rng.integers(1, 15, size=2)
        A = rand_matrix(F, rows, cols, rng, density=rng.uniform(0.1, 1.0))
        N = nullspace(A)
        assert N.rows == A.cols - rank(A)
        assert rank(N) == N.rows
        assert not matmul(A, N.T).data.any()


def test_row_space_equal_examples():
    F, rng = gf(7), np.random.default_rng(2)
    A = rand_matrix(F, 6, 10, rng)
    perm = rng.permutation(6)
    scale = rng.integers(1, 7, size=6)
    B = MatrixF(F, F.mul[scale[:, None], A.data[perm]])
    assert row_space_equal(A, B)
    assert not row_space_equal(MatrixF.identity(F, 2), MatrixF.zeros(F, 2, 2))
    with pytest.raises(ValueError):
        row_space_equal(A, MatrixF.zeros(F, 2, 3))


def test_double_dual_f5():
    F, rng = gf(5), np.random.default_rng(3)
    for _ in range(10):
        A = rand_matrix(F, 10, 20, rng, density=0.5)
        assert row_space_equal(A, nullspace(nullspace(A)))


def test_rref_idempotent():
    rng = np.random.default_rng(4)
    for order in (2, 3, 4, 16, 49):
        F = gf(order)
        R, r, piv = rref_rank(rand_matrix(F, 12, 17, rng, density=0.4))
        R2, r2, piv2 = rref_rank(R)
        assert r == r2 and piv == piv2 and np.array_equal(R.data, R2.data)


def test_gf2_packed_path_bit_identical():
    F, rng = gf(2), np.random.default_rng(5)
    for i in range(100):
        rows = int(rng.integers(1, 257))
        cols = int(rng.integers(1, 513))
        A = rand_matrix(F, rows, cols, rng, density=rng.uniform(0.02, 0.6))
        Rp, rp, pp = rref_rank(A, packed=True)
        Rg, rg, pg = rref_rank(A, packed=False)
        assert rp == rg and pp == pg and np.array_equal(Rp.data, Rg.data)
        assert rank_gf2_packed(pack_bits(A.data), cols) == rg


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 40), st.integers(1, 200), st.integers(0, 2**32 - 1))
def test_pack_roundtrip(rows, cols, seed):
    A = np.random.default_rng(seed).integers(0, 2, size=(rows, cols))
    assert np.array_equal(unpack_bits(pack_bits(A), cols), A)


def test_packed_requires_f2():
    with pytest.raises(FieldError):
        rref_rank(MatrixF.identity(gf(3), 2), packed=True)


def test_matrix_validation():
    with pytest.raises(FieldError):
        MatrixF(gf(4), [[0, 4]])
    with pytest.raises(ValueError):
        MatrixF(gf(4), [1, 2])


def test_matmul_against_dense_oracle():
    F, rng = gf(8), np.random.default_rng(6)
    A, B = rand_matrix(F, 5, 7, rng, 0.5), rand_matrix(F, 7, 4, rng)
    C = matmul(A, B).data
    for i in range(5):
        for j in range(4):
            acc = 0
            for k in range(7):
                acc = F.e_add(acc, F.e_mul(int(A.data[i, k]), int(B.data[k, j])))
            assert C[i, j] == acc


def test_stack_rank_subadditive():
    F, rng = gf(3), np.random.default_rng(7)
    A, B = rand_matrix(F, 4, 9, rng), rand_matrix(F, 3, 9, rng)
    assert max(rank(A), rank(B)) <= rank(stack(A, B)) <= rank(A) + rank(B)
