import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extmodel.linffp import (
    Matrix,
    RowReducer,
    Scalar,
    Subspace,
    complement,
    image_basis,
    invert,
    kernel_basis,
    matmul_mod,
    rank,
    rref,
    solve,
    solve_matrix,
)


def all_vectors(n, p):
    return [np.array(v, dtype=np.int64) for v in itertools.product(range(p), repeat=n)]


def span_set(columns, p):
    """Oracle: enumerate every linear combination of the given columns."""
    cols = [np.asarray(c, dtype=np.int64) for c in columns]
    n = cols[0].shape[0] if cols else 0
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(cols)):
        v = np.zeros(n, dtype=np.int64)
        for c, col in zip(coeffs, cols):
            v = (v + c * col) % p
        out.add(tuple(v))
    return out


small_prime = st.sampled_from([2, 3, 5])


@st.composite
def random_matrix(draw, max_dim=5):
    p = draw(small_prime)
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    data = draw(
        st.lists(
            st.lists(st.integers(0, p - 1), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
    return Matrix(np.array(data, dtype=np.int64).reshape(r, c), p)


class TestScalar:
    def test_arithmetic(self):
        a = Scalar(2, 3)
        b = Scalar(2, 3)
        assert (a + b).residue == 1
        assert (a * b).residue == 1
        assert (a - b).residue == 0
        assert (a / b).residue == 1
        assert (-a).residue == 1
        assert a.inverse().residue == 2

    def test_nonprime_rejected(self):
        with pytest.raises(ValueError):
            Scalar(1, 4)
        with pytest.raises(ValueError):
            Matrix([[1]], 6)

    def test_mixed_moduli_rejected(self):
        with pytest.raises(ValueError):
            Scalar(1, 2) + Scalar(1, 3)


class TestRref:
    def test_identity_f2(self):
        m = Matrix.identity(2, 2)
        r, pivots, rk = rref(m)
        assert r == m
        assert pivots == (0, 1)
        assert rk == 2

    def test_zero(self):
        m = Matrix.zeros(3, 3, 5)
        r, pivots, rk = rref(m)
        assert r == m
        assert pivots == ()
        assert rk == 0

    def test_hand_reduction_f2(self):
        m = Matrix([[1, 1, 0], [1, 1, 1]], 2)
        r, pivots, rk = rref(m)
        assert r.tolist() == [[1, 1, 0], [0, 0, 1]]
        assert rk == 2
        # oracle: the row spans, enumerated exhaustively, agree
        assert span_set(m.a, 2) == span_set(r.a, 2)

    @settings(max_examples=60, deadline=None)
    @given(random_matrix())
    def test_idempotent(self, m):
        r, _, _ = rref(m)
        r2, _, _ = rref(r)
        assert r2 == r

    @settings(max_examples=60, deadline=None)
    @given(random_matrix())
    def test_rank_nullity(self, m):
        assert rank(m) + kernel_basis(m).dim == m.cols

    def test_matmul_matches_naive(self):
        rng = np.random.default_rng(0)
        for p in (2, 3, 7):
            a = rng.integers(0, p, (4, 6))
            b = rng.integers(0, p, (6, 3))
            naive = np.zeros((4, 3), dtype=np.int64)
            for i in range(4):
                for j in range(3):
                    naive[i, j] = sum(int(a[i, k]) * int(b[k, j]) for k in range(6)) % p
            assert np.array_equal(matmul_mod(a, b, p), naive)


class TestKernel:
    def test_identity_zero_kernel(self):
        assert kernel_basis(Matrix.identity(3, 3)).dim == 0

    def test_zero_full_kernel(self):
        k = kernel_basis(Matrix.zeros(4, 4, 2))
        assert k.dim == 4

    def test_one_one_f2(self):
        m = Matrix([[1, 1]], 2)
        k = kernel_basis(m)
        # oracle: every vector of F_2^2 with m v = 0
        expected = {tuple(v) for v in all_vectors(2, 2) if not (m.a @ v % 2).any()}
        assert span_set(k.basis.a.T, 2) == expected
        assert k.dim == 1

    @settings(max_examples=40, deadline=None)
    @given(random_matrix(max_dim=4))
    def test_kernel_annihilates(self, m):
        k = kernel_basis(m)
        if k.dim:
            assert (m @ k.basis).is_zero()


class TestSolve:
    def test_identity(self):
        m = Matrix.identity(3, 3)
        b = np.array([1, 0, 1])
        assert np.array_equal(solve(m, b), b)

    def test_no_solution_is_value(self):
        m = Matrix.zeros(2, 2, 2)
        assert solve(m, np.array([1, 0])) is None

    def test_f3_example(self):
        m = Matrix([[1, 1], [0, 1]], 3)
        b = np.array([2, 1])
        x = solve(m, b)
        # oracle: exhaustive search over all 9 candidates
        sols = [v for v in all_vectors(2, 3) if np.array_equal(m.a @ v % 3, b)]
        assert len(sols) == 1 and np.array_equal(x, sols[0])
        assert np.array_equal(x, np.array([1, 1]))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve(Matrix.identity(2, 2), np.array([1, 2, 3]))

    @settings(max_examples=40, deadline=None)
    @given(random_matrix(max_dim=4))
    def test_solution_verifies(self, m):
        rng = np.random.default_rng(1)
        x0 = rng.integers(0, m.p, m.cols)
        b = matmul_mod(m.a, x0.reshape(-1, 1), m.p)[:, 0]
        x = solve(m, b)
        assert x is not None
        assert np.array_equal(matmul_mod(m.a, x.reshape(-1, 1), m.p)[:, 0], b)

    def test_invert(self):
        m = Matrix([[1, 1], [0, 1]], 3)
        assert (invert(m) @ m) == Matrix.identity(2, 3)
        with pytest.raises(ValueError):
            invert(Matrix.zeros(2, 2, 3))


class TestComplement:
    def test_zero_gives_whole(self):
        w = Subspace.full(3, 2)
        c = complement(Subspace.zero(3, 2), w)
        assert c.dim == 3
        assert span_set(c.basis.a.T, 2) == span_set(np.eye(3, dtype=int), 2)

    def test_whole_gives_zero(self):
        w = Subspace.full(2, 3)
        assert complement(w, w).dim == 0

    def test_lexicographic_tie_break(self):
        u = Subspace(2, Matrix([[1], [1]], 2))
        c = complement(u, Subspace.full(2, 2))
        # oracle: enumerate all 1-dim complements, pick the lexicographically
        # first spanning vector
        options = []
        for v in all_vectors(2, 2):
            if v.any() and span_set([u.basis.a[:, 0], v], 2) == span_set(
                np.eye(2, dtype=int), 2
            ):
                options.append(tuple(v))
        assert tuple(c.basis.a[:, 0]) == min(options) == (0, 1)

    def test_not_contained_raises(self):
        u = Subspace(2, Matrix([[1], [0]], 2))
        w = Subspace(2, Matrix([[0], [1]], 2))
        with pytest.raises(ValueError):
            complement(u, w)

    @settings(max_examples=40, deadline=None)
    @given(random_matrix(max_dim=4), st.integers(0, 3))
    def test_direct_sum(self, m, seed):
        w = image_basis(m)
        if w.dim == 0:
            return
        u_cols = w.basis.a[:, : w.dim // 2]
        u = Subspace(w.ambient_dim, Matrix(u_cols, m.p))
        rng = np.random.default_rng(seed) if seed else None
        c = complement(u, w, rng=rng)
        assert u.dim + c.dim == w.dim
        if u.dim and c.dim:
            joint = Matrix(np.hstack([u.basis.a, c.basis.a]), m.p)
            assert rank(joint) == w.dim

    def test_seeded_deterministic(self):
        u = Subspace(4, Matrix([[1], [1], [0], [1]], 3))
        w = Subspace.full(4, 3)
        c1 = complement(u, w, rng=np.random.default_rng(7))
        c2 = complement(u, w, rng=np.random.default_rng(7))
        assert c1.basis == c2.basis


class TestRowReducer:
    def test_batch_matches_rank(self):
        rng = np.random.default_rng(3)
        for p in (2, 3):
            a = rng.integers(0, p, (40, 9))
            red = RowReducer(9, p)
            red.insert(a)
            assert red.rank == rank(Matrix(a, p))

    def test_reduce_to_zero_in_span(self):
        red = RowReducer(3, 2)
        red.insert(np.array([[1, 1, 0], [0, 1, 1]]))
        r = red.reduce(np.array([[1, 0, 1]]))
        assert not r.any()


class TestMatrix:
    def test_immutable(self):
        m = Matrix.identity(2, 2)
        with pytest.raises(ValueError):
            m.a[0, 0] = 0
        with pytest.raises(AttributeError):
            m.p = 3

    def test_solve_matrix_batch(self):
        m = Matrix([[1, 2], [0, 1]], 3)
        b = Matrix([[1, 0], [2, 2]], 3)
        x = solve_matrix(m, b)
        assert (m @ x) == b
