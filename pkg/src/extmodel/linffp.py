"""Dense exact linear algebra over prime fields F_p.

All arithmetic is integer arithmetic reduced mod p on numpy int64 arrays,
so every result is exact.  Matrices are immutable after construction and
safe to share.  Row reduction uses vectorized eliminations with a float64
BLAS fast path for the batch pre-reduction (exact because all intermediate
products stay far below 2**53).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

_PRIME_CACHE: set[int] = set()


def is_prime(p: int) -> bool:
    if p in _PRIME_CACHE:
        return True
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    _PRIME_CACHE.add(p)
    return True


def _check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return p


def inv_mod(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0 in F_p")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class Scalar:
    """An element of F_p, stored as its residue in [0, p)."""

    residue: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "modulus", _check_prime(self.modulus))
        object.__setattr__(self, "residue", int(self.residue) % self.modulus)

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.modulus != self.modulus:
                raise ValueError("mixed moduli")
            return other
        return Scalar(int(other), self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return Scalar(self.residue + o.residue, self.modulus)

    def __sub__(self, other):
        o = self._coerce(other)
        return Scalar(self.residue - o.residue, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return Scalar(self.residue * o.residue, self.modulus)

    def __neg__(self):
        return Scalar(-self.residue, self.modulus)

    def inverse(self) -> "Scalar":
        return Scalar(inv_mod(self.residue, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __bool__(self):
        return self.residue != 0

    def __repr__(self):
        return f"{self.residue} (mod {self.modulus})"


def _as_array(data, p: int) -> np.ndarray:
    a = np.asarray(data, dtype=np.int64) % p
    if a.ndim == 1:
        a = a.reshape(-1, 1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError("matrix data must be 2-dimensional")
    return a


class Matrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("a", "p")

    def __init__(self, data, p: int):
        p = _check_prime(p)
        a = _as_array(data, p).copy()
        a.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "Matrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "Matrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def T(self) -> "Matrix":
        return Matrix(self.a.T, self.p)

    def __getitem__(self, idx) -> int:
        return int(self.a[idx])

    def column(self, j: int) -> np.ndarray:
        return self.a[:, j].copy()

    def __add__(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        return Matrix(self.a + other.a, self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        return Matrix(self.a - other.a, self.p)

    def __neg__(self) -> "Matrix":
        return Matrix(-self.a, self.p)

    def __mul__(self, c: int) -> "Matrix":
        return Matrix(self.a * (int(c) % self.p), self.p)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if other.p != self.p:
            raise ValueError("mixed moduli")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(matmul_mod(self.a, other.a, self.p), self.p)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.shape == other.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self):
        return hash((self.p, self.shape, self.a.tobytes()))

    def is_zero(self) -> bool:
        return not self.a.any()

    def tolist(self):
        return self.a.tolist()

    def _compat(self, other: "Matrix"):
        if not isinstance(other, Matrix) or other.p != self.p:
            raise ValueError("mixed moduli")
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self):
        return f"Matrix({self.a.tolist()}, p={self.p})"


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact a @ b mod p; routes through float64 BLAS when provably exact."""
    inner = a.shape[-1]
    if inner == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    if (p - 1) * (p - 1) * inner < 2**53:
        c = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    else:
        c = a @ b
    return c % p


class RowReducer:
    """Incremental reduced-row-echelon accumulator over F_p.

    Rows are inserted (singly or in batches) and kept fully reduced: pivot
    entries are 1 and every pivot column is zero in all other rows.  Batch
    insertion pre-reduces against the current basis with one matrix product,
    which is what makes large kernels affordable.
    """

    def __init__(self, ncols: int, p: int):
        self.n = int(ncols)
        self.p = _check_prime(p)
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.array(self.rows, dtype=np.int64)

    def reduce(self, batch: np.ndarray) -> np.ndarray:
        """Return batch with the span of the current rows projected out."""
        batch = np.atleast_2d(np.asarray(batch, dtype=np.int64) % self.p)
        if not self.rows or not batch.size:
            return batch
        r = self._matrix()
        coeff = batch[:, self.pivots]
        return (batch - matmul_mod(coeff, r, self.p)) % self.p

    def insert(self, batch: np.ndarray) -> int:
        """Insert rows, returning how many were independent."""
        batch = self.reduce(batch)
        added = 0
        for k in range(batch.shape[0]):
            v = batch[k]
            if added:
                v = self.reduce(v)[0]
            nz = np.nonzero(v)[0]
            if nz.size == 0:
                continue
            j = int(nz[0])
            v = (v * inv_mod(int(v[j]), self.p)) % self.p
            # back-eliminate the new pivot column from existing rows
            for idx, row in enumerate(self.rows):
                c = int(row[j])
                if c:
                    self.rows[idx] = (row - c * v) % self.p
            self.rows.append(v)
            self.pivots.append(j)
            added += 1
        return added

    def echelon(self) -> tuple[np.ndarray, list[int]]:
        """Rows sorted by pivot column, with their pivot list."""
        order = np.argsort(self.pivots, kind="stable") if self.pivots else []
        rows = [self.rows[i] for i in order]
        pivots = [self.pivots[i] for i in order]
        mat = (
            np.array(rows, dtype=np.int64)
            if rows
            else np.zeros((0, self.n), dtype=np.int64)
        )
        return mat, pivots


def _rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    red = RowReducer(a.shape[1], p)
    step = max(1, min(4096, a.shape[0]))
    for start in range(0, a.shape[0], step):
        red.insert(a[start : start + step])
    return red.echelon()


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row echelon form; returns (R, pivot columns, rank).

    R has the shape of m, with zero rows at the bottom.
    """
    ech, pivots = _rref_array(m.a, m.p)
    out = np.zeros_like(m.a)
    out[: ech.shape[0]] = ech
    return Matrix(out, m.p), tuple(pivots), len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n given by a matrix of independent basis columns."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise ValueError("basis rows must equal ambient dimension")
        if rank(self.basis) != self.basis.cols:
            raise ValueError("basis columns are dependent")

    @property
    def p(self) -> int:
        return self.basis.p

    @property
    def dim(self) -> int:
        return self.basis.cols

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(n, Matrix.zeros(n, 0, p))

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(n, Matrix.identity(n, p))

    @classmethod
    def spanned_by(cls, columns: Matrix) -> "Subspace":
        """Column span with a canonical (row-echelon of transpose) basis."""
        ech, _ = _rref_array(columns.a.T, columns.p)
        return cls(columns.rows, Matrix(ech.T, columns.p))

    def contains(self, vec: np.ndarray) -> bool:
        return solve(self.basis, vec) is not None


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of {v : m @ v = 0}; dim = cols - rank."""
    ech, pivots = _rref_array(m.a, m.p)
    n = m.cols
    free = [j for j in range(n) if j not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, j in enumerate(free):
        basis[j, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-int(ech[i, j])) % m.p
    return Subspace(n, Matrix(basis, m.p))


def image_basis(m: Matrix) -> Subspace:
    """Canonical basis of the column space."""
    return Subspace.spanned_by(m)


def solve(m: Matrix, b) -> Optional[np.ndarray]:
    """One solution x of m @ x = b, or None when the system is inconsistent.

    Free variables are set to 0, so the answer is deterministic.  None is an
    ordinary return value, not an error; genuine misuse (shape mismatch)
    raises.
    """
    b = np.asarray(b, dtype=np.int64) % m.p
    if b.ndim != 1 or b.shape[0] != m.rows:
        raise ValueError(f"rhs has shape {b.shape}, expected ({m.rows},)")
    x = solve_matrix(m, Matrix(b.reshape(-1, 1), m.p))
    return None if x is None else x.a[:, 0].copy()


def solve_matrix(m: Matrix, b: Matrix) -> Optional[Matrix]:
    """Solve m @ X = b columnwise; None if any column is inconsistent."""
    if b.rows != m.rows:
        raise ValueError("rhs row count mismatch")
    aug = np.hstack([m.a, b.a])
    ech, pivots = _rref_array(aug, m.p)
    ncols = m.cols
    x = np.zeros((ncols, b.cols), dtype=np.int64)
    for i, pc in enumerate(pivots):
        if pc >= ncols:
            return None
        x[pc] = ech[i, ncols:]
    return Matrix(x, m.p)


def invert(m: Matrix) -> Matrix:
    """Inverse of a square invertible matrix (raises if singular)."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve_matrix(m, Matrix.identity(m.rows, m.p))
    if x is None:
        raise ValueError("matrix is singular")
    return x


def hstack(mats: list[Matrix]) -> Matrix:
    p = mats[0].p
    return Matrix(np.hstack([m.a for m in mats]), p)


def vstack(mats: list[Matrix]) -> Matrix:
    p = mats[0].p
    return Matrix(np.vstack([m.a for m in mats]), p)


def complement(u: Subspace, w: Subspace, rng: Optional[np.random.Generator] = None) -> Subspace:
    """A complement C of u inside w, so that u + C = w and u ∩ C = 0.

    Candidates are the basis columns of w taken in order, so for w equal to
    the full space the result is the lexicographically first standard-basis
    completion.  Passing a generator reorders and mixes the candidates, which
    yields a different (still deterministic, given the seed) complement.
    """
    if u.ambient_dim != w.ambient_dim or u.p != w.p:
        raise ValueError("subspaces live in different ambient spaces")
    p = u.p
    cand = w.basis.a
    if u.dim:
        inside = solve_matrix(w.basis, u.basis)
        if inside is None:
            raise ValueError("first subspace is not contained in the second")
    if rng is not None and w.dim > 0:
        mix = _random_invertible(w.dim, p, rng)
        cand = matmul_mod(cand, mix, p)
    else:
        # lexicographically smallest completion: scan candidates in
        # ascending order of their coordinate tuples
        order = sorted(range(cand.shape[1]), key=lambda j: tuple(cand[:, j]))
        cand = cand[:, order]
    red = RowReducer(u.ambient_dim, p)
    red.insert(u.basis.a.T)
    cols = []
    for j in range(cand.shape[1]):
        if red.rank == w.dim:
            break
        if red.insert(cand[:, j].reshape(1, -1)):
            cols.append(cand[:, j])
    if len(cols) + u.dim != w.dim:
        raise AssertionError("complement construction failed to span")
    basis = (
        np.array(cols, dtype=np.int64).T
        if cols
        else np.zeros((u.ambient_dim, 0), dtype=np.int64)
    )
    return Subspace(u.ambient_dim, Matrix(basis, p))


def _random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        a = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if len(_rref_array(a, p)[1]) == n:
            return a
