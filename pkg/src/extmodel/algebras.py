"""Finite dimensional augmented local algebras over F_p.

Covers algebras given by structure constants (with augmentation and a
nilpotent augmentation ideal), group algebras of finite p-groups, exterior
algebras, and presented algebras: quotients of a weight-truncated free
tensor algebra with linear normal forms.
"""

from __future__ import annotations

import itertools
import re

import numpy as np

from .linffp import Matrix, RowReducer, Subspace, _check_prime, kernel_basis, matmul_mod, rank, solve_matrix


class AugmentedAlgebra:
    """Unital associative F_p-algebra with augmentation, by structure constants.

    table[i, j, k] is the coefficient of basis k in (basis i) * (basis j).
    The kernel of the augmentation must be nilpotent, which makes the
    algebra local; the nilpotency index nu satisfies abar^nu = 0 and
    abar^(nu-1) != 0.
    """

    def __init__(self, p, basis_names, table, unit, aug, check=True):
        self.p = _check_prime(p)
        self.basis_names = list(basis_names)
        self.dim = len(self.basis_names)
        self.table = np.asarray(table, dtype=np.int64) % p
        if self.table.shape != (self.dim,) * 3:
            raise ValueError("structure constant table has wrong shape")
        self.unit = np.asarray(unit, dtype=np.int64) % p
        self.aug = np.asarray(aug, dtype=np.int64) % p
        if self.unit.shape != (self.dim,) or self.aug.shape != (self.dim,):
            raise ValueError("unit/augmentation have wrong shape")
        if check:
            self._validate()
        self.aug_ideal_basis = kernel_basis(Matrix(self.aug.reshape(1, -1), p)).basis
        self.nilpotency_index = self._nilpotency_index()

    def _validate(self):
        c, p = self.table, self.p
        left = np.einsum("ijm,mkl->ijkl", c, c) % p
        right = np.einsum("jkm,iml->ijkl", c, c) % p
        if not np.array_equal(left, right):
            raise ValueError("structure constants are not associative")
        eye = np.eye(self.dim, dtype=np.int64)
        if not np.array_equal(np.einsum("i,ijk->jk", self.unit, c) % p, eye):
            raise ValueError("unit fails on the left")
        if not np.array_equal(np.einsum("j,ijk->ik", self.unit, c) % p, eye):
            raise ValueError("unit fails on the right")
        prod_aug = np.einsum("ijk,k->ij", c, self.aug) % p
        if not np.array_equal(prod_aug, np.outer(self.aug, self.aug) % p):
            raise ValueError("augmentation is not an algebra map")
        if int(self.aug @ self.unit % p) != 1:
            raise ValueError("augmentation does not send the unit to 1")

    def _nilpotency_index(self) -> int:
        power = self.aug_ideal_basis.a
        nu = 1
        while power.shape[1]:
            nu += 1
            if nu > self.dim + 1:
                raise ValueError("augmentation ideal is not nilpotent; algebra not local")
            prods = np.einsum("ia,jb,ijk->kab", power, self.aug_ideal_basis.a, self.table) % self.p
            prods = prods.reshape(self.dim, -1)
            power = Subspace.spanned_by(Matrix(prods, self.p)).basis.a
        return nu

    def mul_vec(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64) % self.p
        v = np.asarray(v, dtype=np.int64) % self.p
        return np.einsum("i,j,ijk->k", u, v, self.table) % self.p

    # protocol shared with PresentedAlgebra, used by verify_algebra_map
    def mul_coords(self, u, v) -> np.ndarray:
        return self.mul_vec(u, v)

    @property
    def unit_coords(self) -> np.ndarray:
        return self.unit.copy()

    def is_commutative(self) -> bool:
        return np.array_equal(self.table, self.table.transpose(1, 0, 2))

    def aug_ideal_mult(self) -> np.ndarray:
        """Multiplication on the augmentation ideal in its own coordinates.

        Returns mbar with mbar[k, i, j] the coefficient of ideal-basis k in
        (ideal basis i) * (ideal basis j).
        """
        bas = self.aug_ideal_basis
        m = bas.cols
        prods = np.einsum("ia,jb,ijk->kab", bas.a, bas.a, self.table) % self.p
        flat = Matrix(prods.reshape(self.dim, m * m), self.p)
        coords = solve_matrix(bas, flat)
        if coords is None:
            raise AssertionError("product of ideal elements left the ideal")
        return coords.a.reshape(m, m, m).transpose(0, 1, 2)

    def __repr__(self):
        return f"AugmentedAlgebra(dim={self.dim}, p={self.p}, nu={self.nilpotency_index})"


class FiniteGroupData:
    """Finite group as a list of element names plus a multiplication table."""

    def __init__(self, elements, mult, check=True):
        self.elements = list(elements)
        self.order = len(self.elements)
        self.mult = np.asarray(mult, dtype=np.int64)
        if self.mult.shape != (self.order, self.order):
            raise ValueError("multiplication table has wrong shape")
        if check:
            self._validate()

    def _validate(self):
        n, m = self.order, self.mult
        if m.min() < 0 or m.max() >= n:
            raise ValueError("table entries out of range")
        assoc_left = m[m, :]
        assoc_right = m[:, m].transpose(1, 0, 2)
        # (ij)k vs i(jk): m[m[i,j],k] == m[i,m[j,k]]
        if not np.array_equal(m[m[:, :], :], m[:, m[:, :]].transpose(1, 0, 2)):
            raise ValueError("multiplication is not associative")
        del assoc_left, assoc_right
        self.identity = None
        for e in range(n):
            if np.array_equal(m[e], np.arange(n)) and np.array_equal(m[:, e], np.arange(n)):
                self.identity = e
                break
        if self.identity is None:
            raise ValueError("no identity element")
        for g in range(n):
            if self.identity not in m[g]:
                raise ValueError("element without inverse")

    def inverse(self, g: int) -> int:
        return int(np.nonzero(self.mult[g] == self.identity)[0][0])

    def is_abelian(self) -> bool:
        return np.array_equal(self.mult, self.mult.T)

    def element_order(self, g: int) -> int:
        x, n = g, 1
        while x != self.identity:
            x = int(self.mult[x, g])
            n += 1
        return n

    def center_indices(self) -> list[int]:
        m = self.mult
        return [g for g in range(self.order) if np.array_equal(m[g], m[:, g])]

    def __repr__(self):
        return f"FiniteGroupData(order={self.order})"


def cyclic_group(n: int) -> FiniteGroupData:
    names = ["e"] + [f"g{k}" if k > 1 else "g" for k in range(1, n)]
    mult = (np.arange(n).reshape(-1, 1) + np.arange(n).reshape(1, -1)) % n
    return FiniteGroupData(names, mult)


def elem_abelian_group(d: int, p: int) -> FiniteGroupData:
    p = _check_prime(p)
    elems = list(itertools.product(range(p), repeat=d))
    index = {e: k for k, e in enumerate(elems)}
    names = ["e" if not any(e) else "g" + "".join(map(str, e)) for e in elems]
    mult = np.zeros((len(elems),) * 2, dtype=np.int64)
    for a, ea in enumerate(elems):
        for b, eb in enumerate(elems):
            mult[a, b] = index[tuple((x + y) % p for x, y in zip(ea, eb))]
    return FiniteGroupData(names, mult)


def heisenberg_group(p: int) -> FiniteGroupData:
    """Order p^3 group of triples with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""
    p = _check_prime(p)
    elems = list(itertools.product(range(p), repeat=3))
    index = {e: k for k, e in enumerate(elems)}
    names = ["e" if not any(e) else "g" + "".join(map(str, e)) for e in elems]
    mult = np.zeros((len(elems),) * 2, dtype=np.int64)
    for a, (x1, y1, z1) in enumerate(elems):
        for b, (x2, y2, z2) in enumerate(elems):
            mult[a, b] = index[((x1 + x2) % p, (y1 + y2) % p, (z1 + z2 + x1 * y2) % p)]
    return FiniteGroupData(names, mult)


def product_group(g: FiniteGroupData, h: FiniteGroupData) -> FiniteGroupData:
    pairs = list(itertools.product(range(g.order), range(h.order)))
    index = {e: k for k, e in enumerate(pairs)}
    names = [f"{g.elements[a]}|{h.elements[b]}" for a, b in pairs]
    mult = np.zeros((len(pairs),) * 2, dtype=np.int64)
    for i, (a1, b1) in enumerate(pairs):
        for j, (a2, b2) in enumerate(pairs):
            mult[i, j] = index[(int(g.mult[a1, a2]), int(h.mult[b1, b2]))]
    return FiniteGroupData(names, mult)


def group_algebra(g: FiniteGroupData, p: int) -> AugmentedAlgebra:
    """Group algebra F_p[G] for a p-group G, augmented by g -> 1."""
    p = _check_prime(p)
    n = g.order
    m = n
    while m % p == 0:
        m //= p
    if m != 1:
        raise ValueError(f"group order {n} is not a power of {p}; algebra would not be local")
    if g.identity != 0:
        order = [g.identity] + [k for k in range(n) if k != g.identity]
        inv = {old: new for new, old in enumerate(order)}
        mult = np.array([[inv[int(g.mult[a, b])] for b in order] for a in order])
        g = FiniteGroupData([g.elements[k] for k in order], mult)
    table = np.zeros((n, n, n), dtype=np.int64)
    table[np.arange(n)[:, None], np.arange(n)[None, :], g.mult] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    aug = np.ones(n, dtype=np.int64)
    alg = AugmentedAlgebra(p, list(g.elements), table, unit, aug)
    alg.group = g
    return alg


def trunc_poly(n: int, p: int) -> AugmentedAlgebra:
    """F_p[x]/(x^n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    names = ["1"] + [f"x{k}" if k > 1 else "x" for k in range(1, n)]
    table = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                table[i, j, i + j] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    aug = np.zeros(n, dtype=np.int64)
    aug[0] = 1
    return AugmentedAlgebra(p, names, table, unit, aug)


def opposite(a: AugmentedAlgebra) -> AugmentedAlgebra:
    """Opposite algebra: products taken in reversed order."""
    return AugmentedAlgebra(
        a.p, a.basis_names, a.table.transpose(1, 0, 2), a.unit, a.aug, check=False
    )


_NAME_RE = re.compile(r"^([a-z_]+)(?:[:(]([^)]*)\)?)?$")


def catalog(name: str, p: int):
    """Named test instances; groups come back as FiniteGroupData.

    Recognized: trunc_poly(n), cyclic(n), elem_abelian(d), heisenberg,
    product(<group>,<group>).
    """
    name = name.strip()
    if name.startswith("product"):
        inner = name[len("product"):].strip(":()")
        parts = _split_args(inner)
        gs = [catalog(part, p) for part in parts]
        if not all(isinstance(g, FiniteGroupData) for g in gs):
            raise ValueError("product(...) expects group names")
        out = gs[0]
        for g in gs[1:]:
            out = product_group(out, g)
        return out
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"unknown catalog name {name!r}")
    base, arg = m.group(1), m.group(2)
    if base == "trunc_poly":
        return trunc_poly(int(arg), p)
    if base == "cyclic":
        return cyclic_group(int(arg))
    if base == "elem_abelian":
        return elem_abelian_group(int(arg), p)
    if base == "heisenberg":
        return heisenberg_group(p)
    raise ValueError(f"unknown catalog name {name!r}")


def _split_args(s: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur += ch
    if cur:
        parts.append(cur)
    return [q.strip() for q in parts]


def catalog_algebra(name: str, p: int) -> AugmentedAlgebra:
    obj = catalog(name, p)
    if isinstance(obj, FiniteGroupData):
        return group_algebra(obj, p)
    return obj


class PresentedAlgebra:
    """Quotient of the weight-truncated free tensor algebra by a relation span.

    Coordinates run over all words of weight <= weight_cap in (weight, lex)
    order; the two-sided ideal generated by the relations is closed off by
    repeated one-letter multiplications, and linear elimination produces a
    normal-form reduction whose non-pivot words form the quotient basis.
    """

    def __init__(self, generators, relations, weight_cap, p):
        self.p = _check_prime(p)
        self.generators = list(generators)
        self.weight_cap = int(weight_cap)
        g = len(self.generators)
        self.num_gens = g
        self.offsets = [0]
        for w in range(self.weight_cap + 1):
            self.offsets.append(self.offsets[-1] + g**w)
        self.total_dim = self.offsets[-1]
        self.relations = [self._as_vec(r) for r in relations]
        self._eliminate()

    def _as_vec(self, r) -> np.ndarray:
        if isinstance(r, dict):
            v = np.zeros(self.total_dim, dtype=np.int64)
            for word, coeff in r.items():
                v[self.word_index(tuple(word))] = int(coeff) % self.p
            return v
        v = np.asarray(r, dtype=np.int64) % self.p
        if v.shape != (self.total_dim,):
            raise ValueError("relation vector has wrong length")
        return v

    def word_index(self, word) -> int:
        w = len(word)
        if w > self.weight_cap:
            raise ValueError("word exceeds weight cap")
        idx = 0
        for letter in word:
            if not 0 <= letter < self.num_gens:
                raise ValueError("letter out of range")
            idx = idx * self.num_gens + letter
        return self.offsets[w] + idx

    def index_word(self, idx: int):
        for w in range(self.weight_cap + 1):
            if idx < self.offsets[w + 1]:
                rem = idx - self.offsets[w]
                word = []
                for _ in range(w):
                    word.append(rem % self.num_gens)
                    rem //= self.num_gens
                return tuple(reversed(word))
        raise IndexError(idx)

    def _left_mul_gen(self, vec: np.ndarray, gen: int) -> np.ndarray:
        out = np.zeros_like(vec)
        g = self.num_gens
        for w in range(self.weight_cap):
            src = vec[self.offsets[w] : self.offsets[w + 1]]
            if not src.any():
                continue
            start = self.offsets[w + 1] + gen * g**w
            out[start : start + g**w] = src
        return out

    def _right_mul_gen(self, vec: np.ndarray, gen: int) -> np.ndarray:
        out = np.zeros_like(vec)
        g = self.num_gens
        for w in range(self.weight_cap):
            src = vec[self.offsets[w] : self.offsets[w + 1]]
            if not src.any():
                continue
            dst = out[self.offsets[w + 1] : self.offsets[w + 2]].reshape(g**w, g)
            dst[:, gen] = src
        return out

    def _eliminate(self):
        red = RowReducer(self.total_dim, self.p)
        queue = []
        for r in self.relations:
            rr = red.reduce(r.reshape(1, -1))[0]
            if rr.any():
                red.insert(rr.reshape(1, -1))
                queue.append(rr)
        while queue:
            row = queue.pop()
            for gen in range(self.num_gens):
                for cand in (self._left_mul_gen(row, gen), self._right_mul_gen(row, gen)):
                    rr = red.reduce(cand.reshape(1, -1))[0]
                    if rr.any():
                        red.insert(rr.reshape(1, -1))
                        queue.append(rr)
        self._reducer = red
        pivots = set(red.pivots)
        self.normal_indices = [j for j in range(self.total_dim) if j not in pivots]
        self.normal_words = [self.index_word(j) for j in self.normal_indices]
        self.dim = len(self.normal_indices)
        for r in self.relations:
            if self.reduce(r).any():
                raise AssertionError("relation does not reduce to zero")

    def per_weight_dims(self) -> list[int]:
        counts = [0] * (self.weight_cap + 1)
        for word in self.normal_words:
            counts[len(word)] += 1
        return counts

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        return self._reducer.reduce(np.asarray(vec, dtype=np.int64).reshape(1, -1))[0]

    @property
    def unit_coords(self) -> np.ndarray:
        v = np.zeros(self.total_dim, dtype=np.int64)
        v[0] = 1
        return v

    def gen_vec(self, k: int) -> np.ndarray:
        v = np.zeros(self.total_dim, dtype=np.int64)
        v[self.word_index((k,))] = 1
        return self.reduce(v)

    def mul_coords(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Concatenate (dropping weight above the cap) and reduce."""
        u = np.asarray(u, dtype=np.int64) % self.p
        v = np.asarray(v, dtype=np.int64) % self.p
        out = np.zeros(self.total_dim, dtype=np.int64)
        g = self.num_gens
        for a in range(self.weight_cap + 1):
            ua = u[self.offsets[a] : self.offsets[a + 1]]
            if not ua.any():
                continue
            for b in range(self.weight_cap + 1 - a):
                vb = v[self.offsets[b] : self.offsets[b + 1]]
                if not vb.any():
                    continue
                block = np.outer(ua, vb).reshape(-1)
                seg = out[self.offsets[a + b] : self.offsets[a + b + 1]]
                seg += block
        return self.reduce(out % self.p)

    def is_commutative(self) -> bool:
        for i in range(self.num_gens):
            for j in range(i + 1, self.num_gens):
                xi, xj = self.gen_vec(i), self.gen_vec(j)
                diff = (self.mul_coords(xi, xj) - self.mul_coords(xj, xi)) % self.p
                if diff.any():
                    return False
        return True

    def render_vec(self, vec: np.ndarray) -> str:
        terms = []
        for j in np.nonzero(vec % self.p)[0]:
            word = self.index_word(int(j))
            mono = "*".join(self.generators[k] for k in word) if word else "1"
            c = int(vec[j]) % self.p
            terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def relation_strings(self) -> list[str]:
        return [self.render_vec(r) for r in self.relations]

    def __repr__(self):
        return f"PresentedAlgebra(gens={len(self.generators)}, W={self.weight_cap}, dim={self.dim})"


def truncated_quotient(gens, relations, weight_cap, p) -> PresentedAlgebra:
    return PresentedAlgebra(gens, relations, weight_cap, p)


class AlgebraMap:
    """Linear map between algebras, on coordinates of the targets' ambient space."""

    def __init__(self, source, target, matrix: Matrix):
        self.source = source
        self.target = target
        self.matrix = matrix

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return matmul_mod(self.matrix.a, np.asarray(vec, dtype=np.int64).reshape(-1, 1), self.source.p)[:, 0]


def verify_algebra_map(phi: AlgebraMap) -> dict[str, bool]:
    """Check unit, multiplicativity on all basis pairs, and bijectivity."""
    src, tgt = phi.source, phi.target
    p = src.p
    report = {}
    report["unit"] = np.array_equal(phi.apply(src.unit_coords) % p, tgt.unit_coords % p)
    ok = True
    images = [phi.apply(np.eye(src.dim, dtype=np.int64)[i]) for i in range(src.dim)]
    for i in range(src.dim):
        for j in range(src.dim):
            lhs = phi.apply(src.mul_coords(np.eye(src.dim, dtype=np.int64)[i], np.eye(src.dim, dtype=np.int64)[j]))
            rhs = tgt.mul_coords(images[i], images[j])
            if not np.array_equal(lhs % p, rhs % p):
                ok = False
                break
        if not ok:
            break
    report["multiplicative"] = ok
    report["bijective"] = src.dim == tgt.dim and rank(phi.matrix) == src.dim
    return report


def exterior_algebra(d: int, p: int, degree_cap: int | None = None):
    """Exterior algebra on d degree-1 generators, as a minimal structure
    with only a binary product; the piece in degree i has dimension C(d, i).
    """
    from .ainfty import AInfAlgebra
    from .graded import GradedVectorSpace

    if d < 1:
        raise ValueError("need d >= 1")
    p = _check_prime(p)
    cap = d if degree_cap is None else min(degree_cap, d)
    basis = {i: list(itertools.combinations(range(d), i)) for i in range(1, cap + 1)}
    index = {i: {s: k for k, s in enumerate(basis[i])} for i in basis}
    dims = {i: len(basis[i]) for i in basis}
    space = GradedVectorSpace(dims)
    ops = {}
    for a in basis:
        for b in basis:
            if a + b not in basis:
                continue
            out_dim = dims[a + b]
            block = np.zeros((out_dim, dims[a] * dims[b]), dtype=np.int64)
            for ia, sa in enumerate(basis[a]):
                for ib, sb in enumerate(basis[b]):
                    if set(sa) & set(sb):
                        continue
                    inversions = sum(1 for x in sa for y in sb if x > y)
                    merged = tuple(sorted(sa + sb))
                    sign = (-1) ** inversions
                    block[index[a + b][merged], ia * dims[b] + ib] = sign % p
            if block.any():
                ops[(2, (a, b))] = block
    return AInfAlgebra(space, p, ops, arity_cap=max(4, cap))
