"""Graded vector spaces, cochain complexes and homotopy retracts.

A homotopy retract packages maps (i, p, h) between a complex C and its
cohomology H with zero differential, satisfying

    id_C - i p = d h + h d,    p i = id_H,

together with the side conditions h h = 0, h i = 0, p h = 0.  The retract
produced here always comes from a direct sum decomposition per degree

    C^n = B^n + Htilde^n + L^n

(coboundaries, a complement of coboundaries inside cocycles, a complement
of cocycles), so the side conditions hold by construction.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .linffp import Matrix, Subspace, complement, invert, kernel_basis


class GradedVectorSpace:
    """Finitely supported map degree -> dimension."""

    __slots__ = ("dims",)

    def __init__(self, dims: dict[int, int]):
        clean = {int(n): int(d) for n, d in dims.items() if d}
        if any(d < 0 for d in clean.values()):
            raise ValueError("negative dimension")
        object.__setattr__(self, "dims", clean)

    def __setattr__(self, name, value):
        raise AttributeError("GradedVectorSpace is immutable")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(self.dims))

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self.dims == other.dims

    def __hash__(self):
        return hash(tuple(sorted(self.dims.items())))

    def __repr__(self):
        return f"GradedVectorSpace({self.dims})"


class GradedMap:
    """Degree-homogeneous linear map of graded spaces, given by blocks.

    The block at degree n is a Matrix from the source piece in degree n to
    the target piece in degree n + shift.  Absent blocks are zero.
    """

    __slots__ = ("source", "target", "shift", "p", "blocks")

    def __init__(
        self,
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        shift: int,
        p: int,
        blocks: dict[int, Matrix],
    ):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "shift", int(shift))
        object.__setattr__(self, "p", int(p))
        clean = {}
        for n, b in blocks.items():
            want = (target.dim(n + shift), source.dim(n))
            if b.shape != want:
                raise ValueError(f"block at degree {n} has shape {b.shape}, expected {want}")
            if not b.is_zero():
                clean[int(n)] = b
        object.__setattr__(self, "blocks", clean)

    def __setattr__(self, name, value):
        raise AttributeError("GradedMap is immutable")

    @classmethod
    def identity(cls, space: GradedVectorSpace, p: int) -> "GradedMap":
        return cls(
            space,
            space,
            0,
            p,
            {n: Matrix.identity(space.dim(n), p) for n in space.degrees()},
        )

    @classmethod
    def zero(cls, source, target, shift, p) -> "GradedMap":
        return cls(source, target, shift, p, {})

    def block(self, n: int) -> Matrix:
        b = self.blocks.get(n)
        if b is None:
            return Matrix.zeros(self.target.dim(n + self.shift), self.source.dim(n), self.p)
        return b

    def apply(self, n: int, vec: np.ndarray) -> np.ndarray:
        b = self.block(n)
        return (b.a @ (np.asarray(vec, dtype=np.int64) % self.p)) % self.p

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        if other.target != self.source:
            raise ValueError("composition interface mismatch")
        blocks = {}
        for n in other.source.degrees():
            m = self.block(n + other.shift) @ other.block(n)
            if not m.is_zero():
                blocks[n] = m
        return GradedMap(other.source, self.target, self.shift + other.shift, self.p, blocks)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if (other.source, other.target, other.shift) != (self.source, self.target, self.shift):
            raise ValueError("incompatible maps")
        degs = set(self.blocks) | set(other.blocks)
        return GradedMap(
            self.source, self.target, self.shift, self.p,
            {n: self.block(n) + other.block(n) for n in degs},
        )

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-1) * other

    def __mul__(self, c: int) -> "GradedMap":
        return GradedMap(
            self.source, self.target, self.shift, self.p,
            {n: b * c for n, b in self.blocks.items()},
        )

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if (other.source, other.target, other.shift, other.p) != (
            self.source, self.target, self.shift, self.p,
        ):
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.source, self.target, self.shift))

    def __repr__(self):
        return f"GradedMap(shift={self.shift}, blocks on {sorted(self.blocks)})"


class CochainComplex:
    """Graded space with a degree +1 differential squaring to zero."""

    __slots__ = ("space", "d", "p")

    def __init__(self, space: GradedVectorSpace, d: GradedMap):
        if d.shift != 1 or d.source != space or d.target != space:
            raise ValueError("differential must be an endo-map of shift +1")
        if not d.compose(d).is_zero():
            raise ValueError("differential does not square to zero")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "p", d.p)

    def __setattr__(self, name, value):
        raise AttributeError("CochainComplex is immutable")


class HomotopyRetract:
    """Retract data (i, p, h) between a complex C and its cohomology H."""

    __slots__ = ("C", "H", "i", "p_map", "h", "decomposed_degrees", "decomposition")

    def __init__(self, C, H, i, p_map, h, decomposed_degrees=None, decomposition=None):
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "p_map", p_map)
        object.__setattr__(self, "h", h)
        degs = tuple(sorted(decomposed_degrees if decomposed_degrees is not None else C.space.degrees()))
        object.__setattr__(self, "decomposed_degrees", degs)
        object.__setattr__(self, "decomposition", decomposition)

    def __setattr__(self, name, value):
        raise AttributeError("HomotopyRetract is immutable")

    @property
    def p(self) -> int:
        return self.C.p

    def fingerprint(self) -> str:
        import hashlib

        hsh = hashlib.sha256()
        for gm in (self.i, self.p_map, self.h):
            for n in sorted(gm.blocks):
                hsh.update(str(n).encode())
                hsh.update(gm.blocks[n].a.tobytes())
        return hsh.hexdigest()[:16]


def cohomology_with_retract(
    C: CochainComplex,
    seed: int = 0,
    max_degree: Optional[int] = None,
) -> HomotopyRetract:
    """Split C into coboundaries, harmonic representatives and a complement.

    Degrees are processed bottom-up; when max_degree is given, only degrees
    up to it are decomposed (the retract then only carries data there).
    Different seeds give different, reproducible complement choices; seed 0
    is the lexicographic choice.
    """
    p = C.p
    rng = np.random.default_rng(seed) if seed else None
    degrees = [n for n in C.space.degrees() if max_degree is None or n <= max_degree]
    h_dims: dict[int, int] = {}
    i_blocks: dict[int, Matrix] = {}
    p_blocks: dict[int, Matrix] = {}
    h_blocks: dict[int, Matrix] = {}
    decomposition: dict[int, tuple[Subspace, Subspace, Subspace]] = {}
    prev_L: Optional[Subspace] = None
    prev_deg: Optional[int] = None
    for n in degrees:
        dim_n = C.space.dim(n)
        if dim_n == 0:
            prev_L, prev_deg = None, n
            continue
        d_block = C.d.block(n)
        if d_block.rows:
            Z = kernel_basis(d_block)
        else:
            Z = Subspace.full(dim_n, p)
        if prev_deg == n - 1 and prev_L is not None and prev_L.dim:
            b_basis = C.d.block(n - 1) @ prev_L.basis
            B = Subspace(dim_n, b_basis)
        else:
            B = Subspace.zero(dim_n, p)
        Ht = complement(B, Z, rng=rng)
        L = complement(Z, Subspace.full(dim_n, p), rng=rng)
        decomposition[n] = (B, Ht, L)
        h_dims[n] = Ht.dim
        if Ht.dim:
            i_blocks[n] = Ht.basis
        t = Matrix(
            np.hstack([B.basis.a, Ht.basis.a, L.basis.a]), p
        )
        tinv = invert(t)
        if Ht.dim:
            p_blocks[n] = Matrix(tinv.a[B.dim : B.dim + Ht.dim, :], p)
        if B.dim:
            # h sends the coboundary part back through d restricted to L
            h_blocks[n] = Matrix(prev_L.basis.a, p) @ Matrix(tinv.a[: B.dim, :], p)
        prev_L, prev_deg = L, n
    H = GradedVectorSpace(h_dims)
    i = GradedMap(H, C.space, 0, p, i_blocks)
    p_map = GradedMap(C.space, H, 0, p, p_blocks)
    h = GradedMap(C.space, C.space, -1, p, h_blocks)
    return HomotopyRetract(C, H, i, p_map, h, degrees, decomposition)


def random_complex(
    rng: np.random.Generator,
    p: int,
    max_degree: int = 3,
    max_dim: int = 4,
) -> CochainComplex:
    """Seeded random cochain complex on degrees 0..max_degree.

    Each differential is a random matrix composed with a projection that
    kills the image of the previous one, so d squares to zero by
    construction.
    """
    dims = {n: int(rng.integers(0, max_dim + 1)) for n in range(max_degree + 1)}
    if not any(dims.values()):
        dims[0] = 1
    space = GradedVectorSpace(dims)
    blocks: dict[int, Matrix] = {}
    prev: Optional[Matrix] = None
    for n in range(max_degree):
        a, b = space.dim(n + 1), space.dim(n)
        if a == 0 or b == 0:
            prev = None
            continue
        raw = Matrix(rng.integers(0, p, size=(a, b)), p)
        if prev is not None:
            ann = kernel_basis(prev.T).basis.T  # rows annihilating im(prev)
            coeff = Matrix(rng.integers(0, p, size=(a, ann.rows)), p)
            raw = coeff @ ann
        if not raw.is_zero():
            blocks[n] = raw
        prev = blocks.get(n)
    d = GradedMap(space, space, 1, p, blocks)
    return CochainComplex(space, d)


def check_retract(r: HomotopyRetract) -> dict[str, bool]:
    """Verify every retract identity as exact matrix equations."""
    C, H = r.C, r.H
    p = r.p
    decomposed = set(r.decomposed_degrees)
    report = {
        "i_chain_map": True,
        "p_chain_map": True,
        "p_i_identity": True,
        "homotopy_identity": True,
        "side_h_h": True,
        "side_h_i": True,
        "side_p_h": True,
        "cohomology_dims": True,
    }
    for n in sorted(decomposed):
        dim_n = C.space.dim(n)
        if dim_n == 0:
            continue
        i_n = r.i.block(n)
        p_n = r.p_map.block(n)
        d_n = C.d.block(n)
        d_prev = C.d.block(n - 1)
        h_n = r.h.block(n)
        if not (d_n @ i_n).is_zero():
            report["i_chain_map"] = False
        if (n + 1) in decomposed and not (r.p_map.block(n + 1) @ d_n).is_zero():
            report["p_chain_map"] = False
        if H.dim(n) and not (p_n @ i_n) == Matrix.identity(H.dim(n), p):
            report["p_i_identity"] = False
        ingredients_present = (n + 1) in decomposed or C.space.dim(n + 1) == 0
        if ingredients_present:
            h_next = r.h.block(n + 1)
            lhs = Matrix.identity(dim_n, p) - i_n @ p_n
            rhs = d_prev @ h_n + h_next @ d_n
            if lhs != rhs:
                report["homotopy_identity"] = False
        if not (r.h.block(n - 1) @ h_n).is_zero():
            report["side_h_h"] = False
        if not (h_n @ i_n).is_zero():
            report["side_h_i"] = False
        if not (r.p_map.block(n - 1) @ h_n).is_zero():
            report["side_p_h"] = False
        if r.decomposition is not None and n in r.decomposition:
            B, Ht, L = r.decomposition[n]
            if B.dim + Ht.dim + L.dim != dim_n or Ht.dim != H.dim(n):
                report["cohomology_dims"] = False
    return report
