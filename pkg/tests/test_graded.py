import numpy as np
import pytest

from extmodel.graded import (
    CochainComplex,
    GradedMap,
    GradedVectorSpace,
    HomotopyRetract,
    check_retract,
    cohomology_with_retract,
    random_complex,
)
from extmodel.linffp import Matrix, rank


def zero_diff_complex(dims, p):
    space = GradedVectorSpace(dims)
    return CochainComplex(space, GradedMap.zero(space, space, 1, p))


def two_term_acyclic(p=2):
    space = GradedVectorSpace({0: 1, 1: 1})
    d = GradedMap(space, space, 1, p, {0: Matrix.identity(1, p)})
    return CochainComplex(space, d)


class TestComplex:
    def test_d_squared_enforced(self):
        space = GradedVectorSpace({0: 1, 1: 1, 2: 1})
        d = GradedMap(
            space, space, 1, 2,
            {0: Matrix.identity(1, 2), 1: Matrix.identity(1, 2)},
        )
        with pytest.raises(ValueError):
            CochainComplex(space, d)

    def test_block_shapes_enforced(self):
        space = GradedVectorSpace({0: 2, 1: 1})
        with pytest.raises(ValueError):
            GradedMap(space, space, 1, 2, {0: Matrix.identity(2, 2)})


class TestRetract:
    def test_zero_differential_gives_identity_retract(self):
        # every differential vanishes: H = C, h = 0
        c = zero_diff_complex({n: 1 for n in range(5)}, 2)
        r = cohomology_with_retract(c)
        assert r.H.dims == {n: 1 for n in range(5)}
        assert r.h.is_zero()
        for n in range(5):
            assert r.i.block(n) == Matrix.identity(1, 2)
            assert r.p_map.block(n) == Matrix.identity(1, 2)
        assert all(check_retract(r).values())

    def test_acyclic_two_term(self):
        c = two_term_acyclic()
        r = cohomology_with_retract(c)
        assert r.H.total_dim == 0
        assert r.h.block(1) == Matrix.identity(1, 2)
        assert all(check_retract(r).values())

    def test_zeroed_h_fails_homotopy_identity(self):
        c = two_term_acyclic()
        r = cohomology_with_retract(c)
        broken = HomotopyRetract(
            r.C, r.H, r.i, r.p_map,
            GradedMap.zero(c.space, c.space, -1, 2),
            r.decomposed_degrees, r.decomposition,
        )
        rep = check_retract(broken)
        assert not rep["homotopy_identity"]

    def test_scaled_i_p_still_passes(self):
        # identities are bilinear in (i, p): scale i by c and p by 1/c
        p = 5
        c = random_complex(np.random.default_rng(11), p)
        r = cohomology_with_retract(c)
        scaled = HomotopyRetract(
            r.C, r.H, 2 * r.i, 3 * r.p_map, r.h,  # 2 * 3 = 1 mod 5
            r.decomposed_degrees, None,
        )
        rep = check_retract(scaled)
        assert rep["homotopy_identity"] and rep["p_i_identity"]

    @pytest.mark.parametrize("seed", range(12))
    @pytest.mark.parametrize("p", [2, 3])
    def test_random_complexes_all_identities(self, seed, p):
        c = random_complex(np.random.default_rng(seed), p)
        r = cohomology_with_retract(c)
        assert all(check_retract(r).values()), check_retract(r)

    @pytest.mark.parametrize("seed", range(6))
    def test_dims_match_rank_computation(self, seed):
        p = 3
        c = random_complex(np.random.default_rng(100 + seed), p, max_degree=4)
        r = cohomology_with_retract(c)
        for n in c.space.degrees():
            d_n = c.d.block(n)
            d_prev = c.d.block(n - 1)
            z = c.space.dim(n) - rank(d_n)
            b = rank(d_prev)
            assert r.H.dim(n) == z - b

    def test_seed_determinism_and_variation(self):
        c = random_complex(np.random.default_rng(5), 3)
        r1 = cohomology_with_retract(c, seed=7)
        r2 = cohomology_with_retract(c, seed=7)
        assert r1.fingerprint() == r2.fingerprint()
        r3 = cohomology_with_retract(c, seed=8)
        assert all(check_retract(r3).values())
        assert r3.H.dims == r1.H.dims

    def test_max_degree_partial_decomposition(self):
        c = zero_diff_complex({0: 1, 1: 2, 2: 3, 3: 4}, 2)
        r = cohomology_with_retract(c, max_degree=2)
        assert r.decomposed_degrees == (0, 1, 2)
        assert r.H.dims == {0: 1, 1: 2, 2: 3}
        assert all(check_retract(r).values())

    def test_d_i_zero_and_p_d_zero(self):
        for seed in range(5):
            c = random_complex(np.random.default_rng(200 + seed), 2, max_degree=4)
            r = cohomology_with_retract(c)
            assert c.d.compose(r.i).is_zero()
            assert r.p_map.compose(c.d).is_zero()
