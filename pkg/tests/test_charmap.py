import random
from itertools import combinations, product
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toricseeds.charmap import (
    DualCharMatrix,
    NoInjectiveMap,
    act,
    binary_matroid,
    canonical_rows,
    charmap_from_dcm,
    det_int,
    dual_matroid,
    find_integer_charmap,
    gale_dual,
    idcm_orbits,
    is_nonsingular_Z,
    is_nonsingular_Z2,
    lambda_set,
    lift_to_integer,
    matroid_from_dcm,
    mod2_charmaps,
    supports_dcm,
)
from toricseeds.classify import find_isomorphism
from toricseeds.complex import (
    PureComplex,
    boundary_simplex,
    cross_polytope,
    cyclic_polytope,
    members,
    polygon,
    relabel,
    rp2_6,
    sphere0,
    suspension,
    torus_7,
    vset,
    wedge,
)

HEX_LAMBDA = np.array([[1, 0, -1, -1, 0, 1], [0, 1, 1, 0, -1, -1]])


def facet_lists(K):
    return [members(f) for f in K.facets]


def det_mod2(cols):
    return round(np.linalg.det(np.array(cols, dtype=float))) % 2


def brute_mod2_count(K):
    """Count [I | M] maps by scanning every M, normalized on the first facet."""
    n, m = K.n, K.m
    first = members(K.facets[0])
    rest = [v for v in range(1, m + 1) if v not in first]
    vecs = list(product((0, 1), repeat=n))
    count = 0
    for choice in product(vecs, repeat=len(rest)):
        cols = {v: [int(i == k) for i in range(n)] for k, v in enumerate(first)}
        cols.update(dict(zip(rest, (list(c) for c in choice))))
        if all(det_mod2([cols[v] for v in members(f)]) == 1 for f in K.facets):
            count += 1
    return count


class TestBinaryMatroid:
    def test_three_generic_columns(self):
        M = binary_matroid([[1, 0, 1], [0, 1, 1]])
        assert facet_lists(M) == [[1, 2], [1, 3], [2, 3]]

    def test_repeated_column(self):
        M = binary_matroid([[1, 0, 1], [0, 1, 0]])
        assert facet_lists(M) == [[1, 2], [2, 3]]

    def test_rank_deficient(self):
        with pytest.raises(ValueError):
            binary_matroid([[1, 1], [1, 1]])

    def test_dual_by_complement(self):
        M = binary_matroid([[1, 0, 1], [0, 1, 0]])
        D = dual_matroid(M)
        assert facet_lists(D) == [[1], [3]]
        assert D.embedded

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 31 - 1))
    def test_double_dual_and_augmentation(self, seed):
        rng = np.random.default_rng(seed)
        n, m = 3, 6
        lam = rng.integers(0, 2, size=(n, m))
        lam[:, :n] = np.eye(n, dtype=int)
        M = binary_matroid(lam)
        assert dual_matroid(dual_matroid(M)) == M
        faces = M.faces()
        # spot-check the augmentation property on random face pairs
        fl = sorted(faces)
        for _ in range(30):
            a, b = fl[rng.integers(len(fl))], fl[rng.integers(len(fl))]
            if bin(a).count("1") < bin(b).count("1"):
                assert any((a | (1 << x)) in faces for x in members(b & ~a))

    def test_gale_duality_on_hexagon_dcm(self):
        D = supports_dcm(polygon(6), injective=True)
        lam = gale_dual(D.matrix())
        assert (lam @ D.matrix() % 2 == 0).all()
        M = binary_matroid(lam)
        assert M == matroid_from_dcm(D)
        # the matroid of the transposed DCM has the complementary facets
        assert binary_matroid(D.matrix().T) == dual_matroid(M)

    def test_n11_dual_matroid_size(self):
        (D,) = idcm_orbits(11)
        cof = dual_matroid(matroid_from_dcm(D))
        # independent 4-sets among the 15 nonzero vectors of Z_2^4: |GL(4,2)| / 4!
        assert len(cof.facets) == 20160 // 24
        brute = sum(1 for c in combinations(D.rows, 4)
                    if det_mod2([[r >> i & 1 for i in range(4)] for r in c]) == 1)
        assert brute == 840 and comb(15, 4) == 1365


class TestOrbits:
    @pytest.mark.parametrize("n,count", list(zip(range(2, 12), [7, 16, 28, 35, 35, 28, 16, 7, 3, 1])))
    def test_counts(self, n, count):
        reps = idcm_orbits(n)
        assert len(reps) == count
        assert all(D.injective and D.rank() == 4 for D in reps)
        assert all(D.rows[n:] == (1, 2, 4, 8) for D in reps)

    def test_too_many_vertices(self):
        with pytest.raises(NoInjectiveMap):
            idcm_orbits(12)

    def test_n11_forced(self):
        (D,) = idcm_orbits(11)
        assert sorted(D.rows) == list(range(1, 16))

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_orbits_partition_lambda(self, n):
        reps = {D.rows[:n] for D in idcm_orbits(n)}
        sizes = dict.fromkeys(reps, 0)
        total = 0
        for D in lambda_set(n):
            total += 1
            key = canonical_rows(D.rows[:n], 4)
            assert key in sizes
            sizes[key] += 1
        assert total == factorial(11) // factorial(11 - n)
        assert sum(sizes.values()) == total and all(sizes.values())

    @pytest.mark.parametrize("n", [2, 3])
    def test_action_gives_isomorphic_matroids(self, n):
        rng = random.Random(n)
        for D in idcm_orbits(n):
            M = matroid_from_dcm(D)
            for _ in range(3):
                s = list(range(n))
                t = list(range(4))
                rng.shuffle(s)
                rng.shuffle(t)
                E = act(D, s, t)
                N = matroid_from_dcm(E)
                # the isomorphism permutes the first n labels by s and the last 4 by t
                mp = {s[i] + 1: i + 1 for i in range(n)}
                mp.update({n + 1 + i: n + 1 + t[i] for i in range(4)})
                assert relabel(M, mp, m=M.m) == N
                assert find_isomorphism(M, N) is not None


class TestSupportsDcm:
    def test_cross_polytope(self):
        C = cross_polytope(4)
        D = supports_dcm(C)
        assert D is not None and D.supports(C)
        assert supports_dcm(C, injective=True) is None

    def test_hexagon_idcm(self):
        D = supports_dcm(polygon(6), injective=True)
        assert D is not None and D.injective and D.supports(polygon(6))

    def test_complete_graph_on_six(self):
        K = PureComplex.from_facets(combinations(range(1, 7), 2))
        assert supports_dcm(K) is None

    def test_non_colorable(self):
        assert supports_dcm(torus_7()) is None
        assert supports_dcm(rp2_6()) is not None

    @pytest.mark.parametrize("K", [polygon(5), polygon(6), cross_polytope(3), cyclic_polytope(4, 7),
                                   torus_7(), suspension(polygon(5))])
    def test_wedge_compatibility(self, K):
        has = supports_dcm(K) is not None
        for v in members(K.vertices)[:3]:
            assert (supports_dcm(wedge(K, v)) is not None) == has

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 31 - 1))
    def test_support_iff_subcomplex_of_matroid(self, seed):
        rng = random.Random(seed)
        rows = [rng.randrange(1, 16) for _ in range(3)] + [1, 2, 4, 8]
        D = DualCharMatrix(tuple(rows), 4)
        M = matroid_from_dcm(D)
        pool = list(combinations(range(1, 8), 3))
        picked = rng.sample(pool, rng.randint(1, 8))
        K = PureComplex(7, 3, tuple(vset(c) for c in picked), embedded=True)
        inside = set(K.facets) <= set(M.facets)
        if K.vertices == (1 << 8) - 2:
            assert D.supports(K) == inside
        # the other direction: a found DCM always has K inside its matroid
        if inside and K.vertices == (1 << 8) - 2:
            E = supports_dcm(K)
            assert E is not None and set(K.facets) <= set(matroid_from_dcm(E).facets)


class TestMod2Maps:
    def test_triangle_forced(self):
        maps = mod2_charmaps(boundary_simplex(2))
        assert len(maps) == 1
        assert maps[0].tolist() == [[1, 0, 1], [0, 1, 1]]

    @pytest.mark.parametrize("K", [polygon(4), polygon(5), polygon(6), cross_polytope(3)])
    def test_counts_match_exhaustive_scan(self, K):
        maps = mod2_charmaps(K)
        assert len(maps) == brute_mod2_count(K)
        assert all(is_nonsingular_Z2(lam, K) for lam in maps)

    def test_square_count(self):
        assert len(mod2_charmaps(polygon(4))) == 3

    def test_hexagon_count(self):
        assert len(mod2_charmaps(polygon(6))) == 11

    def test_charmap_from_dcm(self):
        K = polygon(6)
        D = supports_dcm(K)
        lam = charmap_from_dcm(D, K)
        assert is_nonsingular_Z2(lam, K)
        assert lam[:, :2].tolist() == [[1, 0], [0, 1]]


class TestLifting:
    def test_det(self):
        assert det_int([[2, 1], [1, 1]]) == 1
        assert det_int([[0, 1], [1, 0]]) == -1
        assert det_int([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
        rng = np.random.default_rng(1)
        for _ in range(20):
            a = rng.integers(-1, 2, size=(5, 5))
            assert det_int(a.tolist()) == round(np.linalg.det(a))

    def test_hexagon_paper_map(self):
        H = polygon(6)
        assert is_nonsingular_Z(HEX_LAMBDA, H)
        lam = lift_to_integer(HEX_LAMBDA % 2, H)
        assert lam is not None and is_nonsingular_Z(lam, H)
        assert ((lam - HEX_LAMBDA) % 2 == 0).all()

    def test_hexagon_bad_sign(self):
        bad = HEX_LAMBDA.copy()
        bad[:, 3] = [1, 1]
        H = polygon(6)
        # columns 3 and 4 both reduce to (1, 1), so the mod-2 map breaks on {3, 4} too
        assert not is_nonsingular_Z2(bad % 2, H)
        assert det_int(bad[:, [2, 3]].tolist()) == -2
        assert not is_nonsingular_Z(bad, H)

    def test_s0(self):
        assert lift_to_integer(np.array([[1, 1]]), sphere0()).tolist() == [[1, -1]]

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_cross_polytope_blocks(self, d):
        C = cross_polytope(d)
        lamR = np.zeros((d, 2 * d), dtype=int)
        for i in range(d):
            lamR[i, 2 * i] = lamR[i, 2 * i + 1] = 1
        lam = lift_to_integer(lamR, C)
        want = np.zeros_like(lamR)
        for i in range(d):
            want[i, 2 * i], want[i, 2 * i + 1] = 1, -1
        assert lam.tolist() == want.tolist()

    def test_identity_block(self):
        K = boundary_simplex(3)
        lam = np.array([[1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]])
        assert is_nonsingular_Z(lam, K)

    @pytest.mark.parametrize("K", [polygon(5), polygon(6), cross_polytope(3), cyclic_polytope(4, 7),
                                   suspension(polygon(5))])
    def test_find_integer_charmap(self, K):
        lamR, lam = find_integer_charmap(K)
        assert is_nonsingular_Z(lam, K)
        assert ((lam - lamR) % 2 == 0).all()
        assert set(np.unique(lam)) <= {-1, 0, 1}

    def test_torus_has_no_map(self):
        assert find_integer_charmap(torus_7()) is None
