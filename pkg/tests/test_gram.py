import random
from fractions import Fraction

from algdeform import builtins as builtin_lib
from algdeform import exactlin as el
from algdeform import laws
from algdeform.charcalc import TorusAction
from algdeform.gram import (gram, gram_orbit_constancy, killing_form,
                            leibniz_kernel, radical_containment)
from algdeform.laws import OperadType, Symmetry
from conftest import random_law


def F(x):
    return Fraction(x)


class TestGramForm:
    def test_sl2_killing_rank(self, sl2):
        G = gram(sl2)
        assert G.rank == 3
        assert G.radical.dim == 0
        # R_v = -ad_v on skew laws, so the two trace forms coincide
        assert G.matrix == killing_form(sl2)

    def test_heis3_rank_zero(self, heis3):
        assert gram(heis3).rank == 0

    def test_k_split_rank(self):
        b = builtin_lib.get_builtin("k_split(2)")
        assert gram(b.law).rank == 2

    def test_kx2_rank_one(self, kx2):
        G = gram(kx2)
        assert G.rank == 1
        # radical is spanned by x
        assert G.radical.rows == ({1: F(1)},)

    def test_symmetric(self):
        r = random.Random(0)
        for _ in range(20):
            mu = random_law(3, Symmetry.NONE, r)
            G = gram(mu).matrix
            assert G == G.transpose()

    def test_killing_equals_gram_on_lie(self):
        r = random.Random(1)
        for name in ("sl2", "heis3", "aff1", "gl2"):
            b = builtin_lib.get_builtin(name)
            for _ in range(5):
                g = laws.random_invertible(b.law.dim, r)
                moved = laws.act(g, b.law)
                assert gram(moved).matrix == killing_form(moved)

    def test_right_convention_on_ut2(self):
        # mu(E12, E11) = 0 but mu(E11, E12) = E12: the right-multiplication
        # convention matters; with R_v(w) = mu(w, v) the trace form of the
        # upper-triangular algebra has rank 2 and radical spanned by E12
        b = builtin_lib.get_builtin("ut2")
        G = gram(b.law)
        assert G.rank == 2
        assert G.radical.rows == ({2: F(1)},)
        # the opposite convention would pair E12 differently; pin the matrix
        assert G.matrix.entry(0, 0) == 1 and G.matrix.entry(1, 1) == 2


class TestEquivariance:
    def test_entrywise_equivariance(self):
        # gamma_{g.mu}(g v, g w) = gamma_mu(v, w), 100 randomized exact trials
        r = random.Random(2)
        names = ("sl2", "heis3", "kx2", "leib2", "ut2")
        for i in range(100):
            b = builtin_lib.get_builtin(names[i % len(names)])
            m = b.law.dim
            g = laws.random_invertible(m, r)
            moved = laws.act(g, b.law)
            G0 = gram(b.law)
            G1 = gram(moved)
            for v in range(m):
                for w in range(m):
                    gv = {i2: g[i2][v] for i2 in range(m) if g[i2][v]}
                    gw = {i2: g[i2][w] for i2 in range(m) if g[i2][w]}
                    assert G1.value(gv, gw) == G0.matrix.entry(v, w)

    def test_orbit_constancy(self):
        for name, expected in (("sl2", 3), ("heis3", 0)):
            b = builtin_lib.get_builtin(name)
            rep = gram_orbit_constancy(b.law, trials=50, seed=3)
            assert rep.constant and rep.base_rank == expected

    def test_orbit_constancy_richardson(self):
        b = builtin_lib.get_builtin("richardson(7)")
        assert gram(b.law).rank == 3
        rep = gram_orbit_constancy(b.law, trials=5, seed=4)
        assert rep.constant and rep.base_rank == 3


class TestRadicalContainment:
    def test_leib2(self, leib2):
        rep = radical_containment(leib2, OperadType.LEIB)
        assert rep.contained
        assert rep.ideal.rows == ({1: F(1)},)   # span{e2}
        assert rep.gram.rank == 0               # gamma vanishes identically

    def test_kx2_nilradical(self, kx2):
        rep = radical_containment(kx2, OperadType.ASSOC)
        assert rep.contained and rep.ideal_source == "nilpotency-detected"
        assert rep.ideal.rows == ({1: F(1)},)
        assert rep.gram.rank == 1

    def test_lie_law_vacuous(self, sl2):
        rep = radical_containment(sl2, OperadType.LIE)
        assert rep.ideal.dim == 0 and rep.contained

    def test_user_supplied_ideal(self):
        b = builtin_lib.get_builtin("ut2")
        ideal = el.Subspace.from_vectors(3, [{2: F(1)}])  # the strict radical
        rep = radical_containment(b.law, OperadType.ASSOC, ideal=ideal)
        assert rep.contained and rep.ideal_source == "user-supplied"

    def test_leibniz_kernel_of_lie_is_zero(self, sl2):
        assert leibniz_kernel(sl2).dim == 0

    def test_abelian_ideal_of_richardson_inside_radical(self):
        b = builtin_lib.get_builtin("richardson(1)")
        G = gram(b.law)
        ideal = el.Subspace.from_vectors(7, [{3 + i: F(1)} for i in range(3)])
        assert G.radical.contains_subspace(ideal)
        assert G.rank == 3  # = dim W - dim M


class TestWeightOrthogonality:
    def test_gram_pairs_opposite_weights_only(self):
        # gamma(W_chi, W_chi') = 0 unless chi' = -chi when a torus fixes mu
        for name in ("sl2", "heis3", "richardson(1)"):
            b = builtin_lib.get_builtin(name)
            T = TorusAction(b.torus)
            T.check_fixes(b.law)
            G = gram(b.law)
            for v in range(b.law.dim):
                for w in range(b.law.dim):
                    wv = tuple(-x for x in T.weights[v])
                    if T.weights[w] != wv:
                        assert G.matrix.entry(v, w) == 0
