import random
from fractions import Fraction

import pytest

from algdeform import builtins as builtin_lib
from algdeform import exactlin as el
from algdeform import laws
from algdeform.incidence import build_complex, cohomology
from algdeform.laws import Law, LawSpace, OperadType, Symmetry
from algdeform.obstruction import (FirstOrderObstructed, QuadraticObstruction,
                                   anisotropy, check_well_defined, kappa2,
                                   second_order_lift)
from algdeform.presentations import presentation
from conftest import random_law, random_vec


def F(x):
    return Fraction(x)


def builtin_complex(name):
    b = builtin_lib.get_builtin(name)
    return build_complex(b.law, presentation(b.optype, b.law.dim))


class TestKappa2:
    def test_sl2_empty(self):
        K = kappa2(builtin_complex("sl2"))
        assert K.h2_dim == 0 and K.forms == []

    def test_zero_law_is_identity_map(self):
        # at mu = 0, kappa2(alpha) is the Jacobiator of alpha itself
        C = builtin_complex("abelian(3)")
        rep = cohomology(C)
        assert rep.h2_dim == 9 and rep.h3_dim == 3
        K = kappa2(C, rep)
        space = LawSpace(3, Symmetry.SKEW)
        sl2 = builtin_lib.get_builtin("sl2").law
        t = rep.h2.reduce(space.coords(sl2))
        assert not any(K.kappa_via_forms(t))  # Jacobi holds for sl2
        r = random.Random(0)
        for _ in range(30):
            v = random_vec(space.dim, r)
            t = rep.h2.reduce(v)
            expected = rep.h3.reduce(laws.identity_value(OperadType.LIE, space.law(v)))
            assert K.kappa_via_forms(t) == expected

    def test_forms_match_direct_reduction(self):
        r = random.Random(1)
        for name in ("heis3", "kx2", "abelian(2)", "leib2"):
            C = builtin_complex(name)
            rep = cohomology(C)
            K = kappa2(C, rep)
            for _ in range(50):
                t = [F(r.randint(-5, 5)) for _ in range(K.h2_dim)]
                assert K.kappa_via_forms(t) == K.kappa_direct(t)

    def test_representative_independence(self):
        r = random.Random(2)
        for name in ("heis3", "kx2"):
            C = builtin_complex(name)
            rep = cohomology(C)
            K = kappa2(C, rep)
            for _ in range(50):
                t = [F(r.randint(-4, 4)) for _ in range(K.h2_dim)]
                alpha = K.lift_class(t)
                xi = {i: F(r.randint(-4, 4)) for i in range(C.m ** 2)}
                shifted = el.vadd(alpha, C.delta.matvec(xi))
                moved = rep.h3.reduce(C.theta_model(shifted, shifted))
                assert moved == K.kappa_via_forms(t)


class TestSecondOrderLift:
    def test_zero_base_sl2_direction(self):
        C = builtin_complex("abelian(3)")
        space = LawSpace(3, Symmetry.SKEW)
        alpha = space.coords(builtin_lib.get_builtin("sl2").law)
        res = second_order_lift(C, alpha)
        assert res.lifted and res.beta == {} and res.verified_mod_t3

    def test_kx2_separability_direction(self, kx2):
        # alpha with alpha(x, x) = 1: the path towards k[x]/(x^2 - t)
        C = builtin_complex("kx2")
        alpha_law = Law.from_entries(2, Symmetry.NONE, {(0, 1, 1): F(1)})
        alpha = C.pres.space.coords(alpha_law)
        res = second_order_lift(C, alpha)
        assert res.lifted and res.verified_mod_t3

    def test_obstructed_direction_at_zero_law(self):
        # at mu = 0 with a non-Jacobi direction the class [F(alpha)] obstructs
        C = builtin_complex("abelian(3)")
        space = LawSpace(3, Symmetry.SKEW)
        r = random.Random(3)
        while True:
            alpha_law = random_law(3, Symmetry.SKEW, r)
            if laws.identity_value(OperadType.LIE, alpha_law):
                break
        res = second_order_lift(C, space.coords(alpha_law))
        assert not res.lifted
        assert any(res.obstruction_class)

    def test_first_order_obstructed(self, sl2):
        C = builtin_complex("sl2")
        # a direction outside ker(phi)
        r = random.Random(4)
        ker = C.ker_phi()
        while True:
            v = random_vec(C.ambient_dim, r)
            if v and not ker.contains(v):
                break
        with pytest.raises(FirstOrderObstructed):
            second_order_lift(C, v)

    def test_lift_iff_class_vanishes(self):
        # solver success is equivalent to vanishing of the reduced class
        r = random.Random(5)
        for name in ("heis3", "kx2", "abelian(2)", "leib2"):
            C = builtin_complex(name)
            rep = cohomology(C)
            ker = C.ker_phi()
            for _ in range(25):
                alpha = {}
                for row in ker.rows:
                    el.vaxpy(alpha, F(r.randint(-3, 3)), row)
                cls = rep.h3.reduce(C.theta_model(alpha, alpha))
                res = second_order_lift(C, alpha)
                assert res.lifted == (not any(cls))


class TestWellDefined:
    def test_sl2_cross_terms(self):
        rep = check_well_defined(builtin_complex("sl2"), trials=100, seed=0)
        assert rep.ok

    def test_heis3(self):
        rep = check_well_defined(builtin_complex("heis3"), trials=100, seed=1)
        assert rep.ok

    def test_kx2(self):
        rep = check_well_defined(builtin_complex("kx2"), trials=100, seed=2)
        assert rep.ok


def synthetic_obstruction(forms_dense):
    """QuadraticObstruction from explicit symmetric matrices (tests only)."""
    d = len(forms_dense[0]) if forms_dense else 0
    forms = [[[F(x) for x in row] for row in K] for K in forms_dense]
    reps = [{} for _ in range(d)]
    return QuadraticObstruction(None, None, forms, reps)


class TestAnisotropy:
    def test_vacuous_sl2(self):
        v = anisotropy(kappa2(builtin_complex("sl2")))
        assert v.kind == "certified_anisotropic" and v.reason == "vacuous_h2_zero"

    def test_kx2_isotropic_witness(self):
        C = builtin_complex("kx2")
        rep = cohomology(C)
        K = kappa2(C, rep)
        v = anisotropy(K)
        assert v.kind == "isotropic_witness" and v.witness_field == "QQ"
        # the witness class lifts to second order, exactly
        alpha = K.lift_class(v.witness)
        res = second_order_lift(C, alpha)
        assert res.lifted and res.verified_mod_t3

    def test_dim1_nonzero(self):
        v = anisotropy(synthetic_obstruction([[[1]]]))
        assert v.kind == "certified_anisotropic" and v.reason == "dim1_nonzero_form"

    def test_dim1_zero_form(self):
        v = anisotropy(synthetic_obstruction([[[0]]]))
        assert v.kind == "isotropic_witness" and v.witness == [1]

    def test_dim2_gcd_certificate(self):
        # t1^2 and t2^2 share no common zero in P^1
        v = anisotropy(synthetic_obstruction([[[1, 0], [0, 0]], [[0, 0], [0, 1]]]))
        assert v.kind == "certified_anisotropic" and v.reason == "dim2_gcd_certificate"

    def test_dim2_rational_witness(self):
        # both forms share the factor (t1 - 2 t2)
        # q1 = (t1 - 2 t2)·t1, q2 = (t1 - 2 t2)·t2
        q1 = [[1, -1], [-1, 0]]
        q2 = [[0, Fraction(1, 2)], [Fraction(1, 2), -2]]
        K = synthetic_obstruction([q1, q2])
        v = anisotropy(K)
        assert v.kind == "isotropic_witness" and v.witness_field == "QQ"
        assert not any(K.kappa_via_forms(v.witness))

    def test_dim2_irrational_witness_reported_symbolically(self):
        # t1^2 - 2 t2^2 is irreducible over Q but split over the closure
        v = anisotropy(synthetic_obstruction([[[1, 0], [0, -2]]]))
        assert v.kind == "isotropic_witness"
        assert v.witness_field == "quadratic_extension"
        assert v.gcd_factor is not None

    def test_dim2_single_anisotropic_form(self):
        # t1^2 + t2^2 has no zero over Q but splits over the closure
        v = anisotropy(synthetic_obstruction([[[1, 0], [0, 1]]]))
        assert v.kind == "isotropic_witness"
        assert v.witness_field == "quadratic_extension"

    def test_high_dim_zero_law_search_finds_witness(self):
        # at mu = 0 (Lie, m=3) the single-entry basis laws satisfy Jacobi,
        # so the finite-field search finds a point that lifts rationally
        C = builtin_complex("abelian(3)")
        K = kappa2(C)
        v = anisotropy(K, seed=7)
        assert v.kind == "isotropic_witness"
        assert v.witness_field == "QQ"
        assert not any(K.kappa_via_forms(v.witness))

    def test_high_dim_fp_witness_when_no_rational_lift(self):
        # every zero of the first two forms mod 5 kills the third (it is
        # -5·t2² on that locus), yet over the closure the system has no
        # common zero: the honest outcome is a recorded F_p witness
        forms = [[[1, 0, 0], [0, 1, 0], [0, 0, 0]],
                 [[0, 0, 0], [0, 1, 0], [0, 0, 1]],
                 [[1, 0, 0], [0, 0, 0], [0, 0, 4]]]
        K = synthetic_obstruction(forms)
        v = anisotropy(K, seed=8)
        assert v.kind == "isotropic_witness"
        assert v.witness_field == "F_p" and v.witness_prime in (5, 13)

    def test_high_dim_heuristic_records_evidence(self):
        # 83 is a quadratic non-residue mod 3, 5, 7, 11 and 13, so the cyclic
        # system t_i² = 83·t_{i+1}² has no nontrivial zero mod any searched
        # prime (nor over the closure); the searches come back empty-handed
        # with the primes and point counts recorded
        n = 83
        forms = [[[1, 0, 0], [0, -n, 0], [0, 0, 0]],
                 [[0, 0, 0], [0, 1, 0], [0, 0, -n]],
                 [[-n, 0, 0], [0, 0, 0], [0, 0, 1]]]
        v = anisotropy(synthetic_obstruction(forms), seed=8)
        assert v.kind == "heuristic_anisotropic"
        assert v.primes_tested and v.search_points
        assert v.rational_search_trials > 0

    def test_orbit_invariance_of_verdicts(self):
        r = random.Random(9)
        for name in ("sl2", "kx2", "heis3"):
            b = builtin_lib.get_builtin(name)
            P = presentation(b.optype, b.law.dim)
            base = anisotropy(kappa2(build_complex(b.law, P)), seed=1)
            for _ in range(3):
                g = laws.random_invertible(b.law.dim, r)
                moved = anisotropy(kappa2(build_complex(laws.act(g, b.law), P)), seed=1)
                assert moved.kind == base.kind
