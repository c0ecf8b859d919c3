"""Quadratic obstruction on H², second-order lifts, and anisotropy verdicts.

The obstruction sends a first-order class [α] ∈ H² to [Θ(α,α)] ∈ H³; its
vanishing on a class is equivalent to the existence of a second-order lift
μ + tα + t²β of the deformation, which this module solves for and verifies
by exact substitution in ℚ[t]/(t³).  A law is anisotropic when the
obstruction has trivial kernel: that is certified exactly when dim H² ≤ 2
(vacuous, a nonzero quadratic form, or a gcd certificate for a pencil of
binary quadratics) and decided heuristically by finite-field and rational
searches in higher dimension.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactlin
from .exactlin import vaxpy, vscale, vsub
from .incidence import cohomology
from .laws import TruncPoly, identity_value


class FirstOrderObstructed(ValueError):
    """The direction is not tangent: Φ_μ(α) ≠ 0."""


class QuadraticObstruction:
    """κ₂ as a tuple of symmetric matrices over the H² representatives.

    forms[c][i][j] is the c-th H³ coordinate of the class of Θ(rep_i, rep_j),
    so κ₂(t)_c = tᵀ·forms[c]·t in H² coordinates.
    """

    def __init__(self, complex_, report, forms, reps):
        self.complex = complex_
        self.report = report
        self.forms = forms
        self.reps = reps

    @property
    def h2_dim(self):
        return len(self.reps)

    @property
    def h3_dim(self):
        return len(self.forms)

    def kappa_via_forms(self, t):
        t = [Fraction(x) for x in t]
        d = self.h2_dim
        out = []
        for K in self.forms:
            s = Fraction(0)
            for i in range(d):
                if not t[i]:
                    continue
                for j in range(d):
                    if t[j] and K[i][j]:
                        s += t[i] * K[i][j] * t[j]
            out.append(s)
        return out

    def kappa_direct(self, t):
        """κ₂(t) by reducing Θ(α_t, α_t) in the cokernel, independently."""
        alpha = self.lift_class(t)
        theta = self.complex.theta_model(alpha, alpha)
        return self.report.h3.reduce(theta)

    def lift_class(self, t):
        """Ambient representative α_t = Σ t_i · rep_i."""
        out = {}
        for c, rep in zip(t, self.reps):
            vaxpy(out, Fraction(c), rep)
        return out


def kappa2(C, report=None, mode="auto", seed=None):
    """Assemble the obstruction's symmetric forms from the H² representatives."""
    if report is None:
        report = cohomology(C, mode=mode, seed=seed)
    if report.h3 is None:
        raise ValueError("cokernel representatives were not materialized")
    reps = list(report.h2.reps)
    d = len(reps)
    e = report.h3_dim
    forms = [[[Fraction(0)] * d for _ in range(d)] for _ in range(e)]
    for i in range(d):
        for j in range(i, d):
            theta = C.theta_model(reps[i], reps[j])
            cls = report.h3.reduce(theta)
            for c, val in enumerate(cls):
                forms[c][i][j] = val
                forms[c][j][i] = val
    K = QuadraticObstruction(C, report, forms, reps)
    for i in range(d):
        t = [Fraction(0)] * d
        t[i] = Fraction(1)
        if K.kappa_via_forms(t) != K.kappa_direct(t):
            raise ArithmeticError("obstruction forms disagree with direct reduction")
    return K


@dataclass
class LiftResult:
    """Either a verified second-order term β or the obstructing H³ class."""

    beta: dict | None
    obstruction_class: list | None
    verified_mod_t3: bool

    @property
    def lifted(self):
        return self.beta is not None


def second_order_lift(C, alpha, mode="auto", seed=None):
    """Solve 2Φ_μ(β) + Θ(α,α) = 0 and verify F(μ+tα+t²β) ≡ 0 mod t³.

    alpha is a sparse coordinate vector in A_W with Φ_μ(α) = 0 (otherwise
    FirstOrderObstructed).  On failure returns the nonzero class of Θ(α,α)
    in H³ coordinates.
    """
    if C.phi.matvec(alpha):
        raise FirstOrderObstructed("Φ_μ(α) ≠ 0: not a tangent direction")
    theta_aa = C.theta_model(alpha, alpha)
    beta = exactlin.solve(C.phi.scaled(2), vscale(Fraction(-1), theta_aa))
    if beta is None:
        report = cohomology(C, mode=mode, seed=seed)
        cls = report.h3.reduce(theta_aa)
        assert any(cls)
        return LiftResult(None, cls, False)
    verified = _verify_lift(C, alpha, beta)
    if not verified:
        raise ArithmeticError("second-order lift failed exact substitution")
    return LiftResult(beta, None, True)


def _verify_lift(C, alpha, beta):
    """Exact substitution of μ + tα + t²β into the identities over ℚ[t]/(t³)."""
    space = C.pres.space
    mu = space.coords(C.law)
    order = 3
    coeffs = {}
    for src, deg in ((mu, 0), (alpha, 1), (beta, 2)):
        for a, val in src.items():
            cs = coeffs.setdefault(a, [Fraction(0)] * order)
            cs[deg] += val
    vec_t = {a: TruncPoly(cs, order) for a, cs in coeffs.items()}
    if C.pres.btensor is not None:
        # custom maps: expand F(μ_t) through the defining tensor
        out = {}
        for (c, p, q), val in C.pres.btensor.items():
            xp = vec_t.get(p)
            xq = vec_t.get(q)
            if xp is not None and xq is not None:
                s = out.get(c, 0) + val * xp * xq
                if s:
                    out[c] = s
                else:
                    out.pop(c, None)
        return not out
    from .laws import Law
    entries = {}
    for a, val in vec_t.items():
        i, j, k = space.decode(a)
        entries[(i, j, k)] = val
    law_t = Law.from_entries(space.m, space.symmetry, entries)
    return not identity_value(C.pres.optype, law_t, C.pres.vspace)


@dataclass
class WellDefinedReport:
    trials: int
    representative_failures: int
    cross_term_failures: int

    @property
    def ok(self):
        return self.representative_failures == 0 and self.cross_term_failures == 0


def check_well_defined(C, trials=100, seed=None, bound=5):
    """Randomized exactness check that κ₂ descends to H².

    Draws α ∈ ker Φ_μ and ξ ∈ End(W), asserts the reduced class of
    Θ(α+δξ, α+δξ) equals that of Θ(α,α), and that the cross term
    Θ(α, δξ) lies in im Φ_μ.
    """
    rng = random.Random(exactlin.DEFAULT_SEED if seed is None else seed)
    ker_p = C.ker_phi()
    im_p = C.im_phi()
    rep_fail = cross_fail = 0
    m = C.m
    for _ in range(trials):
        alpha = {}
        for row in ker_p.rows:
            vaxpy(alpha, Fraction(rng.randint(-bound, bound)), row)
        xi_vec = {i: Fraction(rng.randint(-bound, bound)) for i in range(m * m)}
        dxi = C.delta.matvec(xi_vec)
        cross = C.theta_model(alpha, dxi)
        if im_p.reduce(cross):
            cross_fail += 1
        shifted = exactlin.vadd(alpha, dxi)
        lhs = C.theta_model(shifted, shifted)
        rhs = C.theta_model(alpha, alpha)
        if im_p.reduce(vsub(lhs, rhs)):
            rep_fail += 1
    return WellDefinedReport(trials, rep_fail, cross_fail)


# ---------------------------------------------------------------------------
# anisotropy verdicts
# ---------------------------------------------------------------------------

@dataclass
class AnisotropyVerdict:
    """Outcome of deciding whether κ₂ has trivial kernel.

    kind: "certified_anisotropic" | "isotropic_witness" | "heuristic_anisotropic"
    reason (certified): "vacuous_h2_zero" | "dim1_nonzero_form" | "dim2_gcd_certificate"
    witness: H² coordinates of an isotropic class; witness_field is "QQ",
    "F_p", or "quadratic_extension" (with the gcd factor recorded).
    """

    kind: str
    reason: str | None = None
    witness: list | None = None
    witness_field: str | None = None
    witness_prime: int | None = None
    gcd_factor: list | None = None
    primes_tested: list = field(default_factory=list)
    search_points: dict = field(default_factory=dict)
    rational_search_trials: int = 0
    seed: int | None = None

    @property
    def anisotropic(self):
        return self.kind in ("certified_anisotropic", "heuristic_anisotropic")


_SEARCH_PRIMES = (3, 5, 7, 11, 13)
_SEARCH_POINT_BUDGET = 250_000


def _binary_form(K):
    """Binary quadratic a·t₁² + b·t₁t₂ + c·t₂² from a symmetric 2×2 matrix."""
    return (K[0][0], K[0][1] + K[1][0], K[1][1])


def _poly_gcd(f, g):
    """Monic gcd of univariate polynomials (coefficient lists, low degree first)."""
    def norm(p):
        while p and not p[-1]:
            p = p[:-1]
        return p

    f, g = norm(list(f)), norm(list(g))
    while g:
        # f mod g
        f = list(f)
        while len(f) >= len(g) and f:
            q = f[-1] / g[-1]
            shift = len(f) - len(g)
            for i, c in enumerate(g):
                f[shift + i] -= q * c
            f = norm(f)
        f, g = g, f
    if f:
        lead = f[-1]
        f = [c / lead for c in f]
    return f


def _binary_quadratic_gcd(forms):
    """Homogeneous gcd of nonzero binary quadratics, as (t2_power, dehom poly).

    Each form (a, b, c) is a·t₁² + b·t₁t₂ + c·t₂² = t₂^k · p(t₁/t₂)·t₂^deg(p).
    """
    t2_power = None
    poly = None
    for (a, b, c) in forms:
        k = 0
        coeffs = [c, b, a]  # in t = t₁/t₂, low degree first
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        # factor t₁ powers: trailing zeros in t mean roots at t=0 i.e. t₁ | form
        # (handled by the gcd itself); t₂ powers appear when deg < 2
        k = 2 - (len(coeffs) - 1) if coeffs else 2
        if t2_power is None:
            t2_power, poly = k, coeffs
        else:
            t2_power = min(t2_power, k)
            poly = _poly_gcd(poly, coeffs)
    return t2_power, poly


def _sqrt_exact(q):
    """√q for a nonnegative Fraction, or None if irrational."""
    if q < 0:
        return None
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def anisotropy(K, seed=None, lift_bound=10 ** 4, rational_trials=300):
    """Decide anisotropy of a quadratic obstruction.

    Exact certificates for dim H² ≤ 2; searches (finite fields together with
    bounded-height rational lifts) above, with all evidence recorded.
    """
    d = K.h2_dim
    seed = exactlin.DEFAULT_SEED if seed is None else seed
    if d == 0:
        return AnisotropyVerdict("certified_anisotropic", reason="vacuous_h2_zero",
                                 seed=seed)
    e = K.h3_dim
    nonzero_forms = [K.forms[c] for c in range(e)
                     if any(any(row) for row in K.forms[c])]
    if not nonzero_forms:
        w = [Fraction(1)] + [Fraction(0)] * (d - 1)
        return AnisotropyVerdict("isotropic_witness", witness=w, witness_field="QQ",
                                 seed=seed)
    if d == 1:
        # κ₂(t) = t²·v with v ≠ 0 here
        return AnisotropyVerdict("certified_anisotropic", reason="dim1_nonzero_form",
                                 seed=seed)
    if d == 2:
        bforms = [_binary_form(f) for f in nonzero_forms]
        t2_power, poly = _binary_quadratic_gcd(bforms)
        deg = t2_power + (len(poly) - 1 if poly else 0)
        if deg == 0:
            return AnisotropyVerdict("certified_anisotropic",
                                     reason="dim2_gcd_certificate", seed=seed)
        if t2_power > 0:
            witness = [Fraction(1), Fraction(0)]  # t₂ | gcd: zero at (1, 0)
            assert not any(K.kappa_via_forms(witness))
            return AnisotropyVerdict("isotropic_witness", witness=witness,
                                     witness_field="QQ", seed=seed)
        if len(poly) == 2:  # linear factor p₀ + p₁ t
            witness = [-poly[0] / poly[1], Fraction(1)]
            assert not any(K.kappa_via_forms(witness))
            return AnisotropyVerdict("isotropic_witness", witness=witness,
                                     witness_field="QQ", seed=seed)
        # quadratic gcd p₀ + p₁ t + p₂ t²
        p0, p1, p2 = poly
        disc = p1 * p1 - 4 * p0 * p2
        root = _sqrt_exact(disc)
        if root is not None:
            witness = [(-p1 + root) / (2 * p2), Fraction(1)]
            assert not any(K.kappa_via_forms(witness))
            return AnisotropyVerdict("isotropic_witness", witness=witness,
                                     witness_field="QQ", seed=seed)
        return AnisotropyVerdict("isotropic_witness", witness=None,
                                 witness_field="quadratic_extension",
                                 gcd_factor=[p0, p1, p2], seed=seed)
    return _search_anisotropy(K, d, seed, lift_bound, rational_trials)


def _eval_forms_modp(forms_p, t, p):
    for K in forms_p:
        s = 0
        for i, ti in enumerate(t):
            if not ti:
                continue
            row = K[i]
            for j, tj in enumerate(t):
                if tj and row[j]:
                    s += ti * row[j] * tj
        if s % p:
            return False
    return True


def _forms_modp(forms, p):
    out = []
    for K in forms:
        rows = []
        for row in K:
            r = []
            for v in row:
                if v.denominator % p == 0:
                    return None
                r.append(v.numerator * pow(v.denominator, p - 2, p) % p)
            rows.append(r)
        out.append(rows)
    return out


def _projective_points(d, p):
    """All points of P^{d-1}(F_p), first nonzero coordinate normalized to 1."""
    for lead in range(d):
        tails = itertools.product(range(p), repeat=d - lead - 1)
        for tail in tails:
            yield [0] * lead + [1] + list(tail)


def _search_anisotropy(K, d, seed, lift_bound, rational_trials):
    rng = random.Random(seed)
    primes_tested = []
    search_points = {}
    for p in _SEARCH_PRIMES:
        count = (p ** d - 1) // (p - 1)
        if count > _SEARCH_POINT_BUDGET:
            continue
        forms_p = _forms_modp(K.forms, p)
        if forms_p is None:
            continue
        primes_tested.append(p)
        search_points[p] = count
        for t in _projective_points(d, p):
            if _eval_forms_modp(forms_p, t, p):
                witness = _try_rational_lift(K, t, p, rng, lift_bound,
                                             rational_trials)
                if witness is not None:
                    return AnisotropyVerdict(
                        "isotropic_witness", witness=witness, witness_field="QQ",
                        primes_tested=primes_tested, search_points=search_points,
                        seed=seed)
                return AnisotropyVerdict(
                    "isotropic_witness",
                    witness=[Fraction(x) for x in t], witness_field="F_p",
                    witness_prime=p, primes_tested=primes_tested,
                    search_points=search_points, seed=seed)
    trials = 0
    for _ in range(rational_trials):
        trials += 1
        t = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(d)]
        if any(t) and not any(K.kappa_via_forms(t)):
            return AnisotropyVerdict("isotropic_witness", witness=t,
                                     witness_field="QQ",
                                     primes_tested=primes_tested,
                                     search_points=search_points,
                                     rational_search_trials=trials, seed=seed)
    return AnisotropyVerdict("heuristic_anisotropic",
                             primes_tested=primes_tested,
                             search_points=search_points,
                             rational_search_trials=trials, seed=seed)


def _try_rational_lift(K, t_modp, p, rng, lift_bound, trials):
    """Bounded-height rational candidates from a mod-p zero."""
    centered = [Fraction(x if x <= p // 2 else x - p) for x in t_modp]
    candidates = [centered]
    for _ in range(trials):
        cand = [c + Fraction(rng.randint(-2, 2), rng.randint(1, 3)) for c in centered]
        candidates.append(cand)
    for cand in candidates:
        if not any(cand):
            continue
        if any(abs(x.numerator) > lift_bound or x.denominator > lift_bound
               for x in cand):
            continue
        if not any(K.kappa_via_forms(cand)):
            return cand
    return None
