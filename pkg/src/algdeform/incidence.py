"""The three-term deformation complex of a law on a quadratic locus.

At a point μ with F(μ) = 0 the complex is

    End(W) --δ_μ--> A_W --Φ_μ--> Q∨,   Φ_μ∘δ_μ = 0,

with δ_μ the infinitesimal transport action and Φ_μ = Θ(μ, ·) the
linearization of the identity map.  H¹ is the derivation algebra, H² the
first-order deformations modulo the orbit directions, H³ the primary
obstruction space.  The module also provides the Chevalley–Eilenberg
truncation on the Lie locus for cross-checking, and the pointwise rank
profile used by rank stratifications.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import exactlin, gram, laws
from .exactlin import QuotientSpace, RatMatrix, Subspace
from .laws import IdentitySpace, OperadType, Symmetry, _acc
from .presentations import QdualMode


class NotOnLocus(ValueError):
    """The law does not satisfy the presentation's identities."""

    def __init__(self, defect):
        self.defect = defect
        shown = dict(itertools.islice(defect.items(), 8))
        super().__init__(f"law is not on the locus; nonzero identity coordinates: {shown}")


class NotLie(ValueError):
    pass


class CompositeNotZero(ArithmeticError):
    """Φ∘δ failed to vanish (non-equivariant custom presentation)."""


# Cokernels above this ambient dimension are reported by dimension only.
H3_MATERIALIZE_LIMIT = 4096


class FiberComplex:
    """The complex at a fixed on-locus law, with cached linear algebra."""

    def __init__(self, law, pres, qdual, delta, phi):
        self.law = law
        self.pres = pres
        self.qdual = qdual
        self.delta = delta
        self.phi = phi
        self._cache = {}

    @property
    def m(self):
        return self.law.dim

    @property
    def g_dim(self):
        return self.m * self.m

    @property
    def ambient_dim(self):
        return self.pres.space.dim

    @property
    def model_dim(self):
        return self.qdual.dim

    def theta_model(self, a, b):
        """Θ(a, b) in the chosen Q∨ model coordinates."""
        return self.qdual.to_model(self.pres.theta(a, b))

    def ker_delta(self, mode="auto", seed=None):
        if "ker_delta" not in self._cache:
            self._cache["ker_delta"] = exactlin.kernel(self.delta, mode=mode, seed=seed)
        return self._cache["ker_delta"]

    def im_delta(self):
        if "im_delta" not in self._cache:
            self._cache["im_delta"] = exactlin.image(self.delta)
        return self._cache["im_delta"]

    def ker_phi(self, mode="auto", seed=None):
        if "ker_phi" not in self._cache:
            self._cache["ker_phi"] = exactlin.kernel(self.phi, mode=mode, seed=seed)
        return self._cache["ker_phi"]

    def im_phi(self):
        if "im_phi" not in self._cache:
            self._cache["im_phi"] = exactlin.image(self.phi)
        return self._cache["im_phi"]

    def __repr__(self):
        return (f"FiberComplex(m={self.m}, ambient={self.ambient_dim}, "
                f"model={self.model_dim}, qdual={self.qdual.mode.value})")


def build_complex(law, pres, qdual_mode=None, check_locus=True, check_composite=True):
    """Assemble the fiber complex at a law; verifies F(μ)=0 and Φ∘δ=0 exactly."""
    space = pres.space
    if law.symmetry != space.symmetry:
        if space.symmetry is Symmetry.NONE:
            law = law.with_symmetry_none()
        else:
            raise laws.SymmetryMismatch(
                f"law stored as {law.symmetry.value} but the presentation ambient "
                f"is {space.symmetry.value}")
    if check_locus:
        defect = pres.on_locus_defect(law)
        if defect:
            raise NotOnLocus(defect)
    delta = laws.delta_matrix(law, space)
    qdual = pres.qdual(qdual_mode)
    mu_coords = space.coords(law)
    columns = []
    for q in range(space.dim):
        v = pres.theta(mu_coords, {q: Fraction(1)})
        columns.append(qdual.to_model(v))
    phi = RatMatrix.from_columns(qdual.dim, columns)
    C = FiberComplex(law, pres, qdual, delta, phi)
    if check_composite:
        comp = phi.matmul(delta)
        if not comp.is_zero():
            raise CompositeNotZero(
                "Φ∘δ is nonzero; the presentation is not invariant under GL(W)")
    return C


@dataclass
class CohomologyReport:
    """Exact cohomology of a fiber complex plus the Euler bookkeeping."""

    h1_dim: int
    h2_dim: int
    h3_dim: int
    derivations: Subspace
    h2: QuotientSpace | None
    h3: QuotientSpace | None
    euler_lhs: int
    euler_rhs: int
    qdual_mode: QdualMode
    dims: tuple  # (dim g, dim A_W, dim Q∨ model)

    @property
    def euler_ok(self):
        return self.euler_lhs == self.euler_rhs


def cohomology(C, mode="auto", seed=None, materialize_limit=H3_MATERIALIZE_LIMIT):
    """Compute H¹, H², H³ with explicit bases / representatives."""
    ker_d = C.ker_delta(mode=mode, seed=seed)
    im_d = C.im_delta()
    ker_p = C.ker_phi(mode=mode, seed=seed)
    h2 = exactlin.quotient(ker_p, im_d)
    im_p = C.im_phi()
    h3_dim = C.model_dim - im_p.dim
    h3 = None
    if C.model_dim <= materialize_limit:
        h3 = exactlin.quotient(Subspace.full(C.model_dim), im_p)
        assert h3.dim == h3_dim
    h1_dim = ker_d.dim
    h2_dim = h2.dim
    euler_lhs = h1_dim - h2_dim + h3_dim
    euler_rhs = C.g_dim - C.ambient_dim + C.model_dim
    report = CohomologyReport(h1_dim, h2_dim, h3_dim, ker_d, h2, h3,
                              euler_lhs, euler_rhs, C.qdual.mode,
                              (C.g_dim, C.ambient_dim, C.model_dim))
    if not report.euler_ok:
        raise ArithmeticError("Euler identity violated; internal rank inconsistency")
    return report


def rank_profile(law, pres, qdual_mode=None, mode="auto", seed=None):
    """Pointwise ranks (rank δ_μ, rank Φ_μ, rank γ_μ) used by stratifications."""
    C = build_complex(law, pres, qdual_mode=qdual_mode, check_composite=False)
    rd = exactlin.rank(C.delta, mode=mode, seed=seed)
    rp = exactlin.rank(C.phi, mode=mode, seed=seed)
    rg = gram.gram(law).rank
    return rd, rp, rg


# ---------------------------------------------------------------------------
# Chevalley–Eilenberg truncation on the Lie locus
# ---------------------------------------------------------------------------

def ce_d2_apply(law, cochain):
    """CE differential of an alternating 2-cochain with adjoint coefficients.

    (d²c)(x,y,z) = μ(x,c(y,z)) − μ(y,c(x,z)) + μ(z,c(x,y))
                 − c(μ(x,y),z) + c(μ(x,z),y) − c(μ(y,z),x),
    returned in W ⊗ Λ³W∨ coordinates.
    """
    m = law.dim
    vspace = IdentitySpace(OperadType.LIE, m)
    out = {}
    one = Fraction(1)
    for (x, y, z) in vspace.triples:
        ex, ey, ez = {x: one}, {y: one}, {z: one}
        terms = [
            (1, law.apply(ex, cochain.apply_basis(y, z))),
            (-1, law.apply(ey, cochain.apply_basis(x, z))),
            (1, law.apply(ez, cochain.apply_basis(x, y))),
            (-1, cochain.apply(law.apply_basis(x, y), ez)),
            (1, cochain.apply(law.apply_basis(x, z), ey)),
            (-1, cochain.apply(law.apply_basis(y, z), ex)),
        ]
        for sign, vec in terms:
            for i, v in vec.items():
                _acc(out, vspace.index(i, x, y, z), sign * v)
    return out


def ce_truncation(law):
    """CE differentials (d¹, d²) in the bases of the fiber complex.

    d¹ is taken to be δ_μ itself; d² carries the standard CE sign convention.
    Requires a skew law satisfying the Jacobi identity.
    """
    if law.symmetry is not Symmetry.SKEW:
        raise NotLie("Chevalley–Eilenberg truncation needs a skew law")
    if not laws.is_on_locus(OperadType.LIE, law):
        raise NotLie("law does not satisfy the Jacobi identity")
    m = law.dim
    space = laws.LawSpace(m, Symmetry.SKEW)
    vspace = IdentitySpace(OperadType.LIE, m)
    d1 = laws.delta_matrix(law, space)
    columns = [ce_d2_apply(law, space.basis_law(q)) for q in range(space.dim)]
    d2 = RatMatrix.from_columns(vspace.dim, columns)
    return d1, d2
