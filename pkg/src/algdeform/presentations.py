"""Quadratic presentations of algebra varieties and their polarizations.

A presentation packages the quadratic identity map F: A_W → V whose
coordinate forms cut out the locus of laws (Jacobi, associativity, ...),
together with the symmetric bilinear polarization Θ with Θ(ν,ν) = F(ν).
Builtin operadic presentations evaluate Θ structurally from sparse
structure constants; custom presentations carry an explicit symmetric
3-tensor B with F(ν)_a = Σ B[a,p,q] ν_p ν_q.

The dual identity space Q∨ can be modeled either as the full ambient V
("ambient") or as the span of all polarization values Θ(e_p, e_q)
("span"); the choice affects only how the cokernel H³ is presented.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .exactlin import Subspace
from .laws import (IdentitySpace, LawSpace, OperadType, Symmetry,
                   OPERAD_SYMMETRY, _acc, identity_value)


class DimensionMismatch(ValueError):
    pass


class AsymmetricTensor(ValueError):
    pass


class SpanTooLarge(ValueError):
    pass


class QdualMode(Enum):
    AMBIENT = "ambient"
    SPAN = "span"


# Span enumeration is quadratic in the ambient dimension; guard it.
SPAN_GUARD = 200


def _parity_even(u, v, w):
    """True if (u,v,w) is an even permutation of its sorted ordering."""
    inv = (u > v) + (u > w) + (v > w)
    return inv % 2 == 0


def _lie_pairing(a, b, vspace):
    """G(a,b)(x<y<z) = a(b(x,y),z) + a(b(y,z),x) + a(b(z,x),y), sparse."""
    out = {}
    by_first = a.by_first
    for (s, u, v), bv in b.items():
        hits = by_first.get(s)
        if not hits:
            continue
        for (i, w, av) in hits:
            if w == u or w == v:
                continue
            if _parity_even(u, v, w):
                x, y, z = sorted((u, v, w))
                _acc(out, vspace.index(i, x, y, z), bv * av)
    return out


def _assoc_pairing(a, b, vspace):
    """G(a,b)(x,y,z) = a(b(x,y),z) − a(x,b(y,z)), sparse full coordinates."""
    out = {}
    by_first = a.by_first
    by_second = a.by_second
    for (s, x, y), bv in b.items():
        for (i, z, av) in by_first.get(s, ()):
            _acc(out, vspace.index(i, x, y, z), bv * av)
    for (s, y, z), bv in b.items():
        for (i, x, av) in by_second.get(s, ()):
            _acc(out, vspace.index(i, x, y, z), -bv * av)
    return out


def _leib_pairing(a, b, vspace):
    """G(a,b)(x,y,z) = a(b(x,y),z) − a(b(x,z),y) − a(x,b(y,z))."""
    out = {}
    by_first = a.by_first
    by_second = a.by_second
    for (s, x, y), bv in b.items():
        for (i, z, av) in by_first.get(s, ()):
            _acc(out, vspace.index(i, x, y, z), bv * av)
    for (s, x, z), bv in b.items():
        for (i, y, av) in by_first.get(s, ()):
            _acc(out, vspace.index(i, x, y, z), -bv * av)
    for (s, y, z), bv in b.items():
        for (i, x, av) in by_second.get(s, ()):
            _acc(out, vspace.index(i, x, y, z), -bv * av)
    return out


_PAIRINGS = {
    OperadType.LIE: _lie_pairing,
    OperadType.ASSOC: _assoc_pairing,
    OperadType.COMM: _assoc_pairing,
    OperadType.LEIB: _leib_pairing,
}


class QuadraticPresentation:
    """Quadratic identity map with its polarization; builtin or custom."""

    def __init__(self, optype, space, target_dim, vspace=None, btensor=None):
        self.optype = optype
        self.space = space
        self.target_dim = target_dim
        self.vspace = vspace
        self.btensor = btensor
        self._qdual_cache = {}

    @property
    def ambient_dim(self):
        return self.space.dim

    def _pair(self, a_law, b_law):
        return _PAIRINGS[self.optype](a_law, b_law, self.vspace)

    def theta(self, a, b):
        """Polarized value Θ(a, b) for sparse coordinate vectors a, b."""
        n = self.ambient_dim
        for v in (a, b):
            if v and (min(v) < 0 or max(v) >= n):
                raise DimensionMismatch(
                    f"coordinate index outside the {n}-dimensional ambient")
        if self.btensor is not None:
            out = {}
            for (c, p, q), val in self.btensor.items():
                ap = a.get(p)
                if not ap:
                    continue
                bq = b.get(q)
                if bq:
                    _acc(out, c, val * ap * bq)
            return out
        half = Fraction(1, 2)
        a_law = self.space.law(a)
        b_law = self.space.law(b)
        g1 = self._pair(a_law, b_law)
        g2 = self._pair(b_law, a_law)
        out = {}
        for key, val in g1.items():
            _acc(out, key, half * val)
        for key, val in g2.items():
            _acc(out, key, half * val)
        return out

    def theta_laws(self, a_law, b_law):
        """Θ on law objects directly (skips coordinate round-trips)."""
        if self.btensor is not None:
            return self.theta(self.space.coords(a_law), self.space.coords(b_law))
        half = Fraction(1, 2)
        out = {}
        for key, val in self._pair(a_law, b_law).items():
            _acc(out, key, half * val)
        for key, val in self._pair(b_law, a_law).items():
            _acc(out, key, half * val)
        return out

    def f_value(self, v):
        """F(ν) = Θ(ν, ν)."""
        if self.btensor is not None:
            return self.theta(v, v)
        v_law = self.space.law(v)
        return self._pair(v_law, v_law)

    def on_locus_defect(self, law):
        """Nonzero coordinates of F(μ); empty iff μ lies on the locus."""
        if self.btensor is not None:
            return self.f_value(self.space.coords(law))
        return identity_value(self.optype, law, self.vspace)

    def qdual(self, mode=None):
        """Model of the dual identity space Q∨ for the given mode."""
        if mode is None:
            mode = default_qdual_mode(self.optype, self.ambient_dim)
        if mode not in self._qdual_cache:
            self._qdual_cache[mode] = _build_qdual(self, mode)
        return self._qdual_cache[mode]

    def __repr__(self):
        return (f"QuadraticPresentation({self.optype.value}, ambient={self.ambient_dim}, "
                f"target={self.target_dim})")


class QdualSpace:
    """Chosen model of Q∨: the full ambient V, or the span of Θ values."""

    def __init__(self, mode, target_dim, span=None, ambient_fallback=False):
        self.mode = mode
        self.target_dim = target_dim
        self.span = span
        self.ambient_fallback = ambient_fallback

    @property
    def dim(self):
        if self.mode is QdualMode.AMBIENT:
            return self.target_dim
        return self.span.dim

    def to_model(self, v):
        """Coordinates of an ambient-V vector in this model."""
        if self.mode is QdualMode.AMBIENT:
            return dict(v)
        coords = self.span.coordinates(v)
        if coords is None:
            raise ValueError("value outside the polarization span")
        return {i: c for i, c in enumerate(coords) if c}

    def __repr__(self):
        return f"QdualSpace({self.mode.value}, dim={self.dim})"


def default_qdual_mode(optype, ambient_dim):
    """Ambient for Lie; span for the other operad types when feasible."""
    if optype in (OperadType.LIE, OperadType.CUSTOM):
        return QdualMode.AMBIENT
    if ambient_dim <= SPAN_GUARD:
        return QdualMode.SPAN
    return QdualMode.AMBIENT


def _build_qdual(pres, mode):
    if mode is QdualMode.AMBIENT:
        return QdualSpace(QdualMode.AMBIENT, pres.target_dim)
    n = pres.ambient_dim
    if n > SPAN_GUARD:
        raise SpanTooLarge(
            f"span enumeration over {n}² basis pairs exceeds the guard ({SPAN_GUARD})")
    vecs = []
    for p in range(n):
        ep = {p: Fraction(1)}
        for q in range(p, n):
            v = pres.theta(ep, {q: Fraction(1)})
            if v:
                vecs.append(v)
    span = Subspace.from_vectors(pres.target_dim, vecs)
    return QdualSpace(QdualMode.SPAN, pres.target_dim, span=span)


def presentation(optype, m):
    """Builtin operadic presentation on the ambient of the proper symmetry."""
    if optype is OperadType.CUSTOM:
        raise ValueError("use custom_presentation for custom identity maps")
    space = LawSpace(m, OPERAD_SYMMETRY[optype])
    vspace = IdentitySpace(optype, m)
    return QuadraticPresentation(optype, space, vspace.dim, vspace=vspace)


def custom_presentation(btensor, ambient_dim, target_dim, symmetry=Symmetry.NONE, m=None):
    """Presentation from an explicit symmetric 3-tensor {(a,p,q): value}.

    The tensor must satisfy B[a,p,q] = B[a,q,p] (AsymmetricTensor otherwise).
    The ambient is a plain coordinate space unless (m, symmetry) identify it
    with a law space of matching dimension.
    """
    clean = {}
    for (a, p, q), val in btensor.items():
        val = Fraction(val)
        if not val:
            continue
        if not (0 <= a < target_dim and 0 <= p < ambient_dim and 0 <= q < ambient_dim):
            raise DimensionMismatch(f"tensor index out of range: {(a, p, q)}")
        clean[(a, p, q)] = val
    for (a, p, q), val in clean.items():
        if clean.get((a, q, p), Fraction(0)) != val:
            raise AsymmetricTensor(f"B[{a},{p},{q}] != B[{a},{q},{p}]")
    if m is None:
        space = _PlainCoordinateSpace(ambient_dim, symmetry)
    else:
        space = LawSpace(m, symmetry)
        if space.dim != ambient_dim:
            raise DimensionMismatch(
                f"law space for m={m} has dimension {space.dim}, not {ambient_dim}")
    return QuadraticPresentation(OperadType.CUSTOM, space, target_dim, btensor=clean)


class _PlainCoordinateSpace:
    """Coordinate-only stand-in for LawSpace when no law structure is given."""

    def __init__(self, dim, symmetry):
        self.dim = dim
        self.m = None
        self.symmetry = symmetry

    def coords(self, v):
        return dict(v)

    def law(self, v):
        return dict(v)
