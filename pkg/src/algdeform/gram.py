"""The trace form of right multiplications and its rank stratification data.

For a law μ the Gram form is γ_μ(v, w) = Tr(R_v R_w) with R_v(x) = μ(x, v).
Its rank is constant on GL(W)-orbits, so it separates orbits; its radical
contains the standard structural ideals (Leibniz kernel, nilradical,
Jacobson radical) on the operadic loci.  On Lie laws R_v = −ad_v and γ is
the Killing form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import exactlin, laws
from .exactlin import RatMatrix, Subspace
from .laws import OperadType


class NeedExplicitIdeal(ValueError):
    """The nilpotency heuristic could not produce a structural ideal."""


@dataclass
class GramForm:
    matrix: RatMatrix
    rank: int
    radical: Subspace

    def value(self, v, w):
        """γ(v, w) for sparse vectors."""
        out = Fraction(0)
        Mv = self.matrix.matvec(w)
        for i, x in v.items():
            y = Mv.get(i)
            if y:
                out += x * y
        return out


def right_mult(law, b):
    """R_{e_b} as a sparse matrix dict {(i, a): value}: R(e_a) = μ(e_a, e_b)."""
    out = {}
    for (i, a, k), val in law.c.items():
        if k == b:
            out[(i, a)] = val
    return out


def left_mult(law, b):
    """L_{e_b}: L(e_a) = μ(e_b, e_a)."""
    out = {}
    for (i, j, a), val in law.c.items():
        if j == b:
            out[(i, a)] = val
    return out


def _trace_product(R, S):
    """Tr(R·S) for sparse operator dicts."""
    by_row = {}
    for (i, a), val in S.items():
        by_row.setdefault(i, []).append((a, val))
    out = Fraction(0)
    for (i, a), rv in R.items():
        for (j, sv) in by_row.get(a, ()):
            if j == i:
                out += rv * sv
    return out


def gram(law):
    """Exact Gram form with rank and radical."""
    m = law.dim
    rights = [right_mult(law, b) for b in range(m)]
    entries = {}
    for v in range(m):
        for w in range(v, m):
            t = _trace_product(rights[v], rights[w])
            if t:
                entries[(v, w)] = t
                if v != w:
                    entries[(w, v)] = t
    G = RatMatrix.from_entries(m, m, entries)
    radical = exactlin.kernel(G)
    return GramForm(G, m - radical.dim, radical)


def killing_form(law):
    """Tr(ad_v ad_w) computed from left multiplications; Lie cross-check."""
    m = law.dim
    ads = [left_mult(law, b) for b in range(m)]
    entries = {}
    for v in range(m):
        for w in range(v, m):
            t = _trace_product(ads[v], ads[w])
            if t:
                entries[(v, w)] = t
                if v != w:
                    entries[(w, v)] = t
    return RatMatrix.from_entries(m, m, entries)


def leibniz_kernel(law):
    """span{μ(v, v)} ⊆ W, generated by squares and polarized squares."""
    m = law.dim
    vecs = []
    for i in range(m):
        vecs.append(law.apply_basis(i, i))
    for i in range(m):
        for j in range(i + 1, m):
            v = law.apply_basis(i, j)
            w = law.apply_basis(j, i)
            vecs.append(exactlin.vadd(v, w))
    return Subspace.from_vectors(m, vecs)


def _is_nilpotent_operator(op, m):
    """Nilpotency of a sparse operator dict by iterated squaring."""
    cur = op
    steps = 0
    while cur and steps <= m.bit_length() + 1:
        nxt = {}
        by_row = {}
        for (i, a), val in cur.items():
            by_row.setdefault(i, []).append((a, val))
        for (i, a), val in cur.items():
            for (j, w) in by_row.get(a, ()):
                key = (i, j)
                s = nxt.get(key, 0) + val * w
                if s:
                    nxt[key] = s
                else:
                    nxt.pop(key, None)
        cur = nxt
        steps += 1
    return not cur


def nilpotent_ideal(law):
    """Heuristic nilpotent ideal: span of basis vectors with nilpotent
    multiplication operators, verified to be a two-sided ideal.

    Raises NeedExplicitIdeal when the span fails the ideal check; such
    inputs must supply the structural ideal explicitly.
    """
    m = law.dim
    gens = []
    for b in range(m):
        if _is_nilpotent_operator(left_mult(law, b), m) and \
           _is_nilpotent_operator(right_mult(law, b), m):
            gens.append({b: Fraction(1)})
    S = Subspace.from_vectors(m, gens)
    for row in S.rows:
        for b in range(m):
            eb = {b: Fraction(1)}
            if not S.contains(law.apply(row, eb)) or not S.contains(law.apply(eb, row)):
                raise NeedExplicitIdeal(
                    "nilpotency-detected span is not an ideal; pass the ideal explicitly")
    return S


@dataclass
class RadicalReport:
    gram: GramForm
    ideal: Subspace
    contained: bool
    ideal_source: str


def radical_containment(law, optype, ideal=None):
    """Check the structural ideal sits inside the Gram radical.

    Leibniz: the Leibniz kernel span{μ(v,v)}.  Assoc/Comm: a user-supplied
    ideal or the nilpotency-detected one.  Lie laws have zero Leibniz kernel,
    so the containment is vacuous.
    """
    if not laws.is_on_locus(optype, law):
        from .incidence import NotOnLocus
        raise NotOnLocus(laws.identity_value(optype, law))
    G = gram(law)
    if ideal is not None:
        src = "user-supplied"
    elif optype in (OperadType.LEIB, OperadType.LIE):
        ideal = leibniz_kernel(law)
        src = "leibniz-kernel"
    else:
        ideal = nilpotent_ideal(law)
        src = "nilpotency-detected"
    return RadicalReport(G, ideal, G.radical.contains_subspace(ideal), src)


@dataclass
class OrbitConstancyReport:
    base_rank: int
    trials: int
    ranks: list
    constant: bool


def gram_orbit_constancy(law, trials=50, seed=None, bound=3):
    """rank γ under random transport of structure; must be constant."""
    rng = random.Random(exactlin.DEFAULT_SEED if seed is None else seed)
    base = gram(law).rank
    ranks = []
    for _ in range(trials):
        g = laws.random_invertible(law.dim, rng, bound=bound)
        ranks.append(gram(laws.act(g, law)).rank)
    return OrbitConstancyReport(base, trials, ranks, all(r == base for r in ranks))
