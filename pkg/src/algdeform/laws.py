"""Bilinear algebra laws as structure-constant tensors.

A law is a bilinear multiplication μ: W⊗W → W on an m-dimensional space,
stored sparsely as μ(e_j, e_k) = Σ_i c[i,j,k]·e_i with an attached symmetry
type.  The module provides the GL(W) transport-of-structure action, its
derivative (the infinitesimal action ξ·μ), the matrix of δ_μ on End(W),
and exact evaluation of the defining operadic identities (Jacobiator,
associator, right-Leibniz defect).
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .exactlin import RatMatrix, rank, rref

Rat = Fraction


class Symmetry(Enum):
    NONE = "none"
    SYMMETRIC = "symmetric"
    SKEW = "skew"


class OperadType(Enum):
    ASSOC = "assoc"
    COMM = "comm"
    LIE = "lie"
    LEIB = "leib"
    CUSTOM = "custom"


# Required storage symmetry per operad type (None = any accepted, embedded
# into the full space W ⊗ (W∨)^⊗2).
OPERAD_SYMMETRY = {
    OperadType.LIE: Symmetry.SKEW,
    OperadType.COMM: Symmetry.SYMMETRIC,
    OperadType.ASSOC: Symmetry.NONE,
    OperadType.LEIB: Symmetry.NONE,
}


class SymmetryMismatch(ValueError):
    pass


class SingularGroupElement(ValueError):
    pass


class TruncPoly:
    """Element of ℚ[t]/(t^order): exact truncated polynomial scalar."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=3):
        cs = list(coeffs) + [Fraction(0)] * (order - len(coeffs))
        self.coeffs = tuple(Fraction(c) for c in cs[:order])
        self.order = order

    @classmethod
    def const(cls, c, order=3):
        return cls([Fraction(c)], order)

    @classmethod
    def t(cls, order=3):
        return cls([0, 1], order)

    def __add__(self, other):
        other = self._coerce(other)
        return TruncPoly([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return TruncPoly([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return TruncPoly([-a for a in self.coeffs], self.order)

    def __mul__(self, other):
        other = self._coerce(other)
        out = [Fraction(0)] * self.order
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= self.order:
                    break
                if b:
                    out[i + j] += a * b
        return TruncPoly(out, self.order)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, TruncPoly):
            assert other.order == self.order
            return other
        return TruncPoly.const(other, self.order)

    def __eq__(self, other):
        if isinstance(other, TruncPoly):
            return self.coeffs == other.coeffs
        if not other:
            return not any(self.coeffs)
        return self.coeffs == TruncPoly.const(other, self.order).coeffs

    def __bool__(self):
        return any(self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncPoly({list(self.coeffs)})"


class Law:
    """Structure-constant tensor of a bilinear law; treat as immutable.

    Entries are stored as a full sparse tensor {(i, j, k): value} containing
    both argument orientations for symmetric/skew laws.  Values are Fraction
    for ordinary laws; any exact commutative ring element (e.g. TruncPoly)
    works for identity evaluation.
    """

    __slots__ = ("dim", "symmetry", "c", "_by_args", "_by_first", "_by_second")

    def __init__(self, dim, symmetry, c):
        self.dim = dim
        self.symmetry = symmetry
        self.c = c
        self._by_args = None
        self._by_first = None
        self._by_second = None

    @classmethod
    def from_entries(cls, dim, symmetry, entries):
        """Build from {(i,j,k): value}; mirrored orientations are filled in
        and cross-checked against the symmetry type."""
        c = {}
        for (i, j, k), val in entries.items():
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise ValueError(f"index out of range: {(i, j, k)}")
            if val == 0:
                continue
            cur = c.get((i, j, k))
            c[(i, j, k)] = val if cur is None else cur + val
            if c[(i, j, k)] == 0:
                del c[(i, j, k)]
        if symmetry is Symmetry.SKEW:
            for (i, j, k), val in list(c.items()):
                if j == k:
                    raise SymmetryMismatch("skew law with nonzero diagonal entry")
                mirror = c.get((i, k, j))
                if mirror is None:
                    c[(i, k, j)] = -val
                elif mirror != -val:
                    raise SymmetryMismatch("inconsistent skew entries")
        elif symmetry is Symmetry.SYMMETRIC:
            for (i, j, k), val in list(c.items()):
                if j == k:
                    continue
                mirror = c.get((i, k, j))
                if mirror is None:
                    c[(i, k, j)] = val
                elif mirror != val:
                    raise SymmetryMismatch("inconsistent symmetric entries")
        return cls(dim, symmetry, c)

    @classmethod
    def zero(cls, dim, symmetry=Symmetry.NONE):
        return cls(dim, symmetry, {})

    def entry(self, i, j, k):
        return self.c.get((i, j, k), Fraction(0))

    def items(self):
        return self.c.items()

    def is_zero(self):
        return not self.c

    @property
    def by_args(self):
        """(j, k) -> {i: value}."""
        if self._by_args is None:
            d = {}
            for (i, j, k), val in self.c.items():
                d.setdefault((j, k), {})[i] = val
            self._by_args = d
        return self._by_args

    @property
    def by_first(self):
        """j -> list of (i, k, value): entries with first argument e_j."""
        if self._by_first is None:
            d = {}
            for (i, j, k), val in self.c.items():
                d.setdefault(j, []).append((i, k, val))
            self._by_first = d
        return self._by_first

    @property
    def by_second(self):
        """k -> list of (i, j, value): entries with second argument e_k."""
        if self._by_second is None:
            d = {}
            for (i, j, k), val in self.c.items():
                d.setdefault(k, []).append((i, j, val))
            self._by_second = d
        return self._by_second

    def apply_basis(self, j, k):
        """μ(e_j, e_k) as a sparse vector."""
        col = self.by_args.get((j, k))
        return dict(col) if col else {}

    def apply(self, x, y):
        """μ(x, y) for sparse vectors x, y."""
        out = {}
        by_args = self.by_args
        for j, xv in x.items():
            for k, yv in y.items():
                col = by_args.get((j, k))
                if not col:
                    continue
                f = xv * yv
                for i, cv in col.items():
                    s = out.get(i, 0) + f * cv
                    if s:
                        out[i] = s
                    else:
                        out.pop(i, None)
        return out

    def add(self, other):
        assert self.dim == other.dim and self.symmetry == other.symmetry
        c = dict(self.c)
        for key, val in other.c.items():
            s = c.get(key, 0) + val
            if s:
                c[key] = s
            else:
                c.pop(key, None)
        return Law(self.dim, self.symmetry, c)

    def scale(self, f):
        if f == 0:
            return Law(self.dim, self.symmetry, {})
        return Law(self.dim, self.symmetry, {k: f * v for k, v in self.c.items()})

    def with_symmetry_none(self):
        return Law(self.dim, Symmetry.NONE, dict(self.c))

    def __eq__(self, other):
        return (isinstance(other, Law) and self.dim == other.dim
                and self.symmetry == other.symmetry and self.c == other.c)

    def __repr__(self):
        return f"Law(dim={self.dim}, {self.symmetry.value}, nnz={len(self.c)})"


class LawSpace:
    """Coordinate model of the ambient space of laws for (m, symmetry).

    Basis ordering is lexicographic on (i, j, k) with j<k for skew laws,
    j≤k for symmetric ones, and all (j, k) otherwise.
    """

    def __init__(self, m, symmetry):
        self.m = m
        self.symmetry = symmetry
        if symmetry is Symmetry.SKEW:
            pairs = [(j, k) for j in range(m) for k in range(j + 1, m)]
        elif symmetry is Symmetry.SYMMETRIC:
            pairs = [(j, k) for j in range(m) for k in range(j, m)]
        else:
            pairs = [(j, k) for j in range(m) for k in range(m)]
        self.pairs = pairs
        self.pair_index = {p: a for a, p in enumerate(pairs)}
        self.dim = m * len(pairs)

    def index(self, i, j, k):
        """Coordinate index and sign for the full-tensor position (i, j, k);
        None if the position is forced to zero (skew diagonal)."""
        npairs = len(self.pairs)
        if self.symmetry is Symmetry.SKEW:
            if j == k:
                return None
            if j < k:
                return i * npairs + self.pair_index[(j, k)], 1
            return i * npairs + self.pair_index[(k, j)], -1
        if self.symmetry is Symmetry.SYMMETRIC:
            if j > k:
                j, k = k, j
            return i * npairs + self.pair_index[(j, k)], 1
        return i * npairs + self.pair_index[(j, k)], 1

    def decode(self, a):
        """Coordinate index -> (i, j, k) canonical position."""
        npairs = len(self.pairs)
        i, p = divmod(a, npairs)
        j, k = self.pairs[p]
        return i, j, k

    def coords(self, law):
        """Sparse coordinate vector of a law in this model."""
        assert law.dim == self.m and law.symmetry == self.symmetry
        npairs = len(self.pairs)
        out = {}
        for (i, j, k), val in law.c.items():
            if self.symmetry is not Symmetry.NONE and j > k:
                continue
            out[i * npairs + self.pair_index[(j, k)]] = val
        return out

    def law(self, v):
        """Law from a sparse or dense coordinate vector."""
        if not isinstance(v, dict):
            v = {a: Fraction(x) for a, x in enumerate(v) if x}
        entries = {}
        for a, val in v.items():
            i, j, k = self.decode(a)
            entries[(i, j, k)] = val
        return Law.from_entries(self.m, self.symmetry, entries)

    def basis_law(self, a):
        i, j, k = self.decode(a)
        return Law.from_entries(self.m, self.symmetry, {(i, j, k): Fraction(1)})


# ---------------------------------------------------------------------------
# matrices on W (elements of End(W) / GL(W))
# ---------------------------------------------------------------------------

def identity_matrix(m):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(m)] for i in range(m)]

def matmul(a, b):
    m = len(a)
    n = len(b[0])
    k = len(b)
    return [[sum((a[i][s] * b[s][j] for s in range(k)), Fraction(0)) for j in range(n)]
            for i in range(m)]


def matinv(g):
    """Exact inverse of a square matrix; raises SingularGroupElement."""
    m = len(g)
    aug = RatMatrix.from_dense([list(row) + [Fraction(1) if i == j else Fraction(0)
                                             for j in range(m)]
                                for i, row in enumerate(g)])
    r, piv_cols, rows = rref(aug, allowed=set(range(m)))
    if r < m:
        raise SingularGroupElement("matrix is not invertible")
    inv = [[Fraction(0)] * m for _ in range(m)]
    for idx, p in enumerate(piv_cols):
        for c, val in rows[idx].items():
            if c >= m:
                inv[p][c - m] = val
    return inv


def random_invertible(m, rng, bound=3):
    """Random invertible matrix with small integer entries."""
    while True:
        g = [[Fraction(rng.randint(-bound, bound)) for _ in range(m)] for _ in range(m)]
        if rank(RatMatrix.from_dense(g)) == m:
            return g


def act(g, law):
    """Transport of structure (g·μ)(x, y) = g μ(g⁻¹x, g⁻¹y)."""
    ginv = matinv(g)
    m = law.dim
    partial = {}
    for (a, b, cc), val in law.c.items():
        for j in range(m):
            gb = ginv[b][j]
            if not gb:
                continue
            vb = val * gb
            for k in range(m):
                gc = ginv[cc][k]
                if not gc:
                    continue
                key = (a, j, k)
                s = partial.get(key, 0) + vb * gc
                if s:
                    partial[key] = s
                else:
                    partial.pop(key, None)
    out = {}
    for (a, j, k), val in partial.items():
        for i in range(m):
            gi = g[i][a]
            if not gi:
                continue
            key = (i, j, k)
            s = out.get(key, 0) + gi * val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return Law(m, law.symmetry, out)


def inf_act(xi, law):
    """Infinitesimal transport (ξ·μ)(x,y) = ξμ(x,y) − μ(ξx,y) − μ(x,ξy)."""
    m = law.dim
    out = {}

    def acc(key, val):
        s = out.get(key, 0) + val
        if s:
            out[key] = s
        else:
            del out[key]

    for (s, j, k), val in law.c.items():
        for i in range(m):
            x = xi[i][s]
            if x:
                acc((i, j, k), x * val)
    for (i, s, k), val in law.c.items():
        for j in range(m):
            x = xi[s][j]
            if x:
                acc((i, j, k), -val * x)
    for (i, j, s), val in law.c.items():
        for k in range(m):
            x = xi[s][k]
            if x:
                acc((i, j, k), -val * x)
    return Law(m, law.symmetry, out)


def elementary_matrix(m, a, b):
    """E_ab with E_ab(e_b) = e_a."""
    e = [[Fraction(0)] * m for _ in range(m)]
    e[a][b] = Fraction(1)
    return e


def delta_matrix(law, space=None):
    """Matrix of δ_μ: End(W) → A_W on the standard basis E_ab.

    Shape dim(A_W) × m²; column index of E_ab is a·m + b.  Its kernel is the
    derivation algebra of the law.
    """
    m = law.dim
    if space is None:
        space = LawSpace(m, law.symmetry)
    columns = []
    for a in range(m):
        for b in range(m):
            img = inf_act(elementary_matrix(m, a, b), law)
            columns.append(space.coords(img))
    return RatMatrix.from_columns(space.dim, columns)


def derivations(law):
    """Derivation algebra as a subspace of End(W) (coords a·m + b)."""
    from .exactlin import kernel
    return kernel(delta_matrix(law))


# ---------------------------------------------------------------------------
# identity target spaces and exact identity evaluation
# ---------------------------------------------------------------------------

class IdentitySpace:
    """Coordinate model of the ambient identity space V for an operad type.

    Lie: W ⊗ Λ³W∨ with triples j<k<l.  Assoc/Leib/Comm: W ⊗ (W∨)^⊗3 with all
    ordered triples (the commutative associator is kept in full coordinates).
    """

    def __init__(self, optype, m):
        self.optype = optype
        self.m = m
        if optype is OperadType.LIE:
            self.triples = [(j, k, l) for j in range(m)
                            for k in range(j + 1, m) for l in range(k + 1, m)]
            self.triple_index = {t: n for n, t in enumerate(self.triples)}
            self.dim = m * len(self.triples)
        else:
            self.triples = None
            self.triple_index = None
            self.dim = m ** 4

    def index(self, i, j, k, l):
        if self.optype is OperadType.LIE:
            return i * len(self.triples) + self.triple_index[(j, k, l)]
        m = self.m
        return ((i * m + j) * m + k) * m + l

    def decode(self, a):
        if self.optype is OperadType.LIE:
            i, t = divmod(a, len(self.triples))
            j, k, l = self.triples[t]
            return i, j, k, l
        m = self.m
        a, l = divmod(a, m)
        a, k = divmod(a, m)
        i, j = divmod(a, m)
        return i, j, k, l


def _acc(out, key, val):
    s = out.get(key, 0) + val
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def identity_value(optype, law, vspace=None):
    """Evaluate the defining quadratic identity of an operad type on a law.

    Returns the sparse coordinate vector of F(μ) in the identity space:
    Jacobiator for Lie, associator for Assoc/Comm, right-Leibniz defect for
    Leib.  Works over any exact coefficient ring (Fraction, TruncPoly).
    """
    m = law.dim
    if optype is OperadType.LIE:
        if law.symmetry is not Symmetry.SKEW:
            raise SymmetryMismatch("Lie identity requires a skew law")
    elif optype is OperadType.COMM:
        if law.symmetry is not Symmetry.SYMMETRIC:
            raise SymmetryMismatch("commutative identity requires a symmetric law")
    elif optype is OperadType.CUSTOM:
        raise ValueError("custom presentations evaluate identities through theta")
    if vspace is None:
        vspace = IdentitySpace(optype, m)
    out = {}
    if optype is OperadType.LIE:
        for (j, k, l) in vspace.triples:
            val = law.apply(law.apply_basis(j, k), {l: Fraction(1)})
            val2 = law.apply(law.apply_basis(k, l), {j: Fraction(1)})
            val3 = law.apply(law.apply_basis(l, j), {k: Fraction(1)})
            for i, v in val.items():
                _acc(out, vspace.index(i, j, k, l), v)
            for i, v in val2.items():
                _acc(out, vspace.index(i, j, k, l), v)
            for i, v in val3.items():
                _acc(out, vspace.index(i, j, k, l), v)
        return out
    for j in range(m):
        ej = {j: Fraction(1)}
        for k in range(m):
            ek = {k: Fraction(1)}
            mu_jk = law.apply_basis(j, k)
            for l in range(m):
                el = {l: Fraction(1)}
                left = law.apply(mu_jk, el)
                right = law.apply(ej, law.apply_basis(k, l))
                if optype is OperadType.LEIB:
                    mid = law.apply(law.apply_basis(j, l), ek)
                    for i, v in left.items():
                        _acc(out, vspace.index(i, j, k, l), v)
                    for i, v in mid.items():
                        _acc(out, vspace.index(i, j, k, l), -v)
                    for i, v in right.items():
                        _acc(out, vspace.index(i, j, k, l), -v)
                else:
                    for i, v in left.items():
                        _acc(out, vspace.index(i, j, k, l), v)
                    for i, v in right.items():
                        _acc(out, vspace.index(i, j, k, l), -v)
    return out


def is_on_locus(optype, law):
    return not identity_value(optype, law)
