"""Exact linear algebra over the rationals.

Sparse matrices with Fraction entries, rank / kernel / image / solve,
subspaces in reduced row echelon form, quotient spaces, and a certified
multi-prime modular fast path for large sparse rank and kernel problems.

All results are exact.  The modular path is only an accelerator: a rank
obtained mod p is a lower bound, and it is promoted to a certified answer
by exhibiting an exact rational kernel basis of the complementary
dimension (verified entry by entry against the full matrix).  On any
failure the code falls back to exact elimination.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

Rat = Fraction

DEFAULT_SEED = 0x1A2B3C

_PRIME_LOW = 1 << 60
_PRIME_HIGH = 1 << 61

# Below this size (rows and cols) the exact path is used unconditionally.
_AUTO_EXACT_LIMIT = 96


class SubspaceNotContained(ValueError):
    """Raised by quotient() when the denominator is not inside the numerator."""


class NotInSpan(ValueError):
    """Raised when a vector is reduced against a space that does not contain it."""


# ---------------------------------------------------------------------------
# sparse vectors: plain dicts {index: Fraction}, no zero entries stored
# ---------------------------------------------------------------------------

def vec_from_list(xs):
    return {i: Fraction(x) for i, x in enumerate(xs) if x}


def vec_to_list(v, n):
    out = [Fraction(0)] * n
    for i, x in v.items():
        out[i] = x
    return out


def vadd(u, v):
    out = dict(u)
    for i, x in v.items():
        s = out.get(i, 0) + x
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def vsub(u, v):
    out = dict(u)
    for i, x in v.items():
        s = out.get(i, 0) - x
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def vscale(c, v):
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def vaxpy(acc, c, v):
    """acc += c*v in place (acc a mutable dict)."""
    if not c:
        return acc
    for i, x in v.items():
        s = acc.get(i, 0) + c * x
        if s:
            acc[i] = s
        else:
            acc.pop(i, None)
    return acc


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class RatMatrix:
    """Sparse row-major matrix over ℚ.  Treat instances as immutable."""

    __slots__ = ("nrows", "ncols", "row_data", "_col_data")

    def __init__(self, nrows, ncols, row_data=None):
        self.nrows = nrows
        self.ncols = ncols
        self.row_data = row_data if row_data is not None else [{} for _ in range(nrows)]
        self._col_data = None

    @classmethod
    def from_dense(cls, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        data = [vec_from_list(r) for r in rows]
        return cls(nrows, ncols, data)

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        data = [{} for _ in range(nrows)]
        items = entries.items() if isinstance(entries, dict) else entries
        for key, val in items:
            i, j = key
            val = Fraction(val)
            if val:
                data[i][j] = val
        return cls(nrows, ncols, data)

    @classmethod
    def from_columns(cls, nrows, columns):
        data = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, val in col.items():
                if val:
                    data[i][j] = val
        return cls(nrows, len(columns), data)

    @classmethod
    def zero(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    def entry(self, i, j):
        return self.row_data[i].get(j, Fraction(0))

    @property
    def nnz(self):
        return sum(len(r) for r in self.row_data)

    def is_zero(self):
        return all(not r for r in self.row_data)

    def _cols(self):
        if self._col_data is None:
            cols = {}
            for i, row in enumerate(self.row_data):
                for j, val in row.items():
                    cols.setdefault(j, {})[i] = val
            self._col_data = cols
        return self._col_data

    def column(self, j):
        return dict(self._cols().get(j, {}))

    def matvec(self, v):
        """M·v for a sparse vector indexed by columns."""
        cols = self._cols()
        out = {}
        for j, x in v.items():
            if not x:
                continue
            col = cols.get(j)
            if not col:
                continue
            for i, m in col.items():
                s = out.get(i, 0) + m * x
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def matmul(self, other):
        assert self.ncols == other.nrows
        cols = [self.matvec(other.column(j)) for j in range(other.ncols)]
        return RatMatrix.from_columns(self.nrows, cols)

    def scaled(self, c):
        c = Fraction(c)
        if not c:
            return RatMatrix.zero(self.nrows, self.ncols)
        return RatMatrix(self.nrows, self.ncols,
                         [{j: c * v for j, v in r.items()} for r in self.row_data])

    def transpose(self):
        data = [{} for _ in range(self.ncols)]
        for i, row in enumerate(self.row_data):
            for j, val in row.items():
                data[j][i] = val
        return RatMatrix(self.ncols, self.nrows, data)

    def augment_column(self, b):
        data = [dict(r) for r in self.row_data]
        for i, val in b.items():
            if val:
                data[i][self.ncols] = Fraction(val)
        return RatMatrix(self.nrows, self.ncols + 1, data)

    def submatrix(self, row_idx, col_idx):
        cmap = {c: k for k, c in enumerate(col_idx)}
        data = []
        for i in row_idx:
            row = self.row_data[i]
            data.append({cmap[j]: v for j, v in row.items() if j in cmap})
        return RatMatrix(len(row_idx), len(col_idx), data)

    def row_restriction(self, row_idx):
        return RatMatrix(len(row_idx), self.ncols,
                         [dict(self.row_data[i]) for i in row_idx])

    def to_dense(self):
        return [[self.entry(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def __eq__(self, other):
        return (isinstance(other, RatMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.row_data == other.row_data)

    def __repr__(self):
        return f"RatMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# elimination cores
# ---------------------------------------------------------------------------

def _int_rows(rows):
    """Clear denominators row by row and strip common factors."""
    out = []
    for row in rows:
        if not row:
            out.append({})
            continue
        lcm = 1
        for val in row.values():
            d = val.denominator
            lcm = lcm // math.gcd(lcm, d) * d
        ints = {c: int(v * lcm) for c, v in row.items()}
        g = 0
        for v in ints.values():
            g = math.gcd(g, v)
        if g > 1:
            ints = {c: v // g for c, v in ints.items()}
        out.append(ints)
    return out


def _normalize_int_row(row):
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _combine_int(pval, row, f, prow):
    """pval*row - f*prow over ℤ, gcd-normalized."""
    new = {}
    for c, v in row.items():
        pv = prow.get(c)
        nv = pval * v - f * pv if pv is not None else pval * v
        if nv:
            new[c] = nv
    for c, pv in prow.items():
        if c not in row:
            new[c] = -f * pv
    return _normalize_int_row(new)


def _forward_eliminate(rows, allowed=None):
    """Fraction-free forward elimination in place, sparsity-guided pivoting.

    rows: list of integer sparse rows (mutated).  allowed: optional set of
    columns eligible as pivots.  Returns (pivots, leftovers) where pivots is
    a list of (row_index, col) in elimination order and leftovers are the
    indices of rows that never hosted a pivot.
    """
    col_rows = {}
    for i, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(i)
    active = {i for i, row in enumerate(rows) if row}
    pivots = []
    while True:
        best = None
        for i in active:
            row = rows[i]
            if allowed is not None and not any(c in allowed for c in row):
                continue
            key = (len(row), i)
            if best is None or key < best[0]:
                best = (key, i)
        if best is None:
            break
        r = best[1]
        prow = rows[r]
        pc = None
        for c in prow:
            if allowed is not None and c not in allowed:
                continue
            key = (len(col_rows.get(c, ())), c)
            if pc is None or key < pc[0]:
                pc = (key, c)
        c = pc[1]
        pivots.append((r, c))
        pval = prow[c]
        for i in list(col_rows.get(c, ())):
            if i == r or i not in active:
                continue
            row = rows[i]
            new = _combine_int(pval, row, row[c], prow)
            for cc in row:
                if cc not in new:
                    s = col_rows.get(cc)
                    if s:
                        s.discard(i)
            for cc in new:
                if cc not in row:
                    col_rows.setdefault(cc, set()).add(i)
            rows[i] = new
            if not new:
                active.discard(i)
        active.discard(r)
    leftovers = [i for i, row in enumerate(rows) if row and i not in {r for r, _ in pivots}]
    return pivots, leftovers


def _rref_finalize(rows, pivots):
    """Canonical RREF rows (Fractions, pivots 1, cleared) from forward data."""
    order = sorted(range(len(pivots)), key=lambda k: pivots[k][1])
    piv_cols = [pivots[k][1] for k in order]
    work = [dict(rows[pivots[k][0]]) for k in order]
    for idx in range(len(order) - 1, -1, -1):
        c = piv_cols[idx]
        prow = work[idx]
        pval = prow[c]
        for j in range(len(order)):
            if j == idx:
                continue
            row = work[j]
            f = row.get(c)
            if f:
                work[j] = _combine_int(pval, row, f, prow)
    out = []
    for idx, c in enumerate(piv_cols):
        prow = work[idx]
        pval = prow[c]
        out.append({cc: Fraction(v, pval) for cc, v in prow.items()})
    return piv_cols, out


def rref(M, allowed=None):
    """Reduced row echelon form.  Returns (rank, pivot_cols, rref_rows)."""
    rows = _int_rows(M.row_data)
    pivots, _ = _forward_eliminate(rows, allowed=allowed)
    piv_cols, out = _rref_finalize(rows, pivots)
    return len(pivots), piv_cols, out


def _modp_eliminate(rows, p, allowed=None):
    """Forward elimination of sparse rows mod p.  Pivot rows are normalized.

    Returns (pivots, rows) with pivots a list of (row_index, col).
    """
    col_rows = {}
    for i, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(i)
    active = {i for i, row in enumerate(rows) if row}
    pivots = []
    while True:
        best = None
        for i in active:
            row = rows[i]
            if allowed is not None and not any(c in allowed for c in row):
                continue
            key = (len(row), i)
            if best is None or key < best[0]:
                best = (key, i)
        if best is None:
            break
        r = best[1]
        prow = rows[r]
        pc = None
        for c in prow:
            if allowed is not None and c not in allowed:
                continue
            key = (len(col_rows.get(c, ())), c)
            if pc is None or key < pc[0]:
                pc = (key, c)
        c = pc[1]
        pivots.append((r, c))
        inv = pow(prow[c], p - 2, p)
        prow = {cc: (v * inv) % p for cc, v in prow.items()}
        rows[r] = prow
        for i in list(col_rows.get(c, ())):
            if i == r or i not in active:
                continue
            row = rows[i]
            f = row[c]
            new = {}
            for cc, v in row.items():
                pv = prow.get(cc)
                nv = (v - f * pv) % p if pv is not None else v
                if nv:
                    new[cc] = nv
            for cc, pv in prow.items():
                if cc not in row:
                    nv = (-f * pv) % p
                    if nv:
                        new[cc] = nv
            for cc in row:
                if cc not in new:
                    s = col_rows.get(cc)
                    if s:
                        s.discard(i)
            for cc in new:
                if cc not in row:
                    col_rows.setdefault(cc, set()).add(i)
            rows[i] = new
            if not new:
                active.discard(i)
        active.discard(r)
    return pivots, rows


def random_primes(rng, count=3):
    """Distinct random primes in (2^60, 2^61)."""
    out = []
    while len(out) < count:
        n = rng.randrange(_PRIME_LOW + 1, _PRIME_HIGH, 2)
        p = int(gmpy2.next_prime(n))
        if p < _PRIME_HIGH and p not in out:
            out.append(p)
    return out


def _kernel_from_rref(ncols, piv_cols, rows):
    piv_set = set(piv_cols)
    free = [c for c in range(ncols) if c not in piv_set]
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for k, p in enumerate(piv_cols):
            coeff = rows[k].get(f)
            if coeff:
                v[p] = -coeff
        basis.append(v)
    return basis


def _kernel_exact(M):
    rank_, piv_cols, rows = rref(M)
    return _kernel_from_rref(M.ncols, piv_cols, rows)


def _modular_kernel(M, seed=None, primes=None, want_trace=False):
    """Certified kernel via the multi-prime fast path; None if uncertified."""
    rng = random.Random(DEFAULT_SEED if seed is None else seed)
    if primes is None:
        primes = random_primes(rng, 3)
    int_rows = _int_rows(M.row_data)
    ranks = []
    pivot_rows_first = None
    for p in primes:
        rows_p = [{c: v % p for c, v in row.items() if v % p} for row in int_rows]
        pivots, _ = _modp_eliminate(rows_p, p)
        ranks.append(len(pivots))
        if pivot_rows_first is None:
            pivot_rows_first = [r for r, _ in pivots]
    if len(set(ranks)) != 1:
        return None
    r = ranks[0]
    sub = M.row_restriction(pivot_rows_first)
    basis = _kernel_exact(sub)
    if len(basis) != M.ncols - r:
        return None
    for v in basis:
        if M.matvec(v):
            return None
    if want_trace:
        return basis, r, {"primes": primes, "ranks": ranks}
    return basis, r


def _use_modular(M, mode):
    if mode == "exact":
        return False
    if mode == "modular":
        return True
    return max(M.nrows, M.ncols) > _AUTO_EXACT_LIMIT and M.nrows > 2 * M.ncols


def rank(M, mode="auto", seed=None):
    """Rank over ℚ, exact.  The modular path is certified or falls back."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if _use_modular(M, mode):
        got = _modular_kernel(M, seed=seed)
        if got is not None:
            return got[1]
    r, _, _ = rref(M)
    return r


def kernel(M, mode="auto", seed=None):
    """Right kernel as a Subspace (basis in reduced echelon form)."""
    if M.ncols == 0:
        return Subspace.zero(0)
    if M.nrows == 0:
        return Subspace.full(M.ncols)
    basis = None
    if _use_modular(M, mode):
        got = _modular_kernel(M, seed=seed)
        if got is not None:
            basis = got[0]
    if basis is None:
        basis = _kernel_exact(M)
    ker = Subspace.from_vectors(M.ncols, basis)
    for v in ker.rows:
        if M.matvec(v):
            raise ArithmeticError("kernel verification failed")
    return ker


def image(M):
    """Column space as a Subspace of ℚ^nrows."""
    return Subspace.from_vectors(M.nrows, [M.column(j) for j in range(M.ncols)])


def solve(M, b):
    """One particular solution of M·x = b, or None; verified by substitution."""
    if not b:
        return {}
    aug = M.augment_column(b)
    allowed = set(range(M.ncols))
    rows = _int_rows(aug.row_data)
    pivots, leftovers = _forward_eliminate(rows, allowed=allowed)
    for i in leftovers:
        if rows[i]:
            return None
    piv_cols, rref_rows = _rref_finalize(rows, pivots)
    x = {}
    for k, p in enumerate(piv_cols):
        val = rref_rows[k].get(M.ncols)
        if val:
            x[p] = val
    if vsub(M.matvec(x), b):
        raise ArithmeticError("solve verification failed")
    return x


# ---------------------------------------------------------------------------
# subspaces and quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of ℚ^n with basis rows in reduced echelon form."""

    ambient_dim: int
    rows: tuple
    pivots: tuple

    @classmethod
    def from_vectors(cls, ambient_dim, vectors):
        vecs = [v for v in vectors if v]
        if not vecs:
            return cls(ambient_dim, (), ())
        M = RatMatrix(len(vecs), ambient_dim, [dict(v) for v in vecs])
        _, piv_cols, rref_rows = rref(M)
        return cls(ambient_dim, tuple(rref_rows), tuple(piv_cols))

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, (), ())

    @classmethod
    def full(cls, ambient_dim):
        rows = tuple({i: Fraction(1)} for i in range(ambient_dim))
        return cls(ambient_dim, rows, tuple(range(ambient_dim)))

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, v):
        """Residual of v after eliminating this space's pivots."""
        r = dict(v)
        for row, p in zip(self.rows, self.pivots):
            c = r.get(p)
            if c:
                vaxpy(r, -c, row)
        return r

    def contains(self, v):
        return not self.reduce(v)

    def contains_subspace(self, other):
        return all(self.contains(row) for row in other.rows)

    def coordinates(self, v):
        """Coefficients of v in the basis rows, or None if v is outside."""
        r = dict(v)
        coords = []
        for row, p in zip(self.rows, self.pivots):
            c = r.get(p, Fraction(0))
            coords.append(c)
            if c:
                vaxpy(r, -c, row)
        if r:
            return None
        return coords

    def sum(self, other):
        assert self.ambient_dim == other.ambient_dim
        return Subspace.from_vectors(self.ambient_dim, list(self.rows) + list(other.rows))

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.rows == other.rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    """Quotient num/den with explicit representative vectors."""

    num: Subspace
    den: Subspace
    reps: tuple
    rep_pivots: tuple

    @property
    def dim(self):
        return len(self.reps)

    @property
    def ambient_dim(self):
        return self.num.ambient_dim

    def reduce(self, v):
        """Coordinates of [v] in the representative basis (v must lie in num+den)."""
        r = self.den.reduce(v)
        coords = []
        for rep, p in zip(self.reps, self.rep_pivots):
            c = r.get(p, Fraction(0))
            coords.append(c)
            if c:
                vaxpy(r, -c, rep)
        if r:
            raise NotInSpan("vector not in the quotient's numerator")
        return coords

    def lift(self, coords):
        out = {}
        for c, rep in zip(coords, self.reps):
            vaxpy(out, Fraction(c), rep)
        return out

    def __repr__(self):
        return f"QuotientSpace(dim={self.dim}, ambient={self.ambient_dim})"


def quotient(num, den):
    """Quotient space num/den; raises SubspaceNotContained if den ⊄ num."""
    if den.ambient_dim != num.ambient_dim:
        raise SubspaceNotContained("ambient dimensions differ")
    if not num.contains_subspace(den):
        raise SubspaceNotContained("denominator not contained in numerator")
    residues = [den.reduce(row) for row in num.rows]
    span = Subspace.from_vectors(num.ambient_dim, residues)
    assert span.dim == num.dim - den.dim
    return QuotientSpace(num, den, span.rows, span.pivots)


def cokernel(M):
    """coker(M) = ℚ^nrows / im(M) as a QuotientSpace."""
    return quotient(Subspace.full(M.nrows), image(M))
