"""Builtin algebra library: named laws with operad types and torus presets.

Parameterized names follow the pattern name(arg): abelian(m), k_split(m),
richardson(n).  Plain names: sl2, aff1, heis3, gl2, kx2, kx2_comm, ut2,
mat2, k_split_comm(m), leib2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import binaryforms
from .laws import Law, OperadType, Symmetry


@dataclass(frozen=True)
class BuiltinAlgebra:
    name: str
    law: Law
    optype: OperadType
    torus: tuple | None
    description: str


def _lie(dim, entries):
    return Law.from_entries(dim, Symmetry.SKEW,
                            {k: Fraction(v) for k, v in entries.items()})


def _plain(dim, entries, symmetric=False):
    sym = Symmetry.SYMMETRIC if symmetric else Symmetry.NONE
    return Law.from_entries(dim, sym, {k: Fraction(v) for k, v in entries.items()})


def _abelian(m):
    # full-rank diagonal torus: any torus fixes the zero law
    torus = tuple(tuple(1 if j == i else 0 for j in range(m)) for i in range(m))
    return BuiltinAlgebra(f"abelian({m})", Law.zero(m, Symmetry.SKEW),
                          OperadType.LIE, torus, f"abelian Lie law on k^{m}")


def _k_split(m, comm=False):
    entries = {(i, i, i): 1 for i in range(m)}
    name = f"k_split_comm({m})" if comm else f"k_split({m})"
    return BuiltinAlgebra(name, _plain(m, entries, symmetric=comm),
                          OperadType.COMM if comm else OperadType.ASSOC, None,
                          f"split étale algebra k^{m}")


def _richardson(n):
    return BuiltinAlgebra(
        f"richardson({n})", binaryforms.build_richardson(n), OperadType.LIE,
        binaryforms.richardson_torus(n).weights,
        f"semidirect product sl2 ⋉ Sym^{2 * n} (dim {2 * n + 4})")


_FIXED = {}


def _register(b):
    _FIXED[b.name] = b
    return b


_register(BuiltinAlgebra(
    "sl2",
    _lie(3, {(1, 0, 2): 1, (0, 1, 0): 2, (2, 1, 2): -2}),
    OperadType.LIE, ((2,), (0,), (-2,)),
    "sl2 in the basis (e, h, f): [e,f]=h, [h,e]=2e, [h,f]=-2f"))

_register(BuiltinAlgebra(
    "aff1",
    _lie(2, {(1, 0, 1): 1}),
    OperadType.LIE, None,
    "non-abelian 2-dim Lie algebra: [e1,e2]=e2"))

_register(BuiltinAlgebra(
    "heis3",
    _lie(3, {(2, 0, 1): 1}),
    OperadType.LIE, ((1,), (1,), (2,)),
    "Heisenberg algebra: [e1,e2]=e3"))

_register(BuiltinAlgebra(
    "gl2",
    _lie(4, {(1, 0, 2): 1, (0, 1, 0): 2, (2, 1, 2): -2}),
    OperadType.LIE, ((2,), (0,), (-2,), (0,)),
    "sl2 plus a one-dimensional center"))

_register(BuiltinAlgebra(
    "kx2",
    _plain(2, {(0, 0, 0): 1, (1, 0, 1): 1, (1, 1, 0): 1}),
    OperadType.ASSOC, None,
    "dual numbers k[x]/(x^2) in the basis (1, x)"))

_register(BuiltinAlgebra(
    "kx2_comm",
    _plain(2, {(0, 0, 0): 1, (1, 0, 1): 1}, symmetric=True),
    OperadType.COMM, None,
    "k[x]/(x^2) as a commutative law"))

_register(BuiltinAlgebra(
    "ut2",
    _plain(3, {(0, 0, 0): 1, (1, 1, 1): 1, (2, 0, 2): 1, (2, 2, 1): 1}),
    OperadType.ASSOC, None,
    "upper-triangular 2x2 matrices in the basis (E11, E22, E12)"))

# full 2x2 matrix algebra, basis (E11, E12, E21, E22): Eij·Ekl = δ_jk Eil
_register(BuiltinAlgebra(
    "mat2",
    _plain(4, {
        (0, 0, 0): 1, (1, 0, 1): 1, (0, 1, 2): 1, (1, 1, 3): 1,
        (2, 2, 0): 1, (3, 2, 1): 1, (2, 3, 2): 1, (3, 3, 3): 1,
    }),
    OperadType.ASSOC, None,
    "2x2 matrix algebra"))

_register(BuiltinAlgebra(
    "leib2",
    _plain(2, {(1, 0, 0): 1}),
    OperadType.LEIB, None,
    "right Leibniz non-Lie law: mu(e1,e1)=e2"))


_PARAM = re.compile(r"^([a-z_0-9]+)\((\d+)\)$")


def get_builtin(name):
    """Look up a builtin algebra, including parameterized families."""
    name = name.strip()
    if name in _FIXED:
        return _FIXED[name]
    m = _PARAM.match(name)
    if m:
        base, arg = m.group(1), int(m.group(2))
        if base == "abelian" and arg >= 1:
            return _abelian(arg)
        if base == "k_split" and arg >= 1:
            return _k_split(arg)
        if base == "k_split_comm" and arg >= 1:
            return _k_split(arg, comm=True)
        if base == "richardson" and arg >= 1:
            return _richardson(arg)
    raise KeyError(f"unknown builtin algebra {name!r}")


def builtin_names():
    """Names of the standard library (the fixed set plus small family members)."""
    return list(_FIXED) + ["abelian(2)", "abelian(3)", "k_split(2)", "k_split(3)",
                           "k_split_comm(2)", "richardson(1)"]


def standard_suite():
    """The builtin algebras exercised by the acceptance checks."""
    return [get_builtin(n) for n in builtin_names()]
