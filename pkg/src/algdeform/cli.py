"""Command-line interface.

Subcommands: cohomology, obstruction, anisotropy, gram, lift, characters,
richardson, builtin.  Inputs come from --builtin NAME or --input FILE
(AlgebraInput JSON; "-" reads stdin).  Exit codes: 0 success, 2 the law is
not on the requested locus, 3 schema or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import builtins as builtin_lib
from . import charcalc, incidence, laws, obstruction, report
from . import gram as gram_mod
from .binaryforms import richardson_anisotropy
from .exactlin import DEFAULT_SEED
from .laws import OperadType
from .presentations import (QdualMode, custom_presentation, default_qdual_mode,
                            presentation)
from .report import (char_json, matrix_json, parse_algebra_input, rat_str,
                     render_algebra_input, render_json, render_text,
                     subspace_json, vec_json)

EXIT_OK = 0
EXIT_NOT_ON_LOCUS = 2
EXIT_SCHEMA = 3

# Ambient dimensions above this need --slow (and a torus for graded ranks).
SLOW_GUARD = 300


class UsageError(ValueError):
    pass


def _load_input(args):
    """Resolve --builtin/--input into (law, optype, torus, custom, echo_dict)."""
    if args.builtin and args.input:
        raise UsageError("give either --builtin or --input, not both")
    if args.builtin:
        b = builtin_lib.get_builtin(args.builtin)
        echo = render_algebra_input(b.law, b.optype, torus=b.torus, name=b.name)
        return b.law, b.optype, b.torus, None, echo
    if not args.input:
        raise UsageError("an input is required: --builtin NAME or --input FILE")
    if args.input == "-":
        data = json.load(sys.stdin)
    else:
        with open(args.input) as fh:
            data = json.load(fh)
    law, optype, torus, custom = parse_algebra_input(data)
    return law, optype, torus, custom, data


def _presentation_for(law, optype, custom):
    if optype is OperadType.CUSTOM:
        space = laws.LawSpace(law.dim, law.symmetry)
        return custom_presentation(custom["tensor"], space.dim, custom["target_dim"],
                                   symmetry=law.symmetry, m=law.dim)
    return presentation(optype, law.dim)


def _qdual_mode(args, pres):
    if args.qdual_mode == "ambient":
        return QdualMode.AMBIENT
    if args.qdual_mode == "span":
        return QdualMode.SPAN
    return default_qdual_mode(pres.optype, pres.ambient_dim)


def _base_report(command, args, echo):
    return {
        "command": command,
        "seed": args.seed,
        "mode": args.mode,
        "input": echo,
    }


def _guard_slow(args, pres):
    if pres.ambient_dim > SLOW_GUARD and not args.slow:
        raise UsageError(
            f"ambient dimension {pres.ambient_dim} exceeds {SLOW_GUARD}; "
            "pass --slow to run large computations")


def _complex_for(args, law, optype, custom):
    pres = _presentation_for(law, optype, custom)
    _guard_slow(args, pres)
    mode = _qdual_mode(args, pres)
    return incidence.build_complex(law, pres, qdual_mode=mode)


def _graded_cohomology_section(C, torus, args):
    T = charcalc.TorusAction(torus)
    graded = charcalc.graded_cohomology(C, T, mode=args.mode, seed=args.seed)
    return {
        "h1_dim": graded.h1_total,
        "h2_dim": graded.h2_total,
        "h3_dim": graded.h3_total,
        "rank_delta": sum(graded.rank_delta.values()),
        "rank_phi": sum(graded.rank_phi.values()),
        "h1_weights": char_json(graded.h1),
        "h2_weights": char_json(graded.h2),
        "h3_weights": char_json(graded.h3),
        "euler_lhs": graded.h1_total - graded.h2_total + graded.h3_total,
        "euler_rhs": C.g_dim - C.ambient_dim + C.model_dim,
        "graded": True,
    }


def cmd_cohomology(args):
    law, optype, torus, custom, echo = _load_input(args)
    t0 = time.perf_counter()
    C = _complex_for(args, law, optype, custom)
    out = _base_report("cohomology", args, echo)
    out["qdual_mode"] = C.qdual.mode.value
    if C.ambient_dim > SLOW_GUARD and torus is not None:
        results = _graded_cohomology_section(C, torus, args)
    else:
        rep = incidence.cohomology(C, mode=args.mode, seed=args.seed)
        results = {
            "h1_dim": rep.h1_dim,
            "h2_dim": rep.h2_dim,
            "h3_dim": rep.h3_dim,
            "euler_lhs": rep.euler_lhs,
            "euler_rhs": rep.euler_rhs,
            "dims": {"g": rep.dims[0], "ambient": rep.dims[1], "qdual_model": rep.dims[2]},
            "derivations": subspace_json(rep.derivations),
            "h2_representatives": [vec_json(r) for r in (rep.h2.reps if rep.h2 else [])],
        }
    out["results"] = results
    out["timing_seconds"] = f"{time.perf_counter() - t0:.3f}"
    return out


def cmd_obstruction(args):
    law, optype, torus, custom, echo = _load_input(args)
    t0 = time.perf_counter()
    C = _complex_for(args, law, optype, custom)
    rep = incidence.cohomology(C, mode=args.mode, seed=args.seed)
    K = obstruction.kappa2(C, rep)
    out = _base_report("obstruction", args, echo)
    out["qdual_mode"] = C.qdual.mode.value
    out["results"] = {
        "h2_dim": K.h2_dim,
        "h3_dim": K.h3_dim,
        "representatives": [vec_json(r) for r in K.reps],
        "forms": [matrix_json(f) for f in K.forms],
    }
    out["timing_seconds"] = f"{time.perf_counter() - t0:.3f}"
    return out


def _verdict_json(v):
    out = {"kind": v.kind}
    if v.reason:
        out["reason"] = v.reason
    if v.witness is not None:
        out["witness"] = [rat_str(x) for x in v.witness]
    if v.witness_field:
        out["witness_field"] = v.witness_field
    if v.witness_prime:
        out["witness_prime"] = v.witness_prime
    if v.gcd_factor:
        out["gcd_factor"] = [rat_str(x) for x in v.gcd_factor]
    if v.primes_tested:
        out["primes_tested"] = list(v.primes_tested)
    if v.search_points:
        out["search_points"] = {str(p): n for p, n in v.search_points.items()}
    if v.rational_search_trials:
        out["rational_search_trials"] = v.rational_search_trials
    out["seed"] = v.seed
    if v.kind == "certified_anisotropic":
        out["interpretation"] = (
            "at a smooth point of a reduced component, anisotropy forces the "
            "orbit to be Zariski open (smoothness not certified here)")
    return out


def cmd_anisotropy(args):
    law, optype, torus, custom, echo = _load_input(args)
    t0 = time.perf_counter()
    C = _complex_for(args, law, optype, custom)
    rep = incidence.cohomology(C, mode=args.mode, seed=args.seed)
    K = obstruction.kappa2(C, rep)
    verdict = obstruction.anisotropy(K, seed=args.seed)
    out = _base_report("anisotropy", args, echo)
    out["qdual_mode"] = C.qdual.mode.value
    out["results"] = {
        "h2_dim": K.h2_dim,
        "h3_dim": K.h3_dim,
        "verdict": _verdict_json(verdict),
        "forms": [matrix_json(f) for f in K.forms],
    }
    out["timing_seconds"] = f"{time.perf_counter() - t0:.3f}"
    return out


def cmd_gram(args):
    law, optype, torus, custom, echo = _load_input(args)
    t0 = time.perf_counter()
    G = gram_mod.gram(law)
    out = _base_report("gram", args, echo)
    results = {
        "rank": G.rank,
        "matrix": matrix_json(G.matrix.to_dense()),
        "radical": subspace_json(G.radical),
    }
    if optype is not OperadType.CUSTOM:
        try:
            rc = gram_mod.radical_containment(law, optype)
            results["radical_containment"] = {
                "ideal_source": rc.ideal_source,
                "ideal_dim": rc.ideal.dim,
                "contained": rc.contained,
            }
        except gram_mod.NeedExplicitIdeal as exc:
            results["radical_containment"] = {"skipped": str(exc)}
    if args.trials:
        oc = gram_mod.gram_orbit_constancy(law, trials=args.trials, seed=args.seed)
        results["orbit_constancy"] = {
            "trials": oc.trials,
            "constant": oc.constant,
            "rank": oc.base_rank,
        }
    out["results"] = results
    out["timing_seconds"] = f"{time.perf_counter() - t0:.3f}"
    return out


def cmd_lift(args):
    law, optype, torus, custom, echo = _load_input(args)
    if not args.alpha:
        raise UsageError("--alpha JSON (law-term list) is required for lift")
    terms = json.loads(args.alpha)
    entries = {}
    for t in terms:
        key = (t["i"] - 1, t["j"] - 1, t["k"] - 1)
        entries[key] = entries.get(key, Fraction(0)) + report.parse_rat(t["c"])
    alpha_law = laws.Law.from_entries(law.dim, law.symmetry, entries)
    t0 = time.perf_counter()
    C = _complex_for(args, law, optype, custom)
    alpha = C.pres.space.coords(
        alpha_law if alpha_law.symmetry == C.pres.space.symmetry
        else alpha_law.with_symmetry_none())
    result = obstruction.second_order_lift(C, alpha, mode=args.mode, seed=args.seed)
    out = _base_report("lift", args, echo)
    out["qdual_mode"] = C.qdual.mode.value
    res = {"alpha": vec_json(alpha), "lifted": result.lifted}
    if result.lifted:
        res["beta"] = vec_json(result.beta)
        res["verified_mod_t3"] = result.verified_mod_t3
    else:
        res["obstruction_class"] = [rat_str(x) for x in result.obstruction_class]
    out["results"] = res
    out["timing_seconds"] = f"{time.perf_counter() - t0:.3f}"
    return out


def cmd_characters(args):
    law, optype, torus, custom, echo = _load_input(args)
    if torus is None:
        raise UsageError("characters need a torus: builtin preset or input field")
    t0 = time.perf_counter()
    C = _complex_for(args, law, optype, custom)
    T = charcalc.TorusAction(torus)
    graded = charcalc.graded_cohomology(C, T, mode=args.mode, seed=args.seed)
    ch = charcalc.ch_identity_check(C, T, mode=args.mode, seed=args.seed)
    caw, cqd, cg = charcalc.induced_character(optype, torus)
    out = _base_report("characters", args, echo)
    out["qdual_mode"] = C.qdual.mode.value
    out["results"] = {
        "torus_rank": T.rank,
        "induced": {
            "A_W": char_json(caw),
            "Qdual_ambient": char_json(cqd),
            "g": char_json(cg),
        },
        "graded_h1": char_json(graded.h1),
        "graded_h2": char_json(graded.h2),
        "graded_h3": char_json(graded.h3),
        "character_identity_holds": ch.holds,
        "degree0_euler_ok": ch.degree0_ok,
        "euler_lhs": ch.euler_lhs,
        "euler_rhs": ch.euler_rhs,
    }
    out["timing_seconds"] = f"{time.perf_counter() - t0:.3f}"
    return out


def cmd_richardson(args):
    t0 = time.perf_counter()
    rep = richardson_anisotropy(fast=not args.full, n=args.n, seed=args.seed,
                                mode=args.mode)
    out = {
        "command": "richardson",
        "seed": args.seed,
        "mode": args.mode,
        "n": args.n,
        "pipeline": rep.mode,
    }
    ratio = rep.ratio
    out["results"] = {
        "ratios": {
            "r1": rat_str(ratio.r1),
            "r2": rat_str(ratio.r2),
            "quotient": rat_str(ratio.quotient),
            "support_indices": list(ratio.support),
            "convention_probe": {
                "consistent": ratio.probe_consistent,
                "scalar": rat_str(ratio.probe_scalar) if ratio.probe_scalar is not None else None,
            },
        },
        "verdict": _verdict_json(rep.verdict),
        "notes": rep.notes,
    }
    if rep.mode == "full":
        out["results"]["cohomology"] = {
            "h1_dim": rep.h1_dim,
            "h2_dim": rep.h2_dim,
            "h3_dim": rep.h3_dim,
            "h2_weights": char_json(rep.h2_weights),
            "rank_delta": rep.rank_delta,
            "rank_phi": rep.rank_phi,
            "euler_ok": rep.euler_ok,
        }
        out["results"]["certificates"] = {
            "generator_in_kernel": rep.generator_in_kernel,
            "generator_not_exact": rep.generator_not_exact,
            "obstruction_nonzero_exact": rep.obstruction_nonzero,
            "modular_primes": [str(p) for p in rep.modular_primes],
            "modular_rank_phi": {str(p): r for p, r in rep.modular_rank_phi.items()},
            "modular_obstruction_ranks": {str(p): list(r) for p, r
                                          in rep.modular_obstruction_ranks.items()},
        }
    out["timing_seconds"] = f"{time.perf_counter() - t0:.3f}"
    return out


def cmd_builtin(args):
    b = builtin_lib.get_builtin(args.name)
    return render_algebra_input(b.law, b.optype, torus=b.torus, name=b.name)


def _add_common(p, with_input=True):
    if with_input:
        p.add_argument("--builtin", help="builtin algebra name, e.g. sl2, richardson(7)")
        p.add_argument("--input", help="AlgebraInput JSON file ('-' for stdin)")
    p.add_argument("--qdual-mode", choices=["ambient", "span"],
                   help="model of the dual identity space (default per type)")
    p.add_argument("--mode", choices=["auto", "exact", "modular"], default="auto",
                   help="linear algebra engine selection")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=0,
                   help="randomized trials where applicable")
    p.add_argument("--slow", action="store_true",
                   help="allow large computations (e.g. the 18-dim family)")
    p.add_argument("--format", choices=["text", "json"], default="text")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="algdeform",
        description="exact deformation complexes, quadratic obstructions, and "
                    "rigidity certificates for bilinear algebra laws")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name, fn in (("cohomology", cmd_cohomology), ("obstruction", cmd_obstruction),
                     ("anisotropy", cmd_anisotropy), ("gram", cmd_gram),
                     ("characters", cmd_characters)):
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(func=fn)
    p = sub.add_parser("lift")
    _add_common(p)
    p.add_argument("--alpha", help="JSON list of law terms for the direction α")
    p.set_defaults(func=cmd_lift)
    p = sub.add_parser("richardson")
    p.add_argument("n", type=int, nargs="?", default=7)
    p.add_argument("--full", action="store_true",
                   help="run the full certificate instead of the ratio shortcut")
    p.add_argument("--fast", action="store_true", help="(default) ratio shortcut")
    _add_common(p, with_input=False)
    p.set_defaults(func=cmd_richardson)
    p = sub.add_parser("builtin")
    p.add_argument("name")
    p.add_argument("--format", choices=["text", "json"], default="json")
    p.set_defaults(func=cmd_builtin)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out = args.func(args)
    except incidence.NotOnLocus as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_ON_LOCUS
    except incidence.CompositeNotZero as exc:
        print(f"error: invalid presentation: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (ValueError, KeyError, TypeError) as exc:
        # SchemaError, UsageError, symmetry/torus/tensor mismatches, bad JSON
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if args.format == "json":
        print(render_json(out))
    else:
        print(render_text(out), end="")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
