"""Command-line front end: ``hendo <subcommand> [options]``.

Every report is JSON (sorted keys) unless ``--format`` asks otherwise.
Errors go to stderr as a JSON object and give exit status 2; failed checks
give exit status 1.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time

from . import __version__
from .coxeter import CapExceeded, DEFAULT_CAP, build_system

log = logging.getLogger("hendo")

SCHEMA = "hendo-report/1"


class UsageError(ValueError):
    pass


# ------------------------------------------------------------ config

def _parse_weights(text):
    if text is None:
        return None
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"weights must be a comma-separated list of integers, got {text!r}")


def _parse_matrix(text):
    if text is None:
        return None
    text = text.strip()
    try:
        if text.startswith("["):
            M = json.loads(text)
        else:
            M = [[int(x) for x in row.split(",")] for row in text.split(";")]
    except (ValueError, json.JSONDecodeError):
        raise UsageError("matrix must be JSON or rows 'a,b;c,d'")
    if not M or any(len(r) != len(M) for r in M):
        raise UsageError("matrix must be square")
    return M


def system_from_args(args):
    M = _parse_matrix(getattr(args, "matrix", None))
    w = _parse_weights(getattr(args, "weights", None))
    if M is None and not args.type:
        raise UsageError("give --type or --matrix")
    if M is not None:
        return build_system(M, w, cap=args.cap)
    return build_system(args.type, w, cap=args.cap)


def _system_key(W):
    d = json.dumps({"m": W.matrix, "w": W.weights}, sort_keys=True)
    return hashlib.sha256(d.encode()).hexdigest()[:16]


def cache_path(args, W):
    base = args.cache or os.environ.get("HENDO_CACHE")
    if not base:
        return None
    if base.endswith(".json"):
        return base
    return os.path.join(base, f"kl-{_system_key(W)}.json")


def hecke_from_args(args, W):
    """Hecke algebra with the KL table loaded from (or saved to) the cache."""
    from .hecke import CacheError, HeckeAlgebra, load_kl_cache, save_kl_cache
    H = HeckeAlgebra(W)
    path = cache_path(args, W)
    if path and os.path.exists(path):
        try:
            load_kl_cache(H, path)
            log.info("loaded KL cache %s", path)
            return H
        except CacheError as e:
            if not args.force:
                raise CacheError(f"{e} (cache {path}; rerun with --force to rebuild)")
            log.warning("rebuilding corrupt cache %s: %s", path, e)
            H = HeckeAlgebra(W)
    H.compute_all()
    if path:
        save_kl_cache(H, path)
    return H


def _ws(W, w):
    return W.word_str(w)


def _poly(p):
    return str(p)


# ------------------------------------------------------------ subcommands

def cmd_group(args):
    W = system_from_args(args)
    hist = {}
    for ell in W.length:
        hist[ell] = hist.get(ell, 0) + 1
    rep = {"size": W.size, "rank": W.rank, "matrix": W.matrix, "weights": W.weights,
           "tag": W.tag, "longest": _ws(W, W.w0), "length_histogram": [hist[k] for k in sorted(hist)]}
    if args.elements:
        rep["elements"] = [{"word": _ws(W, w), "length": W.length[w], "L": W.L[w]} for w in range(W.size)]
    return rep, True


def cmd_klbasis(args):
    W = system_from_args(args)
    H = hecke_from_args(args, W)
    table = {}
    ok = True
    for w in range(W.size):
        table[_ws(W, w)] = {_ws(W, y): _poly(q) for y, q in sorted(H.kl(w).items())}
        ok = ok and H.check_kl_conditions(w)
    return {"size": W.size, "weights": W.weights, "p": table, "conditions_hold": ok}, ok


def cmd_cells(args):
    from .cells import CellDecomposition
    W = system_from_args(args)
    H = hecke_from_args(args, W)
    C = CellDecomposition(H)
    rep = {"size": W.size, "weights": W.weights, "tag": W.tag, **C.report(),
           "counts": {"left": len(C.left_cells), "right": len(C.right_cells),
                      "two_sided": len(C.two_sided_cells)}}
    return rep, True


def cmd_afun(args):
    from .cells import (CellDecomposition, a_function, check_a_constancy,
                        check_h_support, gamma_table)
    W = system_from_args(args)
    H = hecke_from_args(args, W)
    C = CellDecomposition(H)
    af = a_function(H)
    gi = gamma_table(H, C, af)
    const = check_a_constancy(C, af)
    support = check_h_support(H, C)
    rep = {"a": {_ws(W, w): af.a[w] for w in range(W.size)},
           "distinguished": [{"d": _ws(W, d), "n": gi.n[d]} for d in gi.D],
           "a_constant_on_two_sided_cells": const, "h_support_violations": len(support)}
    return rep, const and not support


def cmd_jring(args):
    from .jring import JRing
    W = system_from_args(args)
    H = hecke_from_args(args, W)
    R = JRing(H)
    unit = R.unit()
    assoc = R.check_associativity(samples=args.samples, seed=args.seed)
    hom = R.check_varpi_hom()
    det = R.phi_determinant()
    box = R.check_boxdot()
    lifts = {}
    if args.lifts:
        for c in range(len(R.cells.left_cells)):
            lifts[str(c)] = R.lift_cell_module(c).ok
    rep = {"unit": {_ws(W, x): v for x, v in sorted(unit.coeffs.items()) if v},
           "associativity_failures": len(assoc), "varpi_multiplicative": hom["multiplicative"],
           "varpi_unital": hom["unital"], "phi_determinant": _poly(det),
           "boxdot_stable": box["stable"], "boxdot_congruence": box["congruence"],
           "cell_lifts": lifts}
    ok = (not assoc and hom["multiplicative"] and hom["unital"] and bool(det)
          and box["stable"] and box["congruence"] and all(lifts.values()))
    return rep, ok


def _subsets(W):
    from itertools import combinations
    return [c for k in range(W.rank + 1) for c in combinations(range(W.rank), k)]


def cmd_perm_filtration(args):
    from .cells import CellDecomposition
    from .hmodules import (bottom_section_check, filtration_onto_checks,
                           q_perm_module, set_equality_w0J)
    W = system_from_args(args)
    H = hecke_from_args(args, W)
    C = CellDecomposition(H)
    out = []
    ok = True
    subsets = [tuple(sorted(_parse_weights(args.J) or []))] if args.J is not None else _subsets(W)
    for J in subsets:
        se = set_equality_w0J(H, C, J)
        rel = q_perm_module(H, C, J).check_relations()
        bot = bottom_section_check(H, C, J)
        onto = filtration_onto_checks(H, C, J) if not args.skip_onto else []
        rec = {"J": list(J), "set_equality": se["equal"], "relations": rel,
               "bottom": bot["bottom"], "bottom_ok": bot["bottom_ok"], "others_ok": bot["others_ok"],
               "ranks": bot["ranks"], "onto_checks": len(onto),
               "onto_ok": all(r["ok"] for r in onto)}
        out.append(rec)
        ok = ok and se["equal"] and all(rel.values()) and bot["bottom_ok"] and bot["others_ok"] \
            and rec["onto_ok"]
    return {"weights": W.weights, "subsets": out}, ok


def _endo_from_args(args, W, H, C):
    from .endo import endo_algebra
    if args.family == "all":
        return endo_algebra(H, C)
    if args.family in ("i", "j"):
        return endo_algebra(H, C, args.family, r=W.rank, n=args.n)
    raise UsageError(f"unknown family {args.family!r}")


def cmd_endo(args):
    from .cells import CellDecomposition
    from . import endo
    W = system_from_args(args)
    H = hecke_from_args(args, W)
    C = CellDecomposition(H)
    A = _endo_from_args(args, W, H, C)
    rep = {"family": [list(map(int, lab)) if isinstance(lab, tuple) else lab for lab in A.labels],
           "family_kind": args.family, "dim": A.dim, "block_dims": A.block_dims(),
           "unit_law": A.check_unit(), "associative": A.check_associativity()["associative"]}
    ok = rep["unit_law"] and rep["associative"]
    if args.family == "all" and not args.no_strat:
        try:
            st = endo.strat_modules(A)
        except endo.EndoFailure as e:
            rep["strat"] = {"skipped": str(e)}
        else:
            rep["delta_dims"] = {str(w): d for w, d in st.dims().items()}
            rep["P_dims"] = {str(w): len(st.proj[w]) for w in st.omega}
            rep["classes"] = st.classes()
            ss = endo.check_stratifying_system(st, seed=args.seed)
            rep["SS"] = _ss_summary(ss)
            hi = [endo.trace_ideal_filtration(st, T, args.seed) for T in endo.default_targets()]
            rep["HI"] = [{"field": r["field"], "ok": r["ok"],
                          "layers": [{k: v for k, v in l.items()} for l in r["layers"]]} for r in hi]
            ok = ok and ss["ok"] and all(r["ok"] for r in hi)
    else:
        gs = endo.generic_semisimplicity(A, args.seed)
        rep["generic_semisimplicity"] = gs
        ok = ok and gs["ok"]
    return rep, ok


def _ss_summary(ss):
    g = ss["generic"]
    return {"ok": ss["ok"],
            "generic": {k: v["ok"] for k, v in g.items()},
            "sum_dim_sq": g["SS2"]["sum_dim_sq"],
            "special": [{"field": s["field"], **{k: s[k]["ok"] for k in ("SS1", "SS2", "SS3", "surjections")}}
                        for s in ss["special"]]}


def _triple_from_args(args):
    from .decomp import TripleSpec, triple_with_q
    if args.laurent_a is not None:
        return TripleSpec("Laurent", args.prime, 1, a=args.laurent_a)
    return triple_with_q(args.prime, args.field_deg, args.q)


def cmd_decomp(args):
    from .cells import CellDecomposition, a_function, a_height, preceq
    from .hmodules import dual_cell_module
    from . import decomp, endo
    W = system_from_args(args)
    H = hecke_from_args(args, W)
    C = CellDecomposition(H)
    triple = _triple_from_args(args)
    target = triple.target()
    af = a_function(H)
    h = a_height(C, af, "right")
    order = preceq(C, h)
    if args.family == "hecke":
        # one left cell per two-sided cell, ordered along the height
        reps = {}
        for k, cell in enumerate(C.left_cells):
            reps.setdefault(C.left_to_two[k], k)
        cols = sorted(reps.values(), key=lambda k: (h[k], k))
        lattices = [dual_cell_module(H, C, k) for k in cols]
    else:
        A = _endo_from_args(args, W, H, C)
        st = endo.strat_modules(A)
        cls = st.classes()
        cols = sorted((c[0] for c in cls), key=lambda k: (h[k], k))
        lattices = [st.delta[k] for k in cols]
    D = decomp.decomposition_matrix(lattices, target, labels=cols, seed=args.seed)
    verdict = decomp.unitriangularity_check(D, col_order=cols, order=order)
    rep = {"triple": triple.describe(), "family": args.family, "matrix": D.to_json(),
           "unitriangularity": verdict}
    if triple.kind == "Laurent":
        lr = decomp.laurent_route(lattices, triple, labels=cols, seed=args.seed)
        rep["laurent_route"] = {"matches": lr["matches"],
                                "middle_split_semisimple": lr["middle_split_semisimple"]}
    if args.format == "csv":
        return D.to_csv(), True
    return rep, True


def cmd_verify(args):
    from .verify import run_suite
    W = system_from_args(args)
    H = hecke_from_args(args, W)
    rep = run_suite(W, H, seed=args.seed, full=args.full)
    return rep, rep["all_pass"]


# ------------------------------------------------------------ parser

def build_parser():
    p = argparse.ArgumentParser(prog="hendo", description="Hecke algebras, cells and endomorphism algebras.")
    p.add_argument("--version", action="version", version=f"hendo {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--type", help="catalog tag: A2, B2, G2, 2F4, SU4, I2(8), ...")
        sp.add_argument("--matrix", help="Coxeter matrix as JSON or 'a,b;c,d'")
        sp.add_argument("--weights", help="comma-separated weights L(s)")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="element cap (default %(default)s)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--cache", help="KL cache file or directory (default $HENDO_CACHE)")
        sp.add_argument("--force", action="store_true", help="rebuild an unusable cache")
        sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("group", help="enumerate W")
    common(sp)
    sp.add_argument("--elements", action="store_true")
    sp.set_defaults(func=cmd_group)

    sp = sub.add_parser("klbasis", help="Kazhdan-Lusztig polynomials p_{y,w}")
    common(sp)
    sp.set_defaults(func=cmd_klbasis)

    sp = sub.add_parser("cells", help="left, right and two-sided cells")
    common(sp)
    sp.set_defaults(func=cmd_cells)

    sp = sub.add_parser("afun", help="a-function and distinguished involutions")
    common(sp)
    sp.set_defaults(func=cmd_afun)

    sp = sub.add_parser("jring", help="asymptotic ring checks")
    common(sp)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--lifts", action="store_true", help="also certify cell module lifts")
    sp.set_defaults(func=cmd_jring)

    sp = sub.add_parser("perm-filtration", help="q-permutation module filtrations")
    common(sp)
    sp.add_argument("--J", help="one subset, e.g. '0,1' (default: all)")
    sp.add_argument("--skip-onto", action="store_true")
    sp.set_defaults(func=cmd_perm_filtration)

    sp = sub.add_parser("endo", help="endomorphism algebra and stratification checks")
    common(sp)
    sp.add_argument("--family", choices=["all", "i", "j"], default="all")
    sp.add_argument("--n", type=int, default=2, help="n for the q-Schur families")
    sp.add_argument("--no-strat", action="store_true")
    sp.set_defaults(func=cmd_endo)

    sp = sub.add_parser("decomp", help="decomposition matrices")
    common(sp)
    sp.add_argument("--family", choices=["hecke", "all", "i", "j"], default="hecke")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--prime", type=int, default=3)
    sp.add_argument("--field-deg", type=int, default=2)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--laurent-a", type=int, default=None, help="use the Laurent triple (r, t - a)")
    sp.set_defaults(func=cmd_decomp)

    sp = sub.add_parser("verify", help="run the property suite for a system")
    common(sp)
    sp.add_argument("--full", action="store_true", help="include the slower endomorphism checks")
    sp.set_defaults(func=cmd_verify)
    return p


def _emit(rep, fmt, stream):
    if isinstance(rep, str):
        stream.write(rep)
        return
    if fmt == "text":
        for k in sorted(rep):
            stream.write(f"{k}: {json.dumps(rep[k], sort_keys=True, default=str)}\n")
        return
    stream.write(json.dumps(rep, sort_keys=True, indent=2, default=str) + "\n")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    log.info("seed=%d", args.seed)
    t0 = time.time()
    try:
        rep, ok = args.func(args)
    except Exception as e:      # every failure becomes a machine-readable error
        kind = "cap_exceeded" if isinstance(e, CapExceeded) else type(e).__name__
        sys.stderr.write(json.dumps({"error": kind, "message": str(e),
                                     "command": args.command}, sort_keys=True) + "\n")
        return 2
    if not isinstance(rep, str):
        rep = {"schema": SCHEMA, "command": args.command, "ok": ok, **rep}
    _emit(rep, args.format, sys.stdout)
    log.info("done in %.2fs", time.time() - t0)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
