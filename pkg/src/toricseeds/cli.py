"""Command-line interface: ``toricseeds <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import random
import sys
import time

from . import charmap, classify, rcurves
from .complex import (
    PureComplex,
    boundary_simplex,
    cyclic_polytope,
    f_vector,
    fmt_set,
    minimal_nonfaces,
    relabel,
    rp2_6,
    torus_7,
)
from .formats import FormatError, read_complexes, read_matrix, write_complexes
from .gf2 import InfeasibleConstraints, apply_link_constraints
from .pipeline import P, build_database, run_pipeline
from .search import (
    DEFAULT_CAP_BITS,
    CombinationSpaceTooLarge,
    SearchJob,
    brute_force_wpm,
    cyclic_facet_count,
    default_threads,
    enumerate_wpm,
    make_job,
    ubt_property,
)
from .seeddb import MissingStratum, SeedDatabase

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_MISSING_STRATUM = 4
EXIT_CAP = 5

log = logging.getLogger("toricseeds")


def _say(msg: str = "") -> None:
    print(msg, flush=True)


def _fmt_rows(D: charmap.DualCharMatrix) -> str:
    return " ".join("".join(str(r >> i & 1) for i in range(D.p)) for r in D.rows)


def _progress_cb(args):
    if not args.progress:
        return None
    return lambda msg: print(f"[{time.strftime('%H:%M:%S')}] {msg}", file=sys.stderr, flush=True)


# -- orbits ---------------------------------------------------------------------------

def cmd_orbits(args) -> int:
    reps = charmap.idcm_orbits(args.n, args.p)
    for i, D in enumerate(reps):
        _say(f"{i}: {_fmt_rows(D)}")
    _say(f"orbits n={args.n} p={args.p}: {len(reps)}")
    return EXIT_OK


# -- enumerate ------------------------------------------------------------------------

def _universes(args) -> list[tuple[str, list[int], int, int]]:
    """(label, universe, m, n) triples selected by the enumerate options."""
    if args.universe:
        out = []
        for k, U in enumerate(read_complexes(args.universe)):
            out.append((f"universe {k}", list(U.facets), U.m, U.n))
        return out
    if args.lambda_file:
        mat, ring = read_matrix(args.lambda_file)
        if ring != "Z2":
            raise FormatError("--lambda expects a Z2 matrix")
        if mat.shape[0] > mat.shape[1]:
            D = charmap.DualCharMatrix.from_matrix(mat)
            M = charmap.matroid_from_dcm(D)
        else:
            M = charmap.binary_matroid(mat)
        return [(str(args.lambda_file), list(M.facets), M.m, M.n)]
    if args.n is None:
        raise FormatError("give --n, --lambda or --universe")
    reps = charmap.idcm_orbits(args.n, args.p)
    idx = range(len(reps)) if args.orbit is None else [args.orbit]
    out = []
    for i in idx:
        if not 0 <= i < len(reps):
            raise FormatError(f"orbit index {i} out of range 0..{len(reps) - 1}")
        M = charmap.matroid_from_dcm(reps[i])
        out.append((f"orbit {i}", list(M.facets), M.m, M.n))
    return out


def _pins(path: str | None) -> list[int]:
    if not path:
        return []
    facets: list[int] = []
    for K in read_complexes(path):
        facets.extend(K.facets)
    return facets


def cmd_enumerate(args) -> int:
    props = []
    found: set[PureComplex] = set()
    for label, universe, m, n in _universes(args):
        if args.props == "ubt":
            props = [ubt_property(n)]
        job = make_job(universe, m, n, props, threads=args.threads, cap_bits=args.cap)
        required, forbidden = _pins(args.require), _pins(args.forbid)
        if required or forbidden:
            job = SearchJob(job.universe, m, n, job.incidence,
                            apply_link_constraints(job.basis, job.incidence, required, forbidden),
                            job.properties, job.threads, job.cap_bits)
        res = enumerate_wpm(job)
        _say(f"{label}: M={len(universe)} s={job.basis.s} candidates={job.basis.combination_size()} "
             f"found={len(res)}")
        found.update(res)
    out = sorted(found, key=lambda K: (K.m, K.n, K.facets))
    _say(f"total distinct: {len(out)}")
    if args.out:
        write_complexes(args.out, out)
    return EXIT_OK


# -- pipeline -------------------------------------------------------------------------

def cmd_pipeline(args) -> int:
    db = SeedDatabase.open(args.seed_db)
    progress = _progress_cb(args)
    if args.strict:
        for k in range(2, args.n):
            if not db.has(k, P):
                raise MissingStratum(k, P)
    else:
        db, _ = build_database(args.n - 1, db, threads=args.threads, progress=progress)
    res = run_pipeline(args.n, db, threads=args.threads, cap_bits=args.cap, progress=progress)
    _say(f"n={args.n}: {res.line7} complexes after enumeration, {res.line13} seeds of Picard "
         f"number {P}, {res.line15} up to isomorphism, {res.line19} PL spheres")
    if res.completions:
        _say(f"plus {len(res.completions)} suspension(s) with a DCM but no injective DCM")
    _say(f"final: {len(res.final)} seeds ({res.seconds:.1f}s)")
    _say(res.counts_line())
    db.set_stratum(args.n, P, res.final)
    if args.seed_db:
        db.save(args.seed_db)
    if args.out:
        write_complexes(args.out, res.final, comment=f"seeds n={args.n} Picard number {P}")
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------

def _check(name: str, ok: bool, detail: str) -> bool:
    _say(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return ok


def _verify_wpm() -> bool:
    U = [f for f in PureComplex.from_facets([(a, b) for a in range(1, 5) for b in range(a + 1, 5)]).facets]
    fast = enumerate_wpm(make_job(U, 4, 2, threads=1))
    slow = brute_force_wpm(U, 4, 2)
    return _check("wpm", fast == slow and len(fast) == 7,
                  f"all edges of [4]: {len(fast)} by kernel search, {len(slow)} by brute force")


def _verify_iso() -> bool:
    rng = random.Random(0)
    ok = True
    K = cyclic_polytope(3, 6)
    for _ in range(30):
        perm = list(range(1, 7))
        rng.shuffle(perm)
        L = relabel(K, {v: perm[v - 1] for v in range(1, 7)}, m=6)
        ok &= classify.find_isomorphism(K, L) is not None and classify.brute_force_isomorphic(K, L)
    return _check("iso", ok, "30 relabelings of C^3(6) recognized by both methods")


def _verify_cyclic() -> bool:
    pairs = [(n, len(cyclic_polytope(n, n + 4).facets), cyclic_facet_count(n)) for n in range(2, 12)]
    return _check("cyclic", all(a == b for _, a, b in pairs),
                  " ".join(f"n={n}:{a}/{b}" for n, a, b in pairs))


def _verify_homology() -> bool:
    cases = [("rp2", rp2_6(), [1, 1, 1]), ("torus", torus_7(), [1, 2, 1])]
    cases += [(f"bd simplex {k}", boundary_simplex(k), classify.sphere_betti(k)) for k in range(2, 8)]
    ok = True
    parts = []
    for name, K, want in cases:
        got = classify.betti_z2(K)
        ok &= got == want
        parts.append(f"{name}={tuple(got)}")
    return _check("homology", ok, " ".join(parts))


SUITES = {"wpm": _verify_wpm, "iso": _verify_iso, "cyclic": _verify_cyclic, "homology": _verify_homology}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = all([SUITES[s]() for s in names])
    return EXIT_OK if ok else EXIT_FAILED


# -- analyze --------------------------------------------------------------------------

def _yes(x) -> str:
    return "yes" if x else "no"


def cmd_analyze(args) -> int:
    complexes = read_complexes(args.file)
    db = SeedDatabase.open(args.seed_db) if args.seed_db else None
    lam = None
    if args.lambda_file:
        lam, ring = read_matrix(args.lambda_file)
    for idx, K0 in enumerate(complexes):
        K = K0.compact()
        mnfs = minimal_nonfaces(K)
        _say(f"complex {idx}: m={K.m} n={K.n} facets={len(K.facets)} Picard={K.m - K.n}")
        _say(f"  f-vector: {f_vector(K)}")
        _say(f"  minimal non-faces: {' '.join(fmt_set(f) for f in mnfs)}")
        seqs = classify.color_sequences(K, mnfs)
        _say("  color sequences: " + " ".join(f"{v}:{seqs[v]}" for v in sorted(seqs)))
        _say(f"  seed: {_yes(classify.is_seed(K, mnfs))}")
        susp = classify.is_suspension(K)
        _say(f"  suspension: {'yes, poles ' + str(susp[0]) if susp else 'no'}")
        _say(f"  betti (mod 2): {classify.betti_z2(K)}")
        if db is not None:
            _say(f"  PL sphere: {_yes(classify.is_pl_sphere(K, db))}")
        D = charmap.supports_dcm(K)
        _say(f"  DCM: {_yes(D)}")
        if D is not None and K.m <= 2 ** (K.m - K.n) - 1:
            _say(f"  IDCM: {_yes(charmap.supports_dcm(K, injective=True))}")
        elif D is not None:
            _say("  IDCM: no (too many vertices)")
        if D is not None:
            pair = charmap.find_integer_charmap(K)
            _say(f"  integer lift: {_yes(pair)}")
            if pair is not None:
                for row in pair[1]:
                    _say("    " + " ".join(f"{int(x):2d}" for x in row))
        parts = rcurves.mnf_vertex_partitions(K, mnfs)
        _say("  MNF partitions: " + ("none" if not parts else
                                     " | ".join(" ".join(fmt_set(f) for f in P_) for P_ in parts)))
        if lam is not None and lam.shape == (K.n, K.m):
            if ring == "Z":
                _say(f"  supplied map non-singular over Z: {_yes(charmap.is_nonsingular_Z(lam, K))}")
                try:
                    opt = rcurves.optimal_partition(K, lam)
                    lhs, rhs, tight = rcurves.degree_inequality(K, lam)
                    _say(f"  degree inequality: {lhs} <= {rhs} tight={_yes(tight)}")
                    _say("  optimal partition: " + ("none" if opt is None else " ".join(fmt_set(f) for f in opt)))
                except ValueError as exc:
                    _say(f"  optimal partition: {exc}")
            else:
                weak = rcurves.weakly_optimal_partitions(K, lam)
                _say("  weakly optimal partitions: " + (
                    "none" if not weak else " | ".join(" ".join(fmt_set(f) for f in P_) for P_ in weak)))
    return EXIT_OK


# -- entry point ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricseeds", description="Enumerate weak pseudo-manifolds "
                                 "and classify colorable seeds of Picard number 4.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=None, help="parallel width (default: CPU count "
                       "or TORICSEEDS_THREADS)")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP_BITS,
                       help="refuse searches with at least 2^CAP candidates")
        p.add_argument("--progress", action="store_true")

    p = sub.add_parser("orbits", help="list injective DCM orbit representatives")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=4)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("enumerate", help="enumerate weak pseudo-manifolds in a facet universe")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int, default=4)
    p.add_argument("--orbit", type=int, help="orbit index (default: all orbits)")
    p.add_argument("--lambda", dest="lambda_file", help=".mat file: n x m char. map or m x p DCM")
    p.add_argument("--universe", help=".cplx file whose facets form the universe")
    p.add_argument("--props", choices=["none", "ubt"], default="none")
    p.add_argument("--require", help=".cplx file of facets that must be present")
    p.add_argument("--forbid", help=".cplx file of facets that must be absent")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("pipeline", help="classify seeds of Picard number 4")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed-db", dest="seed_db", help="seed database directory (read and updated)")
    p.add_argument("--strict", action="store_true", help="fail instead of computing missing lower strata")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("verify", help="run the brute-force cross-checks")
    p.add_argument("suite", nargs="?", default="all", choices=["all", *SUITES])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="report predicates for complexes in a .cplx file")
    p.add_argument("file")
    p.add_argument("--lambda", dest="lambda_file", help=".mat characteristic map to evaluate")
    p.add_argument("--seed-db", dest="seed_db")
    p.set_defaults(func=cmd_analyze)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 on bad usage
        return EXIT_OK if not exc.code else EXIT_PARSE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", None) is None and hasattr(args, "threads"):
        args.threads = default_threads()
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except (FormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleConstraints as exc:
        print(f"infeasible constraints: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except MissingStratum as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_STRATUM
    except CombinationSpaceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except charmap.NoInjectiveMap as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
