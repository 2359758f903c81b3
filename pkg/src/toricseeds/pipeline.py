"""Classification of colorable Picard-4 seeds of a given dimension.

For every injective dual characteristic matrix orbit the weak pseudo-manifolds
inside its binary matroid are enumerated under the upper bound filter; the
union is filtered by Picard number and seedness, deduplicated up to
isomorphism, and checked for PL-sphereness against the seed database.  The
suspensions that support a DCM but no injective one are appended last.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

from .charmap import idcm_orbits, matroid_from_dcm, supports_dcm
from .classify import IsoClasses, is_pl_sphere, is_seed
from .complex import PureComplex, minimal_nonfaces
from .search import DEFAULT_CAP_BITS, enumerate_masks, make_job, to_complex, ubt_property
from .seeddb import SeedDatabase, suspension_completions

log = logging.getLogger(__name__)

P = 4


@dataclass
class PipelineResult:
    n: int
    line7: int
    line13: int
    line15: int
    line19: int
    seeds: list[PureComplex]
    completions: list[PureComplex]
    orbit_hits: list[int] = field(default_factory=list)
    seconds: float = 0.0
    rejected: list[PureComplex] = field(default_factory=list)

    @property
    def final(self) -> list[PureComplex]:
        return self.seeds + self.completions

    def counts_line(self) -> str:
        return (f"COUNTS line7={self.line7} line13={self.line13} "
                f"line15={self.line15} line19={self.line19} final={len(self.final)}")


def orbit_universe(n: int, index: int) -> tuple[list[int], int]:
    D = idcm_orbits(n, P)[index]
    return list(matroid_from_dcm(D).facets), D.m


def run_pipeline(
    n: int,
    db: SeedDatabase,
    threads: int = 1,
    cap_bits: int = DEFAULT_CAP_BITS,
    progress: Callable[[str], None] | None = None,
) -> PipelineResult:
    """Classify (n-1)-dimensional colorable seeds of Picard number 4.

    ``db`` must hold complete strata for every smaller n.  It is not modified.
    """
    t0 = time.perf_counter()
    m = n + P
    prop = ubt_property(n)
    union: set[PureComplex] = set()
    hits = []
    orbits = idcm_orbits(n, P)
    for i, D in enumerate(orbits):
        universe = matroid_from_dcm(D).facets
        job = make_job(universe, m, n, [prop], threads=threads, cap_bits=cap_bits)
        found = [to_complex(x, job.universe, m, n) for x in enumerate_masks(job)]
        hits.append(len(found))
        union.update(found)
        if progress:
            progress(f"orbit {i + 1}/{len(orbits)}: {len(found)} complexes")
    line7 = sorted(union, key=lambda K: K.facets)

    kept: list[tuple[PureComplex, list[int]]] = []
    for K in line7:
        if K.num_vertices - K.n != P:
            continue
        mnfs = minimal_nonfaces(K)
        if is_seed(K, mnfs):
            kept.append((K, mnfs))
    if progress:
        progress(f"{len(kept)} seeds after the Picard and seedness filters")

    classes = IsoClasses()
    for K, mnfs in kept:
        classes.add(K, mnfs)
    reps = classes.reps
    if progress:
        progress(f"{len(reps)} isomorphism classes")

    spheres, rejected = [], []
    for K in reps:
        (spheres if is_pl_sphere(K, db) else rejected).append(K)
    completions = [T for T in suspension_completions(db, n)
                   if supports_dcm(T) is not None]
    return PipelineResult(n, len(line7), len(kept), len(reps), len(spheres),
                          spheres, completions, hits, time.perf_counter() - t0, rejected)


def build_database(
    max_n: int,
    db: SeedDatabase | None = None,
    threads: int = 1,
    progress: Callable[[str], None] | None = None,
) -> tuple[SeedDatabase, dict[int, PipelineResult]]:
    """Run the pipeline for n = 2..max_n in order, storing each stratum."""
    db = db or SeedDatabase.bootstrap()
    results = {}
    for n in range(2, max_n + 1):
        if db.has(n, P):
            continue
        res = run_pipeline(n, db, threads=threads, progress=progress)
        db.set_stratum(n, P, res.final)
        results[n] = res
    return db, results
