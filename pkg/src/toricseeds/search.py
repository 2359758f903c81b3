"""Enumeration of weak pseudo-manifolds inside a facet universe.

Every candidate is ``offset + sum of one admissible subset per block`` of a
:class:`~toricseeds.gf2.KernelBasis`.  The blocks are split into an outer
part, walked one item at a time, and an inner part whose whole product is
materialized as a 0/1 matrix ``Kb``.  For an outer vector ``ka`` the XOR
``Kb ^ ka`` is never formed: with 0/1 entries,

    (Kb ^ ka) @ W  ==  Kb @ (W * (1 - 2 ka)[:, None])  +  ka @ W,

so one matrix product per group of outer items yields every ridge count and
every affine property value of the group.  Ridge counts of kernel elements
are even, hence "all counts <= 2" is exactly the weak pseudo-manifold test.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import comb, prod
from typing import Callable, Iterable, Sequence

import numpy as np

from .complex import PureComplex, full_set
from .gf2 import IncidenceMatrix, KernelBasis, search_basis, to_dense

log = logging.getLogger(__name__)

DEFAULT_CAP_BITS = 48
INNER_ROWS = 1 << 14
RESULT_BUDGET = 1 << 23


class CombinationSpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class AffineProperty:
    """``g(K) = constant + sum_j weights_j * k_j``; a complex passes when g(K) > 0.

    ``weights`` is either one int applied to every facet or a per-facet sequence.
    """

    weights: int | tuple[int, ...]
    constant: int
    name: str = ""

    def weight_vector(self, M: int) -> np.ndarray:
        if isinstance(self.weights, int):
            return np.full(M, self.weights, dtype=np.int64)
        w = np.asarray(self.weights, dtype=np.int64)
        if w.shape != (M,):
            raise ValueError(f"property {self.name!r} has {w.size} weights for {M} facets")
        return w

    def evaluate(self, k: Sequence[int] | np.ndarray) -> int:
        k = np.asarray(k, dtype=np.int64)
        return int(self.constant + self.weight_vector(k.size) @ k)


def cyclic_facet_count(n: int, p: int = 4) -> int:
    """Facets of the cyclic n-polytope with n + 4 vertices (upper bound theorem)."""
    if p != 4:
        raise ValueError("closed formula implemented for Picard number 4 only")
    return comb(n + 4 - (n + 1) // 2, 4) + comb(n + 3 - n // 2, 4)


def ubt_property(n: int) -> AffineProperty:
    if n < 1:
        raise ValueError("n must be positive")
    return AffineProperty(-1, cyclic_facet_count(n) + 1, name="ubt")


@dataclass
class SearchJob:
    universe: tuple[int, ...]
    m: int
    n: int
    incidence: IncidenceMatrix
    basis: KernelBasis
    properties: list[AffineProperty] = field(default_factory=list)
    threads: int = 1
    cap_bits: int = DEFAULT_CAP_BITS
    progress: Callable[[int, int], None] | None = None

    def __post_init__(self) -> None:
        if self.basis.M != len(self.universe) or self.incidence.facets != tuple(self.universe):
            raise ValueError("basis, incidence matrix and universe disagree")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def make_job(
    universe: Iterable[int],
    m: int,
    n: int,
    properties: Sequence[AffineProperty] = (),
    threads: int | None = None,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> SearchJob:
    A, KB = search_basis(universe)
    return SearchJob(A.facets, m, n, A, KB, list(properties),
                     threads or default_threads(), cap_bits)


def default_threads() -> int:
    env = os.environ.get("TORICSEEDS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def evaluate_incidence(k: int | Sequence[int], A: IncidenceMatrix, abort_at: int | None = 3) -> tuple[list[int], bool]:
    """Ridge counts of the characteristic vector ``k``.

    ``k`` is an M-bit int or a 0/1 sequence.  Returns ``(counts, aborted)``;
    counting stops as soon as a ridge reaches ``abort_at``.
    """
    if not isinstance(k, int):
        seq = list(k)
        if len(seq) != A.M:
            raise ValueError("vector length differs from facet count")
        k = sum(1 << j for j, x in enumerate(seq) if x)
    counts = [0] * A.N
    j = 0
    while k:
        if k & 1:
            for i in A.cols[j]:
                counts[i] += 1
                if abort_at is not None and counts[i] >= abort_at:
                    return counts, True
        k >>= 1
        j += 1
    return counts, False


def to_complex(mask: int, universe: Sequence[int], m: int, n: int) -> PureComplex:
    facets = []
    j = 0
    while mask:
        if mask & 1:
            facets.append(universe[j])
        mask >>= 1
        j += 1
    union = 0
    for f in facets:
        union |= f
    return PureComplex(m, n, tuple(facets), union != full_set(m))


def _split_blocks(sizes: list[int]) -> tuple[list[int], list[int]]:
    """Indices of inner and outer blocks; inner product stays near INNER_ROWS."""
    order = sorted(range(len(sizes)), key=lambda i: (sizes[i], i))
    inner: list[int] = []
    rows = 1
    for i in order:
        if rows * sizes[i] > INNER_ROWS and inner:
            continue
        inner.append(i)
        rows *= sizes[i]
    inner_set = set(inner)
    outer = [i for i in range(len(sizes)) if i not in inner_set]
    return sorted(inner), outer


def enumerate_masks(job: SearchJob) -> list[int]:
    """Characteristic bitmasks (over the universe) of all admissible complexes."""
    KB, A = job.basis, job.incidence
    M, N = A.M, A.N
    total = KB.combination_size()
    if total.bit_length() - 1 >= job.cap_bits:
        raise CombinationSpaceTooLarge(
            f"combination space of {total} candidates exceeds the cap 2^{job.cap_bits}"
        )
    masks = [list(c) for c in KB.candidate_masks]
    sizes = [len(c) for c in masks]
    inner, outer = _split_blocks(sizes)

    kb_ints = [0]
    for i in inner:
        kb_ints = [a ^ b for a in kb_ints for b in masks[i]]
    Kb = to_dense(kb_ints, M).astype(np.float32)

    props = list(job.properties)
    W = np.zeros((M, N + 1 + len(props)), dtype=np.float32)
    W[:, :N] = A.dense().T
    W[:, N] = 1.0
    thresholds = [0.5]
    for c, g in enumerate(props):
        W[:, N + 1 + c] = g.weight_vector(M)
        thresholds.append(-g.constant + 0.5)
    ncols = W.shape[1]
    thr = np.asarray(thresholds, dtype=np.float32)

    outer_lists = [masks[i] for i in outer]
    n_outer = prod(len(x) for x in outer_lists)
    group = max(1, min(n_outer, RESULT_BUDGET // max(1, len(kb_ints) * ncols)))

    def outer_items() -> Iterable[int]:
        for combo in product(*outer_lists):
            x = KB.offset
            for c in combo:
                x ^= c
            yield x

    def run_group(kas: list[int]) -> list[int]:
        ka = to_dense(kas, M).astype(np.float32)          # g x M
        sign = 1.0 - 2.0 * ka                              # g x M
        Wg = (W[None, :, :] * sign[:, :, None])            # g x M x ncols
        Wg = Wg.transpose(1, 0, 2).reshape(M, -1)
        base = ka @ W                                      # g x ncols
        R = (Kb @ Wg).reshape(len(kb_ints), len(kas), ncols) + base[None, :, :]
        ok = (R[:, :, :N] < 2.5).all(axis=2)
        ok &= (R[:, :, N:] > thr[None, None, :]).all(axis=2)
        rows, cols = np.nonzero(ok)
        return [kb_ints[r] ^ kas[c] for r, c in zip(rows.tolist(), cols.tolist())]

    groups: list[list[int]] = []
    cur: list[int] = []
    for x in outer_items():
        cur.append(x)
        if len(cur) == group:
            groups.append(cur)
            cur = []
    if cur:
        groups.append(cur)

    found: list[int] = []
    done = 0
    if job.threads > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=job.threads) as pool:
            for res in pool.map(run_group, groups):
                found.extend(res)
                done += 1
                if job.progress:
                    job.progress(done, len(groups))
    else:
        for g in groups:
            found.extend(run_group(g))
            done += 1
            if job.progress:
                job.progress(done, len(groups))
    log.debug("searched %d candidates (%d inner x %d outer), %d hits",
              total, len(kb_ints), n_outer, len(found))
    return sorted(set(found))


def enumerate_wpm(job: SearchJob) -> list[PureComplex]:
    """All nonempty weak pseudo-manifolds in the universe passing every property."""
    out = [to_complex(x, job.universe, job.m, job.n) for x in enumerate_masks(job)]
    out.sort(key=lambda K: K.facets)
    return out


def brute_force_wpm(
    universe: Sequence[int],
    m: int,
    n: int,
    properties: Sequence[AffineProperty] = (),
    chunk_bits: int = 16,
) -> list[PureComplex]:
    """Check all 2^M facet subsets directly, without any kernel computation."""
    from .complex import ridges_of

    universe = tuple(sorted(set(universe)))
    M = len(universe)
    ridges = ridges_of(universe)
    rindex = {r: i for i, r in enumerate(ridges)}
    inc = np.zeros((M, len(ridges)), dtype=np.float32)
    for j, f in enumerate(universe):
        rest = f
        while rest:
            low = rest & -rest
            inc[j, rindex[f ^ low]] = 1
            rest ^= low
    pw = [np.asarray(g.weight_vector(M), dtype=np.float32) for g in properties]
    chunk_bits = min(chunk_bits, M)
    low_bits = ((np.arange(1 << chunk_bits)[:, None] >> np.arange(chunk_bits)) & 1).astype(np.float32)
    found = []
    for high in range(1 << (M - chunk_bits)):
        hb = np.array([(high >> b) & 1 for b in range(M - chunk_bits)], dtype=np.float32)
        X = np.concatenate([low_bits, np.broadcast_to(hb, (low_bits.shape[0], hb.size))], axis=1)
        counts = X @ inc
        ok = np.isin(counts, (0.0, 2.0)).all(axis=1) & (X.sum(axis=1) > 0)
        for g, w in zip(properties, pw):
            ok &= (X @ w + g.constant) > 0
        for r in np.flatnonzero(ok):
            found.append(int(r) | (high << chunk_bits))
    out = [to_complex(x, universe, m, n) for x in found]
    out.sort(key=lambda K: K.facets)
    return out
