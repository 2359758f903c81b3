"""GF(2) linear algebra on int bitsets.

Vectors over GF(2) are Python ints.  A matrix is a list of such ints; whether
the ints are rows or columns is stated per function.  The kernel of the
ridge-facet incidence matrix holds every weak pseudo-manifold on a facet
universe, and :func:`convenient_basis` rewrites a kernel basis so that the
search can skip most linear combinations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .complex import ComplexError, ridges_of


class InfeasibleConstraints(ValueError):
    """No kernel element satisfies the requested pinned facets."""


# -- bitset helpers -------------------------------------------------------------

def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank of a list of bit vectors."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                break
    return len(basis)


def in_span(vec: int, rows: Sequence[int]) -> bool:
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in basis:
                r ^= basis[top]
            else:
                basis[top] = r
                break
    while vec:
        top = vec.bit_length() - 1
        if top not in basis:
            return False
        vec ^= basis[top]
    return True


def solve(columns: Sequence[int], target: int) -> int | None:
    """Return x (bitmask over column indices) with sum of selected columns == target."""
    basis: dict[int, tuple[int, int]] = {}
    for i, c in enumerate(columns):
        combo = 1 << i
        while c:
            top = c.bit_length() - 1
            if top in basis:
                bc, bx = basis[top]
                c ^= bc
                combo ^= bx
            else:
                basis[top] = (c, combo)
                break
    x = 0
    while target:
        top = target.bit_length() - 1
        if top not in basis:
            return None
        bc, bx = basis[top]
        target ^= bc
        x ^= bx
    return x


def transpose(vectors: Sequence[int], width: int) -> list[int]:
    """Bit-transpose: ``len(vectors)`` ints of ``width`` bits -> ``width`` ints."""
    out = [0] * width
    for i, v in enumerate(vectors):
        for j in bits(v):
            out[j] |= 1 << i
    return out


def to_dense(vectors: Sequence[int], width: int) -> np.ndarray:
    """Rows of a uint8 0/1 array, one per vector."""
    nbytes = (width + 7) // 8
    buf = b"".join(v.to_bytes(nbytes, "little") for v in vectors)
    arr = np.frombuffer(buf, dtype=np.uint8).reshape(len(vectors), nbytes)
    return np.unpackbits(arr, axis=1, bitorder="little")[:, :width]


def from_dense(arr: np.ndarray) -> list[int]:
    packed = np.packbits(np.asarray(arr, dtype=np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def dump_grid(vectors: Sequence[int], width: int) -> str:
    """'0'/'1' text grid, one line per vector, bit 0 first."""
    return "\n".join("".join("1" if v >> j & 1 else "0" for j in range(width)) for v in vectors)


# -- incidence matrix -------------------------------------------------------------

@dataclass(frozen=True)
class IncidenceMatrix:
    """Ridge-facet incidence of a facet universe.

    ``cols[j]`` lists the ridge indices of facet ``j``; ``parents[i]`` is the
    bitmask over facet indices of the facets containing ridge ``i``.
    """

    facets: tuple[int, ...]
    ridges: tuple[int, ...]
    cols: tuple[tuple[int, ...], ...]
    parents: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.ridges)

    @property
    def M(self) -> int:
        return len(self.facets)

    def rows(self) -> list[int]:
        return list(self.parents)

    def dense(self) -> np.ndarray:
        """N x M uint8 array."""
        return to_dense(self.parents, self.M)


def incidence_matrix(facets: Iterable[int]) -> IncidenceMatrix:
    facets = tuple(sorted(set(facets)))
    if not facets:
        raise ComplexError("empty facet universe")
    ridges = ridges_of(facets)
    index = {r: i for i, r in enumerate(ridges)}
    cols = []
    parents = [0] * len(ridges)
    for j, f in enumerate(facets):
        rs = []
        rest = f
        while rest:
            low = rest & -rest
            i = index[f ^ low]
            rs.append(i)
            parents[i] |= 1 << j
            rest ^= low
        cols.append(tuple(sorted(rs)))
    return IncidenceMatrix(facets, tuple(ridges), tuple(cols), tuple(parents))


def kernel_basis(A: IncidenceMatrix | Sequence[int], width: int | None = None) -> list[int]:
    """Basis of the GF(2) null space; each basis vector is an M-bit int.

    ``A`` is an :class:`IncidenceMatrix` or a list of row bitmasks of the given
    ``width``.
    """
    if isinstance(A, IncidenceMatrix):
        rows, width = list(A.parents), A.M
    else:
        rows = list(A)
        if width is None:
            raise ValueError("width is required for raw row lists")
    pivots: list[tuple[int, int]] = []  # (pivot column, row) in reduced form
    for r in rows:
        for col, prow in pivots:
            if r >> col & 1:
                r ^= prow
        if not r:
            continue
        col = (r & -r).bit_length() - 1
        for k, (c2, prow) in enumerate(pivots):
            if prow >> col & 1:
                pivots[k] = (c2, prow ^ r)
        pivots.append((col, r))
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(width):
        if f in pivot_cols:
            continue
        v = 1 << f
        for col, prow in pivots:
            if prow >> f & 1:
                v |= 1 << col
        basis.append(v)
    return basis


# -- convenient basis ----------------------------------------------------------------

@dataclass(frozen=True)
class KernelBasis:
    """A kernel basis arranged for the block-pruned search.

    ``columns`` are M-bit generators.  The first ``pinned_ones`` columns have a
    coefficient forced to 1, the next ``pinned_zeros`` forced to 0 and the rest
    are free; ``offset`` is the XOR of the forced-to-1 columns.  ``blocks``
    partitions the free column indices.  Block ``k < len(chosen_ridges)`` was
    induced by ridge ``chosen_ridges[k]``; later blocks are singletons.
    ``candidates[k]`` lists the admissible subsets of block ``k`` (at most two
    columns each) and ``candidate_masks[k]`` their XORs.
    """

    M: int
    columns: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    chosen_ridges: tuple[int, ...]
    candidates: tuple[tuple[tuple[int, ...], ...], ...]
    candidate_masks: tuple[tuple[int, ...], ...]
    offset: int = 0
    pinned_ones: int = 0
    pinned_zeros: int = 0

    @property
    def s(self) -> int:
        return len(self.columns)

    @property
    def free(self) -> range:
        return range(self.pinned_ones + self.pinned_zeros, self.s)

    def combination_size(self) -> int:
        return prod(len(c) for c in self.candidates)

    def dense(self) -> np.ndarray:
        """M x s uint8 matrix with the generators as columns."""
        return to_dense(self.columns, self.M).T.copy()


def _compress(x: int, rows: list[int]) -> int:
    out = 0
    for i, r in enumerate(rows):
        if x >> r & 1:
            out |= 1 << i
    return out


def _block_gain(remaining: list[int], earlier: list[int], P: int) -> tuple[float, int] | None:
    """Estimate the reduction factor of a block on parent set P, or None if unusable."""
    rows = bits(P)
    restricted = [_compress(c & P, rows) for c in remaining]
    k = gf2_rank(restricted)
    if k < 2:
        return None
    for c in earlier:
        if c & P and not in_span(_compress(c & P, rows), restricted):
            return None
    # Reduced patterns always leave at most 1 + k + C(k,2) admissible subsets.
    return 2 ** k / (1 + k + k * (k - 1) // 2), k


def convenient_basis(
    B: Sequence[int],
    A: IncidenceMatrix,
    offset: int = 0,
    pinned_ones: int = 0,
    pinned_zeros: int = 0,
) -> KernelBasis:
    """Column-transform a kernel basis into ridge-induced blocks.

    Columns ``B[:pinned_ones + pinned_zeros]`` are kept untouched as pinned
    generators; the remaining columns are free.  Ridges are chosen greedily
    with pairwise disjoint parent sets; on each chosen ridge the free columns
    are brought to reduced column echelon form, so that a sum of three or more
    block columns always puts three or more facets on the ridge.
    """
    cols = list(B)
    npin = pinned_ones + pinned_zeros
    pinned = cols[:npin]
    remaining = cols[npin:]
    blocks_cols: list[list[int]] = []
    chosen: list[int] = []
    used = 0
    parents = A.parents

    while True:
        best = None
        earlier = [c for blk in blocks_cols for c in blk]
        for r, P in enumerate(parents):
            if P & used or popcount(P) < 3:
                continue
            scored = _block_gain(remaining, earlier, P)
            if scored is None:
                continue
            gain, k = scored
            key = (gain, k, popcount(P), -r)
            if best is None or key > best[0]:
                best = (key, r)
        if best is None or best[0][0] <= 1.0:
            break
        r = best[1]
        P = parents[r]
        pivots: list[int] = []
        rest = list(remaining)
        for row in bits(P):
            bit = 1 << row
            hit = next((i for i, c in enumerate(rest) if c & bit), None)
            if hit is None:
                continue
            piv = rest.pop(hit)
            rest = [c ^ piv if c & bit else c for c in rest]
            pivots = [c ^ piv if c & bit else c for c in pivots]
            blocks_cols = [[c ^ piv if c & bit else c for c in blk] for blk in blocks_cols]
            if offset & bit:
                offset ^= piv
            pivots.append(piv)
        blocks_cols.append(pivots)
        chosen.append(r)
        used |= P
        remaining = rest

    columns = pinned + [c for blk in blocks_cols for c in blk] + remaining
    blocks: list[tuple[int, ...]] = []
    candidates: list[tuple[tuple[int, ...], ...]] = []
    masks: list[tuple[int, ...]] = []
    idx = npin
    for r, blk in zip(chosen, blocks_cols):
        ids = tuple(range(idx, idx + len(blk)))
        idx += len(blk)
        P = parents[r]
        subs = [()] + [(i,) for i in ids] + list(combinations(ids, 2))
        keep = []
        for sub in subs:
            x = offset
            for i in sub:
                x ^= columns[i]
            if popcount(x & P) in (0, 2):
                keep.append((sub, x ^ offset))
        blocks.append(ids)
        candidates.append(tuple(s for s, _ in keep))
        masks.append(tuple(x for _, x in keep))
    for i in range(idx, len(columns)):
        blocks.append((i,))
        candidates.append(((), (i,)))
        masks.append((0, columns[i]))
    return KernelBasis(
        M=A.M,
        columns=tuple(columns),
        blocks=tuple(blocks),
        chosen_ridges=tuple(chosen),
        candidates=tuple(candidates),
        candidate_masks=tuple(masks),
        offset=offset,
        pinned_ones=pinned_ones,
        pinned_zeros=pinned_zeros,
    )


def apply_link_constraints(
    KB: KernelBasis,
    A: IncidenceMatrix,
    required: Iterable[int],
    forbidden: Iterable[int],
) -> KernelBasis:
    """Pin facets of the search space: ``required`` facets present, ``forbidden`` absent.

    Facets are given as vertex-set masks of the universe.  The generators are
    brought to reduced column echelon form with the required rows first and the
    forbidden rows next, which forces a prefix of coefficients to 1, the next
    stretch to 0, and leaves the rest free.  Any earlier pins on ``KB`` are
    discarded.  Raises :class:`InfeasibleConstraints` when no kernel element
    satisfies the pins.
    """
    index = {f: j for j, f in enumerate(A.facets)}
    req = set(required)
    forb = set(forbidden)
    for f in req | forb:
        if f not in index:
            raise ValueError(f"facet mask {f:#x} is not in the universe")
    if req & forb:
        raise InfeasibleConstraints("a facet is both required and forbidden")
    I = sorted(index[f] for f in req)
    J = sorted(index[f] for f in forb)
    cols = list(KB.columns)
    npiv = 0
    counts = []
    for group in (I, J):
        found = 0
        for row in group:
            bit = 1 << row
            hit = next((i for i in range(npiv, len(cols)) if cols[i] & bit), None)
            if hit is None:
                continue
            cols[npiv], cols[hit] = cols[hit], cols[npiv]
            piv = cols[npiv]
            for i in range(len(cols)):
                if i != npiv and cols[i] & bit:
                    cols[i] ^= piv
            npiv += 1
            found += 1
        counts.append(found)
    s_i, s_j = counts
    offset = 0
    for c in cols[:s_i]:
        offset ^= c
    req_mask = sum(1 << j for j in I)
    forb_mask = sum(1 << j for j in J)
    if offset & req_mask != req_mask or offset & forb_mask:
        raise InfeasibleConstraints("pinned facets are inconsistent with the kernel")
    return convenient_basis(cols, A, offset=offset, pinned_ones=s_i, pinned_zeros=s_j)


def search_basis(facets: Iterable[int]) -> tuple[IncidenceMatrix, KernelBasis]:
    """Incidence matrix and convenient kernel basis of a facet universe."""
    A = incidence_matrix(facets)
    return A, convenient_basis(kernel_basis(A), A)


def unconstrained_size(KB: KernelBasis) -> int:
    """The block-count formula prod(1 + |I_k| + C(|I_k|, 2))."""
    return prod(1 + len(b) + len(b) * (len(b) - 1) // 2 for b in KB.blocks)


def matrix_rank_dense(arr: np.ndarray) -> int:
    return gf2_rank(from_dense(arr))
