"""Zero-sum primitive collections and partitions of the vertex set into minimal non-faces.

Characteristic maps are taken as given: only non-singularity is checked,
never whether the map spans a complete fan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .charmap import is_nonsingular_Z, is_nonsingular_Z2
from .complex import PureComplex, card, members, minimal_nonfaces


@dataclass(frozen=True)
class PrimitiveCollection:
    mnf: int
    vectors: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return card(self.mnf)


Partition = tuple[int, ...]


def _columns(lam, K: PureComplex) -> np.ndarray:
    arr = np.asarray(lam, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != K.m:
        raise ValueError(f"expected a matrix with {K.m} columns")
    return arr


def _zero_sum(arr: np.ndarray, mask: int, modulus: int | None = None) -> bool:
    total = arr[:, [v - 1 for v in members(mask)]].sum(axis=1)
    if modulus is not None:
        total %= modulus
    return not total.any()


def zero_sum_collections(K: PureComplex, lam) -> list[PrimitiveCollection]:
    """Minimal non-faces whose integer images sum to zero.

    Raises ValueError if ``lam`` is singular on some facet, or if two such
    collections overlap, which cannot happen for a map that spans a fan.
    """
    arr = _columns(lam, K)
    if not is_nonsingular_Z(arr, K):
        raise ValueError("characteristic map is singular on some facet")
    out = []
    for f in minimal_nonfaces(K):
        if _zero_sum(arr, f):
            vecs = tuple(tuple(int(x) for x in arr[:, v - 1]) for v in members(f))
            out.append(PrimitiveCollection(f, vecs))
    seen = 0
    for c in out:
        if seen & c.mnf:
            raise ValueError("zero-sum collections overlap; the map does not span a fan")
        seen |= c.mnf
    return out


def degree_inequality(K: PureComplex, lam) -> tuple[int, int, bool]:
    """``(lhs, rhs, tight)``: total size of zero-sum collections versus m."""
    cols = zero_sum_collections(K, lam)
    lhs = sum(c.size for c in cols)
    rhs = K.num_vertices
    return lhs, rhs, lhs == rhs


def mnf_vertex_partitions(K: PureComplex, mnfs: Sequence[int] | None = None) -> list[Partition]:
    """Every partition of the vertex set into minimal non-faces (exact cover)."""
    if mnfs is None:
        mnfs = minimal_nonfaces(K)
    by_low: dict[int, list[int]] = {}
    for f in mnfs:
        low = (f & -f).bit_length() - 1
        by_low.setdefault(low, []).append(f)
    out: list[Partition] = []
    parts: list[int] = []

    def rec(left: int) -> None:
        if not left:
            out.append(tuple(sorted(parts)))
            return
        v = (left & -left).bit_length() - 1
        for f in by_low.get(v, ()):
            if f & ~left:
                continue
            parts.append(f)
            rec(left & ~f)
            parts.pop()

    rec(K.vertices)
    return sorted(out)


def optimal_partition(K: PureComplex, lam) -> Partition | None:
    """A vertex partition into minimal non-faces whose images each sum to zero."""
    cols = zero_sum_collections(K, lam)
    union = 0
    for c in cols:
        union |= c.mnf
    if union != K.vertices:
        return None
    return tuple(sorted(c.mnf for c in cols))


def weakly_optimal_partitions(K: PureComplex, lam_r) -> list[Partition]:
    """Vertex partitions into minimal non-faces whose images sum to zero mod 2."""
    arr = _columns(lam_r, K) % 2
    if not is_nonsingular_Z2(arr, K):
        raise ValueError("mod-2 characteristic map is singular on some facet")
    return [P for P in mnf_vertex_partitions(K) if all(_zero_sum(arr, f, 2) for f in P)]
