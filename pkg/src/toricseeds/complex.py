"""Pure simplicial complexes on bit-packed vertex sets.

A vertex set is a plain ``int``: bit ``i`` is set when vertex ``i`` belongs to
the set.  Vertex labels are 1-based, so bit 0 is never used.  Facets of a
:class:`PureComplex` are kept sorted by mask value, which is the canonical
order used for hashing, deduplication and serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_LABEL = 64


class ComplexError(ValueError):
    """Raised when a facet list violates the pure-complex invariants."""


# -- vertex sets ---------------------------------------------------------------

def vset(labels: Iterable[int]) -> int:
    mask = 0
    for v in labels:
        if not 1 <= v <= MAX_LABEL:
            raise ComplexError(f"vertex label {v} out of range 1..{MAX_LABEL}")
        mask |= 1 << v
    return mask


def members(mask: int) -> list[int]:
    """Labels of a vertex set, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def card(mask: int) -> int:
    return bin(mask).count("1")


def full_set(m: int) -> int:
    return ((1 << m) - 1) << 1


def submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask`` including the empty set and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def fmt_set(mask: int) -> str:
    return "{" + ",".join(map(str, members(mask))) + "}"


# -- the complex ----------------------------------------------------------------

@dataclass(frozen=True)
class PureComplex:
    """A pure simplicial complex given by its facets.

    ``m`` is the size of the label range ``1..m`` and ``n`` the facet size, so
    the dimension is ``n - 1``.  Unless ``embedded`` is set, every label in
    ``1..m`` must occur in some facet.
    """

    m: int
    n: int
    facets: tuple[int, ...]
    embedded: bool = False
    _vertices: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.m <= MAX_LABEL:
            raise ComplexError(f"m={self.m} out of range")
        facets = tuple(sorted(set(self.facets)))
        if len(facets) != len(self.facets) or facets != tuple(self.facets):
            object.__setattr__(self, "facets", facets)
        allowed = full_set(self.m)
        union = 0
        for f in facets:
            if f & ~allowed:
                raise ComplexError(f"facet {fmt_set(f)} uses labels outside 1..{self.m}")
            if card(f) != self.n:
                raise ComplexError(
                    f"facet {fmt_set(f)} has {card(f)} vertices, expected {self.n}"
                )
            union |= f
        if not self.embedded and facets and union != allowed:
            ghosts = members(allowed & ~union)
            raise ComplexError(f"labels {ghosts} occur in no facet (pass embedded=True)")
        object.__setattr__(self, "_vertices", union)

    @classmethod
    def from_facets(
        cls,
        facets: Iterable[Iterable[int]],
        m: int | None = None,
        n: int | None = None,
        embedded: bool | None = None,
    ) -> "PureComplex":
        masks = [vset(f) for f in facets]
        if n is None:
            if not masks:
                raise ComplexError("cannot infer n from an empty facet list")
            n = card(masks[0])
        union = 0
        for f in masks:
            union |= f
        top = union.bit_length() - 1 if union else 0
        if m is None:
            m = top
        if embedded is None:
            embedded = union != full_set(m)
        return cls(m, n, tuple(masks), embedded)

    # -- basic accessors

    @property
    def vertices(self) -> int:
        return self._vertices

    @property
    def num_vertices(self) -> int:
        return card(self._vertices)

    @property
    def dim(self) -> int:
        return self.n - 1

    def facet_lists(self) -> list[list[int]]:
        return [members(f) for f in self.facets]

    def is_face(self, mask: int) -> bool:
        return any(mask & f == mask for f in self.facets)

    def faces(self) -> set[int]:
        out: set[int] = set()
        for f in self.facets:
            if f in out:
                continue
            out.update(submasks(f))
        return out

    def compact(self) -> "PureComplex":
        """Relabel the used vertices to ``1..k`` preserving their order."""
        vs = members(self._vertices)
        if vs == list(range(1, len(vs) + 1)) and self.m == len(vs):
            return self
        return relabel(self, {v: i for i, v in enumerate(vs, 1)}, m=len(vs))

    def __str__(self) -> str:
        body = " ".join("".join(map(str, members(f))) if self.m < 10 else fmt_set(f)
                        for f in self.facets)
        return f"PureComplex(m={self.m}, n={self.n}: {body})"


def relabel(K: PureComplex, mapping: dict[int, int] | Sequence[int], m: int | None = None) -> PureComplex:
    """Apply a vertex relabeling (dict or sequence indexed by old label)."""
    if not isinstance(mapping, dict):
        mapping = {v: mapping[v] for v in members(K.vertices)}
    new = []
    for f in K.facets:
        g = 0
        for v in members(f):
            g |= 1 << mapping[v]
        new.append(g)
    if m is None:
        m = max(mapping[v] for v in members(K.vertices)) if K.facets else K.m
    union = 0
    for g in new:
        union |= g
    return PureComplex(m, K.n, tuple(new), union != full_set(m))


# -- operations -------------------------------------------------------------------

def ridges_of(facets: Iterable[int]) -> list[int]:
    """Every codimension-one subset of the given facets, deduplicated and sorted."""
    out: set[int] = set()
    size = None
    for f in facets:
        c = card(f)
        if size is None:
            size = c
        elif c != size:
            raise ComplexError("facets of mixed sizes: not pure")
        if c < 1:
            raise ComplexError("facets must be nonempty to have ridges")
        rest = f
        while rest:
            low = rest & -rest
            out.add(f ^ low)
            rest ^= low
    return sorted(out)


def link(K: PureComplex, face: int) -> PureComplex:
    """Link of ``face``; labels are kept, so the result is usually embedded."""
    if not K.is_face(face):
        raise ComplexError(f"{fmt_set(face)} is not a face")
    facets = tuple(f & ~face for f in K.facets if f & face == face)
    union = 0
    for f in facets:
        union |= f
    return PureComplex(K.m, K.n - card(face), facets, union != full_set(K.m))


def deletion(K: PureComplex, v: int) -> list[int]:
    """Maximal faces of K \\ v (not necessarily pure)."""
    bit = 1 << v
    kept = [f for f in K.facets if not f & bit]
    cut = {f ^ bit for f in K.facets if f & bit}
    return kept + sorted(r for r in cut if not any(r & g == r for g in kept))


def join(K: PureComplex, L: PureComplex) -> PureComplex:
    """Join, with the labels of ``L`` shifted by ``K.m``."""
    off = K.m
    shifted = [f << off for f in L.facets]
    facets = tuple(a | b for a in K.facets for b in shifted)
    return PureComplex(K.m + L.m, K.n + L.n, facets, K.embedded or L.embedded)


def sphere0() -> PureComplex:
    return PureComplex(2, 1, (vset([1]), vset([2])))


def suspension(K: PureComplex) -> PureComplex:
    """Join with a 0-sphere on two fresh labels ``m+1, m+2``."""
    return join(K, sphere0())


def wedge(K: PureComplex, v: int) -> PureComplex:
    """Simplicial wedge at ``v``; the doubled vertex keeps ``v`` and gains ``m+1``."""
    bit = 1 << v
    if not K.vertices & bit:
        raise ComplexError(f"{v} is not a vertex")
    new = 1 << (K.m + 1)
    facets = []
    for f in K.facets:
        if f & bit:
            facets.append(f | new)
        else:
            facets.append(f | bit)
            facets.append(f | new)
    return PureComplex(K.m + 1, K.n + 1, tuple(facets), K.embedded)


def picard(K: PureComplex) -> int:
    return K.num_vertices - K.n


def f_vector(K: PureComplex) -> list[int]:
    """Face counts ``f_0 .. f_{n-1}`` (the empty face is not counted)."""
    counts = [0] * K.n
    for face in K.faces():
        c = card(face)
        if c:
            counts[c - 1] += 1
    return counts


def is_weak_pseudomanifold_direct(K: PureComplex) -> bool:
    if not K.facets or K.n < 1:
        return False
    seen: dict[int, int] = {}
    for f in K.facets:
        rest = f
        while rest:
            low = rest & -rest
            r = f ^ low
            seen[r] = seen.get(r, 0) + 1
            rest ^= low
    return all(c == 2 for c in seen.values())


# -- minimal non-faces ---------------------------------------------------------------

def _face_table(K: PureComplex) -> tuple[np.ndarray, list[int]]:
    """Boolean face indicator over subsets of the vertex set, in compressed bits."""
    vs = members(K.vertices)
    k = len(vs)
    pos = {v: i for i, v in enumerate(vs)}
    table = np.zeros(1 << k, dtype=bool)
    idx = []
    for f in K.facets:
        c = 0
        for v in members(f):
            c |= 1 << pos[v]
        idx.append(c)
    table[idx] = True
    for b in range(k):
        view = table.reshape(-1, 2, 1 << b)
        view[:, 0, :] |= view[:, 1, :]
    return table, vs


def _expand(c: int, vs: list[int]) -> int:
    mask = 0
    i = 0
    while c:
        if c & 1:
            mask |= 1 << vs[i]
        c >>= 1
        i += 1
    return mask


def minimal_nonfaces(K: PureComplex) -> list[int]:
    """Inclusion-minimal non-faces over the vertex set of K, sorted by mask."""
    if K.num_vertices > 24:
        return _minimal_nonfaces_levelwise(K)
    table, vs = _face_table(K)
    ok = ~table
    for b in range(len(vs)):
        okv = ok.reshape(-1, 2, 1 << b)
        okv[:, 1, :] &= table.reshape(-1, 2, 1 << b)[:, 0, :]
    return sorted(_expand(int(c), vs) for c in np.flatnonzero(ok))


def _minimal_nonfaces_levelwise(K: PureComplex) -> list[int]:
    faces = K.faces()
    vs = members(K.vertices)
    out = set()
    for f in faces:
        for v in vs:
            b = 1 << v
            if f & b:
                continue
            c = f | b
            if c in faces or c in out:
                continue
            if all((c ^ (1 << u)) in faces for u in members(c)):
                out.add(c)
    return sorted(out)


# -- standard complexes ---------------------------------------------------------------

def boundary_simplex(k: int) -> PureComplex:
    """Boundary of the k-simplex on labels 1..k+1."""
    return PureComplex(k + 1, k, tuple(full_set(k + 1) ^ (1 << v) for v in range(1, k + 2)))


def polygon(m: int) -> PureComplex:
    return PureComplex.from_facets([(i, i % m + 1) for i in range(1, m + 1)], m=m)


def cross_polytope(d: int) -> PureComplex:
    """Boundary of the d-dimensional cross polytope; antipodal pairs {2i-1, 2i}."""
    K = sphere0()
    for _ in range(d - 1):
        K = suspension(K)
    return K


def cyclic_polytope(n: int, m: int) -> PureComplex:
    """Boundary of the cyclic n-polytope on m vertices via Gale's evenness condition."""
    facets = []
    for comb in combinations(range(1, m + 1), n):
        s = set(comb)
        good = True
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                if i in s or j in s:
                    continue
                between = sum(1 for k in comb if i < k < j)
                if between % 2:
                    good = False
                    break
            if not good:
                break
        if good:
            facets.append(comb)
    return PureComplex.from_facets(facets, m=m, n=n)


def rp2_6() -> PureComplex:
    """The 6-vertex real projective plane."""
    return PureComplex.from_facets(
        [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
         (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)], m=6)


def torus_7() -> PureComplex:
    """Moebius' 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    facets = []
    for i in range(7):
        facets.append(tuple(sorted((i + d) % 7 + 1 for d in (0, 1, 3))))
        facets.append(tuple(sorted((i + d) % 7 + 1 for d in (0, 2, 3))))
    return PureComplex.from_facets(facets, m=7)
