"""Predicates on complexes: seedness, isomorphism, mod-2 homology, PL-sphereness."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import permutations
from typing import TYPE_CHECKING, Iterable, Sequence

from .complex import PureComplex, card, f_vector, link, members, minimal_nonfaces
from .gf2 import gf2_rank

if TYPE_CHECKING:
    from .seeddb import SeedDatabase


# -- minimal non-faces and seedness ---------------------------------------------

def color_sequences(K: PureComplex, mnfs: Sequence[int] | None = None) -> dict[int, tuple[int, ...]]:
    """For each vertex, the sorted sizes of the minimal non-faces containing it."""
    if mnfs is None:
        mnfs = minimal_nonfaces(K)
    out: dict[int, list[int]] = {v: [] for v in members(K.vertices)}
    for f in mnfs:
        c = card(f)
        for v in members(f):
            out[v].append(c)
    return {v: tuple(sorted(s)) for v, s in out.items()}


def _mnf_signatures(K: PureComplex, mnfs: Sequence[int]) -> dict[int, int]:
    """Vertex -> bitmask of indices of the minimal non-faces containing it."""
    sig = {v: 0 for v in members(K.vertices)}
    for i, f in enumerate(mnfs):
        for v in members(f):
            sig[v] |= 1 << i
    return sig


def _edges(K: PureComplex) -> set[int]:
    out = set()
    for f in K.facets:
        vs = members(f)
        for i, a in enumerate(vs):
            for b in vs[i + 1:]:
                out.add((1 << a) | (1 << b))
    return out


def wedge_witnesses(K: PureComplex, mnfs: Sequence[int] | None = None) -> list[tuple[int, int]]:
    """Edges {v, w} such that every minimal non-face contains both or neither."""
    if mnfs is None:
        mnfs = minimal_nonfaces(K)
    sig = _mnf_signatures(K, mnfs)
    groups: dict[int, list[int]] = defaultdict(list)
    for v, s in sig.items():
        groups[s].append(v)
    if all(len(g) < 2 for g in groups.values()):
        return []
    edges = _edges(K) if K.n >= 2 else set()
    out = []
    for g in groups.values():
        for i, v in enumerate(g):
            for w in g[i + 1:]:
                if (1 << v) | (1 << w) in edges:
                    out.append((v, w))
    return sorted(out)


def is_seed(K: PureComplex, mnfs: Sequence[int] | None = None) -> bool:
    return not wedge_witnesses(K, mnfs)


def reduce_to_seed(K: PureComplex) -> PureComplex:
    """Undo wedges until none is left; the result is compact."""
    K = K.compact()
    while True:
        wit = wedge_witnesses(K)
        if not wit:
            return K
        v, _ = wit[0]
        K = link(K, 1 << v).compact()


def is_suspension(K: PureComplex) -> tuple[tuple[int, int], PureComplex] | None:
    """Return ``((v, w), base)`` when K is the suspension of ``base`` with poles v, w."""
    vs = members(K.vertices)
    for i, v in enumerate(vs):
        bv = 1 << v
        for w in vs[i + 1:]:
            bw = 1 << w
            both = bv | bw
            if any(card(f & both) != 1 for f in K.facets):
                continue
            lv = sorted(f ^ bv for f in K.facets if f & bv)
            lw = sorted(f ^ bw for f in K.facets if f & bw)
            if lv == lw:
                return (v, w), link(K, bv)
    return None


# -- isomorphism ----------------------------------------------------------------------

def fingerprint(K: PureComplex, mnfs: Sequence[int] | None = None) -> tuple:
    if mnfs is None:
        mnfs = minimal_nonfaces(K)
    return (K.num_vertices, K.n, len(K.facets), len(mnfs), tuple(f_vector(K)),
            tuple(sorted(card(f) for f in mnfs)))


def vertex_colors(K: PureComplex, mnfs: Sequence[int] | None = None) -> tuple[dict[int, int], int]:
    """Color refinement seeded by color sequences and facet degrees.

    Colors are hashes of int tuples, so they are comparable across complexes
    when both refinements ran the same number of rounds (also returned).
    """
    if mnfs is None:
        mnfs = minimal_nonfaces(K)
    seqs = color_sequences(K, mnfs)
    deg = Counter(v for f in K.facets for v in members(f))
    color = {v: hash((deg[v], seqs[v])) for v in seqs}
    facet_members = [members(f) for f in K.facets]
    mnf_members = [members(f) for f in mnfs]
    rounds = 0
    classes = len(set(color.values()))
    while True:
        acc: dict[int, list] = {v: [] for v in color}
        for vs in facet_members:
            cs = sorted(color[u] for u in vs)
            key = hash(tuple(cs))
            for v in vs:
                acc[v].append(key)
        macc: dict[int, list] = {v: [] for v in color}
        for vs in mnf_members:
            key = hash(tuple(sorted(color[u] for u in vs)))
            for v in vs:
                macc[v].append(key)
        new = {v: hash((color[v], tuple(sorted(acc[v])), tuple(sorted(macc[v])))) for v in color}
        rounds += 1
        n_new = len(set(new.values()))
        color = new
        if n_new == classes:
            return color, rounds
        classes = n_new


@dataclass
class IsoData:
    """Everything the isomorphism search needs about one complex, computed once."""

    K: PureComplex
    mnfs: list[int]
    colors: dict[int, int]
    rounds: int
    key: tuple
    cooccurrence: dict[tuple[int, int], int]

    @classmethod
    def of(cls, K: PureComplex, mnfs: Sequence[int] | None = None) -> "IsoData":
        mnfs = list(minimal_nonfaces(K) if mnfs is None else mnfs)
        colors, rounds = vertex_colors(K, mnfs)
        seqs = color_sequences(K, mnfs)
        key = (fingerprint(K, mnfs), tuple(sorted(Counter(seqs.values()).items())), rounds,
               tuple(sorted(Counter(colors.values()).items())))
        return cls(K, mnfs, colors, rounds, key, _cooccurrence(K))


def invariant(K: PureComplex, mnfs: Sequence[int] | None = None) -> tuple:
    """An isomorphism invariant strong enough to bucket candidates."""
    return IsoData.of(K, mnfs).key


def _cooccurrence(K: PureComplex) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = defaultdict(int)
    for f in K.facets:
        vs = members(f)
        for a in vs:
            for b in vs:
                out[a, b] += 1
    return dict(out)


def find_isomorphism(K: PureComplex | IsoData, L: PureComplex | IsoData) -> dict[int, int] | None:
    """A vertex bijection carrying the facets of K onto those of L, or None.

    Fingerprints and color-sequence multisets are compared first; then a
    backtracking search maps vertices within refined color classes, checking
    pairwise facet co-occurrence counts and every completed facet.
    """
    dk = K if isinstance(K, IsoData) else IsoData.of(K)
    dl = L if isinstance(L, IsoData) else IsoData.of(L)
    if dk.key != dl.key:
        return None
    return _match(dk, dl)


def _match(dk: IsoData, dl: IsoData) -> dict[int, int] | None:
    K, L = dk.K, dl.K
    ck, cl = dk.colors, dl.colors
    by_color: dict[int, list[int]] = defaultdict(list)
    for w, c in cl.items():
        by_color[c].append(w)
    co_k, co_l = dk.cooccurrence, dl.cooccurrence
    lfacets = set(L.facets)

    # small color classes first, then vertices sharing facets with chosen ones
    size = Counter(ck.values())
    order: list[int] = []
    left = set(members(K.vertices))
    while left:
        best = min(left, key=lambda v: (-sum(co_k.get((v, u), 0) > 0 for u in order), size[ck[v]], v))
        order.append(best)
        left.remove(best)
    pos = {v: i for i, v in enumerate(order)}
    checks: list[list[int]] = [[] for _ in order]
    for f in K.facets:
        checks[max(pos[v] for v in members(f))].append(f)

    phi: dict[int, int] = {}
    used: set[int] = set()

    def image(f: int) -> int:
        g = 0
        for v in members(f):
            g |= 1 << phi[v]
        return g

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in by_color[ck[v]]:
            if w in used:
                continue
            if any(co_k.get((u, v), 0) != co_l.get((phi[u], w), 0) for u in order[:i]):
                continue
            phi[v] = w
            if all(image(f) in lfacets for f in checks[i]):
                used.add(w)
                if rec(i + 1):
                    return True
                used.discard(w)
            del phi[v]
        return False

    return dict(phi) if rec(0) else None


def are_isomorphic(K: PureComplex, L: PureComplex) -> dict[int, int] | None:
    return find_isomorphism(K, L)


def brute_force_isomorphic(K: PureComplex, L: PureComplex) -> bool:
    """Try every bijection between the vertex sets."""
    if K.n != L.n or len(K.facets) != len(L.facets) or K.num_vertices != L.num_vertices:
        return False
    vk, vl = members(K.vertices), members(L.vertices)
    target = set(L.facets)
    for perm in permutations(vl):
        mp = dict(zip(vk, perm))
        if all(sum(1 << mp[v] for v in members(f)) in target for f in K.facets):
            return True
    return False


class IsoClasses:
    """Incremental deduplication up to isomorphism, bucketed by :func:`invariant`."""

    def __init__(self) -> None:
        self.reps: list[PureComplex] = []
        self._data: list[IsoData] = []
        self._buckets: dict[tuple, list[int]] = defaultdict(list)

    def _lookup(self, d: IsoData) -> int | None:
        for idx in self._buckets.get(d.key, ()):
            if _match(self._data[idx], d) is not None:
                return idx
        return None

    def add(self, K: PureComplex, mnfs: Sequence[int] | None = None) -> int:
        """Index of K's class, creating a new class when needed."""
        d = IsoData.of(K, mnfs)
        idx = self._lookup(d)
        if idx is not None:
            return idx
        self.reps.append(K)
        self._data.append(d)
        self._buckets[d.key].append(len(self.reps) - 1)
        return len(self.reps) - 1

    def find(self, K: PureComplex) -> int | None:
        return self._lookup(IsoData.of(K))

    def __len__(self) -> int:
        return len(self.reps)


def dedupe(complexes: Iterable[PureComplex]) -> list[PureComplex]:
    """First representative of each isomorphism class, in input order."""
    classes = IsoClasses()
    for K in complexes:
        classes.add(K)
    return list(classes.reps)


# -- homology -------------------------------------------------------------------------

def betti_z2(K: PureComplex) -> list[int]:
    """Unreduced mod-2 Betti numbers b_0 .. b_{n-1}."""
    by_size: list[list[int]] = [[] for _ in range(K.n + 1)]
    for f in K.faces():
        by_size[card(f)].append(f)
    index = [{f: i for i, f in enumerate(sorted(fs))} for fs in by_size]
    ranks = [0] * (K.n + 2)  # ranks[k] = rank of boundary from size k to size k-1
    for k in range(2, K.n + 1):
        rows = []
        for f in by_size[k]:
            r = 0
            rest = f
            while rest:
                low = rest & -rest
                r |= 1 << index[k - 1][f ^ low]
                rest ^= low
            rows.append(r)
        ranks[k] = gf2_rank(rows)
    return [len(by_size[k + 1]) - ranks[k + 1] - ranks[k + 2] for k in range(K.n)]


def sphere_betti(n: int) -> list[int]:
    if n == 1:
        return [2]
    return [1] + [0] * (n - 2) + [1]


def is_homology_sphere_z2(K: PureComplex) -> bool:
    if not K.facets:
        return False
    return betti_z2(K) == sphere_betti(K.n)


def links_are_homology_spheres(K: PureComplex) -> bool:
    """Every face link, the empty face included, has the mod-2 homology of a sphere.

    Independent of any seed database; agrees with PL-sphereness in the small
    dimensions exercised by the tests.
    """
    if not is_homology_sphere_z2(K):
        return False
    for face in K.faces():
        if face == 0 or card(face) == K.n:
            continue
        if not is_homology_sphere_z2(link(K, face)):
            return False
    return True


# -- PL spheres -------------------------------------------------------------------------

def is_pl_sphere(K: PureComplex, db: "SeedDatabase") -> bool:
    """Mod-2 sphere homology plus: every vertex link reduces to a known seed.

    Raises :class:`~toricseeds.seeddb.MissingStratum` when the database lacks a
    stratum some link needs.
    """
    if not is_homology_sphere_z2(K):
        return False
    if K.n == 1:
        return True
    for v in members(K.vertices):
        S = reduce_to_seed(link(K, 1 << v))
        if not db.contains(S):
            return False
    return True
