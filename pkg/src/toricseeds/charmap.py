"""Characteristic maps, dual characteristic matrices and binary matroids.

Conventions: a complex passed here must be compact (vertices ``1..m``) and
column ``j`` of an ``n x m`` characteristic matrix is the image of vertex
``j + 1``.  A dual characteristic matrix (DCM) is stored as ``m`` row vectors
in ``Z_2^p`` packed into ints, bit ``i`` holding coordinate ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator, Sequence

import numpy as np

from .complex import PureComplex, full_set, members, vset
from .gf2 import gf2_rank, kernel_basis


class NoInjectiveMap(ValueError):
    """More vertices than nonzero vectors of Z_2^p."""


def _require_compact(K: PureComplex) -> None:
    if K.vertices != full_set(K.m):
        raise ValueError("complex must use exactly the labels 1..m; call compact() first")


# -- dual characteristic matrices -----------------------------------------------------

@dataclass(frozen=True)
class DualCharMatrix:
    rows: tuple[int, ...]
    p: int

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.m - self.p

    @property
    def injective(self) -> bool:
        return 0 not in self.rows and len(set(self.rows)) == len(self.rows)

    def rank(self) -> int:
        return gf2_rank(self.rows)

    def matrix(self) -> np.ndarray:
        """m x p 0/1 array."""
        return np.array([[r >> i & 1 for i in range(self.p)] for r in self.rows], dtype=np.int64)

    @classmethod
    def from_matrix(cls, mat) -> "DualCharMatrix":
        arr = np.asarray(mat, dtype=np.int64) % 2
        p = arr.shape[1]
        return cls(tuple(int(sum(int(x) << i for i, x in enumerate(row))) for row in arr), p)

    def supports(self, K: PureComplex) -> bool:
        """True when every cofacet of K maps to a basis of Z_2^p."""
        _require_compact(K)
        if K.m != self.m:
            return False
        allv = full_set(K.m)
        for f in K.facets:
            if gf2_rank([self.rows[v - 1] for v in members(allv & ~f)]) != self.p:
                return False
        return True

    def charmap(self) -> np.ndarray:
        """A Gale-dual mod-2 characteristic matrix (n x m)."""
        return gale_dual(self.matrix())


def matroid_from_dcm(D: DualCharMatrix) -> PureComplex:
    """Binary matroid of the Gale dual: facets are complements of independent p-sets of rows."""
    m, p = D.m, D.p
    allv = full_set(m)
    facets = []
    for co in combinations(range(1, m + 1), p):
        if gf2_rank([D.rows[v - 1] for v in co]) == p:
            facets.append(allv & ~vset(co))
    return PureComplex(m, m - p, tuple(facets), _embedded(facets, m))


def _embedded(facets: Sequence[int], m: int) -> bool:
    used = 0
    for f in facets:
        used |= f
    return used != full_set(m)


def _columns_as_ints(lam) -> tuple[list[int], int]:
    arr = np.asarray(lam, dtype=np.int64) % 2
    n, m = arr.shape
    cols = [int(sum(int(arr[i, j]) << i for i in range(n))) for j in range(m)]
    return cols, n


def binary_matroid(lam) -> PureComplex:
    """Facets are the n-sets of column indices (1-based) spanning Z_2^n."""
    cols, n = _columns_as_ints(lam)
    m = len(cols)
    if gf2_rank(cols) != n:
        raise ValueError("matrix is not of full row rank")
    facets = [vset(c) for c in combinations(range(1, m + 1), n)
              if gf2_rank([cols[v - 1] for v in c]) == n]
    return PureComplex(m, n, tuple(facets), _embedded(facets, m))


def dual_matroid(Mt: PureComplex) -> PureComplex:
    allv = full_set(Mt.m)
    facets = tuple(allv & ~f for f in Mt.facets)
    return PureComplex(Mt.m, Mt.m - Mt.n, facets, _embedded(facets, Mt.m))


def gale_dual(mat) -> np.ndarray:
    """For a full-rank r x m matrix over Z_2, an (m - r) x m matrix whose rows span its kernel."""
    arr = np.asarray(mat, dtype=np.int64) % 2
    if arr.shape[0] > arr.shape[1]:
        arr = arr.T  # accept an m x p DCM as well
    r, m = arr.shape
    rows = [int(sum(int(arr[i, j]) << j for j in range(m))) for i in range(r)]
    ker = kernel_basis(rows, width=m)
    return np.array([[v >> j & 1 for j in range(m)] for v in ker], dtype=np.int64)


# -- IDCM orbits ---------------------------------------------------------------------

def _permute_bits(x: int, perm: Sequence[int]) -> int:
    out = 0
    for i, t in enumerate(perm):
        if x >> i & 1:
            out |= 1 << t
    return out


def _row_key(x: int, p: int) -> tuple[int, ...]:
    return tuple(x >> i & 1 for i in range(p))


def canonical_rows(rows: Sequence[int], p: int) -> tuple[int, ...]:
    """Lexicographically least sorted row list under coordinate permutations."""
    best = None
    for perm in permutations(range(p)):
        cand = sorted((_permute_bits(r, perm) for r in rows), key=lambda x: _row_key(x, p))
        key = [_row_key(x, p) for x in cand]
        if best is None or key < best[0]:
            best = (key, tuple(cand))
    return best[1]


def idcm_orbits(n: int, p: int = 4) -> list[DualCharMatrix]:
    """One representative per orbit of injective DCMs ``[M; I_p]`` under S_n x S_p."""
    if n + p > 2 ** p - 1:
        raise NoInjectiveMap(f"m = {n + p} exceeds 2^{p} - 1 = {2 ** p - 1}")
    units = {1 << i for i in range(p)}
    pool = [x for x in range(1, 2 ** p) if x not in units]
    reps = set()
    for S in combinations(pool, n):
        reps.add(canonical_rows(S, p))
    ident = tuple(1 << i for i in range(p))
    out = [DualCharMatrix(r + ident, p) for r in reps]
    out.sort(key=lambda D: [_row_key(x, p) for x in D.rows[:n]])
    return out


def lambda_set(n: int, p: int = 4) -> Iterator[DualCharMatrix]:
    """Every element of the set of ``[M; I_p]`` with pairwise distinct nonzero rows."""
    units = {1 << i for i in range(p)}
    pool = [x for x in range(1, 2 ** p) if x not in units]
    ident = tuple(1 << i for i in range(p))
    for rows in permutations(pool, n):
        yield DualCharMatrix(tuple(rows) + ident, p)


def act(D: DualCharMatrix, s: Sequence[int], t: Sequence[int]) -> DualCharMatrix:
    """Apply (s, t): reorder the first n rows by ``s`` and permute coordinates by ``t``."""
    n = D.n
    M = [_permute_bits(D.rows[s[i]], t) for i in range(n)]
    return DualCharMatrix(tuple(M) + D.rows[n:], D.p)


# -- DCM existence -------------------------------------------------------------------

def supports_dcm(K: PureComplex, injective: bool = False) -> DualCharMatrix | None:
    """Find a DCM (optionally injective) supported by K, or None.

    The cofacet of the first facet is normalized to the identity, which loses
    no generality since GL(p, Z_2) preserves support.
    """
    _require_compact(K)
    m, n = K.m, K.n
    p = m - n
    if p < 1:
        return None
    if injective and m > 2 ** p - 1:
        return None
    allv = full_set(m)
    cofacets = [allv & ~f for f in K.facets]
    base = cofacets[0]
    rows: dict[int, int] = {v: 1 << i for i, v in enumerate(members(base))}
    free = members(K.facets[0])
    touch = {v: sum(1 for c in cofacets if c >> v & 1) for v in free}
    order = sorted(free, key=lambda v: (-touch[v], v))
    pos = {v: i for i, v in enumerate(order)}
    checks: list[list[list[int]]] = [[] for _ in order]
    for c in cofacets:
        vs = members(c)
        late = [pos[v] for v in vs if v in pos]
        if not late:
            continue
        checks[max(late)].append(vs)
    for c in cofacets:
        if not any(v in pos for v in members(c)):
            if gf2_rank([rows[v] for v in members(c)]) != p:
                return None
    used = set(rows.values())

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for val in range(1, 2 ** p):
            if injective and val in used:
                continue
            rows[v] = val
            if all(gf2_rank([rows[u] for u in vs]) == p for vs in checks[i]):
                used.add(val)
                if rec(i + 1):
                    return True
                used.discard(val)
        rows.pop(v, None)
        return False

    if not rec(0):
        return None
    return DualCharMatrix(tuple(rows[v] for v in range(1, m + 1)), p)


# -- mod 2 characteristic maps ---------------------------------------------------------

def _cols_to_matrix(cols: Sequence[int], n: int) -> np.ndarray:
    return np.array([[c >> i & 1 for c in cols] for i in range(n)], dtype=np.int64)


def iter_mod2_charmaps(K: PureComplex) -> Iterator[np.ndarray]:
    """Mod-2 characteristic maps normalized to the identity on the first facet."""
    _require_compact(K)
    m, n = K.m, K.n
    first = members(K.facets[0])
    cols: dict[int, int] = {v: 1 << i for i, v in enumerate(first)}
    order = [v for v in range(1, m + 1) if v not in cols]
    pos = {v: i for i, v in enumerate(order)}
    checks: list[list[list[int]]] = [[] for _ in order]
    for f in K.facets[1:]:
        vs = members(f)
        late = [pos[v] for v in vs if v in pos]
        if late:
            checks[max(late)].append(vs)

    def rec(i: int) -> Iterator[np.ndarray]:
        if i == len(order):
            yield _cols_to_matrix([cols[v] for v in range(1, m + 1)], n)
            return
        v = order[i]
        for val in range(1, 2 ** n):
            cols[v] = val
            if all(gf2_rank([cols[u] for u in vs]) == n for vs in checks[i]):
                yield from rec(i + 1)
        del cols[v]

    yield from rec(0)


def mod2_charmaps(K: PureComplex) -> list[np.ndarray]:
    return list(iter_mod2_charmaps(K))


def is_nonsingular_Z2(lam, K: PureComplex) -> bool:
    cols, n = _columns_as_ints(lam)
    if len(cols) != K.m:
        return False
    return all(gf2_rank([cols[v - 1] for v in members(f)]) == K.n for f in K.facets)


def det_int(mat) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    a = [[int(x) for x in row] for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_nonsingular_Z(lam, K: PureComplex) -> bool:
    arr = np.asarray(lam, dtype=np.int64)
    if arr.shape != (K.n, K.m):
        return False
    for f in K.facets:
        idx = [v - 1 for v in members(f)]
        if abs(det_int(arr[:, idx].tolist())) != 1:
            return False
    return True


def lift_to_integer(lamR, K: PureComplex) -> np.ndarray | None:
    """Flip 1-entries of a mod-2 map to -1 until every facet minor is unimodular.

    The identity columns of the first facet stay fixed.  In every other column
    the topmost 1 is always flipped, which loses nothing because negating a
    whole column keeps every determinant at +-1; the remaining 1s are tried
    flipped before unflipped.  Depth-first, column by column; returns the
    first success.
    """
    _require_compact(K)
    base = np.asarray(lamR, dtype=np.int64) % 2
    n, m = base.shape
    if (n, m) != (K.n, K.m):
        raise ValueError("matrix shape does not match the complex")
    fixed = set(members(K.facets[0]))
    order = [v for v in range(1, m + 1) if v not in fixed]
    pos = {v: i for i, v in enumerate(order)}
    checks: list[list[list[int]]] = [[] for _ in order]
    for f in K.facets:
        vs = members(f)
        late = [pos[v] for v in vs if v in pos]
        if late:
            checks[max(late)].append([v - 1 for v in vs])
        elif abs(det_int(base[:, [v - 1 for v in vs]].tolist())) != 1:
            return None
    lam = base.copy()

    def column_choices(v: int) -> list[np.ndarray]:
        col = base[:, v - 1]
        ones = np.flatnonzero(col)
        if not len(ones):
            return [col.copy()]
        out = []
        rest = ones[1:]
        for signs in range((1 << len(rest)) - 1, -1, -1):
            c = col.copy()
            c[ones[0]] = -1
            for k, r in enumerate(rest):
                if signs >> k & 1:
                    c[r] = -1
            out.append(c)
        return out

    choices = [column_choices(v) for v in order]

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for c in choices[i]:
            lam[:, v - 1] = c
            if all(abs(det_int(lam[:, idx].tolist())) == 1 for idx in checks[i]):
                if rec(i + 1):
                    return True
        lam[:, v - 1] = base[:, v - 1]
        return False

    return lam.copy() if rec(0) else None


def find_integer_charmap(K: PureComplex, limit: int | None = None) -> tuple[np.ndarray, np.ndarray] | None:
    """First (mod-2 map, integer lift) pair found, trying mod-2 maps in order."""
    for k, lamR in enumerate(iter_mod2_charmaps(K)):
        if limit is not None and k >= limit:
            break
        lam = lift_to_integer(lamR, K)
        if lam is not None:
            return lamR, lam
    return None


def charmap_from_dcm(D: DualCharMatrix, K: PureComplex) -> np.ndarray:
    """Mod-2 characteristic map Gale dual to ``D``, normalized on K's first facet."""
    _require_compact(K)
    lam = gale_dual(D.matrix())
    first = [v - 1 for v in members(K.facets[0])]
    sub = lam[:, first] % 2
    inv = _inverse_mod2(sub)
    return (inv @ lam) % 2


def _inverse_mod2(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    aug = np.concatenate([a % 2, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r, c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[[c, piv]] = aug[[piv, c]]
        for r in range(n):
            if r != c and aug[r, c]:
                aug[r] ^= aug[c]
    return aug[:, n:]


def universe_of(D: DualCharMatrix) -> list[int]:
    """Facet masks of the binary matroid supported by ``D``."""
    return list(matroid_from_dcm(D).facets)


def columns_of(lam) -> list[list[int]]:
    return np.asarray(lam, dtype=np.int64).T.tolist()


__all__ = [
    "DualCharMatrix", "NoInjectiveMap", "act", "binary_matroid", "canonical_rows",
    "charmap_from_dcm", "det_int", "dual_matroid", "find_integer_charmap", "gale_dual",
    "idcm_orbits", "is_nonsingular_Z", "is_nonsingular_Z2", "iter_mod2_charmaps",
    "lambda_set", "lift_to_integer", "matroid_from_dcm", "mod2_charmaps", "supports_dcm",
    "universe_of",
]
