"""Persistent store of classified seeds, keyed by (n, Picard number).

On disk: one ``seeds_p{P}_n{N}.cplx`` file per stratum plus ``index.json``
listing the strata known to be complete and their sizes.  A stratum that is
not marked complete cannot be used to decide PL-sphereness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .classify import IsoClasses
from .complex import PureComplex, cross_polytope, cyclic_polytope, polygon, sphere0, suspension
from .formats import read_complexes, write_complexes

INDEX = "index.json"
# Bootstrap strata for Picard number <= 3 are declared complete up to this n.
BOOTSTRAP_MAX_N = 16


class MissingStratum(LookupError):
    def __init__(self, n: int, p: int) -> None:
        super().__init__(f"seed database has no complete stratum for n={n}, Picard number {p}")
        self.n = n
        self.p = p


def _key(n: int, p: int) -> str:
    return f"{n},{p}"


@dataclass
class SeedDatabase:
    strata: dict[tuple[int, int], list[PureComplex]] = field(default_factory=dict)
    _classes: dict[tuple[int, int], IsoClasses] = field(default_factory=dict, repr=False)

    # -- construction

    @classmethod
    def bootstrap(cls) -> "SeedDatabase":
        """Colorable seeds of Picard number <= 3, other low strata empty."""
        db = cls()
        known = {
            (1, 1): [sphere0()],
            (2, 2): [polygon(4)],
            (2, 3): [polygon(5)],
            (3, 3): [cross_polytope(3)],
            (4, 3): [cyclic_polytope(4, 7)],
        }
        for p in (1, 2, 3):
            for n in range(1, BOOTSTRAP_MAX_N + 1):
                db.set_stratum(n, p, known.get((n, p), []))
        # no Picard-4 seed of dimension 0 (five points are not a sphere)
        db.set_stratum(1, 4, [])
        return db

    def set_stratum(self, n: int, p: int, seeds: Iterable[PureComplex]) -> None:
        seeds = [K.compact() for K in seeds]
        classes = IsoClasses()
        for K in seeds:
            if K.n != n or K.num_vertices - K.n != p:
                raise ValueError(f"complex with n={K.n}, Picard {K.num_vertices - K.n} in stratum ({n},{p})")
            if classes.find(K) is not None:
                raise ValueError("stratum entries must be pairwise non-isomorphic")
            classes.add(K)
        self.strata[(n, p)] = seeds
        self._classes[(n, p)] = classes

    # -- queries

    def has(self, n: int, p: int) -> bool:
        return (n, p) in self.strata

    def seeds(self, n: int, p: int) -> list[PureComplex]:
        if (n, p) not in self.strata:
            raise MissingStratum(n, p)
        return list(self.strata[(n, p)])

    def contains(self, K: PureComplex) -> bool:
        """Whether K is isomorphic to a stored seed of its own stratum."""
        n, p = K.n, K.num_vertices - K.n
        if (n, p) not in self.strata:
            raise MissingStratum(n, p)
        return self._classes[(n, p)].find(K) is not None

    def counts(self) -> dict[tuple[int, int], int]:
        return {k: len(v) for k, v in sorted(self.strata.items())}

    # -- persistence

    def save(self, directory: str | Path) -> None:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        index = {}
        for (n, p), seeds in sorted(self.strata.items()):
            name = f"seeds_p{p}_n{n}.cplx"
            write_complexes(d / name, seeds, comment=f"seeds with n={n}, Picard number {p}")
            index[_key(n, p)] = {"file": name, "count": len(seeds)}
        (d / INDEX).write_text(json.dumps({"strata": index}, indent=2, sort_keys=True) + "\n",
                               encoding="utf-8")

    @classmethod
    def load(cls, directory: str | Path) -> "SeedDatabase":
        d = Path(directory)
        data = json.loads((d / INDEX).read_text(encoding="utf-8"))
        db = cls()
        for key, entry in data["strata"].items():
            n, p = (int(t) for t in key.split(","))
            seeds = read_complexes(d / entry["file"])
            if len(seeds) != entry["count"]:
                raise ValueError(f"{entry['file']}: index says {entry['count']} seeds, file has {len(seeds)}")
            db.set_stratum(n, p, seeds)
        return db

    @classmethod
    def open(cls, directory: str | Path | None) -> "SeedDatabase":
        """Load ``directory`` if it holds an index, otherwise bootstrap."""
        if directory is not None and (Path(directory) / INDEX).exists():
            return cls.load(directory)
        return cls.bootstrap()


def suspension_completions(db: SeedDatabase, n: int) -> list[PureComplex]:
    """Suspensions of Picard-3 seeds of dimension n - 2 with a DCM but no injective one."""
    from .charmap import supports_dcm

    out = []
    for S in db.seeds(n - 1, 3):
        T = suspension(S).compact()
        if supports_dcm(T) is not None and supports_dcm(T, injective=True) is None:
            out.append(T)
    return out
