"""Seeded random instances for property checks.

All generators take a :class:`random.Random` so a run is reproducible from
its seed.  Sizes are kept small: the point is to exercise identities, not
to stress the elimination engine.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional

from . import dg
from .dg import ChainMap, DGModule
from .linalg import QMatrix


def rational(rng: random.Random, spread: int = 3) -> Fraction:
    x = rng.randint(-spread, spread)
    if rng.random() < 0.15:
        return Fraction(x, rng.randint(1, 3))
    return Fraction(x)


def matrix(rng: random.Random, rows: int, cols: int, density: float = 0.6) -> QMatrix:
    return QMatrix([[rational(rng) if rng.random() < density else 0 for _ in range(cols)]
                    for _ in range(rows)], rows, cols)


def invertible(rng: random.Random, n: int) -> QMatrix:
    """Random invertible matrix as a product of unit triangular factors and a permutation."""
    lower = QMatrix([[1 if i == j else (rng.randint(-2, 2) if i > j else 0) for j in range(n)]
                     for i in range(n)], n, n)
    upper = QMatrix([[rng.choice([1, -1, 2]) if i == j else (rng.randint(-1, 1) if j > i else 0)
                      for j in range(n)] for i in range(n)], n, n)
    perm = list(range(n))
    rng.shuffle(perm)
    return QMatrix.permutation(perm) @ lower @ upper


def _cells(rng: random.Random, lo: int, hi: int, max_cells: int, equivariant: bool):
    """A list of (kind, degree, sign) summands: spheres and disks."""
    cells = []
    for _ in range(rng.randint(0, max_cells)):
        kind = rng.choice(["sphere", "sphere", "disk"]) if hi > lo else "sphere"
        n = rng.randint(lo + 1, hi) if kind == "disk" else rng.randint(lo, hi)
        sign = rng.choice([1, -1]) if equivariant else 1
        cells.append((kind, n, sign))
    return cells


def dgmodule(rng: random.Random, lo: int = 0, hi: int = 1, max_cells: int = 3,
             equivariant: bool = False, max_dim: Optional[int] = None,
             acyclic: bool = False) -> DGModule:
    """A random bounded complex: spheres and disks, then a random change of basis."""
    cells = _cells(rng, lo, hi, max_cells, equivariant)
    if acyclic:
        cells = [c for c in cells if c[0] == "disk"]
    if max_dim is not None:
        kept, used = [], {}
        for kind, n, s in cells:
            degs = [n] if kind == "sphere" else [n, n - 1]
            if all(used.get(m, 0) < max_dim for m in degs):
                kept.append((kind, n, s))
                for m in degs:
                    used[m] = used.get(m, 0) + 1
        cells = kept
    pieces = []
    for kind, n, sign in cells:
        w = QMatrix([[sign]])
        if kind == "sphere":
            pieces.append(DGModule({n: 1}, {}, {n: w} if equivariant else None, check=False))
        else:
            pieces.append(DGModule({n: 1, n - 1: 1}, {n: QMatrix.identity(1)},
                                   {n: w, n - 1: w} if equivariant else None, check=False))
    base = dg.direct_sum(pieces, equivariant=equivariant).module if pieces else \
        dg.zero_module(equivariant)
    change = {n: invertible(rng, base.dim(n)) for n in base.support}
    inv = {n: p.inverse() for n, p in change.items()}
    d = {n: change[n - 1] @ base.diff(n) @ inv[n] for n in base.support if base.dim(n - 1)}
    w = {n: change[n] @ base.inv(n) @ inv[n] for n in base.support} if equivariant else None
    return DGModule(base.dims, d, w)


def chain_map(rng: random.Random, a: DGModule, b: DGModule, zero_prob: float = 0.1) -> ChainMap:
    space = dg.MapSpace(a, b)
    return space.element([0 if rng.random() < zero_prob else rational(rng, 2)
                          for _ in space.basis])


def seeds(seed: int, count: int) -> List[int]:
    rng = random.Random(seed)
    return [rng.randrange(2 ** 31) for _ in range(count)]


def dihedral_object(rng: random.Random, max_window: int = 3, lo: int = 0, hi: int = 1,
                    max_cells: int = 2, max_dim: Optional[int] = None, acyclic: bool = False,
                    trivial_differential: bool = False):
    """Random eventually-constant object; sigma is a random map into the tail's fixed points."""
    from .model.objects import DihedralObject

    def mod(equiv):
        m = dgmodule(rng, lo, hi if not trivial_differential else lo, max_cells, equiv,
                     max_dim, acyclic)
        return m

    window = rng.randint(0, max_window)
    stalks = [mod(True) for _ in range(window)]
    tail = mod(True)
    inf = mod(False)
    inc = dg.fixed_points_inclusion(tail)
    space = dg.MapSpace(inf, inc.source, equivariant=False)
    g = space.element([rational(rng, 2) if rng.random() < 0.7 else 0 for _ in space.basis])
    sigma = ChainMap(inf, tail, (inc @ g).comps, check=False)
    return DihedralObject(stalks, tail, inf, sigma)


def morphism(rng: random.Random, a, b, window: Optional[int] = None, zero_prob: float = 0.2):
    from .model.homs import hom_space
    space = hom_space(a, b, window)
    return space.element([0 if rng.random() < zero_prob else rational(rng, 2)
                          for _ in range(space.dim)])
