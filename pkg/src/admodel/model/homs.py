"""Morphism spaces in the dihedral model.

A morphism with window K splits into independent blocks: one equivariant
chain map per stalk ``k <= K`` and a joint ``(f_inf, f_tail)`` block cut out
by the germ condition.  ``hom_space`` solves the blocks separately, which
keeps the linear systems small.  ``hom_complex`` is the graded version,
whose degree-0 cycles are exactly the morphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .. import dg
from ..dg import ChainMap, DGModule, MapSpace
from ..linalg import ZERO, MatrixSystem, rational
from .objects import DihedralMorphism, DihedralObject


@lru_cache(maxsize=4096)
def stalk_maps(a: DGModule, b: DGModule) -> MapSpace:
    """Equivariant degree-0 chain maps ``a → b`` (cached; modules are immutable)."""
    return MapSpace(a, b, equivariant=True)


class GermMaps:
    """Pairs ``(f_inf, f_tail)`` of chain maps with ``σ_b ∘ f_inf = f_tail ∘ σ_a``."""

    def __init__(self, a: DihedralObject, b: DihedralObject):
        self.source, self.target = a, b
        sys_ = MatrixSystem()
        ai, bi, at, bt = a.infinity, b.infinity, a.tail, b.tail
        for n in ai.support:
            if bi.dim(n):
                sys_.unknown(("inf", n), bi.dim(n), ai.dim(n))
        for n in at.support:
            if bt.dim(n):
                sys_.unknown(("tail", n), bt.dim(n), at.dim(n))
        for lab, x, y in (("inf", ai, bi), ("tail", at, bt)):
            degs = [n for n in x.support if y.dim(n)]
            for n in sorted(set(degs) | {n + 1 for n in degs}):
                terms = []
                if (lab, n) in sys_.blocks:
                    terms.append((y.diff(n), (lab, n), None, 1))
                if (lab, n - 1) in sys_.blocks:
                    terms.append((None, (lab, n - 1), x.diff(n), -1))
                if terms:
                    sys_.equation(terms, (y.dim(n - 1), x.dim(n)))
        for n in at.support:
            if ("tail", n) in sys_.blocks:
                sys_.equation([(bt.inv(n), ("tail", n), None, 1),
                               (None, ("tail", n), at.inv(n), -1)], (bt.dim(n), at.dim(n)))
        for n in ai.support:
            if not bt.dim(n):
                continue
            terms = []
            if ("inf", n) in sys_.blocks:
                terms.append((b.sigma[n], ("inf", n), None, 1))
            if ("tail", n) in sys_.blocks:
                terms.append((None, ("tail", n), a.sigma[n], -1))
            if terms:
                sys_.equation(terms, (bt.dim(n), ai.dim(n)))
        self._system = sys_
        self._free, vecs = sys_.kernel_sparse()
        self.basis: List[Tuple[ChainMap, ChainMap]] = []
        for v in vecs:
            blocks = sys_.unpack(v)
            self.basis.append(self._pair(blocks))

    def _pair(self, blocks) -> Tuple[ChainMap, ChainMap]:
        a, b = self.source, self.target
        fi = {n: m for (lab, n), m in blocks.items() if lab == "inf"}
        ft = {n: m for (lab, n), m in blocks.items() if lab == "tail"}
        return (ChainMap(a.infinity, b.infinity, fi, check=False),
                ChainMap(a.tail, b.tail, ft, check=False))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f_inf: ChainMap, f_tail: ChainMap) -> Tuple[Fraction, ...]:
        flat = {}
        for (lab, n), (r, c, off) in self._system.blocks.items():
            m = f_inf[n] if lab == "inf" else f_tail[n]
            for i, j, v in m.nonzero():
                flat[off + i * c + j] = v
        return tuple(flat.get(j, ZERO) for j in self._free)


@lru_cache(maxsize=1024)
def germ_maps(a: DihedralObject, b: DihedralObject) -> GermMaps:
    return GermMaps(a, b)


class HomSpace:
    """Degree-0 morphisms ``a → b`` of window ``K``.

    Coordinates are ordered stalk 1, ..., stalk K, then the germ block.
    """

    def __init__(self, a: DihedralObject, b: DihedralObject, window: Optional[int] = None):
        self.source, self.target = a, b
        self.window = max(a.window, b.window, window or 0)
        self.stalks = [stalk_maps(a.stalk(k), b.stalk(k)) for k in range(1, self.window + 1)]
        self.germ = germ_maps(a, b)
        self._basis = None

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.stalks) + self.germ.dim

    def block_dims(self) -> List[int]:
        return [s.dim for s in self.stalks] + [self.germ.dim]

    def _assemble(self, stalk_maps_: Sequence[ChainMap], f_inf: ChainMap,
                  f_tail: ChainMap) -> DihedralMorphism:
        return DihedralMorphism(self.source, self.target, f_inf, stalk_maps_, f_tail, check=False)

    @property
    def basis(self) -> List[DihedralMorphism]:
        if self._basis is None:
            zero = DihedralMorphism.zero(self.source, self.target, self.window)
            out = []
            for k, space in enumerate(self.stalks, 1):
                for f in space.basis:
                    comps = list(zero.stalks)
                    comps[k - 1] = f
                    out.append(self._assemble(comps, zero.infinity, zero.tail))
            for fi, ft in self.germ.basis:
                out.append(self._assemble(zero.stalks, fi, ft))
            self._basis = out
        return self._basis

    def coordinates(self, f: DihedralMorphism) -> Tuple[Fraction, ...]:
        out: List[Fraction] = []
        for k, space in enumerate(self.stalks, 1):
            out.extend(space.coordinates(f.stalk(k)))
        out.extend(self.germ.coordinates(f.infinity, f.tail))
        return tuple(out)

    def element(self, coeffs: Sequence) -> DihedralMorphism:
        coeffs = [rational(c) for c in coeffs]
        pos = 0
        stalks = []
        for k, space in enumerate(self.stalks, 1):
            stalks.append(space.element(coeffs[pos:pos + space.dim]))
            pos += space.dim
        fi = ChainMap.zero(self.source.infinity, self.target.infinity)
        ft = ChainMap.zero(self.source.tail, self.target.tail)
        for c, (bi, bt) in zip(coeffs[pos:], self.germ.basis):
            if c:
                fi, ft = fi + bi.scale(c), ft + bt.scale(c)
        return self._assemble(stalks, fi, ft)


def hom_space(a: DihedralObject, b: DihedralObject, window: Optional[int] = None) -> HomSpace:
    return HomSpace(a, b, window)


@dataclass(frozen=True)
class HomGrowth:
    """``dim hom_space(a, b, K) = base + increment * (K - start)`` for ``K >= start``."""
    start: int
    base: int
    increment: int

    def dim(self, window: int) -> int:
        if window < self.start:
            raise ValueError("growth law only holds from the stable window on")
        return self.base + self.increment * (window - self.start)

    def describe(self) -> str:
        if self.increment == 0:
            return str(self.base)
        const = self.base - self.increment * self.start
        lead = "K" if self.increment == 1 else f"{self.increment}K"
        if const == 0:
            return f"{lead} at window K"
        sign = "+" if const > 0 else "-"
        return f"{lead}{sign}{abs(const)} at window K"


def hom_growth(a: DihedralObject, b: DihedralObject) -> HomGrowth:
    start = max(a.window, b.window)
    return HomGrowth(start, HomSpace(a, b, start).dim, stalk_maps(a.tail, b.tail).dim)


# ---------------------------------------------------------------------------
# graded hom complexes

class NonRepresentableHom(ValueError):
    """The internal hom would leave the eventually-constant class."""


@dataclass
class GermBlock:
    """The pullback complex ``{(g, h) : σ_b g = h σ_a}`` with ``h`` W-fixed.

    ``to_inf`` and ``to_tail`` are the two projections, into
    ``hom(a_inf, b_inf)`` and ``hom(a_tail, b_tail)`` respectively.
    """
    module: DGModule
    to_inf: ChainMap
    to_tail: ChainMap


@lru_cache(maxsize=1024)
def germ_block(a: DihedralObject, b: DihedralObject) -> GermBlock:
    p = dg.hom_complex(a.infinity, b.infinity).forget_action()
    ht = dg.hom_complex(a.tail, b.tail)
    fix = dg.fixed_points_inclusion(ht)
    s = dg.direct_sum([p, fix.source], equivariant=False)
    mid = dg.hom_complex(a.infinity, b.tail).forget_action()
    post = dg.postcompose(b.sigma, a.infinity)
    pre = dg.precompose(a.sigma, b.tail)
    post = ChainMap(p, mid, post.comps, check=False)
    pre = ChainMap(ht, mid, pre.comps, check=False)
    phi = post @ s.projections[0] - pre @ fix @ s.projections[1]
    g, inc = dg.kernel_of(phi)
    g = g.forget_action()
    inc = ChainMap(g, s.module, inc.comps, check=False)
    return GermBlock(g, s.projections[0] @ inc, fix @ s.projections[1] @ inc)


def hom_complex(a: DihedralObject, b: DihedralObject, window: Optional[int] = None) -> DGModule:
    """Graded morphisms: ``⊕_{k<=K} hom(a_k, b_k)^W`` plus the germ block."""
    K = max(a.window, b.window, window or 0)
    parts = [dg.fixed_points(dg.hom_complex(a.stalk(k), b.stalk(k))) for k in range(1, K + 1)]
    parts.append(germ_block(a, b).module)
    return dg.direct_sum(parts, equivariant=False).module


def is_tail_reduced(b: DihedralObject) -> bool:
    """σ_b surjects onto the tail (its image is fixed, so this is the W-span condition)."""
    return all(b.sigma[n].rank() == b.tail.dim(n) for n in b.tail.support)


def hom_internal(b: DihedralObject, c: DihedralObject) -> DihedralObject:
    if not (b.tail.is_zero() or is_tail_reduced(b)):
        raise NonRepresentableHom(
            "internal hom needs a source whose tail is zero or spanned by the image of sigma")
    K = max(b.window, c.window)
    stalks = [dg.hom_complex(b.stalk(k), c.stalk(k)) for k in range(1, K + 1)]
    tail = dg.hom_complex(b.tail, c.tail)
    gb = germ_block(b, c)
    sigma = ChainMap(gb.module, tail, gb.to_tail.comps, check=False)
    return DihedralObject(stalks, tail, gb.module, sigma, check=False).normalize()
