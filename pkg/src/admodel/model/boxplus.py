"""The global-sections construction ⊞_N, truncated at a cutoff.

Elements of ⊞_N V are pairs ``(v, (x_k)_{k>=N})`` whose germ is ``σ(v)``.
Subtracting the section ``s(v)_k = σ(v)`` for ``k`` past the window (and 0
inside it) leaves a finitely supported family, so

    ⊞_N V ≅ V_inf ⊕ ⊕_{k>=N} V_k.

``BoxPlus`` stores this split form with stalks ``N..K``.  ``raw_to_split``
is the isomorphism from the raw coordinates ``(v, x_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

from .. import dg
from ..dg import ChainMap, DGModule
from ..linalg import solve_many
from .objects import DihedralMorphism, DihedralObject


@dataclass
class BoxPlus:
    start: int
    cutoff: int
    infinity_part: DGModule
    window_parts: List[DGModule]
    tail_marker: DGModule
    module: DGModule
    injections: List[ChainMap]
    projections: List[ChainMap]
    section: ChainMap
    raw_to_split: ChainMap
    split_to_raw: ChainMap
    fixed: bool = False

    def position(self, k: int) -> int:
        """Summand index of stalk ``k`` (0 is the infinity part)."""
        return k - self.start + 1


def factor_through(inc: ChainMap, g: ChainMap) -> ChainMap:
    """The unique ``h`` with ``inc ∘ h = g`` for an injective ``inc``."""
    comps = {}
    for d in g.source.support:
        if not inc.source.dim(d):
            continue
        x = solve_many(inc[d], g[d])
        if x is None:
            raise ValueError("map does not factor through the injection")
        comps[d] = x
    return ChainMap(g.source, inc.source, comps, check=False)


def _on(f: ChainMap, source: DGModule, target: DGModule) -> ChainMap:
    return ChainMap(source, target, f.comps, check=False)


def boxplus(n: int, v: DihedralObject, cutoff: int, fixed: bool = False) -> BoxPlus:
    """Split truncation of ``⊞_N V`` (or of its W-fixed points) at stalk ``cutoff``."""
    if n < 1:
        raise ValueError("⊞_N needs N >= 1")
    if cutoff < max(n, v.window):
        raise ValueError("cutoff must be at least max(N, window)")
    ks = range(n, cutoff + 1)
    parts = [v.stalk(k) for k in ks]
    sections = {}
    if fixed:
        incs = [dg.fixed_points_inclusion(p) for p in parts]
        for k, inc in zip(ks, incs):
            if k > v.window:
                sections[k] = factor_through(inc, v.sigma)
        parts = [i.source for i in incs]
        s = dg.direct_sum([v.infinity] + parts, equivariant=False)
    else:
        for k in ks:
            if k > v.window:
                sections[k] = v.sigma
        s = dg.direct_sum([v.infinity.with_trivial_action()] + parts, equivariant=True)
    mod = s.module
    inj = [_on(x, p, mod) for x, p in zip(s.injections, [v.infinity] + parts)]
    proj = [_on(x, mod, p) for x, p in zip(s.projections, [v.infinity] + parts)]
    sec = inj[0]
    shear = ChainMap.zero(mod, mod)
    for k, sig in sections.items():
        piece = inj[k - n + 1] @ _on(sig, v.infinity, parts[k - n])
        sec = sec + piece
        shear = shear + piece @ proj[0]
    ident = ChainMap.identity(mod)
    return BoxPlus(n, cutoff, v.infinity, parts, v.tail, mod, inj, proj, sec, ident - shear,
                   ident + shear, fixed)


def boxplus_fixed(n: int, v: DihedralObject, cutoff: int) -> BoxPlus:
    return boxplus(n, v, cutoff, fixed=True)


def boxplus_map(n: int, f: DihedralMorphism, cutoff: int, fixed: bool = False) -> ChainMap:
    """``⊞_N f`` in split coordinates of source and target."""
    a = boxplus(n, f.source, cutoff, fixed)
    b = boxplus(n, f.target, cutoff, fixed)
    out = b.injections[0] @ f.infinity @ a.projections[0]
    for k in range(n, cutoff + 1):
        i = k - n + 1
        fk = f.stalk(k)
        if fixed:
            fk = factor_through(_fixinc(f.target.stalk(k)), fk @ _fixinc(f.source.stalk(k)))
        out = out + b.injections[i] @ _on(fk, a.window_parts[i - 1], b.window_parts[i - 1]) \
            @ a.projections[i]
    # the raw map is diagonal; conjugate by the shears
    return b.raw_to_split @ out @ a.split_to_raw


def _fixinc(m: DGModule) -> ChainMap:
    return dg.fixed_points_inclusion(m)


@dataclass
class SplitReport:
    start: int
    cutoff: int
    is_iso: bool
    additive: bool

    @property
    def ok(self) -> bool:
        return self.is_iso and self.additive


def split_check(v: DihedralObject, n: int, cutoff: int) -> SplitReport:
    """``⊞_1 V ≅ ⊞_N V ⊕ ⊕_{k<N} V_k`` and additivity of homology, at a cutoff.

    The iso is the raw restriction ``(v, x_1, ..., x_K) ↦ ((v, x_N, ..., x_K), (x_1, ..., x_{N-1}))``
    transported to split coordinates on both sides.
    """
    one = boxplus(1, v, cutoff)
    big = boxplus(n, v, cutoff)
    low = [v.stalk(k) for k in range(1, n)]
    rhs = dg.direct_sum([big.module] + low, equivariant=True)
    # raw-coordinate restriction, assembled summand by summand
    total = ChainMap.zero(one.module, rhs.module)
    total = total + rhs.injections[0] @ big.injections[0] @ one.projections[0]
    for k in range(n, cutoff + 1):
        total = total + rhs.injections[0] @ big.injections[k - n + 1] @ one.projections[k]
    for k in range(1, n):
        total = total + rhs.injections[k] @ _on(one.projections[k], one.module, low[k - 1])
    shear = ChainMap(rhs.module, rhs.module,
                     (rhs.injections[0] @ big.raw_to_split @ rhs.projections[0]).comps,
                     check=False)
    for k in range(1, n):
        shear = shear + rhs.injections[k] @ rhs.projections[k]
    f = shear @ total @ one.split_to_raw
    f.validate()
    h = dg.homology
    expected = dict(h(v.infinity).dims)
    for k in range(n, cutoff + 1):
        for d, c in h(v.stalk(k)).dims.items():
            expected[d] = expected.get(d, 0) + c
    lhs = h(one.module).dims
    rhs_dims = dict(expected)
    for m in low:
        for d, c in h(m).dims.items():
            rhs_dims[d] = rhs_dims.get(d, 0) + c
    additive = h(big.module).dims == expected and lhs == rhs_dims
    return SplitReport(n, cutoff, f.is_iso(), additive)
