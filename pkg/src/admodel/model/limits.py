"""Finite limits and colimits, computed componentwise.

Colimits are cokernels of ``⊕_edges V_src → ⊕_i V_i`` in every component;
the structure map of the colimit is induced from the sum of the sigmas.
Limits are kernels of ``⊕_i V_i → ⊕_edges V_tgt``.  At infinity the limit
is ``colim_N lim_i ⊞_N^W V_i``; past every window ⊞_N of a morphism is
block diagonal in split coordinates, so the colimit over N keeps only the
infinity summand and the componentwise kernel is the answer.
``limit_infinity_check`` runs that argument on explicit truncations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .. import dg
from ..dg import ChainMap, DGModule
from ..linalg import Subspace, image
from .boxplus import boxplus, boxplus_map, factor_through
from .objects import DihedralMorphism, DihedralObject


@dataclass
class Diagram:
    """Objects indexed ``0..n-1`` and arrows ``(i, j, f: V_i → V_j)``."""
    objects: List[DihedralObject]
    arrows: List[Tuple[int, int, DihedralMorphism]] = field(default_factory=list)

    def window(self) -> int:
        return max([v.window for v in self.objects] + [f.window for _, _, f in self.arrows] + [0])


def _labels(window: int):
    return list(range(1, window + 1)) + ["tail", "inf"]


def _comp(v: DihedralObject, label) -> DGModule:
    if label == "inf":
        return v.infinity
    return v.tail if label == "tail" else v.stalk(label)


def _on(f: ChainMap, s: DGModule, t: DGModule) -> ChainMap:
    return ChainMap(s, t, f.comps, check=False)


def _sum(mods: Sequence[DGModule], label) -> dg.DirectSum:
    return dg.direct_sum(list(mods), equivariant=(label != "inf"))


def _assemble(labels, mods: Dict, sigma: ChainMap) -> DihedralObject:
    w = max([l for l in labels if isinstance(l, int)], default=0)
    return DihedralObject([mods[k] for k in range(1, w + 1)], mods["tail"], mods["inf"],
                          _on(sigma, mods["inf"], mods["tail"]), check=False)


@dataclass
class Colimit:
    object: DihedralObject
    legs: List[DihedralMorphism]
    _cokernels: Dict
    _sums: Dict

    def factor(self, maps: Sequence[DihedralMorphism]) -> DihedralMorphism:
        """The map out of the colimit induced by a compatible cocone."""
        target = maps[0].target
        w = max([m.window for m in maps] + [self.object.window])
        comps = {}
        for label in _labels(w):
            key = label if label in self._cokernels else "tail"
            cok, s = self._cokernels[key], self._sums[key]
            t = _comp(target, label)
            g = ChainMap.zero(s.module, t)
            for p, f in zip(s.projections, maps):
                g = g + _on(f.component(label), p.target, t) @ p
            comps[label] = _on(cok.factor(g), _comp(self.object, label), t)
        return DihedralMorphism.from_components(self.object, target, comps, window=w,
                                                check=False)


def finite_colimit(d: Diagram) -> Colimit:
    w = d.window()
    labels = _labels(w)
    mods, coks, sums = {}, {}, {}
    for label in labels:
        s = _sum([_comp(v, label) for v in d.objects], label)
        r = _sum([_comp(d.objects[i], label) for i, _, _ in d.arrows], label)
        rel = ChainMap.zero(r.module, s.module)
        for e, (i, j, f) in enumerate(d.arrows):
            fi = _on(f.component(label), _comp(d.objects[i], label), _comp(d.objects[j], label))
            rel = rel + (s.injections[j] @ fi - s.injections[i]) @ r.projections[e]
        cok = dg.cokernel_of(rel)
        mods[label], coks[label], sums[label] = cok.module, cok, s
    sig_sum = ChainMap.zero(sums["inf"].module, sums["tail"].module)
    for k, v in enumerate(d.objects):
        sig_sum = sig_sum + sums["tail"].injections[k] @ _on(
            v.sigma, sums["inf"].projections[k].target, sums["tail"].injections[k].source) \
            @ sums["inf"].projections[k]
    sigma = coks["inf"].factor(coks["tail"].projection @ sig_sum)
    obj = _assemble(labels, mods, sigma)
    legs = []
    for k, v in enumerate(d.objects):
        comps = {label: coks[label].projection @ sums[label].injections[k] for label in labels}
        comps = {l: _on(f, _comp(v, l), _comp(obj, l)) for l, f in comps.items()}
        legs.append(DihedralMorphism.from_components(v, obj, comps, window=w, check=False))
    return Colimit(obj, legs, coks, sums)


@dataclass
class Limit:
    object: DihedralObject
    legs: List[DihedralMorphism]
    _incs: Dict
    _sums: Dict

    def factor(self, maps: Sequence[DihedralMorphism]) -> DihedralMorphism:
        """The map into the limit induced by a compatible cone."""
        source = maps[0].source
        w = max([m.window for m in maps] + [self.object.window])
        comps = {}
        for label in _labels(w):
            key = label if label in self._incs else "tail"
            inc, s = self._incs[key], self._sums[key]
            src = _comp(source, label)
            g = ChainMap.zero(src, s.module)
            for i, f in zip(s.injections, maps):
                g = g + i @ _on(f.component(label), src, i.source)
            comps[label] = _on(factor_through(inc, g), src, _comp(self.object, label))
        return DihedralMorphism.from_components(source, self.object, comps, window=w,
                                                check=False)


def finite_limit(d: Diagram) -> Limit:
    w = d.window()
    labels = _labels(w)
    mods, incs, sums = {}, {}, {}
    for label in labels:
        s = _sum([_comp(v, label) for v in d.objects], label)
        t = _sum([_comp(d.objects[j], label) for _, j, _ in d.arrows], label)
        rel = ChainMap.zero(s.module, t.module)
        for e, (i, j, f) in enumerate(d.arrows):
            fi = _on(f.component(label), _comp(d.objects[i], label), _comp(d.objects[j], label))
            rel = rel + t.injections[e] @ (fi @ s.projections[i] - s.projections[j])
        sub, inc = dg.kernel_of(rel)
        if label == "inf":
            sub = sub.forget_action()
            inc = _on(inc, sub, s.module)
        mods[label], incs[label], sums[label] = sub, inc, s
    sig_sum = ChainMap.zero(sums["inf"].module, sums["tail"].module)
    for k, v in enumerate(d.objects):
        sig_sum = sig_sum + sums["tail"].injections[k] @ _on(
            v.sigma, sums["inf"].projections[k].target, sums["tail"].injections[k].source) \
            @ sums["inf"].projections[k]
    sigma = factor_through(incs["tail"], sig_sum @ incs["inf"])
    obj = _assemble(labels, mods, sigma)
    legs = []
    for k, v in enumerate(d.objects):
        comps = {label: sums[label].projections[k] @ incs[label] for label in labels}
        comps = {l: _on(f, _comp(obj, l), _comp(v, l)) for l, f in comps.items()}
        legs.append(DihedralMorphism.from_components(obj, v, comps, window=w, check=False))
    return Limit(obj, legs, incs, sums)


# ---------------------------------------------------------------------------
# named shapes

def biproduct(objs: Sequence[DihedralObject]) -> Colimit:
    return finite_colimit(Diagram(list(objs)))


def product(objs: Sequence[DihedralObject]) -> Limit:
    return finite_limit(Diagram(list(objs)))


def pushout(f: DihedralMorphism, g: DihedralMorphism) -> Colimit:
    """Pushout of ``B ← A → C`` for ``f: A → B``, ``g: A → C``; legs are (A, B, C)."""
    return finite_colimit(Diagram([f.source, f.target, g.target], [(0, 1, f), (0, 2, g)]))


def pullback(f: DihedralMorphism, g: DihedralMorphism) -> Limit:
    """Pullback of ``A → C ← B`` for ``f: A → C``, ``g: B → C``; legs are (A, B, C)."""
    return finite_limit(Diagram([f.source, g.source, f.target], [(0, 2, f), (1, 2, g)]))


def cokernel(f: DihedralMorphism) -> Colimit:
    """Cokernel as the pushout of ``0 ← A → B``."""
    from .objects import zero_object
    z = zero_object()
    return pushout(f, DihedralMorphism.zero(f.source, z))


def kernel(f: DihedralMorphism) -> Limit:
    from .objects import zero_object
    z = zero_object()
    return pullback(f, DihedralMorphism.zero(z, f.target))


# ---------------------------------------------------------------------------
# the infinity part of limits through ⊞

def limit_infinity_check(d: Diagram, n: int, cutoff: int) -> bool:
    """Compute ``lim_i ⊞_N^W V_i`` at a cutoff and compare its germ part with ``lim V_inf``.

    The colimit over N forgets finitely supported families, so it is the image
    of the projection to ``⊕ V_inf``; this must equal the kernel computed
    componentwise.
    """
    boxes = [boxplus(n, v, cutoff, fixed=True) for v in d.objects]
    s = dg.direct_sum([b.module for b in boxes], equivariant=False)
    t = dg.direct_sum([boxes[j].module for _, j, _ in d.arrows], equivariant=False)
    rel = ChainMap.zero(s.module, t.module)
    for e, (i, j, f) in enumerate(d.arrows):
        fb = boxplus_map(n, f, cutoff, fixed=True)
        rel = rel + t.injections[e] @ (fb @ s.projections[i] - s.projections[j])
    lim, inc = dg.kernel_of(rel)
    inf_sum = dg.direct_sum([v.infinity for v in d.objects], equivariant=False)
    germ = ChainMap.zero(s.module, inf_sum.module)
    for k, b in enumerate(boxes):
        germ = germ + inf_sum.injections[k] @ b.projections[0] @ s.projections[k]
    via_boxes = {m: image((germ @ inc)[m]) for m in inf_sum.module.support}
    expected = finite_limit(d)._incs["inf"]
    direct = {m: image(expected[m]) if expected.source.dim(m) else
              Subspace.zero(inf_sum.module.dim(m)) for m in inf_sum.module.support}
    return via_boxes == direct


# ---------------------------------------------------------------------------
# sequential colimits

def _power(f: DihedralMorphism, r: int) -> DihedralMorphism:
    out = DihedralMorphism.identity(f.source).widen(f.window)
    for _ in range(r):
        out = f @ out
    return out


def _stable_exponent(v: DihedralObject) -> int:
    return 1 + max([m.total_dim for _, m in v.components()] + [0])


@dataclass
class FilteredChain:
    """``V_0 → V_1 → ... → V_m``, optionally followed by ``V_m → V_m → ...`` along ``loop``.

    Without a loop the colimit is ``V_m``.  With one it is the eventual image
    of the loop: ``V_m / ker(g^r)`` for ``r`` past every component dimension.
    """
    objects: List[DihedralObject]
    maps: List[DihedralMorphism]
    loop: Optional[DihedralMorphism] = None

    def window(self) -> int:
        ws = [v.window for v in self.objects] + [f.window for f in self.maps]
        if self.loop is not None:
            ws.append(self.loop.window)
        return max(ws + [0])


def filtered_colimit(chain: FilteredChain) -> Colimit:
    last = chain.objects[-1]
    w = chain.window()
    to_last = [DihedralMorphism.identity(last).widen(w)]
    for f in reversed(chain.maps):
        to_last.insert(0, to_last[0] @ f)
    if chain.loop is None:
        q = DihedralMorphism.identity(last).widen(w)
        obj = last
    else:
        gr = _power(chain.loop, _stable_exponent(last))
        lim = kernel(gr)
        c = cokernel(lim.legs[0])
        obj = c.object
        q = c.legs[1]
    legs = [q @ t for t in to_last]
    return Colimit(obj, legs, {}, {})


def _dg_eventual_quotient(g: ChainMap, r: int) -> dg.Cokernel:
    p = ChainMap.identity(g.source)
    for _ in range(r):
        p = g @ p
    sub, inc = dg.kernel_of(p)
    return dg.cokernel_of(inc)


@dataclass
class CanonicalMapReport:
    start: int
    cutoff: int
    lhs_dims: Dict[int, int]
    rhs_dims: Dict[int, int]
    is_iso: bool
    inverse_checked: bool

    @property
    def ok(self) -> bool:
        return self.is_iso and self.inverse_checked and self.lhs_dims == self.rhs_dims


def canonical_map_check(chain: FilteredChain, n: int, cutoff: Optional[int] = None
                        ) -> CanonicalMapReport:
    """Compare ``colim_i ⊞_N V_i`` with ``⊞_N colim_i V_i`` at a cutoff.

    The left side is computed from the truncated chain of dg-modules (its own
    eventual-image quotient); the right side from the colimit object.  The
    canonical map is induced by the leg out of the last object.
    """
    col = filtered_colimit(chain)
    last = chain.objects[-1]
    K = max(cutoff or 0, n, chain.window(), col.object.window)
    rhs = boxplus(n, col.object, K)
    leg = boxplus_map(n, col.legs[-1], K)
    if chain.loop is None:
        lhs_mod = boxplus(n, last, K).module
        canon = leg
    else:
        gb = boxplus_map(n, chain.loop, K)
        cok = _dg_eventual_quotient(gb, 1 + gb.source.total_dim)
        lhs_mod = cok.module
        canon = cok.factor(leg)
    iso = canon.is_iso()
    inverse_ok = False
    if iso:
        inv = canon.inverse()
        inverse_ok = ((inv @ canon) == ChainMap.identity(lhs_mod)
                      and (canon @ inv) == ChainMap.identity(rhs.module))
    return CanonicalMapReport(n, K, dg.homology(lhs_mod).dims, dg.homology(rhs.module).dims,
                              iso, inverse_ok)
