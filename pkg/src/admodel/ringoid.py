"""Finite dg-categories, their right modules, and the ringoid of generators.

Composition is stored as chain maps ``hom(y, z) ⊗ hom(x, y) → hom(x, z)``
so that the Leibniz rule is the statement that these are chain maps.
``extract_Ea`` reads the full subcategory on ``cQ`` and the ``i_k QW^{⊗i}``
off the dihedral model.  ``hom(cQ, cQ)`` is infinite dimensional; it is
cut at a stated window, which is a subring, so composition stays exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import dg
from .dg import ChainMap, DGModule
from .homotopy import GeneratorExpression, catalog, generator_list, isomorphism
from .linalg import ZERO, QMatrix, Subspace, kernel, rational
from .model import homs, limits, monoidal
from .model.boxplus import factor_through
from .model.homs import HomGrowth, HomSpace
from .model.objects import DihedralMorphism, DihedralObject

Triple = Tuple[str, str, str]


class DGCategory:
    """Objects, hom complexes, composition chain maps and identity elements.

    ``units[x]`` is the identity of ``x`` as a degree-0 vector of ``hom(x, x)``.
    """

    def __init__(self, objects: Sequence[str], homs_: Dict[Tuple[str, str], DGModule],
                 composition: Dict[Triple, ChainMap], units: Dict[str, Tuple],
                 growth: Optional[Dict[Tuple[str, str], HomGrowth]] = None,
                 cutoff: Optional[int] = None):
        self.objects = tuple(objects)
        self.homs = homs_
        self.composition = composition
        self.units = units
        self.growth = growth or {}
        self.cutoff = cutoff
        # filled in by extract_Ea: realizations in the dihedral model
        self.realization: Dict[str, DihedralObject] = {}
        self.hom_spaces: Dict[Tuple[str, str], HomSpace] = {}
        self.tensor_table: Dict[Tuple[str, str], str] = {}
        self.off_degree: List[Tuple[str, str]] = []

    def hom(self, x: str, y: str) -> DGModule:
        return self.homs[(x, y)]

    def compose(self, x: str, y: str, z: str, g: Sequence, p: int, f: Sequence, q: int
                ) -> Tuple:
        """``g ∘ f`` for ``g ∈ hom(y, z)_p`` and ``f ∈ hom(x, y)_q``."""
        a, b = self.hom(y, z), self.hom(x, y)
        c = self.composition[(x, y, z)]
        v = _tensor_vector(a, b, p, g, q, f)
        if not v:
            return tuple(ZERO for _ in range(self.hom(x, z).dim(p + q)))
        return c[p + q] @ v

    def unit_map(self, x: str) -> ChainMap:
        """The identity of ``x`` as a chain map ``S^0 → hom(x, x)``."""
        h = self.hom(x, x)
        col = QMatrix.from_columns([self.units[x]], h.dim(0))
        return ChainMap(dg.sphere(0), h, {0: col}, check=False)

    def degrees(self) -> Dict[Tuple[str, str], Tuple[int, ...]]:
        return {k: m.support for k, m in self.homs.items() if not m.is_zero()}

    def is_concentrated_in_degree_zero(self) -> bool:
        return all(set(m.support) <= {0} for m in self.homs.values())

    # -- axioms -----------------------------------------------------------
    def check_chain_maps(self) -> bool:
        try:
            for c in self.composition.values():
                c.validate()
        except dg.ValidationError:
            return False
        return True

    def check_unitality(self) -> bool:
        for (x, y) in self.homs:
            h = self.hom(x, y)
            for n in h.support:
                for j in range(h.dim(n)):
                    f = _basis_vector(h.dim(n), j)
                    if self.compose(x, y, y, self.units[y], 0, f, n) != f:
                        return False
                    if self.compose(x, x, y, f, n, self.units[x], 0) != f:
                        return False
        return True

    def check_associativity(self, rng: Optional[random.Random] = None,
                            samples: Optional[int] = None) -> bool:
        """Exhaustive on basis elements, or ``samples`` random homogeneous triples."""
        quads = [(w, x, y, z) for w in self.objects for x in self.objects
                 for y in self.objects for z in self.objects
                 if not (self.hom(w, x).is_zero() or self.hom(x, y).is_zero()
                         or self.hom(y, z).is_zero())]
        if samples is None:
            for w, x, y, z in quads:
                for p, q, r in _degree_triples(self.hom(y, z), self.hom(x, y), self.hom(w, x)):
                    for h in _basis(self.hom(y, z).dim(p)):
                        for g in _basis(self.hom(x, y).dim(q)):
                            hg = self.compose(x, y, z, h, p, g, q)
                            for f in _basis(self.hom(w, x).dim(r)):
                                if not self._assoc_one(w, x, y, z, h, p, g, q, f, r, hg):
                                    return False
            return True
        rng = rng or random.Random(0)
        for _ in range(samples):
            if not quads:
                return True
            w, x, y, z = rng.choice(quads)
            ds = _degree_triples(self.hom(y, z), self.hom(x, y), self.hom(w, x))
            if not ds:
                continue
            p, q, r = rng.choice(ds)
            h = _random_vector(rng, self.hom(y, z).dim(p))
            g = _random_vector(rng, self.hom(x, y).dim(q))
            f = _random_vector(rng, self.hom(w, x).dim(r))
            if not self._assoc_one(w, x, y, z, h, p, g, q, f, r,
                                   self.compose(x, y, z, h, p, g, q)):
                return False
        return True

    def _assoc_one(self, w, x, y, z, h, p, g, q, f, r, hg) -> bool:
        left = self.compose(w, x, z, hg, p + q, f, r)
        gf = self.compose(w, x, y, g, q, f, r)
        right = self.compose(w, y, z, h, p, gf, q + r)
        # moving f past nothing: the composite order is fixed, so no Koszul sign
        return tuple(left) == tuple(right)

    def validate(self, rng: Optional[random.Random] = None, samples: Optional[int] = None
                 ) -> bool:
        return (self.check_chain_maps() and self.check_unitality()
                and self.check_associativity(rng, samples))


def _basis_vector(n: int, j: int) -> Tuple:
    return tuple(rational(1) if i == j else ZERO for i in range(n))


def _basis(n: int) -> Iterable[Tuple]:
    return (_basis_vector(n, j) for j in range(n))


def _random_vector(rng: random.Random, n: int) -> Tuple:
    return tuple(rational(rng.randint(-3, 3)) for _ in range(n))


def _degree_triples(a: DGModule, b: DGModule, c: DGModule):
    return [(p, q, r) for p in a.support for q in b.support for r in c.support]


def _tensor_vector(a: DGModule, b: DGModule, p: int, x: Sequence, q: int, y: Sequence) -> Tuple:
    """The vector ``x ⊗ y`` in ``(a ⊗ b)_{p+q}``; empty if that degree vanishes."""
    t = dg.tensor(a, b)
    n = t.dim(p + q)
    if not n:
        return ()
    lay = dg._tensor_layout(a, b)
    out = [ZERO] * n
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                if yj:
                    out[dg.tensor_index(a, b, lay, p, i, q, j)] += xi * yj
    return tuple(out)


def _bilinear_map(a: DGModule, b: DGModule, c: DGModule,
                  rule: Callable[[int, int, int, int], Tuple]) -> ChainMap:
    """Chain map ``a ⊗ b → c`` from the images ``rule(p, i, q, j)`` of basis tensors."""
    t = dg.tensor(a, b)
    lay = dg._tensor_layout(a, b)
    comps = {}
    for n, blocks in lay.items():
        if not c.dim(n):
            continue
        cols = [None] * t.dim(n)
        for p in blocks:
            q = n - p
            for i in range(a.dim(p)):
                for j in range(b.dim(q)):
                    cols[dg.tensor_index(a, b, lay, p, i, q, j)] = rule(p, i, q, j)
        comps[n] = QMatrix.from_columns(cols, c.dim(n))
    return ChainMap(t, c, comps, check=False)


# ---------------------------------------------------------------------------
# small categories built from structure constants

def one_object(module: DGModule, product: Callable[[int, int, int, int], Tuple],
               unit: Tuple, name: str = "*") -> DGCategory:
    """A dg algebra as a one-object category; ``product(p, i, q, j)`` is ``e_{p,i} e_{q,j}``."""
    comp = _bilinear_map(module, module, module, product)
    return DGCategory([name], {(name, name): module}, {(name, name, name): comp},
                      {name: tuple(unit)})


def _square_zero_algebra(dims: Dict[int, int], d: Dict[int, QMatrix]) -> DGCategory:
    """``Q·1 ⊕ I`` with ``I`` an ideal of square zero; degree-0 vector 0 is the unit."""
    m = DGModule(dims, d)

    def product(p, i, q, j):
        out = [ZERO] * m.dim(p + q)
        if p == 0 and i == 0:
            out[j] = rational(1)
        elif q == 0 and j == 0:
            out[i] = rational(1)
        return tuple(out)

    return one_object(m, product, _basis_vector(m.dim(0), 0))


def synthetic_h1() -> DGCategory:
    """``Q[ε]/ε²`` with ``|ε| = 1`` and zero differential: a homology class in degree 1."""
    return _square_zero_algebra({0: 1, 1: 1}, {})


def synthetic_negative() -> DGCategory:
    """``Q[δ]/δ²`` with ``|δ| = -1``: homology in a negative degree."""
    return _square_zero_algebra({0: 1, -1: 1}, {})


def synthetic_acyclic_summand() -> DGCategory:
    """``Q·1 ⊕ (a, b)`` with ``|a| = 1``, ``da = b``, square-zero ideal; homology ``Q``."""
    d1 = QMatrix([[0], [1]])          # degree 1 → degree 0 (unit, b)
    return _square_zero_algebra({0: 2, 1: 1}, {1: d1})


# ---------------------------------------------------------------------------
# extraction from the dihedral model

def extract_Ea(imax: int, kmax: int, cutoff: Optional[int] = None) -> DGCategory:
    """The full subcategory on ``cQ`` and ``i_k QW^{⊗i}``, homs read at window ``cutoff``."""
    if imax < 1 or kmax < 1:
        raise ValueError("imax and kmax must be at least 1")
    K = max(cutoff or 0, kmax)
    gens = generator_list(imax, kmax)
    names = [g.name for g in gens]
    objs = {g.name: catalog(g) for g in gens}
    spaces: Dict[Tuple[str, str], HomSpace] = {}
    homs_: Dict[Tuple[str, str], DGModule] = {}
    growth: Dict[Tuple[str, str], HomGrowth] = {}
    off: List[Tuple[str, str]] = []
    for x in names:
        for y in names:
            sp = HomSpace(objs[x], objs[y], K)
            hc = homs.hom_complex(objs[x], objs[y], K)
            if not (set(hc.support) <= {0} and hc.has_zero_differential()
                    and hc.dim(0) == sp.dim):
                off.append((x, y))
            spaces[(x, y)] = sp
            homs_[(x, y)] = dg.concentrated(0, sp.dim)
            g = homs.hom_growth(objs[x], objs[y])
            if g.increment:
                growth[(x, y)] = g
    basis = {k: sp.basis for k, sp in spaces.items()}
    comp: Dict[Triple, ChainMap] = {}
    for x in names:
        for y in names:
            for z in names:
                a, b, c = homs_[(y, z)], homs_[(x, y)], homs_[(x, z)]
                if a.is_zero() or b.is_zero() or c.is_zero():
                    comp[(x, y, z)] = ChainMap.zero(dg.tensor(a, b), c)
                    continue
                target = spaces[(x, z)]
                cols = [target.coordinates(g @ f) for g in basis[(y, z)] for f in basis[(x, y)]]
                comp[(x, y, z)] = ChainMap(dg.tensor(a, b), c,
                                           {0: QMatrix.from_columns(cols, c.dim(0))}, check=False)
    units = {x: spaces[(x, x)].coordinates(DihedralMorphism.identity(objs[x]).widen(K))
             for x in names}
    e = DGCategory(names, homs_, comp, units, growth, K)
    e.realization = objs
    e.hom_spaces = spaces
    e.off_degree = off
    e.tensor_table = _tensor_table(gens, imax)
    return e


def _tensor_table(gens: Sequence[GeneratorExpression], imax: int) -> Dict[Tuple[str, str], str]:
    out = {}
    for x in gens:
        for y in gens:
            if x.kind == "unit":
                out[(x.name, y.name)] = y.name
            elif y.kind == "unit":
                out[(x.name, y.name)] = x.name
            elif x.k != y.k:
                out[(x.name, y.name)] = "0"
            elif x.i + y.i > imax:
                out[(x.name, y.name)] = "beyond cutoff"
            else:
                out[(x.name, y.name)] = GeneratorExpression.stalk_power(x.k, x.i + y.i).name
    return out


def check_tensor_table(e: DGCategory) -> bool:
    """Every closed entry of the product table is realised by the model's tensor product."""
    for (x, y), z in e.tensor_table.items():
        if z == "beyond cutoff":
            continue
        t = monoidal.tensor(e.realization[x], e.realization[y])
        if z == "0":
            if not t.normalize().is_zero():
                return False
        elif isomorphism(t, e.realization[z]) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# homology and the connective cover

@dataclass
class DGFunctor:
    """Identity on objects (the only case needed); hom-wise chain maps."""
    source: DGCategory
    target: DGCategory
    maps: Dict[Tuple[str, str], ChainMap]

    def preserves_units(self) -> bool:
        for x in self.source.objects:
            u = self.maps[(x, x)] @ self.source.unit_map(x)
            if u[0].column(0) != tuple(self.target.units[x]) and \
                    self.target.hom(x, x).dim(0):
                return False
        return True

    def preserves_composition(self) -> bool:
        s, t = self.source, self.target
        for (x, y, z), c in s.composition.items():
            lhs = self.maps[(x, z)] @ c
            rhs = t.composition[(x, y, z)] @ dg.tensor_maps(self.maps[(y, z)],
                                                            self.maps[(x, y)])
            if lhs.comps != ChainMap(lhs.source, lhs.target, rhs.comps, check=False).comps:
                return False
        return True

    def validate(self) -> bool:
        try:
            for f in self.maps.values():
                f.validate()
        except dg.ValidationError:
            return False
        return self.preserves_units() and self.preserves_composition()


def is_quasi_equivalence(f: DGFunctor) -> bool:
    if set(f.source.objects) != set(f.target.objects):
        return False
    return all(dg.is_quasi_iso(m) for m in f.maps.values())


def _induced(c: ChainMap, src: DGModule, reps: ChainMap, h: dg.Homology, tgt: DGModule
             ) -> ChainMap:
    comps = {}
    g = c @ reps
    for n in src.support:
        if tgt.dim(n):
            comps[n] = h.classify_many(n, g[n])
    return ChainMap(src, tgt, comps, check=False)


def homology_category(e: DGCategory) -> DGCategory:
    hs = {k: dg.homology(m) for k, m in e.homs.items()}
    mods = {k: h.as_module() for k, h in hs.items()}
    reps = {}
    for k, h in hs.items():
        comps = {n: h.representatives(n) for n in h.dims}
        reps[k] = ChainMap(mods[k], e.homs[k], comps, check=False)
    comp = {}
    for (x, y, z), c in e.composition.items():
        src = dg.tensor(mods[(y, z)], mods[(x, y)])
        if not c.comps:
            comp[(x, y, z)] = ChainMap.zero(src, mods[(x, z)])
            continue
        r = dg.tensor_maps(reps[(y, z)], reps[(x, y)])
        comp[(x, y, z)] = _induced(c, src, r, hs[(x, z)], mods[(x, z)])
    units = {x: hs[(x, x)].classify(0, e.units[x]) for x in e.objects}
    out = DGCategory(e.objects, mods, comp, units, dict(e.growth), e.cutoff)
    out.realization, out.hom_spaces = e.realization, e.hom_spaces
    out.tensor_table = dict(e.tensor_table)
    return out


def connective_cover(e: DGCategory) -> Tuple[DGCategory, DGFunctor, DGFunctor]:
    """``(C0 e, i: C0 e → e, p: C0 e → H_* e)``.

    ``C0`` keeps positive degrees, replaces degree 0 by cycles and drops
    negative degrees; ``p`` sends a degree-0 cycle to its class and
    everything else to zero.
    """
    subs, incs = {}, {}
    for k, m in e.homs.items():
        spaces = {n: Subspace.full(m.dim(n)) for n in m.support if n > 0}
        if m.dim(0):
            spaces[0] = kernel(m.diff(0))
        sub, inc = dg.submodule(m, spaces)
        subs[k], incs[k] = sub, inc
    comp = {}
    for (x, y, z), c in e.composition.items():
        if not c.comps:
            comp[(x, y, z)] = ChainMap.zero(dg.tensor(subs[(y, z)], subs[(x, y)]), subs[(x, z)])
            continue
        g = c @ dg.tensor_maps(incs[(y, z)], incs[(x, y)])
        comp[(x, y, z)] = factor_through(incs[(x, z)], g)
    units = {}
    for x in e.objects:
        inc0 = incs[(x, x)][0]
        units[x] = tuple(_solve_columns(inc0, e.units[x]))
    c0 = DGCategory(e.objects, subs, comp, units, dict(e.growth), e.cutoff)
    c0.realization, c0.hom_spaces = e.realization, e.hom_spaces
    h = homology_category(e)
    i = DGFunctor(c0, e, incs)
    p_maps = {}
    for k, inc in incs.items():
        hk = dg.homology(e.homs[k])
        comps = {}
        if subs[k].dim(0) and h.homs[k].dim(0):
            comps[0] = hk.classify_many(0, inc[0])
        p_maps[k] = ChainMap(subs[k], h.homs[k], comps, check=False)
    return c0, i, DGFunctor(c0, h, p_maps)


def _solve_columns(m: QMatrix, v: Sequence) -> Tuple:
    from .linalg import solve
    x = solve(m, v)
    if x is None:
        raise ValueError("unit is not a cycle")
    return x


# ---------------------------------------------------------------------------
# right modules

@dataclass
class RightModule:
    """``values[x]`` with actions ``values[y] ⊗ hom(x, y) → values[x]``.

    ``presentation`` records how the module was built: ``("free", labels)``
    or ``("cokernel", source_labels, target_labels, entries)``.
    """
    category: DGCategory
    values: Dict[str, DGModule]
    action: Dict[Tuple[str, str], ChainMap]
    presentation: Tuple = ()

    def check(self) -> bool:
        e = self.category
        for x in e.objects:
            m = self.values[x]
            for n in m.support:
                for j in range(m.dim(n)):
                    v = _basis_vector(m.dim(n), j)
                    if self.act(x, x, v, n, e.units[x], 0) != v:
                        return False
        for x in e.objects:
            for y in e.objects:
                for z in e.objects:
                    # (m·g)·f = m·(g∘f) for m ∈ M(z), g ∈ hom(y, z), f ∈ hom(x, y)
                    mz, g_, f_ = self.values[z], e.hom(y, z), e.hom(x, y)
                    for p, q, r in _degree_triples(mz, g_, f_):
                        for m in _basis(mz.dim(p)):
                            for g in _basis(g_.dim(q)):
                                mg = self.act(y, z, m, p, g, q)
                                for f in _basis(f_.dim(r)):
                                    lhs = self.act(x, y, mg, p + q, f, r)
                                    rhs = self.act(x, z, m, p, e.compose(x, y, z, g, q, f, r),
                                                   q + r)
                                    if tuple(lhs) != tuple(rhs):
                                        return False
        return True

    def act(self, x: str, y: str, m: Sequence, p: int, f: Sequence, q: int) -> Tuple:
        a, b = self.values[y], self.category.hom(x, y)
        v = _tensor_vector(a, b, p, m, q, f)
        if not v:
            return tuple(ZERO for _ in range(self.values[x].dim(p + q)))
        return self.action[(x, y)][p + q] @ v

    def dims(self) -> Dict[str, Dict[int, int]]:
        return {x: m.dims for x, m in self.values.items()}


def representable(e: DGCategory, obj: str) -> RightModule:
    values = {x: e.hom(x, obj) for x in e.objects}
    action = {(x, y): e.composition[(x, y, obj)] for x in e.objects for y in e.objects}
    return RightModule(e, values, action, ("free", (obj,)))


def free_module(e: DGCategory, labels: Sequence[str]) -> RightModule:
    """``⊕_i hom(-, labels[i])``."""
    parts = [representable(e, l) for l in labels]
    values, action = {}, {}
    sums = {x: dg.direct_sum([p.values[x] for p in parts], equivariant=False)
            for x in e.objects}
    for x in e.objects:
        values[x] = sums[x].module
    for x in e.objects:
        for y in e.objects:
            src = dg.tensor(values[y], e.hom(x, y))
            total = ChainMap.zero(src, values[x])
            ident = ChainMap.identity(e.hom(x, y))
            for i, p in enumerate(parts):
                piece = sums[x].injections[i] @ p.action[(x, y)] @ dg.tensor_maps(
                    sums[y].projections[i], ident)
                total = total + ChainMap(src, values[x], piece.comps, check=False)
            action[(x, y)] = total
    return RightModule(e, values, action, ("free", tuple(labels)))


@dataclass
class FreeMap:
    """``⊕ hom(-, s_i) → ⊕ hom(-, t_j)``, post-composition with degree-0 entries ``a_ji``."""
    source: RightModule
    target: RightModule
    entries: Dict[Tuple[int, int], Tuple]
    components: Dict[str, ChainMap]


def free_map(e: DGCategory, src: Sequence[str], tgt: Sequence[str],
             entries: Dict[Tuple[int, int], Sequence]) -> FreeMap:
    """``entries[(j, i)]`` is a degree-0 vector of ``hom(src[i], tgt[j])``."""
    s, t = free_module(e, src), free_module(e, tgt)
    ss = {x: dg.direct_sum([e.hom(x, l) for l in src], equivariant=False) for x in e.objects}
    ts = {x: dg.direct_sum([e.hom(x, l) for l in tgt], equivariant=False) for x in e.objects}
    comps = {}
    for x in e.objects:
        total = ChainMap.zero(s.values[x], t.values[x])
        for (j, i), a in entries.items():
            h = e.hom(x, src[i])
            mats = {}
            for n in h.support:
                cols = [e.compose(x, src[i], tgt[j], a, 0, f, n) for f in _basis(h.dim(n))]
                if e.hom(x, tgt[j]).dim(n):
                    mats[n] = QMatrix.from_columns(cols, e.hom(x, tgt[j]).dim(n))
            piece = ChainMap(h, e.hom(x, tgt[j]), mats, check=False)
            g = ts[x].injections[j] @ piece @ ss[x].projections[i]
            total = total + ChainMap(s.values[x], t.values[x], g.comps, check=False)
        comps[x] = total
    return FreeMap(s, t, {k: tuple(v) for k, v in entries.items()}, comps)


def cokernel_module(phi: FreeMap) -> RightModule:
    e = phi.source.category
    coks = {x: dg.cokernel_of(phi.components[x]) for x in e.objects}
    values = {x: c.module for x, c in coks.items()}
    action = {}
    for x in e.objects:
        for y in e.objects:
            # act on the target free module, then descend along the projections
            act = coks[x].projection @ phi.target.action[(x, y)]
            lifted = act @ dg.tensor_maps(_lift(coks[y]), ChainMap.identity(e.hom(x, y)))
            action[(x, y)] = ChainMap(dg.tensor(values[y], e.hom(x, y)), values[x],
                                      lifted.comps, check=False)
    src = phi.source.presentation[1]
    tgt = phi.target.presentation[1]
    return RightModule(e, values, action, ("cokernel", src, tgt, phi.entries))


def _lift(c: dg.Cokernel) -> ChainMap:
    return ChainMap(c.module, c.projection.source, c.lift, check=False)


class UnsupportedModule(ValueError):
    """Only free modules and cokernels of maps between them can be realised."""


def tensor_with_generators(m: RightModule) -> DihedralObject:
    """``M ⊗_E G``: the object of the dihedral model that ``M`` presents."""
    return realize(m)[0]


def realize(m: RightModule):
    """The realised object together with the colimit it was computed as."""
    e = m.category
    if not e.realization:
        raise UnsupportedModule("the category carries no dihedral realisation")
    if not m.presentation:
        raise UnsupportedModule("module has no recorded presentation")
    kind = m.presentation[0]
    if kind == "free":
        bp = limits.biproduct([e.realization[l] for l in m.presentation[1]])
        return bp.object, bp
    if kind == "cokernel":
        _, src, tgt, entries = m.presentation
        s = limits.biproduct([e.realization[l] for l in src])
        t = limits.biproduct([e.realization[l] for l in tgt])
        proj = _projections(s, len(src))
        total = DihedralMorphism.zero(s.object, t.object)
        for (j, i), a in entries.items():
            f = e.hom_spaces[(src[i], tgt[j])].element(a)
            total = total + t.legs[j] @ f @ proj[i]
        co = limits.cokernel(total)
        return co.object, co
    raise UnsupportedModule(f"unknown presentation {kind!r}")


def _projections(bp, n: int) -> List[DihedralMorphism]:
    """Projections out of a biproduct, from the universal property of its legs."""
    out = []
    for i in range(n):
        maps = []
        for j, leg in enumerate(bp.legs):
            v = leg.source
            maps.append(DihedralMorphism.identity(v) if i == j
                        else DihedralMorphism.zero(v, bp.legs[i].source))
        out.append(bp.factor(maps))
    return out
