"""Weak equivalences, fibrations, generating maps, cell certificates and lifting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .. import dg
from ..dg import ChainMap, DGModule, NonCommutingSquare
from ..linalg import MatrixSystem, QMatrix, Subspace, kernel
from . import limits
from .monoidal import tensor_map
from .objects import (DihedralMorphism, DihedralObject, at_stalk_map, constant_map,
                      zero_object)


def is_weak_equivalence(f: DihedralMorphism) -> bool:
    return all(dg.is_quasi_iso(f.component(l)) for l in f.labels())


def is_fibration(f: DihedralMorphism) -> bool:
    return all(dg.is_surjection(f.component(l)) for l in f.labels())


def homology_object(v: DihedralObject) -> DihedralObject:
    stalks = [dg.homology(s).as_module() for s in v.stalks]
    tail = dg.homology(v.tail).as_module()
    inf = dg.homology(v.infinity).as_module()
    sigma = ChainMap(inf, tail, dg.homology_map(v.sigma).comps, check=False)
    return DihedralObject(stalks, tail, inf, sigma, check=False)


def homology_morphism(f: DihedralMorphism) -> DihedralMorphism:
    src, tgt = homology_object(f.source), homology_object(f.target)

    def h(label, s, t):
        return ChainMap(s, t, dg.homology_map(f.component(label)).comps, check=False)

    return DihedralMorphism(src, tgt, h("inf", src.infinity, tgt.infinity),
                            [h(k, src.stalk(k), tgt.stalk(k)) for k in range(1, f.window + 1)],
                            h("tail", src.tail, tgt.tail), check=False)


def mapping_cone(f: DihedralMorphism) -> DihedralObject:
    """Componentwise cone; the structure map is ``σ_target ⊕ σ_source`` (shifted)."""
    w = f.window
    stalks = [dg.mapping_cone(f.stalk(k)) for k in range(1, w + 1)]
    tail = dg.mapping_cone(f.tail)
    inf = dg.mapping_cone(f.infinity)
    a, b = f.source, f.target
    comps = {}
    for n in inf.support:
        comps[n] = QMatrix.direct_sum(b.sigma[n], a.sigma[n - 1])
    sigma = ChainMap(inf, tail, {n: m for n, m in comps.items() if tail.dim(n)}, check=False)
    return DihedralObject(stalks, tail, inf, sigma, check=False)


# ---------------------------------------------------------------------------
# generators

@dataclass
class GeneratingMaps:
    """``cI_Q``, ``i_k I_QW``, ``cJ_Q`` and ``i_k J_QW`` over a degree and stalk range."""
    constant_cofibrations: List[DihedralMorphism] = field(default_factory=list)
    stalk_cofibrations: List[DihedralMorphism] = field(default_factory=list)
    constant_acyclic: List[DihedralMorphism] = field(default_factory=list)
    stalk_acyclic: List[DihedralMorphism] = field(default_factory=list)

    @property
    def cofibrations(self) -> List[DihedralMorphism]:
        return self.constant_cofibrations + self.stalk_cofibrations

    @property
    def acyclic(self) -> List[DihedralMorphism]:
        return self.constant_acyclic + self.stalk_acyclic


def generating_maps(min_deg: int, max_deg: int, kmax: int) -> GeneratingMaps:
    g = GeneratingMaps()
    q = dg.generators(min_deg, max_deg, "Q")
    qw = dg.generators(min_deg, max_deg, "QW")
    g.constant_cofibrations = [constant_map(f) for f in q.cofibrations]
    g.constant_acyclic = [constant_map(f) for f in q.acyclic]
    for k in range(1, kmax + 1):
        g.stalk_cofibrations += [at_stalk_map(k, f) for f in qw.cofibrations]
        g.stalk_acyclic += [at_stalk_map(k, f) for f in qw.acyclic]
    return g


def _generator_kind(f: DihedralMorphism) -> Optional[Tuple]:
    """Recognise ``c(S^{n-1} → D^n)`` or ``i_k(S^{n-1}W → D^nW)``; returns a tag or None."""
    t = f.target.normalize()
    if t.window == 0 and t.infinity.dims and len(t.infinity.dims) == 2:
        n = max(t.infinity.support)
        if f == constant_map(dg.sphere_to_disk(n)):
            return ("c", n)
    if t.infinity.is_zero() and t.tail.is_zero() and t.window >= 1:
        k = t.window
        s = t.stalk(k)
        if s.support:
            n = max(s.support)
            if f == at_stalk_map(k, dg.sphere_to_disk(n, "QW")):
                return ("i", k, n)
    return None


# ---------------------------------------------------------------------------
# lifting

def _declare(sys_: MatrixSystem, src: DihedralObject, tgt: DihedralObject, window: int,
             name: str = "h"):
    """Unknowns and structural equations for a morphism ``src → tgt``."""
    labels = list(range(1, window + 1)) + ["tail", "inf"]

    def comp(v, l):
        return v.infinity if l == "inf" else (v.tail if l == "tail" else v.stalk(l))

    for l in labels:
        a, b = comp(src, l), comp(tgt, l)
        degs = [n for n in a.support if b.dim(n)]
        for n in degs:
            sys_.unknown((name, l, n), b.dim(n), a.dim(n))
        for n in sorted(set(degs) | {n + 1 for n in degs}):
            terms = []
            if (name, l, n) in sys_.blocks:
                terms.append((b.diff(n), (name, l, n), None, 1))
            if (name, l, n - 1) in sys_.blocks:
                terms.append((None, (name, l, n - 1), a.diff(n), -1))
            if terms:
                sys_.equation(terms, (b.dim(n - 1), a.dim(n)))
        if l != "inf":
            for n in degs:
                sys_.equation([(b.inv(n), (name, l, n), None, 1),
                               (None, (name, l, n), a.inv(n), -1)], (b.dim(n), a.dim(n)))
    for n in src.infinity.support:
        if not tgt.tail.dim(n):
            continue
        terms = []
        if (name, "inf", n) in sys_.blocks:
            terms.append((tgt.sigma[n], (name, "inf", n), None, 1))
        if (name, "tail", n) in sys_.blocks:
            terms.append((None, (name, "tail", n), src.sigma[n], -1))
        if terms:
            sys_.equation(terms, (tgt.tail.dim(n), src.infinity.dim(n)))
    return labels, comp


def llp_solve_model(i: DihedralMorphism, p: DihedralMorphism, top: DihedralMorphism,
                    bottom: DihedralMorphism) -> Optional[DihedralMorphism]:
    """A lift ``h: B → X`` with ``h ∘ i = top`` and ``p ∘ h = bottom``, or None."""
    if p @ top != bottom @ i:
        raise NonCommutingSquare("square does not commute: p∘top != bottom∘i")
    B, X = i.target, p.source
    w = max(i.window, p.window, top.window, bottom.window)
    sys_ = MatrixSystem()
    labels, comp = _declare(sys_, B, X, w)
    for l in labels:
        A_l, B_l, X_l, Y_l = comp(i.source, l), comp(B, l), comp(X, l), comp(p.target, l)
        for n in set(A_l.support) | set(B_l.support):
            key = ("h", l, n)
            t, il = top.component(l)[n], i.component(l)[n]
            if key in sys_.blocks:
                if A_l.dim(n):
                    sys_.equation([(None, key, il, 1)], (X_l.dim(n), A_l.dim(n)), t)
                if Y_l.dim(n):
                    sys_.equation([(p.component(l)[n], key, None, 1)], (Y_l.dim(n), B_l.dim(n)),
                                  bottom.component(l)[n])
            elif not t.is_zero() or not bottom.component(l)[n].is_zero():
                return None
    sol = sys_.solve()
    if sol is None:
        return None
    comps = {}
    for l in labels:
        comps[l] = ChainMap(comp(B, l), comp(X, l),
                            {n: m for (nm, ll, n), m in sol.items() if ll == l}, check=False)
    return DihedralMorphism.from_components(B, X, comps, window=w, check=False)


# ---------------------------------------------------------------------------
# cell certificates

@dataclass
class Cell:
    generator: DihedralMorphism      # S → D, a member of cI_Q or i_k I_QW
    characteristic: DihedralMorphism  # D → target of the certified map


@dataclass
class CellCertificate:
    """``map`` is the composite of pushouts of the listed cells followed by an iso."""
    map: DihedralMorphism
    cells: List[Cell]


class InvalidCertificate(ValueError):
    pass


def verify_certificate(cert: CellCertificate) -> bool:
    """Rebuild the cell complex and check the comparison map is an isomorphism."""
    f = cert.map
    phi = f  # current stage → target
    for cell in cert.cells:
        g, psi = cell.generator, cell.characteristic
        if _generator_kind(g) is None:
            return False
        if psi.source != g.target or psi.target != f.target:
            return False
        attach_target = psi @ g
        zero_in = DihedralMorphism.zero(zero_object(), g.source)
        attach = llp_solve_model(zero_in, phi, DihedralMorphism.zero(zero_object(), phi.source),
                                 attach_target)
        if attach is None:
            return False
        po = limits.pushout(attach, g)
        phi = po.factor([phi @ attach, phi, psi])
    return phi.is_iso()


def is_cofibration(cert: CellCertificate) -> bool:
    return verify_certificate(cert)


def generator_certificate(g: DihedralMorphism) -> CellCertificate:
    return CellCertificate(g, [Cell(g, DihedralMorphism.identity(g.target))])


def _adapted_complement(sub: Subspace, ambient: int) -> List[tuple]:
    """Standard basis vectors completing ``sub`` to the whole space."""
    basis = list(sub.basis)
    cur = Subspace(ambient, basis)
    out = []
    for j in range(ambient):
        e = tuple(1 if i == j else 0 for i in range(ambient))
        if e not in cur:
            out.append(e)
            basis.append(e)
            cur = Subspace(ambient, basis)
    return out


def _qcells(u: ChainMap) -> List[Tuple[int, QMatrix]]:
    """Degreewise complement of ``im u`` as (degree, characteristic matrices D^n → target)."""
    t = u.target
    out = []
    for n in sorted(t.support):
        img = dg.image_spaces(u).get(n) or Subspace.zero(t.dim(n))
        for vec in _adapted_complement(img, t.dim(n)):
            top = QMatrix.from_columns([vec], t.dim(n))
            out.append((n, top))
    return out


def _wcells(u: ChainMap) -> List[Tuple[int, QMatrix]]:
    """As :func:`_qcells` but in free QW pairs ``x = a + b``, ``wx = a - b``.

    The image is W-stable, so it splits along the ±1 eigenspaces; ``a`` and
    ``b`` run over complements of the image inside each eigenspace.
    """
    t = u.target
    out = []
    for n in sorted(t.support):
        dim = t.dim(n)
        w = t.inv(n)
        ident = QMatrix.identity(dim)
        img = dg.image_spaces(u).get(n) or Subspace.zero(dim)
        comp = []
        for sign in (1, -1):
            eig = kernel(w - ident.scale(sign))
            half = [tuple((x + sign * y) / 2 for x, y in zip(v, w @ v)) for v in img.basis]
            basis, rest = list(half), []
            for v in eig.basis:
                if v not in Subspace(dim, basis):
                    rest.append(v)
                    basis.append(v)
            comp.append(rest)
        if len(comp[0]) != len(comp[1]):
            raise InvalidCertificate(f"cokernel in degree {n} is not W-free")
        for a, b in zip(comp[0], comp[1]):
            x = tuple(p + q for p, q in zip(a, b))
            wx = tuple(p - q for p, q in zip(a, b))
            out.append((n, QMatrix.from_columns([x, wx], dim)))
    return out


def _char_map(t: DGModule, n: int, top: QMatrix, ring: str) -> ChainMap:
    disk = dg.disk(n, ring)
    comps = {n: top}
    if t.dim(n - 1):
        comps[n - 1] = t.diff(n) @ top
    return ChainMap(disk, t, comps, check=False)


def certificate_for(f: DihedralMorphism) -> CellCertificate:
    """Build a certificate for an injective map of constant type ``c(u)`` or stalk type ``i_k(u)``.

    Cells are attached in increasing degree, one for each basis vector (or
    free QW pair) of a complement of the image.
    """
    src, tgt = f.source.normalize(), f.target.normalize()
    cells = []
    if tgt.window == 0 and src.window == 0 and tgt.sigma.is_iso() and src.sigma.is_iso():
        u = f.infinity
        for n, top in _qcells(u):
            psi_dg = _char_map(u.target, n, top, "Q")
            gen = constant_map(dg.sphere_to_disk(n))
            psi = _retarget(constant_map(psi_dg), gen.target, f.target)
            cells.append(Cell(gen, psi))
    elif tgt.infinity.is_zero() and tgt.tail.is_zero() and src.infinity.is_zero() \
            and src.tail.is_zero():
        for k in range(1, tgt.window + 1):
            u = f.stalk(k)
            for n, top in _wcells(u):
                psi_dg = _char_map(u.target, n, top, "QW")
                gen = at_stalk_map(k, dg.sphere_to_disk(n, "QW"))
                psi = _retarget(at_stalk_map(k, psi_dg), gen.target, f.target)
                cells.append(Cell(gen, psi))
    else:
        raise InvalidCertificate("only constant-type or stalk-supported maps are certified")
    return CellCertificate(f, cells)


def _retarget(m: DihedralMorphism, source: DihedralObject, target: DihedralObject
              ) -> DihedralMorphism:
    comps = {l: ChainMap(_c(source, l), _c(target, l), m.component(l).comps, check=False)
             for l in m.labels()}
    return DihedralMorphism.from_components(source, target, comps, check=True)


def _c(v, l):
    return v.infinity if l == "inf" else (v.tail if l == "tail" else v.stalk(l))


# ---------------------------------------------------------------------------
# pushout products

@dataclass
class PushoutProduct:
    map: DihedralMorphism
    certificate: Optional[CellCertificate]


def pushout_product(i: DihedralMorphism, j: DihedralMorphism) -> PushoutProduct:
    """``A⊗D ⊔_{A⊗C} B⊗C → B⊗D`` for ``i: A → B`` and ``j: C → D``."""
    A, B, C, D = i.source, i.target, j.source, j.target
    idA, idB = DihedralMorphism.identity(A), DihedralMorphism.identity(B)
    idC, idD = DihedralMorphism.identity(C), DihedralMorphism.identity(D)
    left = tensor_map(idA, j)    # A⊗C → A⊗D
    right = tensor_map(i, idC)   # A⊗C → B⊗C
    po = limits.pushout(left, right)
    out = po.factor([tensor_map(i, j), tensor_map(i, idD), tensor_map(idB, j)])
    try:
        cert = certificate_for(out)
    except InvalidCertificate:
        cert = None
    return PushoutProduct(out, cert)
