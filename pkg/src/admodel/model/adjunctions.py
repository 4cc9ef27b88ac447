"""The adjoint pairs ``i_k ⊣ p_k``, ``p_k ⊣ i_k``, ``p_inf ⊣ i_inf`` and ``c ⊣ ⊞_1^W``.

Each pair comes with explicit unit and counit.  ``check_*`` computes both
hom spaces, the two transposition maps in coordinates, and verifies that
they are mutually inverse and that the triangle identities hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .. import dg
from ..dg import ChainMap, DGModule, MapSpace
from ..linalg import QMatrix
from .boxplus import boxplus, boxplus_map
from .homs import HomSpace
from .objects import (DihedralMorphism, DihedralObject, at_infinity, at_infinity_map, at_stalk,
                      at_stalk_map, constant, constant_map)


def _on(f: ChainMap, s: DGModule, t: DGModule) -> ChainMap:
    return ChainMap(s, t, f.comps, check=False)


# ---------------------------------------------------------------------------
# units and counits

def stalk_counit(k: int, v: DihedralObject) -> DihedralMorphism:
    """``i_k p_k V → V``: the identity at stalk k."""
    src = at_stalk(k, v.stalk(k))
    return DihedralMorphism.from_components(
        src, v, {k: _on(ChainMap.identity(v.stalk(k)), src.stalk(k), v.stalk(k))},
        window=max(k, v.window))


def stalk_unit(k: int, v: DihedralObject) -> DihedralMorphism:
    """``V → i_k p_k V``: the identity at stalk k."""
    tgt = at_stalk(k, v.stalk(k))
    return DihedralMorphism.from_components(
        v, tgt, {k: _on(ChainMap.identity(v.stalk(k)), v.stalk(k), tgt.stalk(k))},
        window=max(k, v.window))


def infinity_unit(v: DihedralObject) -> DihedralMorphism:
    """``V → i_inf p_inf V``: the identity at infinity."""
    tgt = at_infinity(v.infinity)
    return DihedralMorphism.from_components(v, tgt, {"inf": ChainMap.identity(v.infinity)})


def sections_unit(m: DGModule, cutoff: int) -> ChainMap:
    """``M → ⊞_1^W cM``: in split coordinates, the inclusion of the infinity summand."""
    return boxplus(1, constant(m), cutoff, fixed=True).injections[0]


def sections_counit(v: DihedralObject, cutoff: int) -> DihedralMorphism:
    """``c ⊞_1^W V → V``: the raw stalk coordinate at ``k <= cutoff``, σ past it, p_inf at infinity."""
    b = boxplus(1, v, cutoff, fixed=True)
    src = constant(b.module)
    raw = b.split_to_raw
    comps = {"inf": _on(b.projections[0] @ raw, src.infinity, v.infinity),
             "tail": _on(v.sigma @ b.projections[0] @ raw, src.tail, v.tail)}
    for k in range(1, cutoff + 1):
        inc = dg.fixed_points_inclusion(v.stalk(k))
        comps[k] = _on(inc @ b.projections[k] @ raw, src.stalk(k), v.stalk(k))
    return DihedralMorphism.from_components(src, v, comps, window=cutoff)


# ---------------------------------------------------------------------------
# checks

@dataclass
class AdjunctionReport:
    name: str
    left_dim: int
    right_dim: int
    inverse_ok: bool
    triangles_ok: bool

    @property
    def ok(self) -> bool:
        return self.left_dim == self.right_dim and self.inverse_ok and self.triangles_ok


def _transpose_matrix(src_basis: Sequence, transform: Callable, coords: Callable, rows: int
                      ) -> QMatrix:
    cols = [coords(transform(f)) for f in src_basis]
    return QMatrix.from_columns(cols, rows)


def _mutually_inverse(lhs_basis, lhs_coords, rhs_basis, rhs_coords, phi, psi) -> bool:
    n, m = len(lhs_basis), len(rhs_basis)
    if n != m:
        return False
    P = _transpose_matrix(lhs_basis, phi, rhs_coords, m)
    S = _transpose_matrix(rhs_basis, psi, lhs_coords, n)
    return (P @ S).is_identity() and (S @ P).is_identity()


def check_stalk_left(k: int, r: DGModule, v: DihedralObject) -> AdjunctionReport:
    """``Hom(i_k R, V) ≅ Hom_W(R, p_k V)``."""
    r = r.with_trivial_action() if not r.equivariant else r
    src = at_stalk(k, r)
    lhs = HomSpace(src, v)
    rhs = MapSpace(src.stalk(k), v.stalk(k), equivariant=True)
    eps = stalk_counit(k, v)

    def phi(f):
        return f.stalk(k)

    def psi(g):
        return eps @ at_stalk_map(k, _on(g, r, v.stalk(k)))

    inv = _mutually_inverse(lhs.basis, lhs.coordinates, rhs.basis, rhs.coordinates, phi, psi)
    # triangles: ε_{i_k R} ∘ i_k(η_R) = id and p_k(ε_V) ∘ η_{p_k V} = id (η the identity)
    tri = (stalk_counit(k, src) @ DihedralMorphism.identity(src) ==
           DihedralMorphism.identity(src).widen(k)
           and eps.stalk(k) == ChainMap.identity(v.stalk(k)))
    return AdjunctionReport(f"i_{k} -| p_{k}", lhs.dim, rhs.dim, inv, tri)


def check_stalk_right(k: int, v: DihedralObject, r: DGModule) -> AdjunctionReport:
    """``Hom_W(p_k V, R) ≅ Hom(V, i_k R)``."""
    tgt = at_stalk(k, r)
    lhs = MapSpace(v.stalk(k), tgt.stalk(k), equivariant=True)
    rhs = HomSpace(v, tgt)
    eta = stalk_unit(k, v)

    def phi(g):
        return at_stalk_map(k, _on(g, v.stalk(k), tgt.stalk(k))) @ eta

    def psi(f):
        return f.stalk(k)

    inv = _mutually_inverse(lhs.basis, lhs.coordinates, rhs.basis, rhs.coordinates, phi, psi)
    tri = (stalk_unit(k, tgt).stalk(k) == ChainMap.identity(tgt.stalk(k))
           and at_stalk_map(k, eta.stalk(k)) == DihedralMorphism.identity(
               at_stalk(k, v.stalk(k))).widen(k))
    return AdjunctionReport(f"p_{k} -| i_{k}", lhs.dim, rhs.dim, inv, tri)


def check_infinity(v: DihedralObject, m: DGModule) -> AdjunctionReport:
    """``Hom(p_inf V, M) ≅ Hom(V, i_inf M)``."""
    tgt = at_infinity(m)
    lhs = MapSpace(v.infinity, m, equivariant=False)
    rhs = HomSpace(v, tgt)
    eta = infinity_unit(v)

    def phi(g):
        return at_infinity_map(g) @ eta

    def psi(f):
        return f.infinity

    inv = _mutually_inverse(lhs.basis, lhs.coordinates, rhs.basis, rhs.coordinates, phi, psi)
    tri = (infinity_unit(tgt).infinity == ChainMap.identity(m)
           and eta.infinity == ChainMap.identity(v.infinity))
    return AdjunctionReport("p_inf -| i_inf", lhs.dim, rhs.dim, inv, tri)


def check_sections(m: DGModule, v: DihedralObject, cutoff: int) -> AdjunctionReport:
    """``Hom(cM, V) ≅ Hom_Q(M, ⊞_1^W V)`` with both sides truncated at ``cutoff``."""
    cutoff = max(cutoff, v.window, 1)
    m = m.forget_action()
    cm = constant(m)
    lhs = HomSpace(cm, v, cutoff)
    box = boxplus(1, v, cutoff, fixed=True)
    rhs = MapSpace(m, box.module, equivariant=False)
    eta_m = sections_unit(m, cutoff)
    eps_v = sections_counit(v, cutoff)

    def phi(f):
        return _on(boxplus_map(1, f, cutoff, fixed=True) @ eta_m, m, box.module)

    def psi(g):
        return eps_v @ constant_map(g)

    inv = _mutually_inverse(lhs.basis, lhs.coordinates, rhs.basis, rhs.coordinates, phi, psi)
    # ε_{cM} ∘ c(η_M) = id_{cM}
    t1 = sections_counit(cm, cutoff) @ constant_map(eta_m) == \
        DihedralMorphism.identity(cm).widen(cutoff)
    # ⊞(ε_V) ∘ η_{⊞V} = id_{⊞V}
    eta_box = sections_unit(box.module, cutoff)
    lhs_map = boxplus_map(1, eps_v, cutoff, fixed=True) @ eta_box
    t2 = lhs_map.comps == ChainMap.identity(box.module).comps
    return AdjunctionReport("c -| box_1^W", lhs.dim, rhs.dim, inv, t1 and t2)
