"""Derived-level computations between objects of the dihedral model.

``graded_hom`` gives homotopy classes degree by degree, ``ext1`` classifies
extensions of objects with zero differential, and ``ses_dimensions`` adds
the two to predict the size of the equivariant maps between generators.

Extensions are parameterised by a germ-level map ``τ: A_inf → B_tail``
landing in the fixed points; re-choosing the splittings at infinity and on
the tail changes ``τ`` by ``σ_B φ_inf - φ_tail σ_A``.  Stalks are
semisimple so the window contributes nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import dg
from .dg import ChainMap, MapSpace
from .linalg import QMatrix, Subspace, quotient, solve
from .model import homs
from .model.homs import HomSpace, NonRepresentableHom, hom_space
from .model.objects import (DihedralMorphism, DihedralObject, at_stalk, constant,
                            shift)


# ---------------------------------------------------------------------------
# the generator catalog

@dataclass(frozen=True)
class GeneratorExpression:
    kind: str                 # "unit" or "stalk_power"
    k: int = 0
    i: int = 0

    def __post_init__(self):
        if self.kind == "stalk_power":
            if self.k < 1 or self.i < 1:
                raise ValueError("stalk_power needs k >= 1 and i >= 1")
        elif self.kind != "unit":
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @classmethod
    def unit(cls) -> "GeneratorExpression":
        return cls("unit")

    @classmethod
    def stalk_power(cls, k: int, i: int) -> "GeneratorExpression":
        return cls("stalk_power", k, i)

    @property
    def label(self) -> str:
        """The topological object this stands for."""
        if self.kind == "unit":
            return "S_D"
        return f"sigma_H^{self.i} with |H| = {2 * self.k}"

    @property
    def name(self) -> str:
        if self.kind == "unit":
            return "cQ"
        power = "" if self.i == 1 else f"^{self.i}"
        return f"i_{self.k}QW{power}"


def catalog(expr: GeneratorExpression) -> DihedralObject:
    if expr.kind == "unit":
        return constant(dg.sphere(0))
    return at_stalk(expr.k, dg.regular_power(expr.i))


def generator_list(imax: int, kmax: int) -> List[GeneratorExpression]:
    """``cQ`` followed by ``i_k QW^{⊗i}`` ordered by ``k`` then ``i``."""
    out = [GeneratorExpression.unit()]
    for k in range(1, kmax + 1):
        for i in range(1, imax + 1):
            out.append(GeneratorExpression.stalk_power(k, i))
    return out


# ---------------------------------------------------------------------------
# graded homs

def _check_source(a: DihedralObject) -> None:
    if not (a.tail.is_zero() or homs.is_tail_reduced(a)):
        raise NonRepresentableHom(
            "graded_hom needs a source whose tail is zero or spanned by the image of sigma")


def _degree_span(a: DihedralObject, b: DihedralObject) -> range:
    da = [n for _, m in a.components() for n in m.support]
    db = [n for _, m in b.components() for n in m.support]
    if not da or not db:
        return range(0)
    return range(min(db) - max(da) - 1, max(db) - min(da) + 2)


def graded_hom(a: DihedralObject, b: DihedralObject, window: Optional[int] = None,
               degrees: Optional[Sequence[int]] = None) -> Dict[int, int]:
    """``n ↦ dim [a, Σ^n b]``, read off as degree-0 homology of ``hom(a, Σ^{-n} b)``.

    Only nonzero entries are returned.  The window matters only when both
    objects have a nonzero germ part, as for ``hom(cQ, cQ)``.
    """
    _check_source(a)
    K = max(a.window, b.window, window or 0)
    out = {}
    for n in (degrees if degrees is not None else _degree_span(a, b)):
        h = dg.homology(homs.hom_complex(a, shift(b, -n), K)).dim(0)
        if h:
            out[n] = h
    return out


# ---------------------------------------------------------------------------
# Ext^1

class NontrivialDifferential(ValueError):
    """Ext is only classified for objects with zero differential."""


def _flatten(m: QMatrix) -> Tuple[Fraction, ...]:
    return tuple(x for row in m.tolist() for x in row)


def _unflatten(v: Sequence, rows: int, cols: int) -> QMatrix:
    return QMatrix([list(v[r * cols:(r + 1) * cols]) for r in range(rows)], rows, cols)


class ExtGroup:
    """``Hom(A_inf, B_tail^W)`` modulo ``σ_B Hom(A_inf, B_inf) + Hom_W(A_tail, B_tail) σ_A``.

    Everything is computed one degree at a time.  A representative ``τ`` is
    a dict ``degree → matrix B_tail_n × A_inf_n`` with fixed-point values.
    """

    def __init__(self, a: DihedralObject, b: DihedralObject):
        for name, v in (("source", a), ("target", b)):
            if not v.has_zero_differential():
                raise NontrivialDifferential(f"ext1 {name} has a nonzero differential")
        self.source, self.target = a, b
        fix = dg.fixed_points_inclusion(b.tail)
        inf_maps = MapSpace(a.infinity, b.infinity, equivariant=False)
        tail_maps = MapSpace(a.tail, b.tail, equivariant=True)
        self._fix = fix
        self._quot = {}
        self._coboundaries: Dict[int, Subspace] = {}
        self.dims: Dict[int, int] = {}
        self.basis: List[Dict[int, QMatrix]] = []
        for n in a.infinity.support:
            F = fix[n]
            rows, cols = F.cols, a.infinity.dim(n)
            if not rows:
                continue
            # coordinates of σ_B φ and ψ σ_A in the fixed-point basis
            gens = [b.sigma[n] @ f[n] for f in inf_maps.basis]
            gens += [g[n] @ a.sigma[n] for g in tail_maps.basis]
            vecs = []
            for m in gens:
                t = self._fixed_coords(n, m)
                if t is None:
                    raise AssertionError("coboundary left the fixed points")
                vecs.append(_flatten(t))
            sub = Subspace(rows * cols, vecs)
            q = quotient(rows * cols, sub)
            self._coboundaries[n] = sub
            self._quot[n] = q
            if q.dim:
                self.dims[n] = q.dim
            for j in range(q.dim):
                t = _unflatten(q.lift.column(j), rows, cols)
                self.basis.append({n: F @ t})

    def _fixed_coords(self, n: int, m: QMatrix) -> Optional[QMatrix]:
        F = self._fix[n]
        cols = []
        for j in range(m.cols):
            x = solve(F, m.column(j))
            if x is None:
                return None
            cols.append(x)
        return QMatrix.from_columns(cols, F.cols)

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def classify(self, tau: Dict[int, QMatrix]) -> Dict[int, Tuple[Fraction, ...]]:
        """Coordinates of the class of ``τ`` in each degree with a nonzero group."""
        out = {}
        for n, q in self._quot.items():
            m = tau.get(n)
            if m is None:
                m = QMatrix.zero(self.target.tail.dim(n), self.source.infinity.dim(n))
            t = self._fixed_coords(n, m)
            if t is None:
                raise ValueError(f"tau does not land in the fixed points in degree {n}")
            if q.dim:
                out[n] = tuple(q.projection @ _flatten(t))
        return out

    def is_coboundary(self, tau: Dict[int, QMatrix]) -> bool:
        return all(not any(v) for v in self.classify(tau).values())


def ext1(a: DihedralObject, b: DihedralObject) -> ExtGroup:
    return ExtGroup(a, b)


@dataclass
class Extension:
    """``0 → B → E → A → 0`` with ``E`` split componentwise and glued by ``τ``."""
    middle: DihedralObject
    inclusion: DihedralMorphism
    projection: DihedralMorphism


def extension(a: DihedralObject, b: DihedralObject, tau: Dict[int, QMatrix]) -> Extension:
    K = max(a.window, b.window)
    sums = {lab: dg.direct_sum([mb, ma]) for (lab, mb), (_, ma) in
            zip(b.components(K), a.components(K))}
    inf = sums["inf"]
    tail = sums["tail"]
    sigma = {}
    for n in inf.module.support:
        z = QMatrix.zero
        t = tau.get(n, z(b.tail.dim(n), a.infinity.dim(n)))
        sigma[n] = QMatrix.block([
            [b.sigma[n], t],
            [z(a.tail.dim(n), b.infinity.dim(n)), a.sigma[n]]])
    sig = ChainMap(inf.module, tail.module, sigma)
    e = DihedralObject([sums[k].module for k in range(1, K + 1)], tail.module, inf.module, sig)
    inc = {lab: s.injections[0] for lab, s in sums.items()}
    proj = {lab: s.projections[1] for lab, s in sums.items()}
    return Extension(e, DihedralMorphism.from_components(b, e, inc, window=K),
                     DihedralMorphism.from_components(e, a, proj, window=K))


def splits(ext: Extension) -> bool:
    """Whether the projection admits a section, decided by solving a linear system."""
    e, a = ext.middle, ext.projection.target
    K = e.window
    sections = HomSpace(a, e, K)
    ends = HomSpace(a, a, K)
    cols = [ends.coordinates(ext.projection @ s) for s in sections.basis]
    target = ends.coordinates(DihedralMorphism.identity(a).widen(K))
    if not cols:
        return not any(target)
    return solve(QMatrix.from_columns(cols, len(target)), target) is not None


def euler_ext_dim(a: DihedralObject, b: DihedralObject) -> int:
    """Ext dimension from the Euler form of the germ quiver ``inf → +`` (plus a lone ``-``).

    Per degree the germ data of an object with zero differential is a
    representation of that quiver: ``V_inf``, the fixed part ``V_+`` and the
    sign part ``V_-`` of the tail.  Hereditary, so ``dim Ext = dim Hom - <a, b>``.
    """
    def parts(v: DihedralObject, n: int) -> Tuple[int, int, int]:
        t = v.tail
        plus = dg.fixed_points(t).dim(n) if t.dim(n) else 0
        return v.infinity.dim(n), plus, t.dim(n) - plus

    hom = homs.germ_maps(a, b).dim
    euler = 0
    degs = set(a.infinity.support) | set(a.tail.support)
    for n in degs:
        ai, ap, am = parts(a, n)
        bi, bp, bm = parts(b, n)
        euler += ai * bi + ap * bp + am * bm - ai * bp
    return hom - euler


def isomorphism(a: DihedralObject, b: DihedralObject, attempts: int = 8
                ) -> Optional[DihedralMorphism]:
    """An isomorphism ``a → b`` if a generic element of the hom space is one."""
    space = hom_space(a, b)
    if not space.dim:
        return DihedralMorphism.zero(a, b) if a.is_zero() and b.is_zero() else None
    rng = random.Random(0)
    for _ in range(attempts):
        f = space.element([rng.randint(-7, 7) for _ in range(space.dim)])
        if f.is_iso():
            return f
    return None


# ---------------------------------------------------------------------------
# the short exact sequence count

def ses_dimensions(x: GeneratorExpression, y: GeneratorExpression,
                   window: Optional[int] = None) -> int:
    """``dim Ext(Σ X, Y) + dim Hom(X, Y)`` in degree 0 for catalog objects."""
    a, b = catalog(x), catalog(y)
    ext = ext1(shift(a, 1), b).dim
    return ext + graded_hom(a, b, window, degrees=[0]).get(0, 0)
