"""Bounded chain complexes over Q and over QW, W the group of order two.

Indexing is homological: the differential ``d_n`` maps degree ``n`` to
degree ``n - 1``.  A module over QW is a complex together with a degreewise
involution ``w`` commuting with ``d``; a module with ``w is None`` is a plain
dg Q-module (wherever an action is needed it is taken to be trivial).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .linalg import (ONE, ZERO, MatrixSystem, QMatrix, Subspace, image, kernel,
                     quotient, rational, solve_many)


class ValidationError(ValueError):
    """A structure violates one of its defining identities (d^2 = 0, w^2 = 1, ...)."""


REGULAR = QMatrix([[0, 1], [1, 0]])
SIGN = QMatrix([[-1]])


class DGModule:
    """A bounded dg Q-module, optionally with a W-action.

    ``dims`` maps degree to dimension, ``d`` maps degree ``n`` to the matrix of
    ``d_n`` (shape ``dims[n-1] x dims[n]``), ``w`` maps degree to involution.
    Missing differentials are zero; missing involutions are the identity.
    """

    __slots__ = ("_dims", "_d", "_w", "_hash")

    def __init__(self, dims: Mapping[int, int], d: Optional[Mapping[int, QMatrix]] = None,
                 w: Optional[Mapping[int, QMatrix]] = None, *, check: bool = True):
        self._dims = {int(n): int(k) for n, k in sorted(dims.items()) if k}
        if any(k < 0 for k in self._dims.values()):
            raise ValidationError("negative dimension")
        self._d = {}
        for n, m in (d or {}).items():
            n = int(n)
            if m.shape != (self.dim(n - 1), self.dim(n)):
                raise ValidationError(
                    f"d_{n} has shape {m.shape}, expected {(self.dim(n - 1), self.dim(n))}")
            if m.rows and m.cols and not m.is_zero():
                self._d[n] = m
        if w is None:
            self._w = None
        else:
            self._w = {}
            for n in self._dims:
                m = w.get(n)
                if m is None:
                    m = QMatrix.identity(self._dims[n])
                elif m.shape != (self._dims[n], self._dims[n]):
                    raise ValidationError(f"w_{n} has shape {m.shape}")
                self._w[n] = m
            extra = set(w) - set(self._dims)
            if any(not w[n].shape == (0, 0) for n in extra):
                raise ValidationError(f"involution given outside the support: {sorted(extra)}")
        self._hash = None
        if check:
            self.validate()

    # -- structure --------------------------------------------------------
    def validate(self) -> None:
        for n in self._d:
            prev = self.diff(n - 1)
            if not (prev @ self._d[n]).is_zero():
                raise ValidationError(f"d_{n - 1} d_{n} != 0")
        if self._w is not None:
            for n, w in self._w.items():
                if not (w @ w).is_identity():
                    raise ValidationError(f"w_{n}^2 != 1")
                if not (self.diff(n) @ w == self.inv(n - 1) @ self.diff(n)):
                    raise ValidationError(f"w does not commute with d_{n}")

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(self._dims)

    @property
    def dims(self) -> Dict[int, int]:
        return dict(self._dims)

    def dim(self, n: int) -> int:
        return self._dims.get(n, 0)

    @property
    def total_dim(self) -> int:
        return sum(self._dims.values())

    def diff(self, n: int) -> QMatrix:
        m = self._d.get(n)
        return m if m is not None else QMatrix.zero(self.dim(n - 1), self.dim(n))

    def inv(self, n: int) -> QMatrix:
        if self._w is None or n not in self._w:
            return QMatrix.identity(self.dim(n))
        return self._w[n]

    @property
    def equivariant(self) -> bool:
        return self._w is not None

    def is_zero(self) -> bool:
        return not self._dims

    def has_zero_differential(self) -> bool:
        return not self._d

    def with_trivial_action(self) -> "DGModule":
        if self._w is not None:
            return self
        return DGModule(self._dims, self._d, {}, check=False)

    def forget_action(self) -> "DGModule":
        if self._w is None:
            return self
        return DGModule(self._dims, self._d, check=False)

    def key(self):
        w = None if self._w is None else tuple(sorted(self._w.items()))
        return (tuple(self._dims.items()), tuple(sorted(self._d.items())), w)

    def __eq__(self, other) -> bool:
        return isinstance(other, DGModule) and self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        kind = "DGModuleW" if self.equivariant else "DGModule"
        body = ", ".join(f"{n}:{k}" for n, k in self._dims.items())
        return f"{kind}({{{body}}})"


def zero_module(equivariant: bool = False) -> DGModule:
    return DGModule({}, w={} if equivariant else None)


def concentrated(n: int, dim: int, w: Optional[QMatrix] = None,
                 equivariant: bool = False) -> DGModule:
    """``dim``-dimensional module in degree ``n`` with zero differential."""
    if w is not None:
        return DGModule({n: dim}, w={n: w})
    return DGModule({n: dim}, w={} if equivariant else None)


def sphere(n: int, ring: str = "Q") -> DGModule:
    if ring == "Q":
        return concentrated(n, 1)
    if ring == "QW":
        return concentrated(n, 2, REGULAR)
    raise ValueError(f"unknown ring {ring!r}")


def disk(n: int, ring: str = "Q") -> DGModule:
    if ring == "Q":
        return DGModule({n: 1, n - 1: 1}, {n: QMatrix.identity(1)})
    if ring == "QW":
        return DGModule({n: 2, n - 1: 2}, {n: QMatrix.identity(2)}, {n: REGULAR, n - 1: REGULAR})
    raise ValueError(f"unknown ring {ring!r}")


def regular_power(i: int, degree: int = 0) -> DGModule:
    """``QW^{⊗i}`` with the diagonal action, concentrated in one degree."""
    m = sphere(degree, "QW")
    out = m
    for _ in range(i - 1):
        out = tensor(out, m)
    return out


# ---------------------------------------------------------------------------
# chain maps

class ChainMap:
    """Degree-0 chain map; ``comps[n]`` is the matrix ``source_n -> target_n``."""

    __slots__ = ("source", "target", "_comps")

    def __init__(self, source: DGModule, target: DGModule,
                 comps: Optional[Mapping[int, QMatrix]] = None, *, check: bool = True):
        self.source = source
        self.target = target
        self._comps = {}
        for n, m in (comps or {}).items():
            if m.shape != (target.dim(n), source.dim(n)):
                raise ValidationError(
                    f"component {n} has shape {m.shape}, expected {(target.dim(n), source.dim(n))}")
            if m.rows and m.cols and not m.is_zero():
                self._comps[n] = m
        if check:
            self.validate()

    def validate(self) -> None:
        s, t = self.source, self.target
        for n in set(s.support) | {n + 1 for n in s.support}:
            if not (t.diff(n) @ self[n] == self[n - 1] @ s.diff(n)):
                raise ValidationError(f"not a chain map in degree {n}")
        if s.equivariant and t.equivariant:
            for n in self._comps:
                if not (t.inv(n) @ self._comps[n] == self._comps[n] @ s.inv(n)):
                    raise ValidationError(f"not W-equivariant in degree {n}")

    def __getitem__(self, n: int) -> QMatrix:
        m = self._comps.get(n)
        return m if m is not None else QMatrix.zero(self.target.dim(n), self.source.dim(n))

    @property
    def comps(self) -> Dict[int, QMatrix]:
        return dict(self._comps)

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.source.support) | set(self.target.support)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, ChainMap) and self.source == other.source
                and self.target == other.target and self._comps == other._comps)

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self._comps.items()))))

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r})"

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("composition of non-composable chain maps")
        return ChainMap(other.source, self.target,
                        {n: self[n] @ other[n] for n in other.source.support
                         if self.target.dim(n)}, check=False)

    def _same(self, other: "ChainMap") -> None:
        if self.source != other.source or self.target != other.target:
            raise ValueError("chain maps have different source or target")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._same(other)
        return ChainMap(self.source, self.target,
                        {n: self[n] + other[n] for n in self.source.support}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._same(other)
        return ChainMap(self.source, self.target,
                        {n: self[n] - other[n] for n in self.source.support}, check=False)

    def __neg__(self) -> "ChainMap":
        return self.scale(-1)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {n: m.scale(c) for n, m in self._comps.items()}, check=False)

    def is_zero(self) -> bool:
        return not self._comps

    def is_iso(self) -> bool:
        return all(self.source.dim(n) == self.target.dim(n) and self[n].is_invertible()
                   for n in self.degrees())

    def inverse(self) -> "ChainMap":
        return ChainMap(self.target, self.source,
                        {n: self[n].inverse() for n in self.degrees()}, check=False)

    @classmethod
    def identity(cls, m: DGModule) -> "ChainMap":
        return cls(m, m, {n: QMatrix.identity(m.dim(n)) for n in m.support}, check=False)

    @classmethod
    def zero(cls, source: DGModule, target: DGModule) -> "ChainMap":
        return cls(source, target, {}, check=False)


def is_surjection(f: ChainMap) -> bool:
    return all(f[n].rank() == f.target.dim(n) for n in f.target.support)


def is_injection(f: ChainMap) -> bool:
    return all(f[n].rank() == f.source.dim(n) for n in f.source.support)


# ---------------------------------------------------------------------------
# sub- and quotient complexes

def submodule(m: DGModule, spaces: Mapping[int, Subspace]) -> Tuple[DGModule, ChainMap]:
    """The subcomplex spanned degreewise by ``spaces`` (assumed d- and w-stable)."""
    bases = {n: spaces[n] for n in m.support if n in spaces and spaces[n].dim}
    dims = {n: s.dim for n, s in bases.items()}

    def restrict(n, mat, target_deg):
        src = bases.get(n)
        tgt = bases.get(target_deg)
        if src is None or tgt is None:
            if src is not None:
                for b in src.basis:
                    if any(mat @ b):
                        raise ValidationError("subspace is not stable")
            return None
        cols = []
        for b in src.basis:
            c = tgt.coordinates(mat @ b)
            if c is None:
                raise ValidationError("subspace is not stable")
            cols.append(c)
        return QMatrix.from_columns(cols, tgt.dim)

    d = {}
    for n in dims:
        r = restrict(n, m.diff(n), n - 1)
        if r is not None:
            d[n] = r
    w = None
    if m.equivariant:
        w = {n: restrict(n, m.inv(n), n) for n in dims}
    sub = DGModule(dims, d, w, check=False)
    inc = ChainMap(sub, m, {n: s.matrix() for n, s in bases.items()}, check=False)
    return sub, inc


@dataclass
class Cokernel:
    module: DGModule
    projection: ChainMap
    lift: Dict[int, QMatrix]

    def factor(self, g: ChainMap) -> ChainMap:
        """The map out of the quotient induced by ``g`` (which must kill the subcomplex)."""
        return ChainMap(self.module, g.target,
                        {n: g[n] @ self.lift[n] for n in self.module.support}, check=False)


def quotient_module(m: DGModule, spaces: Mapping[int, Subspace]) -> Cokernel:
    qs = {n: quotient(m.dim(n), spaces.get(n) or Subspace.zero(m.dim(n))) for n in m.support}
    dims = {n: q.dim for n, q in qs.items()}
    d = {}
    for n in m.support:
        if n - 1 in qs and dims[n] and dims[n - 1]:
            d[n] = qs[n - 1].projection @ m.diff(n) @ qs[n].lift
    w = None
    if m.equivariant:
        w = {n: qs[n].projection @ m.inv(n) @ qs[n].lift for n in m.support if dims[n]}
    q = DGModule(dims, d, w, check=False)
    proj = ChainMap(m, q, {n: qs[n].projection for n in m.support if dims[n]}, check=False)
    return Cokernel(q, proj, {n: qs[n].lift for n in m.support if dims[n]})


def kernel_of(f: ChainMap) -> Tuple[DGModule, ChainMap]:
    return submodule(f.source, {n: kernel(f[n]) for n in f.source.support})


def image_spaces(f: ChainMap) -> Dict[int, Subspace]:
    return {n: image(f[n]) for n in f.target.support}


def cokernel_of(f: ChainMap) -> Cokernel:
    return quotient_module(f.target, image_spaces(f))


# ---------------------------------------------------------------------------
# sums

@dataclass
class DirectSum:
    module: DGModule
    injections: List[ChainMap]
    projections: List[ChainMap]


def direct_sum(mods: Sequence[DGModule], equivariant: Optional[bool] = None) -> DirectSum:
    if equivariant is None:
        equivariant = any(m.equivariant for m in mods)
    degrees = sorted({n for m in mods for n in m.support})
    dims = {n: sum(m.dim(n) for m in mods) for n in degrees}
    d = {n: QMatrix.direct_sum(*(m.diff(n) for m in mods)) for n in degrees}
    w = {n: QMatrix.direct_sum(*(m.inv(n) for m in mods)) for n in degrees} if equivariant else None
    total = DGModule(dims, d, w, check=False)
    injections, projections = [], []
    offsets = {n: 0 for n in degrees}
    for m in mods:
        inj, proj = {}, {}
        for n in m.support:
            k, off = m.dim(n), offsets[n]
            inj[n] = QMatrix.from_sparse(dims[n], k, {(off + i, i): ONE for i in range(k)})
            proj[n] = QMatrix.from_sparse(k, dims[n], {(i, off + i): ONE for i in range(k)})
            offsets[n] += k
        injections.append(ChainMap(m, total, inj, check=False))
        projections.append(ChainMap(total, m, proj, check=False))
    return DirectSum(total, injections, projections)


def map_into_sum(target: DirectSum, maps: Sequence[ChainMap], source: DGModule) -> ChainMap:
    out = ChainMap.zero(source, target.module)
    for inj, f in zip(target.injections, maps):
        out = out + inj @ f
    return out


def map_from_sum(source: DirectSum, maps: Sequence[ChainMap], target: DGModule) -> ChainMap:
    out = ChainMap.zero(source.module, target)
    for proj, f in zip(source.projections, maps):
        out = out + f @ proj
    return out


def shift(m: DGModule, k: int = 1) -> DGModule:
    """Suspension: ``(Σ^k m)_n = m_{n-k}`` with differential ``(-1)^k d``."""
    sign = -1 if k % 2 else 1
    return DGModule({n + k: c for n, c in m.dims.items()},
                    {n + k: m.diff(n).scale(sign) for n in m.support},
                    None if not m.equivariant else {n + k: m.inv(n) for n in m.support},
                    check=False)


def shift_map(f: ChainMap, k: int = 1) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    {n + k: m for n, m in f.comps.items()}, check=False)


# ---------------------------------------------------------------------------
# homology

class Homology:
    """Homology of a complex with chosen cycle representatives.

    ``dims[n]`` is the dimension of ``H_n``; ``representatives(n)`` returns a
    matrix whose columns are cycles representing a basis; ``classify(n, z)``
    returns the coordinates of the class of the cycle ``z``.
    """

    def __init__(self, m: DGModule):
        self.module = m
        self._cycles: Dict[int, Subspace] = {}
        self._quot = {}
        self.dims: Dict[int, int] = {}
        for n in m.support:
            z = kernel(m.diff(n))
            b = image(m.diff(n + 1))
            bz = Subspace(z.dim, [z.coordinates(v) for v in b.basis])
            q = quotient(z.dim, bz)
            self._cycles[n] = z
            self._quot[n] = q
            if q.dim:
                self.dims[n] = q.dim
        self.involution: Optional[Dict[int, QMatrix]] = None
        if m.equivariant:
            self.involution = {}
            for n in self.dims:
                reps = self.representatives(n)
                cols = [self.classify(n, m.inv(n) @ reps.column(j)) for j in range(reps.cols)]
                self.involution[n] = QMatrix.from_columns(cols, self.dims[n])

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def is_zero(self) -> bool:
        return not self.dims

    def representatives(self, n: int) -> QMatrix:
        if n not in self._cycles:
            return QMatrix.zero(self.module.dim(n), 0)
        return self._cycles[n].matrix() @ self._quot[n].lift

    def classify(self, n: int, z: Sequence) -> Tuple[Fraction, ...]:
        if n not in self._cycles:
            return ()
        c = self._cycles[n].coordinates(z)
        if c is None:
            raise ValueError(f"vector is not a cycle in degree {n}")
        return self._quot[n].projection @ c

    def classify_many(self, n: int, zs: QMatrix) -> QMatrix:
        """Class coordinates of every column of ``zs`` as the columns of a matrix."""
        if n not in self._cycles or not zs.cols:
            return QMatrix.zero(self.dim(n), zs.cols)
        c = solve_many(self._cycles[n].matrix(), zs)
        if c is None:
            raise ValueError(f"some column is not a cycle in degree {n}")
        return self._quot[n].projection @ c

    def as_module(self) -> DGModule:
        """Homology as a complex with zero differential (carrying the induced action)."""
        return DGModule(self.dims, {}, self.involution, check=False)


def homology(m: DGModule) -> Homology:
    return Homology(m)


def induced_map(f: ChainMap, hs: Optional[Homology] = None,
                ht: Optional[Homology] = None) -> Dict[int, QMatrix]:
    hs = hs or homology(f.source)
    ht = ht or homology(f.target)
    out = {}
    for n in set(hs.dims) | set(ht.dims):
        out[n] = ht.classify_many(n, f[n] @ hs.representatives(n))
    return out


def homology_map(f: ChainMap) -> ChainMap:
    hs, ht = homology(f.source), homology(f.target)
    return ChainMap(hs.as_module(), ht.as_module(), induced_map(f, hs, ht), check=False)


def is_quasi_iso(f: ChainMap) -> bool:
    hs, ht = homology(f.source), homology(f.target)
    if hs.dims != ht.dims:
        return False
    return all(m.is_invertible() for m in induced_map(f, hs, ht).values())


def is_acyclic(m: DGModule) -> bool:
    return homology(m).is_zero()


# ---------------------------------------------------------------------------
# tensor products

def _tensor_layout(a: DGModule, b: DGModule) -> Dict[int, Dict[int, int]]:
    """For each total degree n, offsets of the blocks ``a_p ⊗ b_{n-p}`` ordered by p."""
    layout: Dict[int, Dict[int, int]] = {}
    for p in a.support:
        for q in b.support:
            layout.setdefault(p + q, {})
    for n in layout:
        off = 0
        for p in a.support:
            if b.dim(n - p):
                layout[n][p] = off
                off += a.dim(p) * b.dim(n - p)
    return layout


def tensor_index(a: DGModule, b: DGModule, layout, p: int, i: int, q: int, j: int) -> int:
    return layout[p + q][p] + i * b.dim(q) + j


def tensor(a: DGModule, b: DGModule) -> DGModule:
    """Graded tensor product with the Koszul sign ``d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy``."""
    lay = _tensor_layout(a, b)
    dims = {n: sum(a.dim(p) * b.dim(n - p) for p in blocks) for n, blocks in lay.items()}
    d = {}
    for n, blocks in lay.items():
        if not dims.get(n - 1):
            continue
        entries = {}
        for p, off in blocks.items():
            q = n - p
            ka, kb = a.dim(p), b.dim(q)
            if p - 1 in lay[n - 1]:
                off2 = lay[n - 1][p - 1]
                for r, s, v in a.diff(p).nonzero():
                    for j in range(kb):
                        entries[(off2 + r * kb + j, off + s * kb + j)] = v
            if p in lay[n - 1]:
                off2 = lay[n - 1][p]
                kb2 = b.dim(q - 1)
                sign = -1 if p % 2 else 1
                for r, s, v in b.diff(q).nonzero():
                    for i in range(ka):
                        key = (off2 + i * kb2 + r, off + i * kb + s)
                        entries[key] = entries.get(key, ZERO) + sign * v
        d[n] = QMatrix.from_sparse(dims[n - 1], dims[n], entries)
    w = None
    if a.equivariant or b.equivariant:
        w = {}
        for n, blocks in lay.items():
            w[n] = QMatrix.direct_sum(*(a.inv(p).kron(b.inv(n - p)) for p in blocks))
    return DGModule(dims, d, w, check=False)


def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    src, tgt = tensor(f.source, g.source), tensor(f.target, g.target)
    ls, lt = _tensor_layout(f.source, g.source), _tensor_layout(f.target, g.target)
    comps = {}
    for n, blocks in ls.items():
        if not tgt.dim(n):
            continue
        entries = {}
        for p, off in blocks.items():
            q = n - p
            if p not in lt.get(n, {}):
                continue
            off2 = lt[n][p]
            kq_s, kq_t = g.source.dim(q), g.target.dim(q)
            gq = list(g[q].nonzero())
            for r, s, v in f[p].nonzero():
                for r2, s2, v2 in gq:
                    entries[(off2 + r * kq_t + r2, off + s * kq_s + s2)] = v * v2
        comps[n] = QMatrix.from_sparse(tgt.dim(n), src.dim(n), entries)
    return ChainMap(src, tgt, comps, check=False)


def symmetry(a: DGModule, b: DGModule) -> ChainMap:
    """``x ⊗ y ↦ (-1)^{|x||y|} y ⊗ x``."""
    src, tgt = tensor(a, b), tensor(b, a)
    ls, lt = _tensor_layout(a, b), _tensor_layout(b, a)
    comps = {}
    for n, blocks in ls.items():
        entries = {}
        for p, off in blocks.items():
            q = n - p
            sign = -1 if (p * q) % 2 else 1
            off2 = lt[n][q]
            for i in range(a.dim(p)):
                for j in range(b.dim(q)):
                    entries[(off2 + j * a.dim(p) + i, off + i * b.dim(q) + j)] = Fraction(sign)
        comps[n] = QMatrix.from_sparse(tgt.dim(n), src.dim(n), entries)
    return ChainMap(src, tgt, comps, check=False)


def associator(a: DGModule, b: DGModule, c: DGModule) -> ChainMap:
    """``(x ⊗ y) ⊗ z ↦ x ⊗ (y ⊗ z)`` (no signs)."""
    ab, bc = tensor(a, b), tensor(b, c)
    src, tgt = tensor(ab, c), tensor(a, bc)
    l_ab, l_bc = _tensor_layout(a, b), _tensor_layout(b, c)
    l_src, l_tgt = _tensor_layout(ab, c), _tensor_layout(a, bc)
    comps: Dict[int, Dict] = {}
    for p in a.support:
        for q in b.support:
            for r in c.support:
                n = p + q + r
                entries = comps.setdefault(n, {})
                for i in range(a.dim(p)):
                    for j in range(b.dim(q)):
                        x_ab = tensor_index(a, b, l_ab, p, i, q, j)
                        x_bc0 = l_bc[q + r][q] + j * c.dim(r)
                        for k in range(c.dim(r)):
                            s = tensor_index(ab, c, l_src, p + q, x_ab, r, k)
                            t = tensor_index(a, bc, l_tgt, p, i, q + r, x_bc0 + k)
                            entries[(t, s)] = ONE
    return ChainMap(src, tgt, {n: QMatrix.from_sparse(tgt.dim(n), src.dim(n), e)
                               for n, e in comps.items()}, check=False)


def left_unitor(m: DGModule) -> ChainMap:
    """``S^0 ⊗ m → m``."""
    src = tensor(sphere(0), m)
    return ChainMap(src, m, {n: QMatrix.identity(m.dim(n)) for n in m.support}, check=False)


def right_unitor(m: DGModule) -> ChainMap:
    src = tensor(m, sphere(0))
    return ChainMap(src, m, {n: QMatrix.identity(m.dim(n)) for n in m.support}, check=False)


# ---------------------------------------------------------------------------
# hom complexes

def _hom_layout(a: DGModule, b: DGModule) -> Dict[int, Dict[int, int]]:
    """For each degree n, offsets of the blocks ``Hom(a_k, b_{k+n})`` ordered by k."""
    layout: Dict[int, Dict[int, int]] = {}
    degs = sorted({m - k for k in a.support for m in b.support})
    for n in degs:
        off = 0
        blocks = {}
        for k in a.support:
            if b.dim(k + n):
                blocks[k] = off
                off += b.dim(k + n) * a.dim(k)
        layout[n] = blocks
    return layout


def _lxr(entries: dict, left: Optional[QMatrix], right: Optional[QMatrix], r: int, c: int,
         in_off: int, out_off: int, out_cols: int, sign=1) -> None:
    """Accumulate the matrix of ``X ↦ sign * L X R`` on row-major vectors."""
    lnz = [(i, i, ONE) for i in range(r)] if left is None else list(left.nonzero())
    rnz = [(j, j, ONE) for j in range(c)] if right is None else list(right.nonzero())
    for i, p, x in lnz:
        for q, j, y in rnz:
            key = (out_off + i * out_cols + j, in_off + p * c + q)
            v = entries.get(key, ZERO) + sign * x * y
            if v:
                entries[key] = v
            else:
                entries.pop(key, None)


def hom_complex(a: DGModule, b: DGModule) -> DGModule:
    """``Hom^n = ∏_k Hom(a_k, b_{k+n})`` with ``δf = d∘f - (-1)^n f∘d``.

    A degree-n element is stored as the concatenation over k (ascending) of the
    row-major entries of ``f_k : a_k → b_{k+n}``.  When either side carries a
    W-action the result carries the conjugation action ``f ↦ w f w``.
    """
    lay = _hom_layout(a, b)
    dims = {n: sum(b.dim(k + n) * a.dim(k) for k in blocks) for n, blocks in lay.items()}
    d = {}
    for n, blocks in lay.items():
        if not dims.get(n - 1):
            continue
        entries: dict = {}
        tgt = lay[n - 1]
        sign = -1 if n % 2 == 0 else 1  # -(-1)^n
        for k, off in blocks.items():
            r, c = b.dim(k + n), a.dim(k)
            if k in tgt:
                _lxr(entries, b.diff(k + n), None, r, c, off, tgt[k], c)
            if k + 1 in tgt:
                _lxr(entries, None, a.diff(k + 1), r, c, off, tgt[k + 1], a.dim(k + 1), sign)
        d[n] = QMatrix.from_sparse(dims[n - 1], dims[n], entries)
    w = None
    if a.equivariant or b.equivariant:
        w = {}
        for n, blocks in lay.items():
            entries = {}
            for k, off in blocks.items():
                r, c = b.dim(k + n), a.dim(k)
                _lxr(entries, b.inv(k + n), a.inv(k), r, c, off, off, c)
            w[n] = QMatrix.from_sparse(dims[n], dims[n], entries)
    return DGModule(dims, d, w, check=False)


def hom_vector(a: DGModule, b: DGModule, maps: Mapping[int, QMatrix], n: int = 0):
    """Flatten a family ``{k: a_k → b_{k+n}}`` into a degree-n element of ``hom_complex``."""
    lay = _hom_layout(a, b).get(n, {})
    size = sum(b.dim(k + n) * a.dim(k) for k in lay)
    out = [ZERO] * size
    for k, off in lay.items():
        m = maps.get(k)
        if m is None:
            continue
        for i, j, v in m.nonzero():
            out[off + i * a.dim(k) + j] = v
    return tuple(out)


def hom_unvector(a: DGModule, b: DGModule, vec: Sequence, n: int = 0) -> Dict[int, QMatrix]:
    lay = _hom_layout(a, b).get(n, {})
    out = {}
    for k, off in lay.items():
        r, c = b.dim(k + n), a.dim(k)
        out[k] = QMatrix([[vec[off + i * c + j] for j in range(c)] for i in range(r)], r, c)
    return out


def postcompose(s: ChainMap, a: DGModule) -> ChainMap:
    """``Hom(a, X) → Hom(a, Y)``, ``f ↦ s ∘ f`` for a chain map ``s: X → Y``."""
    src, tgt = hom_complex(a, s.source), hom_complex(a, s.target)
    ls, lt = _hom_layout(a, s.source), _hom_layout(a, s.target)
    comps = {}
    for n, blocks in ls.items():
        if not tgt.dim(n):
            continue
        entries: dict = {}
        for k, off in blocks.items():
            if k in lt.get(n, {}):
                _lxr(entries, s[k + n], None, s.source.dim(k + n), a.dim(k), off,
                     lt[n][k], a.dim(k))
        comps[n] = QMatrix.from_sparse(tgt.dim(n), src.dim(n), entries)
    return ChainMap(src, tgt, comps, check=False)


def precompose(s: ChainMap, b: DGModule) -> ChainMap:
    """``Hom(Y, b) → Hom(X, b)``, ``f ↦ f ∘ s`` for a chain map ``s: X → Y``."""
    src, tgt = hom_complex(s.target, b), hom_complex(s.source, b)
    ls, lt = _hom_layout(s.target, b), _hom_layout(s.source, b)
    comps = {}
    for n, blocks in ls.items():
        if not tgt.dim(n):
            continue
        entries: dict = {}
        for k, off in blocks.items():
            if k in lt.get(n, {}):
                _lxr(entries, None, s[k], b.dim(k + n), s.target.dim(k), off,
                     lt[n][k], s.source.dim(k))
        comps[n] = QMatrix.from_sparse(tgt.dim(n), src.dim(n), entries)
    return ChainMap(src, tgt, comps, check=False)


# ---------------------------------------------------------------------------
# fixed points

def fixed_spaces(m: DGModule) -> Dict[int, Subspace]:
    return {n: kernel(m.inv(n) - QMatrix.identity(m.dim(n))) for n in m.support}


@lru_cache(maxsize=512)
def fixed_points_inclusion(m: DGModule) -> ChainMap:
    """Inclusion of the W-fixed subcomplex; the source is a plain dg Q-module."""
    if not m.equivariant:
        return ChainMap.identity(m)
    sub, inc = submodule(m, fixed_spaces(m))
    sub = sub.forget_action()
    return ChainMap(sub, m, inc.comps, check=False)


def fixed_points(m: DGModule) -> DGModule:
    return fixed_points_inclusion(m).source


# ---------------------------------------------------------------------------
# spaces of chain maps

class MapSpace:
    """Basis of the degree-0 chain maps ``a → b`` (W-equivariant when both carry actions)."""

    def __init__(self, a: DGModule, b: DGModule, equivariant: Optional[bool] = None):
        self.source, self.target = a, b
        if equivariant is None:
            equivariant = a.equivariant and b.equivariant
        sys_ = MatrixSystem()
        degs = [n for n in a.support if b.dim(n)]
        for n in degs:
            sys_.unknown(n, b.dim(n), a.dim(n))
        for n in sorted(set(degs) | {n + 1 for n in degs}):
            terms = []
            if n in sys_.blocks:
                terms.append((b.diff(n), n, None, 1))
            if n - 1 in sys_.blocks:
                terms.append((None, n - 1, a.diff(n), -1))
            if terms:
                sys_.equation(terms, (b.dim(n - 1), a.dim(n)))
        if equivariant:
            for n in degs:
                sys_.equation([(b.inv(n), n, None, 1), (None, n, a.inv(n), -1)],
                              (b.dim(n), a.dim(n)))
        self._system = sys_
        self._free, basis = sys_.kernel_sparse()
        self.basis = [ChainMap(a, b, sys_.unpack(v), check=False) for v in basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f: ChainMap) -> Tuple[Fraction, ...]:
        flat = {}
        for n, (r, c, off) in self._system.blocks.items():
            for i, j, v in f[n].nonzero():
                flat[off + i * c + j] = v
        return tuple(flat.get(j, ZERO) for j in self._free)

    def element(self, coeffs: Sequence) -> ChainMap:
        out = ChainMap.zero(self.source, self.target)
        for c, f in zip(coeffs, self.basis):
            c = rational(c)
            if c:
                out = out + f.scale(c)
        return out


def chain_maps(a: DGModule, b: DGModule) -> MapSpace:
    return MapSpace(a, b)


# ---------------------------------------------------------------------------
# cones and cylinders

def mapping_cone(f: ChainMap) -> DGModule:
    """``cone(f)_n = b_n ⊕ a_{n-1}`` with ``d(y, x) = (dy + f x, -dx)``."""
    a, b = f.source, f.target
    degs = sorted(set(b.support) | {n + 1 for n in a.support})
    dims = {n: b.dim(n) + a.dim(n - 1) for n in degs}
    d = {}
    for n in degs:
        d[n] = QMatrix.block([[b.diff(n), f[n - 1]],
                              [QMatrix.zero(a.dim(n - 2), b.dim(n)), -a.diff(n - 1)]])
    w = None
    if a.equivariant or b.equivariant:
        w = {n: QMatrix.direct_sum(b.inv(n), a.inv(n - 1)) for n in degs}
    return DGModule(dims, d, w, check=False)


@dataclass
class Cylinder:
    module: DGModule
    j: ChainMap
    p: ChainMap


def mapping_cylinder(f: ChainMap) -> Cylinder:
    """Factor ``f = p ∘ j`` with ``j`` split injective and ``p`` a quasi-isomorphism.

    ``Cyl_n = a_n ⊕ a_{n-1} ⊕ b_n`` with ``d(x, x', y) = (dx + x', -dx', dy - f x')``.
    """
    a, b = f.source, f.target
    degs = sorted(set(a.support) | {n + 1 for n in a.support} | set(b.support))
    dims = {n: a.dim(n) + a.dim(n - 1) + b.dim(n) for n in degs}
    d = {}
    for n in degs:
        A0, A1, B0 = a.dim(n), a.dim(n - 1), b.dim(n)
        T0, T1, TB = a.dim(n - 1), a.dim(n - 2), b.dim(n - 1)
        d[n] = QMatrix.block([
            [a.diff(n), QMatrix.identity(A1), QMatrix.zero(T0, B0)],
            [QMatrix.zero(T1, A0), -a.diff(n - 1), QMatrix.zero(T1, B0)],
            [QMatrix.zero(TB, A0), -f[n - 1], b.diff(n)],
        ])
    w = None
    if a.equivariant or b.equivariant:
        w = {n: QMatrix.direct_sum(a.inv(n), a.inv(n - 1), b.inv(n)) for n in degs}
    cyl = DGModule(dims, d, w, check=False)
    j = ChainMap(a, cyl, {n: QMatrix.vstack([QMatrix.identity(a.dim(n)),
                                             QMatrix.zero(a.dim(n - 1) + b.dim(n), a.dim(n))])
                          for n in a.support}, check=False)
    p = ChainMap(cyl, b, {n: QMatrix.hstack([f[n], QMatrix.zero(b.dim(n), a.dim(n - 1)),
                                             QMatrix.identity(b.dim(n))])
                          for n in degs if b.dim(n)}, check=False)
    return Cylinder(cyl, j, p)


# ---------------------------------------------------------------------------
# generating (acyclic) cofibrations and lifting

@dataclass
class GeneratorSet:
    """Generating cofibrations ``S^{n-1} → D^n`` and acyclic cofibrations ``0 → D^n``."""
    ring: str
    cofibrations: List[ChainMap] = field(default_factory=list)
    acyclic: List[ChainMap] = field(default_factory=list)

    def __iter__(self):
        for f in self.cofibrations:
            yield "cofibration", f
        for f in self.acyclic:
            yield "acyclic cofibration", f


def sphere_to_disk(n: int, ring: str = "Q") -> ChainMap:
    s, dsk = sphere(n - 1, ring), disk(n, ring)
    return ChainMap(s, dsk, {n - 1: QMatrix.identity(s.dim(n - 1))}, check=False)


def zero_to_disk(n: int, ring: str = "Q") -> ChainMap:
    dsk = disk(n, ring)
    return ChainMap(zero_module(ring == "QW"), dsk, {}, check=False)


def generators(min_deg: int, max_deg: int, ring: str = "Q") -> GeneratorSet:
    if min_deg > max_deg:
        raise ValueError("empty degree range")
    gens = GeneratorSet(ring)
    for n in range(min_deg, max_deg + 1):
        gens.cofibrations.append(sphere_to_disk(n, ring))
        gens.acyclic.append(zero_to_disk(n, ring))
    return gens


class NonCommutingSquare(ValueError):
    pass


def llp_solve(i: ChainMap, p: ChainMap, top: ChainMap, bottom: ChainMap) -> Optional[ChainMap]:
    """Fill the square ``top: A → X``, ``bottom: B → Y`` with ``h: B → X``.

    Returns ``h`` with ``h ∘ i = top`` and ``p ∘ h = bottom``, or None when
    the (finite) linear system has no solution.
    """
    if p @ top != bottom @ i:
        raise NonCommutingSquare("square does not commute: p∘top != bottom∘i")
    B, X = i.target, p.source
    sys_ = MatrixSystem()
    degs = [n for n in B.support if X.dim(n)]
    for n in degs:
        sys_.unknown(n, X.dim(n), B.dim(n))
    for n in sorted(set(degs) | {n + 1 for n in degs}):
        terms = []
        if n in sys_.blocks:
            terms.append((X.diff(n), n, None, 1))
        if n - 1 in sys_.blocks:
            terms.append((None, n - 1, B.diff(n), -1))
        if terms:
            sys_.equation(terms, (X.dim(n - 1), B.dim(n)))
    if B.equivariant and X.equivariant:
        for n in degs:
            sys_.equation([(X.inv(n), n, None, 1), (None, n, B.inv(n), -1)], (X.dim(n), B.dim(n)))
    for n in set(i.source.support) | set(B.support):
        if n in sys_.blocks:
            sys_.equation([(None, n, i[n], 1)], (X.dim(n), i.source.dim(n)), top[n])
        elif not top[n].is_zero():
            return None
        if n in sys_.blocks:
            sys_.equation([(p[n], n, None, 1)], (p.target.dim(n), B.dim(n)), bottom[n])
        elif not bottom[n].is_zero():
            return None
    sol = sys_.solve()
    if sol is None:
        return None
    return ChainMap(B, X, sol, check=False)
