"""Objects and morphisms of the dihedral model in eventually-constant form.

An object stores explicit stalks ``V_1 .. V_N`` (dg QW-modules), a single
``tail`` module standing for every stalk beyond the window, the component
``infinity`` at the limit point (a dg Q-module), and the structure map
``sigma: infinity → tail``.  For such families the germ module is the tail,
so ``sigma`` is an honest chain map whose image must be W-fixed.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence

from .. import dg
from ..dg import ChainMap, DGModule, ValidationError


def _as_w(m: DGModule) -> DGModule:
    return m.with_trivial_action()


class DihedralObject:
    __slots__ = ("stalks", "tail", "infinity", "sigma", "_hash")

    def __init__(self, stalks: Sequence[DGModule], tail: DGModule, infinity: DGModule,
                 sigma: Optional[ChainMap] = None, *, check: bool = True):
        self.stalks = tuple(_as_w(s) for s in stalks)
        self.tail = _as_w(tail)
        self.infinity = infinity.forget_action()
        if sigma is None:
            sigma = ChainMap.zero(self.infinity, self.tail)
        elif sigma.source != self.infinity or sigma.target != self.tail:
            sigma = ChainMap(self.infinity, self.tail, sigma.comps, check=check)
        self.sigma = sigma
        self._hash = None
        if check:
            self.validate()

    def validate(self) -> None:
        for k, s in enumerate(self.stalks, 1):
            s.validate()
        self.tail.validate()
        self.infinity.validate()
        self.sigma.validate()
        for n, m in self.sigma.comps.items():
            if not (self.tail.inv(n) @ m == m):
                raise ValidationError(f"sigma does not land in the W-fixed points (degree {n})")

    @property
    def window(self) -> int:
        return len(self.stalks)

    def stalk(self, k: int) -> DGModule:
        if k < 1:
            raise ValueError("stalks are indexed from 1")
        return self.stalks[k - 1] if k <= self.window else self.tail

    def components(self, window: Optional[int] = None):
        """Yield ``(label, module)`` for stalks ``1..window``, ``"tail"`` and ``"inf"``."""
        window = self.window if window is None else window
        for k in range(1, window + 1):
            yield k, self.stalk(k)
        yield "tail", self.tail
        yield "inf", self.infinity

    def normalize(self) -> "DihedralObject":
        stalks = list(self.stalks)
        while stalks and stalks[-1] == self.tail:
            stalks.pop()
        if len(stalks) == self.window:
            return self
        return DihedralObject(stalks, self.tail, self.infinity, self.sigma, check=False)

    def widen(self, window: int) -> "DihedralObject":
        """Same object with explicit stalks up to ``window``."""
        if window <= self.window:
            return self
        stalks = list(self.stalks) + [self.tail] * (window - self.window)
        return DihedralObject(stalks, self.tail, self.infinity, self.sigma, check=False)

    def is_zero(self) -> bool:
        return (self.tail.is_zero() and self.infinity.is_zero()
                and all(s.is_zero() for s in self.stalks))

    def has_zero_differential(self) -> bool:
        return all(m.has_zero_differential() for _, m in self.components())

    def key(self):
        n = self.normalize()
        return (n.stalks, n.tail, n.infinity, tuple(sorted(n.sigma.comps.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, DihedralObject) and self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        st = ", ".join(repr(s.dims) for s in self.stalks)
        return (f"DihedralObject(window={self.window}, stalks=[{st}], tail={self.tail.dims}, "
                f"inf={self.infinity.dims})")


class DihedralMorphism:
    """A map of the dihedral model.

    ``stalks[k-1]`` is the map at stalk ``k`` for ``k <= window``; beyond the
    window the map is ``tail``.  The germ condition
    ``target.sigma ∘ infinity = tail ∘ source.sigma`` is checked on construction.
    """

    __slots__ = ("source", "target", "infinity", "stalks", "tail")

    def __init__(self, source: DihedralObject, target: DihedralObject, infinity: ChainMap,
                 stalks: Sequence[ChainMap], tail: ChainMap, *, check: bool = True):
        self.source, self.target = source, target
        self.infinity = infinity
        self.stalks = tuple(stalks)
        self.tail = tail
        if self.window < max(source.window, target.window):
            raise ValidationError("morphism window smaller than the windows of its ends")
        if check:
            self.validate()

    @property
    def window(self) -> int:
        return len(self.stalks)

    def stalk(self, k: int) -> ChainMap:
        return self.stalks[k - 1] if k <= self.window else self.tail

    def component(self, label) -> ChainMap:
        if label == "inf":
            return self.infinity
        if label == "tail":
            return self.tail
        return self.stalk(label)

    def labels(self, window: Optional[int] = None):
        window = self.window if window is None else window
        return list(range(1, window + 1)) + ["tail", "inf"]

    def validate(self) -> None:
        s, t = self.source, self.target
        for lab in self.labels():
            f = self.component(lab)
            src = s.infinity if lab == "inf" else (s.tail if lab == "tail" else s.stalk(lab))
            tgt = t.infinity if lab == "inf" else (t.tail if lab == "tail" else t.stalk(lab))
            if f.source != src or f.target != tgt:
                raise ValidationError(f"component {lab} has the wrong source or target")
            f.validate()
        if t.sigma @ self.infinity != self.tail @ s.sigma:
            raise ValidationError("germ condition fails: sigma ∘ f_inf != f_tail ∘ sigma")

    def widen(self, window: int) -> "DihedralMorphism":
        if window <= self.window:
            return self
        stalks = list(self.stalks) + [self.tail] * (window - self.window)
        return DihedralMorphism(self.source, self.target, self.infinity, stalks, self.tail,
                                check=False)

    def __matmul__(self, other: "DihedralMorphism") -> "DihedralMorphism":
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("morphisms are not composable")
        w = max(self.window, other.window)
        return DihedralMorphism(other.source, self.target, self.infinity @ other.infinity,
                                [self.stalk(k) @ other.stalk(k) for k in range(1, w + 1)],
                                self.tail @ other.tail, check=False)

    def _zip(self, other, op) -> "DihedralMorphism":
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphisms have different ends")
        w = max(self.window, other.window)
        return DihedralMorphism(self.source, self.target, op(self.infinity, other.infinity),
                                [op(self.stalk(k), other.stalk(k)) for k in range(1, w + 1)],
                                op(self.tail, other.tail), check=False)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def scale(self, c) -> "DihedralMorphism":
        return DihedralMorphism(self.source, self.target, self.infinity.scale(c),
                                [f.scale(c) for f in self.stalks], self.tail.scale(c),
                                check=False)

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DihedralMorphism):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        w = max(self.window, other.window)
        return (self.infinity == other.infinity and self.tail == other.tail
                and all(self.stalk(k) == other.stalk(k) for k in range(1, w + 1)))

    def __hash__(self):
        return hash((self.source, self.target))

    def __repr__(self) -> str:
        return f"DihedralMorphism(window={self.window}: {self.source!r} -> {self.target!r})"

    def is_zero(self) -> bool:
        return all(self.component(l).is_zero() for l in self.labels())

    def is_iso(self) -> bool:
        return all(self.component(l).is_iso() for l in self.labels())

    def inverse(self) -> "DihedralMorphism":
        return DihedralMorphism(self.target, self.source, self.infinity.inverse(),
                                [f.inverse() for f in self.stalks], self.tail.inverse(),
                                check=False)

    @classmethod
    def identity(cls, v: DihedralObject) -> "DihedralMorphism":
        return cls(v, v, ChainMap.identity(v.infinity),
                   [ChainMap.identity(s) for s in v.stalks], ChainMap.identity(v.tail),
                   check=False)

    @classmethod
    def zero(cls, source: DihedralObject, target: DihedralObject,
             window: Optional[int] = None) -> "DihedralMorphism":
        w = max(source.window, target.window, window or 0)
        return cls(source, target, ChainMap.zero(source.infinity, target.infinity),
                   [ChainMap.zero(source.stalk(k), target.stalk(k)) for k in range(1, w + 1)],
                   ChainMap.zero(source.tail, target.tail), check=False)

    @classmethod
    def from_components(cls, source: DihedralObject, target: DihedralObject,
                        comps: Dict, window: Optional[int] = None, *,
                        check: bool = True) -> "DihedralMorphism":
        """Assemble from ``{label: ChainMap}``; missing components are zero."""
        w = max(source.window, target.window, window or 0,
                max((l for l in comps if isinstance(l, int)), default=0))

        def get(label, s, t):
            f = comps.get(label)
            if f is None:
                return ChainMap.zero(s, t)
            if f.source != s or f.target != t:
                f = ChainMap(s, t, f.comps, check=False)
            return f

        return cls(source, target, get("inf", source.infinity, target.infinity),
                   [get(k, source.stalk(k), target.stalk(k)) for k in range(1, w + 1)],
                   get("tail", source.tail, target.tail), check=check)


# ---------------------------------------------------------------------------
# the functors c, i_k, i_inf and the projections p_k, p_inf

def zero_object() -> DihedralObject:
    return DihedralObject([], dg.zero_module(True), dg.zero_module())


def constant(m: DGModule) -> DihedralObject:
    """``cM``: every stalk and the point at infinity equal ``M``; sigma the identity."""
    plain = m.forget_action()
    return DihedralObject([], plain.with_trivial_action(), plain, ChainMap.identity(plain))


def at_stalk(k: int, r: DGModule) -> DihedralObject:
    """``i_k R``: ``R`` at stalk ``k``, zero elsewhere."""
    if k < 1:
        raise ValueError("stalk index must be at least 1")
    z = dg.zero_module(True)
    return DihedralObject([z] * (k - 1) + [r.with_trivial_action()], z, dg.zero_module())


def at_infinity(m: DGModule) -> DihedralObject:
    """``i_inf M``: ``M`` at infinity, every stalk zero."""
    return DihedralObject([], dg.zero_module(True), m)


def project(label, v: DihedralObject) -> DGModule:
    """``p_k V = V_k`` (the tail beyond the window) or ``p_inf V = V_inf``."""
    if label in ("inf", "infinity"):
        return v.infinity
    return v.stalk(label)


def constant_map(f: ChainMap) -> DihedralMorphism:
    a, b = constant(f.source), constant(f.target)
    g = ChainMap(a.infinity, b.infinity, f.comps, check=False)
    gt = ChainMap(a.tail, b.tail, f.comps, check=False)
    return DihedralMorphism(a, b, g, [], gt)


def at_stalk_map(k: int, f: ChainMap) -> DihedralMorphism:
    a, b = at_stalk(k, f.source), at_stalk(k, f.target)
    return DihedralMorphism.from_components(a, b, {k: f})


def at_infinity_map(f: ChainMap) -> DihedralMorphism:
    return DihedralMorphism.from_components(at_infinity(f.source), at_infinity(f.target),
                                            {"inf": f})


def shift(v: DihedralObject, k: int = 1) -> DihedralObject:
    return DihedralObject([dg.shift(s, k) for s in v.stalks], dg.shift(v.tail, k),
                          dg.shift(v.infinity, k), dg.shift_map(v.sigma, k), check=False)
