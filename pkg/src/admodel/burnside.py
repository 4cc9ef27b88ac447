"""The rational Burnside ring of O(2) as locally constant functions.

A function on the space of conjugacy classes of subgroups with finite Weyl
group is determined by its value at SO(2) (an isolated point), its values
at the dihedral classes ``D_2, D_4, ...`` and its value at the limit point
O(2), which every sufficiently large dihedral class shares.  Index ``k`` is
the class of ``D_{2k}``, matching stalk ``k`` of the dihedral model.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Tuple

from . import dg
from .dg import ChainMap
from .linalg import QMatrix, format_rational, rational
from .model.objects import DihedralMorphism, DihedralObject, constant


class BurnsideElement:
    __slots__ = ("so2", "window", "limit")

    def __init__(self, so2=0, window: Iterable = (), limit=0):
        window = [rational(x) for x in window]
        limit = rational(limit)
        while window and window[-1] == limit:
            window.pop()
        self.so2: Fraction = rational(so2)
        self.window: Tuple[Fraction, ...] = tuple(window)
        self.limit: Fraction = limit

    def at(self, k: int) -> Fraction:
        """Value at the class of ``D_{2k}``."""
        if k < 1:
            raise ValueError("dihedral index starts at 1")
        return self.window[k - 1] if k <= len(self.window) else self.limit

    def _pointwise(self, other: "BurnsideElement", op) -> "BurnsideElement":
        n = max(len(self.window), len(other.window))
        return BurnsideElement(op(self.so2, other.so2),
                               [op(self.at(k), other.at(k)) for k in range(1, n + 1)],
                               op(self.limit, other.limit))

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self._pointwise(other, lambda x, y: x + y)

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self._pointwise(other, lambda x, y: x - y)

    def __mul__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self._pointwise(other, lambda x, y: x * y)

    def __neg__(self) -> "BurnsideElement":
        return self.scale(-1)

    def scale(self, c) -> "BurnsideElement":
        c = rational(c)
        return BurnsideElement(c * self.so2, [c * x for x in self.window], c * self.limit)

    def __eq__(self, other) -> bool:
        return (isinstance(other, BurnsideElement) and self.so2 == other.so2
                and self.window == other.window and self.limit == other.limit)

    def __hash__(self) -> int:
        return hash((self.so2, self.window, self.limit))

    def __repr__(self) -> str:
        w = ", ".join(format_rational(x) for x in self.window)
        return (f"BurnsideElement(so2={format_rational(self.so2)}, window=[{w}], "
                f"limit={format_rational(self.limit)})")

    def is_idempotent(self) -> bool:
        return self * self == self

    def decompose(self) -> Tuple[Fraction, Fraction, Dict[int, Fraction]]:
        """Coefficients in the basis ``e_C, e_D, e_1, e_2, ...``."""
        dihedral = {k: x - self.limit for k, x in enumerate(self.window, 1) if x != self.limit}
        return self.so2, self.limit, dihedral

    @classmethod
    def compose(cls, c: Fraction, d: Fraction, dihedral: Dict[int, Fraction]
                ) -> "BurnsideElement":
        out = e_C().scale(c) + e_D().scale(d)
        for k, x in dihedral.items():
            out = out + e(k).scale(x)
        return out

    def pretty(self) -> str:
        """Two rows: SO(2) above, then O(2) followed by the dihedral classes from large to small."""
        n = max(len(self.window), 1)
        cols = [("O(2)", self.limit), ("...", None)]
        cols += [(f"D_{2 * k}", self.at(k)) for k in range(n, 0, -1)]
        width = max(max(len(lbl), len(format_rational(v)) if v is not None else 0)
                    for lbl, v in cols + [("SO(2)", self.so2)])
        cell = lambda s: s.rjust(width)
        top = cell("SO(2)") + "\n" + cell(format_rational(self.so2))
        labels = " ".join(cell(lbl) for lbl, _ in cols)
        values = " ".join(cell(format_rational(v) if v is not None else "...") for _, v in cols)
        return f"{top}\n\n{labels}\n{values}"


def one() -> BurnsideElement:
    return BurnsideElement(1, (), 1)


def zero() -> BurnsideElement:
    return BurnsideElement(0, (), 0)


def e_C() -> BurnsideElement:
    return BurnsideElement(1, (), 0)


def e_D() -> BurnsideElement:
    return one() - e_C()


def e(k: int) -> BurnsideElement:
    """Characteristic function of the class of ``D_{2k}``."""
    if k < 1:
        raise ValueError("e_k needs k >= 1")
    return BurnsideElement(0, [0] * (k - 1) + [1], 0)


def f(n: int) -> BurnsideElement:
    """``e_D - (e_1 + ... + e_n)``."""
    if n < 1:
        raise ValueError("f_n needs n >= 1")
    out = e_D()
    for k in range(1, n + 1):
        out = out - e(k)
    return out


def idempotent(name: str, n: int = 0) -> BurnsideElement:
    if name in ("e_C", "eC"):
        return e_C()
    if name in ("e_D", "eD"):
        return e_D()
    if name in ("e_n", "e"):
        return e(n)
    if name in ("f_n", "f"):
        return f(n)
    raise ValueError(f"unknown idempotent {name!r}")


# ---------------------------------------------------------------------------
# endomorphisms of the unit

class NotDihedral(ValueError):
    """The element has an SO(2) component, which the dihedral model cannot see."""


@lru_cache(maxsize=None)
def unit_object() -> DihedralObject:
    return constant(dg.sphere(0))


def to_endomorphism(x: BurnsideElement, window: int = 0) -> DihedralMorphism:
    if x.so2 != 0:
        raise NotDihedral("only e_D times the Burnside ring acts on cQ")
    u = unit_object()
    K = max(window, len(x.window))

    def scalar(c, m):
        return ChainMap(m, m, {0: QMatrix.scalar(1, c)}, check=False)

    stalks = [scalar(x.at(k), u.stalk(k)) for k in range(1, K + 1)]
    # scalars on every component satisfy the germ condition by construction
    return DihedralMorphism(u, u, scalar(x.limit, u.infinity), stalks,
                            scalar(x.limit, u.tail), check=False)


def from_endomorphism(g: DihedralMorphism) -> BurnsideElement:
    u = unit_object()
    if g.source != u or g.target != u:
        raise ValueError("expected an endomorphism of cQ")

    def value(m: ChainMap) -> Fraction:
        return m[0][0, 0]

    limit = value(g.infinity)
    if value(g.tail) != limit:
        raise ValueError("germ condition fails: tail and infinity scalars differ")
    return BurnsideElement(0, [value(g.stalk(k)) for k in range(1, g.window + 1)], limit)


def random_element(rng, max_window: int = 6, so2: bool = True) -> BurnsideElement:
    from .samples import rational as rand_q
    n = rng.randint(0, max_window)
    return BurnsideElement(rand_q(rng) if so2 else 0, [rand_q(rng) for _ in range(n)],
                           rand_q(rng))
