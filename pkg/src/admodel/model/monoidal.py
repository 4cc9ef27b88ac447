"""Stalkwise tensor product and the coherence isomorphisms."""

from __future__ import annotations

from .. import dg
from ..dg import ChainMap, DGModule
from .objects import DihedralMorphism, DihedralObject, constant


def tensor(a: DihedralObject, b: DihedralObject) -> DihedralObject:
    w = max(a.window, b.window)
    stalks = [dg.tensor(a.stalk(k), b.stalk(k)) for k in range(1, w + 1)]
    tail = dg.tensor(a.tail, b.tail)
    inf = dg.tensor(a.infinity, b.infinity)
    sigma = ChainMap(inf, tail, dg.tensor_maps(a.sigma, b.sigma).comps, check=False)
    return DihedralObject(stalks, tail, inf, sigma, check=False)


def _retarget(f: ChainMap, source: DGModule, target: DGModule) -> ChainMap:
    return ChainMap(source, target, f.comps, check=False)


def tensor_map(f: DihedralMorphism, g: DihedralMorphism) -> DihedralMorphism:
    src, tgt = tensor(f.source, g.source), tensor(f.target, g.target)
    w = max(f.window, g.window)
    stalks = [_retarget(dg.tensor_maps(f.stalk(k), g.stalk(k)), src.stalk(k), tgt.stalk(k))
              for k in range(1, w + 1)]
    return DihedralMorphism(src, tgt,
                            _retarget(dg.tensor_maps(f.infinity, g.infinity), src.infinity,
                                      tgt.infinity),
                            stalks,
                            _retarget(dg.tensor_maps(f.tail, g.tail), src.tail, tgt.tail),
                            check=False)


def _componentwise(source: DihedralObject, target: DihedralObject, build) -> DihedralMorphism:
    """Assemble a morphism from a dg-level construction applied to each component."""
    w = max(source.window, target.window)
    return DihedralMorphism(
        source, target,
        _retarget(build("inf"), source.infinity, target.infinity),
        [_retarget(build(k), source.stalk(k), target.stalk(k)) for k in range(1, w + 1)],
        _retarget(build("tail"), source.tail, target.tail), check=False)


def _comp(v: DihedralObject, label) -> DGModule:
    if label == "inf":
        return v.infinity
    return v.tail if label == "tail" else v.stalk(label)


def unit() -> DihedralObject:
    return constant(dg.sphere(0))


def left_unitor(v: DihedralObject) -> DihedralMorphism:
    return _componentwise(tensor(unit(), v), v, lambda l: dg.left_unitor(_comp(v, l)))


def right_unitor(v: DihedralObject) -> DihedralMorphism:
    return _componentwise(tensor(v, unit()), v, lambda l: dg.right_unitor(_comp(v, l)))


def associator(a: DihedralObject, b: DihedralObject, c: DihedralObject) -> DihedralMorphism:
    """``(a ⊗ b) ⊗ c → a ⊗ (b ⊗ c)``."""
    return _componentwise(tensor(tensor(a, b), c), tensor(a, tensor(b, c)),
                          lambda l: dg.associator(_comp(a, l), _comp(b, l), _comp(c, l)))


def symmetry(a: DihedralObject, b: DihedralObject) -> DihedralMorphism:
    return _componentwise(tensor(a, b), tensor(b, a),
                          lambda l: dg.symmetry(_comp(a, l), _comp(b, l)))
