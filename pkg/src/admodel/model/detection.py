"""Detecting acyclic objects with the generators ``cQ`` and ``i_k QW``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from .. import dg
from .boxplus import boxplus
from .homs import hom_complex
from .objects import DihedralObject, at_stalk, constant


@dataclass
class DetectionReport:
    components_acyclic: bool
    homs_acyclic: bool
    sections_acyclic: bool
    colimit_chain_ok: bool

    @property
    def consistent(self) -> bool:
        return (self.components_acyclic == self.homs_acyclic == self.sections_acyclic
                and self.colimit_chain_ok)


def _acyclic(m) -> bool:
    return dg.homology(m).is_zero()


def _add(a: Dict[int, int], b: Dict[int, int]) -> Dict[int, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def detect(v: DihedralObject, cutoff: int) -> DetectionReport:
    K = max(cutoff, v.window + 1)
    comps = all(_acyclic(m) for _, m in v.components(K))
    unit = constant(dg.sphere(0))
    qw = dg.sphere(0, "QW")
    homs = _acyclic(hom_complex(unit, v, K)) and all(
        _acyclic(hom_complex(at_stalk(k, qw), v, K)) for k in range(1, K + 1))
    box = boxplus(1, v, K, fixed=True)
    sections = _acyclic(box.module) and all(
        _acyclic(v.stalk(k)) and _acyclic(dg.fixed_points(v.stalk(k))) for k in range(1, K + 1))
    # H(V_inf) is the colimit of H(⊞_N^W V): past the window each step drops H(V_N^W)
    # and the germ projection is onto H(V_inf) with kernel the stalk part
    chain_ok = True
    h_inf = dg.homology(v.infinity).dims
    for n in range(v.window + 1, K + 1):
        b = boxplus(n, v, K, fixed=True)
        stalk_part: Dict[int, int] = {}
        for k in range(n, K + 1):
            stalk_part = _add(stalk_part, dg.homology(dg.fixed_points(v.stalk(k))).dims)
        hb = dg.homology(b.module).dims
        proj = dg.homology_map(b.projections[0])
        onto = all(proj[d].rank() == c for d, c in h_inf.items())
        chain_ok = chain_ok and onto and hb == _add(h_inf, stalk_part)
    return DetectionReport(comps, homs, sections, chain_ok)
