"""Seeded verification suites shared by the command line and the acceptance tests.

Each suite is a list of named properties; a property runs over a list of
instance seeds derived from the suite seed and counts how many pass.  The
report never includes timings, so the same seed gives the same bytes.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

from . import burnside as B
from . import dg, homotopy, ringoid, samples
from .dg import DGModule, NonCommutingSquare
from .linalg import QMatrix, kernel, solve
from .model import adjunctions as adj
from .model import limits, modelcat, monoidal
from .model.boxplus import split_check
from .model.detection import detect
from .model.homs import HomSpace
from .model.objects import (DihedralMorphism, DihedralObject, at_infinity, constant,
                            zero_object)

SUITES = ("adjunctions", "monoidal", "model", "boxplus", "burnside", "homotopy", "detection",
          "ringoid")


@dataclass
class PropertyResult:
    name: str
    passed: int
    total: int
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "total": self.total,
                "ok": self.ok, "failures": self.failures}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    results: List[PropertyResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "ok": self.ok,
                "properties": [r.as_dict() for r in self.results]}

    def render(self) -> str:
        width = max([len(r.name) for r in self.results] + [8])
        lines = [f"suite {self.suite} (seed {self.seed})"]
        for r in self.results:
            tag = "PASS" if r.ok else "FAIL"
            lines.append(f"  [{tag}] {r.name.ljust(width)} {r.passed:>5}/{r.total}")
            for msg in r.failures:
                lines.append(f"         {msg}")
        return "\n".join(lines)


def run_property(name: str, seeds: Sequence[int], check: Callable[[random.Random], bool],
                 keep: int = 3) -> PropertyResult:
    passed, failures = 0, []
    for s in seeds:
        try:
            good = bool(check(random.Random(s)))
            msg = "returned False"
        except Exception as exc:          # a crash is a failed instance, not a crashed suite
            good, msg = False, f"{type(exc).__name__}: {exc}"
        if good:
            passed += 1
        elif len(failures) < keep:
            failures.append(f"instance seed {s}: {msg}")
    return PropertyResult(name, passed, len(seeds), failures)


def run_once(name: str, check: Callable[[], bool]) -> PropertyResult:
    return run_property(name, [0], lambda _rng: check())


# ---------------------------------------------------------------------------
# burnside

def burnside_relations(rng: random.Random) -> bool:
    x = B.random_element(rng, 8)
    n, m = rng.randint(1, 10), rng.randint(1, 10)
    eC, eD, en, em = B.e_C(), B.e_D(), B.e(n), B.e(m)
    ok = (eC + eD == B.one() and eC * eD == B.zero()
          and en * em == (en if n == m else B.zero()) and eD * en == en)
    c, d, dihedral = x.decompose()
    ok = ok and B.BurnsideElement.compose(c, d, dihedral) == x
    # uniqueness: coefficients are recovered from the element they build
    coeffs = {k: samples.rational(rng) for k in rng.sample(range(1, 9), rng.randint(0, 4))}
    coeffs = {k: v for k, v in coeffs.items() if v}
    c2, d2 = samples.rational(rng), samples.rational(rng)
    y = B.BurnsideElement.compose(c2, d2, coeffs)
    return ok and y.decompose() == (c2, d2, coeffs)


def burnside_ring_axioms(rng: random.Random) -> bool:
    x, y, z = (B.random_element(rng) for _ in range(3))
    return ((x * y) * z == x * (y * z) and x * (y + z) == x * y + x * z
            and x * B.one() == x and x * y == y * x)


def burnside_endomorphisms(rng: random.Random) -> bool:
    x = B.random_element(rng, 12, so2=False)
    y = B.random_element(rng, 12, so2=False)
    fx, fy = B.to_endomorphism(x), B.to_endomorphism(y)
    return (B.from_endomorphism(fx) == x and B.from_endomorphism(fy) == y
            and fx @ fy == B.to_endomorphism(x * y)
            and B.from_endomorphism(fx @ fy) == x * y)


def suite_burnside(seed: int, scale: float = 1.0) -> SuiteReport:
    n = max(1, int(1000 * scale))
    return SuiteReport("burnside", seed, [
        run_once("idempotents square to themselves",
                 lambda: all(x.is_idempotent() for x in
                             [B.e_C(), B.e_D()] + [B.e(k) for k in range(1, 8)]
                             + [B.f(k) for k in range(1, 8)])),
        run_property("relations and unique decomposition", samples.seeds(seed, n),
                     burnside_relations),
        run_property("ring axioms", samples.seeds(seed + 1, max(1, n // 10)),
                     burnside_ring_axioms),
        run_property("End(cQ) round trip and multiplicativity",
                     samples.seeds(seed + 2, max(1, n // 2)), burnside_endomorphisms),
    ])


# ---------------------------------------------------------------------------
# hom tables and Ext

def brute_fixed_dim(a: DGModule, b: DGModule) -> int:
    """``dim Hom(a, b)^W`` for modules in degree 0, by the character ``(dim + trace w) / 2``."""
    h = dg.hom_complex(a, b)
    w = h.inv(0)
    return int((h.dim(0) + sum(w[i, i] for i in range(w.rows))) / 2)


def hom_table_closed_forms(imax: int = 4, kmax: int = 5) -> Dict[str, object]:
    """Compare model hom dims with closed forms and with the brute-force oracle.

    Returns a dict of mismatches (empty when everything agrees) and the
    number of entries compared.
    """
    q = dg.sphere(0).with_trivial_action()
    reg = {i: dg.regular_power(i) for i in range(1, imax + 1)}
    oracle_ss = {(i, j): brute_fixed_dim(reg[i], reg[j])
                 for i in range(1, imax + 1) for j in range(1, imax + 1)}
    oracle_us = {i: brute_fixed_dim(q, reg[i]) for i in reg}
    oracle_su = {i: brute_fixed_dim(reg[i], q) for i in reg}
    bad, count = [], 0
    unit = homotopy.catalog(homotopy.GeneratorExpression.unit())
    objs = {(k, i): homotopy.catalog(homotopy.GeneratorExpression.stalk_power(k, i))
            for k in range(1, kmax + 1) for i in reg}
    for (n, i), a in objs.items():
        for (k, j), b in objs.items():
            expect = {0: 2 ** (i + j - 1)} if n == k else {}
            oracle = {0: oracle_ss[(i, j)]} if n == k else {}
            got = homotopy.graded_hom(a, b)
            count += 1
            if not (got == expect == oracle):
                bad.append(f"hom(i_{n}QW^{i}, i_{k}QW^{j}) = {got}, expected {expect}")
        expect = {0: 2 ** (i - 1)}
        for name, got, oracle in (
                ("unit-to-stalk", homotopy.graded_hom(unit, a), oracle_us[i]),
                ("stalk-to-unit", homotopy.graded_hom(a, unit), oracle_su[i])):
            count += 1
            if not (got == expect == {0: oracle}):
                bad.append(f"{name} i_{n}QW^{i}: {got}, expected {expect}")
    return {"mismatches": bad, "entries": count}


def ext_instance(rng: random.Random) -> bool:
    a = samples.dihedral_object(rng, 3, 0, 0, 2, max_dim=2, trivial_differential=True)
    b = samples.dihedral_object(rng, 3, 0, 0, 2, max_dim=2, trivial_differential=True)
    ext = homotopy.ext1(a, b)
    if ext.dim != homotopy.euler_ext_dim(a, b):
        return False
    if any(homotopy.splits(homotopy.extension(a, b, tau)) for tau in ext.basis):
        return False
    fix = dg.fixed_points_inclusion(b.tail)
    tau = {n: fix[n] @ samples.matrix(rng, fix[n].cols, a.infinity.dim(n))
           for n in a.infinity.support}
    return homotopy.splits(homotopy.extension(a, b, tau)) == ext.is_coboundary(tau)


def canonical_ext_example() -> bool:
    q = dg.sphere(0)
    a = at_infinity(q)
    b = DihedralObject([q] * 2, q, dg.zero_module())
    ext = homotopy.ext1(a, b)
    if ext.dim != 1:
        return False
    e = homotopy.extension(a, b, ext.basis[0])
    iso = homotopy.isomorphism(e.middle, constant(q))
    return not homotopy.splits(e) and iso is not None and iso.is_iso()


def suite_homotopy(seed: int, scale: float = 1.0) -> SuiteReport:
    n = max(1, int(120 * scale))
    G = homotopy.GeneratorExpression

    def table():
        return not hom_table_closed_forms()["mismatches"]

    def ses():
        return (homotopy.ses_dimensions(G.stalk_power(2, 1), G.stalk_power(2, 1)) == 2
                and homotopy.ses_dimensions(G.stalk_power(1, 1), G.stalk_power(2, 1)) == 0
                and homotopy.ses_dimensions(G.stalk_power(3, 1), G.unit()) == 1
                and homotopy.ses_dimensions(G.unit(), G.unit(), window=4) == 5)

    return SuiteReport("homotopy", seed, [
        run_once("hom table closed forms (i, j <= 4, k, n <= 5)", table),
        run_property("ext1 formula vs brute force", samples.seeds(seed, n), ext_instance),
        run_once("canonical nonsplit extension of i_inf Q by stalkwise Q", canonical_ext_example),
        run_once("ses dimension examples", ses),
    ])


# ---------------------------------------------------------------------------
# boxplus

def random_chain(rng: random.Random, max_len: int = 6, max_window: int = 4, max_dim: int = 3
                 ) -> limits.FilteredChain:
    length = rng.randint(1, max_len)
    objs = [samples.dihedral_object(rng, max_window, 0, 1, 2, max_dim=max_dim)
            for _ in range(length)]
    maps = [samples.morphism(rng, objs[i], objs[i + 1]) for i in range(length - 1)]
    loop = None
    if rng.random() < 0.5:
        loop = samples.morphism(rng, objs[-1], objs[-1], zero_prob=0.5)
    return limits.FilteredChain(objs, maps, loop)


def boxplus_instance(rng: random.Random) -> bool:
    ch = random_chain(rng)
    n = rng.randint(1, 4)
    v = rng.choice(ch.objects)
    if not split_check(v, n, max(n, v.window) + 1).ok:
        return False
    col = limits.filtered_colimit(ch).object
    if not split_check(col, n, max(n, col.window) + 1).ok:
        return False
    return limits.canonical_map_check(ch, n).ok


def suite_boxplus(seed: int, scale: float = 1.0) -> SuiteReport:
    n = max(1, int(200 * scale))
    return SuiteReport("boxplus", seed, [
        run_property("split iso and filtered colimit preservation", samples.seeds(seed, n),
                     boxplus_instance),
    ])


# ---------------------------------------------------------------------------
# adjunctions

def adjunction_instance(rng: random.Random) -> bool:
    v = samples.dihedral_object(rng, 3, 0, 1, 2)
    k = rng.randint(1, v.window + 1)
    r = samples.dgmodule(rng, 0, 1, 2, equivariant=True)
    m = samples.dgmodule(rng, 0, 1, 2)
    reps = (adj.check_stalk_left(k, r, v), adj.check_stalk_right(k, v, r),
            adj.check_infinity(v, m), adj.check_sections(m, v, v.window + 1))
    return all(rep.ok for rep in reps)


def suite_adjunctions(seed: int, scale: float = 1.0) -> SuiteReport:
    n = max(1, int(200 * scale))
    return SuiteReport("adjunctions", seed, [
        run_property("four adjoint pairs: bijection, inverse, triangles",
                     samples.seeds(seed, n), adjunction_instance),
    ])


# ---------------------------------------------------------------------------
# monoidal

def coherence_instance(rng: random.Random) -> bool:
    a, b, c = (samples.dihedral_object(rng, 2, -1, 1, 2) for _ in range(3))
    for f in (monoidal.left_unitor(a), monoidal.right_unitor(a),
              monoidal.associator(a, b, c), monoidal.symmetry(a, b)):
        f.validate()
        if not f.is_iso():
            return False
        f.inverse().validate()
    s = monoidal.symmetry(a, b)
    return monoidal.symmetry(b, a) @ s == \
        DihedralMorphism.identity(monoidal.tensor(a, b)).widen(s.window)


def constant_or_stalk_supported(v: DihedralObject) -> bool:
    v = v.normalize()
    if v.infinity.is_zero() and v.tail.is_zero():
        return True
    return v.window == 0 and v.sigma.is_iso()


def pushout_products(min_deg: int = -2, max_deg: int = 3, kmax: int = 3) -> List[str]:
    """Every pushout product of generating cofibrations; returns the failures."""
    gens = modelcat.generating_maps(min_deg, max_deg, kmax).cofibrations
    bad = []
    for a, i in enumerate(gens):
        for b, j in enumerate(gens):
            pp = modelcat.pushout_product(i, j)
            f = pp.map
            ok = (constant_or_stalk_supported(f.target)
                  and all(dg.is_injection(f.component(l)) for l in f.labels())
                  and pp.certificate is not None and modelcat.verify_certificate(pp.certificate))
            if not ok:
                bad.append(f"generators {a} x {b}")
    return bad


def suite_monoidal(seed: int, scale: float = 1.0) -> SuiteReport:
    n = max(1, int(100 * scale))
    return SuiteReport("monoidal", seed, [
        run_property("unitors, associator, symmetry are isomorphisms", samples.seeds(seed, n),
                     coherence_instance),
        run_once("pushout products of generators carry cell certificates",
                 lambda: not pushout_products()),
    ])


# ---------------------------------------------------------------------------
# model structure

def _surjection_onto(rng: random.Random, y: DihedralObject, c: DihedralObject
                     ) -> DihedralMorphism:
    """``Y ⊕ C → Y``, identity on Y plus a random map on C: surjective with kernel ≅ C."""
    bp = limits.biproduct([y, c])
    psi = samples.morphism(rng, c, y)
    return bp.factor([DihedralMorphism.identity(y), psi])


def _square(rng: random.Random, i: DihedralMorphism, p: DihedralMorphism):
    """A random commuting square: bottom at random, top solved from ``p top = bottom i``."""
    A, Bo, X, Y = i.source, i.target, p.source, p.target
    w = max(i.window, p.window, A.window, Bo.window, X.window, Y.window)
    bottom = samples.morphism(rng, Bo, Y, w)
    tops, ys = HomSpace(A, X, w), HomSpace(A, Y, w)
    rhs = ys.coordinates(bottom @ i)
    if not tops.dim:
        return None if any(rhs) else (DihedralMorphism.zero(A, X, w), bottom)
    cols = [ys.coordinates(p @ t) for t in tops.basis]
    m = QMatrix.from_columns(cols, ys.dim)
    x = solve(m, rhs)
    if x is None:
        return None
    ker = kernel(m)
    for v in ker.basis:
        c = samples.rational(rng)
        x = tuple(a + c * b for a, b in zip(x, v))
    return tops.element(x), bottom


def _lift_probe(rng: random.Random, i: DihedralMorphism, acyclic_kernel: bool) -> bool:
    lo = min([n for _, m in i.target.components() for n in m.support] + [0])
    hi = max([n for _, m in i.target.components() for n in m.support] + [0])
    # a copy of the generator's target inside Y keeps the bottom map nonzero
    y = limits.biproduct([samples.dihedral_object(rng, 3, lo, hi, 2), i.target]).object
    z = samples.dihedral_object(rng, 3, lo, hi, 2)
    c = modelcat.mapping_cone(DihedralMorphism.identity(z)) if acyclic_kernel else z
    p = _surjection_onto(rng, y, c)
    if acyclic_kernel and not modelcat.is_weak_equivalence(p):
        return False
    if not modelcat.is_fibration(p):
        return False
    sq = _square(rng, i, p)
    if sq is None:
        return False
    top, bottom = sq
    h = modelcat.llp_solve_model(i, p, top, bottom)
    return h is not None and h @ i == top and p @ h == bottom


def lifting_probes(seed: int, per_generator: int = 2) -> PropertyResult:
    g = modelcat.generating_maps(-1, 2, 2)
    seeds = samples.seeds(seed, per_generator * (len(g.cofibrations) + len(g.acyclic)))
    jobs = [(i, True) for i in g.cofibrations for _ in range(per_generator)]
    jobs += [(j, False) for j in g.acyclic for _ in range(per_generator)]
    passed, failures = 0, []
    for s, (i, acyc) in zip(seeds, jobs):
        try:
            ok = _lift_probe(random.Random(s), i, acyc)
        except Exception as exc:
            ok = False
            failures.append(f"instance seed {s}: {type(exc).__name__}: {exc}")
        passed += ok
    return PropertyResult("lifts for (generator, fibration) probes", passed, len(jobs),
                          failures[:3])


def lifting_counterexamples() -> bool:
    """``i: S → D`` against ``S → 0`` with the identity on top never lifts."""
    g = modelcat.generating_maps(-1, 2, 2)
    for i in g.cofibrations:
        s = i.source
        if s.normalize().is_zero():
            continue
        p = DihedralMorphism.zero(s, zero_object())
        h = modelcat.llp_solve_model(i, p, DihedralMorphism.identity(s),
                                     DihedralMorphism.zero(i.target, zero_object()))
        if h is not None:
            return False
    i = g.constant_cofibrations[-1]
    p = DihedralMorphism.identity(i.target)
    try:
        modelcat.llp_solve_model(i, p, DihedralMorphism.zero(i.source, i.target),
                                 DihedralMorphism.identity(i.target))
    except NonCommutingSquare:
        return True
    return False


def cone_instance(rng: random.Random) -> bool:
    a = samples.dihedral_object(rng, 2, 0, 2, 2)
    kind = rng.randrange(3)
    if kind == 0:
        b = samples.dihedral_object(rng, 2, 0, 2, 2)
        f = samples.morphism(rng, a, b, zero_prob=0.0)
    elif kind == 1:
        f = samples.morphism(rng, a, a, zero_prob=0.0)
    else:
        c = modelcat.mapping_cone(DihedralMorphism.identity(
            samples.dihedral_object(rng, 2, 0, 1, 2)))
        f = _surjection_onto(rng, a, c)
    weq = modelcat.is_weak_equivalence(f)
    cone = modelcat.mapping_cone(f)
    cone.validate()
    return (weq == modelcat.homology_morphism(f).is_iso()
            and weq == all(dg.is_acyclic(m) for _, m in cone.components()))


def suite_model(seed: int, scale: float = 1.0) -> SuiteReport:
    n = max(1, int(300 * scale))
    gens = modelcat.generating_maps(-2, 3, 3)
    return SuiteReport("model", seed, [
        run_once("generating acyclic cofibrations are weak equivalences",
                 lambda: all(modelcat.is_weak_equivalence(f) for f in gens.acyclic)),
        lifting_probes(seed),
        run_once("absent lifts and non-commuting squares are reported", lifting_counterexamples),
        run_property("cone acyclic iff weak equivalence", samples.seeds(seed + 1, n),
                     cone_instance),
    ])


# ---------------------------------------------------------------------------
# detection

def detection_instance(rng: random.Random) -> bool:
    v = samples.dihedral_object(rng, 3, 0, 2, 3, acyclic=rng.random() < 0.5)
    return detect(v, v.window + 2).consistent


def suite_detection(seed: int, scale: float = 1.0) -> SuiteReport:
    n = max(1, int(100 * scale))
    return SuiteReport("detection", seed, [
        run_property("generators detect acyclicity", samples.seeds(seed, n),
                     detection_instance),
    ])


# ---------------------------------------------------------------------------
# ringoid

def ringoid_checks(imax: int = 3, kmax: int = 3) -> Dict[str, bool]:
    e = ringoid.extract_Ea(imax, kmax)
    table_ok = True
    for x in homotopy.generator_list(imax, kmax):
        for y in homotopy.generator_list(imax, kmax):
            got = e.hom(x.name, y.name).dims
            if x.kind == "unit" and y.kind == "unit":
                want = e.cutoff + 1
            elif x.kind == "unit":
                want = 2 ** (y.i - 1)
            elif y.kind == "unit":
                want = 2 ** (x.i - 1)
            else:
                want = 2 ** (x.i + y.i - 1) if x.k == y.k else 0
            table_ok = table_ok and got == ({0: want} if want else {})
    c0, i, p = ringoid.connective_cover(e)
    h1 = ringoid.synthetic_h1()
    _, i1, p1 = ringoid.connective_cover(h1)
    neg = ringoid.synthetic_negative()
    _, i2, _ = ringoid.connective_cover(neg)
    return {
        "homs concentrated in degree 0": e.is_concentrated_in_degree_zero() and not e.off_degree,
        "hom table matches closed forms": table_ok,
        "i and p are quasi-equivalences": (ringoid.is_quasi_equivalence(i)
                                           and ringoid.is_quasi_equivalence(p)),
        "H_1 example: p is not a quasi-equivalence": (h1.validate()
                                                      and not ringoid.is_quasi_equivalence(p1)),
        "negative-degree example: i is not a quasi-equivalence":
            not ringoid.is_quasi_equivalence(i2),
    }


def suite_ringoid(seed: int, scale: float = 1.0) -> SuiteReport:
    rng = random.Random(seed)
    results = [run_once(name, lambda ok=ok: ok) for name, ok in ringoid_checks().items()]
    small = ringoid.extract_Ea(2, 2, 2)
    results.append(run_once("unitality and associativity",
                            lambda: small.check_unitality() and small.check_associativity(
                                rng, max(1, int(200 * scale)))))
    results.append(run_once("Yoneda round trip", lambda: all(
        homotopy.isomorphism(ringoid.tensor_with_generators(ringoid.representable(small, x)),
                             small.realization[x]) is not None for x in small.objects)))
    return SuiteReport("ringoid", seed, results)


RUNNERS = {
    "adjunctions": suite_adjunctions,
    "monoidal": suite_monoidal,
    "model": suite_model,
    "boxplus": suite_boxplus,
    "burnside": suite_burnside,
    "homotopy": suite_homotopy,
    "detection": suite_detection,
    "ringoid": suite_ringoid,
}


def run_suite(name: str, seed: int = 0, scale: float = 1.0) -> List[SuiteReport]:
    if name == "all":
        return [RUNNERS[s](seed, scale) for s in SUITES]
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}")
    return [RUNNERS[name](seed, scale)]


def reports_json(reports: Sequence[SuiteReport]) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True)
