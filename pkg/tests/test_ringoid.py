import random

import pytest

from admodel import burnside, homotopy, ringoid as R
from admodel.model import limits
from admodel.model.homs import HomSpace

G = homotopy.GeneratorExpression


@pytest.fixture(scope="module")
def small():
    return R.extract_Ea(2, 2, cutoff=2)


@pytest.fixture(scope="module")
def big():
    return R.extract_Ea(3, 3)


def test_extract_objects_and_table(big):
    assert big.objects[0] == "cQ" and len(big.objects) == 10
    assert big.is_concentrated_in_degree_zero() and not big.off_degree
    for x in homotopy.generator_list(3, 3)[1:]:
        for y in homotopy.generator_list(3, 3)[1:]:
            dim = big.hom(x.name, y.name).dim(0)
            assert dim == (2 ** (x.i + y.i - 1) if x.k == y.k else 0)
        assert big.hom("cQ", x.name).dim(0) == 2 ** (x.i - 1)
        assert big.hom(x.name, "cQ").dim(0) == 2 ** (x.i - 1)
    K = big.cutoff
    assert big.hom("cQ", "cQ").dim(0) == K + 1
    assert big.growth[("cQ", "cQ")].describe() == "K+1 at window K"


def test_extract_is_a_dg_category(small, big):
    assert small.validate()
    assert big.check_unitality() and big.check_associativity(random.Random(1), 400)


def test_unit_endomorphisms_compose_like_burnside(small):
    space = small.hom_spaces[("cQ", "cQ")]
    elems = [burnside.from_endomorphism(f) for f in space.basis]
    n = len(elems)
    for i in range(n):
        for j in range(n):
            g = tuple(1 if t == i else 0 for t in range(n))
            f = tuple(1 if t == j else 0 for t in range(n))
            prod = small.compose("cQ", "cQ", "cQ", g, 0, f, 0)
            assert burnside.from_endomorphism(space.element(prod)) == elems[i] * elems[j]


def test_end_of_stalk_generator_is_group_algebra(small):
    # End(i_k QW) ≅ QW: two-dimensional and commutative
    h = small.hom("i_1QW", "i_1QW")
    assert h.dim(0) == 2
    a, b = (1, 0), (0, 1)
    assert small.compose("i_1QW", "i_1QW", "i_1QW", a, 0, b, 0) == \
        small.compose("i_1QW", "i_1QW", "i_1QW", b, 0, a, 0)


def test_tensor_table(small):
    t = small.tensor_table
    assert t[("cQ", "i_2QW")] == "i_2QW"
    assert t[("i_1QW", "i_1QW")] == "i_1QW^2"
    assert t[("i_1QW", "i_2QW")] == "0"
    assert t[("i_1QW^2", "i_1QW")] == "beyond cutoff"
    assert R.check_tensor_table(small)


def test_homology_category_of_extract(small):
    h = R.homology_category(small)
    assert {k: m.dims for k, m in h.homs.items()} == {k: m.dims for k, m in small.homs.items()}
    for key, c in small.composition.items():
        assert h.composition[key].comps == c.comps
    assert h.validate()


def test_connective_cover_of_extract(big):
    c0, i, p = R.connective_cover(big)
    assert R.is_quasi_equivalence(i) and R.is_quasi_equivalence(p)
    assert i.validate() and p.validate()


def test_connective_cover_of_nonnegative_zero_differential_is_identity():
    e = R.synthetic_h1()
    c0, i, _ = R.connective_cover(e)
    assert all(m.is_iso() for m in i.maps.values())


def test_synthetic_h1_fails():
    e = R.synthetic_h1()
    assert e.validate()
    c0, i, p = R.connective_cover(e)
    assert i.validate() and p.validate()
    assert R.is_quasi_equivalence(i)
    assert not R.is_quasi_equivalence(p)


def test_synthetic_negative_degree_fails_inclusion():
    e = R.synthetic_negative()
    _, i, p = R.connective_cover(e)
    assert not R.is_quasi_equivalence(i) and not R.is_quasi_equivalence(p)


def test_acyclic_summand_vanishes():
    e = R.synthetic_acyclic_summand()
    assert e.validate()
    h = R.homology_category(e)
    assert h.hom("*", "*").dims == {0: 1}
    c0, i, p = R.connective_cover(e)
    assert R.is_quasi_equivalence(i) and R.is_quasi_equivalence(p)
    # truncation then homology agrees with homology in degrees >= 0
    hc = R.homology_category(c0)
    assert hc.hom("*", "*").dims == {n: d for n, d in h.hom("*", "*").dims.items() if n >= 0}


def test_representable_matches_hom_space(small):
    for x in small.objects:
        m = R.representable(small, x)
        assert m.check()
        obj = small.realization[x]
        assert m.values["cQ"].dim(0) == HomSpace(small.realization["cQ"], obj,
                                                 small.cutoff).dim


def test_yoneda_round_trip(small):
    for x in small.objects:
        obj = R.tensor_with_generators(R.representable(small, x))
        assert homotopy.isomorphism(obj, small.realization[x]) is not None


def test_sum_of_representables_is_biproduct(small):
    m = R.free_module(small, ["cQ", "i_2QW"])
    assert m.check()
    obj = R.tensor_with_generators(m)
    bp = limits.biproduct([small.realization["cQ"], small.realization["i_2QW"]])
    assert homotopy.isomorphism(obj, bp.object) is not None
    for x in small.objects:
        assert m.values[x].dims == {0: small.hom(x, "cQ").dim(0) + small.hom(x, "i_2QW").dim(0)}


def test_cokernel_of_representables(small):
    space = small.hom_spaces[("cQ", "cQ")]
    e1 = burnside.to_endomorphism(burnside.e(1), small.cutoff)
    phi = R.free_map(small, ["cQ"], ["cQ"], {(0, 0): space.coordinates(e1)})
    m = R.cokernel_module(phi)
    assert m.check()
    obj = R.tensor_with_generators(m)
    assert obj.stalk(1).is_zero() and obj.stalk(2).dims == {0: 1} and obj.infinity.dims == {0: 1}
    for x in small.objects:
        assert m.values[x].dim(0) == HomSpace(small.realization[x], obj, small.cutoff).dim


def test_unsupported_module():
    e = R.synthetic_h1()
    with pytest.raises(R.UnsupportedModule):
        R.tensor_with_generators(R.representable(e, "*"))
