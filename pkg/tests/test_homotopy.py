import random

import pytest
from hypothesis import given, settings, strategies as st

from admodel import dg, homotopy, samples
from admodel.linalg import QMatrix
from admodel.model import homs
from admodel.model.objects import (DihedralObject, at_infinity, at_stalk, constant, shift,
                                   zero_object)

G = homotopy.GeneratorExpression
seeds = st.integers(0, 2 ** 31 - 1)


def brute_fixed_dim(a: dg.DGModule, b: dg.DGModule) -> int:
    """dim Hom(a, b)^W for modules in one degree: fixed points of w ⊗ w on all matrices."""
    rows, cols = b.dim(0), a.dim(0)
    wa, wb = a.inv(0), b.inv(0)
    # the averaging projector (1 + conj) / 2 on row-major matrices; its rank is the fixed dim
    entries = []
    for r in range(rows):
        for c in range(cols):
            e = QMatrix([[1 if (i, j) == (r, c) else 0 for j in range(cols)]
                         for i in range(rows)], rows, cols)
            avg = e + wb @ e @ wa
            entries.append([x for row in avg.tolist() for x in row])
    return QMatrix(entries, rows * cols, rows * cols).rank()


def test_catalog():
    assert homotopy.catalog(G.unit()) == constant(dg.sphere(0))
    one = homotopy.catalog(G.stalk_power(2, 1))
    assert one == at_stalk(2, dg.sphere(0, "QW"))
    two = homotopy.catalog(G.stalk_power(3, 2))
    assert two.stalk(3).dims == {0: 4} and two.window == 3
    assert G.unit().label == "S_D" and G.stalk_power(2, 3).label.endswith("|H| = 4")
    with pytest.raises(ValueError):
        G.stalk_power(0, 1)
    with pytest.raises(ValueError):
        G("sphere")


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 1), (2, 3), (3, 3)])
def test_hom_table_same_stalk(i, j):
    a = homotopy.catalog(G.stalk_power(2, i))
    b = homotopy.catalog(G.stalk_power(2, j))
    oracle = brute_fixed_dim(dg.regular_power(i), dg.regular_power(j))
    assert oracle == 2 ** (i + j - 1)
    assert homotopy.graded_hom(a, b) == {0: oracle}


def test_hom_table_cross_stalk_and_unit():
    for i in range(1, 4):
        s = homotopy.catalog(G.stalk_power(1, i))
        t = homotopy.catalog(G.stalk_power(3, i))
        assert homotopy.graded_hom(s, t) == {}
        unit = homotopy.catalog(G.unit())
        q = dg.sphere(0).with_trivial_action()
        assert homotopy.graded_hom(unit, s) == {0: brute_fixed_dim(q, dg.regular_power(i))}
        assert homotopy.graded_hom(s, unit) == {0: 2 ** (i - 1)}
    for K in range(1, 6):
        assert homotopy.graded_hom(homotopy.catalog(G.unit()),
                                   homotopy.catalog(G.unit()), K) == {0: K + 1}


def test_graded_hom_matches_hom_complex_homology():
    a = at_stalk(1, dg.DGModule({0: 2, 1: 2}, w={0: dg.REGULAR, 1: dg.REGULAR}))
    b = at_stalk(1, dg.DGModule({0: 2, 2: 2}, w={0: dg.REGULAR, 2: dg.REGULAR}))
    direct = dg.homology(homs.hom_complex(a, b)).dims
    assert homotopy.graded_hom(a, b) == direct == {-1: 2, 0: 2, 1: 2, 2: 2}


def test_graded_hom_rejects_non_representable_source():
    tail = dg.sphere(0, "QW")
    v = DihedralObject([], tail, dg.zero_module())
    with pytest.raises(homs.NonRepresentableHom):
        homotopy.graded_hom(v, constant(dg.sphere(0)))


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(-2, 2))
def test_suspension_invariance(seed, k):
    rng = random.Random(seed)
    a = homotopy.catalog(rng.choice(homotopy.generator_list(2, 2)))
    b = samples.dihedral_object(rng, 2, 0, 1, 2)
    assert homotopy.graded_hom(shift(a, k), shift(b, k), 3) == homotopy.graded_hom(a, b, 3)


# --- Ext ----------------------------------------------------------------------

def stalkwise_q(window: int = 0) -> DihedralObject:
    q = dg.sphere(0).with_trivial_action()
    return DihedralObject([q] * window, q, dg.zero_module())


@pytest.mark.parametrize("window", [0, 1, 3])
def test_canonical_nonsplit_extension(window):
    a = at_infinity(dg.sphere(0))
    b = stalkwise_q(window)
    ext = homotopy.ext1(a, b)
    assert ext.dim == 1 == homotopy.euler_ext_dim(a, b)
    e = homotopy.extension(a, b, ext.basis[0])
    assert not homotopy.splits(e)
    iso = homotopy.isomorphism(e.middle, constant(dg.sphere(0)))
    assert iso is not None and iso.is_iso()
    trivial = homotopy.extension(a, b, {0: QMatrix.zero(1, 1)})
    assert homotopy.splits(trivial)


def test_ext_vanishing_examples():
    cq = constant(dg.sphere(0))
    assert homotopy.ext1(cq, cq).dim == 0
    s1 = at_stalk(1, dg.sphere(0, "QW"))
    s2 = at_stalk(2, dg.regular_power(2))
    assert homotopy.ext1(s1, s2).dim == 0 and homotopy.ext1(s2, s1).dim == 0
    with pytest.raises(homotopy.NontrivialDifferential):
        homotopy.ext1(constant(dg.disk(1)), cq)


def random_tau(rng, ext):
    a, b = ext.source, ext.target
    fix = dg.fixed_points_inclusion(b.tail)
    out = {}
    for n in a.infinity.support:
        F = fix[n]
        t = samples.matrix(rng, F.cols, a.infinity.dim(n))
        out[n] = F @ t
    return out


@settings(max_examples=120, deadline=None)
@given(seeds)
def test_ext_formula_matches_brute_force(seed):
    rng = random.Random(seed)
    a = samples.dihedral_object(rng, 3, 0, 0, 2, max_dim=2, trivial_differential=True)
    b = samples.dihedral_object(rng, 3, 0, 0, 2, max_dim=2, trivial_differential=True)
    ext = homotopy.ext1(a, b)
    assert ext.dim == homotopy.euler_ext_dim(a, b)
    for tau in ext.basis:
        assert not homotopy.splits(homotopy.extension(a, b, tau))
    tau = random_tau(rng, ext)
    assert homotopy.splits(homotopy.extension(a, b, tau)) == ext.is_coboundary(tau)


def test_stalk_supported_source_has_no_ext():
    rng = random.Random(3)
    for _ in range(20):
        b = samples.dihedral_object(rng, 3, 0, 0, 2, max_dim=2, trivial_differential=True)
        a = at_stalk(rng.randint(1, 3), dg.regular_power(rng.randint(1, 2)))
        assert homotopy.ext1(a, b).dim == 0
    assert homotopy.ext1(zero_object(), constant(dg.sphere(0))).dim == 0


def test_ses_dimensions():
    assert homotopy.ses_dimensions(G.stalk_power(2, 1), G.stalk_power(2, 1)) == 2
    assert homotopy.ses_dimensions(G.stalk_power(1, 1), G.stalk_power(2, 1)) == 0
    assert homotopy.ses_dimensions(G.stalk_power(3, 1), G.unit()) == 1
    assert homotopy.ses_dimensions(G.unit(), G.unit(), window=4) == 5
