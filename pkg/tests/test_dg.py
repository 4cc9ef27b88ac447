import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from admodel import dg, samples
from admodel.dg import (REGULAR, SIGN, ChainMap, DGModule, ValidationError, concentrated, disk,
                        fixed_points, generators, hom_complex, homology, is_injection,
                        is_quasi_iso, is_surjection, llp_solve, mapping_cone, mapping_cylinder,
                        sphere, sphere_to_disk, tensor, zero_module)
from admodel.linalg import QMatrix

seeds = st.integers(0, 2 ** 31)


def character_fixed_dim(m: DGModule, n: int) -> int:
    """dim of the W-fixed subspace from the character: (dim + trace w) / 2."""
    w = m.inv(n)
    tr = sum(w[i, i] for i in range(w.rows))
    return int((m.dim(n) + tr) / 2)


def test_constructor_rejects_bad_structure():
    with pytest.raises(ValidationError):
        DGModule({0: 1, 1: 1, 2: 1}, {1: QMatrix([[1]]), 2: QMatrix([[1]])})
    with pytest.raises(ValidationError):
        DGModule({0: 2}, w={0: QMatrix([[1, 1], [0, 1]])})
    with pytest.raises(ValidationError):
        DGModule({0: 1, 1: 2}, {1: QMatrix([[1, 0]])}, {1: REGULAR, 0: QMatrix([[1]])})


def test_homology_examples():
    assert homology(sphere(3)).dims == {3: 1}
    assert homology(disk(2)).is_zero()
    h = homology(sphere(0, "QW"))
    assert h.dims == {0: 2}
    assert h.involution[0] == REGULAR


def test_tensor_examples():
    m = samples.dgmodule(random.Random(1), -1, 1, 4)
    assert tensor(sphere(0), m) == m
    qw = sphere(0, "QW")
    t = tensor(qw, qw)
    assert t.dims == {0: 4}
    # enumerate basis tensors e_i ⊗ e_j; the swap acts diagonally, flipping both bits
    orbits = {frozenset({(i, j), (1 - i, 1 - j)}) for i, j in itertools.product(range(2), repeat=2)}
    assert fixed_points(t).dims == {0: len(orbits)} == {0: 2}
    assert tensor(sphere(1), sphere(1)) == sphere(2)


def test_hom_complex_examples():
    m = samples.dgmodule(random.Random(2), -1, 1, 4, equivariant=True)
    assert hom_complex(sphere(0), m).dims == m.dims
    h = hom_complex(sphere(0, "QW"), sphere(0))
    assert h.dims == {0: 2}
    assert fixed_points(h).dims == {0: character_fixed_dim(h, 0)} == {0: 1}
    assert homology(hom_complex(disk(1), sphere(0))).is_zero()


def test_fixed_points_examples():
    triv = concentrated(0, 3, equivariant=True)
    assert fixed_points(triv) == concentrated(0, 3)
    assert fixed_points(sphere(0, "QW")).dims == {0: 1}
    assert fixed_points(concentrated(0, 1, SIGN)).is_zero()


def test_quasi_iso_and_surjection_examples():
    m = sphere(0)
    assert is_quasi_iso(ChainMap.identity(m)) and is_surjection(ChainMap.identity(m))
    z = dg.zero_to_disk(2)
    assert is_quasi_iso(z) and not is_surjection(z)
    assert not is_quasi_iso(sphere_to_disk(2))


def test_cone_examples():
    m = samples.dgmodule(random.Random(3), 0, 2, 4)
    assert homology(mapping_cone(ChainMap.identity(m))).is_zero()
    assert mapping_cone(ChainMap.zero(zero_module(), m)) == m
    times2 = ChainMap(sphere(0), sphere(0), {0: QMatrix([[2]])})
    assert homology(mapping_cone(times2)).is_zero()


def test_generator_sets():
    g = generators(0, 1, "Q")
    assert [f.source for f in g.cofibrations] == [sphere(-1), sphere(0)]
    assert [f.target for f in g.cofibrations] == [disk(0), disk(1)]
    assert [f.target for f in g.acyclic] == [disk(0), disk(1)]
    assert all(f.source.is_zero() for f in g.acyclic)
    for ring in ("Q", "QW"):
        g = generators(-2, 3, ring)
        assert all(is_quasi_iso(f) for f in g.acyclic)
        assert all(is_injection(f) for f in g.cofibrations)
        assert not any(is_quasi_iso(f) for f in g.cofibrations)
    w = generators(0, 0, "QW")
    assert w.cofibrations[0].target.inv(0) == REGULAR


def test_llp_examples():
    # S^0 -> D^1 against the acyclic fibration D^1 ⊕ S^0 -> S^0
    i = sphere_to_disk(1)
    total = dg.direct_sum([disk(1), sphere(0)])
    p = dg.map_from_sum(total, [ChainMap.zero(disk(1), sphere(0)), ChainMap.identity(sphere(0))],
                        sphere(0))
    assert is_quasi_iso(p) and is_surjection(p)
    top = total.injections[0] @ i
    bottom = ChainMap.zero(disk(1), sphere(0))
    h = llp_solve(i, p, top, bottom)
    assert h is not None and h @ i == top and p @ h == bottom

    # S^0 -> D^1 against S^0 -> 0 with top = id: d h(e_1) = e_0 is impossible in S^0
    p0 = ChainMap.zero(sphere(0), zero_module())
    assert llp_solve(i, p0, ChainMap.identity(sphere(0)),
                     ChainMap.zero(disk(1), zero_module())) is None

    with pytest.raises(dg.NonCommutingSquare):
        llp_solve(i, p, total.injections[1], ChainMap.zero(disk(1), sphere(0)))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_disks_lift_against_surjections(seed):
    rng = random.Random(seed)
    equiv = rng.random() < 0.5
    ring = "QW" if equiv else "Q"
    x = samples.dgmodule(rng, -1, 2, 4, equivariant=equiv)
    y = samples.dgmodule(rng, -1, 2, 3, equivariant=equiv)
    s = dg.direct_sum([x, y])
    p = s.projections[1]
    assert is_surjection(p)
    for j in generators(-1, 2, ring).acyclic:
        bottom = samples.chain_map(rng, j.target, y)
        h = llp_solve(j, p, ChainMap.zero(j.source, s.module), bottom)
        assert h is not None and p @ h == bottom


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_cone_acyclic_iff_quasi_iso(seed):
    rng = random.Random(seed)
    equiv = rng.random() < 0.5
    a = samples.dgmodule(rng, 0, 2, 3, equivariant=equiv)
    b = a if rng.random() < 0.4 else samples.dgmodule(rng, 0, 2, 3, equivariant=equiv)
    f = samples.chain_map(rng, a, b, zero_prob=0.0)
    assert homology(mapping_cone(f)).is_zero() == is_quasi_iso(f)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_cylinder_factorization(seed):
    rng = random.Random(seed)
    a = samples.dgmodule(rng, 0, 2, 3)
    b = samples.dgmodule(rng, 0, 2, 3)
    f = samples.chain_map(rng, a, b)
    cyl = mapping_cylinder(f)
    cyl.module.validate()
    assert cyl.p @ cyl.j == f
    assert is_injection(cyl.j) and is_quasi_iso(cyl.p)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_tensor_hom_adjunction_dims(seed):
    rng = random.Random(seed)
    equiv = rng.random() < 0.5
    a, b, c = (samples.dgmodule(rng, -1, 1, 2, equivariant=equiv) for _ in range(3))
    lhs = dg.MapSpace(tensor(a, b), c).dim
    hom_bc = hom_complex(b, c)
    assert dg.MapSpace(a, hom_bc).dim == lhs
    if not equiv:
        # chain maps a -> hom(b, c) are the degree-0 cycles of hom(a, hom(b, c))
        hh = hom_complex(a, hom_bc)
        from admodel.linalg import kernel
        assert kernel(hh.diff(0)).dim == lhs


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_structure_identities(seed):
    rng = random.Random(seed)
    equiv = rng.random() < 0.5
    a = samples.dgmodule(rng, -1, 1, 3, equivariant=equiv)
    b = samples.dgmodule(rng, -1, 1, 3, equivariant=equiv)
    tensor(a, b).validate()
    h = hom_complex(a, b)
    h.validate()
    if equiv:
        for m in (tensor(a, b), h):
            fp = fixed_points(m)
            fp.validate()
            assert fp.dims == {n: character_fixed_dim(m, n) for n in m.support
                               if character_fixed_dim(m, n)}


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 2), (2, 3)])
def test_fixed_points_of_regular_tensors_are_half(i, j):
    t = tensor(dg.regular_power(i), dg.regular_power(j))
    assert fixed_points(t).dims == {0: 2 ** (i + j - 1)}


def test_symmetry_and_associator_are_isos():
    rng = random.Random(5)
    a, b, c = (samples.dgmodule(rng, -1, 1, 3) for _ in range(3))
    s = dg.symmetry(a, b)
    assert dg.symmetry(b, a) @ s == ChainMap.identity(tensor(a, b))
    s.validate()
    al = dg.associator(a, b, c)
    al.validate()
    assert al.is_iso()
