import random

import pytest
from hypothesis import given, strategies as st

from conftest import F2, F3, Q, fields, seeds
from locsys.chain import ChainMap, disk, homology, identity_map, is_quasi_iso, sphere, tensor, zero_complex
from locsys.errors import ShapeMismatch, SimplicialIdentityViolation
from locsys.random_objects import random_chain_map, random_complex
from locsys.simplicial import (
    TruncSimplicialComplex,
    TruncSimplicialMap,
    const,
    const_map,
    ev0,
    identity_simplicial_map,
    is_homotopically_constant,
    is_total_we,
    level_tensor,
    simplex_object,
    tot,
    validate_simplicial,
    validate_simplicial_map,
    vertex_inclusion,
)


def kunneth(a, b):
    out = {}
    for m, x in a.items():
        for n, y in b.items():
            out[m + n] = out.get(m + n, 0) + x * y
    return {k: v for k, v in out.items() if v}


def check_d_squared(c):
    for n in c.dims:
        if c.dim(n - 1) and c.dim(n - 2):
            assert (c.d(n - 1) @ c.d(n)).is_zero()


def test_validation_examples():
    validate_simplicial(const(sphere(0, F3), 2))
    validate_simplicial(const(disk(1, F3), 0))
    # Delta[1] at level 1 has simplices 00, 01, 11; swapping the targets of s_0 and s_1 at level 1 breaks identities
    v = simplex_object(1, 2, sphere(0, F2))
    degens = dict(v.degens)
    degens[(1, 0)], degens[(1, 1)] = degens[(1, 1)], degens[(1, 0)]
    bad = TruncSimplicialComplex(v.field, v.D, v.levels, v.faces, degens)
    with pytest.raises(SimplicialIdentityViolation):
        validate_simplicial(bad)
    with pytest.raises(ShapeMismatch):
        TruncSimplicialComplex(F3, 1, (sphere(0, F3),), {}, {})


def test_const_examples():
    c = disk(2, Q)
    assert ev0(const(c, 3)) == c
    assert tot(const(zero_complex(Q), 2)).is_zero()
    d = sphere(1, Q)
    assert level_tensor(const(c, 2), const(d, 2)) == const(tensor(c, d), 2)
    assert level_tensor(const(sphere(0, Q), 2), simplex_object(1, 2, d)) == simplex_object(1, 2, d)


def test_tot_examples():
    c = sphere(2, F3)
    assert tot(const(c, 0)) == c
    assert homology(tot(const(c, 3))) == {2: 1}
    # simplicial unit interval tensor S^0: contractible, two vertices and one edge
    t = tot(simplex_object(1, 2, sphere(0, F3)))
    assert t.dims == {0: 2, 1: 1} and homology(t) == {0: 1}
    # boundary of a 2-simplex is a circle
    circ = tot(simplex_object(2, 2, sphere(0, F3), boundary=True))
    assert homology(circ) == {0: 1, 1: 1}


def test_total_we_examples():
    c = sphere(1, F3)
    assert is_total_we(identity_simplicial_map(const(c, 2)))
    z = TruncSimplicialMap(const(c, 2), const(c, 2), tuple(ChainMap(c, c) for _ in range(3)))
    assert not is_total_we(z)
    inc = vertex_inclusion(1, 0, 2, c)
    validate_simplicial_map(inc)
    assert is_total_we(inc)


def test_homotopically_constant_examples():
    assert is_homotopically_constant(const(sphere(1, F3), 2))
    assert not is_homotopically_constant(simplex_object(1, 1, sphere(0, F3)))
    assert is_homotopically_constant(simplex_object(1, 2, disk(1, F3)))


@given(fields, seeds, st.integers(0, 3))
def test_tot_const_matches_homology(fld, seed, D):
    c = random_complex(fld, random.Random(seed))
    t = tot(const(c, D))
    check_d_squared(t)
    assert homology(t) == homology(c)


@given(fields, seeds, st.integers(1, 3))
def test_tot_level_tensor_kunneth(fld, seed, D):
    rng = random.Random(seed)
    c, d = random_complex(fld, rng, -1, 1, 2), random_complex(fld, rng, -1, 1, 2)
    assert homology(tot(level_tensor(const(c, D), const(d, D)))) == kunneth(homology(c), homology(d))


@given(fields, seeds, st.integers(0, 2), st.integers(2, 3))
def test_simplex_objects(fld, seed, k, D):
    c = random_complex(fld, random.Random(seed), -1, 1, 2)
    v = simplex_object(k, D, c)
    validate_simplicial(v)
    t = tot(v)
    check_d_squared(t)
    assert homology(t) == homology(c)
    if k == 2:
        circle = tot(simplex_object(2, D, c, boundary=True))
        assert homology(circle) == kunneth(homology(c), {0: 1, 1: 1})


@given(fields, seeds)
def test_const_map_total_we_iff_quasi_iso(fld, seed):
    rng = random.Random(seed)
    c, d = random_complex(fld, rng, -1, 1, 2), random_complex(fld, rng, -1, 1, 2)
    phi = random_chain_map(c, d, rng)
    cm = const_map(phi, 2)
    validate_simplicial_map(cm)
    assert is_total_we(cm) == is_quasi_iso(phi)


@given(fields, seeds)
def test_total_we_two_out_of_three(fld, seed):
    rng = random.Random(seed)
    a, b, c = (random_complex(fld, rng, 0, 1, 2) for _ in range(3))
    f, g = const_map(random_chain_map(a, b, rng), 1), const_map(random_chain_map(b, c, rng), 1)
    wf, wg, wgf = is_total_we(f), is_total_we(g), is_total_we(g @ f)
    if wf and wg:
        assert wgf
    if wf and wgf:
        assert wg
    if wg and wgf:
        assert wf
