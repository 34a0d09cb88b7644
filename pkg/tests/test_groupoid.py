import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conftest import seeds
from locsys.errors import LawViolation, NotAGroup, NotDiscrete
from locsys.groupoid import (
    FinGroupoid,
    GroupoidFunctor,
    SetMap,
    aut,
    classify_functor,
    codiscrete,
    coprojection,
    cyclic_group,
    delooping,
    discrete,
    disjoint_union,
    empty_groupoid,
    enumerate_functors,
    full_subgroupoid,
    functor_groupoid,
    groupoid_pullback,
    identity_functor,
    is_isomorphism,
    pi0,
    point,
    product,
    pushout_product_fiber_formula,
    set_pushout_product,
    skeletize,
    symmetric_group,
    validate_functor,
    validate_groupoid,
)
from locsys.random_objects import random_functor, random_groupoid

C2, C3, S3 = delooping(cyclic_group(2)), delooping(cyclic_group(3)), delooping(symmetric_group(3))


def brute_set_pushout_product(f: SetMap, g: SetMap):
    """Quotient by repeated merging of blocks until stable; returns image multiset per pair."""
    blocks = [{("L", a, b)} for a in range(f.domain) for b in range(g.codomain)]
    blocks += [{("R", a, b)} for a in range(f.codomain) for b in range(g.domain)]
    glue = [(("L", a, g.images[b]), ("R", f.images[a], b)) for a in range(f.domain) for b in range(g.domain)]
    changed = True
    while changed:
        changed = False
        for u, v in glue:
            bu = next(b for b in blocks if u in b)
            bv = next(b for b in blocks if v in b)
            if bu is not bv:
                bu |= bv
                blocks.remove(bv)
                changed = True
    fibers = {(a, b): 0 for a in range(f.codomain) for b in range(g.codomain)}
    for blk in blocks:
        imgs = {(f.images[a], b) if s == "L" else (a, g.images[b]) for s, a, b in blk}
        assert len(imgs) == 1
        fibers[imgs.pop()] += 1
    return len(blocks), fibers


set_maps = st.integers(0, 6).flatmap(
    lambda n: st.integers(1 if n else 0, 6).flatmap(
        lambda m: st.tuples(st.lists(st.integers(0, max(m - 1, 0)), min_size=n, max_size=n), st.just(m))
    )
).map(lambda t: SetMap(tuple(t[0]), t[1]))


# ---------------------------------------------------------------- construction and laws


def test_delooping_examples():
    assert is_isomorphism(GroupoidFunctor(delooping([[0]]), point(), [0], [0]))
    assert C2.n_objects == 1 and C2.n_morphisms == 2
    elems, table = aut(S3, 0)
    assert len(elems) == 6 and table == symmetric_group(3)
    with pytest.raises(NotAGroup):
        delooping([[0, 0], [0, 0]])


def test_validation():
    validate_groupoid(C2)
    validate_functor(identity_functor(S3))
    with pytest.raises(LawViolation):
        FinGroupoid(["*"], [("e", 0, 0), ("a", 0, 0)], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1})
    bad = FinGroupoid(["*"], [("e", 0, 0), ("a", 0, 0)], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0}, inverse=[0, 0])
    with pytest.raises(LawViolation):
        validate_groupoid(bad)
    with pytest.raises(LawViolation):
        validate_functor(GroupoidFunctor(C2, C2, [0], [1, 1]))


def test_products_and_components():
    x = random_groupoid(random.Random(3), 4)
    assert is_isomorphism(GroupoidFunctor(product(point(), x), x, range(x.n_objects), range(x.n_morphisms)))
    p = product(C2, C3)
    assert p.n_objects == 1 and p.n_morphisms == 6
    assert len(pi0(codiscrete(2))) == 1
    assert len(pi0(discrete(3))) == 3
    assert len(pi0(disjoint_union(x, C2))) == len(pi0(x)) + 1


def test_classify_examples():
    collapse = GroupoidFunctor(codiscrete(2), point(), [0, 0], [0] * 4)
    assert classify_functor(collapse).to_dict() == {"cof": False, "fib": True, "we": True}
    assert classify_functor(GroupoidFunctor(point(), C2, [0], [0])).to_dict() == {"cof": True, "fib": False, "we": False}
    inc = coprojection([C2, point()], 0)
    assert classify_functor(inc).to_dict() == {"cof": True, "fib": True, "we": False}


def test_skeletize_examples():
    sk = skeletize(codiscrete(2))
    assert (sk.skeleton.n_objects, sk.skeleton.n_morphisms) == (1, 1)
    assert sk.p.obj_map == (0, 0)
    assert codiscrete(2).src[sk.gamma[1]] == 0 and codiscrete(2).tgt[sk.gamma[1]] == 1
    sc = skeletize(C2)
    assert sc.skeleton == C2 and all(C2.is_identity(g) for g in sc.gamma)
    two = skeletize(disjoint_union(codiscrete(2), codiscrete(2)))
    assert two.skeleton.n_objects == 2 and two.skeleton.n_morphisms == 2


def test_functor_groupoid_examples():
    z = S3
    top, evs = functor_groupoid(empty_groupoid(), z)
    assert top.n_objects == 1 and top.n_morphisms == 1 and evs == []
    one, (ev,) = functor_groupoid(discrete(1), z)
    assert is_isomorphism(ev)
    four, _ = functor_groupoid(discrete(2), C2)
    assert four.n_objects == 1 and four.n_morphisms == 4
    with pytest.raises(NotDiscrete):
        functor_groupoid(C2, C2)


def test_pullback_examples():
    x = random_groupoid(random.Random(5), 4)
    p, pr1, _ = groupoid_pullback(identity_functor(x), identity_functor(x))
    assert is_isomorphism(pr1)
    pt_in = GroupoidFunctor(point(), S3, [0], [0])
    q, _, _ = groupoid_pullback(pt_in, pt_in)
    assert q.n_objects == 1 and q.n_morphisms == 1
    u = disjoint_union(C2, C3)
    e, _, _ = groupoid_pullback(coprojection([C2, C3], 0, u), coprojection([C2, C3], 1, u))
    assert e.n_objects == 0


def test_set_pushout_product_examples():
    f, g = SetMap((0,), 2), SetMap((0,), 2)
    pp = set_pushout_product(f, g)
    assert len(pp.classes) == 3
    assert [k for k, v in pp.fibers.items() if v == 0] == [(1, 1)]
    # identity on one side gives the identity on the codomain
    ident = set_pushout_product(SetMap((0, 1, 2), 3), SetMap((1,), 3))
    assert sorted(ident.images) == [(a, b) for a in range(3) for b in range(3)]
    # empty domain on the left gives id x g
    g = SetMap((0, 0, 2), 4)
    init = set_pushout_product(SetMap((), 2), g)
    assert sorted(init.images) == sorted((a, g.images[b]) for a in range(2) for b in range(g.domain))


# ---------------------------------------------------------------- properties


@given(set_maps, set_maps)
def test_set_pushout_product_matches_brute_force(f, g):
    pp = set_pushout_product(f, g)
    n, fibers = brute_set_pushout_product(f, g)
    assert len(pp.classes) == n
    assert pp.fibers == fibers == pushout_product_fiber_formula(f, g)


@given(seeds)
def test_random_groupoids_are_valid(seed):
    rng = random.Random(seed)
    x, y = random_groupoid(rng, 4), random_groupoid(rng, 3)
    validate_groupoid(x)
    validate_functor(random_functor(x, y, rng))


@given(seeds)
def test_skeleton_contract(seed):
    x = random_groupoid(random.Random(seed))
    sk = skeletize(x)
    assert sk.p @ sk.iota == identity_functor(sk.skeleton)
    assert classify_functor(sk.iota).we and classify_functor(sk.p).we
    ip = sk.iota @ sk.p
    for m in range(x.n_morphisms):
        a, b = x.src[m], x.tgt[m]
        assert x.comp[(m, sk.gamma[a])] == x.comp[(sk.gamma[b], ip.on_mor(m))]
    for b in sk.basepoints:
        assert x.is_identity(sk.gamma[b])
    for c in pi0(sk.skeleton):
        assert len(c) == 1


@given(seeds)
def test_equivalences_induce_pi0_bijection(seed):
    rng = random.Random(seed)
    x = random_groupoid(rng, 4)
    sk = skeletize(x)
    for f in (sk.iota, sk.p, identity_functor(x)):
        flags = classify_functor(f)
        comp_src = pi0(f.source)
        hit = {tuple(c) for c in pi0(f.target) if any(f(o) in c for o in range(f.source.n_objects))}
        assert flags.we == (len(hit) == len(pi0(f.target)) == len(comp_src) and all(
            len(aut(f.source, c[0])[0]) == len(aut(f.target, f(c[0]))[0]) for c in comp_src
        ) and _aut_injective(f, comp_src))


def _aut_injective(f: GroupoidFunctor, comps) -> bool:
    for c in comps:
        elems, _ = aut(f.source, c[0])
        if len({f.on_mor(m) for m in elems}) != len(elems):
            return False
    return True


def test_enumerated_functors_match_brute_force():
    cases = [(discrete(2), C2), (C2, S3), (codiscrete(2), disjoint_union(C2, point())), (C3, C3)]
    for x, y in cases:
        fs = list(enumerate_functors(x, y))
        assert len({(f.obj_map, f.mor_map) for f in fs}) == len(fs)
        brute = 0
        for om in itertools.product(range(y.n_objects), repeat=x.n_objects):
            for mm in itertools.product(range(y.n_morphisms), repeat=x.n_morphisms):
                try:
                    validate_functor(GroupoidFunctor(x, y, om, mm))
                except LawViolation:
                    continue
                brute += 1
        assert brute == len(fs)


@given(seeds)
def test_full_subgroupoid_inclusion_is_fully_faithful(seed):
    rng = random.Random(seed)
    x = random_groupoid(rng)
    objs = sorted(rng.sample(range(x.n_objects), rng.randint(1, x.n_objects)))
    sub, inc = full_subgroupoid(x, objs)
    validate_groupoid(sub)
    assert classify_functor(inc).cof
    assert all(len(sub.hom(a, b)) == len(x.hom(objs[a], objs[b])) for a in range(len(objs)) for b in range(len(objs)))
    p, pr1, _ = groupoid_pullback(inc, identity_functor(x))
    assert p.n_objects == sub.n_objects and p.n_morphisms == sub.n_morphisms
