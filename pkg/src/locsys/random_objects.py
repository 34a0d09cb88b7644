"""Seeded generators of complexes, groupoids, functors and local systems for property suites."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .chain import (
    ChainComplex,
    ChainMap,
    chain_map_from_cycle,
    direct_sum_many,
    disk,
    hom_complex,
    identity_map,
    shift,
    sphere,
    sum_injection,
    zero_complex,
)
from .groupoid import (
    FinGroupoid,
    GroupoidFunctor,
    aut,
    codiscrete,
    connected,
    cyclic_group,
    delooping,
    disjoint_union_many,
    is_functor,
    pi0,
    relabel,
    skeletize,
    symmetric_group,
)
from .linalg import Field, Matrix, inverse, kernel_basis
from .local_systems import LocalSystem, SystemMap, cup_tensor, constant_system, pull_system

GROUP_TABLES = {
    "1": [[0]],
    "C2": cyclic_group(2),
    "C3": cyclic_group(3),
    "S3": symmetric_group(3),
}


def random_scalar(field: Field, rng: random.Random):
    if field.is_rational:
        return Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return rng.randrange(field.p)


def random_invertible(field: Field, n: int, rng: random.Random) -> Matrix:
    """A product of a permutation and unit lower / upper triangular matrices."""
    perm = list(range(n))
    rng.shuffle(perm)
    lower = [[field.one if i == j else (random_scalar(field, rng) if j < i else field.zero) for j in range(n)] for i in range(n)]
    upper = [[field.one if i == j else (random_scalar(field, rng) if j > i else field.zero) for j in range(n)] for i in range(n)]
    p = [[field.one if perm[i] == j else field.zero for j in range(n)] for i in range(n)]
    return Matrix.from_rows(field, p, n) @ Matrix.from_rows(field, lower, n) @ Matrix.from_rows(field, upper, n)


def conjugate_complex(c: ChainComplex, mats: dict) -> Tuple[ChainComplex, ChainMap]:
    """Transport c along degreewise invertibles; returns the new complex and the iso c -> new."""
    inv = {n: inverse(m) for n, m in mats.items()}
    diffs = {n: mats[n - 1] @ c.d(n) @ inv[n] for n in c.dims if c.dim(n - 1)}
    new = ChainComplex(c.field, c.dims, diffs)
    return new, ChainMap(c, new, mats)


def random_complex(field: Field, rng: random.Random, lo: int = -2, hi: int = 2, max_dim: int = 3) -> ChainComplex:
    """Shifted disks and spheres in [lo, hi], at most max_dim per degree, in a random basis."""
    dims = {n: 0 for n in range(lo, hi + 1)}
    parts: List[ChainComplex] = []
    for _ in range(rng.randint(0, 2 * (hi - lo + 1))):
        if rng.random() < 0.5 and hi > lo:
            n = rng.randint(lo + 1, hi)
            if dims[n] < max_dim and dims[n - 1] < max_dim:
                dims[n] += 1
                dims[n - 1] += 1
                parts.append(disk(n, field))
        else:
            n = rng.randint(lo, hi)
            if dims[n] < max_dim:
                dims[n] += 1
                parts.append(sphere(n, field))
    if not parts:
        parts.append(sphere(rng.randint(lo, hi), field))
    rng.shuffle(parts)
    c = direct_sum_many(parts, field)
    new, _ = conjugate_complex(c, {n: random_invertible(field, k, rng) for n, k in c.dims.items()})
    return new


def random_chain_map(c: ChainComplex, d: ChainComplex, rng: random.Random) -> ChainMap:
    """A random combination of a basis of the degree-zero cycles of [c, d]."""
    h = hom_complex(c, d)
    f = c.field
    if not h.dim(0):
        return ChainMap(c, d)
    z = kernel_basis(h.d(0)) if h.dim(-1) else Matrix.identity(f, h.dim(0))
    vec = [f.zero] * h.dim(0)
    for j in range(z.cols):
        a = random_scalar(f, rng)
        for i in range(h.dim(0)):
            vec[i] = f.elem(vec[i] + a * z[i, j])
    return chain_map_from_cycle(c, d, vec)


# ---------------------------------------------------------------- groupoids and functors


def random_groupoid(rng: random.Random, max_objects: int = 6, groups: Sequence[str] = ("1", "C2", "C3", "S3"), shuffle: bool = True) -> FinGroupoid:
    """A disjoint union of connected groupoids codiscrete(k) x BG, with shuffled indices."""
    comps = []
    left = rng.randint(1, max_objects)
    while left > 0:
        k = rng.randint(1, min(left, 3))
        comps.append(connected(GROUP_TABLES[rng.choice(list(groups))], k))
        left -= k
    x = disjoint_union_many(comps)
    if not shuffle:
        return x
    op = list(range(x.n_objects))
    mp = list(range(x.n_morphisms))
    rng.shuffle(op)
    rng.shuffle(mp)
    return relabel(x, op, mp)[0]


def constant_functor(x: FinGroupoid, y: FinGroupoid, obj: int) -> GroupoidFunctor:
    return GroupoidFunctor(x, y, [obj] * x.n_objects, [y.identity[obj]] * x.n_morphisms)


def random_functor(x: FinGroupoid, y: FinGroupoid, rng: random.Random, tries: int = 40) -> GroupoidFunctor:
    """Sample object and generator images until a valid functor appears; else a constant functor."""
    if x.n_objects and not y.n_objects:
        raise ValueError("no functor into the empty groupoid")
    gens, words = x.generators, x.words
    for _ in range(tries):
        om = [rng.randrange(y.n_objects) for _ in range(x.n_objects)]
        gmap = {}
        ok = True
        for g in gens:
            choices = y.hom(om[x.src[g]], om[x.tgt[g]])
            if not choices:
                ok = False
                break
            gmap[g] = rng.choice(choices)
        if not ok:
            continue
        mm = []
        for m in range(x.n_morphisms):
            o, word = words[m]
            cur = y.identity[om[o]]
            for g, inv in word:
                step = y.inverse[gmap[g]] if inv else gmap[g]
                cur = y.comp[(step, cur)]
            mm.append(cur)
        f = GroupoidFunctor(x, y, om, mm)
        if is_functor(f):
            return f
    return constant_functor(x, y, rng.randrange(y.n_objects) if y.n_objects else 0)


# ---------------------------------------------------------------- systems


def _cyclic_subgroup(elems: Sequence[int], table: Sequence[Sequence[int]], gen_pos: int) -> List[int]:
    """Positions (into elems) of the subgroup generated by elems[gen_pos]."""
    e = next(i for i in range(len(elems)) if all(table[i][j] == j for j in range(len(elems))))
    sub = [e]
    cur = gen_pos
    while cur != e:
        sub.append(cur)
        cur = table[gen_pos][cur]
    return sorted(sub)


def permutation_action(elems: Sequence[int], table: Sequence[Sequence[int]], sub: Sequence[int]) -> Tuple[int, List[List[int]]]:
    """Left action of the group on cosets gH; returns (number of cosets, perm[g][coset])."""
    cosets: List[frozenset] = []
    seen = set()
    for g in range(len(elems)):
        if g in seen:
            continue
        c = frozenset(table[g][h] for h in sub)
        cosets.append(c)
        seen |= c
    where = {}
    for i, c in enumerate(cosets):
        for g in c:
            where[g] = i
    perm = [[where[table[g][min(c)]] for c in cosets] for g in range(len(elems))]
    return len(cosets), perm


def skeleton_system(sk: FinGroupoid, field: Field, reps: Sequence[Tuple[ChainComplex, List[ChainMap]]]) -> LocalSystem:
    """System over a skeletal groupoid from (complex, action indexed by morphism) per object."""
    at = [c for c, _ in reps]
    along: List[Optional[ChainMap]] = [None] * sk.n_morphisms
    for o, (_, act) in enumerate(reps):
        for m, a in act:
            along[m] = a
    return LocalSystem(sk, at, along, field)


def random_rep(sk: FinGroupoid, obj: int, field: Field, rng: random.Random, max_dim: int = 2, window: Tuple[int, int] = (0, 1)) -> Tuple[ChainComplex, List[Tuple[int, ChainMap]]]:
    """K[G/H] (x) C at one object of a skeletal groupoid, H cyclic with [G:H] * dim C <= max_dim when possible."""
    elems, table = aut(sk, obj)
    order = len(elems)
    options = []
    for g in range(order):
        sub = _cyclic_subgroup(elems, table, g)
        options.append(sub)
    rng.shuffle(options)
    lo, hi = window
    best = None
    for sub in options:
        k = order // len(sub)
        if k <= max_dim:
            best = sub
            break
    if best is None:
        best = list(range(order))
    ncos, perm = permutation_action(elems, table, best)
    cap = max(1, max_dim // ncos)
    c = random_complex(field, rng, lo, hi, cap)
    base = direct_sum_many([c] * ncos, field)
    act = []
    for g, m in enumerate(elems):
        comps = {}
        for n in c.dims:
            dim = c.dim(n)
            rows = [[field.zero] * (ncos * dim) for _ in range(ncos * dim)]
            for i in range(ncos):
                for u in range(dim):
                    rows[perm[g][i] * dim + u][i * dim + u] = field.one
            comps[n] = Matrix._raw(field, rows, ncos * dim)
        act.append((m, ChainMap(base, base, comps)))
    return base, act


def random_system(x: FinGroupoid, field: Field, rng: random.Random, max_dim: int = 2, window: Tuple[int, int] = (0, 1), twist: bool = True) -> LocalSystem:
    """Pull back random skeleton representations along p, then optionally change basis objectwise."""
    sk = skeletize(x)
    reps = [random_rep(sk.skeleton, o, field, rng, max_dim, window) for o in range(sk.skeleton.n_objects)]
    v = pull_system(sk.p, skeleton_system(sk.skeleton, field, reps))
    if not twist:
        return v
    at, isos = [], []
    for c in v.at:
        new, iso = conjugate_complex(c, {n: random_invertible(field, k, rng) for n, k in c.dims.items()})
        at.append(new)
        isos.append(iso)
    inv = [ChainMap(i.target, i.source, {n: inverse(m) for n, m in i.components.items()}) for i in isos]
    along = [isos[x.tgt[m]] @ v.along[m] @ inv[x.src[m]] for m in range(x.n_morphisms)]
    return LocalSystem(x, at, along, field)


def random_system_map(v: LocalSystem, w: LocalSystem, rng: random.Random) -> SystemMap:
    """A random natural map: random combination of a basis of natural maps."""
    from .local_systems import natural_map_space, zero_system_map

    basis = natural_map_space(v, w)
    out = zero_system_map(v, w)
    fld = v.field
    for b in basis:
        a = random_scalar(fld, rng)
        if a:
            out = out + SystemMap(v, w, [ChainMap(c.source, c.target, {n: m.scale(a) for n, m in c.components.items()}) for c in b.components])
    return out


def summand_inclusion(v: LocalSystem, w: LocalSystem) -> SystemMap:
    """v -> v + w, a certified cofibration whenever the classifier reaches a verdict."""
    from .local_systems import direct_sum_systems

    s = direct_sum_systems([v, w], v.base, v.field)
    return SystemMap(v, s, [sum_injection([v.at[o], w.at[o]], 0, s.at[o]) for o in range(v.base.n_objects)])


def acyclic_system(x: FinGroupoid, field: Field, rng: random.Random, max_dim: int = 2) -> LocalSystem:
    """A random system tensored with a disk, so every fiber is acyclic."""
    base = random_system(x, field, rng, max_dim=max(1, max_dim // 2), window=(0, 0))
    return cup_tensor(base, constant_system(x, disk(1, field)))
