"""Finite groupoids given by full composition tables, and functors between them.

Objects and morphisms are addressed by index; string labels are kept for
serialization.  ``comp[(g, f)]`` is the index of ``g o f`` and is defined
exactly when ``tgt(f) == src(g)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import LawViolation, NotAGroup, NotDiscrete


class FinGroupoid:
    def __init__(
        self,
        objects: Sequence[str],
        morphisms: Sequence[Tuple[str, int, int]],
        comp: Mapping[Tuple[int, int], int],
        identity: Optional[Sequence[int]] = None,
        inverse: Optional[Sequence[int]] = None,
    ):
        self.objects: Tuple[str, ...] = tuple(str(o) for o in objects)
        self.mor_labels: Tuple[str, ...] = tuple(str(m[0]) for m in morphisms)
        self.src: Tuple[int, ...] = tuple(int(m[1]) for m in morphisms)
        self.tgt: Tuple[int, ...] = tuple(int(m[2]) for m in morphisms)
        self.comp: Dict[Tuple[int, int], int] = dict(comp)
        if len(set(self.objects)) != len(self.objects):
            raise LawViolation("labels", "duplicate object label")
        if len(set(self.mor_labels)) != len(self.mor_labels):
            raise LawViolation("labels", "duplicate morphism label")
        self.identity: Tuple[int, ...] = tuple(identity) if identity is not None else self._find_identities()
        self.inverse: Tuple[int, ...] = tuple(inverse) if inverse is not None else self._find_inverses()

    def _find_identities(self) -> Tuple[int, ...]:
        ids = []
        for x in range(self.n_objects):
            found = [e for e in self.hom(x, x) if self.comp.get((e, e)) == e]
            if not found:
                raise LawViolation("identity", self.objects[x])
            ids.append(found[0])
        return tuple(ids)

    def _find_inverses(self) -> Tuple[int, ...]:
        inv = []
        for m in range(self.n_morphisms):
            x, y = self.src[m], self.tgt[m]
            found = [n for n in self.hom(y, x) if self.comp.get((n, m)) == self.identity[x]]
            if not found:
                raise LawViolation("inverse", self.mor_labels[m])
            inv.append(found[0])
        return tuple(inv)

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.mor_labels)

    @cached_property
    def _homs(self) -> Dict[Tuple[int, int], List[int]]:
        h: Dict[Tuple[int, int], List[int]] = {}
        for m in range(self.n_morphisms):
            h.setdefault((self.src[m], self.tgt[m]), []).append(m)
        return h

    @cached_property
    def outgoing(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.n_objects)]
        for m in range(self.n_morphisms):
            out[self.src[m]].append(m)
        return out

    def hom(self, x: int, y: int) -> List[int]:
        return self._homs.get((x, y), [])

    def compose(self, g: int, f: int) -> int:
        return self.comp[(g, f)]

    def is_identity(self, m: int) -> bool:
        return self.identity[self.src[m]] == m

    @cached_property
    def object_index(self) -> Dict[str, int]:
        return {o: i for i, o in enumerate(self.objects)}

    @cached_property
    def morphism_index(self) -> Dict[str, int]:
        return {m: i for i, m in enumerate(self.mor_labels)}

    @cached_property
    def generators(self) -> List[int]:
        """A greedy generating set: a morphism is kept when the earlier ones do not reach it."""
        gens: List[int] = []
        reached = set(self.identity)
        for m in range(self.n_morphisms):
            if m not in reached:
                gens.append(m)
                reached = self._closure(gens)
        return gens

    def _closure(self, gens: Sequence[int]) -> set:
        steps = list(gens) + [self.inverse[g] for g in gens]
        by_src: Dict[int, List[int]] = {}
        for g in steps:
            by_src.setdefault(self.src[g], []).append(g)
        seen = set(self.identity)
        frontier = list(self.identity)
        while frontier:
            nxt = []
            for m in frontier:
                for g in by_src.get(self.tgt[m], []):
                    h = self.comp[(g, m)]
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        return seen

    @cached_property
    def words(self) -> List[Tuple[int, List[Tuple[int, bool]]]]:
        """For each morphism, (source object, generator word) with m = g_k o ... o g_1 o id."""
        gens = self.generators
        out: List[Optional[Tuple[int, List[Tuple[int, bool]]]]] = [None] * self.n_morphisms
        frontier = []
        for x, e in enumerate(self.identity):
            out[e] = (x, [])
            frontier.append(e)
        while frontier:
            nxt = []
            for m in frontier:
                for g in gens:
                    for step, inv in ((g, False), (self.inverse[g], True)):
                        if self.src[step] != self.tgt[m]:
                            continue
                        h = self.comp[(step, m)]
                        if out[h] is None:
                            out[h] = (out[m][0], out[m][1] + [(g, inv)])
                            nxt.append(h)
            frontier = nxt
        return out  # type: ignore[return-value]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinGroupoid)
            and self.objects == other.objects
            and self.mor_labels == other.mor_labels
            and self.src == other.src
            and self.tgt == other.tgt
            and self.comp == other.comp
        )

    def __hash__(self):
        return hash((self.objects, self.mor_labels, self.src, self.tgt))

    def __repr__(self) -> str:
        return f"FinGroupoid({self.n_objects} objects, {self.n_morphisms} morphisms)"


class GroupoidFunctor:
    def __init__(self, source: FinGroupoid, target: FinGroupoid, obj_map: Sequence[int], mor_map: Sequence[int]):
        self.source = source
        self.target = target
        self.obj_map: Tuple[int, ...] = tuple(obj_map)
        self.mor_map: Tuple[int, ...] = tuple(mor_map)
        if len(self.obj_map) != source.n_objects or len(self.mor_map) != source.n_morphisms:
            raise LawViolation("functor shape", (len(self.obj_map), len(self.mor_map)))

    def __call__(self, x: int) -> int:
        return self.obj_map[x]

    def on_mor(self, m: int) -> int:
        return self.mor_map[m]

    def __matmul__(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        """self o other."""
        if other.target != self.source:
            raise LawViolation("composition", "functors are not composable")
        return GroupoidFunctor(
            other.source,
            self.target,
            [self.obj_map[x] for x in other.obj_map],
            [self.mor_map[m] for m in other.mor_map],
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupoidFunctor)
            and self.source == other.source
            and self.target == other.target
            and self.obj_map == other.obj_map
            and self.mor_map == other.mor_map
        )

    def __hash__(self):
        return hash((self.obj_map, self.mor_map))

    def __repr__(self) -> str:
        return f"GroupoidFunctor(objects {self.obj_map})"


def identity_functor(x: FinGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(x, x, range(x.n_objects), range(x.n_morphisms))


# ---------------------------------------------------------------- validation


def validate_groupoid(x: FinGroupoid) -> None:
    n = x.n_morphisms
    for m in range(n):
        if not (0 <= x.src[m] < x.n_objects and 0 <= x.tgt[m] < x.n_objects):
            raise LawViolation("endpoints", x.mor_labels[m])
    for g in range(n):
        for f in range(n):
            composable = x.tgt[f] == x.src[g]
            h = x.comp.get((g, f))
            if composable != (h is not None):
                raise LawViolation("composition domain", (x.mor_labels[g], x.mor_labels[f]))
            if h is not None and (x.src[h], x.tgt[h]) != (x.src[f], x.tgt[g]):
                raise LawViolation("composition endpoints", (x.mor_labels[g], x.mor_labels[f]))
    for m in range(n):
        if x.comp[(m, x.identity[x.src[m]])] != m or x.comp[(x.identity[x.tgt[m]], m)] != m:
            raise LawViolation("unit", x.mor_labels[m])
        i = x.inverse[m]
        if x.comp.get((i, m)) != x.identity[x.src[m]] or x.comp.get((m, i)) != x.identity[x.tgt[m]]:
            raise LawViolation("inverse", x.mor_labels[m])
    for f in range(n):
        for g in x.outgoing[x.tgt[f]]:
            gf = x.comp[(g, f)]
            for h in x.outgoing[x.tgt[g]]:
                if x.comp[(h, gf)] != x.comp[(x.comp[(h, g)], f)]:
                    raise LawViolation("associativity", (x.mor_labels[h], x.mor_labels[g], x.mor_labels[f]))


def validate_functor(f: GroupoidFunctor) -> None:
    x, y = f.source, f.target
    for m in range(x.n_morphisms):
        fm = f.mor_map[m]
        if (y.src[fm], y.tgt[fm]) != (f.obj_map[x.src[m]], f.obj_map[x.tgt[m]]):
            raise LawViolation("functor endpoints", x.mor_labels[m])
    for o in range(x.n_objects):
        if f.mor_map[x.identity[o]] != y.identity[f.obj_map[o]]:
            raise LawViolation("functor identity", x.objects[o])
    for (g, h), gh in x.comp.items():
        if f.mor_map[gh] != y.comp[(f.mor_map[g], f.mor_map[h])]:
            raise LawViolation("functor composition", (x.mor_labels[g], x.mor_labels[h]))


def is_functor(f: GroupoidFunctor) -> bool:
    try:
        validate_functor(f)
    except LawViolation:
        return False
    return True


# ---------------------------------------------------------------- constructors


def _check_group(table: Sequence[Sequence[int]]) -> int:
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        raise NotAGroup("table must be square and nonempty")
    if any(not (0 <= v < n) for r in table for v in r):
        raise NotAGroup("entries out of range")
    units = [e for e in range(n) if all(table[e][a] == a and table[a][e] == a for a in range(n))]
    if not units:
        raise NotAGroup("no identity element")
    e = units[0]
    for a in range(n):
        if not any(table[a][b] == e and table[b][a] == e for b in range(n)):
            raise NotAGroup(f"element {a} has no inverse")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise NotAGroup("not associative")
    return e


def delooping(table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None) -> FinGroupoid:
    """One object whose automorphisms are the group with multiplication ``table[a][b] = a*b``."""
    e = _check_group(table)
    n = len(table)
    labels = list(labels) if labels is not None else [f"g{i}" for i in range(n)]
    comp = {(a, b): table[a][b] for a in range(n) for b in range(n)}
    return FinGroupoid(["*"], [(labels[i], 0, 0) for i in range(n)], comp, identity=[e])


def cyclic_group(n: int) -> List[List[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def symmetric_group(n: int) -> List[List[int]]:
    """Permutations of range(n) in lexicographic order; product is composition a o b."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(a[b[k]] for k in range(n))] for b in perms] for a in perms]


def discrete(n: int) -> FinGroupoid:
    return FinGroupoid([str(i) for i in range(n)], [(f"id{i}", i, i) for i in range(n)], {(i, i): i for i in range(n)})


def empty_groupoid() -> FinGroupoid:
    return discrete(0)


def point() -> FinGroupoid:
    return FinGroupoid(["*"], [("id", 0, 0)], {(0, 0): 0})


def codiscrete(n: int) -> FinGroupoid:
    """The pair groupoid: exactly one morphism i -> j for all i, j."""
    mors = [(f"{i}>{j}", i, j) for i in range(n) for j in range(n)]
    comp = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                comp[(j * n + k, i * n + j)] = i * n + k
    return FinGroupoid([str(i) for i in range(n)], mors, comp)


def disjoint_union_many(xs: Sequence[FinGroupoid]) -> FinGroupoid:
    objs: List[str] = []
    mors: List[Tuple[str, int, int]] = []
    comp: Dict[Tuple[int, int], int] = {}
    ident: List[int] = []
    inv: List[int] = []
    for idx, x in enumerate(xs):
        oo, mo = len(objs), len(mors)
        prefix = f"{idx}."
        objs.extend(prefix + o for o in x.objects)
        mors.extend((prefix + x.mor_labels[m], x.src[m] + oo, x.tgt[m] + oo) for m in range(x.n_morphisms))
        comp.update({(g + mo, f + mo): h + mo for (g, f), h in x.comp.items()})
        ident.extend(e + mo for e in x.identity)
        inv.extend(i + mo for i in x.inverse)
    return FinGroupoid(objs, mors, comp, ident, inv)


def disjoint_union(x: FinGroupoid, y: FinGroupoid) -> FinGroupoid:
    """Coproduct; labels are prefixed with the summand index ("0." or "1.")."""
    return disjoint_union_many([x, y])


def coprojection(xs: Sequence[FinGroupoid], i: int, total: Optional[FinGroupoid] = None) -> GroupoidFunctor:
    total = total or disjoint_union_many(xs)
    oo = sum(x.n_objects for x in xs[:i])
    mo = sum(x.n_morphisms for x in xs[:i])
    x = xs[i]
    return GroupoidFunctor(x, total, [o + oo for o in range(x.n_objects)], [m + mo for m in range(x.n_morphisms)])


def product_many(xs: Sequence[FinGroupoid]) -> FinGroupoid:
    """Cartesian product; objects and morphisms are tuples ordered lexicographically."""
    obj_tuples = list(itertools.product(*[range(x.n_objects) for x in xs]))
    mor_tuples = list(itertools.product(*[range(x.n_morphisms) for x in xs]))
    oidx = {t: i for i, t in enumerate(obj_tuples)}
    midx = {t: i for i, t in enumerate(mor_tuples)}

    def lab(parts):
        return "(" + ",".join(parts) + ")"

    objs = [lab(x.objects[t[k]] for k, x in enumerate(xs)) for t in obj_tuples]
    mors = [
        (
            lab(x.mor_labels[t[k]] for k, x in enumerate(xs)),
            oidx[tuple(x.src[t[k]] for k, x in enumerate(xs))],
            oidx[tuple(x.tgt[t[k]] for k, x in enumerate(xs))],
        )
        for t in mor_tuples
    ]
    comp = {}
    for fi, ft in enumerate(mor_tuples):
        outs = [x.outgoing[x.tgt[ft[k]]] for k, x in enumerate(xs)]
        for gt in itertools.product(*outs):
            comp[(midx[gt], fi)] = midx[tuple(x.comp[(gt[k], ft[k])] for k, x in enumerate(xs))]
    ident = [midx[tuple(x.identity[t[k]] for k, x in enumerate(xs))] for t in obj_tuples]
    inv = [midx[tuple(x.inverse[t[k]] for k, x in enumerate(xs))] for t in mor_tuples]
    return FinGroupoid(objs, mors, comp, ident, inv)


def product(x: FinGroupoid, y: FinGroupoid) -> FinGroupoid:
    return product_many([x, y])


def projection(xs: Sequence[FinGroupoid], i: int, total: Optional[FinGroupoid] = None) -> GroupoidFunctor:
    """The i-th projection out of product_many(xs)."""
    total = total or product_many(xs)
    obj_tuples = list(itertools.product(*[range(x.n_objects) for x in xs]))
    mor_tuples = list(itertools.product(*[range(x.n_morphisms) for x in xs]))
    return GroupoidFunctor(total, xs[i], [t[i] for t in obj_tuples], [t[i] for t in mor_tuples])


def product_functor(fs: Sequence[GroupoidFunctor]) -> GroupoidFunctor:
    """f_1 x ... x f_k between the products of sources and targets."""
    src = product_many([f.source for f in fs])
    tgt = product_many([f.target for f in fs])
    tobj = {t: i for i, t in enumerate(itertools.product(*[range(f.target.n_objects) for f in fs]))}
    tmor = {t: i for i, t in enumerate(itertools.product(*[range(f.target.n_morphisms) for f in fs]))}
    om = [tobj[tuple(f.obj_map[t[k]] for k, f in enumerate(fs))] for t in itertools.product(*[range(f.source.n_objects) for f in fs])]
    mm = [tmor[tuple(f.mor_map[t[k]] for k, f in enumerate(fs))] for t in itertools.product(*[range(f.source.n_morphisms) for f in fs])]
    return GroupoidFunctor(src, tgt, om, mm)


def pairing(fs: Sequence[GroupoidFunctor], target: Optional[FinGroupoid] = None) -> GroupoidFunctor:
    """The functor (f_1, ..., f_k): X -> Y_1 x ... x Y_k."""
    target = target or product_many([f.target for f in fs])
    tobj = {t: i for i, t in enumerate(itertools.product(*[range(f.target.n_objects) for f in fs]))}
    tmor = {t: i for i, t in enumerate(itertools.product(*[range(f.target.n_morphisms) for f in fs]))}
    x = fs[0].source
    om = [tobj[tuple(f.obj_map[o] for f in fs)] for o in range(x.n_objects)]
    mm = [tmor[tuple(f.mor_map[m] for f in fs)] for m in range(x.n_morphisms)]
    return GroupoidFunctor(x, target, om, mm)


def full_subgroupoid(x: FinGroupoid, objs: Sequence[int]) -> Tuple[FinGroupoid, GroupoidFunctor]:
    """Full subgroupoid on ``objs`` (in the given order) with its inclusion."""
    objs = list(objs)
    opos = {o: i for i, o in enumerate(objs)}
    mors = [m for m in range(x.n_morphisms) if x.src[m] in opos and x.tgt[m] in opos]
    mpos = {m: i for i, m in enumerate(mors)}
    sub = FinGroupoid(
        [x.objects[o] for o in objs],
        [(x.mor_labels[m], opos[x.src[m]], opos[x.tgt[m]]) for m in mors],
        {(mpos[g], mpos[f]): mpos[h] for (g, f), h in x.comp.items() if g in mpos and f in mpos},
        [mpos[x.identity[o]] for o in objs],
        [mpos[x.inverse[m]] for m in mors],
    )
    return sub, GroupoidFunctor(sub, x, objs, mors)


def connected(table: Sequence[Sequence[int]], k: int) -> FinGroupoid:
    """A connected groupoid with k objects and automorphism group given by ``table``."""
    return product(codiscrete(k), delooping(table))


def relabel(x: FinGroupoid, obj_perm: Sequence[int], mor_perm: Sequence[int]) -> Tuple[FinGroupoid, GroupoidFunctor]:
    """Reorder objects and morphisms: new object i is old object obj_perm[i].

    Returns the reordered groupoid and the isomorphism from ``x`` to it.
    """
    onew = {old: new for new, old in enumerate(obj_perm)}
    mnew = {old: new for new, old in enumerate(mor_perm)}
    y = FinGroupoid(
        [x.objects[o] for o in obj_perm],
        [(x.mor_labels[m], onew[x.src[m]], onew[x.tgt[m]]) for m in mor_perm],
        {(mnew[g], mnew[f]): mnew[h] for (g, f), h in x.comp.items()},
        [mnew[x.identity[o]] for o in obj_perm],
        [mnew[x.inverse[m]] for m in mor_perm],
    )
    return y, GroupoidFunctor(x, y, [onew[o] for o in range(x.n_objects)], [mnew[m] for m in range(x.n_morphisms)])


def is_isomorphism(f: GroupoidFunctor) -> bool:
    return (
        sorted(f.obj_map) == list(range(f.target.n_objects))
        and sorted(f.mor_map) == list(range(f.target.n_morphisms))
    )


def inverse_functor(f: GroupoidFunctor) -> GroupoidFunctor:
    om = [0] * f.target.n_objects
    mm = [0] * f.target.n_morphisms
    for i, o in enumerate(f.obj_map):
        om[o] = i
    for i, m in enumerate(f.mor_map):
        mm[m] = i
    return GroupoidFunctor(f.target, f.source, om, mm)


# ---------------------------------------------------------------- components and automorphisms


def pi0(x: FinGroupoid) -> List[List[int]]:
    """Connected components as sorted object lists, ordered by least object."""
    parent = list(range(x.n_objects))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for m in range(x.n_morphisms):
        a, b = find(x.src[m]), find(x.tgt[m])
        if a != b:
            parent[max(a, b)] = min(a, b)
    comps: Dict[int, List[int]] = {}
    for o in range(x.n_objects):
        comps.setdefault(find(o), []).append(o)
    return [comps[k] for k in sorted(comps)]


def component_of(x: FinGroupoid) -> List[int]:
    out = [0] * x.n_objects
    for i, c in enumerate(pi0(x)):
        for o in c:
            out[o] = i
    return out


def aut(x: FinGroupoid, obj: int) -> Tuple[List[int], List[List[int]]]:
    """Automorphism group at ``obj``: (morphism indices, multiplication table on positions)."""
    els = x.hom(obj, obj)
    pos = {m: i for i, m in enumerate(els)}
    return els, [[pos[x.comp[(a, b)]] for b in els] for a in els]


# ---------------------------------------------------------------- classification


@dataclass(frozen=True)
class GroupoidFlags:
    we: bool
    fib: bool
    cof: bool

    def to_dict(self) -> dict:
        return {"cof": self.cof, "fib": self.fib, "we": self.we}


def is_essentially_surjective(f: GroupoidFunctor) -> bool:
    comp = component_of(f.target)
    hit = {comp[o] for o in f.obj_map}
    return len(hit) == len(set(comp))


def is_fully_faithful(f: GroupoidFunctor) -> bool:
    x, y = f.source, f.target
    for a in range(x.n_objects):
        for b in range(x.n_objects):
            imgs = [f.mor_map[m] for m in x.hom(a, b)]
            if len(set(imgs)) != len(imgs) or len(imgs) != len(y.hom(f.obj_map[a], f.obj_map[b])):
                return False
    return True


def is_isofibration(f: GroupoidFunctor) -> bool:
    x, y = f.source, f.target
    for a in range(x.n_objects):
        lifted = {f.mor_map[m] for m in x.outgoing[a]}
        if any(n not in lifted for n in y.outgoing[f.obj_map[a]]):
            return False
    return True


def classify_functor(f: GroupoidFunctor) -> GroupoidFlags:
    return GroupoidFlags(
        we=is_essentially_surjective(f) and is_fully_faithful(f),
        fib=is_isofibration(f),
        cof=len(set(f.obj_map)) == len(f.obj_map),
    )


# ---------------------------------------------------------------- skeleton


@dataclass
class Skeletization:
    skeleton: FinGroupoid
    iota: GroupoidFunctor
    p: GroupoidFunctor
    gamma: Tuple[int, ...]  # gamma[x]: basepoint of x's component -> x
    basepoints: Tuple[int, ...]


def skeletize(x: FinGroupoid) -> Skeletization:
    comps = pi0(x)
    bases = [c[0] for c in comps]
    base_of = {}
    for c in comps:
        for o in c:
            base_of[o] = c[0]
    gamma = []
    for o in range(x.n_objects):
        b = base_of[o]
        gamma.append(x.identity[o] if o == b else min(x.hom(b, o)))
    sk, iota = full_subgroupoid(x, bases)
    sk_obj = {b: i for i, b in enumerate(bases)}
    sk_mor = {m: i for i, m in enumerate(iota.mor_map)}
    pm = []
    for m in range(x.n_morphisms):
        a, b = x.src[m], x.tgt[m]
        loop = x.comp[(x.inverse[gamma[b]], x.comp[(m, gamma[a])])]
        pm.append(sk_mor[loop])
    p = GroupoidFunctor(x, sk, [sk_obj[base_of[o]] for o in range(x.n_objects)], pm)
    return Skeletization(sk, iota, p, tuple(gamma), tuple(bases))


# ---------------------------------------------------------------- functor groupoids


def is_discrete(x: FinGroupoid) -> bool:
    return x.n_morphisms == x.n_objects


def functor_groupoid(y: FinGroupoid, z: FinGroupoid) -> Tuple[FinGroupoid, List[GroupoidFunctor]]:
    """z^y for discrete y: the |y|-fold product with its evaluation functors."""
    if not is_discrete(y):
        raise NotDiscrete("exponent groupoid must be discrete")
    factors = [z] * y.n_objects
    total = product_many(factors)
    return total, [projection(factors, i, total) for i in range(y.n_objects)]


# ---------------------------------------------------------------- pullbacks


def groupoid_pullback(f: GroupoidFunctor, g: GroupoidFunctor) -> Tuple[FinGroupoid, GroupoidFunctor, GroupoidFunctor]:
    x, y = f.source, g.source
    objs = [(a, c) for a in range(x.n_objects) for c in range(y.n_objects) if f.obj_map[a] == g.obj_map[c]]
    mors = [(m, n) for m in range(x.n_morphisms) for n in range(y.n_morphisms) if f.mor_map[m] == g.mor_map[n]]
    oidx = {t: i for i, t in enumerate(objs)}
    midx = {t: i for i, t in enumerate(mors)}
    comp = {}
    for fi, (m, n) in enumerate(mors):
        for gm in x.outgoing[x.tgt[m]]:
            for gn in y.outgoing[y.tgt[n]]:
                if (gm, gn) in midx:
                    comp[(midx[(gm, gn)], fi)] = midx[(x.comp[(gm, m)], y.comp[(gn, n)])]
    p = FinGroupoid(
        [f"({x.objects[a]},{y.objects[c]})" for a, c in objs],
        [(f"({x.mor_labels[m]},{y.mor_labels[n]})", oidx[(x.src[m], y.src[n])], oidx[(x.tgt[m], y.tgt[n])]) for m, n in mors],
        comp,
        [midx[(x.identity[a], y.identity[c])] for a, c in objs],
        [midx[(x.inverse[m], y.inverse[n])] for m, n in mors],
    )
    pr1 = GroupoidFunctor(p, x, [a for a, _ in objs], [m for m, _ in mors])
    pr2 = GroupoidFunctor(p, y, [c for _, c in objs], [n for _, n in mors])
    return p, pr1, pr2


# ---------------------------------------------------------------- enumeration


def enumerate_functors(x: FinGroupoid, y: FinGroupoid) -> Iterator[GroupoidFunctor]:
    """All functors x -> y: object images in lexicographic order, then generator images."""
    gens = x.generators
    words = x.words
    for om in itertools.product(range(y.n_objects), repeat=x.n_objects):
        choices = [y.hom(om[x.src[g]], om[x.tgt[g]]) for g in gens]
        for imgs in itertools.product(*choices):
            gmap = dict(zip(gens, imgs))
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
                yield f


# ---------------------------------------------------------------- set-level pushout product


@dataclass(frozen=True)
class SetMap:
    images: Tuple[int, ...]
    codomain: int

    @property
    def domain(self) -> int:
        return len(self.images)


@dataclass
class SetPushoutProduct:
    """The map (X x Y') +_{X x Y} (X' x Y) -> X' x Y'.

    ``classes`` lists each domain element as its sorted members, where a
    member is ("L", x, y') or ("R", x', y); ``images`` gives the codomain
    pair of each class and ``fibers`` the class count over every pair.
    """

    classes: List[List[Tuple[str, int, int]]]
    images: List[Tuple[int, int]]
    fibers: Dict[Tuple[int, int], int]


def set_pushout_product(f: SetMap, g: SetMap) -> SetPushoutProduct:
    left = [("L", a, b) for a in range(f.domain) for b in range(g.codomain)]
    right = [("R", a, b) for a in range(f.codomain) for b in range(g.domain)]
    elems = left + right
    idx = {e: i for i, e in enumerate(elems)}
    parent = list(range(len(elems)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(f.domain):
        for b in range(g.domain):
            u, v = find(idx[("L", a, g.images[b])]), find(idx[("R", f.images[a], b)])
            if u != v:
                parent[max(u, v)] = min(u, v)
    groups: Dict[int, List[Tuple[str, int, int]]] = {}
    for i, e in enumerate(elems):
        groups.setdefault(find(i), []).append(e)
    classes = [groups[k] for k in sorted(groups)]
    images = []
    for cls in classes:
        side, a, b = cls[0]
        images.append((f.images[a], b) if side == "L" else (a, g.images[b]))
    fibers = {(a, b): 0 for a in range(f.codomain) for b in range(g.codomain)}
    for im in images:
        fibers[im] += 1
    return SetPushoutProduct(classes, images, fibers)


def pushout_product_fiber_formula(f: SetMap, g: SetMap) -> Dict[Tuple[int, int], int]:
    """Fiber sizes by the case analysis: 1 over im f x im g, preimage counts over the mixed cases, else 0."""
    out = {}
    for a in range(f.codomain):
        pa = f.images.count(a)
        for b in range(g.codomain):
            pb = g.images.count(b)
            if pa and pb:
                out[(a, b)] = 1
            elif pa:
                out[(a, b)] = pa
            elif pb:
                out[(a, b)] = pb
            else:
                out[(a, b)] = 0
    return out
