"""JSON text format for every domain type.

Every document is ``{"format_version": "locsys/1", "kind": ..., "payload": ...}``
written with sorted keys and one-space indentation, so equal values encode to
identical bytes.  Degrees and (n, i) pairs become string keys; F_p scalars are
integers and rationals are ``"a/b"`` strings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from .chain import ChainComplex, ChainMap, validate_chain_map, validate_complex
from .errors import LocsysError, ParseError, VersionMismatch
from .groupoid import FinGroupoid, GroupoidFunctor, validate_functor, validate_groupoid
from .integral import LocMorphism, LocObject
from .linalg import Field, Matrix
from .local_systems import LocalSystem, SystemMap, pull_system, validate_system, validate_system_map
from .simplicial import TruncSimplicialComplex, TruncSimplicialMap, validate_simplicial, validate_simplicial_map

FORMAT_VERSION = "locsys/1"
KINDS = (
    "field",
    "complex",
    "chain_map",
    "groupoid",
    "functor",
    "system",
    "system_map",
    "simplicial",
    "simplicial_map",
    "loc_object",
    "loc_morphism",
)


@dataclass(frozen=True)
class Document:
    format_version: str
    kind: str
    payload: Any


class _Bad(Exception):
    """Structural error at a JSON path; converted to ParseError with a line number."""

    def __init__(self, path: Tuple, reason: str):
        super().__init__(reason)
        self.path = path
        self.reason = reason


# ---------------------------------------------------------------- encoding


def _field(f: Field) -> dict:
    return {"kind": "rational"} if f.is_rational else {"kind": "prime", "p": f.p}


def _scalar(f: Field, x):
    return str(x) if f.is_rational else int(x)


def _matrix(m: Matrix) -> dict:
    f = m.field
    return {"rows": m.rows, "cols": m.cols, "entries": [[_scalar(f, x) for x in row] for row in m.data]}


def _complex(c: ChainComplex) -> dict:
    lo, hi = c.window
    return {
        "field": _field(c.field),
        "window": [lo, hi],
        "dims": {str(n): c.dim(n) for n in range(lo, hi + 1)},
        "differentials": {str(n): _matrix(c.d(n)) for n in range(lo + 1, hi + 1)},
    }


def _components(m: ChainMap) -> dict:
    degs = sorted(set(m.source.dims) & set(m.target.dims))
    return {str(n): _matrix(m.comp(n)) for n in degs}


def _chain_map(m: ChainMap) -> dict:
    return {"source": _complex(m.source), "target": _complex(m.target), "components": _components(m)}


def _groupoid(x: FinGroupoid) -> dict:
    return {
        "objects": list(x.objects),
        "morphisms": [{"label": x.mor_labels[m], "src": x.src[m], "tgt": x.tgt[m]} for m in range(x.n_morphisms)],
        "compose": [[g, f, h] for (g, f), h in sorted(x.comp.items())],
        "identity": list(x.identity),
        "inverse": list(x.inverse),
    }


def _functor(f: GroupoidFunctor) -> dict:
    return {"source": _groupoid(f.source), "target": _groupoid(f.target), "object_map": list(f.obj_map), "morphism_map": list(f.mor_map)}


def _fibers(v: LocalSystem) -> dict:
    x = v.base
    return {
        "field": _field(v.field),
        "at": {x.objects[o]: _complex(v.at[o]) for o in range(x.n_objects)},
        "along": {x.mor_labels[m]: _components(v.along[m]) for m in range(x.n_morphisms)},
    }


def _system(v: LocalSystem) -> dict:
    out = _fibers(v)
    out["base"] = _groupoid(v.base)
    return out


def _system_map(m: SystemMap) -> dict:
    x = m.source.base
    return {
        "base": _groupoid(x),
        "source": _fibers(m.source),
        "target": _fibers(m.target),
        "components": {x.objects[o]: _components(m.components[o]) for o in range(x.n_objects)},
    }


def _simplicial(v: TruncSimplicialComplex) -> dict:
    return {
        "field": _field(v.field),
        "skeletal_degree": v.D,
        "levels": [_complex(c) for c in v.levels],
        "faces": {f"{n},{i}": _components(m) for (n, i), m in sorted(v.faces.items())},
        "degeneracies": {f"{n},{i}": _components(m) for (n, i), m in sorted(v.degens.items())},
    }


def _simplicial_map(m: TruncSimplicialMap) -> dict:
    return {"source": _simplicial(m.source), "target": _simplicial(m.target), "levels": [_components(c) for c in m.levels]}


def _loc_object(a: LocObject) -> dict:
    return {"base": _groupoid(a.base), "system": _fibers(a.system)}


def _loc_morphism(m: LocMorphism) -> dict:
    x = m.source.base
    return {
        "source": _loc_object(m.source),
        "target": _loc_object(m.target),
        "base_map": {"object_map": list(m.f.obj_map), "morphism_map": list(m.f.mor_map)},
        "component": {x.objects[o]: _components(m.phi.components[o]) for o in range(x.n_objects)},
    }


_ENCODERS = [
    (Field, "field", _field),
    (ChainComplex, "complex", _complex),
    (ChainMap, "chain_map", _chain_map),
    (FinGroupoid, "groupoid", _groupoid),
    (GroupoidFunctor, "functor", _functor),
    (LocalSystem, "system", _system),
    (SystemMap, "system_map", _system_map),
    (TruncSimplicialComplex, "simplicial", _simplicial),
    (TruncSimplicialMap, "simplicial_map", _simplicial_map),
    (LocObject, "loc_object", _loc_object),
    (LocMorphism, "loc_morphism", _loc_morphism),
]


def kind_of(x) -> str:
    for cls, kind, _ in _ENCODERS:
        if isinstance(x, cls):
            return kind
    raise LocsysError(f"no text format for {type(x).__name__}")


def to_record(x) -> dict:
    """The full document record (format_version, kind, payload) as plain JSON data."""
    for cls, kind, enc in _ENCODERS:
        if isinstance(x, cls):
            return {"format_version": FORMAT_VERSION, "kind": kind, "payload": enc(x)}
    raise LocsysError(f"no text format for {type(x).__name__}")


def dumps(record) -> str:
    return json.dumps(record, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def encode(x) -> str:
    if isinstance(x, Document):
        x = x.payload
    return dumps(to_record(x))


# ---------------------------------------------------------------- decoding


def _get(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise _Bad(path, "expected an object")
    if key not in obj:
        raise _Bad(path, f"missing key {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise _Bad(path + (key,), f"{key!r} has the wrong type")
    return val


def _nat(x, path) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise _Bad(path, "expected a natural number")
    return x


def _int(x, path) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise _Bad(path, "expected an integer")
    return x


def _int_key(k: str, path) -> int:
    if not re.fullmatch(r"-?\d+", k):
        raise _Bad(path, f"degree key {k!r} is not an integer")
    return int(k)


def _dec_field(d, path) -> Field:
    kind = _get(d, "kind", path, str)
    if kind == "rational":
        return Field(0)
    if kind == "prime":
        p = _nat(_get(d, "p", path), path + ("p",))
        try:
            return Field(p)
        except LocsysError as e:
            raise _Bad(path + ("p",), str(e))
    raise _Bad(path + ("kind",), f"unknown field kind {kind!r}")


_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def _dec_scalar(f: Field, x, path):
    if f.is_rational:
        if not isinstance(x, str) or not _RATIONAL.fullmatch(x):
            raise _Bad(path, "rational scalar must be an \"a/b\" string")
        q = Fraction(x)
        if str(q) != x:
            raise _Bad(path, f"rational {x!r} is not in lowest terms")
        return q
    if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < f.p:
        raise _Bad(path, f"residue must be an integer in [0, {f.p})")
    return x


def _dec_matrix(f: Field, d, path, shape) -> Matrix:
    rows = _nat(_get(d, "rows", path), path + ("rows",))
    cols = _nat(_get(d, "cols", path), path + ("cols",))
    if shape is not None and (rows, cols) != shape:
        raise _Bad(path, f"matrix shape {(rows, cols)} does not match {shape}")
    entries = _get(d, "entries", path, list)
    if len(entries) != rows or any(not isinstance(r, list) or len(r) != cols for r in entries):
        raise _Bad(path + ("entries",), f"entries do not form a {rows}x{cols} array")
    data = [[_dec_scalar(f, x, path + ("entries",)) for x in r] for r in entries]
    return Matrix._raw(f, data, cols)


def _dec_complex(d, path, field=None) -> ChainComplex:
    f = _dec_field(_get(d, "field", path), path + ("field",))
    if field is not None and f != field:
        raise _Bad(path + ("field",), "complex over a different field")
    win = _get(d, "window", path, list)
    if len(win) != 2:
        raise _Bad(path + ("window",), "window must be [lo, hi]")
    lo, hi = _int(win[0], path + ("window",)), _int(win[1], path + ("window",))
    dims = {}
    for k, v in _get(d, "dims", path, dict).items():
        n = _int_key(k, path + ("dims",))
        dims[n] = _nat(v, path + ("dims", k))
        if dims[n] and not lo <= n <= hi:
            raise _Bad(path + ("dims", k), "nonzero dimension outside the window")
    diffs = {}
    for k, v in _get(d, "differentials", path, dict).items():
        n = _int_key(k, path + ("differentials",))
        diffs[n] = _dec_matrix(f, v, path + ("differentials", k), (dims.get(n - 1, 0), dims.get(n, 0)))
    c = ChainComplex(f, dims, diffs)
    try:
        validate_complex(c)
    except LocsysError as e:
        raise _Bad(path + ("differentials",), str(e))
    return c


def _dec_components(d, path, src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    if not isinstance(d, dict):
        raise _Bad(path, "expected components keyed by degree")
    comps = {}
    for k, v in d.items():
        n = _int_key(k, path)
        comps[n] = _dec_matrix(src.field, v, path + (k,), (tgt.dim(n), src.dim(n)))
    m = ChainMap(src, tgt, comps)
    try:
        validate_chain_map(m)
    except LocsysError as e:
        raise _Bad(path, str(e))
    return m


def _dec_chain_map(d, path) -> ChainMap:
    src = _dec_complex(_get(d, "source", path), path + ("source",))
    tgt = _dec_complex(_get(d, "target", path), path + ("target",), src.field)
    return _dec_components(_get(d, "components", path), path + ("components",), src, tgt)


def _dec_groupoid(d, path) -> FinGroupoid:
    objs = _get(d, "objects", path, list)
    if any(not isinstance(o, str) for o in objs):
        raise _Bad(path + ("objects",), "object labels must be strings")
    mors = []
    for i, m in enumerate(_get(d, "morphisms", path, list)):
        p = path + ("morphisms",)
        mors.append((_get(m, "label", p, str), _nat(_get(m, "src", p), p), _nat(_get(m, "tgt", p), p)))
    comp = {}
    for t in _get(d, "compose", path, list):
        if not isinstance(t, list) or len(t) != 3:
            raise _Bad(path + ("compose",), "composition entries are [g, f, g o f] triples")
        g, f, h = (_nat(a, path + ("compose",)) for a in t)
        comp[(g, f)] = h
    ident = [_nat(a, path + ("identity",)) for a in _get(d, "identity", path, list)]
    inv = [_nat(a, path + ("inverse",)) for a in _get(d, "inverse", path, list)]
    n = len(mors)
    if len(ident) != len(objs) or len(inv) != n or any(a >= n for a in ident + inv) or any(h >= n for h in comp.values()):
        raise _Bad(path, "identity or inverse table has the wrong size")
    try:
        x = FinGroupoid(objs, mors, comp, ident, inv)
        validate_groupoid(x)
    except (LocsysError, KeyError) as e:
        raise _Bad(path + ("compose",), f"groupoid laws fail: {e}")
    return x


def _index_list(vals, path, bound) -> List[int]:
    if not isinstance(vals, list):
        raise _Bad(path, "expected a list of indices")
    out = [_nat(v, path) for v in vals]
    if any(v >= bound for v in out):
        raise _Bad(path, "index out of range")
    return out


def _dec_functor(d, path) -> GroupoidFunctor:
    x = _dec_groupoid(_get(d, "source", path), path + ("source",))
    y = _dec_groupoid(_get(d, "target", path), path + ("target",))
    return _functor_from(x, y, d, path)


def _functor_from(x, y, d, path) -> GroupoidFunctor:
    om = _index_list(_get(d, "object_map", path), path + ("object_map",), y.n_objects)
    mm = _index_list(_get(d, "morphism_map", path), path + ("morphism_map",), y.n_morphisms)
    try:
        f = GroupoidFunctor(x, y, om, mm)
        validate_functor(f)
    except LocsysError as e:
        raise _Bad(path + ("morphism_map",), str(e))
    return f


def _keyed(d, path, labels: Sequence[str]) -> List:
    if not isinstance(d, dict) or set(d) != set(labels):
        raise _Bad(path, "keys must be exactly the labels of the base")
    return [d[k] for k in labels]


def _dec_fibers(d, path, x: FinGroupoid) -> LocalSystem:
    f = _dec_field(_get(d, "field", path), path + ("field",))
    at_docs = _keyed(_get(d, "at", path), path + ("at",), x.objects)
    at = [_dec_complex(c, path + ("at", x.objects[o]), f) for o, c in enumerate(at_docs)]
    al_docs = _keyed(_get(d, "along", path), path + ("along",), x.mor_labels)
    along = [_dec_components(c, path + ("along", x.mor_labels[m]), at[x.src[m]], at[x.tgt[m]]) for m, c in enumerate(al_docs)]
    v = LocalSystem(x, at, along, f)
    try:
        validate_system(v)
    except LocsysError as e:
        raise _Bad(path + ("along",), str(e))
    return v


def _dec_system(d, path) -> LocalSystem:
    x = _dec_groupoid(_get(d, "base", path), path + ("base",))
    return _dec_fibers(d, path, x)


def _system_components(d, path, src: LocalSystem, tgt: LocalSystem) -> SystemMap:
    x = src.base
    docs = _keyed(d, path, x.objects)
    comps = [_dec_components(c, path + (x.objects[o],), src.at[o], tgt.at[o]) for o, c in enumerate(docs)]
    m = SystemMap(src, tgt, comps)
    try:
        validate_system_map(m)
    except LocsysError as e:
        raise _Bad(path, str(e))
    return m


def _dec_system_map(d, path) -> SystemMap:
    x = _dec_groupoid(_get(d, "base", path), path + ("base",))
    src = _dec_fibers(_get(d, "source", path), path + ("source",), x)
    tgt = _dec_fibers(_get(d, "target", path), path + ("target",), x)
    if src.field != tgt.field:
        raise _Bad(path + ("target",), "systems over different fields")
    return _system_components(_get(d, "components", path), path + ("components",), src, tgt)


def _pair_key(k: str, path) -> Tuple[int, int]:
    m = re.fullmatch(r"(\d+),(\d+)", k)
    if not m:
        raise _Bad(path, f"key {k!r} is not of the form \"n,i\"")
    return int(m.group(1)), int(m.group(2))


def _dec_simplicial(d, path) -> TruncSimplicialComplex:
    f = _dec_field(_get(d, "field", path), path + ("field",))
    D = _nat(_get(d, "skeletal_degree", path), path + ("skeletal_degree",))
    levels = [_dec_complex(c, path + ("levels",), f) for c in _get(d, "levels", path, list)]
    if len(levels) != D + 1:
        raise _Bad(path + ("levels",), f"expected {D + 1} levels")
    faces, degens = {}, {}
    for key, store, step in (("faces", faces, -1), ("degeneracies", degens, 1)):
        for k, v in _get(d, key, path, dict).items():
            n, i = _pair_key(k, path + (key,))
            if not (0 <= i <= n and 0 <= n + step <= D and n <= D):
                raise _Bad(path + (key, k), "index out of range")
            store[(n, i)] = _dec_components(v, path + (key, k), levels[n], levels[n + step])
    try:
        s = TruncSimplicialComplex(f, D, tuple(levels), faces, degens)
        validate_simplicial(s)
    except LocsysError as e:
        raise _Bad(path + ("faces",), str(e))
    return s


def _dec_simplicial_map(d, path) -> TruncSimplicialMap:
    src = _dec_simplicial(_get(d, "source", path), path + ("source",))
    tgt = _dec_simplicial(_get(d, "target", path), path + ("target",))
    docs = _get(d, "levels", path, list)
    if len(docs) != src.D + 1 or src.D != tgt.D:
        raise _Bad(path + ("levels",), "level count mismatch")
    levels = tuple(_dec_components(c, path + ("levels",), src.levels[n], tgt.levels[n]) for n, c in enumerate(docs))
    try:
        m = TruncSimplicialMap(src, tgt, levels)
        validate_simplicial_map(m)
    except LocsysError as e:
        raise _Bad(path + ("levels",), str(e))
    return m


def _dec_loc_object(d, path) -> LocObject:
    x = _dec_groupoid(_get(d, "base", path), path + ("base",))
    return LocObject(x, _dec_fibers(_get(d, "system", path), path + ("system",), x))


def _dec_loc_morphism(d, path) -> LocMorphism:
    a = _dec_loc_object(_get(d, "source", path), path + ("source",))
    b = _dec_loc_object(_get(d, "target", path), path + ("target",))
    f = _functor_from(a.base, b.base, _get(d, "base_map", path), path + ("base_map",))
    phi = _system_components(_get(d, "component", path), path + ("component",), a.system, pull_system(f, b.system))
    return LocMorphism(a, b, f, phi)


_DECODERS = {
    "field": _dec_field,
    "complex": _dec_complex,
    "chain_map": _dec_chain_map,
    "groupoid": _dec_groupoid,
    "functor": _dec_functor,
    "system": _dec_system,
    "system_map": _dec_system_map,
    "simplicial": _dec_simplicial,
    "simplicial_map": _dec_simplicial_map,
    "loc_object": _dec_loc_object,
    "loc_morphism": _dec_loc_morphism,
}


def _line_of(text: str, path: Tuple) -> int:
    """Best-effort line of a JSON path: walk forward through the key names in order."""
    lines = text.splitlines()
    line = 0
    for key in path:
        if not isinstance(key, str):
            continue
        needle = json.dumps(key) + ":"
        for i in range(line, len(lines)):
            if needle in lines[i]:
                line = i
                break
    return line + 1


def from_record(rec, text: str = "") -> Document:
    if not isinstance(rec, dict) or "format_version" not in rec:
        raise VersionMismatch("missing format_version")
    if rec["format_version"] != FORMAT_VERSION:
        raise VersionMismatch(f"expected {FORMAT_VERSION!r}, got {rec['format_version']!r}")
    try:
        kind = _get(rec, "kind", ("",), str)
        if kind not in _DECODERS:
            raise _Bad(("kind",), f"unknown kind {kind!r}")
        payload = _DECODERS[kind](_get(rec, "payload", ()), ("payload",))
    except _Bad as e:
        raise ParseError(_line_of(text, e.path), e.reason) from None
    return Document(rec["format_version"], kind, payload)


def decode(text: str) -> Document:
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.msg) from None
    return from_record(rec, text)


def load(path: str) -> Document:
    with open(path, encoding="utf-8") as fh:
        return decode(fh.read())


def save(path: str, x) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(encode(x))
