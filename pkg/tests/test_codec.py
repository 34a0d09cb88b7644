import json
import pathlib
import random

import pytest
from hypothesis import given

from conftest import F2, F3, Q, fields, seeds
from locsys import codec
from locsys.chain import ChainComplex, sphere
from locsys.errors import ParseError, VersionMismatch
from locsys.integral import LocObject, identity_loc
from locsys.random_objects import random_chain_map, random_complex, random_functor, random_groupoid, random_system, random_system_map
from locsys.simplicial import const, simplex_object

DATA = pathlib.Path(__file__).parent / "data"
CORPUS = sorted(DATA.glob("*.doc"))


def round_trip(x):
    text = codec.encode(x)
    doc = codec.decode(text)
    assert doc.payload == x
    assert codec.encode(doc.payload) == text
    return doc


def test_sphere_round_trip():
    doc = round_trip(sphere(2, F3))
    assert doc.kind == "complex" and doc.format_version == "locsys/1"


def test_encoding_is_canonical():
    text = codec.encode(ChainComplex(Q, {0: 1, 1: 1}, {1: [[Q.elem(2) / 4]]}))
    rec = json.loads(text)
    assert rec["payload"]["differentials"]["1"]["entries"] == [["1/2"]]
    assert text == json.dumps(rec, sort_keys=True, indent=1) + "\n"


def test_malformed_differential_shape():
    rec = json.loads(codec.encode(ChainComplex(F3, {0: 1, 1: 1}, {1: [[1]]})))
    rec["payload"]["differentials"]["1"]["entries"] = [[1, 2]]
    text = json.dumps(rec, sort_keys=True, indent=1)
    with pytest.raises(ParseError) as e:
        codec.decode(text)
    assert e.value.line > 1


def test_version_errors():
    rec = json.loads(codec.encode(sphere(0, F2)))
    del rec["format_version"]
    with pytest.raises(VersionMismatch):
        codec.decode(json.dumps(rec))
    rec["format_version"] = "locsys/0"
    with pytest.raises(VersionMismatch):
        codec.decode(json.dumps(rec))


def test_syntax_and_law_errors():
    with pytest.raises(ParseError) as e:
        codec.decode('{\n "kind": \n}')
    assert e.value.line == 3
    rec = json.loads(codec.encode(ChainComplex(F3, {0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[0]]})))
    rec["payload"]["differentials"]["2"]["entries"] = [[1]]
    with pytest.raises(ParseError):
        codec.decode(json.dumps(rec, indent=1))
    rec = json.loads(codec.encode(ChainComplex(Q, {0: 1, 1: 1}, {1: [[Q.one]]})))
    rec["payload"]["differentials"]["1"]["entries"] = [["2/4"]]
    with pytest.raises(ParseError):
        codec.decode(json.dumps(rec))


@pytest.mark.parametrize("path", CORPUS, ids=[p.stem for p in CORPUS])
def test_corpus_round_trip_bit_exact(path):
    text = path.read_text(encoding="utf-8")
    assert codec.encode(codec.decode(text).payload) == text


def test_corpus_covers_every_kind():
    kinds = {codec.decode(p.read_text()).kind for p in CORPUS}
    assert kinds == set(codec.KINDS)


@given(fields, seeds)
def test_random_round_trips(fld, seed):
    rng = random.Random(seed)
    c, d = random_complex(fld, rng), random_complex(fld, rng)
    round_trip(fld)
    round_trip(c)
    round_trip(random_chain_map(c, d, rng))
    x, y = random_groupoid(rng, 3), random_groupoid(rng, 3)
    round_trip(x)
    f = random_functor(x, y, rng)
    round_trip(f)
    v, w = random_system(x, fld, rng), random_system(x, fld, rng)
    round_trip(v)
    round_trip(random_system_map(v, w, rng))
    round_trip(simplex_object(1, 2, random_complex(fld, rng, 0, 1, 2)))
    a = LocObject(x, v)
    round_trip(a)
    round_trip(identity_loc(a))


def test_save_and_load(tmp_path):
    p = tmp_path / "c.doc"
    codec.save(str(p), const(sphere(1, F3), 2))
    assert codec.load(str(p)).payload == const(sphere(1, F3), 2)
