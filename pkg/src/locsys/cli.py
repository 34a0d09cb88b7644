"""Command-line surface: every operation takes document files and prints JSON.

Exit codes: 0 success, 1 a verification suite found failures, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, Tuple

from . import codec, suites
from .chain import ChainComplex, ChainMap, classify_chain_map, hom_complex, homology, pushout_product_chain, tensor, tensor_map
from .errors import LocsysError
from .groupoid import FinGroupoid, GroupoidFunctor, classify_functor, skeletize
from .integral import (
    LocMorphism,
    LocObject,
    classify_integral,
    external_hom,
    external_pushout_product,
    external_tensor,
    external_tensor_map,
    hom_enumerate,
)
from .linalg import Field
from .local_systems import LocalSystem, SystemMap, classify_system_map, cup_tensor, cup_tensor_map, internal_hom, pull_system, push_left, push_right
from .simplicial import TruncSimplicialComplex, TruncSimplicialMap, is_homotopically_constant, is_total_we, tot


class InputError(Exception):
    """Bad command line or unusable input files; exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return codec.decode(fh.read()).payload
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")


def _expect(x, types, what: str):
    if not isinstance(x, types):
        raise InputError(f"{what}: got a {codec.kind_of(x)} document")
    return x


def _json(data) -> str:
    return codec.dumps(data)


def _betti(c: ChainComplex) -> dict:
    return {str(n): k for n, k in sorted(homology(c).items())}


# ---------------------------------------------------------------- commands


def cmd_homology(a) -> str:
    x = _load(a.file)
    if isinstance(x, ChainComplex):
        return _json(_betti(x))
    if isinstance(x, LocalSystem):
        return _json({x.base.objects[o]: _betti(c) for o, c in enumerate(x.at)})
    if isinstance(x, TruncSimplicialComplex):
        return _json(_betti(tot(x)))
    raise InputError("homology expects a complex, system or simplicial document")


def cmd_classify(a) -> str:
    x = _load(a.file)
    if a.kind == "chain":
        return _json(classify_chain_map(_expect(x, ChainMap, "classify --kind chain")).to_dict())
    if a.kind == "groupoid":
        return _json(classify_functor(_expect(x, GroupoidFunctor, "classify --kind groupoid")).to_dict())
    if a.kind == "system":
        flags = classify_system_map(_expect(x, SystemMap, "classify --kind system"))
    else:
        flags = classify_integral(_expect(x, LocMorphism, "classify --kind integral"))
    out = flags.to_dict()
    if flags.cof.evidence:
        out["evidence"] = flags.cof.evidence
    return _json(out)


def cmd_tensor(a) -> str:
    x, y = _load(a.left), _load(a.right)
    if isinstance(x, ChainComplex) and isinstance(y, ChainComplex):
        return codec.encode(tensor(x, y))
    if isinstance(x, ChainMap) and isinstance(y, ChainMap):
        return codec.encode(tensor_map(x, y))
    if isinstance(x, LocalSystem) and isinstance(y, LocalSystem):
        return codec.encode(cup_tensor(x, y))
    if isinstance(x, SystemMap) and isinstance(y, SystemMap):
        return codec.encode(cup_tensor_map(x, y))
    raise InputError("tensor expects two complexes, chain maps, systems or system maps")


def cmd_hom(a) -> str:
    x, y = _load(a.left), _load(a.right)
    if isinstance(x, ChainComplex) and isinstance(y, ChainComplex):
        return codec.encode(hom_complex(x, y))
    if isinstance(x, LocalSystem) and isinstance(y, LocalSystem):
        return codec.encode(internal_hom(x, y))
    raise InputError("hom expects two complexes or two systems over one base")


def cmd_pushout_product(a) -> str:
    x, y = _load(a.left), _load(a.right)
    if isinstance(x, ChainMap) and isinstance(y, ChainMap):
        return codec.encode(pushout_product_chain(x, y))
    if isinstance(x, LocMorphism) and isinstance(y, LocMorphism):
        return codec.encode(external_pushout_product(x, y).morphism)
    raise InputError("pushout-product expects two chain maps or two loc morphisms")


def cmd_kan(a) -> str:
    f = _expect(_load(a.functor), GroupoidFunctor, "kan functor")
    v = _load(a.system)
    if isinstance(v, LocObject):
        v = v.system
    v = _expect(v, LocalSystem, "kan system")
    if a.dir == "pull":
        return codec.encode(pull_system(f, v))
    if a.dir == "left":
        return codec.encode(push_left(f, v).system)
    return codec.encode(push_right(f, v).system)


def cmd_skeletize(a) -> str:
    x = _expect(_load(a.file), FinGroupoid, "skeletize")
    sk = skeletize(x)
    return _json({
        "gamma": list(sk.gamma),
        "iota": codec.to_record(sk.iota),
        "p": codec.to_record(sk.p),
        "skeleton": codec.to_record(sk.skeleton),
    })


def cmd_external_tensor(a) -> str:
    x, y = _load(a.left), _load(a.right)
    if isinstance(x, LocObject) and isinstance(y, LocObject):
        return codec.encode(external_tensor(x, y))
    if isinstance(x, LocMorphism) and isinstance(y, LocMorphism):
        return codec.encode(external_tensor_map(x, y))
    raise InputError("external-tensor expects two loc objects or two loc morphisms")


def cmd_external_hom(a) -> str:
    r = _expect(_load(a.left), LocObject, "external-hom first argument")
    w = _expect(_load(a.right), LocObject, "external-hom second argument")
    return codec.encode(external_hom(r, w).obj)


def cmd_tot(a) -> str:
    return codec.encode(tot(_expect(_load(a.file), TruncSimplicialComplex, "tot")))


def cmd_total_we(a) -> str:
    x = _load(a.file)
    if isinstance(x, TruncSimplicialMap):
        return _json({"total_we": is_total_we(x)})
    if isinstance(x, TruncSimplicialComplex):
        return _json({"homotopically_constant": is_homotopically_constant(x)})
    raise InputError("total-we expects a simplicial map or simplicial object")


def cmd_enumerate_hom(a) -> str:
    x = _expect(_load(a.left), LocObject, "enumerate-hom source")
    y = _expect(_load(a.right), LocObject, "enumerate-hom target")
    ms = hom_enumerate(x, y)
    out = {"count": len(ms)}
    if a.list:
        out["morphisms"] = [codec.to_record(m) for m in ms]
    return _json(out)


def cmd_verify(a) -> Tuple[int, str]:
    if a.replay:
        with open(a.replay, encoding="utf-8") as fh:
            reason = suites.replay(fh.read())
        return (0 if reason is None else 1), _json({"reason": reason, "reproduced": reason is not None})
    if not a.suite:
        raise InputError("verify needs a suite name or --replay")
    fld = Field.parse(a.field) if a.field else None
    report = suites.verify(a.suite, a.seed, a.trials, a.size, fld)
    return (0 if report.ok else 1), _json(report.to_dict())


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="locsys", description="Exact computations with chain complexes and local systems over finite groupoids.")
    common = _Parser(add_help=False)
    common.add_argument("--out", help="also write the output to this file")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def one(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("file")
        s.set_defaults(fn=fn)
        return s

    def two(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("left")
        s.add_argument("right")
        s.set_defaults(fn=fn)
        return s

    one("homology", cmd_homology, "Betti numbers of a complex, system or simplicial object")
    c = one("classify", cmd_classify, "weak equivalence / fibration / cofibration flags")
    c.add_argument("--kind", choices=["chain", "groupoid", "system", "integral"], required=True)
    two("tensor", cmd_tensor, "tensor product")
    two("hom", cmd_hom, "mapping complex or internal hom")
    two("pushout-product", cmd_pushout_product, "pushout-product of two maps")
    k = sub.add_parser("kan", parents=[common], help="pull back or Kan-extend a system along a functor")
    k.add_argument("functor")
    k.add_argument("system")
    k.add_argument("--dir", choices=["left", "pull", "right"], required=True)
    k.set_defaults(fn=cmd_kan)
    one("skeletize", cmd_skeletize, "skeleton with inclusion, retraction and transport")
    two("external-tensor", cmd_external_tensor, "external tensor of loc objects or morphisms")
    two("external-hom", cmd_external_hom, "external hom out of a system over a discrete base")
    one("tot", cmd_tot, "normalized total complex")
    one("total-we", cmd_total_we, "total weak equivalence test")
    e = two("enumerate-hom", cmd_enumerate_hom, "count (or list) all morphisms")
    e.add_argument("--list", action="store_true", help="include every morphism")
    v = sub.add_parser("verify", parents=[common], help="run a randomized law suite")
    v.add_argument("suite", nargs="?")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--size", type=int, default=2)
    v.add_argument("--field", help='pin the field, e.g. "Fp:5" or "Q"')
    v.add_argument("--replay", help="rerun a reproducer document")
    v.set_defaults(fn=cmd_verify)
    return p


def run_command(argv: Sequence[str]) -> Tuple[int, str]:
    """Run one command; returns (exit code, output text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if not getattr(args, "fn", None):
            raise InputError("no command given")
        res = args.fn(args)
        code, text = res if isinstance(res, tuple) else (0, res)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        return code, text
    except (InputError, LocsysError, OSError, json.JSONDecodeError, KeyError) as e:
        return 2, _json({"error": type(e).__name__, "message": str(e)})
    except SystemExit as e:  # --help
        return (e.code if isinstance(e.code, int) else 0), ""


def main(argv: Optional[List[str]] = None) -> int:
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    (sys.stdout if code != 2 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
