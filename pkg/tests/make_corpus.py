"""Regenerate the example documents in tests/data (run from the repo root)."""

import pathlib
import random

from locsys.chain import disk, gen_acyclic_cof, gen_cof, sphere
from locsys.codec import save
from locsys.groupoid import GroupoidFunctor, codiscrete, connected, cyclic_group, delooping, discrete, point, symmetric_group
from locsys.integral import LocMorphism, LocObject, external_tensor
from locsys.linalg import Field, Matrix
from locsys.local_systems import SystemMap, constant_system, pull_system, regular_representation
from locsys.random_objects import random_chain_map, random_complex, random_groupoid, random_system, random_system_map
from locsys.simplicial import const, simplex_object, vertex_inclusion
from locsys.chain import ChainMap

OUT = pathlib.Path(__file__).parent / "data"


def main() -> None:
    rng = random.Random(2024)
    f2, f3, f5, q = Field(2), Field(3), Field(5), Field(0)
    docs = {
        "field_f5": f5,
        "field_q": q,
        "sphere2": sphere(2, f3),
        "disk1_q": disk(1, q),
        "i1": gen_cof(1, f3),
        "j2": gen_acyclic_cof(2, q),
    }
    c, d = random_complex(f5, rng), random_complex(f5, rng)
    docs["complex_f5"] = c
    docs["chain_map_f5"] = random_chain_map(c, d, rng)
    cq = random_complex(q, rng)
    docs["chain_map_q"] = random_chain_map(cq, cq, rng)

    bc2 = delooping(cyclic_group(2))
    docs["groupoid_bc2"] = bc2
    docs["groupoid_s3x2"] = connected(symmetric_group(3), 2)
    docs["groupoid_discrete2"] = discrete(2)
    x = random_groupoid(rng, 4)
    docs["groupoid_random"] = x
    inc = GroupoidFunctor(point(), bc2, [0], [0])
    docs["functor_pt_bc2"] = inc
    docs["functor_collapse"] = GroupoidFunctor(codiscrete(2), point(), [0, 0], [0] * 4)

    reg = regular_representation(cyclic_group(2), f3)
    docs["system_reg_c2_f3"] = reg
    v = random_system(x, f2, rng)
    w = random_system(x, f2, rng)
    docs["system_random_f2"] = v
    docs["system_map_random_f2"] = random_system_map(v, w, rng)

    docs["simplicial_delta1"] = simplex_object(1, 2, sphere(0, f3))
    docs["simplicial_const_q"] = const(disk(1, q), 2)
    docs["simplicial_map_vertex"] = vertex_inclusion(1, 0, 2, sphere(0, f3))

    pt = point()
    kpt = LocObject(pt, constant_system(pt, sphere(0, f3)))
    kreg = LocObject(bc2, reg)
    docs["loc_k_pt"] = kpt
    docs["loc_reg_bc2"] = kreg
    e0 = ChainMap(kpt.system.at[0], reg.at[0], {0: Matrix.from_rows(f3, [[1], [0]], 1)})
    docs["loc_basis_inclusion"] = LocMorphism(kpt, kreg, inc, SystemMap(kpt.system, pull_system(inc, reg), [e0]))
    y2 = discrete(2)
    r = LocObject(y2, constant_system(y2, sphere(0, f2)))
    docs["loc_r_discrete"] = r
    docs["loc_external_tensor"] = external_tensor(kpt, kreg)

    OUT.mkdir(exist_ok=True)
    for name, obj in docs.items():
        save(str(OUT / f"{name}.doc"), obj)


if __name__ == "__main__":
    main()
