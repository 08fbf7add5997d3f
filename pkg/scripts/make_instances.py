"""Regenerate the bundled instance files in src/hardylab/data/.

    python3 scripts/make_instances.py [--out DIR]
"""

import argparse
from pathlib import Path

import numpy as np

from hardylab import serialize as S
from hardylab.basis import TMBasis
from hardylab.blaschke import BlaschkeProduct
from hardylab.hardy import CoeffVec
from hardylab.instances import (b_inner_grids, h2_space, planted_functions, planted_space, shifted_space,
                                torus_planted, torus_zw_control)
from hardylab.torus import monomial

DATA = Path(__file__).resolve().parents[1] / "src" / "hardylab" / "data"


def write(out: Path, name: str, obj) -> None:
    (out / name).write_text(S.dumps(obj))
    print(f"wrote {name}")


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240501)
    z = BlaschkeProduct([0])
    two = BlaschkeProduct([0, 0.5])
    write(out, "zeros_z.json", {"zeros": S.zeros_json(z)})
    write(out, "zeros_two.json", {"zeros": S.zeros_json(two)})
    write(out, "tuple_one.json", S.tuple_json([CoeffVec([1])]))
    write(out, "tuple_ones.json", S.tuple_json([CoeffVec([1]), CoeffVec([1])]))

    bz = TMBasis(z, m_max=16)
    b2 = TMBasis(two, m_max=16)
    write(out, "tuple_random.json", S.tuple_json(planted_functions(b2, b_inner_grids(b2, rng, 2))))

    write(out, "h2_standard.json", S.space_json(h2_space(bz)))
    write(out, "zshift.json", S.space_json(shifted_space(bz)))
    write(out, "planted_two.json", S.space_json(planted_space(b2, b_inner_grids(b2, rng, 2), [1.0, 1.0], rng)))
    b8 = TMBasis(two, m_max=8)
    write(out, "weighted_k14.json", S.space_json(planted_space(b8, [b8.unit(0, 0), b8.unit(1, 0)], [1.0, 4.0])))

    phi = monomial(1, 2)
    write(out, "torus_planted.json", S.torus_space_json(torus_planted(phi, box=(8, 8), c=1 / 9, rng=rng)))
    write(out, "torus_zw_control.json", S.torus_space_json(torus_zw_control(box=(8, 8))))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DATA)
    main(ap.parse_args().out)
