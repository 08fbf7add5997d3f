"""JSON schemas. Complex numbers are always [re, im] pairs.

function   {"degree": N, "coeffs": [[re, im], ...]}
samples    {"samples": [[re, im], ...]}
TM grid    {"n": n, "m_max": M, "grid": [[[re, im], ...], ...]}    (row-major in j)
tuple      {"tuple": [function, ...]}
space      {"zeros": [[re, im], ...], "m_max": M, "generators": [TM grid, ...],
            "gram": [[[re, im], ...], ...] (optional), "p": float, "closure_depth": int}
torus grid {"nz": Nz, "nw": Nw, "grid": [[[re, im], ...], ...]}   (row-major in the z-index)
torus space {"box": [Bz, Bw], "generators": [torus grid, ...], "gram": ... (optional), "p": float}
"""

from __future__ import annotations

import json

import numpy as np

from .basis import TMBasis, TMCoordinates
from .blaschke import BlaschkeProduct
from .errors import DomainError
from .hardy import BoundarySamples, CoeffVec
from .torus import CoeffGrid, TorusSubspace
from .wold import SubHilbertSpace


def _c(z: complex) -> list:
    z = complex(z)
    # normalize -0.0 so output bytes do not depend on the sign of zero
    return [z.real + 0.0, z.imag + 0.0]


def complex_array_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return _c(a)
    return [complex_array_json(x) for x in a]


def complex_array_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1:] != (2,):
        raise DomainError("complex values must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def function_json(f: CoeffVec) -> dict:
    return {"degree": f.degree, "coeffs": complex_array_json(f.coeffs)}


def function_from_json(d: dict) -> CoeffVec:
    c = complex_array_from_json(d["coeffs"])
    if "degree" in d and int(d["degree"]) != c.size - 1:
        raise DomainError(f"degree {d['degree']} does not match {c.size} coefficients")
    return CoeffVec(c)


def samples_json(s: BoundarySamples) -> dict:
    return {"samples": complex_array_json(s.values)}


def samples_from_json(d: dict) -> BoundarySamples:
    return BoundarySamples(complex_array_from_json(d["samples"]))


def tm_json(c: TMCoordinates) -> dict:
    return {"n": c.n, "m_max": c.m_max, "grid": complex_array_json(c.grid)}


def tm_from_json(d: dict) -> TMCoordinates:
    g = complex_array_from_json(d["grid"])
    if g.ndim != 2 or g.shape != (int(d["n"]), int(d["m_max"]) + 1):
        raise DomainError(f"TM grid shape {g.shape} does not match n={d['n']}, m_max={d['m_max']}")
    return TMCoordinates(g)


def tuple_json(tup) -> dict:
    return {"tuple": [function_json(f) for f in tup]}


def tuple_from_json(d: dict) -> list[CoeffVec]:
    return [function_from_json(f) for f in d["tuple"]]


def zeros_from_json(d) -> BlaschkeProduct:
    if isinstance(d, dict):
        d = d["zeros"]
    return BlaschkeProduct(complex_array_from_json(d) if len(d) else [])


def zeros_json(B: BlaschkeProduct) -> list:
    return complex_array_json(B.zeros)


def space_json(H: SubHilbertSpace) -> dict:
    return {"zeros": zeros_json(H.basis.blaschke), "m_max": H.basis.m_max,
            "generators": [tm_json(g) for g in H.generators],
            "gram": complex_array_json(H.gram), "p": H.p, "closure_depth": H.closure_depth}


def space_from_json(d: dict, degree: int | None = None) -> SubHilbertSpace:
    B = zeros_from_json(d["zeros"])
    basis = TMBasis(B, m_max=int(d["m_max"]), degree=degree)
    gens = [tm_from_json(g) for g in d["generators"]]
    gram = complex_array_from_json(d["gram"]) if d.get("gram") is not None else None
    return SubHilbertSpace(basis, gens, gram, closure_depth=int(d.get("closure_depth", 4)),
                           p=float(d.get("p", 2.0)))


def grid_json(g: CoeffGrid) -> dict:
    nz, nw = g.degrees
    return {"nz": nz, "nw": nw, "grid": complex_array_json(g.grid)}


def grid_from_json(d: dict) -> CoeffGrid:
    g = complex_array_from_json(d["grid"])
    if g.ndim != 2 or g.shape != (int(d["nz"]) + 1, int(d["nw"]) + 1):
        raise DomainError(f"grid shape {g.shape} does not match nz={d['nz']}, nw={d['nw']}")
    return CoeffGrid(g)


def torus_space_json(H: TorusSubspace) -> dict:
    return {"box": list(H.box), "generators": [grid_json(g) for g in H.generators],
            "gram": complex_array_json(H.gram), "p": H.p, "closure_depth": H.closure_depth}


def torus_space_from_json(d: dict) -> TorusSubspace:
    gram = complex_array_from_json(d["gram"]) if d.get("gram") is not None else None
    return TorusSubspace([grid_from_json(g) for g in d["generators"]], gram,
                         box=tuple(d.get("box", (16, 16))), closure_depth=int(d.get("closure_depth", 4)),
                         p=float(d.get("p", 2.0)))


def is_torus_space(d: dict) -> bool:
    return "box" in d or ("generators" in d and d["generators"] and "nz" in d["generators"][0])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"
