import json

import numpy as np
import pytest

from hardylab import serialize as S
from hardylab.basis import TMBasis, TMCoordinates
from hardylab.blaschke import BlaschkeProduct
from hardylab.errors import DomainError
from hardylab.hardy import BoundarySamples, CoeffVec
from hardylab.instances import h2_space, planted_space, torus_planted
from hardylab.torus import CoeffGrid, monomial


def roundtrip(obj):
    return json.loads(S.dumps(obj))


def test_function_roundtrip():
    f = CoeffVec([1, 2j, -0.5 + 0.25j])
    d = roundtrip(S.function_json(f))
    assert d == {"degree": 2, "coeffs": [[1.0, 0.0], [0.0, 2.0], [-0.5, 0.25]]}
    np.testing.assert_array_equal(S.function_from_json(d).coeffs, f.coeffs)


def test_function_degree_mismatch():
    with pytest.raises(DomainError):
        S.function_from_json({"degree": 3, "coeffs": [[1, 0]]})


def test_negative_zero_normalized():
    assert S.dumps(S.complex_array_json([-0.0 - 0.0j])) == S.dumps(S.complex_array_json([0j]))


def test_samples_roundtrip():
    s = BoundarySamples([1, 1j, -1, -1j])
    np.testing.assert_array_equal(S.samples_from_json(roundtrip(S.samples_json(s))).values, s.values)


def test_tm_roundtrip_and_shape_check():
    g = TMCoordinates(np.arange(6).reshape(2, 3) * (1 + 1j))
    d = roundtrip(S.tm_json(g))
    assert (d["n"], d["m_max"]) == (2, 2)
    np.testing.assert_array_equal(S.tm_from_json(d).grid, g.grid)
    d["m_max"] = 5
    with pytest.raises(DomainError):
        S.tm_from_json(d)


def test_pairs_required():
    with pytest.raises(DomainError):
        S.complex_array_from_json([1.0, 2.0, 3.0])


def test_zeros_forms():
    assert S.zeros_from_json([[0, 0], [0.5, 0]]).zeros == (0j, 0.5 + 0j)
    assert S.zeros_from_json({"zeros": [[0, 0]]}).order == 1


def test_space_roundtrip():
    basis = TMBasis(BlaschkeProduct([0, 0.5]), m_max=4)
    H = planted_space(basis, [basis.unit(0, 0), basis.unit(1, 0)], [1.0, 4.0])
    H2 = S.space_from_json(roundtrip(S.space_json(H)))
    np.testing.assert_array_equal(H2.gram, H.gram)
    assert len(H2.generators) == len(H.generators) and H2.basis.m_max == 4
    assert not S.is_torus_space(S.space_json(h2_space(basis)))


def test_space_default_gram():
    basis = TMBasis(BlaschkeProduct([0]), m_max=3)
    d = S.space_json(h2_space(basis, scale=2.0))
    d.pop("gram")
    np.testing.assert_allclose(S.space_from_json(d).gram, np.eye(4))


def test_torus_roundtrip():
    H = torus_planted(monomial(1, 0), box=(4, 4), c=0.5)
    d = roundtrip(S.torus_space_json(H))
    assert S.is_torus_space(d)
    H2 = S.torus_space_from_json(d)
    assert H2.box == (4, 4)
    np.testing.assert_array_equal(H2.gram, H.gram)


def test_grid_schema():
    d = S.grid_json(CoeffGrid(np.ones((2, 3))))
    assert (d["nz"], d["nw"]) == (1, 2)
    np.testing.assert_array_equal(S.grid_from_json(d).grid, np.ones((2, 3)))
