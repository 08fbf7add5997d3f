import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardylab.basis import TMBasis, basis_element, from_tm, shift_B
from hardylab.blaschke import BlaschkeProduct
from hardylab.bmatrix import build_b_matrix, is_b_inner_gram, is_b_inner_pointwise
from hardylab.errors import DomainError, ExpansionError
from hardylab.hardy import CoeffVec
from hardylab.instances import b_inner_grids, planted_functions, random_blaschke


@pytest.fixture(scope="module")
def b_half():
    return TMBasis(BlaschkeProduct([0, 0.5]), m_max=16)


@pytest.fixture(scope="module")
def b_z():
    return TMBasis(BlaschkeProduct([0]), m_max=32)


def verdicts(tup, basis):
    p = is_b_inner_pointwise(build_b_matrix(tup, basis), M=4096, tol=1e-7)
    g = is_b_inner_gram(tup, basis, m_max=16, tol=1e-7)
    return p, g


class TestBuild:
    def test_single_e00(self, b_half):
        A = build_b_matrix([basis_element(b_half, 0, 0)], b_half)
        expected = np.zeros((2, 1, 17))
        expected[0, 0, 0] = 1
        np.testing.assert_allclose(A.entries, expected, atol=1e-12)

    def test_identity_pair(self, b_half):
        A = build_b_matrix([basis_element(b_half, 0, 0), basis_element(b_half, 1, 0)], b_half)
        np.testing.assert_allclose(A.entries[:, :, 0], np.eye(2), atol=1e-12)
        assert np.abs(A.entries[:, :, 1:]).max() <= 1e-12

    def test_B_times_e00_is_w(self, b_half):
        Be = from_tm(shift_B(b_half.unit(0, 0)), b_half)
        A = build_b_matrix([Be], b_half)
        np.testing.assert_allclose(A.column(0).grid, b_half.unit(0, 1).grid, atol=1e-12)

    def test_reconstruction(self, b_half):
        rng = np.random.default_rng(12)
        tup = planted_functions(b_half, b_inner_grids(b_half, rng, 2))
        A = build_b_matrix(tup, b_half)
        for j, phi in enumerate(tup):
            assert (from_tm(A.column(j), b_half) - phi).norm() <= 1e-8

    def test_residual_too_large(self):
        basis = TMBasis(BlaschkeProduct([0]), m_max=2)
        with pytest.raises(ExpansionError):
            build_b_matrix([CoeffVec(np.eye(6)[5])], basis)


class TestPointwise:
    def test_identity_pair(self, b_half):
        v = is_b_inner_pointwise(build_b_matrix([basis_element(b_half, 0, 0), basis_element(b_half, 1, 0)],
                                                b_half))
        assert v.b_inner and v.max_deviation <= 1e-10

    def test_ones(self, b_half):
        v = is_b_inner_pointwise(build_b_matrix([CoeffVec([1]), CoeffVec([1])], b_half))
        assert not v.b_inner and v.max_deviation == pytest.approx(1)

    def test_e10_alone(self, b_half):
        p, g = verdicts([basis_element(b_half, 1, 0)], b_half)
        assert p.b_inner and g.b_inner

    def test_needs_power_of_two(self, b_half):
        with pytest.raises(DomainError):
            is_b_inner_pointwise(build_b_matrix([CoeffVec([1])], b_half), M=1000)


class TestGram:
    def test_one(self, b_z):
        assert is_b_inner_gram([CoeffVec([1])], b_z).b_inner

    def test_one_and_z(self, b_z):
        v = is_b_inner_gram([CoeffVec([1]), CoeffVec([0, 1])], b_z)
        assert not v.b_inner and v.max_deviation == pytest.approx(1)


class TestAgreement:
    def test_zero_member_never_inner(self, b_half):
        p, g = verdicts([basis_element(b_half, 0, 0), CoeffVec([0])], b_half)
        assert not p.b_inner and not g.b_inner

    @given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi))
    @settings(max_examples=10, deadline=None)
    def test_unimodular_stability(self, seed, theta):
        rng = np.random.default_rng(seed)
        basis = TMBasis(BlaschkeProduct([0, 0.5]), m_max=16)
        tup = planted_functions(basis, b_inner_grids(basis, rng, 2))
        before = verdicts(tup, basis)
        tup[0] = tup[0] * np.exp(1j * theta)
        after = verdicts(tup, basis)
        assert [v.b_inner for v in before] == [v.b_inner for v in after] == [True, True]

    @given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.sampled_from(["inner", "corrupt", "poly"]))
    @settings(max_examples=25, deadline=None)
    def test_lemma_equivalence(self, n, seed, kind):
        rng = np.random.default_rng(seed)
        basis = TMBasis(random_blaschke(rng, n))
        r = int(rng.integers(1, n + 1))
        if kind == "poly":
            tup = [CoeffVec(rng.standard_normal(33) + 1j * rng.standard_normal(33)) for _ in range(r)]
            tup = [f * (1 / f.norm()) for f in tup]
        else:
            grids = b_inner_grids(basis, rng, r)
            if kind == "corrupt":
                grids[0] = grids[0] + basis.unit(0, 0) * 1e-3
            tup = planted_functions(basis, grids)
        p, g = verdicts(tup, basis)
        assert p.b_inner == g.b_inner
        assert p.b_inner == (kind == "inner")
