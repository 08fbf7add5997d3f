import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardylab.blaschke import BlaschkeProduct, factor_coeffs
from hardylab.errors import DomainError
from hardylab.hardy import from_boundary, roots_of_unity, to_boundary
from hardylab.instances import random_blaschke


def factor_oracle(zeros, z):
    """Per-factor complex arithmetic, written out independently of the class."""
    v = 1 + 0j
    for a in zeros:
        v *= (z - a) / (1 - a.conjugate() * z)
    return v


@st.composite
def blaschke_products(draw, max_order=5, rho=0.8):
    n = draw(st.integers(1, max_order))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_blaschke(np.random.default_rng(seed), n, rho)


class TestConstruction:
    def test_first_zero_must_vanish(self):
        with pytest.raises(DomainError, match="first zero"):
            BlaschkeProduct([0.5])

    def test_rejects_large_zero(self):
        with pytest.raises(DomainError, match="modulus"):
            BlaschkeProduct([0, 0.96])

    def test_repeated_zeros_allowed(self):
        assert BlaschkeProduct([0, 0.3, 0.3]).order == 3


class TestEval:
    def test_identity(self):
        assert BlaschkeProduct([0])(0.5) == 0.5

    def test_zero(self):
        assert BlaschkeProduct([0, 0.5])(0.5) == 0

    def test_factor_oracle(self):
        B = BlaschkeProduct([0, 0.5j])
        assert abs(B(0.3) - factor_oracle([0, 0.5j], 0.3)) <= 1e-14

    def test_outside_disk(self):
        with pytest.raises(DomainError):
            BlaschkeProduct([0])(1.01)


class TestTaylor:
    def test_z(self):
        np.testing.assert_array_equal(BlaschkeProduct([0]).taylor_coeffs(3).coeffs, [0, 1, 0, 0])

    def test_single_factor_closed_form(self):
        np.testing.assert_allclose(factor_coeffs(0.5, 2), [-0.5, 0.75, 0.375], atol=1e-15)

    def test_matches_boundary_transform(self):
        B = BlaschkeProduct([0, 0.3 + 0.4j, -0.6])
        oracle = np.fft.fft(factor_oracle(B.zeros, roots_of_unity(4096))) / 4096
        np.testing.assert_allclose(B.taylor_coeffs(256).coeffs, oracle[:257], atol=1e-12)

    @given(blaschke_products())
    @settings(max_examples=30, deadline=None)
    def test_energy_approaches_one(self, B):
        c = B.taylor_coeffs(256).coeffs
        assert c[0] == 0
        assert abs(np.sum(np.abs(c) ** 2) - 1) <= 1e-10

    @given(blaschke_products(max_order=4, rho=0.9), st.integers(4, 60))
    @settings(max_examples=40, deadline=None)
    def test_tail_bound(self, B, N):
        full = B.taylor_coeffs(4 * N + 200).coeffs
        tail = np.sum(np.abs(full[N + 1:]) ** 2)
        assert tail <= B.tail_bound(N) * (1 + 1e-9) + 1e-30


class TestBoundarySamples:
    def test_z(self):
        s = BlaschkeProduct([0]).boundary_samples(4)
        np.testing.assert_allclose(s.values, [1, 1j, -1, -1j], atol=1e-15)

    def test_unimodular(self):
        s = BlaschkeProduct([0, 0.5]).boundary_samples(4096)
        assert np.abs(np.abs(s.values) - 1).max() <= 1e-12

    def test_eval_oracle(self):
        B = BlaschkeProduct([0, 0.3 + 0.4j])
        w = roots_of_unity(8)
        got = B.boundary_samples(8).values
        np.testing.assert_allclose(got, [factor_oracle(B.zeros, x) for x in w], atol=1e-14)

    @given(blaschke_products(), st.integers(0, 14))
    @settings(max_examples=30, deadline=None)
    def test_unimodular_property(self, B, k):
        v = B.boundary_samples(2 ** k).values
        assert np.all(np.abs(np.abs(v) - 1) <= 1e-10)


class TestPowers:
    def test_z_cubed(self):
        np.testing.assert_array_equal(BlaschkeProduct([0]).power_coeffs(3, 5).coeffs, [0, 0, 0, 1, 0, 0])

    def test_zeroth_power(self):
        c = BlaschkeProduct([0, 0.4]).power_coeffs(0, 6).coeffs
        np.testing.assert_array_equal(c, [1, 0, 0, 0, 0, 0, 0])

    def test_square_via_samples(self):
        B = BlaschkeProduct([0, 0.5])
        s = B.boundary_samples(4096)
        sq = from_boundary(type(s)(s.values ** 2), 64)
        np.testing.assert_allclose(B.power_coeffs(2, 64).coeffs, sq.coeffs, atol=1e-10)

    @given(blaschke_products(max_order=3), st.integers(0, 4), st.integers(0, 4))
    @settings(max_examples=25, deadline=None)
    def test_power_additivity(self, B, m1, m2):
        N = 64
        lhs = B.power_coeffs(m1 + m2, N).coeffs
        rhs = np.convolve(B.power_coeffs(m1, N).coeffs, B.power_coeffs(m2, N).coeffs)[: N + 1]
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_power_via_boundary_random(self):
        B = random_blaschke(np.random.default_rng(9), 3)
        s = to_boundary(B.taylor_coeffs(512), 4096)
        cube = from_boundary(type(s)(s.values ** 3), 64)
        np.testing.assert_allclose(B.power_coeffs(3, 64).coeffs, cube.coeffs, atol=1e-10)
