import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardylab.basis import TMBasis, basis_element, from_tm
from hardylab.blaschke import BlaschkeProduct
from hardylab.bmatrix import b_matrix_from_grids, is_b_inner_gram, is_b_inner_pointwise
from hardylab.errors import DomainError, HypothesisError, VerificationError
from hardylab.hardy import CoeffVec
from hardylab.instances import b_inner_grids, h2_space, planted_space, random_blaschke, shifted_space
from hardylab.wold import (SubHilbertSpace, check_axiom_A1, check_invariance, check_isometry, determinant_oracle,
                           extract_structure, wandering_subspace, wold_decompose)


@pytest.fixture(scope="module")
def bz():
    return TMBasis(BlaschkeProduct([0]), m_max=12)


@pytest.fixture(scope="module")
def b_half():
    return TMBasis(BlaschkeProduct([0, 0.5]), m_max=12)


def projector(cols):
    Q, _ = np.linalg.qr(cols)
    return Q @ Q.conj().T


class TestSpace:
    def test_default_gram_is_h2(self, b_half):
        H = SubHilbertSpace(b_half, [b_half.unit(0, 0) * 2])
        assert H.gram[0, 0] == 4

    def test_rejects_non_psd(self, bz):
        with pytest.raises(Exception):
            SubHilbertSpace(bz, [bz.unit(0, 0)], np.array([[-1.0]]))

    def test_not_invariant(self, bz):
        H = SubHilbertSpace(bz, [bz.unit(0, 0)])
        with pytest.raises(HypothesisError):
            check_invariance(H)


class TestIsometry:
    def test_h2(self, b_half):
        assert check_isometry(h2_space(b_half)).ok

    def test_scaled(self, b_half):
        assert check_isometry(h2_space(b_half, scale=2.0)).ok

    def test_weighted_first_column(self, b_half):
        H = h2_space(b_half)
        W = np.array(H.gram)
        W[0, 0] = 3.0  # generator 0 is e_{0,0}; its shift e_{0,1} keeps weight 1
        rep = check_isometry(SubHilbertSpace(b_half, H.generators, W))
        assert not rep.ok
        assert rep.max_deviation == pytest.approx(2.0)
        assert rep.witness == {"kind": "generators", "f": 0, "g": 0}


class TestAxiomA1:
    def test_beurling_k1(self, bz):
        assert check_axiom_A1(shifted_space(bz), trials=300) == []

    def test_uniform_scale(self, b_half):
        assert check_axiom_A1(h2_space(b_half, scale=3.0), trials=1000) == []

    def test_weighted_witness(self, b_half):
        H = planted_space(b_half, [b_half.unit(0, 0), b_half.unit(1, 0)], [1.0, 4.0])
        viol = check_axiom_A1(H, trials=100)
        assert viol
        v = viol[0]
        f1 = (H.span.G @ v.f1).reshape(b_half.shape)
        f2 = (H.span.G @ v.f2).reshape(b_half.shape)
        # f1 = b1 = e_{0,0}, f2 = b2 / 2 = e_{1,0} / 2
        np.testing.assert_allclose(np.abs(f1), np.abs(b_half.unit(0, 0).grid), atol=1e-12)
        np.testing.assert_allclose(np.abs(f2), np.abs(b_half.unit(1, 0).grid) / 2, atol=1e-12)
        assert v.gap == pytest.approx(0.75)


class TestWandering:
    def test_h2_shift(self, bz):
        wl = wandering_subspace(h2_space(bz))
        assert wl.dimension == 1
        np.testing.assert_allclose(wl.wandering[0].grid, bz.unit(0, 0).grid, atol=1e-12)

    def test_beurling(self, bz):
        wl = wandering_subspace(shifted_space(bz))
        assert wl.dimension == 1
        np.testing.assert_allclose(wl.wandering[0].grid, bz.unit(0, 1).grid, atol=1e-12)

    def test_order_two(self, b_half):
        assert wandering_subspace(h2_space(b_half)).dimension == 2


class TestWold:
    def test_h2_layers(self, bz):
        wl = wold_decompose(h2_space(bz), 4)
        for m, layer in enumerate(wl.layers):
            assert len(layer) == 1
            np.testing.assert_allclose(layer[0].grid, bz.unit(0, m).grid, atol=1e-12)
        assert wl.orthogonality <= 1e-8

    def test_depth_zero(self, bz):
        wl = wold_decompose(h2_space(bz), 0)
        assert wl.layers == () and wl.residual == pytest.approx(1.0)

    def test_negative_depth(self, bz):
        with pytest.raises(DomainError):
            wold_decompose(h2_space(bz), -1)

    def test_planted_depth8(self, b_half):
        rng = np.random.default_rng(13)
        H = planted_space(b_half, b_inner_grids(b_half, rng, 2, factors=1), [1.0, 1.0], rng)
        wl = wold_decompose(H, 8, probe_degree=6)
        assert [len(layer) for layer in wl.layers] == [2] * 8
        assert wl.residual <= 1e-6
        assert wl.orthogonality <= 1e-8

    def test_residual_shrinks(self, b_half):
        rng = np.random.default_rng(14)
        H = planted_space(b_half, b_inner_grids(b_half, rng, 2, factors=1), [1.0, 1.0], rng)
        res = [wold_decompose(H, d, probe_degree=6).residual for d in range(0, 9)]
        assert all(b <= a + 1e-9 for a, b in zip(res, res[1:]))


class TestExtract:
    def test_h2(self, bz):
        rep = extract_structure(h2_space(bz))
        assert rep.r == 1 and rep.k[0] == pytest.approx(1)
        np.testing.assert_allclose(rep.b[0].coeffs[:3], [1, 0, 0], atol=1e-12)

    def test_beurling(self, bz):
        rep = extract_structure(shifted_space(bz))
        assert rep.r == 1 and rep.k[0] == pytest.approx(1)
        np.testing.assert_allclose(rep.b[0].coeffs[:3], [0, 1, 0], atol=1e-12)

    def test_planted_quarter(self, b_half):
        # <.,.>_H = 4 <.,.>_2 on span{e00, e10} H^2(B): scale c = 1/4, weights 1/c = 4
        H = planted_space(b_half, [b_half.unit(0, 0), b_half.unit(1, 0)], [4.0, 4.0])
        rep = extract_structure(H)
        assert rep.r == 2
        np.testing.assert_allclose(rep.k, [4, 4], rtol=1e-8)
        got = np.stack([g.grid.reshape(-1) for g in rep.b_grids], axis=1)
        want = np.stack([b_half.unit(0, 0).grid.reshape(-1), b_half.unit(1, 0).grid.reshape(-1)], axis=1)
        assert np.linalg.norm(projector(got) - projector(want), 2) <= 1e-6

    def test_canonical_form(self, b_half):
        rng = np.random.default_rng(15)
        H = planted_space(b_half, b_inner_grids(b_half, rng, 2), [1.0, 1.0], rng)
        rep = extract_structure(H)
        firsts = []
        for f in rep.b:
            a = f.coeffs
            i = int(np.argmax(np.abs(a) > 1e-8 * np.abs(a).max()))
            assert a[i].real > 0 and a[i].imag == 0
            firsts.append(i)
        assert firsts == sorted(firsts)

    @given(st.integers(1, 3), st.integers(0, 2**32 - 1))
    @settings(max_examples=8, deadline=None)
    def test_planted_recovery(self, n, seed):
        rng = np.random.default_rng(seed)
        basis = TMBasis(random_blaschke(rng, n), m_max=10)
        r = int(rng.integers(1, n + 1))
        grids = b_inner_grids(basis, rng, r, factors=1)
        H = planted_space(basis, grids, [1.0] * r, rng)
        rep = extract_structure(H, probes=30, a1_trials=50)
        assert rep.r == r <= n and rep.verified
        got = np.stack([g.grid.reshape(-1) for g in rep.b_grids], axis=1)
        want = np.stack([g.grid.reshape(-1) for g in grids], axis=1)
        assert np.linalg.norm(projector(got) - projector(want), 2) <= 1e-6
        assert is_b_inner_pointwise(b_matrix_from_grids(rep.b_grids, basis)).b_inner
        assert is_b_inner_gram(rep.b, basis).b_inner
        assert rep.residuals["norm_formula"] <= 1e-7

    def test_weighted_raises_with_report(self, b_half):
        H = planted_space(b_half, [b_half.unit(0, 0), b_half.unit(1, 0)], [1.0, 4.0])
        with pytest.raises(HypothesisError) as ei:
            extract_structure(H)
        assert ei.value.report.residuals["axiom_a1_violations"] > 0

    def test_weighted_non_strict(self, b_half):
        H = planted_space(b_half, [b_half.unit(0, 0), b_half.unit(1, 0)], [1.0, 4.0])
        rep = extract_structure(H, strict=False)
        assert not rep.verified and rep.r == 2
        np.testing.assert_allclose(sorted(rep.k), [1, 4], rtol=1e-8)

    def test_non_isometric_fails(self, b_half):
        H = h2_space(b_half)
        W = np.array(H.gram)
        W[0, 0] = 3.0
        with pytest.raises((HypothesisError, VerificationError)):
            extract_structure(SubHilbertSpace(b_half, H.generators, W))

    def test_report_json(self, bz):
        d = extract_structure(h2_space(bz)).to_json()
        assert d["r"] == 1 and d["k"] == [pytest.approx(1)] and set(d) >= {"r", "b", "k", "residuals"}


@pytest.fixture(scope="module")
def b2():
    return TMBasis(BlaschkeProduct([0, 0.5]), m_max=16)


class TestDeterminant:
    def test_repeated_structure(self, b2):
        e0, e1 = basis_element(b2, 0, 0), basis_element(b2, 1, 0)
        assert determinant_oracle([e0, e1, e0 + e1], b2) <= 1e-9

    def test_zero_columns(self, b2):
        assert determinant_oracle([CoeffVec([1]), CoeffVec([0]), CoeffVec([0])], b2) == 0

    def test_needs_order_two(self):
        with pytest.raises(DomainError):
            determinant_oracle([CoeffVec([1])] * 3, TMBasis(BlaschkeProduct([0]), m_max=4))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_random_degree16(self, seed):
        rng = np.random.default_rng(seed)
        basis = TMBasis(random_blaschke(rng, 2), m_max=16)
        tup = [CoeffVec(rng.standard_normal(17) + 1j * rng.standard_normal(17)) for _ in range(3)]
        assert determinant_oracle(tup, basis) <= 1e-8 * max(1.0, np.prod([f.norm() for f in tup]))
