"""Constructors for concrete spaces: standard, Beurling, planted and negative controls."""

from __future__ import annotations

import numpy as np

from .basis import TMBasis, TMCoordinates, from_tm, shift_B_power
from .blaschke import BlaschkeProduct
from .torus import CoeffGrid, TorusSubspace
from .wold import SubHilbertSpace


def random_blaschke(rng: np.random.Generator, n: int, rho: float = 0.8) -> BlaschkeProduct:
    """First zero 0, the other n - 1 uniform (by area) in the disk of radius rho."""
    r = rho * np.sqrt(rng.uniform(size=n - 1))
    th = rng.uniform(0, 2 * np.pi, size=n - 1)
    return BlaschkeProduct([0j, *(r * np.exp(1j * th))])


def random_unit(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def inner_matrix(rng: np.random.Generator, n: int, r: int, factors: int = 2) -> np.ndarray:
    """Polynomial n x r matrix A(w) with A(w)^* A(w) = I on |w| = 1.

    A = prod_k (I - P_k + w P_k) V with rank-one projections P_k and an
    isometry V. Returned as coefficients, shape (n, r, factors + 1).
    """
    A = np.zeros((n, r, factors + 1), dtype=complex)
    A[:, :, 0] = random_unitary(rng, n)[:, :r]
    for _ in range(factors):
        u = random_unit(rng, n)
        P = np.outer(u, u.conj())
        nxt = np.zeros_like(A)
        nxt += np.einsum("ij,jrk->irk", np.eye(n) - P, A)
        nxt[:, :, 1:] += np.einsum("ij,jrk->irk", P, A[:, :, :-1])
        A = nxt
    return A


def b_inner_grids(basis: TMBasis, rng: np.random.Generator, r: int, factors: int = 2) -> list[TMCoordinates]:
    """TM grids of a random B-inner r-tuple (column j of a polynomial inner matrix)."""
    A = inner_matrix(rng, basis.n, r, factors)
    out = []
    for j in range(r):
        g = np.zeros(basis.shape, dtype=complex)
        g[:, : factors + 1] = A[:, j, :]
        out.append(TMCoordinates(g))
    return out


def _tm_degree(g: TMCoordinates) -> int:
    cols = np.flatnonzero(np.abs(g.grid).max(axis=0) > 0)
    return int(cols.max()) if cols.size else 0


def h2_space(basis: TMBasis, scale: float = 1.0) -> SubHilbertSpace:
    """Truncated H^2 itself, all e_{j,m}, with <.,.>_H = scale * <.,.>_2."""
    gens = [basis.unit(j, m) for m in range(basis.m_max + 1) for j in range(basis.n)]
    return SubHilbertSpace(basis, gens, scale * np.eye(len(gens)))


def shifted_space(basis: TMBasis, power: int = 1) -> SubHilbertSpace:
    """B^power H^2 with the H^2 inner product (z H^2 when B(z) = z)."""
    gens = [basis.unit(j, m) for m in range(power, basis.m_max + 1) for j in range(basis.n)]
    return SubHilbertSpace(basis, gens)


def planted_space(basis: TMBasis, grids, weights, rng: np.random.Generator | None = None,
                  p: float = 2.0) -> SubHilbertSpace:
    """H = b_1 H^2(B) + ... + b_r H^2(B) with ||sum b_i f_i(B)||_H^2 = sum k_i ||f_i||_2^2.

    Generators are B^m b_i for m + deg b_i <= m_max. With ``rng`` the
    generators of each layer m are mixed by a random well-conditioned matrix
    and the Gram matrix is transformed to match.
    """
    grids = list(grids)
    weights = np.asarray(weights, dtype=float)
    degs = [_tm_degree(g) for g in grids]
    gens, blocks = [], []
    for m in range(basis.m_max + 1):
        idx = [i for i, d in enumerate(degs) if m + d <= basis.m_max]
        if not idx:
            break
        layer = np.stack([shift_B_power(grids[i], m).grid.reshape(-1) for i in idx], axis=1)
        K = np.diag(weights[idx]).astype(complex)
        if rng is not None:
            M = random_unitary(rng, len(idx)) @ np.diag(rng.uniform(0.5, 2.0, len(idx)))
            layer, K = layer @ M, M.conj().T @ K @ M
        gens += [TMCoordinates(layer[:, c].reshape(basis.shape)) for c in range(layer.shape[1])]
        blocks.append(K)
    W = np.zeros((len(gens), len(gens)), dtype=complex)
    o = 0
    for K in blocks:
        W[o:o + len(K), o:o + len(K)] = K
        o += len(K)
    return SubHilbertSpace(basis, gens, W, p=p)


def planted_functions(basis: TMBasis, grids):
    return [from_tm(g, basis) for g in grids]


# torus


def torus_full(box=(16, 16), scale: float = 1.0) -> TorusSubspace:
    gens = []
    for m in range(box[0]):
        for n in range(box[1]):
            g = np.zeros(box, dtype=complex)
            g[m, n] = 1
            gens.append(g)
    return TorusSubspace(gens, scale * np.eye(len(gens)), box=box)


def torus_planted(phi: CoeffGrid, box=(16, 16), c: float = 1.0,
                  rng: np.random.Generator | None = None) -> TorusSubspace:
    """phi H^2 with <.,.>_H = (1/c) <.,.>_2, generators z^m w^n phi fitting in the box.

    With ``rng`` the generators are mixed by a random well-conditioned matrix.
    """
    a = phi.grid
    gens = []
    for m in range(box[0] - a.shape[0] + 1):
        for n in range(box[1] - a.shape[1] + 1):
            g = np.zeros(box, dtype=complex)
            g[m:m + a.shape[0], n:n + a.shape[1]] = a
            gens.append(g.reshape(-1))
    V = np.stack(gens, axis=1)
    K = V.conj().T @ V / c
    if rng is not None:
        M = random_unitary(rng, V.shape[1]) @ np.diag(rng.uniform(0.5, 2.0, V.shape[1]))
        V, K = V @ M, M.conj().T @ K @ M
    return TorusSubspace([V[:, i].reshape(box) for i in range(V.shape[1])], K, box=box)


def random_torus_monomial(rng: np.random.Generator, max_deg=(3, 3)) -> CoeffGrid:
    """Unimodular multiple of z^a w^b: the polynomial inner functions on the torus."""
    a, b = int(rng.integers(0, max_deg[0] + 1)), int(rng.integers(0, max_deg[1] + 1))
    g = np.zeros((a + 1, b + 1), dtype=complex)
    g[a, b] = np.exp(2j * np.pi * rng.uniform())
    return CoeffGrid(g)


def torus_zw_control(box=(16, 16)) -> TorusSubspace:
    """z H^2 + w H^2 = {f : f(0, 0) = 0}; not doubly commuting."""
    gens = []
    for m in range(box[0]):
        for n in range(box[1]):
            if (m, n) != (0, 0):
                g = np.zeros(box, dtype=complex)
                g[m, n] = 1
                gens.append(g)
    return TorusSubspace(gens, box=box)
