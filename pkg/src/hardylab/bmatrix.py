"""B-matrices of r-tuples and two independent tests of B-innerness.

The B-matrix of (phi_1, ..., phi_r) is the n x r array of functions phi_ij with
phi_j = sum_i e_{i,0} phi_ij(B). Row i of the TM grid of phi_j holds the Taylor
coefficients of phi_ij in the variable w standing for B.

B-innerness (A* A = I a.e. on the circle) is decided either pointwise on a
sample grid, or through orthonormality of {B^m phi_i} computed from Taylor
coefficients in z. The two routes share no arithmetic beyond the input
expansion and must agree on every tuple.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import TMBasis, TMCoordinates, expand, from_tm
from .errors import DomainError, ExpansionError
from .hardy import CoeffVec, mul


@dataclass(frozen=True, eq=False)
class BMatrix:
    entries: np.ndarray  # (n, r, m_max+1) Taylor coefficients in w
    tuple: tuple
    basis: TMBasis

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape[:2]

    def column(self, j: int) -> TMCoordinates:
        return TMCoordinates(self.entries[:, j, :])


@dataclass(frozen=True)
class InnerVerdict:
    b_inner: bool
    max_deviation: float
    method: str

    def to_json(self) -> dict:
        return {"b_inner": self.b_inner, "max_deviation": self.max_deviation, "method": self.method}


def build_b_matrix(tup, basis: TMBasis, tol: float = 1e-8) -> BMatrix:
    tup = tuple(tup)
    if not tup:
        raise DomainError("empty tuple")
    cols = []
    for j, phi in enumerate(tup):
        coords, residual = expand(phi, basis)
        if residual > tol:
            raise ExpansionError(f"tuple member {j} expands with residual {residual:.3e} > {tol:.1e}",
                                 residual)
        cols.append(coords.grid)
    return BMatrix(np.stack(cols, axis=1), tup, basis)


def b_matrix_from_grids(grids, basis: TMBasis) -> BMatrix:
    """B-matrix directly from TM grids (no re-expansion)."""
    grids = [g if isinstance(g, TMCoordinates) else TMCoordinates(g) for g in grids]
    tup = tuple(from_tm(g, basis) for g in grids)
    return BMatrix(np.stack([g.grid for g in grids], axis=1), tup, basis)


def is_b_inner_pointwise(A: BMatrix, M: int = 4096, tol: float = 1e-7) -> InnerVerdict:
    """max over samples w_k and (s, t) of |(A(w)^* A(w))_st - delta_st|."""
    width = A.entries.shape[2]
    if M & (M - 1) or M <= 2 * (width - 1):
        raise DomainError(f"M must be a power of two exceeding twice the entry degree, got {M}")
    pad = np.zeros(A.entries.shape[:2] + (M,), dtype=complex)
    pad[..., :width] = A.entries
    vals = M * np.fft.ifft(pad, axis=-1)  # (n, r, M)
    G = np.einsum("isk,itk->kst", vals.conj(), vals)
    r = A.shape[1]
    dev = float(np.abs(G - np.eye(r)[None]).max())
    return InnerVerdict(dev <= tol, dev, "pointwise")


def is_b_inner_gram(tup, basis: TMBasis, m_max: int = 16, tol: float = 1e-7) -> InnerVerdict:
    """max |Gram - I| for {B^m phi_i : 1 <= i <= r, 0 <= m <= m_max} under the H^2 product."""
    if m_max < 1:
        raise DomainError("m_max must be at least 1")
    N = basis.degree
    Bc = basis.blaschke.taylor_coeffs(N)
    vecs = []
    for phi in tup:
        cur = CoeffVec(phi.padded(N))
        for _ in range(m_max + 1):
            vecs.append(cur.coeffs)
            cur = mul(cur, Bc, N)
    V = np.array(vecs)
    G = V.conj() @ V.T
    dev = float(np.abs(G - np.eye(len(vecs))).max())
    return InnerVerdict(dev <= tol, dev, "gram")
