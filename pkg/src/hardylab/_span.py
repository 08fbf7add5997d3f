"""Finite spans carrying their own inner product.

Vectors live in an orthonormal coordinate system of H^2 (TM coordinates on
the circle, monomials on the torus), so the Euclidean product of coordinate
vectors is the H^2 inner product. The span's own inner product is given by a
Gram matrix over the generators; ``Q`` holds an orthonormal basis for it, and
in ``Q``-coordinates the span's inner product is Euclidean.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, HypothesisError

PSD_TOL = 1e-10


class GramSpan:
    def __init__(self, vectors: np.ndarray, gram: np.ndarray, rank_tol: float = 1e-10,
                 consistency_tol: float = 1e-8):
        G = np.asarray(vectors, dtype=complex)
        W = np.asarray(gram, dtype=complex)
        k = G.shape[1]
        if W.shape != (k, k):
            raise DomainError(f"gram must be {k}x{k}, got {W.shape}")
        scale = max(1.0, float(np.abs(W).max()) if W.size else 1.0)
        if np.abs(W - W.conj().T).max(initial=0.0) > 1e-10 * scale:
            raise DomainError("gram matrix is not Hermitian")
        lam, U = np.linalg.eigh((W + W.conj().T) / 2)
        if k and lam.min() < -PSD_TOL * max(1.0, lam.max()):
            raise DomainError(f"gram matrix is not positive semidefinite (eigenvalue {lam.min():.3e})")
        keep = lam > rank_tol * max(lam.max(initial=0.0), 1e-300)
        if np.any(~keep):
            # directions of zero H-norm must be zero functions
            leak = np.linalg.norm(G @ U[:, ~keep], axis=0).max()
            if leak > consistency_tol * max(1.0, np.linalg.norm(G, 2)):
                raise DomainError("gram is degenerate on a nonzero generator combination")
        self.G = G
        self.W = W
        self.A = U[:, keep] / np.sqrt(lam[keep])
        self.Q = G @ self.A
        sv = np.linalg.svd(self.Q, compute_uv=False)
        if sv.size and sv.min() < consistency_tol * sv.max():
            raise DomainError("generators are linearly dependent but the gram is not")
        self.Q_pinv = np.linalg.pinv(self.Q)
        self.P = self.Q @ self.Q_pinv

    @property
    def dim(self) -> int:
        return self.Q.shape[1]

    @property
    def ambient(self) -> int:
        return self.Q.shape[0]

    def coords(self, X: np.ndarray) -> tuple[np.ndarray, float]:
        """Span coordinates of the columns of X and the worst relative membership residual."""
        X = np.asarray(X, dtype=complex)
        one = X.ndim == 1
        X2 = X[:, None] if one else X
        C = self.Q_pinv @ X2
        res = np.linalg.norm(X2 - self.Q @ C, axis=0)
        nrm = np.linalg.norm(X2, axis=0)
        rel = float(np.max(res / np.maximum(nrm, 1e-300), initial=0.0))
        return (C[:, 0] if one else C), rel

    def generator_coords(self, a: np.ndarray) -> np.ndarray:
        """Span coordinates of sum_i a_i g_i."""
        return self.Q_pinv @ (self.G @ a)

    def vectors(self, C: np.ndarray) -> np.ndarray:
        return self.Q @ C

    def h2_gram(self) -> np.ndarray:
        """H^2 Gram matrix of the generators (K_ij = <g_j, g_i>_2)."""
        return self.G.conj().T @ self.G


@dataclass(frozen=True)
class ShiftImage:
    """Elements of the span whose shift stays in the span.

    ``Z`` (d x s) is an orthonormal basis of those elements in span coordinates
    and ``Y`` (d x s) the span coordinates of their shifts.
    """

    Z: np.ndarray
    Y: np.ndarray
    singular_values: np.ndarray


def _warn_near(sv: np.ndarray, thr: float, what: str):
    near = sv[(sv > thr / 10) & (sv < thr * 10)]
    if near.size:
        warnings.warn(f"{what}: singular values {near} within 10x of the rank threshold {thr:.2e}",
                      RuntimeWarning, stacklevel=3)


def shift_image(span: GramSpan, shift, C: np.ndarray | None = None, tol: float = 1e-7) -> ShiftImage:
    """Compute S(range C) intersected with the span.

    ``shift`` maps ambient vectors (columns) to a pair (inside, overflow): the
    shifted vectors in the ambient coordinates and the mass pushed past the
    representable box.
    """
    if C is None:
        C = np.eye(span.dim, dtype=complex)
    if C.shape[1] == 0:
        return ShiftImage(np.zeros((span.dim, 0), complex), np.zeros((span.dim, 0), complex), np.zeros(0))
    X_in, X_out = shift(span.Q @ C)
    R = np.vstack([X_in - span.P @ X_in, X_out])
    scale = np.linalg.norm(np.vstack([X_in, X_out]), 2)
    _, sv, Vh = np.linalg.svd(R, full_matrices=True)
    sv_full = np.zeros(C.shape[1])
    sv_full[: sv.size] = sv
    thr = tol * max(scale, 1e-300)
    _warn_near(sv_full, thr, "shift-closure rank")
    null = Vh.conj().T[:, sv_full <= thr]
    Z = C @ null
    Y = span.Q_pinv @ (X_in @ null)
    return ShiftImage(Z, Y, sv_full)


def orthonormal_range(Y: np.ndarray, tol: float = 1e-7) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of range(Y) and of its orthogonal complement, by SVD thresholding."""
    d = Y.shape[0]
    if Y.shape[1] == 0:
        return np.zeros((d, 0), complex), np.eye(d, dtype=complex)
    U, sv, _ = np.linalg.svd(Y, full_matrices=True)
    thr = tol * max(sv.max(initial=0.0), 1e-300)
    _warn_near(sv, thr, "wandering-subspace rank")
    rank = int(np.sum(sv > thr))
    return U[:, :rank], U[:, rank:]


@dataclass(frozen=True)
class Violation:
    """Probe with <f1,g1>_H = <f2,g2>_H but <f1,g1>_2 != <f2,g2>_2 (generator coefficients)."""

    f1: np.ndarray
    g1: np.ndarray
    f2: np.ndarray
    g2: np.ndarray
    inner_h: complex
    inner_2_first: complex
    inner_2_second: complex

    @property
    def gap(self) -> float:
        return abs(self.inner_2_first - self.inner_2_second)


def probe_axiom_a1(W: np.ndarray, K: np.ndarray, trials: int, tol: float, seed: int,
                   max_redraws: int = 100) -> list[Violation]:
    """Randomized probe of: <f1,g1>_H = <f2,g2>_H implies <f1,g1>_2 = <f2,g2>_2.

    W is the H-Gram and K the H^2-Gram of the generators. Deterministic probes
    over generator pairs (f = g = generator, second pair rescaled to equal
    H-norm) run first, then ``trials`` random probes with g2 rescaled by the
    complex ratio so the hypothesis holds exactly.
    """
    k = W.shape[0]
    ih = lambda u, v: complex(v.conj() @ W @ u)  # noqa: E731
    i2 = lambda u, v: complex(v.conj() @ K @ u)  # noqa: E731
    out: list[Violation] = []

    def record(f1, g1, f2, g2):
        a, b = i2(f1, g1), i2(f2, g2)
        if abs(a - b) > tol * max(1.0, abs(a), abs(b)):
            out.append(Violation(f1, g1, f2, g2, ih(f1, g1), a, b))

    eye = np.eye(k, dtype=complex)
    diag = np.real(np.diag(W))
    for i in range(k):
        for j in range(i + 1, k):
            if diag[i] > tol and diag[j] > tol:
                t = np.sqrt(diag[i] / diag[j])
                record(eye[i], eye[i], t * eye[j], t * eye[j])
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        for _ in range(max_redraws):
            f1, g1, f2, g2 = (rng.standard_normal(k) + 1j * rng.standard_normal(k) for _ in range(4))
            den = ih(f2, g2)
            if abs(den) > tol:
                break
        else:
            raise HypothesisError("degenerate A1 probe: H-inner products vanish on every redraw")
        # <f2, c g2>_H = conj(c) <f2, g2>_H
        g2 = g2 * np.conj(ih(f1, g1) / den)
        record(f1, g1, f2, g2)
    return out


def probe_coords(span: GramSpan, mask: np.ndarray, count: int, rng: np.random.Generator,
                 tol: float = 1e-9) -> np.ndarray:
    """Unit-norm random span elements (span coordinates) supported where ``mask`` is true."""
    outside = span.Q[~mask]
    if outside.shape[0]:
        _, sv, Vh = np.linalg.svd(outside, full_matrices=True)
        sv_full = np.zeros(span.dim)
        sv_full[: sv.size] = sv
        basis = Vh.conj().T[:, sv_full <= tol * max(1.0, sv_full.max(initial=0.0))]
    else:
        basis = np.eye(span.dim, dtype=complex)
    if basis.shape[1] == 0:
        return np.zeros((span.dim, 0), complex)
    x = rng.standard_normal((basis.shape[1], count)) + 1j * rng.standard_normal((basis.shape[1], count))
    P = basis @ x
    return P / np.linalg.norm(P, axis=0)
