"""Truncated Hardy-space functions on the circle.

A function is carried either as Taylor coefficients (:class:`CoeffVec`) or as
values at the M-th roots of unity (:class:`BoundarySamples`). Inner products
and shifts are exact in coefficients; pointwise products, p-norms and the BMO
norm are computed on samples with uniform weights 1/M, which realize the
normalized arc-length measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExpansionError


@dataclass(frozen=True, eq=False)
class CoeffVec:
    """Taylor coefficients a_0..a_N of an analytic function."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coefficients must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def padded(self, N: int) -> np.ndarray:
        """Coefficients zero-padded (or cut) to length N + 1."""
        out = np.zeros(N + 1, dtype=complex)
        k = min(N + 1, self.coeffs.size)
        out[:k] = self.coeffs[:k]
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __call__(self, z):
        # Horner with numpy's highest-first convention
        return np.polyval(self.coeffs[::-1], z)

    def __add__(self, other: CoeffVec) -> CoeffVec:
        N = max(self.degree, other.degree)
        return CoeffVec(self.padded(N) + other.padded(N))

    def __sub__(self, other: CoeffVec) -> CoeffVec:
        N = max(self.degree, other.degree)
        return CoeffVec(self.padded(N) - other.padded(N))

    def __mul__(self, scalar) -> CoeffVec:
        return CoeffVec(self.coeffs * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class BoundarySamples:
    """Values at the M-th roots of unity exp(2 pi i k / M), k = 0..M-1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.array(self.values, dtype=complex))
        if v.ndim != 1 or v.size == 0:
            raise DomainError("need at least one sample")
        if not np.all(np.isfinite(v)):
            raise DomainError("samples must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def M(self) -> int:
        return self.values.size

    @property
    def weight(self) -> float:
        return 1.0 / self.values.size

    def __mul__(self, other: BoundarySamples) -> BoundarySamples:
        if other.M != self.M:
            raise DomainError(f"sample counts differ: {self.M} vs {other.M}")
        return BoundarySamples(self.values * other.values)


def roots_of_unity(M: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(M) / M)


def _align(f: CoeffVec, g: CoeffVec):
    N = max(f.degree, g.degree)
    return f.padded(N), g.padded(N)


def inner_h2(f: CoeffVec, g: CoeffVec) -> complex:
    """<f, g>_2 = sum_k a_k conj(b_k); the shorter operand is zero-padded."""
    a, b = _align(f, g)
    return complex(np.vdot(b, a))


def mul(f: CoeffVec, g: CoeffVec, N: int) -> CoeffVec:
    """Cauchy product of f and g truncated to degree N."""
    if N < 0:
        raise DomainError("degree must be non-negative")
    a, b = f.coeffs[: N + 1], g.coeffs[: N + 1]
    # fixed operand order keeps the summation order, hence mul(f, g) == mul(g, f) bitwise
    if (a.size, a.tobytes()) > (b.size, b.tobytes()):
        a, b = b, a
    prod = np.convolve(a, b)
    out = np.zeros(N + 1, dtype=complex)
    k = min(N + 1, prod.size)
    out[:k] = prod[:k]
    return CoeffVec(out)


def to_boundary(f: CoeffVec, M: int) -> BoundarySamples:
    """Evaluate f at the M-th roots of unity (M must exceed deg f)."""
    if M <= f.degree:
        raise DomainError(f"need M > degree ({M} <= {f.degree})")
    a = np.zeros(M, dtype=complex)
    a[: f.coeffs.size] = f.coeffs
    return BoundarySamples(M * np.fft.ifft(a))


def analyticity_residual(s: BoundarySamples, N: int) -> float:
    """Relative l2 mass of the sampled function outside frequencies 0..N."""
    if N >= s.M:
        return 0.0
    spec = np.fft.fft(s.values) / s.M
    total = np.linalg.norm(spec)
    if total == 0.0:
        return 0.0
    return float(np.linalg.norm(spec[N + 1 :]) / total)


def from_boundary(s: BoundarySamples, N: int, tol: float | None = None) -> CoeffVec:
    """Recover Taylor coefficients 0..N from samples by the discrete transform.

    With ``tol`` set, raises :class:`ExpansionError` when the energy in the
    discarded frequencies exceeds ``tol`` (the input is not analytic of
    degree <= N).
    """
    if not 0 <= N < s.M:
        raise DomainError(f"need 0 <= N < M (N={N}, M={s.M})")
    if tol is not None:
        res = analyticity_residual(s, N)
        if res > tol:
            raise ExpansionError(f"analyticity residual {res:.3e} exceeds {tol:.1e}", res)
    spec = np.fft.fft(s.values) / s.M
    return CoeffVec(spec[: N + 1])


def p_norm(s: BoundarySamples, p: float) -> float:
    """((1/M) sum |v|^p)^(1/p), or max |v| for p = inf."""
    if not p >= 1:
        raise DomainError(f"p-norm needs p >= 1, got {p}")
    a = np.abs(s.values)
    if np.isinf(p):
        return float(a.max())
    m = a.max()
    if m == 0.0:
        return 0.0
    # scale out the maximum to keep large p finite
    return float(m * np.mean((a / m) ** p) ** (1.0 / p))


def _oscillation_sup(v: np.ndarray, lengths, chunk: int = 1 << 20) -> float:
    """Largest mean oscillation over cyclic arcs of the given sample lengths."""
    M = v.size
    ext = np.concatenate([v, v])
    best = 0.0
    for L in lengths:
        starts = 1 if L == M else M
        step = max(1, chunk // L)
        for s0 in range(0, starts, step):
            s1 = min(starts, s0 + step)
            idx = np.arange(s0, s1)[:, None] + np.arange(L)[None, :]
            w = ext[idx]
            osc = np.abs(w - w.mean(axis=1, keepdims=True)).mean(axis=1)
            best = max(best, float(osc.max()))
    return best


def bmo_seminorm(s: BoundarySamples) -> float:
    """Sup of mean oscillation over dyadic-length arcs (M, M/2, ..., 2), all translates."""
    M = s.M
    if M & (M - 1):
        raise DomainError("BMO computation needs M a power of two")
    lengths = []
    L = M
    while L >= 2:
        lengths.append(L)
        L //= 2
    return _oscillation_sup(s.values, lengths)


def bmo_norm(s: BoundarySamples) -> float:
    """Dyadic BMO seminorm plus |f(0)|, with f(0) taken as the sample mean."""
    return bmo_seminorm(s) + float(abs(np.mean(s.values)))


@dataclass(frozen=True)
class HolderReport:
    lhs: float  # ||g f||_p
    rhs: float  # ||g||_{2p/(2-p)} ||f||_2
    holds: bool
    equality: bool
    exponent: float


def holder_multiplier_check(g: BoundarySamples, f: BoundarySamples, p: float,
                            rtol: float = 1e-12) -> HolderReport:
    """Check ||g f||_p <= ||g||_q ||f||_2 with q = 2p/(2-p) (q = inf at p = 2)."""
    if not 1 <= p <= 2:
        raise DomainError(f"multiplier exponent needs 1 <= p <= 2, got {p}")
    if g.M != f.M:
        raise DomainError(f"sample counts differ: {g.M} vs {f.M}")
    q = np.inf if p == 2 else 2 * p / (2 - p)
    lhs = p_norm(g * f, p)
    rhs = p_norm(g, q) * p_norm(f, 2)
    slack = rtol * max(rhs, 1e-300)
    return HolderReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs + slack,
                        equality=abs(rhs - lhs) <= slack, exponent=float(q))
