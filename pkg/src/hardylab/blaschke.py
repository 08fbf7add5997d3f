"""The fixed finite Blaschke product B(z) = prod (z - a_i) / (1 - conj(a_i) z)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hardy import BoundarySamples, CoeffVec, roots_of_unity

DEFAULT_DEGREE = 256
DEFAULT_SAMPLES = 4096
MAX_ZERO_MODULUS = 0.95


def factor_coeffs(a: complex, N: int) -> np.ndarray:
    """Taylor coefficients of (z - a)/(1 - conj(a) z) up to degree N.

    Closed form: -a + (1 - |a|^2) sum_{k>=1} conj(a)^(k-1) z^k.
    """
    c = np.zeros(N + 1, dtype=complex)
    c[0] = -a
    if N >= 1:
        c[1:] = (1 - abs(a) ** 2) * np.conj(a) ** np.arange(N)
    return c


def _truncated_conv(x: np.ndarray, y: np.ndarray, N: int) -> np.ndarray:
    return np.convolve(x, y)[: N + 1]


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    """Finite Blaschke product normalized so that its first zero is 0.

    Zeros may repeat. Zeros of modulus >= 0.95 are rejected because the
    geometric tails of the Taylor expansion then outgrow the default
    truncation.
    """

    zeros: tuple

    def __post_init__(self):
        zs = tuple(complex(a) for a in np.atleast_1d(np.asarray(self.zeros, dtype=complex)))
        if not zs:
            raise DomainError("a Blaschke product needs at least one zero")
        if zs[0] != 0:
            raise DomainError(f"first zero must be 0 (B(0) = 0 normalization), got {zs[0]}")
        for a in zs:
            if not np.isfinite(a):
                raise DomainError("zeros must be finite")
            if abs(a) >= MAX_ZERO_MODULUS:
                raise DomainError(
                    f"zero {a} has modulus {abs(a):.4f} >= {MAX_ZERO_MODULUS}; "
                    "the truncated expansions would not converge at the working degree")
        object.__setattr__(self, "zeros", zs)

    @property
    def order(self) -> int:
        return len(self.zeros)

    @property
    def rho(self) -> float:
        """Largest zero modulus."""
        return max(abs(a) for a in self.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1 + 4 * np.finfo(float).eps):
            raise DomainError("B is evaluated on the closed unit disk only")
        out = np.ones_like(z)
        for a in self.zeros:
            out = out * (z - a) / (1 - np.conj(a) * z)
        return out[()] if out.ndim == 0 else out

    def taylor_coeffs(self, N: int = DEFAULT_DEGREE) -> CoeffVec:
        if N < 0:
            raise DomainError("degree must be non-negative")
        c = np.zeros(N + 1, dtype=complex)
        c[0] = 1
        for a in self.zeros:
            c = _truncated_conv(c, factor_coeffs(a, N), N)
        return CoeffVec(c)

    def tail_bound(self, N: int) -> float:
        """Upper bound on sum_{k>N} |c_k|^2 for the Taylor coefficients c of B.

        Cauchy estimate on |z| = R with R = rho^(-1/2): the bound is
        C rho^(N+1) with C = max_{|z|=R}|B|^2 / (1 - rho).
        """
        rho = self.rho
        if rho == 0.0:
            return 0.0 if N >= self.order else 1.0
        R = rho ** -0.5
        M_R = np.prod([(R + abs(a)) / (1 - abs(a) * R) for a in self.zeros])
        return float(M_R ** 2 * rho ** (N + 1) / (1 - rho))

    def boundary_samples(self, M: int = DEFAULT_SAMPLES) -> BoundarySamples:
        if M < 1:
            raise DomainError("need at least one sample")
        return BoundarySamples(self(roots_of_unity(M)))

    def power_coeffs(self, m: int, N: int = DEFAULT_DEGREE) -> CoeffVec:
        """Taylor coefficients of B^m to degree N by repeated truncated convolution."""
        if m < 0 or N < 0:
            raise DomainError("exponent and degree must be non-negative")
        b = self.taylor_coeffs(N).coeffs
        out = np.zeros(N + 1, dtype=complex)
        out[0] = 1
        for _ in range(m):
            out = _truncated_conv(out, b, N)
        return CoeffVec(out)
