"""Blaschke-adapted (Takenaka-Malmquist) orthonormal basis of H^2.

For B with zeros a_1 = 0, a_2, ..., a_n the elements are

    e_{j,m} = B^m * sqrt(1 - |a_{j+1}|^2) / (1 - conj(a_{j+1}) z) * prod_{i<=j} (z - a_i)/(1 - conj(a_i) z)

so that H^2 = e_{0,0} H^2(B) + ... + e_{n-1,0} H^2(B) orthogonally, and in the
coordinates (j, m) multiplication by B is the exact shift m -> m + 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import DEFAULT_DEGREE, BlaschkeProduct, factor_coeffs
from .errors import DomainError, ExpansionError, ShiftOverflowError, TruncationError
from .hardy import CoeffVec

DEFAULT_M_MAX = 32
LOSS_TOL = 1e-10
MAX_AUTO_DEGREE = 8192


@dataclass(frozen=True, eq=False)
class TMCoordinates:
    """Coefficients of a function in the e_{j,m} basis; grid[j, m] multiplies e_{j,m}."""

    grid: np.ndarray

    def __post_init__(self):
        g = np.array(self.grid, dtype=complex)
        if g.ndim != 2 or g.size == 0:
            raise DomainError("TM grid must be a non-empty n x (m_max+1) array")
        if not np.all(np.isfinite(g)):
            raise DomainError("TM grid entries must be finite")
        g.setflags(write=False)
        object.__setattr__(self, "grid", g)

    @property
    def n(self) -> int:
        return self.grid.shape[0]

    @property
    def m_max(self) -> int:
        return self.grid.shape[1] - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.grid))

    def __add__(self, other):
        return TMCoordinates(self.grid + other.grid)

    def __sub__(self, other):
        return TMCoordinates(self.grid - other.grid)

    def __mul__(self, scalar):
        return TMCoordinates(self.grid * scalar)

    __rmul__ = __mul__


def _elements(B: BlaschkeProduct, m_max: int, N: int) -> np.ndarray:
    n = B.order
    Bc = B.taylor_coeffs(N).coeffs
    E = np.zeros((n, m_max + 1, N + 1), dtype=complex)
    partial = np.zeros(N + 1, dtype=complex)
    partial[0] = 1
    for j, a in enumerate(B.zeros):
        kernel = np.sqrt(1 - abs(a) ** 2) * np.conj(a) ** np.arange(N + 1)
        E[j, 0] = np.convolve(partial, kernel)[: N + 1]
        partial = np.convolve(partial, factor_coeffs(a, N))[: N + 1]
    for m in range(1, m_max + 1):
        E[:, m] = [np.convolve(E[j, m - 1], Bc)[: N + 1] for j in range(n)]
    return E


def _truncation_loss(E: np.ndarray) -> float:
    # unit-norm elements lose mass only through the Taylor tail
    return float(np.max(1 - np.sum(np.abs(E) ** 2, axis=2)))


class TMBasis:
    """Cached e_{j,m}, 0 <= j < n, 0 <= m <= m_max, at working degree N.

    With ``degree=None`` the working degree starts at 256 and doubles until
    every cached element keeps all but 1e-12 of its norm. An explicit degree
    that truncates more than 1e-10 of some element raises
    :class:`TruncationError` unless ``strict=False``.
    """

    def __init__(self, blaschke: BlaschkeProduct, m_max: int = DEFAULT_M_MAX,
                 degree: int | None = None, strict: bool = True):
        if m_max < 0:
            raise DomainError("m_max must be non-negative")
        self.blaschke = blaschke
        self.m_max = int(m_max)
        if degree is None:
            N = DEFAULT_DEGREE
            E = _elements(blaschke, m_max, N)
            while _truncation_loss(E) > 1e-12 and N < MAX_AUTO_DEGREE:
                N *= 2
                E = _elements(blaschke, m_max, N)
        else:
            if degree < 0:
                raise DomainError("degree must be non-negative")
            N = int(degree)
            E = _elements(blaschke, m_max, N)
        self.degree = N
        self.truncation_loss = _truncation_loss(E)
        if self.truncation_loss > LOSS_TOL and (strict or degree is None):
            raise TruncationError(
                f"degree {N} drops {self.truncation_loss:.2e} of the norm of some e_(j,m), "
                f"m <= {m_max}; raise the working degree or lower m_max")
        E.setflags(write=False)
        self._E = E
        self._flat = E.reshape(-1, N + 1)

    @property
    def n(self) -> int:
        return self.blaschke.order

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.m_max + 1)

    @property
    def elements(self) -> np.ndarray:
        """Read-only array of shape (n, m_max+1, N+1) of Taylor coefficients."""
        return self._E

    def gram(self) -> np.ndarray:
        return self._flat.conj() @ self._flat.T

    def zeros_grid(self) -> TMCoordinates:
        return TMCoordinates(np.zeros(self.shape, dtype=complex))

    def unit(self, j: int, m: int) -> TMCoordinates:
        g = np.zeros(self.shape, dtype=complex)
        g[j, m] = 1
        return TMCoordinates(g)

    def __repr__(self):
        return f"TMBasis(zeros={self.blaschke.zeros}, m_max={self.m_max}, degree={self.degree})"


def basis_element(basis: TMBasis, j: int, m: int, N: int | None = None) -> CoeffVec:
    """Taylor coefficients of e_{j,m} to degree N (default: the working degree)."""
    if not 0 <= j < basis.n:
        raise DomainError(f"row index j={j} outside 0..{basis.n - 1}")
    if m < 0:
        raise DomainError("shift index must be non-negative")
    N = basis.degree if N is None else N
    if m <= basis.m_max and N <= basis.degree:
        return CoeffVec(basis.elements[j, m, : N + 1])
    c = basis.elements[j, min(m, basis.m_max)]
    if m > basis.m_max:
        Bc = basis.blaschke.taylor_coeffs(basis.degree).coeffs
        for _ in range(m - basis.m_max):
            c = np.convolve(c, Bc)[: basis.degree + 1]
    return CoeffVec(np.pad(c, (0, max(0, N - basis.degree)))[: N + 1])


def expand(f: CoeffVec, basis: TMBasis) -> tuple[TMCoordinates, float]:
    """TM coordinates of f and the l2 residual of the truncated expansion."""
    if f.degree > basis.degree:
        raise DomainError(f"function degree {f.degree} exceeds working degree {basis.degree}")
    a = f.padded(basis.degree)
    coords = basis._flat.conj() @ a
    residual = float(np.linalg.norm(a - basis._flat.T @ coords))
    return TMCoordinates(coords.reshape(basis.shape)), residual


def to_tm(f: CoeffVec, basis: TMBasis, tol: float = 1e-8) -> TMCoordinates:
    """grid[j, m] = <f, e_{j,m}>_2; raises when the expansion misses more than ``tol``."""
    coords, residual = expand(f, basis)
    if residual > tol:
        raise ExpansionError(
            f"incomplete expansion: residual {residual:.3e} > {tol:.1e} "
            f"(m_max={basis.m_max} too small for this function)", residual)
    return coords


def from_tm(c: TMCoordinates, basis: TMBasis, N: int | None = None) -> CoeffVec:
    """Sum of grid[j, m] e_{j,m} truncated to degree N."""
    if c.grid.shape != basis.shape:
        raise DomainError(f"grid shape {c.grid.shape} does not match basis {basis.shape}")
    N = basis.degree if N is None else N
    a = basis._flat.T @ c.grid.reshape(-1)
    return CoeffVec(np.pad(a, (0, max(0, N - basis.degree)))[: N + 1])


def shift_B(c: TMCoordinates, tol: float = 0.0) -> TMCoordinates:
    """Multiplication by B: column m moves to m + 1 (exact).

    Raises when the last column carries more than ``tol`` (relative) mass.
    """
    if np.linalg.norm(c.grid[:, -1]) > tol * np.linalg.norm(c.grid):
        raise ShiftOverflowError("shift would move nonzero mass past m_max")
    g = np.zeros_like(c.grid)
    g[:, 1:] = c.grid[:, :-1]
    return TMCoordinates(g)


def shift_B_power(c: TMCoordinates, m: int, tol: float = 0.0) -> TMCoordinates:
    for _ in range(m):
        c = shift_B(c, tol)
    return c


def multiply_by_power_series(c: TMCoordinates, w_coeffs, tol: float = 0.0) -> TMCoordinates:
    """(sum_m w_m B^m) * f in TM coordinates, i.e. row-wise convolution in m.

    Mass past m_max above ``tol`` (relative) raises; smaller spill is dropped.
    """
    w = np.asarray(w_coeffs, dtype=complex)
    width = c.grid.shape[1]
    full = np.array([np.convolve(row, w) for row in c.grid])
    spill = np.linalg.norm(full[:, width:])
    if spill > tol * np.linalg.norm(full):
        raise ShiftOverflowError("product exceeds the TM grid width")
    return TMCoordinates(full[:, :width])
