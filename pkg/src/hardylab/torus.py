"""Two-variable truncated Hardy space H^2(T^2) with the shifts S_z and S_w.

Functions are coefficient grids a[m, n] of z^m w^n over a fixed box. A
sub-Hilbert space is a span of grids with its own Gram matrix; adjoints of
S_z, S_w are taken with respect to that inner product, not the ambient one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._span import GramSpan, Violation, orthonormal_range, probe_axiom_a1, probe_coords, shift_image
from .errors import DomainError, HypothesisError, ShiftOverflowError, VerificationError

DEFAULT_BOX = (16, 16)
MEMBER_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CoeffGrid:
    """Coefficients a[m, n] of z^m w^n, m <= N_z, n <= N_w."""

    grid: np.ndarray

    def __post_init__(self):
        g = np.array(self.grid, dtype=complex)
        if g.ndim != 2 or g.size == 0:
            raise DomainError("coefficient grid must be a non-empty 2-d array")
        if not np.all(np.isfinite(g)):
            raise DomainError("grid entries must be finite")
        g.setflags(write=False)
        object.__setattr__(self, "grid", g)

    @property
    def degrees(self) -> tuple[int, int]:
        return self.grid.shape[0] - 1, self.grid.shape[1] - 1

    def padded(self, shape) -> np.ndarray:
        if self.grid.shape[0] > shape[0] or self.grid.shape[1] > shape[1]:
            if np.any(self.grid[shape[0]:]) or np.any(self.grid[:, shape[1]:]):
                raise ShiftOverflowError(f"grid of shape {self.grid.shape} does not fit box {shape}")
        out = np.zeros(shape, dtype=complex)
        a, b = min(shape[0], self.grid.shape[0]), min(shape[1], self.grid.shape[1])
        out[:a, :b] = self.grid[:a, :b]
        return out

    def norm(self) -> float:
        # nonzero entries only, so zero padding from a shift never changes the summation order
        return float(np.linalg.norm(self.grid[self.grid != 0]))


def monomial(m: int, n: int, box=None) -> CoeffGrid:
    shape = box or (m + 1, n + 1)
    g = np.zeros(shape, dtype=complex)
    g[m, n] = 1
    return CoeffGrid(g)


def inner_h2_torus(f: CoeffGrid, g: CoeffGrid) -> complex:
    shape = (max(f.grid.shape[0], g.grid.shape[0]), max(f.grid.shape[1], g.grid.shape[1]))
    return complex(np.vdot(g.padded(shape), f.padded(shape)))


def _shift(f: CoeffGrid, axis: int, bound: int | None) -> CoeffGrid:
    g = f.grid
    pad = [(0, 0), (0, 0)]
    pad[axis] = (1, 0)
    out = np.pad(g, pad)
    if bound is not None and out.shape[axis] - 1 > bound:
        edge = np.take(out, -1, axis=axis)
        if np.any(edge):
            raise ShiftOverflowError(f"degree bound {bound} exceeded in axis {axis}")
        out = np.delete(out, -1, axis=axis)
    return CoeffGrid(out)


def shift_z(f: CoeffGrid, bound: int | None = None) -> CoeffGrid:
    """Multiplication by z; with ``bound`` the z-degree may not exceed it."""
    return _shift(f, 0, bound)


def shift_w(f: CoeffGrid, bound: int | None = None) -> CoeffGrid:
    """Multiplication by w; with ``bound`` the w-degree may not exceed it."""
    return _shift(f, 1, bound)


def multiply(f: CoeffGrid, g: CoeffGrid) -> CoeffGrid:
    """Full 2-d Cauchy product."""
    a, b = f.grid, g.grid
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
    for i in range(b.shape[0]):
        for j in range(b.shape[1]):
            if b[i, j] != 0:
                out[i:i + a.shape[0], j:j + a.shape[1]] += b[i, j] * a
    return CoeffGrid(out)


def canonical_phase(g: np.ndarray, rel: float = 1e-8) -> np.ndarray:
    """Rotate so the first non-negligible entry (row-major) is positive real."""
    flat = g.reshape(-1)
    a = np.abs(flat)
    i = int(np.argmax(a > rel * a.max()))
    out = g * (np.conj(flat[i]) / a[i])
    out.reshape(-1)[i] = a[i]  # exact, not up to roundoff
    return out


@dataclass(frozen=True, eq=False)
class TorusSubspace:
    """Span of grids in a fixed box with Gram W (same convention as the circle case)."""

    generators: tuple
    gram: np.ndarray | None = None
    box: tuple = DEFAULT_BOX
    closure_depth: int = 4
    p: float = 2.0

    def __post_init__(self):
        box = tuple(int(x) for x in self.box)
        gens = tuple(CoeffGrid(g.padded(box) if isinstance(g, CoeffGrid) else CoeffGrid(g).padded(box))
                     for g in self.generators)
        if not gens:
            raise DomainError("a torus subspace needs at least one generator")
        V = np.stack([g.grid.reshape(-1) for g in gens], axis=1)
        W = V.conj().T @ V if self.gram is None else np.array(self.gram, dtype=complex)
        W.setflags(write=False)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "gram", W)
        object.__setattr__(self, "_span", GramSpan(V, W))

    @property
    def span(self) -> GramSpan:
        return self._span

    @property
    def dim(self) -> int:
        return self._span.dim

    def grid(self, coords: np.ndarray) -> CoeffGrid:
        return CoeffGrid((self._span.Q @ coords).reshape(self.box))

    def coords(self, f: CoeffGrid) -> tuple[np.ndarray, float]:
        return self._span.coords(f.padded(self.box).reshape(-1))

    def _ambient_shift(self, axis: int):
        box = self.box

        def shift(X):
            Y = X.reshape(box + (X.shape[-1],))
            inside = np.zeros_like(Y)
            if axis == 0:
                inside[1:] = Y[:-1]
                out = Y[-1]
            else:
                inside[:, 1:] = Y[:, :-1]
                out = Y[:, -1]
            return inside.reshape(X.shape), out.reshape(-1, X.shape[-1])
        return shift

    @cached_property
    def image_z(self):
        return shift_image(self._span, self._ambient_shift(0))

    @cached_property
    def image_w(self):
        return shift_image(self._span, self._ambient_shift(1))

    def shift_coords(self, C: np.ndarray, axis: int) -> tuple[np.ndarray, float]:
        """Span coordinates of S_z (axis 0) or S_w (axis 1) applied to span elements."""
        X_in, X_out = self._ambient_shift(axis)(self._span.Q @ C)
        spill = float(np.linalg.norm(X_out)) / max(float(np.linalg.norm(X_in)), 1e-300)
        D, res = self._span.coords(X_in)
        return D, max(res, spill)

    def adjoint_coords(self, C: np.ndarray, axis: int) -> np.ndarray:
        """Adjoint of the shift on H, relative to <.,.>_H, on span coordinates."""
        img = self.image_z if axis == 0 else self.image_w
        return img.Z @ (img.Y.conj().T @ C)


def invariance_residual(H: TorusSubspace) -> float:
    """Worst membership residual of S_z^s g, S_w^s g (s <= closure_depth) that fit in the box."""
    worst = 0.0
    for axis in (0, 1):
        for g in H.generators:
            cur = g.grid
            for _ in range(H.closure_depth):
                edge = cur[-1] if axis == 0 else cur[:, -1]
                if np.linalg.norm(edge) > 1e-12 * np.linalg.norm(cur):
                    break
                cur = np.roll(cur, 1, axis=axis)
                _, res = H.span.coords(cur.reshape(-1))
                worst = max(worst, res)
    return worst


def check_invariance(H: TorusSubspace, tol: float = MEMBER_TOL) -> float:
    res = invariance_residual(H)
    if res > tol:
        raise HypothesisError(f"span is not invariant under S_z and S_w (residual {res:.3e})")
    return res


def _interior_mask(H: TorusSubspace, dz: int, dw: int) -> np.ndarray:
    mz, mw = np.meshgrid(np.arange(H.box[0]), np.arange(H.box[1]), indexing="ij")
    return ((mz <= dz) & (mw <= dw)).reshape(-1)


@dataclass(frozen=True)
class CommutationReport:
    doubly_commuting: bool
    max_deviation: float
    witness: dict

    def to_json(self) -> dict:
        return {"doubly_commuting": self.doubly_commuting, "max_deviation": self.max_deviation,
                "witness": self.witness}


def doubly_commuting_check(H: TorusSubspace, trials: int = 50, tol: float = 1e-8,
                           seed: int = 0) -> CommutationReport:
    """max ||(S_z^* S_w - S_w S_z^*) v||_H over unit probes v in H.

    Probes: every generator supported in the lower-left quarter of the box,
    then ``trials`` random elements of H supported there.
    """
    check_invariance(H)
    dz, dw = max(0, H.box[0] // 2 - 1), max(0, H.box[1] // 2 - 1)
    mask = _interior_mask(H, dz, dw)
    probes, labels = [], []
    for i, g in enumerate(H.generators):
        flat = g.grid.reshape(-1)
        if not np.any(flat[~mask]):
            c, _ = H.span.coords(flat)
            nrm = np.linalg.norm(c)
            if nrm > 0:
                probes.append(c / nrm)
                labels.append({"kind": "generator", "index": i})
    rng = np.random.default_rng(seed)
    R = probe_coords(H.span, mask, trials, rng)
    for t in range(R.shape[1]):
        probes.append(R[:, t])
        labels.append({"kind": "random", "trial": t})
    if not probes:
        raise HypothesisError("no probe fits inside the box interior")
    V = np.array(probes).T
    Wv, res1 = H.shift_coords(V, 1)
    lhs = H.adjoint_coords(Wv, 0)
    Av = H.adjoint_coords(V, 0)
    rhs, res2 = H.shift_coords(Av, 1)
    if max(res1, res2) > MEMBER_TOL:
        raise HypothesisError(f"probe escapes the closed span (residual {max(res1, res2):.3e})")
    dev = np.linalg.norm(lhs - rhs, axis=0)
    i = int(np.argmax(dev))
    worst = float(dev[i])
    return CommutationReport(worst <= tol, worst, labels[i])


def torus_wandering(H: TorusSubspace, tol: float = 1e-7) -> np.ndarray:
    """Span coordinates of an H-orthonormal basis of (H - S_z H) ∩ (H - S_w H)."""
    check_invariance(H)
    Y = np.hstack([H.image_z.Y, H.image_w.Y])
    _, comp = orthonormal_range(Y, tol)
    return comp


@dataclass(frozen=True)
class TorusLayers:
    wandering: tuple  # CoeffGrid, H-orthonormal
    layers: dict  # (m, n) -> tuple of CoeffGrid
    orthogonality: float
    residual: float

    def to_json(self) -> dict:
        from .serialize import grid_json
        return {"wandering_dimension": len(self.wandering),
                "layers": [{"m": m, "n": n, "dimension": len(v), "functions": [grid_json(g) for g in v]}
                           for (m, n), v in self.layers.items()],
                "orthogonality": self.orthogonality, "residual": self.residual}


def torus_wold(H: TorusSubspace, depth_z: int, depth_w: int, tol: float = 1e-7, probes: int = 16,
               probe_degree: tuple | None = None, seed: int = 0) -> TorusLayers:
    """Layers S_z^m S_w^n N, their H-orthogonality and the probe residual outside them."""
    comp = torus_wandering(H, tol)
    wand = [H.grid(comp[:, i]) for i in range(comp.shape[1])]
    layers, cols = {}, []
    for m in range(depth_z):
        for n in range(depth_w):
            C = comp
            for _ in range(m):
                C, res = H.shift_coords(C, 0)
                if res > MEMBER_TOL:
                    raise ShiftOverflowError(f"layer ({m}, {n}) leaves the box or the span")
            for _ in range(n):
                C, res = H.shift_coords(C, 1)
                if res > MEMBER_TOL:
                    raise ShiftOverflowError(f"layer ({m}, {n}) leaves the box or the span")
            layers[(m, n)] = tuple(H.grid(C[:, i]) for i in range(C.shape[1]))
            cols.append(C)
    L = np.hstack(cols) if cols else np.zeros((H.dim, 0), complex)
    ortho = float(np.abs(L.conj().T @ L - np.eye(L.shape[1])).max(initial=0.0))
    if probe_degree is None:
        probe_degree = (max(0, depth_z - 1), max(0, depth_w - 1))
    rng = np.random.default_rng(seed)
    P = probe_coords(H.span, _interior_mask(H, *probe_degree), probes, rng)
    if P.shape[1] == 0:
        residual = 0.0
    else:
        proj = L @ (np.linalg.pinv(L) @ P) if L.shape[1] else np.zeros_like(P)
        residual = float(np.linalg.norm(P - proj, axis=0).max())
    return TorusLayers(tuple(wand), layers, ortho, residual)


def shift_intersection_residual(H: TorusSubspace, depth: int, axis: int = 0, probes: int = 16,
                                probe_degree: tuple = (2, 2), seed: int = 0) -> float:
    """Largest H-norm of the projection of unit low-degree probes onto S^depth(H) ∩ H."""
    shift = H._ambient_shift(axis)
    C = np.eye(H.dim, dtype=complex)
    for _ in range(depth):
        img = shift_image(H.span, shift, C)
        C, _ = orthonormal_range(img.Y)
        if C.shape[1] == 0:
            break
    rng = np.random.default_rng(seed)
    P = probe_coords(H.span, _interior_mask(H, *probe_degree), probes, rng)
    if P.shape[1] == 0 or C.shape[1] == 0:
        return 0.0
    return float(np.linalg.norm(C.conj().T @ P, axis=0).max())


def is_inner_torus(b: CoeffGrid, m_max: int = 4, n_max: int = 4, tol: float = 1e-7) -> tuple[bool, float]:
    """Gram of {z^m w^n b : m <= m_max, n <= n_max} against the identity."""
    Nz, Nw = b.grid.shape
    shape = (Nz + m_max, Nw + n_max)
    vecs = []
    for m in range(m_max + 1):
        for n in range(n_max + 1):
            g = np.zeros(shape, dtype=complex)
            g[m:m + Nz, n:n + Nw] = b.grid
            vecs.append(g.reshape(-1))
    V = np.array(vecs)
    dev = float(np.abs(V.conj() @ V.T - np.eye(len(vecs))).max())
    return dev <= tol, dev


@dataclass(frozen=True)
class InnerGeneratorReport:
    b: CoeffGrid
    k: float  # ||b f||_H = k ||f||_2
    wandering_dimension: int
    residuals: dict
    verified: bool = True

    def to_json(self) -> dict:
        from .serialize import grid_json
        return {"wandering_dimension": self.wandering_dimension, "b": grid_json(self.b), "k": self.k,
                "residuals": self.residuals, "verified": self.verified}


def check_property_P(H: TorusSubspace, trials: int = 1000, tol: float = 1e-7, seed: int = 0) -> list[Violation]:
    return probe_axiom_a1(np.asarray(H.gram), H.span.h2_gram(), trials, tol, seed)


def _trim(g: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    a = np.abs(g)
    keep = a > rel * a.max()
    rows, cols = np.flatnonzero(keep.any(axis=1)), np.flatnonzero(keep.any(axis=0))
    return np.where(keep, g, 0)[: rows.max() + 1, : cols.max() + 1]


def extract_inner_generator(H: TorusSubspace, tol: float = 1e-7, probes: int = 100, seed: int = 0,
                            p_trials: int = 200, strict: bool = True) -> InnerGeneratorReport:
    """b = phi/||phi||_2 and k = 1/||phi||_2 for the unit wandering vector phi.

    Checks invariance, double commutation and property (P) first; then
    innerness of b and ||b f||_H = k ||f||_2 on random probes f.
    """
    dc = doubly_commuting_check(H, seed=seed)
    viol = check_property_P(H, trials=p_trials, seed=seed)
    comp = torus_wandering(H, tol)
    residuals = {"doubly_commuting": dc.max_deviation, "property_p_violations": len(viol)}
    hyp_ok = dc.doubly_commuting and not viol
    if comp.shape[1] != 1:
        raise HypothesisError(f"wandering subspace has dimension {comp.shape[1]}, expected 1",
                              {"wandering_dimension": comp.shape[1], "residuals": residuals})
    phi = (H.span.Q @ comp[:, 0]).reshape(H.box)
    nrm = float(np.linalg.norm(phi))
    b_arr = canonical_phase(_trim(phi / nrm))
    b = CoeffGrid(b_arr)
    k = 1.0 / nrm
    _, inner_dev = is_inner_torus(b, tol=tol)
    residuals["innerness"] = inner_dev
    rng = np.random.default_rng(seed)
    dz, dw = H.box[0] - b_arr.shape[0], H.box[1] - b_arr.shape[1]
    worst_norm, worst_member = 0.0, 0.0
    if dz >= 0 and dw >= 0:
        for _ in range(probes):
            f = rng.standard_normal((dz + 1, dw + 1)) + 1j * rng.standard_normal((dz + 1, dw + 1))
            bf = multiply(b, CoeffGrid(f))
            c, res = H.coords(bf)
            lhs = float(np.linalg.norm(c))
            rhs = k * float(np.linalg.norm(f))
            worst_norm = max(worst_norm, abs(lhs - rhs) / rhs)
            worst_member = max(worst_member, res)
    residuals["norm_identity"] = worst_norm
    residuals["span_membership"] = worst_member
    ok = hyp_ok and inner_dev <= tol and worst_norm <= tol and worst_member <= MEMBER_TOL
    report = InnerGeneratorReport(b, k, 1, residuals, ok)
    if strict and not hyp_ok:
        raise HypothesisError("double commutation or property (P) fails", report)
    if strict and not ok:
        raise VerificationError("extracted inner generator fails verification", report)
    return report
