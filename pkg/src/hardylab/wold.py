"""Shift-invariant sub-Hilbert spaces of H^2 and their Wold decomposition under T_B.

A space H is modeled by TM-coordinate generators g_1..g_k and a Hermitian PSD
matrix W with <sum a_i g_i, sum c_j g_j>_H = sum conj(c_j) W_ji a_i. Because
T_B is the exact column shift in TM coordinates, the wandering subspace
N = H - T_B(H) and the layers B^m N carry no error from expanding B itself.

At truncation, T_B(H) is replaced by T_B(H) intersected with the generator
span, which is exact for spans of the form {B^m b_i : m + deg b_i <= m_max}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._span import GramSpan, Violation, orthonormal_range, probe_axiom_a1, probe_coords, shift_image
from .basis import TMBasis, TMCoordinates, multiply_by_power_series, shift_B, shift_B_power
from .bmatrix import b_matrix_from_grids, build_b_matrix, is_b_inner_gram, is_b_inner_pointwise
from .errors import DomainError, HypothesisError, TheoremContradiction, VerificationError
from .hardy import CoeffVec, mul

INVARIANCE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SubHilbertSpace:
    """Finitely generated H inside H^2 with its own inner product.

    ``gram=None`` takes the H^2 Gram matrix of the generators, i.e. the inner
    product of H^2 restricted to the span. ``p`` is metadata: polynomial
    generators lie in every H^p, so containment is automatic at truncation.
    """

    basis: TMBasis
    generators: tuple
    gram: np.ndarray | None = None
    closure_depth: int = 4
    p: float = 2.0

    def __post_init__(self):
        gens = tuple(g if isinstance(g, TMCoordinates) else TMCoordinates(g) for g in self.generators)
        if not gens:
            raise DomainError("a sub-Hilbert space needs at least one generator")
        for g in gens:
            if g.grid.shape != self.basis.shape:
                raise DomainError(f"generator grid {g.grid.shape} does not match basis {self.basis.shape}")
        object.__setattr__(self, "generators", gens)
        V = np.stack([g.grid.reshape(-1) for g in gens], axis=1)
        W = V.conj().T @ V if self.gram is None else np.array(self.gram, dtype=complex)
        W.setflags(write=False)
        object.__setattr__(self, "gram", W)
        object.__setattr__(self, "_span", GramSpan(V, W))

    @property
    def span(self) -> GramSpan:
        return self._span

    @property
    def dim(self) -> int:
        return self._span.dim

    def grid(self, coords: np.ndarray) -> TMCoordinates:
        """TM grid of the span element with span coordinates ``coords``."""
        return TMCoordinates((self._span.Q @ coords).reshape(self.basis.shape))

    def coords(self, c: TMCoordinates) -> tuple[np.ndarray, float]:
        return self._span.coords(c.grid.reshape(-1))

    def inner(self, f: TMCoordinates, g: TMCoordinates) -> complex:
        """<f, g>_H for f, g in the span."""
        a, ra = self.coords(f)
        b, rb = self.coords(g)
        if max(ra, rb) > INVARIANCE_TOL:
            raise HypothesisError(f"element outside H (residual {max(ra, rb):.3e})")
        return complex(np.vdot(b, a))

    def shift(self, X: np.ndarray):
        shape = self.basis.shape
        Y = X.reshape(shape + (X.shape[-1],))
        inside = np.zeros_like(Y)
        inside[:, 1:] = Y[:, :-1]
        return inside.reshape(X.shape), Y[:, -1, :]

    @cached_property
    def shift_image(self):
        return shift_image(self._span, self.shift)


def invariance_residual(H: SubHilbertSpace) -> float:
    """Largest membership residual of B^s g_i (s <= closure_depth) that still fit in the grid."""
    worst = 0.0
    for g in H.generators:
        cur = g.grid
        scale = np.linalg.norm(cur)
        for _ in range(H.closure_depth):
            if np.linalg.norm(cur[:, -1]) > 1e-12 * max(scale, 1e-300):
                break
            nxt = np.zeros_like(cur)
            nxt[:, 1:] = cur[:, :-1]
            cur = nxt
            _, res = H.span.coords(cur.reshape(-1))
            worst = max(worst, res)
    return worst


def check_invariance(H: SubHilbertSpace, tol: float = INVARIANCE_TOL) -> float:
    res = invariance_residual(H)
    if res > tol:
        raise HypothesisError(f"span is not T_B-invariant: shifted generator residual {res:.3e} > {tol:.1e}")
    return res


@dataclass(frozen=True)
class IsometryReport:
    ok: bool
    max_deviation: float
    witness: dict

    def to_json(self) -> dict:
        return {"isometry": self.ok, "max_deviation": self.max_deviation, "witness": self.witness}


def check_isometry(H: SubHilbertSpace, trials: int = 100, tol: float = 1e-8, seed: int = 0) -> IsometryReport:
    """Compare <B f, B g>_H with <f, g>_H on generator pairs and random unit probes."""
    check_invariance(H)
    span = H.span
    best, witness = 0.0, {}
    shifted = {}
    for i, g in enumerate(H.generators):
        if np.linalg.norm(g.grid[:, -1]) > 1e-12 * g.norm():
            continue
        c, res = span.coords(shift_B(g, 1e-12).grid.reshape(-1))
        if res <= INVARIANCE_TOL:
            shifted[i] = c
    for i, ci in shifted.items():
        for j, cj in shifted.items():
            dev = abs(np.vdot(cj, ci) - H.gram[j, i])
            if dev > best:
                best, witness = float(dev), {"kind": "generators", "f": i, "g": j}
    img = H.shift_image
    s = img.Z.shape[1]
    if s:
        rng = np.random.default_rng(seed)
        for t in range(trials):
            x, y = (rng.standard_normal(s) + 1j * rng.standard_normal(s) for _ in range(2))
            x, y = x / np.linalg.norm(x), y / np.linalg.norm(y)
            dev = abs(np.vdot(img.Y @ y, img.Y @ x) - np.vdot(y, x))
            if dev > best:
                best, witness = float(dev), {"kind": "random", "trial": t}
    return IsometryReport(best <= tol, best, witness)


def check_axiom_A1(H: SubHilbertSpace, trials: int = 1000, tol: float = 1e-7, seed: int = 0) -> list[Violation]:
    """Witnessed violations of: <f1,g1>_H = <f2,g2>_H implies <f1,g1>_2 = <f2,g2>_2."""
    return probe_axiom_a1(np.asarray(H.gram), H.span.h2_gram(), trials, tol, seed)


@dataclass(frozen=True)
class WoldLayers:
    wandering: tuple  # H-orthonormal TMCoordinates spanning N
    layers: tuple  # layers[m] = B^m applied to each wandering vector
    depth: int
    residual: float  # worst unit probe component outside the computed layers
    orthogonality: float  # max |<u, v>_H - delta| over all layer vectors
    wandering_coords: np.ndarray = field(repr=False, default=None)

    @property
    def dimension(self) -> int:
        return len(self.wandering)


def _wandering_coords(H: SubHilbertSpace, tol: float) -> np.ndarray:
    check_invariance(H)
    img = H.shift_image if tol == 1e-7 else shift_image(H.span, H.shift, tol=tol)
    _, comp = orthonormal_range(img.Y, tol)
    return comp


def _probe_mask(H: SubHilbertSpace, probe_degree: int) -> np.ndarray:
    n, width = H.basis.shape
    cols = np.broadcast_to(np.arange(width), (n, width))
    return (cols <= probe_degree).reshape(-1)


def wold_decompose(H: SubHilbertSpace, depth: int, tol: float = 1e-7, probes: int = 16,
                   probe_degree: int = 6, seed: int = 0) -> WoldLayers:
    """Layers B^m N for m < depth, their mutual orthogonality, and the uncovered part of H."""
    if depth < 0:
        raise DomainError("depth must be non-negative")
    comp = _wandering_coords(H, tol)
    # fix the phase of each wandering vector: first TM entry positive real
    for i in range(comp.shape[1]):
        g = H.span.Q @ comp[:, i]
        lead = g[_first_index(g)]
        comp[:, i] *= np.conj(lead) / abs(lead)
    wand = [H.grid(comp[:, i]) for i in range(comp.shape[1])]
    layers, coords = [], []
    for m in range(depth):
        layer = [shift_B_power(w, m, tol=1e-12) for w in wand]
        for v in layer:
            c, res = H.coords(v)
            if res > INVARIANCE_TOL:
                raise HypothesisError(f"layer {m} leaves the span (residual {res:.3e})")
            coords.append(c)
        layers.append(tuple(layer))
    L = np.array(coords).T if coords else np.zeros((H.dim, 0), complex)
    ortho = float(np.abs(L.conj().T @ L - np.eye(L.shape[1])).max(initial=0.0))
    rng = np.random.default_rng(seed)
    P = probe_coords(H.span, _probe_mask(H, min(probe_degree, H.basis.m_max)), probes, rng)
    if P.shape[1] == 0:
        residual = 0.0
    else:
        proj = L @ (np.linalg.pinv(L) @ P) if L.shape[1] else np.zeros_like(P)
        residual = float(np.linalg.norm(P - proj, axis=0).max())
    return WoldLayers(tuple(wand), tuple(layers), depth, residual, ortho, comp)


def wandering_subspace(H: SubHilbertSpace, tol: float = 1e-7) -> WoldLayers:
    """H-orthonormal basis of N = H - T_B(H) (as a depth-1 layer report)."""
    return wold_decompose(H, 1, tol=tol)


@dataclass(frozen=True)
class StructureReport:
    r: int
    b: tuple  # CoeffVec, canonicalized
    k: tuple  # weights with ||sum b_i f_i(B)||_H^2 = sum k_i ||f_i||_2^2
    residuals: dict
    b_grids: tuple = field(repr=False, default=())
    verified: bool = True
    # polynomial b_i are bounded, so the H^inf claim holds by construction
    metadata: dict = field(default_factory=lambda: {"h_infinity": "automatic (polynomial)"})

    def to_json(self) -> dict:
        from .serialize import function_json
        return {"r": self.r, "b": [function_json(f) for f in self.b], "k": list(self.k),
                "residuals": self.residuals, "verified": self.verified, "metadata": self.metadata}


def _first_index(c: np.ndarray, rel: float = 1e-8) -> int:
    a = np.abs(c)
    return int(np.argmax(a > rel * a.max()))


def _tm_degree(g: np.ndarray, rel: float = 1e-12) -> int:
    cols = np.flatnonzero(np.abs(g).max(axis=0) > rel * np.abs(g).max())
    return int(cols.max()) if cols.size else 0


def canonical_tuple(Phi: np.ndarray, basis: TMBasis) -> tuple[np.ndarray, np.ndarray]:
    """Unitary mixing and phases making the Taylor coefficient matrix echelon-like.

    Returns (mixed TM columns, their Taylor coefficients), columns ordered by
    first nonzero Taylor index with positive real leading coefficient.
    """
    flat = basis.elements.reshape(-1, basis.degree + 1)
    T = flat.T @ Phi
    Q1, _ = np.linalg.qr(T.conj().T)
    Phi, T = Phi @ Q1, T @ Q1
    for i in range(Phi.shape[1]):
        lead = T[_first_index(T[:, i]), i]
        ph = np.conj(lead) / abs(lead)
        Phi[:, i] *= ph
        T[:, i] *= ph
        T[_first_index(T[:, i]), i] = abs(lead)
    order = sorted(range(Phi.shape[1]),
                   key=lambda i: (_first_index(T[:, i]), tuple(np.round(np.abs(T[:, i]), 10))))
    return Phi[:, order], T[:, order]


def extract_structure(H: SubHilbertSpace, tol: float = 1e-7, probes: int = 100, seed: int = 0,
                      a1_trials: int = 200, gram_m_max: int = 16, samples: int = 4096,
                      strict: bool = True) -> StructureReport:
    """Recover r, the B-inner b_i and the weights k_i with H = b_1 H^2(B) + ... + b_r H^2(B).

    b_i = phi_i / ||phi_i||_2 and k_i = 1 / ||phi_i||_2^2 for an H-orthonormal
    basis phi_i of the wandering subspace. Hypotheses (invariance, isometry,
    A1) and conclusions (r <= n, innerness, norm formula, span) are all checked
    and recorded; with ``strict`` a failure raises with the report attached.
    """
    basis = H.basis
    iso = check_isometry(H, seed=seed)
    viol = check_axiom_A1(H, trials=a1_trials, seed=seed)
    hyp_ok = iso.ok and not viol
    comp = _wandering_coords(H, tol)
    r = comp.shape[1]
    residuals = {"isometry": iso.max_deviation, "axiom_a1_violations": len(viol)}
    if r == 0:
        report = StructureReport(0, (), (), residuals, (), hyp_ok)
        if strict and not hyp_ok:
            raise HypothesisError("hypotheses fail", report)
        return report
    if r > basis.n:
        report = StructureReport(r, (), (), residuals, (), False)
        if hyp_ok:
            raise TheoremContradiction(f"wandering dimension {r} exceeds order {basis.n}", report)
        if strict:
            raise HypothesisError(f"wandering dimension {r} > n with failing hypotheses", report)
        return report

    Phi = H.span.Q @ comp  # H-orthonormal, ambient TM coordinates
    Phi, T = canonical_tuple(Phi, basis)
    norms = np.linalg.norm(Phi, axis=0)
    B_grids = Phi / norms
    k = tuple(float(1 / nrm**2) for nrm in norms)
    grids = tuple(TMCoordinates(B_grids[:, i].reshape(basis.shape)) for i in range(r))
    b = tuple(CoeffVec(T[:, i] / norms[i]) for i in range(r))

    residuals["innerness_pointwise"] = is_b_inner_pointwise(b_matrix_from_grids(grids, basis), M=samples).max_deviation
    residuals["innerness_gram"] = is_b_inner_gram(b, basis, m_max=gram_m_max).max_deviation

    # norm formula on random w-polynomials f_i
    max_deg = max(_tm_degree(g.grid) for g in grids)
    pdeg = max(0, min(6, basis.m_max - max_deg))
    rng = np.random.default_rng(seed)
    worst_norm, worst_member = 0.0, 0.0
    for _ in range(probes):
        fs = rng.standard_normal((r, pdeg + 1)) + 1j * rng.standard_normal((r, pdeg + 1))
        v = basis.zeros_grid()
        for g, f in zip(grids, fs):
            v = v + multiply_by_power_series(g, f, tol=1e-12)
        c, res = H.coords(v)
        lhs = float(np.vdot(c, c).real)
        rhs = float(sum(ki * np.vdot(f, f).real for ki, f in zip(k, fs)))
        worst_norm = max(worst_norm, abs(lhs - rhs) / rhs)
        worst_member = max(worst_member, res)
    residuals["norm_formula"] = worst_norm
    residuals["span_membership"] = worst_member
    wl = wold_decompose(H, depth=basis.m_max - max_deg + 1, tol=tol, probe_degree=pdeg, seed=seed)
    residuals["span"] = wl.residual
    residuals["layer_orthogonality"] = wl.orthogonality

    ok = (hyp_ok and residuals["innerness_pointwise"] <= tol and residuals["innerness_gram"] <= tol
          and worst_norm <= tol and worst_member <= INVARIANCE_TOL and wl.residual <= 1e-6
          and wl.orthogonality <= 1e-8)
    report = StructureReport(r, b, k, residuals, grids, ok)
    report.metadata["p"] = float(H.p)
    if strict and not hyp_ok:
        raise HypothesisError("isometry or axiom A1 fails on this space", report)
    if strict and not ok:
        raise VerificationError("extracted structure fails verification", report)
    return report


def _horner_in_B(w: np.ndarray, Bc: CoeffVec, N: int) -> CoeffVec:
    acc = CoeffVec(np.zeros(N + 1, complex))
    one = np.zeros(N + 1, complex)
    for coef in w[::-1]:
        acc = mul(acc, Bc, N)
        one[0] = coef
        acc = acc + CoeffVec(one)
    return acc


def determinant_oracle(tup, basis: TMBasis) -> float:
    """||phi_1 l_1 - phi_2 l_2 + phi_3 l_3||_2 for a triple and an order-2 B.

    l_j are the 2x2 minors of the B-matrix rows (the cofactors of the first
    row of the 3x3 matrix whose first row is the triple). The identity is
    algebraic; the result measures expansion and truncation error only.
    """
    if basis.n != 2 or len(tup) != 3:
        raise DomainError("the determinant identity needs n = 2 and three functions")
    A = build_b_matrix(tup, basis).entries
    c = np.convolve
    lam1 = c(A[0, 1], A[1, 2]) - c(A[0, 2], A[1, 1])
    lam2 = c(A[0, 0], A[1, 2]) - c(A[0, 2], A[1, 0])
    lam3 = c(A[0, 0], A[1, 1]) - c(A[0, 1], A[1, 0])
    N = basis.degree
    Bc = basis.blaschke.taylor_coeffs(N)
    total = CoeffVec(np.zeros(N + 1, complex))
    for sign, phi, lam in ((1, tup[0], lam1), (-1, tup[1], lam2), (1, tup[2], lam3)):
        total = total + sign * mul(CoeffVec(phi.padded(N)), _horner_in_B(lam, Bc, N), N)
    return total.norm()
