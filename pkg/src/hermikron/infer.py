"""Numerical recovery of the complete eigenstructure of a Hermitian pencil.

Normal rank comes from random evaluation, minimal indices from the ranks of
block-Toeplitz expansion matrices, eigenvalues of singular pencils from two
independent Hermitian rank completions whose common eigenvalues are kept,
and the sign of a simple real eigenvalue from the quadratic form of B on the
null space of the evaluated pencil.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .bundles import BundleDescriptor
from .errors import (AmbiguousSign, InferenceUnstable, NotRegular, RankAmbiguity,
                     UnpairedComplex)
from .pencil import MatrixPencil, normal_rank, rank_decision

GAP_MIN = 1e6
REAL_TOL = 1e-8
PAIR_TOL = 1e-6
MATCH_TOL = 1e-6
COMPLETION_SCALE = 1e-2
SIGN_TOL = 1e-8
INF = complex(np.inf, 0.0)


def _checked_rank(M: np.ndarray, gap_min: float, what: str) -> int:
    dec = rank_decision(M)
    if dec.gap < gap_min:
        raise RankAmbiguity(f"{what}: singular-value gap {dec.gap:.3g} below {gap_min:.0e}")
    return dec.rank


def _right_toeplitz(A: np.ndarray, B: np.ndarray, j: int) -> np.ndarray:
    """(j+2)m x (j+1)n matrix of (A + lambda B) acting on vector polynomials of degree j."""
    m, n = A.shape
    T = np.zeros(((j + 2) * m, (j + 1) * n), dtype=complex)
    for i in range(j + 1):
        T[i * m:(i + 1) * m, i * n:(i + 1) * n] = A
        T[(i + 1) * m:(i + 2) * m, i * n:(i + 1) * n] = B
    return T


def minimal_index_profile(p: MatrixPencil, nrank: int | None = None, seed=0,
                          gap_min: float = GAP_MIN) -> list[int]:
    """Right minimal indices, largest first.

    The nullity N_j of the degree-j expansion matrix satisfies
    N_j - N_{j-1} = #{indices <= j}; the loop stops once every one of the
    n - nrank indices has been accounted for.
    """
    A, B = np.asarray(p.A), np.asarray(p.B)
    n = A.shape[1]
    if nrank is None:
        nrank = normal_rank(p, seed)
    missing = n - nrank
    indices: list[int] = []
    prev_null, prev_count = 0, 0
    j = 0
    while prev_count < missing:
        if j > n:
            raise RankAmbiguity("minimal-index counts did not stabilize")
        T = _right_toeplitz(A, B, j)
        null = T.shape[1] - _checked_rank(T, gap_min, f"expansion matrix j={j}")
        count = null - prev_null
        if count < prev_count or count > missing:
            raise RankAmbiguity(f"inconsistent nullity sequence at j={j}")
        indices += [j] * (count - prev_count)
        prev_null, prev_count = null, count
        j += 1
    return sorted(indices, reverse=True)


def infinite_multiplicity(p: MatrixPencil, gap_min: float = GAP_MIN) -> int:
    """Algebraic multiplicity of the infinite eigenvalue of a regular pencil.

    This is the multiplicity of mu = 0 for B + mu*A, read off the nullities
    of the square lower block-triangular Toeplitz matrices with B on the
    diagonal and A below it.
    """
    A, B = np.asarray(p.A), np.asarray(p.B)
    n = A.shape[0]
    prev, total = None, 0
    for j in range(n + 1):
        T = np.zeros(((j + 1) * n, (j + 1) * n), dtype=complex)
        for i in range(j + 1):
            T[i * n:(i + 1) * n, i * n:(i + 1) * n] = B
            if i:
                T[i * n:(i + 1) * n, (i - 1) * n:i * n] = A
        null = T.shape[1] - _checked_rank(T, gap_min, f"infinite chain j={j}")
        step = null - total
        if step == 0 or (prev is not None and step > prev):
            if step:
                raise RankAmbiguity("inconsistent chain lengths at infinity")
            break
        prev, total = step, null
    return total


def eigs_regular(p: MatrixPencil, seed=0, n_inf: int | None = None) -> list[complex]:
    """All n eigenvalues of a regular pencil, infinite ones as complex(inf, 0).

    Eigenvalues solve det(A + lambda B) = 0, i.e. lambda = alpha/beta for
    the generalized problem A v = (alpha/beta) (-B) v.
    """
    n = p.shape[0]
    if normal_rank(p, seed) != n:
        raise NotRegular("pencil is singular; use eigs_singular")
    if n_inf is None:
        n_inf = infinite_multiplicity(p)
    alpha, beta = sla.eig(np.asarray(p.A), -np.asarray(p.B), right=False, homogeneous_eigvals=True)
    order = np.argsort(np.abs(beta) / np.maximum(np.abs(alpha), np.finfo(float).tiny))
    out = [INF] * n_inf
    for idx in order[n_inf:]:
        out.append(complex(alpha[idx] / beta[idx]))
    return out


def _hermitian_completion(rng: np.random.Generator, n: int, k: int, tau: float):
    W = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / math.sqrt(2 * n)
    DA = rng.standard_normal(k)
    DB = rng.choice([-1.0, 1.0], size=k)
    return tau * (W * DA) @ W.conj().T, tau * (W * DB) @ W.conj().T


def _finite_eigs(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    alpha, beta = sla.eig(A, -B, right=False, homogeneous_eigvals=True)
    keep = np.abs(beta) > 1e-10 * np.abs(alpha)
    return alpha[keep] / beta[keep]


def _match(x: np.ndarray, y: np.ndarray, tol: float) -> list[complex]:
    """Values of x having a partner in y within tol*max(1, |value|), greedy nearest first."""
    if x.size == 0 or y.size == 0:
        return []
    D = np.abs(x[:, None] - y[None, :])
    bound = tol * np.maximum(1.0, np.abs(x))[:, None]
    pairs = sorted(zip(*np.nonzero(D <= bound)), key=lambda ij: D[ij])
    used_x, used_y, out = set(), set(), []
    for i, j in pairs:
        if i in used_x or j in used_y:
            continue
        used_x.add(i)
        used_y.add(j)
        out.append(complex((x[i] + y[j]) / 2))
    return out


def eigs_singular(p: MatrixPencil, seed=0, nrank: int | None = None,
                  match_tol: float = MATCH_TOL, scale: float = COMPLETION_SCALE) -> list[complex]:
    """Finite eigenvalues of a singular pencil by double rank completion.

    Adding a random Hermitian term of rank n - nrank makes the pencil regular
    while leaving its true eigenvalues in place; the remaining eigenvalues
    move with the completion, so only values shared by two independent runs
    are kept.  A third run must reproduce the same count.
    """
    A, B = np.asarray(p.A), np.asarray(p.B)
    n = A.shape[0]
    if nrank is None:
        nrank = normal_rank(p, seed)
    k = n - nrank
    if k == 0:
        return [z for z in eigs_regular(p, seed) if np.isfinite(z)]
    rng = np.random.default_rng(seed)
    tau = scale * max(np.linalg.norm(A), np.linalg.norm(B), np.finfo(float).tiny)
    runs = []
    for _ in range(3):
        dA, dB = _hermitian_completion(rng, n, k, tau)
        runs.append(_finite_eigs(A + dA, B + dB))
    common = _match(runs[0], runs[1], match_tol)
    confirm = _match(np.array(common, dtype=complex), runs[2], match_tol)
    if len(confirm) != len(common):
        raise InferenceUnstable(
            f"matched {len(common)} eigenvalues, confirmation run kept {len(confirm)}")
    return sorted(common, key=lambda z: (z.real, z.imag))


@dataclass(frozen=True)
class Classified:
    reals: list
    pairs: list
    """upper-half-plane representative of each conjugate pair"""


def classify_real(eigs, tol: float = REAL_TOL, pair_tol: float = PAIR_TOL) -> Classified:
    """Split finite eigenvalues into real values and conjugate pairs."""
    reals, rest = [], []
    for z in eigs:
        z = complex(z)
        if abs(z.imag) <= tol * (1 + abs(z.real)):
            reals.append(z.real)
        else:
            rest.append(z)
    pairs = []
    while rest:
        z = rest.pop(0)
        cands = [(abs(w - z.conjugate()), i) for i, w in enumerate(rest)
                 if np.sign(w.imag) != np.sign(z.imag)]
        if not cands:
            raise UnpairedComplex(f"{z} has no conjugate partner")
        dist, i = min(cands)
        if dist > pair_tol * (1 + abs(z)):
            raise UnpairedComplex(f"{z}: nearest conjugate partner at distance {dist:.3g}")
        w = rest.pop(i)
        up = z if z.imag > 0 else w
        other = w if up is z else z
        pairs.append(complex((up.real + other.real) / 2, (up.imag - other.imag) / 2))
    return Classified(sorted(reals), sorted(pairs, key=lambda z: (z.real, z.imag)))


def sign_characteristic_simple(p: MatrixPencil, a: float, tol: float = SIGN_TOL,
                               nrank: int | None = None, seed=0) -> tuple[int, float]:
    """Sign of the simple real eigenvalue a, with the size of the deciding value.

    N spans the (n - nrank + 1)-dimensional null space of A + aB.  The form
    N* B N vanishes on the part coming from the singular blocks, leaving a
    single nonzero eigenvalue whose sign is the sign characteristic.
    """
    A, B = np.asarray(p.A), np.asarray(p.B)
    n = A.shape[0]
    if nrank is None:
        nrank = normal_rank(p, seed)
    dim = n - nrank + 1
    _, _, Vh = np.linalg.svd(A + a * B)
    N = Vh[-dim:].conj().T
    F = N.conj().T @ B @ N
    w = np.linalg.eigvalsh((F + F.conj().T) / 2)
    dominant = w[np.argmax(np.abs(w))]
    scale = max(np.linalg.norm(B, 2), np.finfo(float).tiny)
    if abs(dominant) <= tol * scale:
        raise AmbiguousSign(f"quadratic form value {dominant:.3g} at a={a} is not resolvable")
    return (1 if dominant > 0 else -1), float(abs(dominant) / scale)


@dataclass
class StructureReport:
    n: int
    normal_rank: int
    real_eigs: list = field(default_factory=list)
    """(value, sign or None)"""
    pair_eigs: list = field(default_factory=list)
    infinite_count: int = 0
    right_minimal_indices: list = field(default_factory=list)
    left_minimal_indices: list = field(default_factory=list)
    residuals: dict = field(default_factory=dict)

    @property
    def has_infinite(self) -> bool:
        return self.infinite_count > 0

    @property
    def plus_count(self) -> int:
        return sum(1 for _, s in self.real_eigs if s == 1)

    def as_dict(self) -> dict:
        return {
            "n": self.n, "normalRank": self.normal_rank,
            "realEigs": [{"value": v, "sign": s} for v, s in self.real_eigs],
            "pairEigs": [[z.real, z.imag] for z in self.pair_eigs],
            "hasInfinite": self.has_infinite, "infiniteCount": self.infinite_count,
            "rightMinimalIndices": self.right_minimal_indices,
            "leftMinimalIndices": self.left_minimal_indices,
            "residuals": self.residuals,
        }


def full_report(p: MatrixPencil, seed=0) -> StructureReport:
    A, B = np.asarray(p.A), np.asarray(p.B)
    n = A.shape[0]
    nrank = normal_rank(p, seed)
    report = StructureReport(n, nrank)
    if nrank == 0:
        report.right_minimal_indices = [0] * n
        report.left_minimal_indices = [0] * n
        return report
    report.right_minimal_indices = minimal_index_profile(p, nrank)
    report.left_minimal_indices = minimal_index_profile(MatrixPencil(A.T, B.T), nrank)
    if nrank == n:
        n_inf = infinite_multiplicity(p)
        eigs = [z for z in eigs_regular(p, seed, n_inf) if np.isfinite(z)]
        report.infinite_count = n_inf
    else:
        eigs = eigs_singular(p, seed, nrank)
        report.infinite_count = nrank - _checked_rank(B, GAP_MIN, "lambda coefficient")
    cls = classify_real(eigs)
    report.pair_eigs = cls.pairs
    margins = []
    for a in cls.reals:
        try:
            s, margin = sign_characteristic_simple(p, a, nrank=nrank)
            margins.append(margin)
        except AmbiguousSign:
            s = None
        report.real_eigs.append((a, s))
    report.residuals = {
        "minSignMargin": min(margins) if margins else None,
        "maxEigResidual": max((float(np.linalg.svd(A + z * B, compute_uv=False)[nrank - 1])
                               for z in eigs), default=None),
    }
    return report


def match_descriptor(report: StructureReport, desc: BundleDescriptor) -> bool:
    """True if the report shows exactly the generic structure named by desc."""
    want_idx = sorted(desc.minimal_indices, reverse=True)
    want_pairs = desc.d if desc.regular else 0
    return (report.n == desc.n
            and report.normal_rank == desc.r
            and report.right_minimal_indices == want_idx
            and report.left_minimal_indices == want_idx
            and report.infinite_count == 0
            and len(report.real_eigs) == desc.real_count
            and len(report.pair_eigs) == want_pairs
            and all(s is not None for _, s in report.real_eigs)
            and report.plus_count == desc.c)
