"""Dense complex matrix pencils A + lambda*B and the Hermitian subclass.

Matrices are plain complex numpy arrays.  Pencils are frozen dataclasses
whose coefficient arrays are made read-only at construction, so they can be
shared between workers without copying.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotHermitian, SingularTransform, TooLarge

HERM_TOL = 1e-12
RANK_TOL = 1e-10
COND_MAX = 1e6
N_SAMPLE = 7
DET_MAX_N = 12


def _frozen(M) -> np.ndarray:
    out = np.array(M, dtype=complex)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix entries must be finite")
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class MatrixPencil:
    """The pencil A + lambda*B with A, B of identical shape."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A, B = _frozen(self.A), _frozen(self.B)
        if A.shape != B.shape:
            raise ValueError(f"coefficient shapes differ: {A.shape} vs {B.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    def __call__(self, lam: complex) -> np.ndarray:
        return evaluate(self, lam)

    def __eq__(self, other):
        if not isinstance(other, MatrixPencil):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.A, other.A)
                and np.array_equal(self.B, other.B))

    __hash__ = None

    def transpose(self) -> "MatrixPencil":
        return MatrixPencil(self.A.T, self.B.T)

    def conj_transpose(self) -> "MatrixPencil":
        # lambda itself is not conjugated
        return MatrixPencil(self.A.conj().T, self.B.conj().T)


def herm_tol(A: np.ndarray, B: np.ndarray | None = None) -> float:
    scale = np.linalg.norm(A)
    if B is not None:
        scale = max(scale, np.linalg.norm(B))
    return HERM_TOL * max(scale, 1.0)


def asymmetry(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T), initial=0.0))


@dataclass(frozen=True, eq=False)
class HermitianPencil(MatrixPencil):
    """Square pencil with A = A* and B = B* (within ``herm_tol``)."""

    def __post_init__(self):
        super().__post_init__()
        n, m = self.A.shape
        if n != m:
            raise ValueError(f"Hermitian pencil must be square, got {self.A.shape}")
        if n == 0:
            raise ValueError("empty (n=0) pencils are not supported")
        tol = herm_tol(self.A, self.B)
        if asymmetry(self.A) > tol or asymmetry(self.B) > tol:
            raise NotHermitian(
                f"asymmetry {max(asymmetry(self.A), asymmetry(self.B)):.3g} exceeds {tol:.3g}")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @classmethod
    def symmetrized(cls, A, B) -> "HermitianPencil":
        """Build from nearly Hermitian data, replacing each M by (M + M*)/2."""
        A = np.asarray(A, dtype=complex)
        B = np.asarray(B, dtype=complex)
        return cls((A + A.conj().T) / 2, (B + B.conj().T) / 2)


class Inertia(NamedTuple):
    pos: int
    neg: int
    zero: int


def evaluate(p: MatrixPencil, lam: complex) -> np.ndarray:
    return p.A + lam * p.B


def direct_sum(*pencils: MatrixPencil) -> MatrixPencil:
    """Block-diagonal pencil; Hermitian if every summand is."""
    rows = sum(p.shape[0] for p in pencils)
    cols = sum(p.shape[1] for p in pencils)
    A = np.zeros((rows, cols), dtype=complex)
    B = np.zeros((rows, cols), dtype=complex)
    i = j = 0
    for p in pencils:
        r, c = p.shape
        A[i:i + r, j:j + c] = p.A
        B[i:i + r, j:j + c] = p.B
        i, j = i + r, j + c
    if pencils and all(isinstance(p, HermitianPencil) for p in pencils):
        return HermitianPencil(A, B)
    return MatrixPencil(A, B)


def congruence(p: HermitianPencil, Q, cond_max: float = COND_MAX) -> HermitianPencil:
    """Return Q* p Q, re-symmetrized coefficientwise."""
    Q = np.asarray(Q, dtype=complex)
    if Q.shape != (p.n, p.n):
        raise ValueError(f"transform shape {Q.shape} does not match pencil size {p.n}")
    cond = np.linalg.cond(Q)
    if not np.isfinite(cond) or cond > cond_max:
        raise SingularTransform(f"condition estimate {cond:.3g} exceeds {cond_max:.3g}")
    Qh = Q.conj().T
    return HermitianPencil.symmetrized(Qh @ p.A @ Q, Qh @ p.B @ Q)


def inertia_of(M, tol: float = RANK_TOL) -> Inertia:
    """Signature (pos, neg, zero) of a Hermitian matrix.

    Eigenvalues within ``tol * scale`` of zero count as zero, where scale is
    the largest eigenvalue magnitude (1 if the matrix vanishes).
    """
    M = np.asarray(M, dtype=complex)
    if asymmetry(M) > herm_tol(M):
        raise NotHermitian(f"asymmetry {asymmetry(M):.3g} exceeds tolerance")
    if M.size == 0:
        return Inertia(0, 0, 0)
    w = np.linalg.eigvalsh((M + M.conj().T) / 2)
    scale = np.max(np.abs(w))
    if scale == 0:
        scale = 1.0
    band = tol * scale
    pos = int(np.sum(w > band))
    neg = int(np.sum(w < -band))
    return Inertia(pos, neg, len(w) - pos - neg)


class RankDecision(NamedTuple):
    rank: int
    gap: float
    """ratio between the smallest kept and largest dropped singular value"""


def rank_decision(M: np.ndarray, tol: float = RANK_TOL) -> RankDecision:
    """Numerical rank with the scaled threshold max(m, n) * s_1 * tol."""
    M = np.asarray(M)
    if M.size == 0:
        return RankDecision(0, np.inf)
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return RankDecision(0, np.inf)
    thresh = max(M.shape) * s[0] * tol
    r = int(np.sum(s > thresh))
    floor = np.finfo(float).eps * s[0]
    dropped = s[r] if r < len(s) else 0.0
    gap = s[r - 1] / max(dropped, floor) if r > 0 else np.inf
    return RankDecision(r, float(gap))


def numerical_rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    return rank_decision(M, tol).rank


def annulus_points(rng: np.random.Generator, count: int = N_SAMPLE,
                   rmin: float = 0.5, rmax: float = 2.0) -> np.ndarray:
    """Points uniform (in area) on rmin <= |z| <= rmax, rotated by a random phase."""
    radius = np.sqrt(rng.uniform(rmin ** 2, rmax ** 2, size=count))
    angle = rng.uniform(0, 2 * np.pi, size=count) + rng.uniform(0, 2 * np.pi)
    return radius * np.exp(1j * angle)


def normal_rank(p: MatrixPencil, seed=0, count: int = N_SAMPLE) -> int:
    """Rank of the pencil over the rational functions, by random evaluation."""
    if 0 in p.shape:
        return 0
    rng = np.random.default_rng(seed)
    return max(numerical_rank(evaluate(p, z)) for z in annulus_points(rng, count))


def determinant(p: MatrixPencil, max_n: int = DET_MAX_N) -> np.ndarray:
    """Coefficients (ascending powers of lambda) of det(A + lambda*B).

    Interpolates at the n+1 roots of unity, which is an exact inverse DFT for
    a polynomial of degree <= n.
    """
    n, m = p.shape
    if n != m:
        raise ValueError("determinant needs a square pencil")
    if n > max_n:
        raise TooLarge(f"n={n} exceeds the determinant guard {max_n}")
    if n == 0:
        return np.array([1.0 + 0j])
    N = n + 1
    nodes = np.exp(2j * np.pi * np.arange(N) / N)
    values = np.array([np.linalg.det(evaluate(p, z)) for z in nodes])
    return np.fft.fft(values) / N


def polyeval(coeffs, lam: complex) -> complex:
    """Evaluate ascending-order coefficients at lam."""
    return complex(np.polynomial.polynomial.polyval(lam, np.asarray(coeffs)))


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    rows, cols = M.shape
    flat = M.reshape(-1)
    return {"rows": rows, "cols": cols,
            "re": [float(x) for x in flat.real],
            "im": [float(x) for x in flat.imag]}


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros(rows * cols)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise ValueError("entry count does not match rows*cols")
    return (re + 1j * im).reshape(rows, cols)


def pencil_to_json(p: MatrixPencil) -> dict:
    return {"A": matrix_to_json(p.A), "B": matrix_to_json(p.B)}


def pencil_from_json(obj: dict, hermitian: bool = True) -> MatrixPencil:
    A, B = matrix_from_json(obj["A"]), matrix_from_json(obj["B"])
    return HermitianPencil(A, B) if hermitian else MatrixPencil(A, B)
