"""Blocks of the Hermitian Kronecker canonical form and their realization.

Block parameters are kept as given (int, Fraction or float) so that the same
block can be realized in floating point or in exact rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterator, Union

import numpy as np

from .errors import InvalidBlock, NotSkewHermitian, SamplingFailed
from .pencil import (COND_MAX, HermitianPencil, MatrixPencil, asymmetry,
                     direct_sum, herm_tol)

IM_MIN = 0.05
MAX_REJECTIONS = 16
POLICIES = ("integers", "rationals", "gaussian")


def _check_sign(sign):
    if sign not in (1, -1):
        raise InvalidBlock(f"sign must be +1 or -1, got {sign!r}")


def _check_size(name, k, minimum):
    if not isinstance(k, (int, np.integer)) or k < minimum:
        raise InvalidBlock(f"{name} must be an integer >= {minimum}, got {k!r}")


@dataclass(frozen=True)
class RealJordan:
    """sign * J_k^H(a) for a real eigenvalue a."""
    k: int
    a: Real
    sign: int = 1

    def __post_init__(self):
        _check_size("k", self.k, 1)
        _check_sign(self.sign)
        if isinstance(self.a, complex) or not np.isfinite(float(self.a)):
            raise InvalidBlock(f"real eigenvalue must be a finite real, got {self.a!r}")

    @property
    def size(self) -> int:
        return self.k


@dataclass(frozen=True)
class InfJordan:
    """sign * J_k^H(inf)."""
    k: int
    sign: int = 1

    def __post_init__(self):
        _check_size("k", self.k, 1)
        _check_sign(self.sign)

    @property
    def size(self) -> int:
        return self.k


@dataclass(frozen=True)
class ConjPair:
    """J_k^H(mu, conj(mu)) with im(mu) > 0; realized size is 2k."""
    k: int
    mu_re: Real
    mu_im: Real

    def __post_init__(self):
        _check_size("k", self.k, 1)
        if not self.mu_im > 0:
            raise InvalidBlock(f"conjugate-pair eigenvalue needs im(mu) > 0, got {self.mu_im!r}")

    @classmethod
    def from_complex(cls, k: int, mu: complex) -> "ConjPair":
        return cls(k, float(mu.real), float(mu.imag))

    @property
    def mu(self) -> complex:
        return complex(float(self.mu_re), float(self.mu_im))

    @property
    def size(self) -> int:
        return 2 * self.k


@dataclass(frozen=True)
class Singular:
    """M_d, carrying one left and one right minimal index d; size 2d+1."""
    d: int

    def __post_init__(self):
        _check_size("d", self.d, 0)

    @property
    def size(self) -> int:
        return 2 * self.d + 1


CanonicalBlock = Union[RealJordan, InfJordan, ConjPair, Singular]


@dataclass(frozen=True)
class HKCF:
    """Ordered direct sum of canonical blocks."""
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(self.blocks)
        for b in blocks:
            if not isinstance(b, (RealJordan, InfJordan, ConjPair, Singular)):
                raise InvalidBlock(f"not a canonical block: {b!r}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(b.size for b in self.blocks)

    @property
    def normal_rank(self) -> int:
        return self.n - sum(isinstance(b, Singular) for b in self.blocks)

    def real_eigenvalues(self) -> list:
        return sorted({b.a for b in self.blocks if isinstance(b, RealJordan)})

    def pair_eigenvalues(self) -> list:
        return sorted({(b.mu_re, b.mu_im) for b in self.blocks if isinstance(b, ConjPair)})

    def distinct_finite_eigenvalue_count(self) -> int:
        # a conjugate pair contributes two different eigenvalues
        return len(self.real_eigenvalues()) + 2 * len(self.pair_eigenvalues())

    def minimal_indices(self) -> list[int]:
        return sorted((b.d for b in self.blocks if isinstance(b, Singular)), reverse=True)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def build_F(d: int) -> np.ndarray:
    F = np.zeros((d, d + 1))
    F[np.arange(d), np.arange(d) + 1] = 1
    return F


def build_G(d: int) -> np.ndarray:
    G = np.zeros((d, d + 1))
    G[np.arange(d), np.arange(d)] = 1
    return G


def build_L(d: int) -> MatrixPencil:
    """L_d = lambda*G_d + F_d, a d x (d+1) pencil (0 x 1 for d = 0)."""
    if d < 0:
        raise InvalidBlock(f"d must be >= 0, got {d}")
    return MatrixPencil(build_F(d), build_G(d))


def block_entries(b: CanonicalBlock) -> Iterator[tuple]:
    """Yield the nonzero entries (i, j, coefficient, re, im) of a block.

    ``coefficient`` is "A" (constant term) or "B" (lambda term).  Values are
    returned with the block's own number type, untouched.
    """
    if isinstance(b, RealJordan):
        k, s = b.k, b.sign
        for i in range(k):
            j = k - 1 - i
            yield i, j, "B", s, 0
            if b.a != 0:
                yield i, j, "A", -s * b.a, 0
            if j > 0:
                yield i, j - 1, "A", s, 0
    elif isinstance(b, InfJordan):
        k, s = b.k, b.sign
        for i in range(k):
            j = k - 1 - i
            yield i, j, "A", s, 0
            if j > 0:
                yield i, j - 1, "B", s, 0
    elif isinstance(b, ConjPair):
        k = b.k
        # lower-left block J_k^H(mu), upper-right block J_k^H(conj mu)
        for i in range(k):
            j = k - 1 - i
            for (r, c, im_sign) in ((k + i, j, 1), (i, k + j, -1)):
                yield r, c, "B", 1, 0
                yield r, c, "A", -b.mu_re, -im_sign * b.mu_im
                if j > 0:
                    yield r, c - 1, "A", 1, 0
    elif isinstance(b, Singular):
        d = b.d
        # M_d = [[0, L_d^T], [L_d, 0]]; L_d occupies rows d+1.., cols 0..d
        for i in range(d):
            for (r, c) in ((d + 1 + i, i), (i, d + 1 + i)):
                yield r, c, "B", 1, 0
            for (r, c) in ((d + 1 + i, i + 1), (i + 1, d + 1 + i)):
                yield r, c, "A", 1, 0
    else:
        raise InvalidBlock(f"not a canonical block: {b!r}")


def hkcf_entries(h: HKCF) -> Iterator[tuple]:
    offset = 0
    for b in h.blocks:
        for i, j, which, re, im in block_entries(b):
            yield offset + i, offset + j, which, re, im
        offset += b.size


def _assemble(entries, n: int) -> HermitianPencil:
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    target = {"A": A, "B": B}
    for i, j, which, re, im in entries:
        target[which][i, j] += complex(float(re), float(im))
    return HermitianPencil(A, B)


def build_block(b: CanonicalBlock) -> HermitianPencil:
    return _assemble(block_entries(b), b.size)


def build_hkcf(h: HKCF) -> HermitianPencil:
    if h.n == 0:
        raise ValueError("empty canonical form")
    return _assemble(hkcf_entries(h), h.n)


def block_pencils(h: HKCF) -> list[HermitianPencil]:
    return [build_block(b) for b in h.blocks]


# --- sampling ---------------------------------------------------------------

def _draw_reals(rng: np.random.Generator, count: int, policy: str) -> list:
    if count == 0:
        return []
    if policy == "integers":
        return [int(x) for x in rng.choice(np.arange(-1000, 1001), size=count, replace=False)]
    if policy == "rationals":
        out: set = set()
        while len(out) < count:
            den = int(rng.integers(1, 1001))
            num = int(rng.integers(-1000 * den, 1000 * den + 1))
            out.add(Fraction(num, den))
        values = list(out)
        rng.shuffle(values)
        return values
    if policy == "gaussian":
        for _ in range(1000):
            x = rng.standard_normal(count)
            if count < 2 or np.min(np.diff(np.sort(x))) >= 1e-6:
                return [float(v) for v in x]
        raise SamplingFailed("could not draw well-separated gaussian eigenvalues")
    raise ValueError(f"unknown eigenvalue policy {policy!r}; expected one of {POLICIES}")


def _draw_pairs(rng: np.random.Generator, count: int, policy: str) -> list[tuple]:
    out: list[tuple] = []
    while len(out) < count:
        if policy == "integers":
            mu = (int(rng.integers(-1000, 1001)), int(rng.integers(1, 1001)))
        elif policy == "rationals":
            re, im = _draw_reals(rng, 2, "rationals")
            im = abs(im)
            if im < IM_MIN:
                continue
            mu = (re, im)
        elif policy == "gaussian":
            mu = (float(rng.standard_normal()), IM_MIN + abs(float(rng.standard_normal())))
        else:
            raise ValueError(f"unknown eigenvalue policy {policy!r}")
        if mu not in out:
            out.append(mu)
    return out


def resample_eigenvalues(h: HKCF, policy: str = "integers", seed=None) -> HKCF:
    """Replace each distinct finite eigenvalue of h by a fresh distinct value.

    Blocks that shared an eigenvalue keep sharing the new one, so the result
    lies in the same bundle as h.
    """
    rng = np.random.default_rng(seed)
    reals = h.real_eigenvalues()
    pairs = h.pair_eigenvalues()
    new_reals = dict(zip(reals, _draw_reals(rng, len(reals), policy)))
    new_pairs = dict(zip(pairs, _draw_pairs(rng, len(pairs), policy)))
    blocks = []
    for b in h.blocks:
        if isinstance(b, RealJordan):
            b = RealJordan(b.k, new_reals[b.a], b.sign)
        elif isinstance(b, ConjPair):
            re, im = new_pairs[(b.mu_re, b.mu_im)]
            b = ConjPair(b.k, re, im)
        blocks.append(b)
    return HKCF(tuple(blocks))


def random_transform(rng: np.random.Generator, n: int, cond_max: float = COND_MAX) -> np.ndarray:
    """Standard complex Gaussian matrix with condition number <= cond_max."""
    for _ in range(MAX_REJECTIONS):
        Q = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        if np.linalg.cond(Q) <= cond_max:
            return Q
    raise SamplingFailed(f"{MAX_REJECTIONS} transforms rejected by the condition bound")


def random_congruence_sample(h: HKCF, eigenvalue_policy: str = "integers", seed=None,
                             cond_max: float = COND_MAX) -> HermitianPencil:
    """A random member of the bundle of h: fresh eigenvalues, then Q* H Q."""
    rng = np.random.default_rng(seed)
    fresh = resample_eigenvalues(h, eigenvalue_policy, rng)
    Q = random_transform(rng, fresh.n, cond_max)
    H = build_hkcf(fresh)
    Qh = Q.conj().T
    return HermitianPencil.symmetrized(Qh @ H.A @ Q, Qh @ H.B @ Q)


def skew_to_hermitian(p: MatrixPencil) -> HermitianPencil:
    """Map a skew-Hermitian pencil N to the Hermitian pencil i*N."""
    A, B = np.asarray(p.A), np.asarray(p.B)
    tol = herm_tol(A, B)
    if (A.shape[0] != A.shape[1]
            or np.max(np.abs(A + A.conj().T), initial=0.0) > tol
            or np.max(np.abs(B + B.conj().T), initial=0.0) > tol):
        raise NotSkewHermitian("pencil is not skew-Hermitian within tolerance")
    return HermitianPencil(1j * A, 1j * B)


# --- JSON -------------------------------------------------------------------

def _num_to_json(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def block_to_json(b: CanonicalBlock) -> dict:
    if isinstance(b, RealJordan):
        return {"type": "realJordan", "k": b.k, "a": _num_to_json(b.a), "sign": b.sign}
    if isinstance(b, InfJordan):
        return {"type": "infJordan", "k": b.k, "sign": b.sign}
    if isinstance(b, ConjPair):
        return {"type": "conjPair", "k": b.k, "muRe": _num_to_json(b.mu_re),
                "muIm": _num_to_json(b.mu_im)}
    return {"type": "singular", "d": b.d}


def block_from_json(obj: dict) -> CanonicalBlock:
    kind = obj.get("type")
    if kind == "realJordan":
        return RealJordan(int(obj["k"]), obj["a"], int(obj.get("sign", 1)))
    if kind == "infJordan":
        return InfJordan(int(obj["k"]), int(obj.get("sign", 1)))
    if kind == "conjPair":
        return ConjPair(int(obj["k"]), obj["muRe"], obj["muIm"])
    if kind == "singular":
        return Singular(int(obj["d"]))
    raise InvalidBlock(f"unknown block type {kind!r}")


def hkcf_to_json(h: HKCF) -> dict:
    return {"blocks": [block_to_json(b) for b in h.blocks]}


def hkcf_from_json(obj: dict) -> HKCF:
    return HKCF(tuple(block_from_json(b) for b in obj["blocks"]))


def is_exactly_hermitian(p: MatrixPencil) -> bool:
    return asymmetry(p.A) == 0 and asymmetry(p.B) == 0


__all__ = [
    "RealJordan", "InfJordan", "ConjPair", "Singular", "CanonicalBlock", "HKCF",
    "build_F", "build_G", "build_L", "build_block", "build_hkcf", "block_entries",
    "hkcf_entries", "block_pencils", "resample_eigenvalues", "random_transform",
    "random_congruence_sample", "skew_to_hermitian", "hkcf_to_json", "hkcf_from_json",
    "block_to_json", "block_from_json", "direct_sum", "is_exactly_hermitian",
]
