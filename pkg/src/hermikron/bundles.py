"""Generic bundles of n x n Hermitian pencils with rank at most r.

A descriptor (n, r, c, d) names one generic structure.  With r == n it is the
regular form R_{c,d}: d conjugate pairs and n-2d simple real eigenvalues, c
of them with sign +1.  With r < n it is K_{c,d}: n-r singular blocks
M_alpha / M_{alpha+1} whose sizes balance d = (n-r)*alpha + s, plus r-2d
simple real eigenvalues, c of them with sign +1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .canonical import HKCF, ConjPair, RealJordan, Singular
from .errors import EigenvalueCollision
from .pencil import Inertia


def balance_division(total_d: int, t: int) -> tuple[int, int]:
    """Euclidean division total_d = t*alpha + s with 0 <= s < t."""
    if t < 1 or total_d < 0:
        raise ValueError(f"need t >= 1 and total_d >= 0, got t={t}, total_d={total_d}")
    return divmod(total_d, t)


@dataclass(frozen=True, order=True)
class BundleDescriptor:
    n: int
    r: int
    c: int
    d: int

    def __post_init__(self):
        n, r, c, d = self.n, self.r, self.c, self.d
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if r == n:
            ok = 0 <= d <= n // 2 and 0 <= c <= n - 2 * d
        else:
            ok = 1 <= r <= n - 1 and 0 <= d <= r // 2 and 0 <= c <= r - 2 * d
        if not ok:
            raise ValueError(f"invalid descriptor {self}")

    @property
    def regular(self) -> bool:
        return self.r == self.n

    @property
    def alpha(self) -> int | None:
        return None if self.regular else balance_division(self.d, self.n - self.r)[0]

    @property
    def s(self) -> int | None:
        return None if self.regular else balance_division(self.d, self.n - self.r)[1]

    @property
    def real_count(self) -> int:
        """Number of simple real eigenvalues."""
        return self.n - 2 * self.d if self.regular else self.r - 2 * self.d

    @property
    def minimal_indices(self) -> list[int]:
        if self.regular:
            return []
        return [self.alpha + 1] * self.s + [self.alpha] * (self.n - self.r - self.s)

    def as_dict(self) -> dict:
        return {"n": self.n, "r": self.r, "c": self.c, "d": self.d,
                "alpha": self.alpha, "s": self.s}


def enumerate_regular(n: int) -> list[BundleDescriptor]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return [BundleDescriptor(n, n, c, d)
            for d in range(n // 2 + 1) for c in range(n - 2 * d + 1)]


def enumerate_bounded(n: int, r: int) -> list[BundleDescriptor]:
    if not 1 <= r <= n - 1:
        raise ValueError(f"bounded case needs 1 <= r <= n-1, got n={n}, r={r}")
    return [BundleDescriptor(n, r, c, d)
            for d in range(r // 2 + 1) for c in range(r - 2 * d + 1)]


def count_formula(r: int) -> int:
    return (r // 2 + 1) * ((r + 3) // 2)


def default_eigenvalues(desc: BundleDescriptor) -> tuple[list[int], list[tuple[int, int]]]:
    """Small distinct integer eigenvalues: reals 1..m, pairs j + i*j."""
    reals = list(range(1, desc.real_count + 1))
    pairs = [(j, j) for j in range(1, (desc.d if desc.regular else 0) + 1)]
    return reals, pairs


def realize(desc: BundleDescriptor, reals: Sequence | None = None,
            pairs: Sequence | None = None) -> HKCF:
    """Canonical representative of the bundle, in display order.

    ``reals`` supplies the real eigenvalues (the first c get sign +1),
    ``pairs`` the (re, im) values of the conjugate pairs (regular case only).
    """
    if reals is None and pairs is None:
        reals, pairs = default_eigenvalues(desc)
    reals = list(reals if reals is not None else [])
    pairs = [tuple(p) if not isinstance(p, complex) else (p.real, p.imag)
             for p in (pairs if pairs is not None else [])]
    want_pairs = desc.d if desc.regular else 0
    if len(reals) != desc.real_count:
        raise ValueError(f"need {desc.real_count} real eigenvalues, got {len(reals)}")
    if len(pairs) != want_pairs:
        raise ValueError(f"need {want_pairs} conjugate pairs, got {len(pairs)}")
    if len(set(reals)) != len(reals) or len(set(pairs)) != len(pairs):
        raise EigenvalueCollision("eigenvalues must be distinct")
    if any(im <= 0 for _, im in pairs):
        raise ValueError("conjugate-pair eigenvalues need positive imaginary part")
    blocks: list = [ConjPair(1, re, im) for re, im in pairs]
    if not desc.regular:
        blocks += [Singular(desc.alpha + 1)] * desc.s
        blocks += [Singular(desc.alpha)] * (desc.n - desc.r - desc.s)
    blocks += [RealJordan(1, a, 1) for a in reals[:desc.c]]
    blocks += [RealJordan(1, a, -1) for a in reals[desc.c:]]
    h = HKCF(tuple(blocks))
    assert h.n == desc.n
    return h


def codim_closed_form(desc: BundleDescriptor) -> dict:
    n, r, d = desc.n, desc.r, desc.d
    if desc.regular:
        return {"orbit": n, "bundle": 0}
    bundle = 2 * (n - d) * (n - r)
    return {"orbit": r - 2 * d + bundle, "bundle": bundle}


def leading_inertia(desc: BundleDescriptor) -> Inertia:
    """Signature of the lambda-coefficient of any pencil in the bundle."""
    n, r, c, d = desc.n, desc.r, desc.c, desc.d
    if desc.regular:
        return Inertia(c + d, n - c - d, 0)
    # each M_e contributes (e, e, 1)
    return Inertia(c + d, r - d - c, n - r)


@dataclass(frozen=True)
class WeyrSequence:
    counts: tuple[int, ...]
    """w_1, w_2, ... with w_i = #{indices >= i}"""
    total: int
    """w_0, the number of indices"""

    def partial_sums(self) -> list[int]:
        out, acc = [], 0
        for w in self.counts:
            acc += w
            out.append(acc)
        return out


def weyr_of(indices) -> WeyrSequence:
    """Weyr counts of a multiset of minimal indices.

    The sequence is padded to length sum(indices), the largest index any
    multiset with the same total can hold, so that sequences of equal total
    compare entrywise.
    """
    indices = [int(i) for i in indices]
    if any(i < 0 for i in indices):
        raise ValueError("minimal indices are non-negative")
    length = sum(indices)
    counts = tuple(sum(1 for x in indices if x >= i) for i in range(1, length + 1))
    return WeyrSequence(counts, len(indices))


def weyr_dominates(w_from: WeyrSequence, w_to: WeyrSequence) -> bool:
    """True if every partial sum of w_from is >= that of w_to, with equal totals."""
    a, b = list(w_from.counts), list(w_to.counts)
    if sum(a) != sum(b):
        return False
    width = max(len(a), len(b))
    a += [0] * (width - len(a))
    b += [0] * (width - len(b))
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa < sb:
            return False
    return True


def partitions(total: int, parts: int) -> list[tuple[int, ...]]:
    """Non-increasing tuples of `parts` non-negative integers summing to total."""
    def rec(remaining, k, cap):
        if k == 0:
            if remaining == 0:
                yield ()
            return
        for first in range(min(remaining, cap), -1, -1):
            if first * k < remaining:
                break
            for rest in rec(remaining - first, k - 1, first):
                yield (first,) + rest
    return list(rec(total, parts, total))


def size_accounting(desc: BundleDescriptor) -> int:
    """n recomputed from block sizes of K_{c,d}."""
    a, s = desc.alpha, desc.s
    return (desc.r - 2 * desc.d) + s * (2 * a + 3) + (desc.n - desc.r - s) * (2 * a + 1)
