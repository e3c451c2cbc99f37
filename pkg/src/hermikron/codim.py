"""Orbit and bundle codimensions by brute force.

The codimension of the congruence orbit of A + lambda*B equals the real
dimension of {X : X*A + AX = 0, X*B + BX = 0}.  The map X -> (X*A + AX,
X*B + BX) is linear over the reals in (Re X, Im X), so it is written out as a
real matrix ("realified") and its nullity computed either exactly, by
fraction-free elimination on integer rows, or from singular values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Union

import numpy as np

from .bundles import BundleDescriptor, codim_closed_form, realize
from .canonical import (HKCF, CanonicalBlock, ConjPair, InfJordan, RealJordan, Singular,
                        block_entries, hkcf_entries)
from .errors import AmbiguousRank, TooLarge
from .pencil import MatrixPencil, rank_decision

GAP_MIN = 1e6
FULL_SYSTEM_MAX_N = 12
BACKENDS = ("exact", "floating")

Sparse = dict  # (i, j) -> (re, im)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))  # exact binary value


@dataclass(frozen=True)
class ExactPencil:
    """Square pencil with rational (re, im) entries, stored sparsely."""
    n: int
    A: dict = field(hash=False)
    B: dict = field(hash=False)

    @classmethod
    def from_entries(cls, entries, n: int) -> "ExactPencil":
        mats: dict = {"A": {}, "B": {}}
        for i, j, which, re, im in entries:
            old = mats[which].get((i, j), (Fraction(0), Fraction(0)))
            mats[which][(i, j)] = (old[0] + _as_fraction(re), old[1] + _as_fraction(im))
        return cls(n, _prune(mats["A"]), _prune(mats["B"]))

    @classmethod
    def from_hkcf(cls, h: HKCF) -> "ExactPencil":
        return cls.from_entries(hkcf_entries(h), h.n)

    @classmethod
    def from_block(cls, b: CanonicalBlock) -> "ExactPencil":
        return cls.from_entries(block_entries(b), b.size)

    @classmethod
    def from_pencil(cls, p: MatrixPencil) -> "ExactPencil":
        """Exact rational image of a floating pencil (every double is rational)."""
        n = p.shape[0]
        entries = []
        for which, M in (("A", p.A), ("B", p.B)):
            for i, j in zip(*np.nonzero(M)):
                entries.append((i, j, which, M[i, j].real, M[i, j].imag))
        return cls.from_entries(entries, n)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        out = []
        for M in (self.A, self.B):
            D = np.zeros((self.n, self.n), dtype=complex)
            for (i, j), (re, im) in M.items():
                D[i, j] = complex(float(re), float(im))
            out.append(D)
        return out[0], out[1]

    def congruence(self, Q_re, Q_im) -> "ExactPencil":
        """Exact Q* H Q for a rational matrix Q = Q_re + i Q_im."""
        n = self.n
        Q = [[(_as_fraction(Q_re[i][j]), _as_fraction(Q_im[i][j])) for j in range(n)]
             for i in range(n)]
        out = {}
        for which, M in (("A", self.A), ("B", self.B)):
            # T = M Q, then Q* T
            T = {}
            for (i, k), m in M.items():
                for j in range(n):
                    q = Q[k][j]
                    if q[0] or q[1]:
                        acc = T.get((i, j), (0, 0))
                        T[(i, j)] = (acc[0] + m[0] * q[0] - m[1] * q[1],
                                     acc[1] + m[0] * q[1] + m[1] * q[0])
            R = {}
            for (k, j), t in T.items():
                for i in range(n):
                    q = Q[k][i]  # (Q*)_{ik} = conj(Q_{ki})
                    if q[0] or q[1]:
                        acc = R.get((i, j), (0, 0))
                        R[(i, j)] = (acc[0] + q[0] * t[0] + q[1] * t[1],
                                     acc[1] + q[0] * t[1] - q[1] * t[0])
            out[which] = _prune({k: (Fraction(v[0]), Fraction(v[1])) for k, v in R.items()})
        return ExactPencil(n, out["A"], out["B"])


def _prune(M: dict) -> dict:
    return {k: v for k, v in M.items() if v[0] != 0 or v[1] != 0}


def _float_sparse(M: np.ndarray) -> Sparse:
    return {(int(i), int(j)): (float(M[i, j].real), float(M[i, j].imag))
            for i, j in zip(*np.nonzero(M))}


def _identity(n: int, one) -> Sparse:
    zero = one - one
    return {(i, i): (one, zero) for i in range(n)}


@dataclass
class CongruenceSystem:
    """Real linear system in the unknowns (Re X, Im X), stored by sparse rows."""
    nrows: int
    ncols: int
    rows: list = field(repr=False)
    exact: bool = False

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def dense(self) -> np.ndarray:
        M = np.zeros(self.shape)
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                M[r, c] = float(v)
        return M

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.dense() @ x


def _add_terms(rows, row_offset, out_shape, terms):
    """Accumulate sum_t L_t op(U_t) R_t into the real/imag rows of one equation."""
    P, Qd = out_shape
    for L, R, base, ushape, conj in terms:
        a, b = ushape  # shape of op(U)
        for (p, k), (lr, li) in L.items():
            for (l, q), (rr, ri) in R.items():
                cr = lr * rr - li * ri
                ci = lr * ri + li * rr
                row_re = rows[row_offset + p * Qd + q]
                row_im = rows[row_offset + P * Qd + p * Qd + q]
                if not conj:
                    ur, ui = base + k * b + l, base + a * b + k * b + l
                    _acc(row_re, ur, cr); _acc(row_re, ui, -ci)
                    _acc(row_im, ur, ci); _acc(row_im, ui, cr)
                else:
                    # op(U)_{kl} = conj(U_{lk}), U of shape (b, a)
                    ur, ui = base + l * a + k, base + a * b + l * a + k
                    _acc(row_re, ur, cr); _acc(row_re, ui, ci)
                    _acc(row_im, ur, ci); _acc(row_im, ui, -cr)


def _acc(row: dict, col: int, value):
    if value:
        v = row.get(col, 0) + value
        if v:
            row[col] = v
        else:
            row.pop(col, None)


PencilLike = Union[MatrixPencil, HKCF, ExactPencil, CanonicalBlock]


def _coefficients(p: PencilLike, exact: bool) -> tuple[int, Sparse, Sparse]:
    if isinstance(p, (RealJordan, InfJordan, ConjPair, Singular)):
        p = ExactPencil.from_block(p)
    elif isinstance(p, HKCF):
        p = ExactPencil.from_hkcf(p)
    if isinstance(p, ExactPencil):
        if exact:
            return p.n, p.A, p.B
        A, B = p.dense()
        return p.n, _float_sparse(A), _float_sparse(B)
    if exact:
        e = ExactPencil.from_pencil(p)
        return e.n, e.A, e.B
    return p.shape[0], _float_sparse(np.asarray(p.A)), _float_sparse(np.asarray(p.B))


def realify(p: PencilLike, exact: bool = False) -> CongruenceSystem:
    """Realified matrix of X -> (X*A + AX, X*B + BX), shape (4n^2, 2n^2)."""
    n, A, B = _coefficients(p, exact)
    one = Fraction(1) if exact else 1.0
    eye = _identity(n, one)
    nn = n * n
    rows = [dict() for _ in range(4 * nn)]
    for e, M in enumerate((A, B)):
        _add_terms(rows, 2 * nn * e, (n, n),
                   [(eye, M, 0, (n, n), True), (M, eye, 0, (n, n), False)])
    return CongruenceSystem(4 * nn, 2 * nn, rows, exact)


def realify_pair(p1: PencilLike, p2: PencilLike, exact: bool = False) -> CongruenceSystem:
    """Realified matrix of (Y, Z) -> (Z A_j + A_i Y, Z B_j + B_i Y)."""
    ni, Ai, Bi = _coefficients(p1, exact)
    nj, Aj, Bj = _coefficients(p2, exact)
    one = Fraction(1) if exact else 1.0
    Ii, Ij = _identity(ni, one), _identity(nj, one)
    m = ni * nj
    rows = [dict() for _ in range(4 * m)]
    # Y occupies columns [0, 2m), Z occupies [2m, 4m)
    for e, (Mi, Mj) in enumerate(((Ai, Aj), (Bi, Bj))):
        _add_terms(rows, 2 * m * e, (ni, nj),
                   [(Ii, Mj, 2 * m, (ni, nj), False), (Mi, Ij, 0, (ni, nj), False)])
    return CongruenceSystem(4 * m, 4 * m, rows, exact)


def exact_rank(rows, ncols: int | None = None) -> int:
    """Rank over Q of sparse rational rows, by fraction-free elimination.

    Each row is scaled to coprime integers; a new row is reduced against the
    pivot rows (keyed by leading column) by integer cross-multiplication, and
    the content is divided out after every step to keep entries small.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        cur = _integer_row(row)
        while cur:
            lead = min(cur)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = cur
                break
            a, b = piv[lead], cur[lead]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            new = {c: a * v for c, v in cur.items()}
            for c, v in piv.items():
                w = new.get(c, 0) - b * v
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            cur = _primitive(new)
    return len(pivots)


def _integer_row(row: dict) -> dict:
    items = {c: Fraction(v) for c, v in row.items() if v}
    if not items:
        return {}
    lcm = 1
    for v in items.values():
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return _primitive({c: int(v * lcm) for c, v in items.items()})


def _primitive(row: dict) -> dict:
    if not row:
        return row
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    return {c: v // g for c, v in row.items()}


@dataclass(frozen=True)
class Nullity:
    dim: int
    backend: str
    gap_ratio: float | None = None


def solution_space_dim(sys: CongruenceSystem, backend: str = "exact",
                       gap_min: float = GAP_MIN) -> Nullity:
    """Real nullity of a realified system."""
    if backend == "exact":
        if not sys.exact:
            raise ValueError("exact backend needs a system built with exact=True")
        return Nullity(sys.ncols - exact_rank(sys.rows, sys.ncols), "exact")
    if backend in ("floating", "float"):
        M = sys.dense()
        if not np.any(M):
            return Nullity(sys.ncols, "floating", float("inf"))
        dec = rank_decision(M)
        if dec.gap < gap_min:
            raise AmbiguousRank(f"singular-value gap {dec.gap:.3g} below {gap_min:.0e}; "
                                "rerun with the exact backend")
        return Nullity(sys.ncols - dec.rank, "floating", dec.gap)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def block_system_dim(b: PencilLike, backend: str = "exact") -> int:
    """dim syst(b)."""
    return _block_dim(b, backend) if _hashable(b) else \
        solution_space_dim(realify(b, backend == "exact"), backend).dim


def pair_system_dim(b1: PencilLike, b2: PencilLike, backend: str = "exact") -> int:
    """dim syst(b1, b2) over the reals."""
    if _hashable(b1) and _hashable(b2):
        return _pair_dim(b1, b2, backend)
    return solution_space_dim(realify_pair(b1, b2, backend == "exact"), backend).dim


def _hashable(b) -> bool:
    return not isinstance(b, (MatrixPencil, ExactPencil, HKCF))


@lru_cache(maxsize=4096)
def _block_dim(b, backend):
    return solution_space_dim(realify(b, backend == "exact"), backend).dim


@lru_cache(maxsize=4096)
def _pair_dim(b1, b2, backend):
    return solution_space_dim(realify_pair(b1, b2, backend == "exact"), backend).dim


@dataclass(frozen=True)
class CodimResult:
    orbit_codim: int
    bundle_codim: int
    backend: str
    gap_ratio: float | None = None
    mode: str = "full"

    def as_dict(self) -> dict:
        gap = self.gap_ratio
        if gap is not None and not math.isfinite(gap):
            gap = None
        return {"orbit": self.orbit_codim, "bundle": self.bundle_codim,
                "backend": self.backend, "gapRatio": gap, "mode": self.mode}


def assembled_dim(h: HKCF, backend: str = "exact") -> int:
    """Sum of block dims plus pair dims over unordered block pairs."""
    total = sum(block_system_dim(b, backend) for b in h.blocks)
    total += sum(pair_system_dim(b1, b2, backend) for b1, b2 in combinations(h.blocks, 2))
    return total


def orbit_codim_bruteforce(h: HKCF | ExactPencil | MatrixPencil, backend: str = "exact",
                           assemble: bool = False,
                           eigenvalue_count: int | None = None) -> CodimResult:
    """Orbit and bundle codimension from the nullity of the congruence system.

    Full mode solves the system of the whole realized pencil; ``assemble``
    sums per-block and pairwise dimensions instead (HKCF input only).
    Bundle codimension subtracts the number of distinct finite eigenvalues,
    taken from the HKCF or from ``eigenvalue_count`` for raw pencils.
    """
    if eigenvalue_count is None:
        if not isinstance(h, HKCF):
            raise ValueError("eigenvalue_count is required for non-canonical input")
        eigenvalue_count = h.distinct_finite_eigenvalue_count()
    if assemble:
        if not isinstance(h, HKCF):
            raise ValueError("table assembly needs an HKCF")
        orbit = assembled_dim(h, backend)
        return CodimResult(orbit, orbit - eigenvalue_count, _canon(backend), None, "assembled")
    n = h.n if isinstance(h, (HKCF, ExactPencil)) else h.shape[0]
    if n > FULL_SYSTEM_MAX_N:
        raise TooLarge(f"full-system brute force limited to n <= {FULL_SYSTEM_MAX_N}; "
                       "use table assembly")
    null = solution_space_dim(realify(h, backend == "exact"), backend)
    return CodimResult(null.dim, null.dim - eigenvalue_count, null.backend, null.gap_ratio)


def _canon(backend: str) -> str:
    return "floating" if backend == "float" else backend


def descriptor_codim(desc: BundleDescriptor, backend: str = "exact",
                     assemble: bool = False) -> CodimResult:
    return orbit_codim_bruteforce(realize(desc), backend, assemble)


# --- tables ---------------------------------------------------------------

def m_pair_formula(i: int, j: int) -> int:
    eps = 2 if i == j else 1
    return 2 * (2 * max(i, j) + eps)


def verify_block_tables(kmax: int = 4, backend: str = "exact") -> list[dict]:
    """Per-block and pairwise system dimensions against their known values."""
    checks = []

    def check(name, got, want):
        checks.append({"check": name, "got": got, "want": want, "ok": got == want})

    half = Fraction(3, 2)
    for sign in (1, -1):
        for a in (0, half):
            check(f"syst({'+' if sign > 0 else '-'}J_1({a}))",
                  block_system_dim(RealJordan(1, a, sign), backend), 1)
    check("syst(J_1^H(i,-i))", block_system_dim(ConjPair(1, 0, 1), backend), 2)
    for k in range(kmax + 1):
        check(f"syst(M_{k})", block_system_dim(Singular(k), backend), 2 * k + 2)
    for s1 in (1, -1):
        for s2 in (1, -1):
            check(f"syst({s1:+d}J_1(1),{s2:+d}J_1(2))",
                  pair_system_dim(RealJordan(1, 1, s1), RealJordan(1, 2, s2), backend), 0)
    check("syst(J_1^H(i),J_1^H(1+2i))",
          pair_system_dim(ConjPair(1, 0, 1), ConjPair(1, 1, 2), backend), 0)
    check("syst(J_1^H(i),J_1^H(2i))",
          pair_system_dim(ConjPair(1, 0, 1), ConjPair(1, 0, 2), backend), 0)
    for sign in (1, -1):
        check(f"syst(J_1^H(i),{sign:+d}J_1(3))",
              pair_system_dim(ConjPair(1, 0, 1), RealJordan(1, 3, sign), backend), 0)
    for k in range(min(kmax, 3) + 1):
        for sign in (1, -1):
            check(f"syst({sign:+d}J_1(5),M_{k})",
                  pair_system_dim(RealJordan(1, 5, sign), Singular(k), backend), 2)
    for i in range(min(kmax, 3) + 1):
        for j in range(i, min(kmax, 3) + 1):
            check(f"syst(M_{i},M_{j})",
                  pair_system_dim(Singular(i), Singular(j), backend), m_pair_formula(i, j))
    return checks


def table_entries(desc: BundleDescriptor, backend: str = "exact") -> dict:
    """Aggregated per-kind dimension sums for K_{c,d}, brute force and formula."""
    if desc.regular:
        raise ValueError("aggregated tables cover the bounded-rank forms")
    n, r, d = desc.n, desc.r, desc.d
    a, s = desc.alpha, desc.s
    h = realize(desc)

    def kind(b):
        if isinstance(b, RealJordan):
            return "J"
        return "Ma" if b.d == a else "Ma1"

    got: dict = {}
    for b in h.blocks:
        key = ("syst", kind(b))
        got[key] = got.get(key, 0) + block_system_dim(b, backend)
    order = {"J": 0, "Ma": 1, "Ma1": 2}
    for b1, b2 in combinations(h.blocks, 2):
        k1, k2 = sorted((kind(b1), kind(b2)), key=order.get)
        key = ("pair", k1, k2)
        got[key] = got.get(key, 0) + pair_system_dim(b1, b2, backend)
    t = n - r - s
    want = {
        ("syst", "J"): r - 2 * d,
        ("syst", "Ma"): (2 * a + 2) * t,
        ("syst", "Ma1"): (2 * a + 4) * s,
        ("pair", "J", "J"): 0,
        ("pair", "J", "Ma"): 2 * (r - 2 * d) * t,
        ("pair", "J", "Ma1"): 2 * (r - 2 * d) * s,
        ("pair", "Ma", "Ma"): 2 * (2 * a + 2) * math.comb(t, 2),
        ("pair", "Ma", "Ma1"): 2 * (2 * a + 3) * t * s,
        ("pair", "Ma1", "Ma1"): 2 * (2 * a + 4) * math.comb(s, 2),
    }
    out = {}
    for key, w in want.items():
        g = got.get(key, 0)
        out[" ".join(key)] = {"got": g, "want": w, "ok": g == w}
    total = sum(v["got"] for v in out.values())
    closed = codim_closed_form(desc)["orbit"]
    out["total"] = {"got": total, "want": closed, "ok": total == closed}
    return out
