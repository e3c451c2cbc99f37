"""Explicit small perturbations that move a canonical block into a more generic bundle.

Each constructor returns the perturbed Hermitian pencil together with a
prediction of its structure (eigenvalues, signs, inertia, determinant) that
can be checked numerically.  The perturbation size is controlled by eps/m
(or 1/m for the regularization of a singular block), so every family tends
to its unperturbed block as m grows.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .canonical import (HKCF, ConjPair, InfJordan, RealJordan, Singular, build_block,
                        build_hkcf)
from .errors import InvalidParams
from .pencil import HermitianPencil, Inertia, MatrixPencil

FAMILIES = ("finiteJordan", "infiniteJordan", "conjPairSplit", "singularAbsorb", "regularizeM")
EPS_GRID = (1.0, 1e-2)
M_GRID = (1, 10, 100)


@dataclass(frozen=True)
class PerturbationSpec:
    family: str
    k: int = 1
    a: float = 0.0
    mu: complex = 1j
    sign: int = 1
    d: int = 0
    eps: float = 1.0
    m: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParams(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not self.eps > 0 and self.family != "regularizeM":
            raise InvalidParams(f"eps must be positive, got {self.eps}")
        if int(self.m) != self.m or self.m < 1:
            raise InvalidParams(f"m must be a positive integer, got {self.m}")
        if self.sign not in (1, -1):
            raise InvalidParams(f"sign must be +1 or -1, got {self.sign}")
        if self.family in ("conjPairSplit", "singularAbsorb") and not complex(self.mu).imag > 0:
            raise InvalidParams(f"{self.family} needs im(mu) > 0, got {self.mu}")

    def build(self) -> tuple[HermitianPencil, "PredictedStructure"]:
        f = self.family
        if f == "finiteJordan":
            return s_perturbation_finite(self.a, self.k, self.sign, self.eps, self.m)
        if f == "infiniteJordan":
            return s_perturbation_infinite(self.k, self.sign, self.eps, self.m)
        if f == "conjPairSplit":
            return conj_pair_split(self.mu, self.k, self.eps, self.m)
        if f == "regularizeM":
            return regularize_M(self.d, self.m)
        return singular_absorb(self.mu, self.k, self.d, self.eps)


@dataclass(frozen=True)
class PredictedStructure:
    """Expected outcome of a perturbation.

    ``hkcf`` is a representative canonical form; for the even-k finite
    family the sign assignment among the two real eigenvalues is not
    predicted, only the multiset ``real_signs``.
    """
    family: str
    n: int
    hkcf: HKCF
    eigenvalues: np.ndarray = field(repr=False)
    real_signs: tuple = ()
    leading_inertia: Inertia | None = None
    constant_inertia: Inertia | None = None
    det_coeffs: np.ndarray | None = field(default=None, repr=False)
    abs_det: float | None = None
    lambda_rank: int | None = None
    unperturbed: HermitianPencil | None = field(default=None, repr=False)
    distance: float | None = None
    """max-entry distance (Frobenius for singularAbsorb) to ``unperturbed``"""

    def as_dict(self) -> dict:
        from .canonical import hkcf_to_json
        out = {"family": self.family, "n": self.n, "hkcf": hkcf_to_json(self.hkcf),
               "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
               "realSigns": list(self.real_signs)}
        for key, val in (("leadingInertia", self.leading_inertia),
                         ("constantInertia", self.constant_inertia)):
            out[key] = list(val) if val is not None else None
        if self.det_coeffs is not None:
            out["detCoeffs"] = [[float(z.real), float(z.imag)] for z in self.det_coeffs]
        out["absDet"] = self.abs_det
        out["lambdaRank"] = self.lambda_rank
        out["distance"] = self.distance
        return out


def _check_jordan(k, sign, eps, m):
    if int(k) != k or k < 2:
        raise InvalidParams(f"k must be an integer >= 2, got {k}")
    if sign not in (1, -1):
        raise InvalidParams(f"sign must be +1 or -1, got {sign}")
    if not eps > 0:
        raise InvalidParams(f"eps must be positive, got {eps}")
    if int(m) != m or m < 1:
        raise InvalidParams(f"m must be a positive integer, got {m}")


def _split_roots(roots) -> tuple[list, list]:
    """Real roots (imag zeroed) and upper-half-plane representatives."""
    reals, uppers = [], []
    for z in roots:
        if abs(z.imag) <= 1e-12 * (1 + abs(z)):
            reals.append(float(z.real))
        elif z.imag > 0:
            uppers.append(z)
    return reals, uppers


def _anti_inertia(size: int, sign: int) -> Inertia:
    """Inertia of sign * (anti-identity of the given size)."""
    pos, neg = (size + 1) // 2, size // 2
    return Inertia(pos, neg, 0) if sign > 0 else Inertia(neg, pos, 0)


def _add_inertia(a: Inertia, b: Inertia) -> Inertia:
    return Inertia(a.pos + b.pos, a.neg + b.neg, a.zero + b.zero)


def s_perturbation_finite(a: float, k: int, sign: int, eps: float, m: int):
    """sign * (J_k^H(a) + (eps/m) e_k e_k^T), the correction sitting in the constant term.

    The determinant is (-1)^{k/2}((lambda-a)^k - eps/m) for even k and
    sign^k (-1)^{(k-1)/2}((lambda-a)^k + eps/m) for odd k, so the k-fold
    eigenvalue a splits into a + k-th roots of +-eps/m.
    """
    _check_jordan(k, sign, eps, m)
    a = float(a)
    delta = eps / m
    base = build_block(RealJordan(k, a, sign))
    A = np.array(base.A)
    A[k - 1, k - 1] += sign * delta
    pencil = HermitianPencil(A, base.B)

    shifted = P.polypow([-a, 1.0], k)
    if k % 2 == 0:
        det = (-1) ** (k // 2) * P.polysub(shifted, [delta])
        roots = a + delta ** (1 / k) * np.exp(2j * np.pi * np.arange(k) / k)
        real_signs = (-1, 1)
    else:
        det = sign ** k * (-1) ** ((k - 1) // 2) * P.polyadd(shifted, [delta])
        roots = a + delta ** (1 / k) * np.exp(1j * np.pi * (2 * np.arange(k) + 1) / k)
        real_signs = (sign,)
    reals, uppers = _split_roots(roots)
    reals.sort()
    blocks = [ConjPair(1, float(z.real), float(z.imag)) for z in uppers]
    if k % 2 == 0:
        blocks += [RealJordan(1, reals[0], 1), RealJordan(1, reals[1], -1)]
    else:
        blocks += [RealJordan(1, reals[0], sign)]
    pred = PredictedStructure(
        "finiteJordan", k, HKCF(tuple(blocks)), np.sort_complex(roots), real_signs,
        leading_inertia=_anti_inertia(k, sign), det_coeffs=np.asarray(det, dtype=complex),
        lambda_rank=k, unperturbed=base, distance=delta)
    return pencil, pred


def s_perturbation_infinite(k: int, sign: int, eps: float, m: int):
    """sign * (J_k^H(inf) + (eps/m) lambda e_k e_k^T).

    The determinant is (-1)^{k/2}(1 - (eps/m) lambda^k) for even k and
    sign (-1)^{(k-1)/2}(1 + (eps/m) lambda^k) for odd k: the infinite
    eigenvalue becomes the k-th roots of +-m/eps.
    """
    _check_jordan(k, sign, eps, m)
    delta = eps / m
    base = build_block(InfJordan(k, sign))
    B = np.array(base.B)
    B[k - 1, k - 1] += sign * delta
    pencil = HermitianPencil(base.A, B)

    lead = np.zeros(k + 1)
    lead[0] = 1.0
    radius = (1 / delta) ** (1 / k)
    if k % 2 == 0:
        lead[k] = -delta
        det = (-1) ** (k // 2) * lead
        roots = radius * np.exp(2j * np.pi * np.arange(k) / k)
        real_signs = (sign, sign)
    else:
        lead[k] = delta
        det = sign * (-1) ** ((k - 1) // 2) * lead
        roots = radius * np.exp(1j * np.pi * (2 * np.arange(k) + 1) / k)
        real_signs = (sign,)
    reals, uppers = _split_roots(roots)
    blocks = [ConjPair(1, float(z.real), float(z.imag)) for z in uppers]
    blocks += [RealJordan(1, x, sign) for x in sorted(reals)]
    # the lambda-coefficient is sign*(anti-identity of size k-1) plus sign*delta
    leading = _add_inertia(_anti_inertia(k - 1, sign),
                           Inertia(1, 0, 0) if sign > 0 else Inertia(0, 1, 0))
    pred = PredictedStructure(
        "infiniteJordan", k, HKCF(tuple(blocks)), np.sort_complex(roots), real_signs,
        leading_inertia=leading, constant_inertia=_anti_inertia(k, sign),
        det_coeffs=np.asarray(det, dtype=complex), lambda_rank=k,
        unperturbed=base, distance=delta)
    return pencil, pred


def conj_pair_split(mu: complex, k: int, eps: float, m: int):
    """J_k^H(mu, conj mu) plus a real ramp j*eps/m on the anti-diagonal of the constant term.

    Both anti-triangular blocks keep their shape, with anti-diagonal entries
    lambda - mu + j*eps/m, so the eigenvalues become mu - j*eps/m and their
    conjugates, j = 1..k, all simple.
    """
    mu = complex(mu)
    if not mu.imag > 0:
        raise InvalidParams(f"im(mu) must be positive, got {mu}")
    if int(k) != k or k < 1:
        raise InvalidParams(f"k must be an integer >= 1, got {k}")
    if not eps > 0 or int(m) != m or m < 1:
        raise InvalidParams(f"need eps > 0 and integer m >= 1, got eps={eps}, m={m}")
    base = build_block(ConjPair(k, mu.real, mu.imag))
    A = np.array(base.A)
    for i in range(1, k + 1):
        j = 2 * k + 1 - i
        A[i - 1, j - 1] += i * eps / m
        A[j - 1, i - 1] += i * eps / m
    pencil = HermitianPencil(A, base.B)
    shifted = [mu - j * eps / m for j in range(1, k + 1)]
    eigs = np.sort_complex(np.array(shifted + [z.conjugate() for z in shifted]))
    blocks = tuple(ConjPair(1, z.real, z.imag) for z in shifted)
    pred = PredictedStructure(
        "conjPairSplit", 2 * k, HKCF(blocks), eigs, (),
        leading_inertia=Inertia(k, k, 0), lambda_rank=2 * k,
        unperturbed=base, distance=k * eps / m)
    return pencil, pred


def regularize_M(d: int, m: int):
    """M_d + (1/m) E_11 in the constant term: a regular pencil with only infinite eigenvalues.

    The result is congruent to +J_{2d+1}^H(inf), with determinant +-1/m and
    constant-coefficient inertia (d+1, d, 0).
    """
    if int(d) != d or d < 0 or int(m) != m or m < 1:
        raise InvalidParams(f"need integers d >= 0 and m >= 1, got d={d}, m={m}")
    base = build_block(Singular(d))
    A = np.array(base.A)
    A[0, 0] += 1 / m
    pencil = HermitianPencil(A, base.B)
    n = 2 * d + 1
    pred = PredictedStructure(
        "regularizeM", n, HKCF((InfJordan(n, 1),)), np.array([], dtype=complex), (),
        leading_inertia=Inertia(d, d, 1), constant_inertia=Inertia(d + 1, d, 0),
        abs_det=1 / m, lambda_rank=2 * d, unperturbed=base, distance=1 / m)
    return pencil, pred


def _bordered(mu: complex, k: int, d: int, eps: float) -> HermitianPencil:
    """[[0, (J_k(conj mu) + L_d^T) + E*], [(J_k(mu) + L_d) + E, 0]] with E = eps at (k, k+1)."""
    top = k + d + 1
    n = 2 * (k + d) + 1
    jb = build_block(ConjPair(k, mu.real, mu.imag))
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    low_A = np.zeros((k + d, k + d + 1), dtype=complex)
    low_B = np.zeros((k + d, k + d + 1), dtype=complex)
    low_A[:k, :k] = jb.A[k:, :k]
    low_B[:k, :k] = jb.B[k:, :k]
    if d:
        from .canonical import build_F, build_G
        low_A[k:, k:] = build_F(d)
        low_B[k:, k:] = build_G(d)
    low_A[k - 1, k] += eps
    A[top:, :top], B[top:, :top] = low_A, low_B
    A[:top, top:], B[:top, top:] = low_A.conj().T, low_B.conj().T
    return HermitianPencil(A, B)


def absorb_permutation(k: int, d: int) -> np.ndarray:
    """Index order p with bordered(eps=0)[p][:, p] = J_k^H(mu, conj mu) + M_d."""
    top = k + d + 1
    return np.array(list(range(k)) + list(range(top, top + k))
                    + list(range(k, top)) + list(range(top + k, 2 * (k + d) + 1)))


def singular_absorb(mu: complex, k: int, d: int, eps: float):
    """Couple J_k^H(mu, conj mu) to M_d so that both merge into M_{d+k}.

    The coupling is a single entry eps placed at (k, k+1) of the constant
    term of J_k(mu) + L_d; for mu != 0 this restores full row rank at
    lambda = mu, so no eigenvalue survives.  The reference pencil (eps = 0)
    is a fixed permutation congruence of J_k^H(mu, conj mu) + M_d, at
    Frobenius distance eps*sqrt(2).
    """
    mu = complex(mu)
    if not mu.imag > 0:
        raise InvalidParams(f"im(mu) must be positive, got {mu}")
    if int(k) != k or k < 1 or int(d) != d or d < 0:
        raise InvalidParams(f"need integers k >= 1 and d >= 0, got k={k}, d={d}")
    if not eps >= 0:
        raise InvalidParams(f"eps must be non-negative, got {eps}")
    pencil = _bordered(mu, k, d, eps)
    reference = _bordered(mu, k, d, 0.0)
    e = d + k
    pred = PredictedStructure(
        "singularAbsorb", 2 * e + 1, HKCF((Singular(e),)), np.array([], dtype=complex), (),
        leading_inertia=Inertia(e, e, 1), lambda_rank=2 * e,
        unperturbed=reference, distance=float(eps * np.sqrt(2)))
    return pencil, pred


def unperturbed_canonical(spec: PerturbationSpec) -> HermitianPencil:
    """The canonical pencil each family starts from (block order of the direct sum)."""
    f = spec.family
    if f == "finiteJordan":
        return build_block(RealJordan(spec.k, spec.a, spec.sign))
    if f == "infiniteJordan":
        return build_block(InfJordan(spec.k, spec.sign))
    mu = complex(spec.mu)
    if f == "conjPairSplit":
        return build_block(ConjPair(spec.k, mu.real, mu.imag))
    if f == "regularizeM":
        return build_block(Singular(spec.d))
    return build_hkcf(HKCF((ConjPair(spec.k, mu.real, mu.imag), Singular(spec.d))))


def entry_distance(p: MatrixPencil, q: MatrixPencil, frobenius: bool = False) -> float:
    dA, dB = np.asarray(p.A) - q.A, np.asarray(p.B) - q.B
    if frobenius:
        return float(np.sqrt(np.linalg.norm(dA) ** 2 + np.linalg.norm(dB) ** 2))
    return float(max(np.max(np.abs(dA)), np.max(np.abs(dB))))


DET_RTOL = 1e-12
EIG_RTOL = 1e-9


def _matched_error(computed, predicted) -> float:
    from scipy.optimize import linear_sum_assignment
    computed = np.asarray(computed, dtype=complex)
    predicted = np.asarray(predicted, dtype=complex)
    if computed.size != predicted.size:
        return float("inf")
    if computed.size == 0:
        return 0.0
    C = np.abs(computed[:, None] - predicted[None, :]) / (1 + np.abs(predicted[None, :]))
    rows, cols = linear_sum_assignment(C)
    return float(C[rows, cols].max())


def verify_perturbation(pencil: HermitianPencil, pred: PredictedStructure, seed=0) -> list[dict]:
    """Numerical checks of a prediction; each entry has 'check', 'ok' and details."""
    from .infer import (eigs_regular, full_report, infinite_multiplicity,
                        sign_characteristic_simple)
    from .pencil import determinant, inertia_of, numerical_rank

    checks = []

    def add(name, ok, **info):
        checks.append({"check": name, "ok": bool(ok), **info})

    if pred.det_coeffs is not None:
        det = determinant(pencil)
        err = float(np.max(np.abs(det - pred.det_coeffs)) / np.max(np.abs(pred.det_coeffs)))
        add("determinant", err <= DET_RTOL, relError=err)
    if pred.abs_det is not None:
        det = determinant(pencil)
        err = max(abs(abs(det[0]) - pred.abs_det), float(np.max(np.abs(det[1:]), initial=0.0)))
        add("determinant", err <= DET_RTOL * pred.abs_det, absError=err)
    if pred.family == "singularAbsorb":
        rep = full_report(pencil, seed)
        e = pred.hkcf.blocks[0].d
        ok = (rep.normal_rank == 2 * e and rep.right_minimal_indices == [e]
              and rep.left_minimal_indices == [e] and not rep.real_eigs
              and not rep.pair_eigs and not rep.has_infinite)
        add("structure", ok, normalRank=rep.normal_rank,
            minimalIndices=rep.right_minimal_indices,
            eigenvalues=len(rep.real_eigs) + 2 * len(rep.pair_eigs))
    else:
        n_inf = infinite_multiplicity(pencil)
        eigs = eigs_regular(pencil, seed, n_inf)
        finite = [z for z in eigs if np.isfinite(z)]
        if pred.family == "regularizeM":
            add("all eigenvalues infinite", n_inf == pred.n, infinite=n_inf)
        else:
            err = _matched_error(finite, pred.eigenvalues)
            add("eigenvalues", n_inf == 0 and err <= EIG_RTOL, maxRelError=err)
        if pred.real_signs:
            reals = [z.real for z in finite if abs(z.imag) <= 1e-8 * (1 + abs(z.real))]
            try:
                signs = sorted(sign_characteristic_simple(pencil, a)[0] for a in reals)
            except Exception as exc:  # sign unresolved counts as a failed check
                signs = [repr(exc)]
            add("real signs", signs == sorted(pred.real_signs), got=signs,
                want=sorted(pred.real_signs))
    if pred.leading_inertia is not None:
        got = inertia_of(pencil.B)
        add("lambda-coefficient inertia", got == pred.leading_inertia, got=list(got),
            want=list(pred.leading_inertia))
    if pred.constant_inertia is not None:
        got = inertia_of(pencil.A)
        add("constant-coefficient inertia", got == pred.constant_inertia, got=list(got),
            want=list(pred.constant_inertia))
    if pred.lambda_rank is not None:
        got = numerical_rank(pencil.B)
        add("lambda-coefficient rank", got == pred.lambda_rank, got=got, want=pred.lambda_rank)
    if pred.unperturbed is not None and pred.distance is not None:
        frob = pred.family == "singularAbsorb"
        dist = entry_distance(pencil, pred.unperturbed, frobenius=frob)
        add("distance", abs(dist - pred.distance) <= 1e-12 * max(1.0, pred.distance),
            got=dist, want=pred.distance)
    return checks
