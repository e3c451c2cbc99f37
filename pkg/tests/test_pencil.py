import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from hermikron.canonical import (HKCF, ConjPair, InfJordan, RealJordan, Singular, build_block,
                                 build_hkcf)
from hermikron.errors import NotHermitian, SingularTransform, TooLarge
from hermikron.pencil import (HermitianPencil, Inertia, MatrixPencil, congruence, determinant,
                              direct_sum, evaluate, inertia_of, matrix_from_json, matrix_to_json,
                              normal_rank, pencil_from_json, pencil_to_json, polyeval)


def sympy_det_coeffs(p):
    """Independent oracle: symbolic determinant of A + lambda B, ascending coefficients."""
    lam = sp.Symbol("lam")
    n = p.shape[0]
    M = sp.Matrix(n, n, lambda i, j: sp.nsimplify(p.A[i, j].real) + sp.I * sp.nsimplify(p.A[i, j].imag)
                  + lam * (sp.nsimplify(p.B[i, j].real) + sp.I * sp.nsimplify(p.B[i, j].imag)))
    poly = sp.Poly(sp.expand(M.det()), lam)
    coeffs = [complex(c) for c in reversed(poly.all_coeffs())]
    return np.array(coeffs + [0] * (n + 1 - len(coeffs)))


def random_hermitian_pencil(rng, n):
    def herm():
        Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return (Z + Z.conj().T) / 2
    return HermitianPencil(herm(), herm())


def test_evaluate_examples():
    M1 = build_block(Singular(1))
    assert np.array_equal(evaluate(M1, 0), [[0, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert np.array_equal(build_block(RealJordan(1, 2))(2), [[0]])
    assert np.array_equal(build_block(RealJordan(2, 0))(1), [[1, 1], [1, 0]])


def test_pencil_is_immutable_and_value_equal():
    p = HermitianPencil(np.eye(2), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        p.A[0, 0] = 5
    assert p == HermitianPencil(np.eye(2), np.zeros((2, 2)))
    assert p != HermitianPencil(2 * np.eye(2), np.zeros((2, 2)))


def test_hermitian_validation():
    with pytest.raises(NotHermitian):
        HermitianPencil([[0, 1], [0, 0]], np.zeros((2, 2)))
    with pytest.raises(ValueError):
        HermitianPencil(np.zeros((0, 0)), np.zeros((0, 0)))
    with pytest.raises(ValueError):
        MatrixPencil(np.zeros((2, 2)), np.zeros((2, 3)))
    # tiny asymmetry within tolerance is accepted
    HermitianPencil([[1, 1e-14], [0, 1]], np.eye(2))


def test_congruence_examples():
    H = build_block(RealJordan(1, 3))
    assert congruence(H, np.eye(1)) == H
    C = congruence(H, [[2]])
    assert C.A[0, 0] == -12 and C.B[0, 0] == 4
    with pytest.raises(SingularTransform):
        congruence(H, [[0]])
    with pytest.raises(SingularTransform):
        congruence(build_block(RealJordan(2, 0)), [[1, 1], [1, 1 + 1e-9]])


def test_inertia_examples():
    assert inertia_of(np.diag([1.0, -1.0, 0.0])) == Inertia(1, 1, 1)
    assert inertia_of(build_block(Singular(1)).B) == Inertia(1, 1, 1)
    M = build_block(Singular(2))
    A = np.array(M.A)
    A[0, 0] += 1 / 10
    assert inertia_of(A) == Inertia(3, 2, 0)
    assert inertia_of(np.zeros((2, 2))) == Inertia(0, 0, 2)


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_congruence_preserves_inertia(n, seed):
    rng = np.random.default_rng(seed)
    p = random_hermitian_pencil(rng, n)
    Q = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if np.linalg.cond(Q) > 1e4:
        return
    C = congruence(p, Q)
    assert inertia_of(C.A) == inertia_of(p.A)
    assert inertia_of(C.B) == inertia_of(p.B)


def test_normal_rank_examples():
    assert normal_rank(build_block(Singular(1))) == 2
    h = HKCF((Singular(1), Singular(0), RealJordan(1, 7)))
    assert normal_rank(build_hkcf(h)) == 3
    assert normal_rank(HermitianPencil(np.zeros((3, 3)), np.zeros((3, 3)))) == 0


def test_determinant_examples():
    S = HermitianPencil([[1, 0], [0, 1]], [[0, 1], [1, 0]])  # S_(0,2) with eps/m = 1
    assert np.allclose(determinant(S), [1, 0, -1], atol=1e-14)
    assert np.allclose(determinant(build_block(Singular(0))), [0, 0])
    M = build_block(Singular(1))
    A = np.array(M.A)
    A[0, 0] += 0.1
    det = determinant(HermitianPencil(A, M.B))
    assert abs(abs(det[0]) - 0.1) < 1e-14 and np.allclose(det[1:], 0, atol=1e-14)
    with pytest.raises(TooLarge):
        determinant(HermitianPencil(np.eye(13), np.eye(13)))


@pytest.mark.parametrize("h", [
    HKCF((RealJordan(3, 2, -1),)),
    HKCF((ConjPair(1, 1, 2), RealJordan(1, -1))),
    HKCF((InfJordan(3, 1),)),
    HKCF((ConjPair(2, 0, 1),)),
])
def test_determinant_against_symbolic(h):
    p = build_hkcf(h)
    assert np.allclose(determinant(p), sympy_det_coeffs(p), atol=1e-12)


@given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_determinant_interpolates_random_pencils(n, seed):
    p = random_hermitian_pencil(np.random.default_rng(seed), n)
    coeffs = determinant(p)
    for z in (0.3, -1.7 + 0.2j, 2j):
        want = np.linalg.det(evaluate(p, z))
        assert abs(polyeval(coeffs, z) - want) <= 1e-10 * max(1, abs(want))


def test_direct_sum_and_json_round_trip(rng):
    p = direct_sum(build_block(RealJordan(1, 1)), build_block(Singular(1)))
    assert isinstance(p, HermitianPencil) and p.shape == (4, 4)
    q = random_hermitian_pencil(rng, 3)
    assert pencil_from_json(pencil_to_json(q)) == q
    M = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    assert np.array_equal(matrix_from_json(matrix_to_json(M)), M)
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 2, "cols": 2, "re": [1, 2, 3], "im": [0, 0, 0]})
