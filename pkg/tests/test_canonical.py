from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hermikron.bundles import BundleDescriptor, enumerate_regular, leading_inertia, realize
from hermikron.canonical import (HKCF, ConjPair, InfJordan, RealJordan, Singular, build_F,
                                 build_G, build_L, build_block, build_hkcf, hkcf_from_json,
                                 hkcf_to_json, is_exactly_hermitian, random_congruence_sample,
                                 skew_to_hermitian)
from hermikron.errors import InvalidBlock, NotSkewHermitian
from hermikron.pencil import MatrixPencil, determinant, inertia_of, normal_rank

blocks = st.one_of(
    st.builds(RealJordan, st.integers(1, 4), st.integers(-5, 5), st.sampled_from([1, -1])),
    st.builds(InfJordan, st.integers(1, 4), st.sampled_from([1, -1])),
    st.builds(ConjPair, st.integers(1, 2), st.integers(-3, 3), st.integers(1, 3)),
    st.builds(Singular, st.integers(0, 3)),
)


def test_F_G_L():
    assert np.array_equal(build_F(1), [[0, 1]])
    assert np.array_equal(build_G(2), [[1, 0, 0], [0, 1, 0]])
    assert build_L(0).shape == (0, 1)


def test_block_examples():
    p = build_block(RealJordan(1, 5, -1))
    assert p.A[0, 0] == 5 and p.B[0, 0] == -1
    M1 = build_block(Singular(1))
    assert np.array_equal(M1.A, [[0, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert np.array_equal(M1.B, [[0, 0, 1], [0, 0, 0], [1, 0, 0]])
    C = build_block(ConjPair(1, 0, 1))
    assert np.array_equal(C(0.5), [[0, 0.5 + 1j], [0.5 - 1j, 0]])


def test_hkcf_examples():
    assert np.array_equal(build_hkcf(HKCF((Singular(0),))).A, [[0]])
    p = build_hkcf(HKCF((RealJordan(1, 1), RealJordan(1, 2, -1))))
    assert np.array_equal(p.A, np.diag([-1, 2])) and np.array_equal(p.B, np.diag([1, -1]))
    h = HKCF((ConjPair(1, 0, 1), Singular(1)))
    assert h.n == 5 and normal_rank(build_hkcf(h)) == 4 == h.normal_rank


def test_invalid_blocks():
    for bad in (lambda: ConjPair(1, 0, 0), lambda: ConjPair(1, 0, -1), lambda: RealJordan(0, 1),
                lambda: Singular(-1), lambda: RealJordan(1, 1, 2), lambda: InfJordan(1, 0)):
        with pytest.raises(InvalidBlock):
            bad()


@given(blocks)
def test_blocks_are_exactly_hermitian_with_declared_size(b):
    p = build_block(b)
    assert is_exactly_hermitian(p)
    assert p.shape == (b.size, b.size)
    want = {RealJordan: b.size, InfJordan: b.size}.get(type(b))
    if isinstance(b, ConjPair):
        assert b.size == 2 * b.k
    elif isinstance(b, Singular):
        assert b.size == 2 * b.d + 1
    else:
        assert b.size == want == b.k


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("sign", [1, -1])
def test_jordan_determinant_has_single_root(k, sign):
    a = 1.5
    det = determinant(build_block(RealJordan(k, a, sign)))
    want = np.poly1d([a], r=True) ** k  # (lambda - a)^k, descending
    ratio = det[-1]
    assert abs(abs(ratio) - 1) < 1e-12
    assert np.allclose(det / ratio, want.coeffs[::-1], atol=1e-10)


@given(st.lists(blocks, min_size=1, max_size=4), st.randoms())
def test_block_permutation_is_a_congruence(bs, random):
    h = HKCF(tuple(bs))
    perm = list(range(len(bs)))
    random.shuffle(perm)
    g = HKCF(tuple(bs[i] for i in perm))
    p, q = build_hkcf(h), build_hkcf(g)
    assert inertia_of(p.A) == inertia_of(q.A) and inertia_of(p.B) == inertia_of(q.B)
    if h.n <= 8:
        assert np.allclose(determinant(p), determinant(q), atol=1e-9)


def test_random_sample_of_scalar_block_uses_integer_eigenvalue():
    p = random_congruence_sample(HKCF((RealJordan(1, 0),)), "integers", seed=4)
    a = -p.A[0, 0] / p.B[0, 0]
    assert abs(a - round(a.real)) < 1e-9 and -1000 <= a.real <= 1000


def test_random_samples_keep_leading_inertia_and_rank():
    for seed in range(100):
        desc = BundleDescriptor(4, 4, seed % 3, 1 if seed % 2 else 0)
        p = random_congruence_sample(realize(desc), seed=seed)
        assert inertia_of(p.B) == leading_inertia(desc)
        desc2 = BundleDescriptor(6, 3, seed % 2, seed % 2)
        q = random_congruence_sample(realize(desc2), seed=seed)
        assert normal_rank(q) == 3


def test_eigenvalue_policies_keep_distinct_values():
    h = realize(BundleDescriptor(6, 6, 2, 1))
    for policy in ("integers", "rationals", "gaussian"):
        p = random_congruence_sample(h, policy, seed=1)
        assert p.shape == (6, 6)


def test_skew_to_hermitian():
    out = skew_to_hermitian(MatrixPencil([[0]], [[2j]]))
    assert out.B[0, 0] == -2 and out.A[0, 0] == 0
    M1 = build_block(Singular(1))
    back = skew_to_hermitian(MatrixPencil(-1j * M1.A, -1j * M1.B))
    assert np.allclose(back.A, M1.A) and np.allclose(back.B, M1.B)
    with pytest.raises(NotSkewHermitian):
        skew_to_hermitian(MatrixPencil(np.eye(2), np.eye(2)))
    rng = np.random.default_rng(0)
    for _ in range(100):
        Z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        W = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        skew_to_hermitian(MatrixPencil(Z - Z.conj().T, W - W.conj().T))


def test_json_round_trip():
    h = HKCF((ConjPair(2, 1, 3), Singular(1), RealJordan(1, Fraction(3, 2), -1), InfJordan(2, 1)))
    back = hkcf_from_json(hkcf_to_json(h))
    assert back.n == h.n and [type(b) for b in back] == [type(b) for b in h]
    assert np.allclose(build_hkcf(back).A, build_hkcf(h).A)
    for desc in enumerate_regular(3):
        assert hkcf_from_json(hkcf_to_json(realize(desc))) == realize(desc)
