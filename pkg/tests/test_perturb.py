import numpy as np
import pytest

from hermikron.canonical import build_block, Singular
from hermikron.errors import InvalidParams
from hermikron.infer import eigs_regular, full_report, minimal_index_profile
from hermikron.pencil import Inertia, determinant, inertia_of, numerical_rank
from hermikron.perturb import (EPS_GRID, M_GRID, PerturbationSpec, absorb_permutation,
                               conj_pair_split, entry_distance, regularize_M, s_perturbation_finite,
                               s_perturbation_infinite, singular_absorb, unperturbed_canonical,
                               verify_perturbation)


def test_finite_examples():
    p, pred = s_perturbation_finite(0, 2, 1, 1.0, 1)
    assert np.allclose(determinant(p), [1, 0, -1])
    assert sorted(e.real for e in pred.eigenvalues) == pytest.approx([-1, 1])
    assert sorted(pred.real_signs) == [-1, 1]
    assert inertia_of(p.B) == Inertia(1, 1, 0) == pred.leading_inertia
    p, pred = s_perturbation_finite(0, 3, -1, 1.0, 1)
    reals = [z.real for z in pred.eigenvalues if abs(z.imag) < 1e-12]
    assert reals == pytest.approx([-1]) and pred.real_signs == (-1,)
    checks = verify_perturbation(p, pred)
    assert all(c["ok"] for c in checks)


def test_infinite_examples():
    p, pred = s_perturbation_infinite(2, 1, 1.0, 4)
    assert sorted(z.real for z in pred.eigenvalues) == pytest.approx([-2, 2])
    assert pred.real_signs == (1, 1)
    assert np.allclose(determinant(p), [-1, 0, 0.25])
    p, pred = s_perturbation_infinite(3, -1, 1.0, 1)
    reals = [z.real for z in pred.eigenvalues if abs(z.imag) < 1e-12]
    assert reals == pytest.approx([-1]) and pred.real_signs == (-1,)
    assert all(c["ok"] for c in verify_perturbation(p, pred))


def test_conj_pair_examples():
    _, pred = conj_pair_split(1j, 1, 1.0, 1)
    assert sorted(pred.eigenvalues, key=lambda z: z.imag) == pytest.approx([-1 - 1j, -1 + 1j])
    p, pred = conj_pair_split(2j, 2, 1.0, 10)
    eigs = eigs_regular(p)
    want = [2j - 0.1, 2j - 0.2, -2j - 0.1, -2j - 0.2]
    for w in want:
        assert min(abs(e - w) for e in eigs) < 1e-12
    for k in (1, 2, 3):
        dists = [conj_pair_split(1 + 1j, k, 1.0, m)[1].distance for m in (1, 10, 100, 1000)]
        assert dists == sorted(dists, reverse=True) and dists[-1] == pytest.approx(k / 1000)


def test_regularize_examples():
    p, pred = regularize_M(0, 5)
    assert p.A[0, 0] == pytest.approx(0.2) and p.B[0, 0] == 0
    assert inertia_of(p.A) == Inertia(1, 0, 0)
    p, _ = regularize_M(1, 10)
    assert abs(abs(determinant(p)[0]) - 0.1) < 1e-14
    assert eigs_regular(p) == [complex(np.inf, 0)] * 3
    p, pred = regularize_M(2, 3)
    assert inertia_of(p.A) == Inertia(3, 2, 0) == pred.constant_inertia
    assert numerical_rank(p.B) == 4


def test_singular_absorb_examples():
    p, _ = singular_absorb(1j, 1, 0, 1e-3)
    rep = full_report(p)
    assert rep.right_minimal_indices == [1] == rep.left_minimal_indices
    assert not rep.real_eigs and not rep.pair_eigs
    p, pred = singular_absorb(1j, 1, 1, 1e-3)
    assert minimal_index_profile(p) == [2]
    assert entry_distance(p, pred.unperturbed, frobenius=True) == pytest.approx(1e-3 * np.sqrt(2))
    ref, _ = singular_absorb(1j, 2, 1, 0.0)
    perm = absorb_permutation(2, 1)
    canon = unperturbed_canonical(PerturbationSpec("singularAbsorb", k=2, d=1, mu=1j))
    assert np.array_equal(ref.A[np.ix_(perm, perm)], canon.A)
    assert np.array_equal(ref.B[np.ix_(perm, perm)], canon.B)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("d", [0, 1, 2])
def test_singular_absorb_has_no_eigenvalues(k, d):
    p, pred = singular_absorb(0.5 + 1j, k, d, 1e-2)
    e = k + d
    rng = np.random.default_rng(k * 10 + d)
    for lam in rng.standard_normal(24) + 1j * rng.standard_normal(24):
        assert numerical_rank(p(lam)) == 2 * e
    assert numerical_rank(p.B[2 * e + 1 - e:, :]) == e  # lower block rows of the lambda term


@pytest.mark.parametrize("family", ["finiteJordan", "infiniteJordan", "conjPairSplit",
                                    "regularizeM"])
def test_convergence_as_m_grows(family):
    dists = []
    for m in (1, 10, 100, 1000):
        spec = PerturbationSpec(family, k=3, a=0.5, sign=-1, d=2, mu=1 + 1j, eps=1.0, m=m)
        p, pred = spec.build()
        dists.append(entry_distance(p, unperturbed_canonical(spec)))
        assert dists[-1] == pytest.approx(pred.distance)
    assert dists == sorted(dists, reverse=True)


def test_grid_verification_small():
    for eps in EPS_GRID:
        for m in M_GRID:
            for spec in (PerturbationSpec("finiteJordan", k=4, a=-2, sign=-1, eps=eps, m=m),
                         PerturbationSpec("infiniteJordan", k=3, sign=1, eps=eps, m=m)):
                assert all(c["ok"] for c in verify_perturbation(*spec.build()))


def test_invalid_params():
    with pytest.raises(InvalidParams):
        s_perturbation_finite(0, 1, 1, 1.0, 1)
    with pytest.raises(InvalidParams):
        s_perturbation_infinite(2, 1, 0.0, 1)
    with pytest.raises(InvalidParams):
        conj_pair_split(2.0, 1, 1.0, 1)
    with pytest.raises(InvalidParams):
        singular_absorb(1.0 + 0j, 1, 0, 1.0)
    with pytest.raises(InvalidParams):
        PerturbationSpec("bogus")
    with pytest.raises(InvalidParams):
        PerturbationSpec("finiteJordan", k=2, m=0)


def test_unperturbed_blocks_are_canonical():
    assert unperturbed_canonical(PerturbationSpec("regularizeM", d=1)) == build_block(Singular(1))
