import json
import math

import numpy as np
import pytest

from spectra_theta.errors import DomainError, ResourceError
from spectra_theta.pencil import (
    CubeRelaxationReport,
    MonicPencil,
    SymTuple,
    _haar_batch,
    cube_pencil,
    cube_relaxation_test,
    evaluate,
    evaluate_scalar,
    haar_orthogonal,
    in_free_spectrahedron,
    min_eigenvalue,
    pencil_from_json,
    pencil_to_json,
    random_contraction_tuple,
    sharpness_witness,
    symtuple_from_json,
    symtuple_to_json,
    verify_cube_inclusion,
)
from spectra_theta.sphere_oracle import _generator
from spectra_theta.theta import SignDiag, kappa_star, theta

B1 = np.diag([1.0, -1.0])
B2 = np.array([[0.0, 1.0], [1.0, 0.0]])


def _kron_by_hand(a, x):
    na, nx = a.shape[0], x.shape[0]
    out = np.zeros((na * nx, na * nx))
    for i in range(na):
        for j in range(na):
            for k in range(nx):
                for l in range(nx):
                    out[i * nx + k, j * nx + l] = a[i, j] * x[k, l]
    return out


def test_evaluate_zero_tuple_is_identity():
    L = MonicPencil((B1, B2))
    X = SymTuple((np.zeros((3, 3)), np.zeros((3, 3))))
    assert np.array_equal(evaluate(L, X), np.eye(6))


def test_evaluate_scalar_case():
    L = MonicPencil((np.array([[2.0]]), np.array([[-0.5]])))
    X = SymTuple((np.array([[0.3]]), np.array([[0.4]])))
    assert evaluate(L, X) == pytest.approx(np.array([[1.0 - 2.0 * 0.3 + 0.5 * 0.4]]))


def test_evaluate_matches_entrywise_kronecker():
    rng = _generator(5)
    a = rng.standard_normal((3, 3))
    x = rng.standard_normal((2, 2))
    a = 0.5 * (a + a.T)
    x = 0.5 * (x + x.T)
    L = MonicPencil((a,))
    X = SymTuple((x,))
    assert evaluate(L, X) == pytest.approx(np.eye(6) - _kron_by_hand(a, x), abs=1e-14)


def test_evaluate_arity_mismatch():
    with pytest.raises(DomainError):
        evaluate(MonicPencil((B1,)), SymTuple((B1, B2)))


def test_sharp_two_example_exact():
    # lambda_max of sum B_j (x) B_j is exactly 2; the pencil survives
    # scaling 2 but no less
    L = MonicPencil((B1, B2))
    X = SymTuple((B1, B2))
    total = np.eye(4) - evaluate(L, X)
    lam_max = float(np.linalg.eigvalsh(total)[-1])
    assert lam_max == pytest.approx(2.0, abs=1e-10)
    assert min_eigenvalue(2.0 * np.eye(4) - total) == pytest.approx(0.0, abs=1e-10)
    for rho in (1.99, 1.5, 1.0):
        assert min_eigenvalue(rho * np.eye(4) - total) < 0.0


def test_membership_basics():
    L = cube_pencil(3)
    zero = SymTuple(tuple(np.zeros((2, 2)) for _ in range(3)))
    assert in_free_spectrahedron(L, zero)
    contractions = SymTuple((np.diag([0.9, -0.4]), np.diag([0.2, 0.1]), 0.5 * np.eye(2)))
    assert in_free_spectrahedron(L, contractions)
    eps = 1e-3
    too_big = SymTuple((np.diag([1.0 + eps, 0.0]), np.zeros((2, 2)), np.zeros((2, 2))))
    assert not in_free_spectrahedron(L, too_big, tol=1e-6)
    with pytest.raises(DomainError):
        in_free_spectrahedron(L, zero, tol=-1.0)


def test_cube_pencil_geometry():
    c1 = cube_pencil(1)
    assert np.array_equal(c1.coeffs[0], np.diag([1.0, -1.0]))
    c2 = cube_pencil(2)
    assert c2.nu == 4
    assert min_eigenvalue(evaluate_scalar(c2, [1.0, 1.0])) == pytest.approx(0.0, abs=1e-14)
    assert min_eigenvalue(evaluate_scalar(c2, [1.01, 0.0])) < 0.0
    for g in (1, 2, 3):
        cp = cube_pencil(g)
        for bits in range(1 << g):
            vertex = [1.0 if bits & (1 << j) else -1.0 for j in range(g)]
            assert min_eigenvalue(evaluate_scalar(cp, vertex)) == pytest.approx(0.0, abs=1e-14)
            grown = [1.001 * v for v in vertex]
            assert min_eigenvalue(evaluate_scalar(cp, grown)) < 0.0


def test_verify_cube_inclusion():
    assert verify_cube_inclusion(cube_pencil(3))
    shrunk = MonicPencil(tuple(2.0 * c for c in cube_pencil(2).coeffs))
    assert not verify_cube_inclusion(shrunk)
    with pytest.raises(ResourceError):
        verify_cube_inclusion(MonicPencil(tuple(np.zeros((1, 1)) for _ in range(21))))


def test_haar_orthogonal():
    u = haar_orthogonal(8, seed=3)
    assert np.max(np.abs(u.T @ u - np.eye(8))) <= 1e-12
    assert haar_orthogonal(1, seed=5)[0, 0] in (-1.0, 1.0)


def test_haar_first_column_mean_vanishes():
    rng = _generator(17)
    total = np.zeros(3)
    n = 100_000
    done = 0
    while done < n:
        m = min(20_000, n - done)
        total += _haar_batch(rng, m, 3)[:, :, 0].sum(axis=0)
        done += m
    # each column entry has variance 1/d, so the sample mean has std 1/sqrt(n d)
    assert np.max(np.abs(total / n)) <= 4.0 / math.sqrt(n * 3)


def test_cube_relaxation_on_cube_pencil():
    report = cube_relaxation_test(cube_pencil(2), d=3, trials=25, seed=11)
    assert isinstance(report, CubeRelaxationReport)
    assert report.passed
    assert report.violations == ()
    # identity inclusion: scaling 1 always feasible for contractions
    assert report.tightest_scale >= 1.0 - 1e-12
    assert report.min_margin >= -1e-9


def test_cube_relaxation_rejects_bad_pencil():
    shrunk = MonicPencil(tuple(2.0 * c for c in cube_pencil(2).coeffs))
    with pytest.raises(DomainError):
        cube_relaxation_test(shrunk, d=2, trials=1, seed=0)


def test_compression_stability():
    # If X is in the free spectrahedron, any compression V^T X V (V an
    # isometry onto a subspace) stays inside.
    rng = _generator(23)
    L = MonicPencil((B1, B2))
    for _ in range(25):
        X = random_contraction_tuple(2, 5, rng)
        lam_max = float(
            np.linalg.eigvalsh(np.eye(10) - evaluate(L, X))[-1]
        )
        scaled = SymTuple(tuple(0.95 * m / max(lam_max, 1e-9) for m in X.mats))
        assert in_free_spectrahedron(L, scaled)
        basis = np.linalg.qr(rng.standard_normal((5, 3)))[0]
        compressed = SymTuple(tuple(basis.T @ m @ basis for m in scaled.mats))
        assert in_free_spectrahedron(L, compressed, tol=1e-9)


def test_direct_sums_stay_inside():
    rng = _generator(29)
    L = MonicPencil((B1, B2))
    th = theta(2).theta
    X = SymTuple(tuple(m / th for m in random_contraction_tuple(2, 3, rng).mats))
    Y = SymTuple(tuple(m / th for m in random_contraction_tuple(2, 4, rng).mats))
    direct = SymTuple(
        tuple(
            np.block(
                [[x, np.zeros((3, 4))], [np.zeros((4, 3)), y]]
            )
            for x, y in zip(X.mats, Y.mats)
        )
    )
    assert in_free_spectrahedron(L, X) and in_free_spectrahedron(L, Y)
    assert in_free_spectrahedron(L, direct, tol=1e-9)


def test_witness_vector_identity_per_sample():
    # e* (Z(U) (x) X(U)) e == trace(J_hat J(s,t;1,1)) / d == 1 for every U
    d = 3
    ks, a_opt, b_opt = kappa_star(2, 1)
    j_hat = np.diag(SignDiag(2, 1, a_opt, b_opt).diagonal())
    j_one = np.diag(SignDiag(2, 1, 1.0, 1.0).diagonal())
    e = np.eye(d).reshape(-1) / math.sqrt(d)
    rng = _generator(31)
    for u in _haar_batch(rng, 20, d):
        z = u.T @ j_hat @ u
        x = u.T @ j_one @ u
        val = e @ np.kron(z, x) @ e
        assert val == pytest.approx(1.0, abs=1e-10)


def test_witness_tuple_norms_and_degenerate_cell():
    pencil_a, X, lam = sharpness_witness(2, cells=16, samples_per_cell=500, seed=7)
    assert pencil_a.g == 16 and X.g == 16
    for m in X.mats:
        assert float(np.max(np.abs(np.linalg.eigvalsh(m)))) == pytest.approx(1.0, abs=1e-12)
    _, _, lam1 = sharpness_witness(2, cells=1, samples_per_cell=20_000, seed=7)
    assert abs(lam1) <= 0.2  # Haar average of conjugated trace-0 patterns


def test_witness_climbs_toward_theta():
    _, _, lam = sharpness_witness(2, cells=64, samples_per_cell=2_000, seed=11)
    th = theta(2).theta
    assert lam >= 0.85 * th
    assert lam <= th + 1e-6


def test_witness_pencil_feeds_relaxation_test():
    # Normalizing the witness pencil so the cube sits inside its
    # spectrahedron, the relaxation property must hold for random
    # contractions while the witness tuple itself pins the scaling near
    # 1/theta(2) = 2/pi.
    pencil_a, X, lam = sharpness_witness(2, cells=8, samples_per_cell=4_000, seed=13)
    peak = 0.0
    for bits in range(1 << pencil_a.g):
        vertex = [1.0 if bits & (1 << j) else -1.0 for j in range(pencil_a.g)]
        total = sum(v * c for v, c in zip(vertex, pencil_a.coeffs))
        peak = max(peak, float(np.linalg.eigvalsh(total)[-1]))
    normalized = MonicPencil(tuple(c / (peak * (1.0 + 1e-12)) for c in pencil_a.coeffs))
    assert verify_cube_inclusion(normalized)
    report = cube_relaxation_test(normalized, d=2, trials=40, seed=3)
    assert report.passed
    kappa2 = 1.0 / theta(2).theta
    # every feasible scaling is at least kappa_star(2) = 2/pi
    assert report.tightest_scale >= kappa2 - 1e-9


def test_witness_scale_tightens_under_refinement():
    # the scaling forced by the witness tuple approaches 1/theta(2) = 2/pi
    # from above as the partition refines
    kappa2 = 1.0 / theta(2).theta
    _, _, lam_coarse = sharpness_witness(2, cells=4, samples_per_cell=2_000, seed=19)
    _, _, lam_fine = sharpness_witness(2, cells=64, samples_per_cell=2_000, seed=19)
    assert lam_coarse < lam_fine
    assert kappa2 - 1e-9 <= 1.0 / lam_fine <= kappa2 / 0.85


def test_pencil_json_round_trip():
    L = MonicPencil((B1, B2))
    text = pencil_to_json(L)
    doc = json.loads(text)
    assert doc["nu"] == 2 and doc["g"] == 2
    back = pencil_from_json(text)
    for a, b in zip(L.coeffs, back.coeffs):
        assert np.array_equal(a, b)
    # bit-exact floats survive the trip
    third = MonicPencil((np.full((1, 1), 1.0 / 3.0),))
    assert pencil_from_json(pencil_to_json(third)).coeffs[0][0, 0] == 1.0 / 3.0


def test_symtuple_json_round_trip_and_errors():
    X = SymTuple((B1 / 3.0, B2 / 7.0))
    back = symtuple_from_json(symtuple_to_json(X))
    for a, b in zip(X.mats, back.mats):
        assert np.array_equal(a, b)
    with pytest.raises(DomainError):
        pencil_from_json("{not json")
    with pytest.raises(DomainError):
        pencil_from_json('{"nu": 2, "g": 1, "coeffs": [[1.0, 0.0, 0.0]]}')


def test_symmetry_validation():
    with pytest.raises(DomainError):
        SymTuple((np.array([[0.0, 1.0], [0.0, 0.0]]),))
    with pytest.raises(DomainError):
        MonicPencil((np.array([[0.0, 1.0], [0.0, 0.0]]),))
