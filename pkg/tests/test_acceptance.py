"""Acceptance gate: the eight headline checks, one visible pass/fail line each.

Run as part of the normal pytest invocation; each test prints

    criterion N PASS  <what was checked>  [elapsed < budget]

directly to the terminal so the gate can be audited at a glance.
"""

import time
from contextlib import contextmanager
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from lupoly import (
    SpectraPoint,
    apply_local_unitary,
    build_wall_operator,
    complement_pair_state,
    dim_for_point,
    eigenspace_basis,
    facets,
    haar_state,
    membership,
    momentum_map,
    numeric_dim,
    orbit_dimensions,
    psi_map,
    purity_invariants,
    random_interior_point,
    random_local_unitaries,
    random_wall_point,
    rank_dmu,
    stable_state,
    torus_transitivity_check,
    verify_stable,
    vertices,
    vertices_oracle,
    wall_state,
)

F = Fraction
H = F(1, 2)
Z = F(0)

TABLE_FOUR_QUBITS = {
    "v_SEP": (H, H, H, H),
    "v_B1": (Z, Z, H, H),
    "v_B2": (Z, H, Z, H),
    "v_B3": (Z, H, H, Z),
    "v_B4": (H, Z, Z, H),
    "v_B5": (H, Z, H, Z),
    "v_B6": (H, H, Z, Z),
    "v_1": (H, Z, Z, Z),
    "v_2": (Z, H, Z, Z),
    "v_3": (Z, Z, H, Z),
    "v_4": (Z, Z, Z, H),
    "v_GHZ": (Z, Z, Z, Z),
}

FOUR_QUBIT_ZERO_CHAIN = (
    ((0.0, 0.1, 0.2, 0.15), 12),
    ((0.0, 0.0, 0.2, 0.15), 10),
    ((0.0, 0.0, 0.0, 0.15), 8),
    ((0.0, 0.0, 0.0, 0.0), 6),
)


@contextmanager
def criterion(capsys, cid, budget, title):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget, f"time budget exceeded: {elapsed:.1f}s >= {budget:g}s"
    except BaseException:
        with capsys.disabled():
            print(f"criterion {cid} FAIL  {title}")
        raise
    with capsys.disabled():
        print(f"criterion {cid} PASS  {title}  [{elapsed:.2f}s < {budget:g}s]")


def dim_of(point):
    _, report = dim_for_point(point)
    return report


def boundary_zero_point(rng):
    """Random member of the three-qubit zero-coordinate boundary."""
    a = rng.uniform(0.05, 0.2)
    b = rng.uniform(0.05, 0.45 - 2 * a)
    return SpectraPoint((0.0, a, a + b))


def test_criterion_1_three_qubit_dimensions(capsys):
    with criterion(capsys, 1, 1.0, "three-qubit dims: interior 2/5, boundary 0"):
        rng = np.random.default_rng(101)
        for _ in range(5):
            report = dim_of(random_interior_point(3, rng))
            assert report.dim_M == 2
            assert report.num_invariants == 5
        for _ in range(5):
            assert dim_of(boundary_zero_point(rng)).dim_M == 0
            assert dim_of(random_wall_point(3, rng)).dim_M == 0
            c = rng.uniform(0.05, 0.45)
            assert dim_of(SpectraPoint((0.5, c, c))).dim_M == 0


def test_criterion_2_four_qubit_table(capsys):
    with criterion(capsys, 2, 1.0, "four-qubit table: 14, 12/10/8/6, walls 0, half face 2/0"):
        rng = np.random.default_rng(102)
        for _ in range(5):
            assert dim_of(random_interior_point(4, rng)).dim_M == 14
        for lams, want in FOUR_QUBIT_ZERO_CHAIN:
            assert dim_of(SpectraPoint(lams)).dim_M == want
        for _ in range(5):
            assert dim_of(random_wall_point(4, rng)).dim_M == 0
        assert dim_of(SpectraPoint.exact(["1/2", "1/6", "1/3", "1/3"])).dim_M == 0
        assert dim_of(SpectraPoint.exact(["1/2", "1/10", "1/5", "3/20"])).dim_M == 2
        assert dim_of(SpectraPoint.exact(["1/2", "0", "1/5", "3/20"])).dim_M == 0


def test_criterion_3_polytope_combinatorics(capsys):
    with criterion(capsys, 3, 30.0, "vertex counts 2^L-L, oracle L=2..6, table labels, facets 3L"):
        for L in range(2, 13):
            assert len(vertices(L).vertices) == 2**L - L
        for L in range(2, 7):
            closed = vertices(L)
            oracle = vertices_oracle(L)
            assert closed.coordinate_set() == oracle.coordinate_set()
        table = {v.label: v.point.lambdas for v in vertices(4).vertices}
        assert table == TABLE_FOUR_QUBITS
        for L in range(4, 9):
            assert len(facets(L)) == 3 * L


def test_criterion_4_wall_operator_spectrum(capsys):
    with criterion(capsys, 4, 5.0, "spectrum {-L+2k} x C(L,k) for L=1..10, low eigenspace dim L"):
        for L in range(1, 11):
            want = tuple((-L + 2 * k, comb(L, k)) for k in range(L + 1))
            assert build_wall_operator(L).spectrum() == want
            assert eigenspace_basis(L, 1).dim == L


def test_criterion_5_oracle_agreement(capsys):
    with criterion(capsys, 5, 600.0, "numeric dim = closed form: 5 interior targets x L=3,4,5 + zero strata"):
        rng = np.random.default_rng(105)
        targets = []
        for L in (3, 4, 5):
            targets.extend(random_interior_point(L, rng) for _ in range(5))
        targets.extend(SpectraPoint(lams) for lams, _ in FOUR_QUBIT_ZERO_CHAIN)
        for target in targets:
            closed = dim_of(target).dim_M
            estimate = numeric_dim(target, n_samples=5, rank_tol=1e-8)
            assert estimate.status == "ok", estimate.document()
            assert estimate.dim_estimate == closed, (target.lambdas, closed, estimate.document())
        ghz = numeric_dim(SpectraPoint((0.0, 0.0, 0.0, 0.0)), n_samples=5, rank_tol=1e-8)
        assert ghz.dim_estimate == 6


def test_criterion_6_stable_families(capsys):
    with criterion(capsys, 6, 60.0, "stable family: reductions I/2, G-rank 3L, four-qubit weights"):
        for L in range(4, 9):
            mu = momentum_map(stable_state(L))
            worst = max(np.abs(mu.block(l)).max() for l in range(1, L + 1))
            assert worst <= 1e-12
        for L in (4, 5, 6):
            assert orbit_dimensions(stable_state(L)).dim_G_orbit_complex == 3 * L
        for alpha in (-2.0, 0.5, 2.0, 5.0):
            assert verify_stable(stable_state(4, alpha)).stable
        for alpha in (1.0, -3.0):
            assert not verify_stable(complement_pair_state(4, alpha)).stable


def test_criterion_7_wall_certificate(capsys):
    with criterion(capsys, 7, 30.0, "torus rank L=3..10; 100 wall states per L=3,4,5 within 1e-10"):
        for L in range(3, 11):
            cert = torus_transitivity_check(L)
            assert cert.rank == L and cert.transitive
        rng = np.random.default_rng(107)
        for L in (3, 4, 5):
            for _ in range(100):
                target = random_wall_point(L, rng)
                state = wall_state(target, rng.uniform(-np.pi, np.pi, size=L))
                off = np.abs(psi_map(state).as_array() - target.as_array()).max()
                assert off <= 1e-10


def test_criterion_8_property_suites(capsys):
    with criterion(capsys, 8, 120.0, "1000 Haar states/L: membership, purity, invariance; 200 rank dualities"):
        for L in (2, 3, 4, 5):
            rng = np.random.default_rng(200 + L)
            for _ in range(1000):
                state = haar_state(L, rng)
                point = psi_map(state)
                assert membership(point).member
                lams = point.as_array()
                assert np.allclose(
                    purity_invariants(state), 0.5 + 2.0 * lams**2, atol=1e-12
                )
                units = random_local_unitaries(L, rng)
                rotated = apply_local_unitary(state, units)
                # momentum equivariance: blocks conjugate by the local factors
                mu, mu_rot = momentum_map(state), momentum_map(rotated)
                for l in range(1, L + 1):
                    u = units[l - 1]
                    assert np.allclose(
                        mu_rot.block(l), u @ mu.block(l) @ u.conj().T, atol=1e-10
                    )
                assert np.allclose(psi_map(rotated).as_array(), lams, atol=1e-10)
        rng = np.random.default_rng(208)
        for i in range(200):
            L = 2 + i % 3
            state = haar_state(L, rng)
            iso = orbit_dimensions(state).dim_isotropy_algebra
            assert rank_dmu(state) == 3 * L - iso
