"""Convex-roof optimizer checks, including cross-backend agreement."""

import dataclasses

import numpy as np
import pytest

from qmonogamy._backend import HAVE_NUMBA
from qmonogamy.kernels import jacobi, roof
from qmonogamy.measures import (
    RoofConfig,
    coa_two_qubit,
    concurrence_pure,
    concurrence_two_qubit,
    convex_roof,
    eigen_ensemble_average,
    scren_mixed,
)
from qmonogamy.states import generator, ou_state, pair_reductions, random_mixed

CFG = RoofConfig(restarts=16, refine_steps=400, seed=5)


def test_pure_state_roof_is_trivial():
    rho = random_mixed((2, 2), 1, seed=40)
    res = convex_roof(rho, "concurrence", CFG)
    values = np.linalg.eigvalsh(rho.mat)
    top = np.argmax(values)
    psi = np.linalg.eigh(rho.mat)[1][:, top]
    from qmonogamy.states import MultipartiteState

    expected = concurrence_pure(MultipartiteState((2, 2), psi), 0)
    assert abs(res.value - expected) <= 1e-8
    assert res.converged


def test_roof_min_matches_wootters():
    for i in range(8):
        rho = random_mixed((2, 2), 2, seed=500 ^ i)
        res = convex_roof(rho, "concurrence", dataclasses.replace(CFG, seed=i))
        assert abs(res.value - concurrence_two_qubit(rho)) < 5e-3


def test_roof_max_matches_coa():
    cfg = dataclasses.replace(CFG, direction="max")
    for i in range(8):
        rho = random_mixed((2, 2), 2, seed=600 ^ i)
        res = convex_roof(rho, "concurrence", dataclasses.replace(cfg, seed=i))
        assert abs(res.value - coa_two_qubit(rho)) < 5e-3


def test_roof_decomposition_reconstructs_state():
    rho = random_mixed((2, 2), 3, seed=41)
    res = convex_roof(rho, "concurrence", CFG)
    assert np.max(np.abs(res.reconstruction() - rho.mat)) <= 1e-8
    assert abs(np.sum(res.weights) - 1.0) <= 1e-10


def test_roof_brackets_eigen_ensemble():
    rho = random_mixed((2, 2), 3, seed=42)
    avg = eigen_ensemble_average(rho, "concurrence")
    lo = convex_roof(rho, "concurrence", CFG).value
    hi = convex_roof(rho, "concurrence", dataclasses.replace(CFG, direction="max")).value
    assert lo <= avg + 1e-12
    assert hi >= avg - 1e-12


def test_roof_rejects_small_decomposition():
    rho = random_mixed((2, 2), 3, seed=43)
    with pytest.raises(ValueError):
        convex_roof(rho, "concurrence", dataclasses.replace(CFG, decomposition_size=2))


def test_roof_unconverged_flag_with_tiny_budget():
    rho = random_mixed((2, 2), 2, seed=44)
    res = convex_roof(rho, "concurrence", dataclasses.replace(CFG, refine_steps=1))
    assert not res.converged


def test_callable_measure_matches_registered_path():
    rho = random_mixed((2, 2), 2, seed=45)
    cfg = RoofConfig(restarts=4, refine_steps=120, seed=9)
    named = convex_roof(rho, "concurrence", cfg)
    generic = convex_roof(rho, lambda st: concurrence_pure(st, 0), cfg)
    assert abs(named.value - generic.value) <= 1e-6


def test_ou_pair_negativity_roof_hits_analytic_value(ou):
    # Both pair reductions of the bundled 3x2x2 state have an exact
    # roof-minimized negativity of sqrt(2)/3, so squared values 2/9.
    cfg = RoofConfig(restarts=24, refine_steps=400, seed=2)
    for pair in pair_reductions(ou, 0).pairs:
        assert abs(scren_mixed(pair, cfg) - 2.0 / 9.0) < 1e-6


def test_jacobi_backends_agree():
    if not HAVE_NUMBA:
        pytest.skip("numba unavailable")
    rng = generator(77)
    z = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    m = (z + z.conj().T) / 2.0
    wa, va, sa = jacobi.jacobi_eigh_numba(m)
    wb, vb, sb = jacobi.jacobi_eigh_numpy(m)
    assert sa >= 0 and sb >= 0
    assert np.allclose(np.sort(wa), np.sort(wb), atol=1e-12)


def test_roof_backends_agree():
    if not HAVE_NUMBA:
        pytest.skip("numba unavailable")
    rho = random_mixed((2, 2), 2, seed=46)
    eigvals, eigvecs = np.linalg.eigh(rho.mat)
    keep = eigvals > 1e-10
    weighted = (eigvecs[:, keep] * np.sqrt(eigvals[keep])).T
    rank = weighted.shape[0]
    m = rank + 2
    pairs = np.array(
        [(i, j) for i in range(m - 1) for j in range(i + 1, m)], dtype=np.int64
    ).T.reshape(2, -1)
    phis = np.zeros((6, m, 4), dtype=np.complex128)
    phis[0, :rank] = weighted
    for t in range(1, 6):
        phis[t] = roof.haar_isometry(m, rank, generator(3, t)) @ weighted
    batch = phis.copy()
    hfun = lambda rows: roof.h_rows_numpy(rows, 2, 2, roof.CODE_CONCURRENCE)  # noqa: E731
    vals_np, _ = roof.refine_numpy(batch, pairs[0], pairs[1], hfun, 1.0, 200)
    vals_nb = np.empty(6)
    for t in range(6):
        vals_nb[t], _ = roof._refine_numba(
            phis[t], pairs[0], pairs[1], 2, 2, roof.CODE_CONCURRENCE, 1.0, 200,
            roof.GRID_N, roof.GS_ITERS, roof.CYCLE_TOL,
        )
    assert np.max(np.abs(vals_np - vals_nb)) <= 1e-6
