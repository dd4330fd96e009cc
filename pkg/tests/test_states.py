import json

import numpy as np
import pytest

from qmonogamy.errors import StateFormatError
from qmonogamy.states import (
    DensityOperator,
    MultipartiteState,
    ghz_state,
    haar_random_pure,
    load_state,
    ou_state,
    pair_reductions,
    random_mixed,
    reduce_state,
    save_state,
    w_state,
)
from qmonogamy.tensor import hermitian_eig


def test_w4_amplitudes(w4):
    expected = np.zeros(16)
    expected[[8, 4, 2, 1]] = 0.5
    assert np.allclose(w4.amps, expected)


def test_w2_is_bell_like():
    st = w_state(2)
    assert np.allclose(st.amps, [0.0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0.0])


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_w_norm(n):
    assert abs(np.linalg.norm(w_state(n).amps) - 1.0) <= 1e-12


def test_ghz_bell():
    st = ghz_state(2)
    assert np.allclose(st.amps, [1 / np.sqrt(2), 0.0, 0.0, 1 / np.sqrt(2)])


def test_ghz3_pair_reductions_are_classical_mixtures(ghz3):
    for pair in pair_reductions(ghz3, 0).pairs:
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = expected[3, 3] = 0.5
        assert np.allclose(pair.mat, expected, atol=1e-14)


def test_ou_state_basics(ou):
    assert ou.dims == (3, 2, 2)
    assert abs(np.linalg.norm(ou.amps) - 1.0) <= 1e-12
    red = pair_reductions(ou, 0)
    # marginal of the qutrit: support-2 spectrum (3 +- sqrt(3))/6
    rho_a = reduce_state(ou, 0)
    values, _ = hermitian_eig(rho_a.mat)
    assert np.allclose(values[:2], [(3 + np.sqrt(3)) / 6, (3 - np.sqrt(3)) / 6], atol=1e-12)
    assert abs(values[2]) <= 1e-12
    assert [p.dims for p in red.pairs] == [(3, 2), (3, 2)]


def test_haar_determinism():
    a = haar_random_pure((2, 2, 2), seed=123)
    b = haar_random_pure((2, 2, 2), seed=123)
    c = haar_random_pure((2, 2, 2), seed=124)
    assert np.array_equal(a.amps, b.amps)
    assert not np.array_equal(a.amps, c.amps)


def test_haar_norm():
    st = haar_random_pure((3, 2), seed=9)
    assert abs(np.linalg.norm(st.amps) - 1.0) <= 1e-12


def test_haar_marginal_purity_matches_monte_carlo_oracle():
    # Mean Tr(rho_A^2) over Haar two-qubit states; the exact value is
    # (d_A + d_B)/(d_A d_B + 1) = 4/5, reproduced here by direct sampling.
    total = 0.0
    n = 1000
    for i in range(n):
        st = haar_random_pure((2, 2), seed=5000 ^ i)
        m = st.amps.reshape(2, 2)
        g = m @ m.conj().T
        total += float(np.sum(np.abs(g) ** 2))
    assert abs(total / n - 0.8) <= 0.03


def test_random_mixed_rank_one_is_pure():
    rho = random_mixed((2, 2), 1, seed=3)
    values, _ = hermitian_eig(rho.mat)
    assert abs(values[0] - 1.0) <= 1e-10


def test_random_mixed_trace_and_rank():
    rho = random_mixed((2, 2), 2, seed=4)
    values, _ = hermitian_eig(rho.mat)
    assert abs(np.sum(values) - 1.0) <= 1e-10
    assert np.all(values[2:] <= 1e-10)
    with pytest.raises(ValueError):
        random_mixed((2, 2), 5, seed=4)


def test_pair_reductions_w4_identical(w4):
    pairs = pair_reductions(w4, 0).pairs
    for p in pairs[1:]:
        assert np.max(np.abs(p.mat - pairs[0].mat)) <= 1e-12


def test_pair_reductions_product_state():
    a = haar_random_pure((2,), seed=1).amps
    b = haar_random_pure((2,), seed=2).amps
    c = haar_random_pure((2,), seed=3).amps
    st = MultipartiteState((2, 2, 2), np.kron(np.kron(a, b), c))
    pairs = pair_reductions(st, 0).pairs
    rho_a = np.outer(a, a.conj())
    assert np.allclose(pairs[0].mat, np.kron(rho_a, np.outer(b, b.conj())), atol=1e-12)
    assert np.allclose(pairs[1].mat, np.kron(rho_a, np.outer(c, c.conj())), atol=1e-12)


def test_pair_reductions_focus_comes_first(ou):
    red = pair_reductions(ou, 2)
    assert red.others == (0, 1)
    assert [p.dims for p in red.pairs] == [(2, 3), (2, 2)]


def test_save_load_pure_roundtrip(tmp_path, w4):
    path = tmp_path / "w4.json"
    save_state(path, w4)
    loaded = load_state(path)
    assert isinstance(loaded, MultipartiteState)
    assert loaded.dims == w4.dims
    assert np.array_equal(loaded.amps, w4.amps)


def test_save_load_mixed_roundtrip(tmp_path):
    rho = random_mixed((2, 2), 2, seed=8)
    path = tmp_path / "rho.json"
    save_state(path, rho)
    loaded = load_state(path)
    assert isinstance(loaded, DensityOperator)
    assert np.max(np.abs(loaded.mat - rho.mat)) <= 1e-15


def test_load_rejects_dims_mismatch(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "pure", "dims": [2, 2], "amps": [[1.0, 0.0]]}))
    with pytest.raises(StateFormatError):
        load_state(path)


def test_load_rejects_unnormalized(tmp_path):
    path = tmp_path / "bad.json"
    amps = [[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
    path.write_text(json.dumps({"kind": "pure", "dims": [2, 2], "amps": amps}))
    with pytest.raises(StateFormatError):
        load_state(path)


def test_load_renormalizes_small_drift(tmp_path):
    amps = [[1.0 + 2e-7, 0.0], [0.0, 0.0]]
    path = tmp_path / "drift.json"
    path.write_text(json.dumps({"kind": "pure", "dims": [2], "amps": amps}))
    st = load_state(path)
    assert abs(np.linalg.norm(st.amps) - 1.0) <= 1e-12


def test_load_rejects_malformed(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{this is not json")
    with pytest.raises(StateFormatError):
        load_state(path)


def test_state_invariants_enforced():
    with pytest.raises(ValueError):
        MultipartiteState((2,), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        DensityOperator((2,), np.array([[1.0, 0.5], [0.2, 0.0]]))
