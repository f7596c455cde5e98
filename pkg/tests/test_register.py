import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shorsim.config import CAP_ENV, DomainError, ResourceError
from shorsim.register import (
    StateVector,
    collapse,
    from_amplitudes,
    inner_product,
    marginal_probabilities,
    measure_all,
    measure_subset,
    new_basis_state,
    probabilities,
)


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    return from_amplitudes(rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n))


def test_basis_state_is_little_endian():
    s = new_basis_state(3, 0b101)
    assert s.amplitudes[5] == 1 and s.norm() == 1
    assert s.ket(5) == "|101>"


def test_basis_state_rejects_out_of_range():
    with pytest.raises(DomainError):
        new_basis_state(2, 4)
    with pytest.raises(DomainError):
        new_basis_state(0, 0)


def test_cap_is_configurable(monkeypatch):
    monkeypatch.setenv(CAP_ENV, "4")
    new_basis_state(4, 0)
    with pytest.raises(ResourceError):
        new_basis_state(5, 0)


def test_from_amplitudes_normalizes():
    s = from_amplitudes([3, 4j])
    np.testing.assert_allclose(s.amplitudes, [0.6, 0.8j])
    with pytest.raises(DomainError):
        from_amplitudes([1, 2, 3])


def test_json_round_trip():
    s = random_state(3, 0)
    back = StateVector.from_json(s.to_json())
    assert back.n_qubits == 3
    np.testing.assert_array_equal(back.amplitudes, s.amplitudes)


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_marginals_are_distributions(n, seed):
    s = random_state(n, seed)
    rng = np.random.default_rng(seed)
    qubits = list(rng.permutation(n)[: rng.integers(1, n + 1)])
    m = marginal_probabilities(s, qubits)
    assert m.shape == (1 << len(qubits),)
    assert m.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(m >= 0)


def test_marginal_bit_order_follows_listed_qubits():
    s = new_basis_state(3, 0b001)  # qubit 0 set
    m = marginal_probabilities(s, [2, 0])
    assert m[0b10] == pytest.approx(1.0)


def test_collapse_projects_and_renormalizes():
    s = from_amplitudes([1, 1, 1, 1])
    rec = collapse(s, [0], 1)
    assert rec.probability == pytest.approx(0.5)
    np.testing.assert_allclose(np.abs(rec.post_state.amplitudes) ** 2, [0, 0.5, 0, 0.5])
    with pytest.raises(DomainError):
        collapse(new_basis_state(2, 0), [0], 1)


def test_measurement_is_seed_deterministic():
    s = random_state(5, 1)
    a = [measure_all(s, seed).outcome for seed in range(20)]
    b = [measure_all(s, seed).outcome for seed in range(20)]
    assert a == b


def test_measure_subset_leaves_other_qubits_coherent():
    s = from_amplitudes([1, 0, 0, 1])  # Bell pair on qubits 0 and 1
    rec = measure_subset(s, [0], 7)
    assert rec.bits == [rec.outcome]
    assert rec.post_state.amplitudes[3 * rec.outcome] == pytest.approx(1.0)


def test_sampling_frequencies_match_born_rule():
    s = random_state(3, 5)
    p = probabilities(s)
    rng = np.random.default_rng(9)
    counts = np.bincount([measure_all(s, rng).outcome for _ in range(20_000)], minlength=8)
    sigma = np.sqrt(p * (1 - p) / 20_000)
    assert np.all(np.abs(counts / 20_000 - p) <= 5 * sigma + 1e-12)


def test_zero_probability_outcomes_never_sampled():
    s = from_amplitudes([0, 1, 0, 1])
    outs = {measure_all(s, seed).outcome for seed in range(200)}
    assert outs == {1, 3}


def test_inner_product():
    s = random_state(2, 3)
    assert inner_product(s, s) == pytest.approx(1.0)
    assert inner_product(new_basis_state(2, 0), new_basis_state(2, 1)) == 0
