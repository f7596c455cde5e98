import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shorsim.config import DomainError, ResourceError
from shorsim.gates import GatePlacement, run_network
from shorsim.noise import (
    DensityMatrix,
    NoiseModel,
    apply_gate,
    apply_unitary,
    dephase,
    expected_repetitions,
    from_pure,
    max_factorable_size,
    merit_table_json,
    figure_of_merit_table,
    noise_sweep,
    noisy_dft_run,
    predicted_success_prob,
    success_model,
    sweep_csv,
)
from shorsim.qft import build_qft_network
from shorsim.register import from_amplitudes


def random_rho(n, seed):
    rng = np.random.default_rng(seed)
    s = from_amplitudes(rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n))
    return from_pure(s), s


@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.floats(0, 5), st.floats(0, 5))
@settings(max_examples=30, deadline=None)
def test_dephasing_is_a_semigroup(n, seed, t1, t2):
    rho, _ = random_rho(n, seed)
    model = NoiseModel(0.3, 1.0)
    twice = dephase(dephase(rho, model, t1), model, t2)
    once = dephase(rho, model, t1 + t2)
    np.testing.assert_allclose(twice.entries, once.entries, atol=1e-12)


@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.floats(0, 50))
@settings(max_examples=30, deadline=None)
def test_dephasing_preserves_trace_and_hermiticity(n, seed, t):
    rho, _ = random_rho(n, seed)
    out = dephase(rho, NoiseModel(0.2, 1.0), t)
    assert out.trace() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(out.entries, out.entries.conj().T, atol=1e-14)
    np.testing.assert_allclose(out.diagonal(), rho.diagonal(), atol=1e-14)
    assert out.purity() <= 1 + 1e-12
    assert np.linalg.eigvalsh(out.entries).min() > -1e-12


def test_dephasing_damping_factor():
    rho, _ = random_rho(3, 1)
    out = dephase(rho, NoiseModel(0.1, 1.0), 2.0)
    f = math.exp(-0.1 * 3 * 2.0)
    assert out.entries[1, 5] == pytest.approx(f * rho.entries[1, 5])
    full = dephase(rho, NoiseModel(math.inf, 1.0), 1.0)
    np.testing.assert_allclose(full.entries, np.diag(rho.diagonal()))


@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_unitary_evolution_matches_pure_states(n, seed):
    rho, s = random_rho(n, seed)
    _, net = build_qft_network(n, include_bit_reversal=True)
    net.append(GatePlacement("CNOT", (0, n - 1)))
    psi = run_network(s, net).amplitudes
    np.testing.assert_allclose(apply_unitary(rho, net).entries, np.outer(psi, psi.conj()), atol=1e-12)


def test_apply_gate_rejects_bad_qubit():
    rho, _ = random_rho(2, 0)
    with pytest.raises(DomainError):
        apply_gate(rho, GatePlacement("A", (2,)))
    with pytest.raises(DomainError):
        DensityMatrix(2, np.eye(3))


@pytest.mark.parametrize("width,r", [(4, 2), (5, 4), (6, 8), (7, 4), (8, 16)])
@pytest.mark.parametrize("gt", [1e-4, 1e-2])
def test_noisy_run_matches_closed_form(width, r, gt):
    model = NoiseModel(gt, 1.0)
    _, p = noisy_dft_run(width, r, r - 1, model)
    assert p == pytest.approx(predicted_success_prob(width, r, model), rel=1e-10)


def test_success_decreases_with_gamma():
    probs = [noisy_dft_run(6, 4, 1, NoiseModel(g, 1.0))[1] for g in (0, 1e-3, 1e-2, 1e-1)]
    assert probs[0] == pytest.approx(1.0)
    assert all(a > b for a, b in zip(probs, probs[1:]))


def test_noisy_run_limits():
    with pytest.raises(ResourceError):
        noisy_dft_run(13, 4, 0, NoiseModel(0.0, 1.0))
    with pytest.raises(DomainError):
        noisy_dft_run(6, 3, 0, NoiseModel(0.0, 1.0))
    with pytest.raises(DomainError):
        NoiseModel(-1.0, 1.0)


def test_analytic_models():
    model = NoiseModel(1e-4, 1e-3)
    assert success_model(5, model, 1, 3) == pytest.approx(math.exp(-1e-7 * 625))
    assert expected_repetitions(5, model, 1, 3) == pytest.approx(math.exp(1e-7 * 625))
    L = max_factorable_size(model, 1, 3)
    assert success_model(1, NoiseModel(1.0, 1.0), 1, 3) == pytest.approx(math.exp(-1))
    assert model.gamma * model.t_elem * L**4 == pytest.approx(1.0)
    with pytest.raises(DomainError):
        max_factorable_size(NoiseModel(0.0, 1.0), 1, 3)


def test_merit_json_and_sweep_csv():
    import json

    rows = json.loads(merit_table_json(figure_of_merit_table()))
    assert len(rows) == 9 and rows[3]["M"] == 1e13 and rows[3]["speculative"]
    text = sweep_csv(noise_sweep([4, 6], [0.0, 1e-2], 1.0))
    lines = text.strip().split("\n")
    assert lines[0] == "width,gamma,success_prob" and len(lines) == 5
    assert lines[1] == "4,0,1"
