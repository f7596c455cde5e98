import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from shorsim.config import DomainError, ResourceError
from shorsim.gates import run_network
from shorsim.qft import (
    analyze_spectrum,
    bit_reversal_indices,
    bit_reversal_permutation,
    build_qft_network,
    dft_matrix_apply,
    estimate_period_from_peak,
    neglect_threshold,
    periodic_state,
    read_spectrum_csv,
)
from shorsim.register import from_amplitudes, new_basis_state, probabilities


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    return from_amplitudes(rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n))


@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_dense_dft_matches_fft(m, seed):
    s = random_state(m, seed)
    np.testing.assert_allclose(dft_matrix_apply(s, block=7).amplitudes, oracles.dft(s.amplitudes), atol=1e-12)


@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_network_matches_fft_on_random_states(m, seed):
    s = random_state(m, seed)
    _, net = build_qft_network(m, include_bit_reversal=True)
    np.testing.assert_allclose(run_network(s, net).amplitudes, oracles.dft(s.amplitudes), atol=1e-10)


def test_raw_network_output_is_bit_reversed():
    s = random_state(5, 1)
    _, raw = build_qft_network(5)
    out = bit_reversal_permutation(run_network(s, raw))
    np.testing.assert_allclose(out.amplitudes, oracles.dft(s.amplitudes), atol=1e-12)


def test_bit_reversal_indices():
    assert bit_reversal_indices(3).tolist() == [0, 4, 2, 6, 1, 5, 3, 7]


def test_network_order_and_phases():
    _, net = build_qft_network(3)
    desc = [(g.kind, g.targets, g.phase) for g in net]
    assert desc == [
        ("A", (2,), None),
        ("B", (2, 1), math.pi / 2),
        ("A", (1,), None),
        ("B", (2, 0), math.pi / 4),
        ("B", (1, 0), math.pi / 2),
        ("A", (0,), None),
    ]


@pytest.mark.parametrize("m", [1, 2, 3, 4, 8, 12, 16, 20, 32])
def test_approximate_gate_counts(m):
    plan, net = build_qft_network(m, approximate=True)
    d = neglect_threshold(m)
    expected = m + sum(1 for t in range(m) for j in range(t + 1, m) if j - t <= d)
    assert plan.gate_count == len(net) == expected
    assert all(g.targets[0] - g.targets[1] <= d for g in net if g.kind == "B")


def test_approximate_network_is_close_to_exact():
    s = random_state(10, 3)
    exact = run_network(s, build_qft_network(10)[1]).amplitudes
    approx = run_network(s, build_qft_network(10, approximate=True)[1]).amplitudes
    assert abs(np.vdot(exact, approx)) > 0.95


def test_dense_dft_cap():
    with pytest.raises(ResourceError):
        dft_matrix_apply(new_basis_state(15, 0))


def test_periodic_state():
    s = periodic_state(4, 3, 2)
    assert np.flatnonzero(s.amplitudes).tolist() == [2, 5, 8, 11, 14]
    assert s.norm() == pytest.approx(1.0)
    with pytest.raises(DomainError):
        periodic_state(4, 3, 3)


def test_spectrum_csv_round_trip():
    s = run_network(periodic_state(6, 5, 1), build_qft_network(6, include_bit_reversal=True)[1])
    spec = analyze_spectrum(s)
    back = read_spectrum_csv(spec.to_csv())
    np.testing.assert_allclose(back, spec.probs, rtol=1e-11, atol=1e-16)


@pytest.mark.parametrize("r", [3, 5, 6, 7, 9, 11, 13])
def test_non_divisor_peaks_sit_near_multiples(r):
    m = 9
    p = probabilities(run_network(periodic_state(m, r, 0), build_qft_network(m, include_bit_reversal=True)[1]))
    for k in range(r):
        y = round(k * 512 / r) % 512
        window = [(y + d) % 512 for d in (-1, 0, 1)]
        assert p[window].sum() > 0.4 / r


@pytest.mark.parametrize("N", [15, 21, 33, 35])
def test_period_estimate_matches_brute_force_oracle(N):
    m = 2 * N.bit_length()
    Q = 1 << m
    for y in range(Q):
        assert estimate_period_from_peak(y, m, N) == oracles.best_denominator(y, Q, N)
