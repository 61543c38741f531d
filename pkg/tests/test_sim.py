from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from qsa.adders import build_phi_add_const, build_qft, in_fourier
from qsa.classical import continued_fraction_period
from qsa.core import Angle, Circuit, CircuitBuilder, classic_p, classic_x, measure
from qsa.errors import EntanglementViolation, TooWide
from qsa.sim import dense_run, structured_run
from qsa.sim.shor import (
    SparseBranchState,
    correction_angle,
    factor,
    functional_run_shor_step,
    measure_phase,
    run_shor,
)


def test_dense_h():
    c = CircuitBuilder(1)
    c.h(0)
    assert np.allclose(dense_run(c.freeze(), 0).amplitudes, [2**-0.5, 2**-0.5])


def test_dense_cap(monkeypatch):
    monkeypatch.setenv("QSA_DENSE_CAP", "3")
    with pytest.raises(TooWide):
        dense_run(build_qft(4), 0)


def test_dense_measure_and_classical_control():
    b = CircuitBuilder(2)
    b.h(0)
    b.add(measure(0, 0))
    b.add(classic_x(0, 1))
    b.add(classic_p(0, 1, Angle(1, 2)))
    c = b.freeze()
    seen = set()
    for seed in range(20):
        st = dense_run(c, 0, np.random.default_rng(seed))
        bit = st.record[0]
        seen.add(bit)
        idx = 3 if bit else 0
        assert abs(st.amplitudes[idx]) == pytest.approx(1.0)
        if bit:
            assert np.angle(st.amplitudes[3]) == pytest.approx(np.pi / 2)
    assert seen == {0, 1}


@pytest.mark.parametrize("w", [1, 3, 5])
def test_norm_preserved(w):
    c = in_fourier(build_phi_add_const(w, 3), range(w))
    for b in range(1 << w):
        assert dense_run(c, b).norm() == pytest.approx(1.0, abs=1e-10)


def test_structured_adder_wide():
    c = in_fourier(build_phi_add_const(8, 3), range(8))
    assert structured_run(c, 200)[0] == 203


def test_structured_state_matches_dense_mid_circuit():
    # after the QFT the register is a product of Fourier qubits
    c = build_qft(5)
    for b in range(32):
        _, st = structured_run(c, b)
        assert np.allclose(st.to_dense(), dense_run(c, b).amplitudes, atol=1e-12)


def test_structured_phase_x_global_phase():
    b = CircuitBuilder(1)
    b.h(0)
    b.p(0, Angle(1, 3))
    b.x(0)
    c = b.freeze()
    _, st = structured_run(c, 1)
    assert np.allclose(st.to_dense(), dense_run(c, 1).amplitudes, atol=1e-12)


def test_entanglement_violation_on_fourier_control():
    b = CircuitBuilder(2)
    b.h(0)
    b.cx(0, 1)
    with pytest.raises(EntanglementViolation):
        structured_run(b.freeze(), 0)


def test_entanglement_violation_on_bad_h():
    # an approximate round trip leaves a phase the H cannot resolve
    c = Circuit(3, build_qft(3).gates + build_qft(3, 1, inverse=True).gates)
    with pytest.raises(EntanglementViolation):
        structured_run(c, 5)


def test_shor_step_maps_branch():
    rng = np.random.default_rng(0)
    bit, st = functional_run_shor_step(SparseBranchState({1: 1.0}), 7, 15, Angle.zero(), rng)
    # outcome m leaves (|1> + (-1)^m |7>) / sqrt(2)
    assert set(st.amplitudes) == {1, 7}
    assert st.total_probability() == pytest.approx(1.0)


def test_shor_step_uniform_statistics():
    rng = np.random.default_rng(1)
    bits = [functional_run_shor_step(SparseBranchState({1: 1.0}), 7, 15, Angle.zero(), rng)[0] for _ in range(2000)]
    assert abs(np.mean(bits) - 0.5) < 0.05


def test_shor_step_identity_constant_is_deterministic():
    rng = np.random.default_rng(2)
    bits = {functional_run_shor_step(SparseBranchState({4: 1.0}), 1, 15, Angle.zero(), rng)[0] for _ in range(50)}
    assert bits == {0}


def test_correction_angle():
    assert correction_angle([]) == Angle(0, 1)
    assert correction_angle([1, 0, 1]) == Angle(-5, 4)


def test_phase_histogram_n15():
    rng = np.random.default_rng(7)
    hist = Counter(measure_phase(7, 15, 4, rng) for _ in range(2000))
    assert set(hist) <= {0, 64, 128, 192}


def test_run_shor_and_factor():
    rng = np.random.default_rng(1)
    out = run_shor(15, 7, rng)
    assert out.measured_bits % 64 == 0
    assert run_shor(15, 5, rng).factors == (3, 5)
    assert factor(21, np.random.default_rng(3))[0] == (3, 7)
    assert continued_fraction_period(64, 8, 15) == 4


def test_factor_shortcuts():
    assert factor(27, np.random.default_rng(0))[0] == (3, 9)
    with pytest.raises(ValueError):
        factor(13, np.random.default_rng(0))
