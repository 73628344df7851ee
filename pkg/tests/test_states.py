import json
import math

import numpy as np
import pytest

from qpce.qsim import H, StateVector, apply_gate, fidelity, outcome_distribution, reduced_state
from qpce.states import (DECOY_KINDS, CircuitDescription, CircuitStep, WStateParams,
                         clifford_reachable, elementary_steps, make_decoy, make_epr,
                         make_symmetric_w, make_w1, make_w1_prime, make_wn, replay,
                         stabilizer_check, w1_circuit)

S2 = math.sqrt(2)


def amps(**terms):
    v = np.zeros(8, dtype=complex)
    for label, a in terms.items():
        v[int(label[1:], 2)] = a
    return v


def test_w1_closed_form():
    assert np.allclose(make_wn(WStateParams(1, 0, 0)).amplitudes,
                       amps(k100=0.5, k010=0.5, k001=S2 / 2), atol=1e-12)
    assert make_w1().allclose(make_wn())


def test_wn_with_n_zero_drops_middle_term():
    assert np.allclose(make_wn(WStateParams(0, 0, 0)).amplitudes,
                       amps(k100=1 / S2, k001=1 / S2), atol=1e-12)


def test_wn_phase_gamma_pi():
    assert np.allclose(make_wn(WStateParams(1, math.pi, 0)).amplitudes,
                       amps(k100=0.5, k010=-0.5, k001=S2 / 2), atol=1e-12)


@pytest.mark.parametrize("n", [0.0, 0.5, 1.0, 3.0, 100.0])
def test_wn_normalized(n):
    state = make_wn(WStateParams(n, 0.3, -1.1))
    assert abs(np.linalg.norm(state.amplitudes) - 1) < 1e-12


@pytest.mark.parametrize("bad", [dict(n=-1), dict(n=float("nan")), dict(gamma=float("inf"))])
def test_wn_params_rejected(bad):
    with pytest.raises(ValueError):
        WStateParams(**bad)


def test_w1_prime_is_h_on_third():
    assert apply_gate(make_w1(), H, 2).allclose(make_w1_prime())
    assert apply_gate(make_w1_prime(), H, 2).allclose(make_w1())


def test_w1_and_w1_prime_are_orthogonal():
    # 1/(4 sqrt2) + 1/(4 sqrt2) - 1/(2 sqrt2) = 0
    assert fidelity(make_w1(), make_w1_prime()) == pytest.approx(0, abs=1e-12)


def test_symmetric_w_marginal_and_rotation():
    phi1 = make_symmetric_w("phi1")
    assert np.allclose(reduced_state(phi1, [2]).entries, np.diag([2 / 3, 1 / 3]), atol=1e-12)
    assert apply_gate(phi1, H, 2).allclose(make_symmetric_w("phi2"))
    with pytest.raises(ValueError):
        make_symmetric_w("phi3")


def test_symmetric_w_overlap_with_w1():
    # (1/2 + 1/2 + 1) / sqrt3 squared
    expected = ((0.5 + 0.5 + S2 / 2) / math.sqrt(3)) ** 2
    assert fidelity(make_symmetric_w("phi1"), make_w1()) == pytest.approx(expected, abs=1e-12)


def test_epr():
    e = make_epr()
    assert np.allclose(e.amplitudes, [0, 1 / S2, 1 / S2, 0])
    assert np.allclose(reduced_state(e, [0]).entries, np.eye(2) / 2, atol=1e-12)
    assert np.allclose(reduced_state(e, [1]).entries, np.eye(2) / 2, atol=1e-12)
    dist = outcome_distribution(e, [0, 1])
    assert dist[0b00] == pytest.approx(0) and dist[0b11] == pytest.approx(0)


def test_decoys():
    assert np.allclose(make_decoy("plus").amplitudes, [1 / S2, 1 / S2])
    assert np.allclose(make_decoy("minus").amplitudes, [1 / S2, -1 / S2])
    assert np.allclose(outcome_distribution(make_decoy("zero"), [0]), [1, 0])
    assert np.allclose(outcome_distribution(make_decoy("one"), [0]), [0, 1])
    assert np.allclose(outcome_distribution(make_decoy("plus"), [0]), [0.5, 0.5])
    for k in DECOY_KINDS:
        assert make_decoy(k).num_qubits == 1
    with pytest.raises(ValueError):
        make_decoy("plusminus")


# circuit ------------------------------------------------------------------------

def test_circuit_replays_to_w1():
    assert fidelity(replay(w1_circuit()), make_w1()) >= 1 - 1e-12
    assert np.allclose(replay(w1_circuit()).amplitudes, make_w1().amplitudes, atol=1e-12)


def test_circuit_intermediate_after_two_steps():
    assert np.allclose(replay(w1_circuit(), upto=2).amplitudes,
                       amps(k000=0.5, k100=0.5, k001=1 / S2), atol=1e-12)


def test_circuit_shape():
    c = w1_circuit()
    assert len(c.steps) == 4
    assert [s.describe() for s in c.steps] == [
        "H(q3)", "anti-controlled-H(q3=0 -> q1)", "CNOT(q1 -> q2)", "anti-controlled-NOT(q3=0 -> q2)"]


def test_circuit_json_is_one_based():
    payload = w1_circuit().to_json()
    assert payload[0] == {"gate": "H", "control": None, "control_value": None, "target": 3}
    assert payload[1] == {"gate": "H", "control": 3, "control_value": 0, "target": 1}
    json.dumps(payload)


def test_elementary_form_is_equivalent():
    c = w1_circuit()
    elem = elementary_steps(c)
    assert len(elem) == 6
    assert all(s.control is None or s.control_value == 1 for s in elem)
    flat = CircuitDescription(3, elem)
    assert np.allclose(replay(flat).amplitudes, replay(c).amplitudes, atol=1e-12)


def test_circuit_validation():
    with pytest.raises(ValueError):
        CircuitDescription(3, (CircuitStep("H", target=3),))
    with pytest.raises(ValueError):
        CircuitDescription(3, (CircuitStep("T", target=0),))


def test_replay_from_custom_initial():
    c = CircuitDescription(1, (CircuitStep("H", target=0),))
    assert replay(c, initial=StateVector.basis("1")).allclose(make_decoy("minus"))


# Clifford reachability -----------------------------------------------------------

def test_clifford_search_excludes_w1():
    check = stabilizer_check()
    assert check["closed"]
    assert check["reachable_states"] == 240
    assert check["all_uniform_magnitude"]
    assert not check["w1_reachable"]
    assert len(check["w1_magnitudes"]) == 2
    assert check["best_fidelity_to_w1"] < 1 - 1e-3


def test_adding_phase_gate_gives_full_stabilizer_count():
    # 1080 is the number of 3-qubit stabilizer states
    result = clifford_reachable(3, ("X", "CNOT", "H", "S"))
    assert result.closed
    assert len(result.states) == 1080
    assert result.all_uniform_magnitude()
    assert result.best_fidelity(make_w1()) < 1 - 1e-3


def test_single_qubit_search():
    result = clifford_reachable(1, ("X", "H"))
    # |0>, |1>, |+>, |->
    assert len(result.states) == 4 and result.closed


def test_depth_limited_search_reports_not_closed():
    result = clifford_reachable(3, ("X", "CNOT", "H"), max_depth=1)
    assert not result.closed
    assert result.closure_depth == 1
