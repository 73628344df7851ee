import itertools
import json

import numpy as np
import pytest

from qpce.adversary import (AttackScenario, InterceptResend, derived_seed,
                            detection_probability, dishonest_participant_attack,
                            intercept_resend_experiment, tp_classical_attack,
                            tp_equality_experiment)
from qpce.analysis import leak_bound
from qpce.protocol import Photon, ProtocolConfig, Register, Transcript, run_protocol
from qpce.states import DECOY_BASIS, DECOY_KINDS, make_decoy


def hamming(a, b):
    return bin(a ^ b).count("1")


def intercept_error_oracle():
    """Exact per-decoy error: 4 kinds x 2 Eve bases x Eve's outcomes, by hand."""
    vec = {"zero": (1, 0), "one": (0, 1), "plus": (2 ** -0.5, 2 ** -0.5),
           "minus": (2 ** -0.5, -(2 ** -0.5))}
    eig = {"Z": [vec["zero"], vec["one"]], "X": [vec["plus"], vec["minus"]]}
    total = 0.0
    for kind, eve in itertools.product(DECOY_KINDS, ("Z", "X")):
        check_basis, expected = DECOY_BASIS[kind]
        for resent in eig[eve]:
            p_eve = np.dot(vec[kind], resent) ** 2
            p_wrong = np.dot(resent, eig[check_basis][1 - expected]) ** 2
            total += 0.125 * p_eve * p_wrong
    return total


def test_oracle_is_one_quarter():
    assert intercept_error_oracle() == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("kind", DECOY_KINDS)
def test_intercept_single_decoy_statistics(kind):
    rng = np.random.default_rng(DECOY_KINDS.index(kind))
    basis, expected = DECOY_BASIS[kind]
    trials, errors = 4000, 0
    for _ in range(trials):
        photon = Photon(Register(make_decoy(kind)), 0)
        InterceptResend("A->B", rng)([photon])
        errors += photon.measure(basis, rng) != expected
    # per kind: Eve's wrong basis half the time, then a coin flip
    assert abs(errors / trials - 0.25) <= 3 * np.sqrt(0.25 * 0.75 / trials)


def test_eve_in_matching_basis_is_invisible():
    rng = np.random.default_rng(0)
    for _ in range(50):
        photon = Photon(Register(make_decoy("zero")), 0)
        assert photon.measure("Z", rng) == 0
        assert photon.measure("Z", rng) == 0


def test_detection_probability():
    assert detection_probability(0) == 0
    assert detection_probability(16) == pytest.approx(0.98997, abs=1e-5)
    with pytest.raises(ValueError):
        detection_probability(-1)


def test_scenario_validation():
    with pytest.raises(ValueError):
        AttackScenario("photon_splitting")
    with pytest.raises(ValueError):
        AttackScenario("intercept_resend", directions=("A->C",))
    one_way = AttackScenario("intercept_resend", directions=("A->B",))
    rng = np.random.default_rng(0)
    assert one_way.channel_transform("B->A", rng) is None
    assert isinstance(one_way.channel_transform("A->B", rng), InterceptResend)


def test_intercept_resend_run_aborts_with_many_decoys():
    cfg = ProtocolConfig(n_bits=2, decoy_count=40, seed=3)
    run = run_protocol(cfg, 1, 2, adversary=AttackScenario("intercept_resend"))
    assert run.report.aborted
    assert run.report.r is None
    assert any(e["kind"] == "abort" for e in run.transcript.events)


def test_intercept_resend_experiment_small():
    cfg = ProtocolConfig(n_bits=2, decoy_count=4)
    out = intercept_resend_experiment(cfg, 400, seed=1)
    p = detection_probability(4)
    sigma = np.sqrt(p * (1 - p) / 400)
    for freq in out.details["detection_frequency"].values():
        assert abs(freq - p) <= 3 * sigma
    assert abs(out.per_decoy_error_rate - 0.25) <= 3 * np.sqrt(0.25 * 0.75 / (400 * 8))
    assert out.details["closed_form_per_direction"] == pytest.approx(p)


def test_one_direction_only():
    cfg = ProtocolConfig(n_bits=2, decoy_count=8)
    out = intercept_resend_experiment(cfg, 100, seed=2, directions=("A->B",))
    assert set(out.details["detection_frequency"]) == {"A->B"}


def test_derived_seed_is_stable_and_distinct():
    assert derived_seed(0, 1) == derived_seed(0, 1)
    assert len({derived_seed(0, i) for i in range(100)}) == 100


# TP attack -------------------------------------------------------------------------

@pytest.mark.parametrize("variant", ["LWJ11", "LWG12"])
def test_tp_recovers_r_on_plaintext_variants(variant):
    rng = np.random.default_rng(4)
    for seed in range(25):
        x, y = (int(v) for v in rng.integers(0, 256, 2))
        run = run_protocol(ProtocolConfig(variant=variant, seed=seed), x, y)
        out = tp_classical_attack(run.transcript, variant, run.tp_view, honest_r=run.report.r)
        assert out.recovered_R == run.report.r == hamming(x, y)
        assert out.details["method1_R"] == out.details["method2_R"]
        assert out.guess_success_rate == 1.0


def test_tp_gets_nothing_from_aw():
    for seed in range(25):
        run = run_protocol(ProtocolConfig(seed=seed), 0x3C, 0x3D)
        out = tp_classical_attack(run.transcript, "AW", run.tp_view, np.random.default_rng(seed))
        assert out.recovered_R is None
        assert set(out.details["encrypted_labels"]) == {"C'_A", "C'_B", "S_q"}


def test_tp_attack_on_round_tripped_transcript():
    run = run_protocol(ProtocolConfig(variant="LWJ11", seed=1), 9, 12)
    t = Transcript.from_dict(json.loads(json.dumps(run.transcript.to_dict())))
    assert tp_classical_attack(t, "LWJ11", run.tp_view).recovered_R == 2


def test_tp_equality_experiment_chance_on_aw():
    out = tp_equality_experiment(ProtocolConfig(n_bits=8), 300, seed=5)
    assert out.details["recovered_runs"] == 0
    assert abs(out.guess_success_rate - 0.5) <= 3 * out.details["guess_sigma"]
    side = out.details["side_channel"]
    assert side["r_prime_zero_runs_equal"] == side["r_prime_zero_runs"]
    assert side["p_r_prime_zero_given_equal"] == pytest.approx(2 ** -8)


def test_tp_equality_experiment_lwj11_recovers():
    out = tp_equality_experiment(ProtocolConfig(variant="LWJ11", n_bits=6), 60, seed=2)
    assert out.details["recovered_runs"] == out.details["recovered_correct"] == 60
    assert out.guess_success_rate == 1.0


# dishonest participant ---------------------------------------------------------------

@pytest.mark.parametrize("resource,expected", [("W1", 0.5), ("symmetric_W", 2 / 3), ("EPR", 0.5)])
def test_dishonest_participant(resource, expected):
    out = dishonest_participant_attack(resource, "i_sigma_y", 30_000, np.random.default_rng(3))
    d = out.details
    assert d["helstrom_bound"] == pytest.approx(expected, abs=1e-12)
    assert d["within_3_sigma"]
    assert out.guess_success_rate <= d["helstrom_bound"] + 3 * d["sigma"]


def test_dishonest_participant_family_bound():
    # each family member shares the same bound
    assert leak_bound("W1p", "i_sigma_y") == pytest.approx(leak_bound("W1", "i_sigma_y"))
    assert leak_bound("phi2", "i_sigma_y") == pytest.approx(leak_bound("symmetric_W", "i_sigma_y"))


def test_dishonest_participant_errors():
    with pytest.raises(ValueError):
        dishonest_participant_attack("GHZ", "i_sigma_y", 10, np.random.default_rng(0))
    with pytest.raises(ValueError):
        dishonest_participant_attack("W1", "i_sigma_y", 0, np.random.default_rng(0))


def test_outcome_serializes():
    out = dishonest_participant_attack("W1", "sigma_x", 100, np.random.default_rng(0))
    d = json.loads(json.dumps(out.to_dict()))
    assert {"detected", "per_decoy_error_rate", "recovered_R", "guess_success_rate", "trials"} <= set(d)
