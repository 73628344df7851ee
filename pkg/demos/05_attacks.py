"""
Attacks
=======

Intercept-resend on the quantum channel, and a curious TP reading the
classical channel.
"""

# %%
from qpce.adversary import (detection_probability, intercept_resend_experiment,
                            tp_classical_attack, tp_equality_experiment)
from qpce.protocol import ProtocolConfig, run_protocol

out = intercept_resend_experiment(ProtocolConfig(n_bits=2, decoy_count=16), runs=500, seed=1)
print("detection per direction:", out.details["detection_frequency"])
print("closed form:", round(detection_probability(16), 5))
print("per-decoy error rate:", round(out.per_decoy_error_rate, 4))

# %%
# LWJ11 sends the mix-up data in the clear: TP strips it two different ways
run = run_protocol(ProtocolConfig(variant="LWJ11", seed=3), 0x5A, 0x5B)
attack = tp_classical_attack(run.transcript, "LWJ11", run.tp_view)
print("honest R:", run.report.r, " TP's R:", attack.recovered_R,
      " (methods:", attack.details["method1_R"], attack.details["method2_R"], ")")

# %%
# the same TP against the encrypted variant is reduced to a coin flip
aw = tp_equality_experiment(ProtocolConfig(variant="AW"), runs=300, seed=0)
print("AW: recovered", aw.details["recovered_runs"], "times, equality-guess accuracy",
      round(aw.guess_success_rate, 3))
