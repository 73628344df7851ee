"""
Carrier states and the |W_1> preparation circuit
=================================================

Builds every carrier used by the comparison protocols, checks a few
identities between them, and verifies the four-step circuit for |W_1>.
"""

# %%
import numpy as np

from qpce.qsim import H, apply_gate, fidelity, reduced_state
from qpce.states import (make_epr, make_symmetric_w, make_w1, make_w1_prime,
                         elementary_steps, replay, stabilizer_check, w1_circuit)

w1 = make_w1()
print("|W_1>  =", w1)
print("|W_1'> =", make_w1_prime())

# H on the third particle swaps the two asymmetric carriers
print("H_3|W_1> == |W_1'> :", apply_gate(w1, H, 2).allclose(make_w1_prime()))

# %%
# the particle that travels: maximally mixed for W_1, biased for the symmetric W state
for name, state, travel in [("W_1", w1, 2), ("phi_1", make_symmetric_w("phi1"), 2),
                            ("EPR", make_epr(), 1)]:
    rho = reduced_state(state, [travel])
    print(f"{name:6s} travelling-particle diagonal:", np.real(np.diag(rho.entries)).round(4))

# %%
circuit = w1_circuit()
for i, step in enumerate(circuit.steps, 1):
    print(f"{i}. {step.describe()}")
print("fidelity to |W_1>:", fidelity(replay(circuit), w1))
print("elementary gates:", ", ".join(s.describe() for s in elementary_steps(circuit)))

# %%
# NOT, CNOT and H alone only ever reach equal-magnitude states
check = stabilizer_check()
print(f"{check['reachable_states']} reachable states, W_1 reachable: {check['w1_reachable']}, "
      f"closest fidelity {check['best_fidelity_to_w1']:.4f}")
