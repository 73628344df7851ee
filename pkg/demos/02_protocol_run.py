"""
One comparison, end to end
==========================

Alice and Bob compare two 8-bit secrets through the TP.  The run keeps a
full transcript, so we can look at what every party saw.
"""

# %%
from qpce.protocol import ProtocolConfig, run_protocol

config = ProtocolConfig(variant="AW", n_bits=8, mix_length=8, decoy_count=8, seed=7)
run = run_protocol(config, x=0b10110101, y=0b10010101)
report = run.report
print("verdict:", report.verdict, " R =", report.r, " R' =", report.r_prime)
print("decoy error rates:", report.error_rates)

# %%
# per-bit bookkeeping mirrors the outcome table columns
for b in report.per_bit[:4]:
    print(b.index, b.x, b.y, b.kind_a, b.kind_b, b.m_a1, b.m_b2, b.m_b1, b.m_a2, "-> C =", b.c)

# %%
# which classical messages went out in the clear
for m in run.transcript.classical:
    print(f"{m.seq:3d} {m.sender:>5s} -> {m.receiver:<5s} {m.label:28s} "
          f"{'encrypted' if m.encrypted else 'plain':9s} {m.payload.size} bits")

# %%
# the same secrets under the older variants leave C'_A, C'_B and S_q readable
for variant in ("LWJ11", "LWG12"):
    r = run_protocol(ProtocolConfig(variant=variant, seed=7), 0b10110101, 0b10010101)
    print(variant, "plaintext labels:", sorted(r.transcript.labels(encrypted=False)))
