"""
How much does one intercepted particle reveal?
==============================================

A dishonest Bob keeps Alice's travelling particle and guesses her bit.
The Helstrom bound caps his success; sampling shows he reaches it.
"""

# %%
import numpy as np

from qpce.analysis import leak_monte_carlo, r_prime_side_channel

rng = np.random.default_rng(0)
for resource in ("W1", "symmetric_W", "EPR"):
    rep = leak_monte_carlo(resource, "i_sigma_y", 100_000, rng)
    print(f"{resource:12s} bound {rep.bound:.4f}  sampled {rep.empirical:.4f} +- {3 * rep.sigma:.4f}")

# %%
# R' itself still says something about equality, since R <= R'
for n, l in [(8, 8), (8, 32), (32, 32)]:
    side = r_prime_side_channel(n, l)
    print(f"N={n:2d} L={l:2d}: P(R'=0 | equal) = {side['p_r_prime_zero_given_equal']:.2e}, "
          f"best guess from R' alone {side['bayes_accuracy']:.3f}")
