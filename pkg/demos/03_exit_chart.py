"""Walk-through: EXIT analysis of equalizer/decoder convergence.

EXIT charts explain *why* turbo iterations help: the equalizer maps
a-priori mutual information I_i into extrinsic information I_o, the
decoder maps it back, and iteration bounces between the two curves. The
wider the tunnel between equalizer and decoder curves, the earlier the
waterfall. This demo measures both transfer curves at a desk scale and
prints them as text; pipe the CSV into any plotting tool for the
familiar staircase picture.

Run:  python3 demos/03_exit_chart.py
"""

import numpy as np

from epturbo import build_ldpc, exit_decoder, exit_equalizer, j_function, j_inverse

# ---------------------------------------------------------------------------
# 1. The J-function
#
# Consistent Gaussian LLRs L ~ N(+-sigma^2/2, sigma^2) carry
# I = J(sigma) bits; J and its inverse convert between the I_i grid and
# the a-priori LLR noise level.

print("J-function samples:")
for sigma in (0.5, 1.0, 2.0, 4.0):
    i = float(j_function(sigma))
    print(f"  J({sigma:.1f}) = {i:.4f}   J^-1({i:.4f}) = {j_inverse(i):.4f}")

# ---------------------------------------------------------------------------
# 2. Equalizer transfer curves at 9 dB on the Proakis-C channel
#
# 2e4 symbols per point keeps this quick; the acceptance checks use 1e5.

GRID = [0.0, 0.25, 0.5, 0.75, 0.95]
curves = {}
for eq in ("lmmse-block", "nubep", "ep-f"):
    recs = exit_equalizer(eq, "proakis-c", ebn0_db=9.0, i_in_grid=GRID,
                          n_symbols=20_000, seed=0)
    curves[eq] = [r.i_out for r in recs]

print("\nequalizer I_o over I_i (BPSK, proakis-c, 9 dB):")
print("  I_i      " + "  ".join(f"{i:>6.2f}" for i in GRID))
for eq, io in curves.items():
    print(f"  {eq:12s}" + "  ".join(f"{v:>6.3f}" for v in io))
print("\nAt I_i = 0 the EP equalizers already start "
      f"{curves['nubep'][0] - curves['lmmse-block'][0]:+.3f} bits above "
      "LMMSE — the 'more accurate first approximation' that widens the "
      "turbo tunnel.")

# ---------------------------------------------------------------------------
# 3. Decoder transfer curve
#
# The (3,6) LDPC BP decoder maps a-priori information on the coded bits
# to extrinsic information; where it clears the equalizer curve the
# iteration converges.

code = build_ldpc(1024, seed=0)
dec = exit_decoder(code, GRID, n_frames=3, seed=0)
print("\ndecoder I_o over I_i:")
print("  " + "  ".join(f"{r.i_in:.2f}->{r.i_out:.3f}" for r in dec))

# The decoder curve is steep: once the equalizer delivers ~0.6 bits, the
# decoder returns nearly 1.0 and the iteration snaps shut. The EP head
# start at I_i = 0 is what lets that happen ~2 dB earlier than LMMSE.
head_start = curves["nubep"][0]
needed = float(np.interp(0.99, [r.i_out for r in dec], GRID))
print(f"\nnuBEP starts at I_o = {head_start:.3f}; the decoder saturates "
      f"once its input reaches about {needed:.2f} bits.")
