"""
Exhaustive per-bit outcome table
================================

Every secret-bit pair, every choice of carrier, every measurement branch,
with exact probabilities.  The i*sigma_y encoding gives 16 rows, all with
C = x XOR y.  Plain sigma_x does not.
"""

# %%
from qpce.analysis import correctness_scan, render_table, table1_rows

scan = correctness_scan("AW", "i_sigma_y")
print(render_table(table1_rows(scan)))
print("cells summing to 1:", all(abs(t - 1) < 1e-10 for t in scan.cell_totals().values()))

# %%
bad = correctness_scan("AW", "sigma_x").mismatches()
print(f"\nsigma_x: {len(bad)} branches with C != x XOR y")
for row in sorted({(r.x, r.y, r.kind_a, r.kind_b) for r in bad}):
    print("  x=%d y=%d  Alice %-3s  Bob %-3s" % row)
