"""
How wide does the expansion need to be?
=======================================

Train one model per harmonic count and check how many calibration points
fall inside the tolerance band. The tolerance itself is a choice, so the
second table shows how the picture moves with it.
"""
# %%
from lvdt_flann import ExpansionSpec, forward_batch, linearity, load_dataset, train_lms

data = load_dataset("lvdt_table1")
tolerances = [0.25, 0.5, 0.75, 1.0, 2.0]
results = {}
for k in (5, 12, 25, 30):
    model, trace = train_lms(data, ExpansionSpec(k))
    results[2 * k + 1] = (trace, forward_batch(data, model))

print(" P  epochs  conv   linear%")
for p, (trace, pairs) in results.items():
    pct = linearity(pairs, 0.75).percent_linear
    print(f"{p:2d}  {trace.epochs_run:6d}  {str(trace.converged):5s}  {pct:7.2f}")

# %%
print("tol  " + "  ".join(f"P={p:<4d}" for p in results))
for t in tolerances:
    row = [linearity(pairs, t).percent_linear for _, pairs in results.values()]
    print(f"{t:4.2f} " + "  ".join(f"{r:6.2f}" for r in row))

# %%
# The same sweep from the command line, with a JSON report:
#
#   lvdt-flann sweep --harmonics 5,12,25,30 --report sweep.json
