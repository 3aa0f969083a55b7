"""
Running the model in 18-bit floating point
==========================================

The hardware datapath keeps every value in an 18-bit float (1 sign bit,
6 exponent bits, 11 mantissa bits). Here the trained model goes through a
bit-accurate emulation of that datapath and is compared with float64.
"""
# %%
from lvdt_flann import (PipelineConfig, Q18, build_lookup, error_curve, forward_batch,
                        load_dataset, q18_add, q18_from_real, q18_mul, q18_to_real, train_lms,
                        ExpansionSpec)
from lvdt_flann.pipeline import REAL_ARITH, pipeline_batch, trace_record

# %%
# A few values in the format. Spacing near 1 is 2**-11.
for x in (1.0, 0.001, -5.185, 30.0, 1 / 5.276):
    q = q18_from_real(x)
    print(f"{x:>10.6f} -> {q.to_string()}  = {q18_to_real(q)!r}")

a, b = q18_from_real(1.0), q18_from_real(2.0 ** -12)
print("1 + 2**-12 =", q18_to_real(q18_add(a, b)), "(tie, rounds to even)")
print("0.1 * 0.1 =", q18_to_real(q18_mul(q18_from_real(0.1), q18_from_real(0.1))))

# %%
data = load_dataset("lvdt_table1")
model, _ = train_lms(data, ExpansionSpec(25))
ref = forward_batch(data, model)

cfg = PipelineConfig.from_model(model)
pairs, traces = pipeline_batch(data, cfg, build_lookup(data))
curve = error_curve(ref, pairs)
for (x, r), (_, p), (_, e) in zip(ref, pairs, curve.points):
    print(f"{x:6.1f} mm  float64 {r:8.3f}  q18 {p:8.3f}  err {e:+.4f}")
print(f"max interior error {curve.max_abs_interior_error:.4f} mm")

# %%
# Swapping in exact arithmetic gives back the float64 model, so all the
# error above comes from rounding.
real_pairs, _ = pipeline_batch(data, PipelineConfig.from_model(model, REAL_ARITH),
                               build_lookup(data, REAL_ARITH))
print("max |real pipeline - forward| =", max(abs(p[1] - r[1]) for p, r in zip(real_pairs, ref)))

# %%
# One golden-trace record, as written by `lvdt-flann pipeline --traces`.
rec = trace_record(traces[6])
print("input", rec["input_v"], "fetched", rec["fetched"], "normalized", rec["normalized"])
print("first lanes", rec["expanded"][:3])
print("output", rec["output"], "->", q18_to_real(Q18.from_string(rec["output_mm"])), "mm")
