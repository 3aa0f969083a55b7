"""
Linearizing an LVDT with a functional-link model
================================================

The bundled calibration table has 13 displacement/voltage pairs. Fitted with
a straight line, only two of them land within the tolerance band. A
trigonometric expansion trained with LMS fixes that.
"""
# %%
import numpy as np

from lvdt_flann import (DEFAULT_TOLERANCE_MM, ExpansionSpec, forward_batch, linearity,
                        load_dataset, raw_sensor_linearity, solve_least_squares, train_lms)
from lvdt_flann.training import training_residual

data = load_dataset("lvdt_table1")
for s in data:
    print(f"{s.displacement:6.1f} mm  {s.voltage:7.3f} V")

# %%
# Bare sensor: fit v = a*x + b and invert it.
print("raw:", raw_sensor_linearity(data, DEFAULT_TOLERANCE_MM))

# %%
# 25 harmonics -> 51 basis terms, trained from unit weights.
model, trace = train_lms(data, ExpansionSpec(25))
print(f"{trace.epochs_run} epochs, final error {trace.final_mse:.3e}, converged={trace.converged}")
print("model:", linearity(forward_batch(data, model), DEFAULT_TOLERANCE_MM))

# the error curve flattens out well before the epoch budget
for k in (0, 9, 29, trace.epochs_run - 1):
    print(f"epoch {k + 1:3d}: {trace.mse_per_epoch[k]:.3e}")

# %%
# Cross-check against the closed form. With 51 terms and 13 samples the
# system is underdetermined, so both routes fit exactly but land on
# different weight vectors.
ls = solve_least_squares(data, ExpansionSpec(25))
print("LS residual:", training_residual(ls, data))
print("|w_lms - w_ls| =", np.linalg.norm(model.weights - ls.weights))

# %%
# Between the calibration points the model is free to wiggle.
for v in np.linspace(-5, 5, 11):
    print(f"{v:5.1f} V -> {float(model(v)):8.3f} mm")
