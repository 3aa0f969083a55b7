"""
Weight learning for the functional-link model.

``train_lms`` runs the per-sample LMS recurrence ``w <- w + eta * e * s``
starting from unity weights. ``solve_least_squares`` computes the direct
minimum-norm least-squares weights and is used as an independent check on
the iterative route.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .model import (CalibrationDataset, ExpansionSpec, FlannModel, Normalizer,
                    expand)

# Per-sample LMS is stable only while eta * |s|^2 < 2. With K harmonics,
# |s|^2 = u^2 + K, so K=25 tolerates eta < ~0.074 and K=30 eta < ~0.064.
DEFAULT_ETA = 0.06
DEFAULT_MAX_EPOCHS = 100
DEFAULT_MSE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class TrainingConfig:
    eta: float = DEFAULT_ETA
    max_epochs: int = DEFAULT_MAX_EPOCHS
    mse_threshold: float = DEFAULT_MSE_THRESHOLD
    shuffle: bool = False
    rng_seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.eta <= 1.0):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if int(self.max_epochs) != self.max_epochs or self.max_epochs < 1:
            raise ValueError(f"max_epochs must be a positive integer, got {self.max_epochs}")
        if not (self.mse_threshold >= 0.0):
            raise ValueError(f"mse_threshold must be >= 0, got {self.mse_threshold}")


@dataclass(frozen=True)
class TrainingTrace:
    """Convergence record of one ``train_lms`` run.

    ``mse_per_epoch[k]`` is the summed squared error over all samples,
    evaluated with the weights reached at the end of epoch ``k``.
    """

    mse_per_epoch: tuple
    epochs_run: int
    converged: bool
    final_weights: np.ndarray = field(repr=False)

    @property
    def final_mse(self) -> float:
        return self.mse_per_epoch[-1]


def init_weights(spec: ExpansionSpec) -> np.ndarray:
    return np.ones(spec.width)


def lms_step(weights, feature, desired: float, eta: float):
    """One LMS update.

    Returns
    -------
    (new_weights, error)
        ``error = desired - feature . weights`` and
        ``new_weights = weights + eta * error * feature``
    """
    w = np.asarray(weights, dtype=float)
    s = np.asarray(feature, dtype=float)
    if w.shape != s.shape:
        raise DimensionError(f"weights {w.shape} and feature {s.shape} differ in shape")
    error = float(desired - s @ w)
    return w + eta * error * s, error


def _design(dataset: CalibrationDataset, spec: ExpansionSpec):
    input_norm = Normalizer.fit(dataset.voltages, "voltages")
    output_norm = Normalizer.fit(dataset.displacements, "displacements")
    S = expand(dataset.voltages / input_norm.scale, spec)
    Y = dataset.displacements / output_norm.scale
    return S, Y, input_norm, output_norm


def train_lms(dataset: CalibrationDataset, spec: ExpansionSpec,
              config: TrainingConfig | None = None):
    """Train a model with per-sample LMS, one epoch per pass over the data.

    Training stops as soon as the epoch error drops below
    ``config.mse_threshold`` or after ``config.max_epochs`` epochs.

    Returns
    -------
    (FlannModel, TrainingTrace)
    """
    config = config or TrainingConfig()
    S, Y, input_norm, output_norm = _design(dataset, spec)
    rng = np.random.default_rng(config.rng_seed)
    w = init_weights(spec)
    order = np.arange(len(Y))
    history = []
    converged = False
    for _ in range(int(config.max_epochs)):
        if config.shuffle:
            order = rng.permutation(len(Y))
        with np.errstate(over="ignore", invalid="ignore"):
            for j in order:
                w, _ = lms_step(w, S[j], Y[j], config.eta)
            resid = Y - S @ w
            xi = float(resid @ resid)
        history.append(xi)
        if not np.isfinite(xi):
            break
        if xi < config.mse_threshold:
            converged = True
            break
    if not (np.isfinite(history[-1]) and np.all(np.isfinite(w))):
        raise FloatingPointError(
            f"LMS diverged after {len(history)} epochs; eta={config.eta} is too large for K={spec.harmonics}")
    model = FlannModel(spec, w, input_norm, output_norm)
    trace = TrainingTrace(tuple(history), len(history), converged, w.copy())
    return model, trace


def solve_least_squares(dataset: CalibrationDataset, spec: ExpansionSpec) -> FlannModel:
    """Minimum-norm least-squares weights via the SVD-based pseudo-inverse."""
    S, Y, input_norm, output_norm = _design(dataset, spec)
    w = np.linalg.pinv(S) @ Y
    return FlannModel(spec, w, input_norm, output_norm)


def training_residual(model: FlannModel, dataset: CalibrationDataset) -> float:
    """Summed squared error in normalized units, ``|S W - Y|^2``."""
    S = expand(dataset.voltages / model.input_norm.scale, model.spec)
    r = dataset.displacements / model.output_norm.scale - S @ model.weights
    return float(r @ r)
