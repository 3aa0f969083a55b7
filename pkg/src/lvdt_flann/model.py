"""
Functional-link network forward model
=====================================

A single-layer network whose scalar input is first normalized, then expanded
through the trigonometric basis

    [u, sin(pi u), cos(pi u), sin(2 pi u), cos(2 pi u), ..., sin(K pi u), cos(K pi u)]

and finally combined with a weight vector. The output is mapped back to
millimetres by the output normalizer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateDataError, DimensionError


@dataclass(frozen=True)
class CalibrationSample:
    displacement: float  # mm, actuator ground truth
    voltage: float  # V, demodulated sensor output

    def __post_init__(self):
        if not (math.isfinite(self.displacement) and math.isfinite(self.voltage)):
            raise ValueError(f"non-finite calibration sample {self!r}")


@dataclass(frozen=True)
class CalibrationDataset:
    """Ordered (displacement, voltage) pairs from one calibration sweep.

    At least two samples are required and displacements must be strictly
    increasing.
    """

    samples: tuple

    def __post_init__(self):
        samples = tuple(self.samples)
        object.__setattr__(self, "samples", samples)
        if len(samples) < 2:
            raise ValueError(f"a dataset needs at least 2 samples, got {len(samples)}")
        for i, s in enumerate(samples):
            if not isinstance(s, CalibrationSample):
                raise TypeError(f"sample {i} is not a CalibrationSample")
        d = np.array([s.displacement for s in samples])
        if np.any(np.diff(d) <= 0):
            raise ValueError("displacements must be strictly increasing")

    @classmethod
    def from_arrays(cls, displacements, voltages):
        if len(displacements) != len(voltages):
            raise DimensionError("displacement and voltage arrays differ in length")
        return cls(tuple(CalibrationSample(float(x), float(v))
                         for x, v in zip(displacements, voltages)))

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @property
    def displacements(self) -> np.ndarray:
        return np.array([s.displacement for s in self.samples], dtype=float)

    @property
    def voltages(self) -> np.ndarray:
        return np.array([s.voltage for s in self.samples], dtype=float)


@dataclass(frozen=True)
class ExpansionSpec:
    """Trigonometric basis with ``harmonics`` sine/cosine pairs.

    ``width`` is the number of basis functions, ``2 * harmonics + 1``.
    """

    harmonics: int

    def __post_init__(self):
        if isinstance(self.harmonics, bool) or not isinstance(self.harmonics, (int, np.integer)):
            raise TypeError("harmonics must be an integer")
        if self.harmonics < 1:
            raise ValueError(f"harmonics must be >= 1, got {self.harmonics}")

    @property
    def width(self) -> int:
        return 2 * self.harmonics + 1

    @classmethod
    def from_width(cls, width: int) -> "ExpansionSpec":
        if width < 3 or width % 2 == 0:
            raise ValueError(f"basis width must be odd and >= 3, got {width}")
        return cls((width - 1) // 2)

    def labels(self) -> list[str]:
        out = ["v"]
        for m in range(1, self.harmonics + 1):
            out += [f"sin({m}*pi*v)", f"cos({m}*pi*v)"]
        return out


@dataclass(frozen=True)
class Normalizer:
    """Maps a raw value ``w`` to ``w / scale``."""

    scale: float

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"normalizer scale must be positive and finite, got {self.scale}")

    @classmethod
    def fit(cls, values: Iterable[float], what: str = "values") -> "Normalizer":
        """Scale by the largest magnitude so that every value lands in [-1, 1]."""
        values = np.asarray(list(values), dtype=float)
        if values.size == 0 or not np.all(np.isfinite(values)):
            raise ValueError(f"cannot fit a normalizer to {what}: empty or non-finite")
        scale = float(np.max(np.abs(values)))
        if scale == 0.0:
            raise DegenerateDataError(f"all {what} are zero; normalizer scale would be 0")
        return cls(scale)


def normalize(value, norm: Normalizer):
    """Return ``value / norm.scale``; works on scalars and arrays."""
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite input {value!r}")
    out = arr / norm.scale
    return float(out) if out.ndim == 0 else out


def expand(u, spec: ExpansionSpec) -> np.ndarray:
    """Trigonometric functional expansion of the normalized input.

    Parameters
    ----------
    u: float or array_like
        normalized input(s)
    spec: ExpansionSpec
        basis configuration

    Returns
    -------
    numpy.ndarray
        shape ``(P,)`` for scalar input, ``(N, P)`` for a 1-D array, with
        column 0 the identity term and columns ``2m-1``, ``2m`` holding
        ``sin(m pi u)`` and ``cos(m pi u)``
    """
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("expansion input must be finite")
    out = np.empty(u.shape + (spec.width,))
    out[..., 0] = u
    m = np.arange(1, spec.harmonics + 1)
    arg = np.pi * np.multiply.outer(u, m)
    out[..., 1::2] = np.sin(arg)
    out[..., 2::2] = np.cos(arg)
    return out


@dataclass(frozen=True)
class FlannModel:
    spec: ExpansionSpec
    weights: np.ndarray = field(repr=False)
    input_norm: Normalizer
    output_norm: Normalizer

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.spec.width,):
            raise DimensionError(
                f"expected {self.spec.width} weights for K={self.spec.harmonics}, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def with_weights(self, weights) -> "FlannModel":
        return FlannModel(self.spec, weights, self.input_norm, self.output_norm)

    def __call__(self, v_raw):
        return forward(v_raw, self)


def forward(v_raw, model: FlannModel):
    """Compensated displacement in mm for raw voltage(s) ``v_raw``."""
    s = expand(normalize(v_raw, model.input_norm), model.spec)
    y = s @ model.weights
    out = model.output_norm.scale * y
    return float(out) if np.ndim(out) == 0 else out


def forward_batch(dataset: CalibrationDataset | Sequence[CalibrationSample],
                  model: FlannModel) -> list[tuple[float, float]]:
    """Run ``forward`` on every sample, pairing outputs with true displacements."""
    pairs = []
    for i, s in enumerate(dataset):
        try:
            pairs.append((s.displacement, forward(s.voltage, model)))
        except ValueError as exc:
            raise type(exc)(f"sample {i}: {exc}") from exc
    return pairs
