"""
Software model of the three-stage hardware inference datapath.

The input voltage is fetched from a lookup table of pre-encoded values,
normalized, expanded into 51 lanes by five expansion sub-blocks
(10 + 10 + 10 + 10 + 11 lanes), multiplied lane-wise by the quantized
weights and summed by a chain of 50 two-input adders::

    lut -> normalize -> stage_expand -> stage_multiply -> stage_reduce -> denormalize

Every arithmetic step goes through an ``Arithmetic`` backend. ``Q18_ARITH``
rounds each result to the 18-bit float format; ``REAL_ARITH`` uses plain
float64 and exists so the datapath can be checked against the reference
model with quantization taken out.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DuplicateKeyError, LookupMissError, Q18RangeError
from .model import CalibrationDataset, ExpansionSpec, FlannModel, Normalizer, expand
from .qfloat import Q18, q18_add, q18_from_real, q18_mul, q18_to_real

HARMONICS = 25
LANES = 2 * HARMONICS + 1
SUB_BLOCKS = (10, 10, 10, 10, 11)


@dataclass(frozen=True)
class Arithmetic:
    name: str
    encode: Any
    decode: Any
    mul: Any
    add: Any


Q18_ARITH = Arithmetic("q18", q18_from_real, q18_to_real, q18_mul, q18_add)
REAL_ARITH = Arithmetic("real", float, float, operator.mul, operator.add)


@dataclass(frozen=True)
class LookupTable:
    """Input voltages (exact keys) mapped to their encoded values."""

    entries: dict
    arithmetic: Arithmetic = Q18_ARITH

    def __len__(self):
        return len(self.entries)

    def __contains__(self, v):
        return float(v) in self.entries

    def fetch(self, v_raw: float):
        try:
            return self.entries[float(v_raw)]
        except KeyError:
            raise LookupMissError(
                f"{v_raw!r} V is not in the lookup table ({len(self.entries)} entries)") from None


def build_lookup(dataset: CalibrationDataset, arithmetic: Arithmetic = Q18_ARITH) -> LookupTable:
    entries = {}
    for i, s in enumerate(dataset):
        key = float(s.voltage)
        if key in entries:
            raise DuplicateKeyError(f"sample {i}: voltage {key} already in the lookup table")
        entries[key] = arithmetic.encode(key)
    return LookupTable(entries, arithmetic)


@dataclass(frozen=True)
class PipelineConfig:
    spec: ExpansionSpec
    weights: tuple  # one encoded weight per lane
    input_norm: Normalizer
    output_norm: Normalizer
    input_recip: Any  # encoded 1 / input_norm.scale
    output_scale: Any  # encoded output_norm.scale
    arithmetic: Arithmetic = Q18_ARITH
    sub_block_partition: tuple = SUB_BLOCKS

    def __post_init__(self):
        if self.spec.width != LANES:
            raise ValueError(f"the datapath is fixed at {LANES} lanes (K={HARMONICS}), got K={self.spec.harmonics}")
        if sum(self.sub_block_partition) != LANES:
            raise ValueError(f"sub-block partition {self.sub_block_partition} does not cover {LANES} lanes")
        if len(self.weights) != LANES:
            raise ValueError(f"expected {LANES} weights, got {len(self.weights)}")

    @classmethod
    def from_model(cls, model: FlannModel, arithmetic: Arithmetic = Q18_ARITH) -> "PipelineConfig":
        """Encode the weights and normalizer scales of a trained model, one rounding each."""
        enc = arithmetic.encode
        return cls(
            spec=model.spec,
            weights=tuple(enc(float(w)) for w in model.weights),
            input_norm=model.input_norm,
            output_norm=model.output_norm,
            input_recip=enc(1.0 / model.input_norm.scale),
            output_scale=enc(model.output_norm.scale),
            arithmetic=arithmetic,
        )

    @property
    def weights_q18(self):
        return self.weights


@dataclass(frozen=True)
class PipelineTrace:
    input_key: float
    fetched: Any
    normalized: Any
    expanded: tuple
    products: tuple
    partial_sums: tuple
    output: Any  # adder-chain result, normalized units
    denormalized: Any  # output scaled back to millimetres

    def __post_init__(self):
        if self.partial_sums and self.partial_sums[-1] != self.output:
            raise ValueError("last partial sum must equal the output")


def sub_blocks(lanes, partition=SUB_BLOCKS):
    """Split a flat lane list into the expansion sub-blocks E1..E5."""
    out, start = [], 0
    for n in partition:
        out.append(list(lanes[start:start + n]))
        start += n
    return out


def stage_expand(u, config: PipelineConfig) -> list:
    """Lane ``j`` is basis function ``j`` of the decoded input, encoded once."""
    arith = config.arithmetic
    u_real = arith.decode(u)
    values = expand(u_real, config.spec)
    lanes = []
    for block in sub_blocks(values, config.sub_block_partition):
        lanes.extend(arith.encode(float(x)) for x in block)
    return lanes


def stage_multiply(lanes, config: PipelineConfig) -> list:
    if len(lanes) != len(config.weights):
        raise ValueError(f"{len(lanes)} lanes for {len(config.weights)} weights")
    mul = config.arithmetic.mul
    products = []
    for j, (x, w) in enumerate(zip(lanes, config.weights)):
        try:
            products.append(mul(x, w))
        except Q18RangeError as exc:
            raise Q18RangeError(f"multiplier lane {j}: {exc}") from exc
    return products


def stage_reduce(products, arithmetic: Arithmetic = Q18_ARITH):
    """Sequential left fold ``((p0 + p1) + p2) + ...``, one adder node per step.

    Returns
    -------
    (output, partials)
        ``partials[i]`` is the output of adder node ``i``; there are
        ``len(products) - 1`` nodes.
    """
    if len(products) < 2:
        raise ValueError("the adder chain needs at least two products")
    acc = products[0]
    partials = []
    for i, p in enumerate(products[1:]):
        try:
            acc = arithmetic.add(acc, p)
        except Q18RangeError as exc:
            raise Q18RangeError(f"adder node {i}: {exc}") from exc
        partials.append(acc)
    return acc, partials


def pipeline_infer(v_raw: float, config: PipelineConfig, lut: LookupTable):
    """Run one voltage through the emulated datapath.

    Returns
    -------
    (output_mm, PipelineTrace)
    """
    arith = config.arithmetic
    fetched = lut.fetch(v_raw)
    u = arith.mul(fetched, config.input_recip)
    lanes = stage_expand(u, config)
    products = stage_multiply(lanes, config)
    out, partials = stage_reduce(products, arith)
    mm = arith.mul(out, config.output_scale)
    trace = PipelineTrace(float(v_raw), fetched, u, tuple(lanes), tuple(products),
                          tuple(partials), out, mm)
    return arith.decode(mm), trace


def pipeline_batch(dataset: CalibrationDataset, config: PipelineConfig, lut: LookupTable):
    """(displacement, output_mm) pairs and traces for every sample."""
    pairs, traces = [], []
    for s in dataset:
        y, tr = pipeline_infer(s.voltage, config, lut)
        pairs.append((s.displacement, y))
        traces.append(tr)
    return pairs, traces


def trace_record(trace: PipelineTrace) -> dict:
    """Golden-trace record with every Q18 value in its binary string form."""
    def b(q):
        if not isinstance(q, Q18):
            raise TypeError("golden traces are only defined for Q18 pipelines")
        return q.to_string()

    return {
        "input_v": trace.input_key,
        "fetched": b(trace.fetched),
        "normalized": b(trace.normalized),
        "expanded": [b(q) for q in trace.expanded],
        "products": [b(q) for q in trace.products],
        "partial_sums": [b(q) for q in trace.partial_sums],
        "output": b(trace.output),
        "output_mm": b(trace.denormalized),
    }


def decode_lanes(values, arithmetic: Arithmetic = Q18_ARITH) -> np.ndarray:
    return np.array([arithmetic.decode(x) for x in values])
