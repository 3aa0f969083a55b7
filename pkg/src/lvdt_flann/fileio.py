"""
File formats: calibration CSV, model JSON, report JSON and golden traces.

All writers produce byte-identical output for identical inputs (sorted keys,
fixed indentation, shortest round-trip float repr).
"""
from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DatasetParseError
from .model import CalibrationDataset, CalibrationSample, ExpansionSpec, FlannModel, Normalizer

DATASET_HEADER = ("displacement_mm", "voltage_v")
MODEL_FORMAT = "lvdt-flann-model"
MODEL_VERSION = 1
TRACE_FORMAT = "lvdt-flann-q18-trace"
FIXTURES = ("lvdt_table1",)


def fixture_path(name: str = "lvdt_table1"):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return resources.files("lvdt_flann") / "data" / f"{name}.csv"


def parse_dataset(text: str) -> CalibrationDataset:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(c.strip() for c in rows[0]) != DATASET_HEADER:
        raise DatasetParseError(f"header must be {','.join(DATASET_HEADER)!r}", row=1)
    samples = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise DatasetParseError(f"expected 2 columns, got {len(row)}", row=lineno)
        try:
            x, v = float(row[0]), float(row[1])
        except ValueError:
            raise DatasetParseError(f"not a number in {','.join(row)!r}", row=lineno) from None
        if not (math.isfinite(x) and math.isfinite(v)):
            raise DatasetParseError("non-finite value", row=lineno)
        samples.append(CalibrationSample(x, v))
    try:
        return CalibrationDataset(tuple(samples))
    except ValueError as exc:
        raise DatasetParseError(str(exc)) from exc


def load_dataset(path) -> CalibrationDataset:
    """Read a dataset file, or a bundled fixture when ``path`` names one."""
    if str(path) in FIXTURES:
        return parse_dataset(fixture_path(str(path)).read_text())
    return parse_dataset(Path(path).read_text())


def save_dataset(dataset: CalibrationDataset, path):
    lines = [",".join(DATASET_HEADER)]
    lines += [f"{s.displacement!r},{s.voltage!r}" for s in dataset]
    Path(path).write_text("\n".join(lines) + "\n")


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def model_to_dict(model: FlannModel, training: dict | None = None) -> dict:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "harmonics": model.spec.harmonics,
        "width": model.spec.width,
        "weights": [float(w) for w in model.weights],
        "input_scale": model.input_norm.scale,
        "output_scale": model.output_norm.scale,
    }
    if training is not None:
        doc["training"] = training
    return doc


def model_from_dict(doc: dict) -> FlannModel:
    if doc.get("format") != MODEL_FORMAT or doc.get("version") != MODEL_VERSION:
        raise ValueError(f"not a {MODEL_FORMAT} v{MODEL_VERSION} document")
    spec = ExpansionSpec(int(doc["harmonics"]))
    if doc.get("width", spec.width) != spec.width:
        raise ValueError("width does not match harmonics")
    return FlannModel(spec, np.array(doc["weights"], dtype=float),
                      Normalizer(float(doc["input_scale"])), Normalizer(float(doc["output_scale"])))


def save_model(model: FlannModel, path, training: dict | None = None):
    """Write a model file and check that it reloads bit-exactly."""
    text = _dumps(model_to_dict(model, training))
    back = model_from_dict(json.loads(text))
    if not (np.array_equal(back.weights, model.weights)
            and back.input_norm == model.input_norm and back.output_norm == model.output_norm):
        raise AssertionError("model file does not round-trip exactly")
    Path(path).write_text(text)


def load_model(path) -> FlannModel:
    return model_from_dict(json.loads(Path(path).read_text()))


def table(columns, rows) -> dict:
    return {"columns": list(columns), "rows": [list(r) for r in rows]}


def save_report(report: dict, path):
    Path(path).write_text(_dumps(report))


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())


def linearity_table(report, displacements, voltages, outputs):
    rows = []
    for x, v, y, r in zip(displacements, voltages, outputs, report.per_point_residuals):
        rows.append([float(x), float(v), float(y), float(r), abs(r) <= report.tolerance_mm])
    return table(["displacement_mm", "voltage_v", "output_mm", "residual_mm", "linear"], rows)


def linearity_summary(report) -> dict:
    return {
        "total_points": report.total_points,
        "linear_points": report.linear_points,
        "percent_linear": report.percent_linear,
        "tolerance_mm": report.tolerance_mm,
    }


def save_traces(records, path):
    doc = {"format": TRACE_FORMAT, "records": list(records)}
    Path(path).write_text(_dumps(doc))


def load_traces(path) -> list:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != TRACE_FORMAT:
        raise ValueError(f"not a {TRACE_FORMAT} file")
    return doc["records"]
