"""Functional-link inverse models for linearizing LVDT displacement sensors,
with a bit-accurate 18-bit float emulation of the hardware inference path."""
from .errors import (AlignmentError, DatasetParseError, DegenerateDataError, DimensionError,
                     DuplicateKeyError, LookupMissError, Q18RangeError)
from .fileio import load_dataset, load_model, save_model
from .metrics import (DEFAULT_TOLERANCE_MM, ErrorCurve, LinearityReport, error_curve, linearity,
                      raw_sensor_linearity)
from .model import (CalibrationDataset, CalibrationSample, ExpansionSpec, FlannModel, Normalizer,
                    expand, forward, forward_batch, normalize)
from .pipeline import (LookupTable, PipelineConfig, PipelineTrace, build_lookup, pipeline_infer,
                       stage_expand, stage_multiply, stage_reduce)
from .qfloat import Q18, Q18Config, q18_add, q18_from_real, q18_mul, q18_to_real
from .training import (TrainingConfig, TrainingTrace, init_weights, lms_step, solve_least_squares,
                       train_lms)

__version__ = "0.1.0"
