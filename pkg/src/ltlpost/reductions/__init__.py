from .anchor import always_anchor, rewrite_with_true_anchor
from .common import FreshNames, ReductionOutput, dnf_template, to_builtin
from .flatten import FlattenMode, extend_model, flatten
from .qbf import (
    QbfInstance,
    canonical_model,
    find_cut_points,
    format_qbf,
    is_valid,
    parse_qbf,
    qbf_to_since,
    qbf_to_since_b,
    qbf_to_until,
    verify_model_shape,
)
from .synth import SynthesisNotFound, synth_short, synthesize

__all__ = [
    "FlattenMode",
    "FreshNames",
    "QbfInstance",
    "ReductionOutput",
    "SynthesisNotFound",
    "always_anchor",
    "canonical_model",
    "dnf_template",
    "extend_model",
    "find_cut_points",
    "flatten",
    "format_qbf",
    "is_valid",
    "parse_qbf",
    "qbf_to_since",
    "qbf_to_since_b",
    "qbf_to_until",
    "rewrite_with_true_anchor",
    "synth_short",
    "synthesize",
    "to_builtin",
    "verify_model_shape",
]
