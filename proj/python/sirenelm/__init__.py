"""Siren-vs-urban audio event detection."""

import json as _json

from ._core import (
    ElmModel,
    FeatureExtractor,
    FeatureTable,
    KnnModel,
    class_names,
    extract_dataset_features,
    feature_names,
    load_audio,
    make_noise_clip,
    make_siren_clip,
    read_features,
    synthetic_features,
    train_elm,
    write_features,
    write_synthetic_dataset,
)
from ._core import crossval_json as _crossval_json
from ._core import sweep_json as _sweep_json

__version__ = "0.1.0"


def crossval(table, **kwargs):
    """5-fold cross validation; returns the report as a dict."""
    return _json.loads(_crossval_json(table, **kwargs))


def sweep(table, widths=(10, 100, 1000, 10000), **kwargs):
    """Accuracy/run-time across hidden-layer widths; returns a list of dicts."""
    return _json.loads(_sweep_json(table, list(widths), **kwargs))


__all__ = [
    "ElmModel",
    "FeatureExtractor",
    "FeatureTable",
    "KnnModel",
    "class_names",
    "crossval",
    "extract_dataset_features",
    "feature_names",
    "load_audio",
    "make_noise_clip",
    "make_siren_clip",
    "read_features",
    "sweep",
    "synthetic_features",
    "train_elm",
    "write_features",
    "write_synthetic_dataset",
]
