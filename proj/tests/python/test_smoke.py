"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import sirenelm


def test_feature_names_and_classes():
    names = sirenelm.feature_names()
    assert len(names) == 28
    assert names[0] == "mfcc_mean_00"
    assert names[26] == "zcr_mean"
    assert sirenelm.class_names() == ["urban", "siren"]


def test_clip_synthesis_and_extraction():
    siren = np.asarray(sirenelm.make_siren_clip(seed=1))
    noise = np.asarray(sirenelm.make_noise_clip(seed=1))
    assert siren.shape == (220500,)
    assert noise.shape == (220500,)
    assert np.max(np.abs(siren)) <= 1.0

    fx = sirenelm.FeatureExtractor()
    fs = np.asarray(fx.extract(siren))
    fn = np.asarray(fx.extract(noise))
    assert fs.shape == (28,)
    assert all(math.isfinite(v) for v in fs)
    assert fn[26] > fs[26]  # broadband noise crosses zero more often


def test_train_predict_roundtrip(tmp_path):
    table = sirenelm.synthetic_features(seed=2, n_sirens=10, n_noises=30, threads=2)
    features = np.asarray(table.features)
    assert features.shape == (40, 28)

    model = sirenelm.train_elm(table.features, table.labels, hidden=10, seed=3, smote_k=3)
    labels = model.predict_batch(table.features)
    accuracy = sum(int(a == b) for a, b in zip(labels, table.labels)) / len(labels)
    assert accuracy > 0.9

    label, scores = model.predict(features[0])
    assert label in (0, 1)
    assert len(scores) == 2

    path = tmp_path / "model.elmm"
    model.save(path)
    back = sirenelm.ElmModel.load(path)
    assert back.hidden_nodes == 10
    assert back.classes == ["urban", "siren"]
    assert back.predict_batch(table.features) == labels


def test_feature_io_roundtrip(tmp_path):
    table = sirenelm.synthetic_features(seed=4, n_sirens=5, n_noises=10)
    path = tmp_path / "features.selm"
    sirenelm.write_features(path, table)
    back = sirenelm.read_features(path)
    assert np.array_equal(np.asarray(back.features), np.asarray(table.features))
    assert back.labels == table.labels
    assert back.folds == table.folds


def test_crossval_and_sweep_reports():
    table = sirenelm.synthetic_features(seed=5, n_sirens=10, n_noises=30, threads=2)
    report = sirenelm.crossval(table, seeds=[1, 2], smote_k=3, warmup=0, repeats=1)
    assert report["model"] == "elm"
    assert len(report["folds"]) == 5
    assert 0.0 <= report["overall"]["accuracy_pct"] <= 100.0

    knn = sirenelm.crossval(table, model="knn", knn_k=3, smote_k=3, warmup=0, repeats=1)
    assert knn["model"] == "knn"

    sweep = sirenelm.sweep(table, widths=(4, 8), seeds=[1], smote_k=3, warmup=0, repeats=1)
    assert [entry["hidden_nodes"] for entry in sweep] == [4, 8]
    assert all("time_ms" in entry for entry in sweep)


def test_errors_surface_as_exceptions():
    with pytest.raises(RuntimeError):
        sirenelm.read_features("/nonexistent/features.selm")
    with pytest.raises(RuntimeError):
        sirenelm.train_elm(np.zeros((3, 2)), [0, 0, 0], hidden=4)  # single class
