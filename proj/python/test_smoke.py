"""Smoke tests for the _oacm extension module."""

import math
import tempfile

import numpy as np
import pytest

import _oacm


L = 2.0 * math.pi


def _grid(n):
    x = np.arange(n) * L / n
    return np.meshgrid(x, x, indexing="ij")


def test_default_config_roundtrips():
    text = _oacm.default_config()
    assert "mode" in text
    assert _oacm.validate_config(text) == text


def test_invalid_config_raises():
    with pytest.raises(ValueError, match="dt"):
        _oacm.validate_config("dt = 0\n")


def test_spectral_derivative():
    n = 32
    X, Y = _grid(n)
    f = np.sin(X) * np.cos(2 * Y)
    dfdx = _oacm.derivative(f, 1, 0, L)
    assert np.max(np.abs(dfdx - np.cos(X) * np.cos(2 * Y))) < 1e-10


def test_leray_kills_divergence():
    n = 32
    X, Y = _grid(n)
    ux = np.sin(X + Y) + np.cos(2 * X)
    uy = np.cos(X) * np.sin(Y)
    px, py_ = _oacm.leray_project(ux, uy, L)
    assert _oacm.divergence_norm(px, py_, L) < 1e-11
    # projecting twice changes nothing
    qx, qy = _oacm.leray_project(px, py_, L)
    assert np.max(np.abs(qx - px)) < 1e-12
    assert np.max(np.abs(qy - py_)) < 1e-12


def test_short_run_and_diag():
    with tempfile.TemporaryDirectory() as tmp:
        cfg = "\n".join(
            [
                "mode = deterministic",
                "grid.n = 32",
                "dt = 1e-3",
                "T = 0.01",
                "output_interval = 0.005",
                f"output.dir = {tmp}",
                "seed = 7",
            ]
        )
        res = _oacm.run(cfg)
        assert res["rows"] == 3
        assert res["blowup_t"] is None
        assert _oacm.diag_recompute(tmp) == 3
