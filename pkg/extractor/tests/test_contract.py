"""Round-trip contract: everything this package writes must load cleanly
through the localizer package's own readers, with zero warnings."""

import warnings

import numpy as np
import pytest

from ozx.cli import main


@pytest.fixture
def dataset(sample_video, descriptions_file, tmp_path):
    out = tmp_path / "data"
    assert main([
        "extract", "--videos", str(sample_video), "--out", str(out),
        "--encoder", "hash-image-32", "--window", "8",
    ]) == 0
    assert main([
        "textbank", "--descriptions", str(descriptions_file),
        "--out", str(out / "textbank"), "--encoder", "hash-image-32",
    ]) == 0
    return out


def test_outputs_load_through_localizer_readers(dataset):
    from oztal import io_formats

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        manifest = io_formats.load_manifest(dataset)
        assert len(manifest.entries) == 1
        entry = manifest.entries[0]
        rows = io_formats.read_feature_array(manifest, entry)
        assert rows.shape == (entry.timesteps, entry.dim)
        bank = io_formats.load_textbank(
            dataset / "textbank.json", dataset / "textbank.bin"
        )
        assert bank.dim == entry.dim
        assert bank.num_classes == 3


def test_localizer_runs_on_extracted_features(dataset):
    from oztal import io_formats
    from oztal.core import LocalizerConfig
    from oztal.stream import run_stream

    manifest = io_formats.load_manifest(dataset)
    entry = manifest.entries[0]
    bank = io_formats.load_textbank(dataset / "textbank.json", dataset / "textbank.bin")
    rows = io_formats.read_feature_array(manifest, entry)
    instances, trace = run_stream(
        rows, bank, LocalizerConfig(fps=entry.fps, stride=entry.stride), trace=True
    )
    assert len(trace) == entry.timesteps
    for inst in instances:
        assert 0 <= inst.start_t <= inst.end_t < entry.timesteps
        assert np.isfinite(inst.confidence)
