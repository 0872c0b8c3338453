import math

import numpy as np
import pytest

from sample_clip import SAMPLE_FRAMES
from ozx import extract_video_features, get_encoder
from ozx.cli import main
from ozx.encoders import HashVideoEncoder, list_encoders, register_encoder
from ozx.extract import decode_video


class TestDecode:
    def test_frame_count_and_shape(self, sample_video):
        frames, fps = decode_video(sample_video)
        assert frames.shape == (SAMPLE_FRAMES, 224, 224, 3)
        assert fps == pytest.approx(12.0)

    def test_corrupt_file_names_it(self, tmp_path):
        bad = tmp_path / "broken.avi"
        bad.write_bytes(b"not a video at all")
        with pytest.raises(ValueError, match="broken.avi"):
            decode_video(bad)


class TestExtract:
    def test_one_row_per_frame_at_stride_one(self, sample_video, tmp_path):
        enc = get_encoder("hash-image-32")
        entry = extract_video_features(sample_video, tmp_path, enc)
        assert entry["T"] == SAMPLE_FRAMES
        assert entry["D"] == 32
        assert entry["window_len"] == 8 and entry["stride"] == 1
        data = np.fromfile(tmp_path / entry["path"], dtype="<f4")
        assert data.size == SAMPLE_FRAMES * 32

    def test_stride_decimates_timesteps(self, sample_video, tmp_path):
        enc = get_encoder("hash-image-16")
        entry = extract_video_features(sample_video, tmp_path, enc, stride=4)
        assert entry["T"] == math.ceil(SAMPLE_FRAMES / 4)
        assert entry["stride"] == 4

    def test_first_window_is_frame_zero_repeated(self, sample_video, tmp_path):
        # left-padding repeats frame 0, so the first pooled window collapses
        # to frame 0's own embedding
        enc = get_encoder("hash-image-32")
        entry = extract_video_features(sample_video, tmp_path, enc)
        rows = np.fromfile(tmp_path / entry["path"], dtype="<f4").reshape(-1, 32)
        frames, _ = decode_video(sample_video)
        frame0 = enc.encode_frames(frames[:1])[0]
        assert np.allclose(rows[0], frame0, atol=1e-6)

    def test_video_family_encoder(self, sample_video, tmp_path):
        enc = get_encoder("hash-video-24")
        entry = extract_video_features(sample_video, tmp_path, enc)
        rows = np.fromfile(tmp_path / entry["path"], dtype="<f4").reshape(-1, 24)
        assert rows.shape[0] == SAMPLE_FRAMES
        assert np.allclose(np.linalg.norm(rows, axis=1), 1.0, atol=1e-5)

    def test_dim_mismatch_rejected(self, sample_video, tmp_path):
        enc = get_encoder("hash-image-32")
        with pytest.raises(ValueError, match="D=64"):
            extract_video_features(sample_video, tmp_path, enc, expect_dim=64)

    def test_deterministic_across_runs(self, sample_video, tmp_path):
        enc = get_encoder("hash-image-32")
        a = extract_video_features(sample_video, tmp_path / "a", enc)
        b = extract_video_features(sample_video, tmp_path / "b", enc)
        assert (tmp_path / "a" / a["path"]).read_bytes() == (
            tmp_path / "b" / b["path"]
        ).read_bytes()


class TestEncoderRegistry:
    def test_unknown_id_lists_known(self):
        with pytest.raises(ValueError, match="hash-image"):
            get_encoder("resnet-50")

    def test_registration_extends_ids(self):
        register_encoder("hash-video-alias", HashVideoEncoder)
        assert "hash-video-alias" in list_encoders()
        assert get_encoder("hash-video-alias-8").dim == 8

    def test_texts_deterministic_and_unit(self):
        enc = get_encoder("hash-image-48")
        a = enc.encode_texts(["jumping", "diving"])
        b = enc.encode_texts(["jumping", "diving"])
        assert np.array_equal(a, b)
        assert np.allclose(np.linalg.norm(a, axis=1), 1.0)
        assert not np.allclose(a[0], a[1])


class TestCli:
    def test_extract_end_to_end(self, sample_video, tmp_path, capsys):
        out = tmp_path / "data"
        assert main([
            "extract", "--videos", str(sample_video), "--out", str(out),
            "--encoder", "hash-image-32",
        ]) == 0
        assert (out / "manifest.json").is_file()
        assert (out / "features" / "sample.bin").is_file()

    def test_corrupt_video_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "junk.avi"
        bad.write_bytes(b"\x00" * 64)
        code = main([
            "extract", "--videos", str(bad), "--out", str(tmp_path / "o"),
        ])
        assert code == 1
        assert "junk.avi" in capsys.readouterr().err
