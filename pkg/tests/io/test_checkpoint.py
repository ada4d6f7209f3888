"""Tests for the AMD1 checkpoint container."""

import numpy as np
import pytest

from exceptions import FormatError
from model.checkpoint import load_checkpoint, read_container, save_checkpoint, write_container
from model.decoders import ar_decoder_forward, ctc_head
from model.encoder import encoder_forward
from model.vocab import SOS_EOS_ID


@pytest.fixture
def checkpoint(tiny_params, tmp_path):
    path = tmp_path / "model.amd1"
    save_checkpoint(tiny_params, path, meta={"epoch": 3})
    return path


class TestRoundTrip:
    """Tests for save_checkpoint and load_checkpoint."""

    def test_values_bit_exact(self, tiny_params, checkpoint):
        """Should restore every tensor bit for bit."""
        loaded = load_checkpoint(checkpoint)
        assert loaded.config == tiny_params.config
        for name, array in tiny_params.arrays().items():
            np.testing.assert_array_equal(loaded[name].data, array)

    def test_forward_bit_exact(self, tiny_params, checkpoint):
        """Should reproduce CTC and AR outputs exactly after a reload."""
        loaded = load_checkpoint(checkpoint)
        features = np.random.default_rng(2).normal(size=(8, 4))
        enc_a = encoder_forward(features, tiny_params)
        enc_b = encoder_forward(features, loaded)
        np.testing.assert_array_equal(ctc_head(enc_a, tiny_params).data, ctc_head(enc_b, loaded).data)
        tokens = [SOS_EOS_ID, 3, 4]
        np.testing.assert_array_equal(
            ar_decoder_forward(tokens, enc_a, tiny_params).data,
            ar_decoder_forward(tokens, enc_b, loaded).data,
        )

    def test_positions_stay_frozen(self, checkpoint):
        """Should reload the position table as a non-trainable tensor."""
        loaded = load_checkpoint(checkpoint)
        assert "positions" not in loaded.trainable()

    def test_metadata(self, checkpoint):
        """Should keep metadata in the header."""
        header, _ = read_container(checkpoint, "model")
        assert header["meta"] == {"epoch": 3}


class TestMalformed:
    """Tests for container error handling."""

    def test_missing(self, tmp_path):
        """Should raise FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_checkpoint(tmp_path / "none.amd1")

    def test_bad_magic(self, checkpoint):
        """Should reject a foreign file at offset 0."""
        checkpoint.write_bytes(b"NOPE" + checkpoint.read_bytes()[4:])
        with pytest.raises(FormatError) as exc:
            load_checkpoint(checkpoint)
        assert exc.value.offset == 0

    def test_truncated_payload(self, checkpoint):
        """Should reject a file cut inside the payload."""
        checkpoint.write_bytes(checkpoint.read_bytes()[:-8])
        with pytest.raises(FormatError, match="past end"):
            load_checkpoint(checkpoint)

    def test_truncated_header(self, checkpoint):
        """Should reject a file cut inside the header."""
        checkpoint.write_bytes(checkpoint.read_bytes()[:12])
        with pytest.raises(FormatError):
            load_checkpoint(checkpoint)

    def test_trailing_bytes(self, checkpoint):
        """Should reject extra bytes after the payload."""
        checkpoint.write_bytes(checkpoint.read_bytes() + b"\x00" * 8)
        with pytest.raises(FormatError, match="trailing"):
            load_checkpoint(checkpoint)

    def test_wrong_kind(self, tmp_path):
        """Should refuse to load a train state as a model."""
        path = tmp_path / "state.amd1"
        write_container(path, "train_state", {"m.x": np.zeros(2)}, {"epoch": 1})
        with pytest.raises(FormatError, match="kind"):
            load_checkpoint(path)

    def test_missing_tensor(self, tiny_params, tmp_path):
        """Should reject a model container lacking a parameter."""
        arrays = tiny_params.arrays()
        arrays.pop("ctc.out.bias")
        path = tmp_path / "partial.amd1"
        write_container(path, "model", arrays, {"config": tiny_params.config.model_dump(), "meta": {}})
        with pytest.raises(FormatError):
            load_checkpoint(path)
