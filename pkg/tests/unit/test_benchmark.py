"""Tests for benchmark aggregation and the sweep system set."""

import pytest

from evaluation.benchmark import real_time_factor, summarize_system, sweep_systems
from evaluation.metrics import wer
from exceptions import EmptyInputError
from schemas.decode_schema import DecodeRecord, DecodeSystem, FusionWeights, ScoredHypothesis


def _record(reference: list[int], hypotheses: list[list[int]], amd_calls: int = 0) -> DecodeRecord:
    nbest = [ScoredHypothesis(tokens=h, alpha_ctc=0.0, score=-float(i)) for i, h in enumerate(hypotheses)]
    return DecodeRecord(
        utterance_id="u",
        system="amd",
        reference=reference,
        reference_text="",
        hypothesis=hypotheses[0],
        hypothesis_text="",
        nbest=nbest,
        errors=wer(reference, hypotheses[0]).errors,
        decode_seconds=0.1,
        duration_seconds=1.0,
        amd_calls=amd_calls,
        ar_calls=amd_calls,
    )


class TestRealTimeFactor:
    """Tests for real_time_factor."""

    def test_ratio(self):
        """Should divide decode time by audio time."""
        assert real_time_factor(1.5, 3.0) == pytest.approx(0.5)

    def test_zero_audio(self):
        """Should reject a split without audio."""
        with pytest.raises(EmptyInputError):
            real_time_factor(1.0, 0.0)


class TestSummarizeSystem:
    """Tests for summarize_system."""

    def test_aggregates(self):
        """Should sum errors and calls and weight the rates by reference tokens."""
        records = [
            _record([4, 5, 6], [[4, 5, 7], [4, 5, 6]], amd_calls=2),
            _record([4], [[4]], amd_calls=1),
        ]
        report = summarize_system(DecodeSystem(name="amd"), records, decode_seconds=1.0)

        assert report.errors == 1
        assert report.reference_tokens == 4
        assert report.wer == pytest.approx(0.25)
        assert report.oracle_wer == 0.0
        assert report.lattice_density == pytest.approx(1.25)
        assert report.audio_seconds == pytest.approx(2.0)
        assert report.rtf == pytest.approx(0.5)
        assert report.amd_calls == 3
        assert report.segment_errors == [1, 0]
        assert report.description.startswith("amd (amd fixed:8")


class TestSweepSystems:
    """Tests for sweep_systems."""

    def test_system_set(self):
        """Should pair the CTC+AR beam with one AMD system per block size."""
        systems = sweep_systems(3, [1, 2, 4, 8])
        assert [s.name for s in systems] == ["ctc_ar_beam", "amd_fixed_1", "amd_fixed_2", "amd_fixed_4", "amd_fixed_8"]
        assert systems[0].beam == 3
        assert systems[0].weights == FusionWeights.baseline()
        for system, block_size in zip(systems[1:], [1, 2, 4, 8]):
            assert system.schedule.block_size == block_size
            assert system.k_amd == system.k_main == 3
