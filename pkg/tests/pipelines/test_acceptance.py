"""Desk-scale acceptance checks: train a small model, then benchmark and sweep it through the pipelines."""

import asyncio
from pathlib import Path

import pandas as pd
import pytest

from model.vocab import NUM_SPECIAL_TOKENS
from pipelines import run_analyze, run_bench, run_gen, run_train
from schemas.bench_schema import BenchConfig, BenchReport
from schemas.corpus_schema import CorpusConfig
from schemas.model_config import ModelConfig
from schemas.run_config import RunConfig
from schemas.train_schema import TrainConfig
from utils.paths import get_bench_paths, get_sweep_path

pytestmark = pytest.mark.slow

BLOCK_SIZES = [1, 2, 4, 8]
K_MAX = 8


@pytest.fixture(scope="module")
def desk_config() -> RunConfig:
    """Sentences of 8-24 tokens, so block schedules matter; default benchmark systems."""
    return RunConfig(
        seed=0,
        corpus=CorpusConfig(
            vocab_size=8,
            utterance_count=240,
            min_length=8,
            max_length=24,
            min_duration=3,
            max_duration=4,
            feature_dim=8,
            noise_std=0.1,
            dev_fraction=0.05,
            test_fraction=0.05,
        ),
        model=ModelConfig(
            vocab_size=8 + NUM_SPECIAL_TOKENS,
            d_model=32,
            n_heads=4,
            ff_dim=64,
            n_encoder_layers=2,
            n_decoder_layers=1,
            max_len=32,
            feature_dim=8,
            subsample_factor=2,
        ),
        train=TrainConfig(epochs=15, batch_size=8, warmup_steps=100, dev_eval_limit=10),
        bench=BenchConfig(repetitions=3, sweep_k_max=K_MAX, sweep_block_sizes=BLOCK_SIZES),
    )


@pytest.fixture(scope="module")
def desk_run(desk_config, tmp_path_factory) -> Path:
    """Corpus, trained checkpoint, bench report and density sweep in one run directory."""
    run_dir = tmp_path_factory.mktemp("desk")
    run_gen(desk_config, run_dir)
    run_train(desk_config, run_dir, run_dir)
    asyncio.run(run_bench(desk_config, run_dir, run_dir, run_dir / "bench"))
    asyncio.run(run_analyze(desk_config, run_dir, run_dir, run_dir / "analyze"))
    return run_dir


@pytest.fixture(scope="module")
def report(desk_run) -> BenchReport:
    json_path, _ = get_bench_paths(desk_run / "bench")
    return BenchReport.model_validate_json(json_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def sweep_frame(desk_run) -> pd.DataFrame:
    return pd.read_csv(get_sweep_path(desk_run / "analyze"))


class TestSpeed:
    """Tests for decoding speed against the CTC+AR greedy baseline."""

    def test_fixed_8_speedup(self, report):
        """Should decode at least 1.3x faster than CTC+AR greedy with Fixed(8) blocks."""
        assert report.system("amd_fixed_8").speedup >= 1.3

    def test_mixed_10_2_rtf(self, report):
        """Should keep the Mixed(10,2) real time factor within 15% of the baseline's."""
        baseline = report.system(report.baseline)
        mixed = report.system("amd_mixed_10_2")
        assert abs(mixed.rtf / baseline.rtf - 1.0) <= 0.15

    def test_fewer_decoder_calls(self, report):
        """Should make one AMD call per block and at most one AR forward per utterance with K=1."""
        fixed = report.system("amd_fixed_8")
        assert fixed.ar_calls <= report.utterances
        assert fixed.amd_calls <= 4 * report.utterances


class TestQuality:
    """Tests for WER retention under the MAPSSWE test."""

    def test_mixed_30_8_not_significantly_worse(self, report):
        """Should not be significantly worse than CTC+AR greedy at alpha 0.05."""
        pair = next(p for p in report.pairwise if p.system == "amd_mixed_30_8")
        assert pair.alpha == 0.05
        assert not (pair.significant and pair.z > 0)


class TestSweep:
    """Tests for the lattice density and oracle WER sweep."""

    def test_rows(self, sweep_frame):
        """Should hold one row per system and beam size."""
        assert len(sweep_frame) == (1 + len(BLOCK_SIZES)) * K_MAX
        assert sorted(sweep_frame["K"].unique()) == list(range(1, K_MAX + 1))

    def test_amd_sparser_than_baseline(self, sweep_frame):
        """Should give AMD lattices no denser than the CTC+AR beam at equal K for blocks of 2 or more."""
        baseline = sweep_frame[sweep_frame["system"] == "ctc_ar_beam"].set_index("K")["density"]
        for block_size in BLOCK_SIZES[1:]:
            amd = sweep_frame[sweep_frame["system"] == f"amd_fixed_{block_size}"].set_index("K")["density"]
            assert (amd <= baseline + 1e-9).all(), f"amd_fixed_{block_size}"

    @pytest.mark.parametrize("column", ["density", "oracle_wer"])
    def test_saturation_non_increasing_in_block_size(self, sweep_frame, column):
        """Should not grow with the block size at the largest swept K."""
        saturated = sweep_frame[sweep_frame["K"] == K_MAX].set_index("system")[column]
        values = [saturated[f"amd_fixed_{b}"] for b in BLOCK_SIZES]
        assert all(later <= earlier + 1e-9 for earlier, later in zip(values, values[1:]))
